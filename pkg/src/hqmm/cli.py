"""Command-line front end.

Subcommands: validate, steady, wordprob, dist, entropy, hankel, convert,
cluster (kraus | dist | h3), scan-entropy, sample. Exit codes: 0 success,
1 model/validation failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import analysis, classical, cluster, modelfile, mps, quantum
from .classical import HmmModel
from .linalg import numerical_rank
from .mps import MpsModel
from .quantum import HqmmModel, VnModel


class UsageError(ValueError):
    """Bad command-line input (exit code 2)."""


def _fmt(x: float) -> str:
    return f"{x:.12f}"


def _fmt_entry(z: complex) -> str:
    z = complex(z)
    if abs(z.imag) < 1e-14:
        return f"{z.real:.12g}"
    return f"({z.real:.12g}{z.imag:+.12g}j)"


def _print_matrix(m: np.ndarray, out) -> None:
    cells = [[_fmt_entry(x) for x in row] for row in np.atleast_2d(m)]
    width = max(len(c) for row in cells for c in row)
    for row in cells:
        print("  " + "  ".join(c.rjust(width) for c in row), file=out)


def _load(path: str):
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e}") from None
    return modelfile.parse_model(text)


def _operational(model):
    """Reduce any model kind to one that supports word probabilities."""
    if isinstance(model, VnModel):
        return model.to_hqmm()
    if isinstance(model, MpsModel):
        return mps.mps_to_hqmm(model)
    return model


def _parse_initial(text: str | None, model):
    if text is None or text == "steady":
        return None
    if isinstance(model, HmmModel):
        d = model.n_states
        if text in ("mixed", "uniform"):
            return np.full(d, 1.0 / d)
        return _weights(text, d)
    d = model.dim
    if text in ("mixed", "uniform"):
        return np.eye(d, dtype=complex) / d
    return np.diag(_weights(text, d)).astype(complex)


def _weights(text: str, d: int) -> np.ndarray:
    try:
        w = np.array([float(p) for p in text.split(",")])
    except ValueError:
        raise UsageError(f"cannot parse initial distribution {text!r}") from None
    if w.shape != (d,) or w.min() < 0 or w.sum() <= 0:
        raise UsageError(
            f"initial distribution needs {d} nonnegative weights, got {text!r}"
        )
    return w / w.sum()


def _word_list(text: str, alphabet) -> list[tuple[str, ...]]:
    try:
        return [modelfile.parse_word(part, alphabet) for part in text.split(";")]
    except ValueError as e:
        raise UsageError(str(e)) from None


def _basis(args) -> cluster.MeasurementBasis:
    return cluster.MeasurementBasis(phi=args.phi, xi=args.xi)


def _print_distribution(dist: analysis.WordDistribution, alphabet, csv_path, out) -> None:
    items = sorted(dist.probabilities.items())
    if csv_path:
        with open(csv_path, "w", newline="\n") as f:
            f.write("word,probability\n")
            for word, p in items:
                f.write(f"{modelfile.format_word(word, alphabet)},{_fmt(p)}\n")
        print(f"wrote {csv_path}", file=out)
    else:
        for word, p in items:
            print(f"{modelfile.format_word(word, alphabet) or '(empty)'} {_fmt(p)}", file=out)


def cmd_validate(args, out, err) -> int:
    try:
        text = Path(args.file).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {args.file}: {e}") from None
    model = modelfile.parse_model(text, validate=False)
    if isinstance(model, HmmModel):
        problems = classical.validate_hmm(model)
    elif isinstance(model, HqmmModel):
        problems = quantum.validate_hqmm(model)
    elif isinstance(model, VnModel):
        problems = quantum.validate_vn(model)
    else:
        problems = mps.validate_mps(model)
    if problems:
        for p in problems:
            print(str(p), file=err)
        return 1
    print("ok", file=out)
    return 0


def cmd_steady(args, out, err) -> int:
    model = _operational(_load(args.file))
    if isinstance(model, HmmModel):
        pi, unique = classical.steady_state(model)
        print(f"steady state ({'unique' if unique else 'non-unique, canonical'}):", file=out)
        print(" ".join(_fmt(p) for p in pi), file=out)
    else:
        rho, unique = quantum.steady_state(model)
        print(f"steady state ({'unique' if unique else 'non-unique, canonical'}):", file=out)
        _print_matrix(rho, out)
    return 0


def cmd_wordprob(args, out, err) -> int:
    model = _operational(_load(args.file))
    try:
        word = modelfile.parse_word(args.word, model.alphabet)
    except ValueError as e:
        raise UsageError(str(e)) from None
    initial = _parse_initial(args.initial, model)
    if isinstance(model, HmmModel):
        p = classical.word_probability(model, word, initial)
    else:
        p = quantum.word_probability(model, word, initial)
    print(_fmt(p), file=out)
    return 0


def cmd_dist(args, out, err) -> int:
    model = _operational(_load(args.file))
    dist = analysis.enumerate_distribution(model, args.n)
    _print_distribution(dist, model.alphabet, args.csv, out)
    return 0


def cmd_entropy(args, out, err) -> int:
    model = _operational(_load(args.file))
    dist = analysis.enumerate_distribution(model, args.n)
    print(_fmt(analysis.block_entropy(dist)), file=out)
    return 0


def cmd_hankel(args, out, err) -> int:
    model = _operational(_load(args.file))
    rows = _word_list(args.rows, model.alphabet) if args.rows is not None else None
    cols = _word_list(args.cols, model.alphabet) if args.cols is not None else None
    block = analysis.hankel_block(model, rows, cols)
    _print_matrix(block.matrix, out)
    print(f"rank = {numerical_rank(block.matrix, tol=args.tol)}", file=out)
    return 0


def cmd_convert(args, out, err) -> int:
    model = _load(args.file)
    if not isinstance(model, HmmModel):
        raise ValueError("convert expects a classical (hmm) model file")
    if args.to == "hqmm-embed":
        converted = quantum.embed_classical(model)
    else:
        converted = quantum.pure_from_reversible(model)
    Path(args.output).write_text(modelfile.serialize_model(converted))
    print(f"wrote {args.output}", file=out)
    return 0


def cmd_cluster(args, out, err) -> int:
    basis = _basis(args)
    if args.cluster_cmd == "kraus":
        model = cluster.cluster_kraus(basis)
        for s in model.alphabet:
            print(f"K_{s}:", file=out)
            _print_matrix(model.operations[s][0], out)
        return 0
    if args.cluster_cmd == "dist":
        model = cluster.cluster_kraus(basis)
        dist = analysis.enumerate_distribution(model, args.n)
        _print_distribution(dist, model.alphabet, args.csv, out)
        return 0
    print(_fmt(cluster.h3_closed_form(basis)), file=out)
    return 0


def cmd_scan_entropy(args, out, err) -> int:
    phis = np.linspace(0.0, math.pi, args.phi_steps)
    xis = np.linspace(0.0, 2 * math.pi, args.xi_steps)
    with open(args.output, "w", newline="\n") as f:
        f.write("phi,xi,H3\n")
        for phi in phis:
            for xi in xis:
                h = cluster.h3_closed_form(cluster.MeasurementBasis(phi, xi))
                f.write(f"{phi:.12f},{xi:.12f},{_fmt(h)}\n")
    print(f"wrote {args.output}", file=out)
    return 0


def cmd_sample(args, out, err) -> int:
    model = _operational(_load(args.file))
    symbols = analysis.sample_trajectory(model, args.n, args.seed)
    print(modelfile.format_word(symbols, model.alphabet), file=out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hqmm",
        description="Stochastic and quantum finite-state generators: "
        "validation, word statistics, Hankel rank bounds, cluster-state readout.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a model file against its invariants")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("steady", help="stationary state of a model")
    p.add_argument("file")
    p.set_defaults(func=cmd_steady)

    p = sub.add_parser("wordprob", help="probability of one word")
    p.add_argument("file")
    p.add_argument("word", help="symbols, e.g. 010; comma-separated for multi-char alphabets")
    p.add_argument(
        "--initial",
        help="'steady' (default), 'mixed', or comma-separated basis weights",
    )
    p.set_defaults(func=cmd_wordprob)

    p = sub.add_parser("dist", help="complete length-n word distribution")
    p.add_argument("file")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--csv", help="write word,probability rows to this path")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("entropy", help="block entropy (bits) at length n")
    p.add_argument("file")
    p.add_argument("-n", type=int, required=True)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("hankel", help="Hankel block and its numerical rank")
    p.add_argument("file")
    p.add_argument(
        "--rows", help="semicolon-separated row words (empty segment = empty word)"
    )
    p.add_argument("--cols", help="semicolon-separated column words")
    p.add_argument("--tol", type=float, help="singular-value cutoff (default: automatic)")
    p.set_defaults(func=cmd_hankel)

    p = sub.add_parser("convert", help="convert a classical model to a quantum one")
    p.add_argument("file")
    p.add_argument("--to", choices=("hqmm-embed", "hqmm-pure"), required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("cluster", help="cluster-state readout model at (phi, xi)")
    p.add_argument("--phi", type=float, required=True)
    p.add_argument("--xi", type=float, required=True)
    csub = p.add_subparsers(dest="cluster_cmd", required=True)
    csub.add_parser("kraus", help="print the two Kraus operators")
    cd = csub.add_parser("dist", help="stationary length-n word distribution")
    cd.add_argument("-n", type=int, required=True)
    cd.add_argument("--csv")
    csub.add_parser("h3", help="closed-form length-3 block entropy")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("scan-entropy", help="CSV sweep of H3 over the (phi, xi) grid")
    p.add_argument("--phi-steps", type=int, required=True)
    p.add_argument("--xi-steps", type=int, required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_scan_entropy)

    p = sub.add_parser("sample", help="draw a reproducible symbol sequence")
    p.add_argument("file")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_sample)

    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        code = e.code if isinstance(e.code, int) else 2
        return code
    try:
        return args.func(args, out, err)
    except UsageError as e:
        print(f"error: {e}", file=err)
        return 2
    except (modelfile.ModelFileError, ValueError) as e:
        print(f"error: {e}", file=err)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())

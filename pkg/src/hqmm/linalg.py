"""Dense complex linear algebra shared by every model type.

Operator-sum (Kraus) application, superoperator transfer matrices, fixed
points of trace-preserving maps, and SVD-based numerical rank. Vectorization
is column-stacking throughout: ``vec(A X B) == kron(B.T, A) @ vec(X)``, so a
channel ``rho -> sum_i K_i rho K_i^dagger`` has transfer matrix
``sum_i kron(conj(K_i), K_i)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .config import TOL, Tolerances


@dataclass(frozen=True)
class Violation:
    """One failed validation check.

    ``check`` is a short machine-readable tag, ``symbol``/``index`` locate
    the offender where that makes sense (e.g. a transition matrix column).
    """

    check: str
    message: str
    symbol: str | None = None
    index: int | None = None

    def __str__(self) -> str:
        where = ""
        if self.symbol is not None:
            where += f" symbol={self.symbol!r}"
        if self.index is not None:
            where += f" index={self.index}"
        return f"[{self.check}]{where}: {self.message}"


def as_matrix(m, name: str = "matrix") -> np.ndarray:
    """Coerce to a 2-d complex ndarray and reject non-finite entries."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {a.shape}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def hermitize(m: np.ndarray) -> np.ndarray:
    """Symmetrize (M + M^dagger)/2; used to stop round-off drift on channel outputs."""
    return (m + m.conj().T) / 2.0


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product with an explicit dimension check."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ValueError(f"incompatible shapes for matmul: {a.shape} x {b.shape}")
    return a @ b


def apply_kraus(kraus: Sequence[np.ndarray], rho: np.ndarray) -> np.ndarray:
    """Apply the operator sum ``sum_i K_i rho K_i^dagger``.

    ``rho`` is assumed Hermitian (normalized or not); the output is
    symmetrized, which is exact for Hermitian input.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"state must be square, got shape {rho.shape}")
    d = rho.shape[0]
    try:
        ks = np.asarray(kraus, dtype=complex)
    except ValueError:
        raise ValueError("Kraus operators have mismatched shapes") from None
    if ks.ndim != 3 or ks.shape[1:] != (d, d):
        raise ValueError(
            f"Kraus operators of shape {ks.shape} do not match state dimension {d}"
        )
    out = (ks @ rho @ ks.conj().transpose(0, 2, 1)).sum(axis=0)
    return hermitize(out)


def vec(m: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization."""
    return np.asarray(m, dtype=complex).reshape(-1, order="F")


def unvec(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    d = math.isqrt(v.size)
    if d * d != v.size:
        raise ValueError(f"vector of length {v.size} is not a vectorized square matrix")
    return v.reshape((d, d), order="F")


def _iter_kraus(kraus) -> Iterable[np.ndarray]:
    if isinstance(kraus, Mapping):
        for ops in kraus.values():
            yield from ops
    else:
        yield from kraus


def transfer_matrix(kraus) -> np.ndarray:
    """Superoperator matrix of ``rho -> sum K rho K^dagger`` over all operators.

    ``kraus`` is either a mapping symbol -> list of Kraus matrices (the whole
    stochastic operation) or a flat sequence of matrices. Returns the d^2 x d^2
    matrix L with ``L @ vec(rho) == vec(sum K rho K^dagger)`` under
    column-stacking.
    """
    ops = [np.asarray(k, dtype=complex) for k in _iter_kraus(kraus)]
    if not ops:
        raise ValueError("at least one Kraus operator is required")
    d = ops[0].shape[0]
    for k in ops:
        if k.shape != (d, d):
            raise ValueError(f"mixed Kraus dimensions: {k.shape} vs ({d}, {d})")
    out = np.zeros((d * d, d * d), dtype=complex)
    for k in ops:
        out += np.kron(k.conj(), k)
    return out


def _fixed_space(matrix: np.ndarray, count: int) -> np.ndarray:
    """Orthonormal basis for the numerical null space of ``matrix - I``.

    Eigenvectors from a dense eigensolve can lose many digits on non-normal
    maps (the cluster channel's transfer matrix is defective), so the
    fixed-point directions are taken from the SVD instead, which is
    backward-stable; ``count`` comes from the eigenvalue multiplicity.
    """
    n = matrix.shape[0]
    _, _, vh = np.linalg.svd(matrix - np.eye(n))
    return vh[n - count :].conj().T


def fixed_point(
    transfer: np.ndarray, tols: Tolerances = TOL
) -> tuple[np.ndarray, bool]:
    """Stationary state of a trace-preserving map given its transfer matrix.

    Returns ``(rho_star, unique)``. Eigenvalues within ``tols.eigenvalue_one``
    of 1 span the fixed-point space; with a one-dimensional space the
    (trace-normalized, symmetrized) fixed vector is returned with
    ``unique=True``. A degenerate space is resolved canonically by the
    orthogonal projection of the maximally mixed state onto it, renormalized,
    with ``unique=False``.

    Raises ``ValueError`` when no eigenvalue lies within the window (the map
    is not trace-preserving).
    """
    transfer = as_matrix(transfer, "transfer matrix")
    n = transfer.shape[0]
    d = math.isqrt(n)
    if transfer.shape != (n, n) or d * d != n:
        raise ValueError(f"transfer matrix must be d^2 x d^2, got {transfer.shape}")
    evals = np.linalg.eigvals(transfer)
    count = int(np.count_nonzero(np.abs(evals - 1.0) <= tols.eigenvalue_one))
    if count == 0:
        raise ValueError(
            "no eigenvalue within "
            f"{tols.eigenvalue_one:g} of 1: map is not trace-preserving"
        )
    basis = _fixed_space(transfer, count)
    if count == 1:
        v = basis[:, 0]
    else:
        target = vec(np.eye(d, dtype=complex) / d)
        v = basis @ (basis.conj().T @ target)
    rho = unvec(v)
    tr = np.trace(rho)
    if abs(tr) < 1e-12:
        raise ValueError("fixed-point candidate has vanishing trace")
    rho = hermitize(rho / tr)
    rho = rho / np.trace(rho).real
    return rho, count == 1


def numerical_rank(m: np.ndarray, tol: float | None = None) -> int:
    """Number of singular values above ``tol``.

    ``tol=None`` uses ``max(rows, cols) * sigma_max * 2**-50``, a slightly
    loosened variant of the usual machine-precision cutoff.
    """
    m = np.asarray(m, dtype=complex)
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    if tol is None:
        tol = max(m.shape) * float(s[0]) * 2.0**-50
    return int(np.count_nonzero(s > tol))


def check_density_matrix(rho, tols: Tolerances = TOL) -> list[Violation]:
    """Hermiticity, unit trace, and positivity diagnostics for a state."""
    problems: list[Violation] = []
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        return [Violation("shape", f"state must be square, got shape {rho.shape}")]
    herm_dev = float(np.max(np.abs(rho - rho.conj().T)))
    if herm_dev > tols.hermitian:
        problems.append(
            Violation("hermitian", f"max |rho - rho^dagger| = {herm_dev:.3e}")
        )
    tr = np.trace(rho)
    if abs(tr - 1.0) > tols.trace_one:
        problems.append(Violation("trace", f"trace = {tr:.12g}, expected 1"))
    lo = float(np.linalg.eigvalsh(hermitize(rho)).min())
    if lo < -tols.psd:
        problems.append(Violation("positive", f"smallest eigenvalue = {lo:.3e}"))
    return problems


def check_prob_vector(p, tols: Tolerances = TOL) -> list[Violation]:
    problems: list[Violation] = []
    p = np.asarray(p, dtype=float)
    if p.ndim != 1:
        return [Violation("shape", f"probability vector must be 1-d, got {p.shape}")]
    if p.min(initial=0.0) < 0.0:
        i = int(np.argmin(p))
        problems.append(
            Violation("negative", f"entry {p[i]:.3e} < 0", index=i)
        )
    s = float(p.sum())
    if abs(s - 1.0) > tols.prob_sum:
        problems.append(Violation("normalization", f"entries sum to {s:.12g}"))
    return problems


def check_projector_set(
    projectors: Sequence[np.ndarray],
    labels: Sequence[str] | None = None,
    tols: Tolerances = TOL,
) -> list[Violation]:
    """Diagnostics for a complete set of mutually orthogonal projectors.

    Orthogonality is checked pairwise rather than inferred from the sum,
    since non-orthogonal decompositions can also add up to the identity.
    """
    problems: list[Violation] = []
    mats = [np.asarray(p, dtype=complex) for p in projectors]
    if not mats:
        return [Violation("projectors", "no projectors given")]
    d = mats[0].shape[0]
    names = list(labels) if labels is not None else [str(i) for i in range(len(mats))]
    for name, p in zip(names, mats):
        if p.shape != (d, d):
            problems.append(
                Violation("shape", f"projector is {p.shape}, expected ({d}, {d})", symbol=name)
            )
            return problems
        if np.max(np.abs(p - p.conj().T)) > tols.projector:
            problems.append(Violation("hermitian", "projector is not Hermitian", symbol=name))
        if np.max(np.abs(p @ p - p)) > tols.projector:
            problems.append(Violation("idempotent", "P @ P != P", symbol=name))
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            overlap = float(np.max(np.abs(mats[i] @ mats[j])))
            if overlap > tols.projector:
                problems.append(
                    Violation(
                        "orthogonal",
                        f"projectors {names[i]!r} and {names[j]!r} overlap "
                        f"(max |P_i P_j| = {overlap:.3e})",
                    )
                )
    total = sum(mats)
    dev = float(np.max(np.abs(total - np.eye(d))))
    if dev > tols.projector:
        problems.append(
            Violation("complete", f"projectors sum to identity within {dev:.3e} only")
        )
    return problems

"""Hidden quantum Markov models: symbol-keyed stochastic quantum operations.

A model is a d-level system together with one trace-non-increasing quantum
operation per symbol, the sum of which is trace-preserving. Each step emits
``s`` with probability ``tr[K_s rho]`` (operation applied in operator-sum
form) and conditions the state to ``K_s rho / P(s)``. Three constructors
connect to classical generators: projective-measurement generators
(projector-unitary products), the diagonal embedding of an arbitrary
generator, and the single-Kraus form available for reversible generators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .config import TOL, Tolerances
from . import classical
from .linalg import (
    Violation,
    as_matrix,
    check_density_matrix,
    check_projector_set,
    fixed_point,
    hermitize,
    transfer_matrix,
)


@dataclass(frozen=True)
class HqmmModel:
    """Alphabet plus per-symbol Kraus operator lists over a d-level system."""

    alphabet: tuple[str, ...]
    dim: int
    operations: dict[str, list[np.ndarray]]
    initial: np.ndarray | None = None
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        alphabet = tuple(str(s) for s in self.alphabet)
        object.__setattr__(self, "alphabet", alphabet)
        if len(set(alphabet)) != len(alphabet):
            raise ValueError("alphabet contains duplicate symbols")
        if set(self.operations) != set(alphabet):
            raise ValueError("operations must cover exactly the alphabet")
        d = self.dim
        ops = {}
        stacks = {}
        grams = {}
        for s in alphabet:
            mats = [as_matrix(k, f"Kraus operator for {s!r}") for k in self.operations[s]]
            for k in mats:
                if k.shape != (d, d):
                    raise ValueError(
                        f"Kraus operator for {s!r} has shape {k.shape}, expected ({d}, {d})"
                    )
            ops[s] = mats
            stack = np.stack(mats) if mats else np.zeros((0, d, d), dtype=complex)
            stacks[s] = stack
            grams[s] = np.einsum("kba,kbc->ac", stack.conj(), stack)
        object.__setattr__(self, "operations", ops)
        # private per-symbol (k, d, d) stacks and sum_i K^dag K grams
        object.__setattr__(self, "_stacks", stacks)
        object.__setattr__(self, "_grams", grams)
        if self.initial is not None:
            object.__setattr__(self, "initial", as_matrix(self.initial, "initial state"))

    def kraus(self, symbol: str) -> list[np.ndarray]:
        try:
            return self.operations[symbol]
        except KeyError:
            raise ValueError(f"unknown symbol {symbol!r}; alphabet is {self.alphabet}") from None

    def transfer(self) -> np.ndarray:
        """Transfer matrix of the forgetful channel ``sum_s K_s``."""
        return transfer_matrix(self.operations)


def apply_symbol(m: HqmmModel, symbol: str, rho: np.ndarray) -> np.ndarray:
    """Unnormalized operation output ``sum_i K_i(s) rho K_i(s)^dagger``."""
    if symbol not in m._stacks:
        raise ValueError(f"unknown symbol {symbol!r}; alphabet is {m.alphabet}")
    ks = m._stacks[symbol]
    if ks.shape[0] == 0:
        return np.zeros((m.dim, m.dim), dtype=complex)
    out = (ks @ rho @ ks.conj().transpose(0, 2, 1)).sum(axis=0)
    return hermitize(out)


def validate_hqmm(m: HqmmModel, tols: Tolerances = TOL) -> list[Violation]:
    """Completeness and per-symbol trace-non-increase diagnostics."""
    problems: list[Violation] = []
    d = m.dim
    total = np.zeros((d, d), dtype=complex)
    for s in m.alphabet:
        gram = m._grams[s]
        total = total + gram
        top = float(np.linalg.eigvalsh(hermitize(gram)).max())
        if top > 1.0 + tols.completeness:
            problems.append(
                Violation(
                    "trace-nonincreasing",
                    f"sum_i K_i^dagger K_i has eigenvalue {top:.12g} > 1",
                    symbol=s,
                )
            )
    dev = float(np.max(np.abs(total - np.eye(d))))
    if dev > tols.completeness:
        problems.append(
            Violation(
                "completeness",
                f"sum over all symbols of K^dagger K deviates from identity by {dev:.3e}",
            )
        )
    if m.initial is not None:
        for v in check_density_matrix(m.initial, tols):
            problems.append(Violation("initial-" + v.check, v.message))
    return problems


def steady_state(m: HqmmModel, tols: Tolerances = TOL) -> tuple[np.ndarray, bool]:
    """Stationary density matrix of the forgetful channel; see ``linalg.fixed_point``."""
    return fixed_point(m.transfer(), tols)


def resolve_initial(m: HqmmModel, initial=None) -> np.ndarray:
    """Explicit argument, else the model's initial state, else the steady state."""
    if initial is not None:
        rho = as_matrix(initial, "initial state")
        if rho.shape != (m.dim, m.dim):
            raise ValueError(f"initial state must be {m.dim} x {m.dim}")
        return rho
    if m.initial is not None:
        return m.initial
    return steady_state(m)[0]


def _checked_probability(p: float, what: str) -> float:
    if p < TOL.prob_floor:
        raise ValueError(f"{what} = {p:.3e} is negative beyond numerical noise")
    return min(max(p, 0.0), 1.0)


def symbol_probability(m: HqmmModel, symbol: str, rho) -> float:
    """``tr[K_s rho]``, clamped to [0, 1]."""
    sigma = apply_symbol(m, symbol, np.asarray(rho, dtype=complex))
    return _checked_probability(float(np.trace(sigma).real), f"P({symbol})")


def conditional_update(m: HqmmModel, symbol: str, rho) -> np.ndarray:
    """Post-measurement state ``K_s rho / tr[K_s rho]``.

    Raises ``ValueError`` when the outcome probability is at or below the
    impossibility threshold.
    """
    sigma = apply_symbol(m, symbol, np.asarray(rho, dtype=complex))
    p = float(np.trace(sigma).real)
    if p <= TOL.impossible:
        raise ValueError(
            f"cannot condition on symbol {symbol!r}: outcome probability {p:.3e}"
        )
    return hermitize(sigma / p)


def word_probability(m: HqmmModel, word: Iterable[str], initial=None) -> float:
    """``tr[K_{s_n} ... K_{s_1} rho]`` with ``s_1`` the earliest symbol."""
    sigma = resolve_initial(m, initial)
    for s in word:
        sigma = apply_symbol(m, s, sigma)
    return _checked_probability(float(np.trace(sigma).real), "word probability")


def coherence_check(m: HqmmModel, words: Iterable[Iterable[str]], initial=None) -> float:
    """Largest off-diagonal magnitude among conditional states along ``words``.

    Walks every nonempty prefix of every word from the resolved initial
    state, pruning branches whose probability falls below the impossibility
    threshold. Diagonally embedded classical models return 0 up to round-off
    from any starting state; models with genuinely quantum dynamics generally
    do not.
    """
    rho0 = resolve_initial(m, initial)
    if m.dim == 1:
        return 0.0
    off = ~np.eye(m.dim, dtype=bool)
    worst = 0.0
    for word in words:
        rho = rho0
        for s in word:
            sigma = apply_symbol(m, s, rho)
            p = float(np.trace(sigma).real)
            if p <= TOL.impossible:
                break
            rho = hermitize(sigma / p)
            worst = max(worst, float(np.max(np.abs(rho[off]))))
    return worst


def vn_generator(
    projectors: Sequence[np.ndarray],
    unitary: np.ndarray,
    alphabet: Sequence[str],
    initial=None,
    tols: Tolerances = TOL,
) -> HqmmModel:
    """Projective-measurement generator: one Kraus operator ``P_s U`` per symbol.

    The projectors must form a complete orthogonal set and ``U`` must be
    unitary; each failed check is named in the raised ``ValueError``.
    """
    mats = [as_matrix(p, "projector") for p in projectors]
    labels = [str(s) for s in alphabet]
    if len(mats) != len(labels):
        raise ValueError("need exactly one projector per symbol")
    problems = check_projector_set(mats, labels, tols)
    u = as_matrix(unitary, "unitary")
    d = mats[0].shape[0]
    if u.shape != (d, d):
        problems.append(Violation("shape", f"unitary is {u.shape}, expected ({d}, {d})"))
    else:
        dev = float(np.max(np.abs(u.conj().T @ u - np.eye(d))))
        if dev > tols.unitary:
            problems.append(
                Violation("unitary", f"U^dagger U deviates from identity by {dev:.3e}")
            )
    if problems:
        raise ValueError(
            "invalid projective generator: " + "; ".join(str(p) for p in problems)
        )
    ops = {s: [p @ u] for s, p in zip(labels, mats)}
    return HqmmModel(alphabet=tuple(labels), dim=d, operations=ops, initial=initial)


def embed_classical(m: classical.HmmModel, tols: Tolerances = TOL) -> HqmmModel:
    """Diagonal embedding of a stochastic generator.

    One Kraus operator ``sqrt(T_s[i, j]) |i><j|`` per nonzero transition
    entry; conditional states stay diagonal, so the embedded model carries no
    coherence while reproducing the classical word probabilities exactly.
    """
    problems = classical.validate_hmm(m, tols)
    if problems:
        raise ValueError("invalid HMM: " + "; ".join(str(p) for p in problems))
    d = m.n_states
    ops: dict[str, list[np.ndarray]] = {}
    for s in m.alphabet:
        t = m.transitions[s]
        kraus = []
        for i in range(d):
            for j in range(d):
                if t[i, j] > 0.0:
                    k = np.zeros((d, d), dtype=complex)
                    k[i, j] = np.sqrt(t[i, j])
                    kraus.append(k)
        ops[s] = kraus
    initial = np.diag(m.prior).astype(complex) if m.prior is not None else None
    return HqmmModel(alphabet=m.alphabet, dim=d, operations=ops, initial=initial)


def pure_from_reversible(m: classical.HmmModel, tols: Tolerances = TOL) -> HqmmModel:
    """Single-Kraus (pure-operation) model for a reversible generator.

    ``K_s = sum_j sqrt(P(s|j)) |I_j(s)><j|`` where ``I_j(s)`` is the unique
    target state; trace preservation follows from reversibility. Raises
    ``ValueError`` for non-reversible input.
    """
    rev, witness = classical.is_reversible(m, tols)
    if not rev:
        raise ValueError(
            f"model is not reversible: symbol {witness[0]!r} row {witness[1]} "
            "has multiple nonzero entries"
        )
    d = m.n_states
    ops: dict[str, list[np.ndarray]] = {}
    for s in m.alphabet:
        t = m.transitions[s]
        k = np.zeros((d, d), dtype=complex)
        for j in range(d):
            col = t[:, j]
            nz = np.nonzero(np.abs(col) > tols.zero_entry)[0]
            if nz.size:
                k[nz[0], j] = np.sqrt(col[nz[0]])
        ops[s] = [k]
    initial = np.diag(m.prior).astype(complex) if m.prior is not None else None
    return HqmmModel(alphabet=m.alphabet, dim=d, operations=ops, initial=initial)


@dataclass(frozen=True)
class VnModel:
    """Raw projector/unitary description of a projective-measurement generator.

    Kept as its own kind so that model files round-trip without collapsing to
    Kraus form; ``to_hqmm`` performs the conversion (and all checks).
    """

    alphabet: tuple[str, ...]
    projectors: dict[str, np.ndarray]
    unitary: np.ndarray
    initial: np.ndarray | None = None
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        alphabet = tuple(str(s) for s in self.alphabet)
        object.__setattr__(self, "alphabet", alphabet)
        if set(self.projectors) != set(alphabet):
            raise ValueError("projectors must cover exactly the alphabet")
        projs = {s: as_matrix(self.projectors[s], f"projector {s!r}") for s in alphabet}
        object.__setattr__(self, "projectors", projs)
        object.__setattr__(self, "unitary", as_matrix(self.unitary, "unitary"))
        if self.initial is not None:
            object.__setattr__(self, "initial", as_matrix(self.initial, "initial state"))

    @property
    def dim(self) -> int:
        return self.unitary.shape[0]

    def to_hqmm(self, tols: Tolerances = TOL) -> HqmmModel:
        return vn_generator(
            [self.projectors[s] for s in self.alphabet],
            self.unitary,
            self.alphabet,
            initial=self.initial,
            tols=tols,
        )


def validate_vn(m: VnModel, tols: Tolerances = TOL) -> list[Violation]:
    problems = check_projector_set(
        [m.projectors[s] for s in m.alphabet], list(m.alphabet), tols
    )
    u = m.unitary
    d = u.shape[0]
    if u.shape != (d, d) or any(p.shape != (d, d) for p in m.projectors.values()):
        problems.append(Violation("shape", "projector/unitary dimensions disagree"))
    else:
        dev = float(np.max(np.abs(u.conj().T @ u - np.eye(d))))
        if dev > tols.unitary:
            problems.append(
                Violation("unitary", f"U^dagger U deviates from identity by {dev:.3e}")
            )
    if m.initial is not None:
        for v in check_density_matrix(m.initial, tols):
            problems.append(Violation("initial-" + v.check, v.message))
    return problems

"""Stochastic finite-state generators (Mealy-form hidden Markov models).

A model is a set of per-symbol substochastic matrices ``T_s`` whose sum is
column-stochastic; column vectors and left multiplication throughout, i.e.
``T_s[i, j]`` is the probability of emitting ``s`` and moving to state ``i``
given state ``j``. The probability of a word is
``<1| T_{s_n} ... T_{s_1} |pi>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .config import TOL, Tolerances
from .linalg import Violation, _fixed_space, check_prob_vector


@dataclass(frozen=True)
class HmmModel:
    """Alphabet plus per-symbol transition matrices, column convention."""

    alphabet: tuple[str, ...]
    transitions: dict[str, np.ndarray]
    prior: np.ndarray | None = None
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        alphabet = tuple(str(s) for s in self.alphabet)
        object.__setattr__(self, "alphabet", alphabet)
        if len(set(alphabet)) != len(alphabet):
            raise ValueError("alphabet contains duplicate symbols")
        if set(self.transitions) != set(alphabet):
            raise ValueError("transition matrices must cover exactly the alphabet")
        mats = {}
        d = None
        for s in alphabet:
            t = np.asarray(self.transitions[s], dtype=float)
            if t.ndim != 2 or t.shape[0] != t.shape[1]:
                raise ValueError(f"transition matrix for {s!r} must be square")
            if d is None:
                d = t.shape[0]
            elif t.shape[0] != d:
                raise ValueError("transition matrices have mixed dimensions")
            mats[s] = t
        object.__setattr__(self, "transitions", mats)
        if self.prior is not None:
            p = np.asarray(self.prior, dtype=float)
            if p.shape != (d,):
                raise ValueError(f"prior must have length {d}, got shape {p.shape}")
            object.__setattr__(self, "prior", p)

    @property
    def n_states(self) -> int:
        return self.transitions[self.alphabet[0]].shape[0]

    def matrix(self, symbol: str) -> np.ndarray:
        try:
            return self.transitions[symbol]
        except KeyError:
            raise ValueError(f"unknown symbol {symbol!r}; alphabet is {self.alphabet}") from None

    def total(self) -> np.ndarray:
        """The forgetful transition matrix ``sum_s T_s``."""
        return sum(self.transitions[s] for s in self.alphabet)


def validate_hmm(m: HmmModel, tols: Tolerances = TOL) -> list[Violation]:
    """Entry bounds, column stochasticity of the sum, and prior normalization."""
    problems: list[Violation] = []
    for s in m.alphabet:
        t = m.transitions[s]
        if not np.all(np.isfinite(t)):
            problems.append(Violation("finite", "non-finite entries", symbol=s))
            continue
        if t.min() < -tols.stochastic or t.max() > 1.0 + tols.stochastic:
            i, j = np.unravel_index(
                np.argmax(np.abs(t - np.clip(t, 0.0, 1.0))), t.shape
            )
            problems.append(
                Violation(
                    "entry-range",
                    f"entry [{i},{j}] = {t[i, j]:.12g} outside [0, 1]",
                    symbol=s,
                )
            )
    col_sums = m.total().sum(axis=0)
    for j, cs in enumerate(col_sums):
        if abs(cs - 1.0) > tols.stochastic:
            problems.append(
                Violation(
                    "column-stochastic",
                    f"column {j} of sum_s T_s sums to {cs:.12g}",
                    index=j,
                )
            )
    if m.prior is not None:
        for v in check_prob_vector(m.prior, tols):
            problems.append(Violation("prior-" + v.check, v.message, index=v.index))
    return problems


def steady_state(m: HmmModel, tols: Tolerances = TOL) -> tuple[np.ndarray, bool]:
    """Stationary distribution of ``sum_s T_s``.

    Returns ``(pi_star, unique)``. A degenerate eigenvalue-1 space is resolved
    by projecting the uniform distribution onto it (renormalized) and flagged
    ``unique=False``.
    """
    t = m.total()
    d = t.shape[0]
    evals = np.linalg.eigvals(t)
    count = int(np.count_nonzero(np.abs(evals - 1.0) <= tols.eigenvalue_one))
    if count == 0:
        raise ValueError("no eigenvalue near 1; is the model stochastic?")
    basis = _fixed_space(t.astype(complex), count)
    if count == 1:
        v = basis[:, 0]
    else:
        v = basis @ (basis.conj().T @ np.full(d, 1.0 / d, dtype=complex))
    v = v / v.sum()
    pi = np.clip(v.real, 0.0, None)
    pi = pi / pi.sum()
    return pi, count == 1


def resolve_initial(m: HmmModel, initial=None) -> np.ndarray:
    """Explicit argument, else the model prior, else the steady state."""
    if initial is not None:
        p = np.asarray(initial, dtype=float)
        if p.shape != (m.n_states,):
            raise ValueError(f"initial distribution must have length {m.n_states}")
        return p
    if m.prior is not None:
        return m.prior
    return steady_state(m)[0]


def word_probability(
    m: HmmModel, word: Iterable[str], initial=None
) -> float:
    """``<1| T_{s_n} ... T_{s_1} |pi>`` with ``s_1`` the earliest symbol."""
    v = resolve_initial(m, initial)
    for s in word:
        v = m.matrix(s) @ v
    return min(float(v.sum()), 1.0)


def is_deterministic(
    m: HmmModel, tols: Tolerances = TOL
) -> tuple[bool, tuple[str, int] | None]:
    """Whether every column of every ``T_s`` has at most one nonzero entry.

    Entries of magnitude at most ``tols.zero_entry`` count as zero. The
    witness names the first offending ``(symbol, column)``.
    """
    for s in m.alphabet:
        t = m.transitions[s]
        counts = (np.abs(t) > tols.zero_entry).sum(axis=0)
        bad = np.nonzero(counts > 1)[0]
        if bad.size:
            return False, (s, int(bad[0]))
    return True, None


def is_reversible(
    m: HmmModel, tols: Tolerances = TOL
) -> tuple[bool, tuple[str, int] | None]:
    """Whether a deterministic generator also has at most one nonzero per row.

    Raises ``ValueError`` for non-deterministic input; the witness names the
    first offending ``(symbol, row)``.
    """
    det, witness = is_deterministic(m, tols)
    if not det:
        raise ValueError(
            f"reversibility is only defined for deterministic generators; "
            f"symbol {witness[0]!r} column {witness[1]} has multiple nonzero entries"
        )
    for s in m.alphabet:
        t = m.transitions[s]
        counts = (np.abs(t) > tols.zero_entry).sum(axis=1)
        bad = np.nonzero(counts > 1)[0]
        if bad.size:
            return False, (s, int(bad[0]))
    return True, None

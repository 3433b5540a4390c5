"""Process-language analytics over classical and quantum models.

Exhaustive word distributions (prefix-tree evaluation), block entropy,
finite Hankel blocks with their rank-based lower bound on hidden-state
counts, and reproducible trajectory sampling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import classical, quantum
from .classical import HmmModel
from .linalg import numerical_rank
from .quantum import HqmmModel

ENUMERATION_BUDGET = 10**7

Word = tuple[str, ...]


def _resolve(model, initial):
    if isinstance(model, HmmModel):
        return classical.resolve_initial(model, initial)
    if isinstance(model, HqmmModel):
        return quantum.resolve_initial(model, initial)
    raise TypeError(f"unsupported model type {type(model).__name__}")


def _step(model, state, symbol):
    if isinstance(model, HmmModel):
        return model.matrix(symbol) @ state
    return quantum.apply_symbol(model, symbol, state)


def _mass(model, state) -> float:
    if isinstance(model, HmmModel):
        return float(state.sum())
    return float(np.trace(state).real)


@dataclass(frozen=True)
class WordDistribution:
    """Complete probability table over all words of one length."""

    length: int
    alphabet: tuple[str, ...]
    probabilities: dict[Word, float]

    def total(self) -> float:
        return float(sum(self.probabilities.values()))

    def marginalize_last(self) -> "WordDistribution":
        """Sum out the final symbol, giving the length-(n-1) table."""
        if self.length == 0:
            raise ValueError("cannot marginalize the empty-word distribution")
        probs: dict[Word, float] = {}
        for word, p in self.probabilities.items():
            probs[word[:-1]] = probs.get(word[:-1], 0.0) + p
        return WordDistribution(self.length - 1, self.alphabet, probs)


def enumerate_distribution(model, n: int, initial=None) -> WordDistribution:
    """All length-n word probabilities by depth-first sharing of prefixes.

    Each node of the prefix tree carries the unnormalized conditional state,
    so the whole table costs one channel application per tree node instead of
    n per word. Refuses alphabets/lengths beyond ``ENUMERATION_BUDGET`` words.
    """
    alphabet = model.alphabet
    if len(alphabet) ** n > ENUMERATION_BUDGET:
        raise ValueError(
            f"enumeration of {len(alphabet)}^{n} words exceeds the "
            f"{ENUMERATION_BUDGET} budget"
        )
    probs: dict[Word, float] = {}

    def walk(state, prefix: Word):
        if len(prefix) == n:
            probs[prefix] = min(max(_mass(model, state), 0.0), 1.0)
            return
        for s in alphabet:
            walk(_step(model, state, s), prefix + (s,))

    walk(_resolve(model, initial), ())
    return WordDistribution(length=n, alphabet=tuple(alphabet), probabilities=probs)


def block_entropy(dist: WordDistribution) -> float:
    """Shannon entropy in bits, with the 0 log 0 = 0 convention."""
    h = 0.0
    for p in dist.probabilities.values():
        if p > 0.0:
            h -= p * math.log2(p)
    return h


@dataclass(frozen=True)
class HankelBlock:
    """Finite sub-block of the word-probability Hankel matrix.

    Entry ``(u, v)`` is ``P(v . u)``: the column word happens first in time,
    the row word second, matching the factorization
    ``H[u, v] = <1| T_u T_v |pi>``.
    """

    row_words: tuple[Word, ...]
    col_words: tuple[Word, ...]
    matrix: np.ndarray


def _as_words(words, alphabet) -> tuple[Word, ...]:
    out = []
    for w in words:
        word = tuple(w)
        for s in word:
            if s not in alphabet:
                raise ValueError(f"unknown symbol {s!r}; alphabet is {tuple(alphabet)}")
        out.append(word)
    return tuple(out)


def hankel_block(
    model,
    row_words: Iterable[Iterable[str]] | None = None,
    col_words: Iterable[Iterable[str]] | None = None,
) -> HankelBlock:
    """Word-probability block; defaults to {empty word} union single symbols."""
    alphabet = tuple(model.alphabet)
    default = ((),) + tuple((s,) for s in alphabet)
    rows = _as_words(row_words, alphabet) if row_words is not None else default
    cols = _as_words(col_words, alphabet) if col_words is not None else default
    init = _resolve(model, None)
    if isinstance(model, HmmModel):
        prob = lambda w: classical.word_probability(model, w, initial=init)
    else:
        prob = lambda w: quantum.word_probability(model, w, initial=init)
    h = np.zeros((len(rows), len(cols)))
    for i, u in enumerate(rows):
        for j, v in enumerate(cols):
            h[i, j] = prob(v + u)
    return HankelBlock(row_words=rows, col_words=cols, matrix=h)


def state_count_lower_bound(
    model,
    row_words: Iterable[Iterable[str]] | None = None,
    col_words: Iterable[Iterable[str]] | None = None,
    tol: float | None = None,
) -> int:
    """Numerical rank of the Hankel block: no classical generator of the
    process can have fewer internal states."""
    return numerical_rank(hankel_block(model, row_words, col_words).matrix, tol)


class Xorshift64Star:
    """Marsaglia xorshift64* generator.

    Shift triple (12, 25, 27) with multiplier 2685821657736338717; uniform
    doubles take the top 53 bits of the output word. A zero seed (the one
    state the shift register cannot leave) is replaced by a fixed odd
    constant, so every seed is usable and every sequence is reproducible
    across implementations.
    """

    _MASK = (1 << 64) - 1
    _MULT = 2685821657736338717
    _ZERO_SEED = 0x9E3779B97F4A7C15

    def __init__(self, seed: int):
        self.state = (int(seed) & self._MASK) or self._ZERO_SEED

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & self._MASK
        x ^= x >> 27
        self.state = x
        return (x * self._MULT) & self._MASK

    def next_float(self) -> float:
        """Uniform in [0, 1) with 53-bit resolution."""
        return (self.next_u64() >> 11) * 2.0**-53


def _draw(masses: Sequence[float], rng: Xorshift64Star) -> int:
    """Index drawn from clamped, renormalized per-step masses."""
    total = 0.0
    for w in masses:
        if w > 0.0:
            total += w
    if total <= 0.0:
        raise ValueError("all next-symbol probabilities vanished while sampling")
    u = rng.next_float() * total
    acc = 0.0
    choice = -1
    for k, w in enumerate(masses):
        if w > 0.0:
            acc += w
            choice = k
            if u < acc:
                break
    return choice


_STATE_CACHE_CAP = 1 << 16


def _sample_loop(length, rng, alphabet, key0, masses_of, next_of) -> list[str]:
    """Shared sampling loop over hashable state keys.

    The per-step masses and conditional successors are pure functions of the
    state, so they are memoized on the exact state value; models whose
    conditional states form a finite set (the usual case for the bundled
    models) then run in amortized constant time per step. The cache is
    size-capped; overflow just recomputes.
    """
    cache: dict = {}
    key = key0
    out: list[str] = []
    for _ in range(length):
        entry = cache.get(key)
        if entry is None:
            entry = (masses_of(key), {})
            if len(cache) < _STATE_CACHE_CAP:
                cache[key] = entry
        masses, nexts = entry
        k = _draw(masses, rng)
        nxt = nexts.get(k)
        if nxt is None:
            nxt = next_of(key, k, masses[k])
            nexts[k] = nxt
        key = nxt
        out.append(alphabet[k])
    return out


def _sample_hmm(model: HmmModel, length, rng, v0, alphabet) -> list[str]:
    # plain-Python state tuples: the matrices are tiny and call overhead
    # dominates numpy at this size
    mats = [[list(map(float, row)) for row in model.transitions[s]] for s in alphabet]
    colsums = [[sum(t[i][j] for i in range(len(t))) for j in range(len(t))] for t in mats]
    d = model.n_states
    rng_d = range(d)

    def masses_of(v):
        return [sum(cs[j] * v[j] for j in rng_d) for cs in colsums]

    def next_of(v, k, mass):
        t = mats[k]
        return tuple(sum(t[i][j] * v[j] for j in rng_d) / mass for i in rng_d)

    return _sample_loop(
        length, rng, alphabet, tuple(float(x) for x in v0), masses_of, next_of
    )


def _sample_hqmm2(model: HqmmModel, length, rng, rho0, alphabet) -> list[str]:
    # unrolled qubit case; the cluster models have aperiodic conditional
    # orbits, so the miss path is the hot path
    ops = [
        [
            (complex(k[0, 0]), complex(k[0, 1]), complex(k[1, 0]), complex(k[1, 1]))
            for k in model._stacks[s]
        ]
        for s in alphabet
    ]
    conj_ops = [[tuple(x.conjugate() for x in k) for k in sym] for sym in ops]
    grams = [
        (complex(g[0, 0]), complex(g[0, 1]), complex(g[1, 0]), complex(g[1, 1]))
        for g in (model._grams[s] for s in alphabet)
    ]

    def masses_of(key):
        r00, r01, r10, r11 = key
        return [
            (g00 * r00 + g01 * r10 + g10 * r01 + g11 * r11).real
            for g00, g01, g10, g11 in grams
        ]

    def next_of(key, k, mass):
        r00, r01, r10, r11 = key
        s00 = s01 = s10 = s11 = 0j
        for (k00, k01, k10, k11), (c00, c01, c10, c11) in zip(ops[k], conj_ops[k]):
            a00 = k00 * r00 + k01 * r10
            a01 = k00 * r01 + k01 * r11
            a10 = k10 * r00 + k11 * r10
            a11 = k10 * r01 + k11 * r11
            s00 += a00 * c00 + a01 * c01
            s01 += a00 * c10 + a01 * c11
            s10 += a10 * c00 + a11 * c01
            s11 += a10 * c10 + a11 * c11
        scale = 2.0 * mass
        return (
            (s00 + s00.conjugate()) / scale,
            (s01 + s10.conjugate()) / scale,
            (s10 + s01.conjugate()) / scale,
            (s11 + s11.conjugate()) / scale,
        )

    key0 = tuple(complex(x) for x in np.asarray(rho0, dtype=complex).ravel())
    return _sample_loop(length, rng, alphabet, key0, masses_of, next_of)


def _sample_hqmm(model: HqmmModel, length, rng, rho0, alphabet) -> list[str]:
    # state key: row-major tuple of the density-matrix entries
    d = model.dim
    kraus = [
        [[list(map(complex, row)) for row in k] for k in model.operations[s]]
        for s in alphabet
    ]
    grams = [[list(map(complex, row)) for row in model._grams[s]] for s in alphabet]
    rng_d = range(d)

    def masses_of(key):
        return [
            sum(g[a][b] * key[b * d + a] for a in rng_d for b in rng_d).real
            for g in grams
        ]

    def next_of(key, k, mass):
        rho = [[key[a * d + b] for b in rng_d] for a in rng_d]
        sigma = [[0j] * d for _ in rng_d]
        for op in kraus[k]:
            krho = [
                [sum(op[a][c] * rho[c][b] for c in rng_d) for b in rng_d] for a in rng_d
            ]
            for a in rng_d:
                row = sigma[a]
                for b in rng_d:
                    row[b] += sum(krho[a][c] * op[b][c].conjugate() for c in rng_d)
        scale = 2.0 * mass
        return tuple(
            (sigma[a][b] + sigma[b][a].conjugate()) / scale for a in rng_d for b in rng_d
        )

    key0 = tuple(complex(x) for x in np.asarray(rho0, dtype=complex).ravel())
    return _sample_loop(length, rng, alphabet, key0, masses_of, next_of)


def sample_trajectory(
    model, length: int, seed: int, initial=None
) -> list[str]:
    """Draw a symbol sequence by iterated conditional update.

    Deterministic given (model, length, seed); the generator is the
    documented xorshift64* shift register, so sequences are reproducible.
    Per-step probabilities are clamped at zero and renormalized before
    drawing, so round-off noise cannot produce invalid draws.
    """
    alphabet = tuple(model.alphabet)
    rng = Xorshift64Star(seed)
    state = _resolve(model, initial)
    if isinstance(model, HmmModel):
        return _sample_hmm(model, length, rng, state, alphabet)
    if model.dim == 2:
        return _sample_hqmm2(model, length, rng, state, alphabet)
    return _sample_hqmm(model, length, rng, state, alphabet)

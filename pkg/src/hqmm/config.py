"""Centralized numerical tolerances.

Every threshold used by the validators and solvers lives in one frozen
record so that the defaults are auditable and can be overridden wholesale
(pass a custom ``Tolerances`` where a function accepts one).
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    """Default numerical thresholds shared across the package."""

    hermitian: float = 1e-10        # max-norm deviation from M == M^dagger
    trace_one: float = 1e-10        # |tr(rho) - 1| for density matrices
    psd: float = 1e-10              # allowed magnitude of negative eigenvalues
    prob_sum: float = 1e-12         # probability-vector normalization
    stochastic: float = 1e-12       # HMM column sums and entry bounds
    completeness: float = 1e-10     # Kraus completeness / isometry condition
    unitary: float = 1e-10          # U^dagger U == I
    projector: float = 1e-10        # Hermitian / idempotent / orthogonal checks
    eigenvalue_one: float = 1e-8    # window for detecting fixed-point eigenvalues
    zero_entry: float = 1e-14       # zero threshold for determinism checks
    prob_floor: float = -1e-8       # hard error below this for computed probabilities
    impossible: float = 1e-14       # outcomes at/below this probability cannot be conditioned on


TOL = Tolerances()

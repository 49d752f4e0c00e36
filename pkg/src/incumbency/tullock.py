"""Tullock contest over how many signals each primary candidate sends.

Candidate i wins the primary with probability q_i^r / sum_j q_j^r and pays
(A / 2) q_i^2 for sending q_i signals. The prize is 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ModelError


@dataclass(frozen=True)
class TullockParams:
    N: int
    r: float = 1.0
    A: float = 1.0

    def __post_init__(self) -> None:
        if isinstance(self.N, bool) or int(self.N) != self.N:
            raise ModelError(f"N must be an integer, got {self.N!r}")
        object.__setattr__(self, "N", int(self.N))
        if self.N < 2:
            raise ModelError(f"a contest needs N >= 2 candidates, got {self.N}")
        if not 0.0 < self.r <= 1.0:
            raise ModelError(f"contest exponent r must lie in (0, 1], got {self.r}")
        if not self.A > 0.0 or not math.isfinite(self.A):
            raise ModelError(f"cost coefficient A must be positive and finite, got {self.A}")


def tullock_equilibrium(tp: TullockParams) -> float:
    """Closed-form symmetric signal count ``sqrt(r (N - 1) / (A N))``.

    This is the published expression, increasing in ``N``. It is not the
    root of :func:`tullock_foc_residual`; see :func:`tullock_foc_root`.
    """
    return math.sqrt(tp.r * (tp.N - 1) / (tp.A * tp.N))


def tullock_foc_root(tp: TullockParams) -> float:
    """Symmetric signal count at which marginal benefit equals marginal cost.

    At a symmetric profile the marginal benefit is ``r (N - 1) / (N^2 q)``,
    giving ``q^2 = r (N - 1) / (A N^2)``.
    """
    return math.sqrt(tp.r * (tp.N - 1) / tp.A) / tp.N


def win_probability(tp: TullockParams, qi, q_others: float):
    own = np.power(qi, tp.r)
    return own / (own + (tp.N - 1) * q_others**tp.r)


def tullock_payoff(tp: TullockParams, qi, q_others: float):
    """Expected prize minus signalling cost when all rivals send ``q_others``."""
    return win_probability(tp, qi, q_others) - 0.5 * tp.A * np.square(qi)


def tullock_foc_residual(tp: TullockParams, qi: float, q_others: float) -> float:
    """Marginal benefit minus marginal cost of one more signal for candidate i."""
    if not (qi > 0 and q_others > 0):
        raise ModelError("signal counts must be positive")
    rivals = (tp.N - 1) * q_others**tp.r
    total = qi**tp.r + rivals
    benefit = tp.r * qi ** (tp.r - 1.0) * rivals / total**2
    return benefit - tp.A * qi


def best_response_grid(tp: TullockParams, q_others: float, upper: float, n: int = 100_000) -> tuple[float, float]:
    """Brute-force best response over ``n`` evenly spaced points in (0, upper].

    Returns the maximising signal count and the grid step.
    """
    grid = np.linspace(upper / n, upper, n)
    payoff = tullock_payoff(tp, grid, q_others)
    return float(grid[int(np.argmax(payoff))]), upper / n

"""Incumbent vote share as a function of the common shock.

For a voter at ``x`` the difference between the posterior means of the
incumbent and the general-election challenger is normal with mean
``w * q`` and a segment-dependent standard deviation. The voter backs the
incumbent iff that difference beats ``t(1 - 2x) - eps - (1 - w) q``, so
the incumbent's share on each half of the line is

    integral of 1 - G((t(1 - 2x) - eps - q) / sd)  dx

with ``G`` the standard normal CDF. Both halves are integrated with
fixed-order Gauss-Legendre rules and a node-doubling convergence check.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import ndtr

from .errors import ModelError, QuadratureError
from .model import ModelParams, two_signal_weights


class VarianceMode(str, enum.Enum):
    """How to treat the two signals a left-wing voter holds on the primary winner.

    ``PAPER_FAITHFUL`` treats the primary and general signals as
    independent. ``COVARIANCE_CORRECTED`` keeps the covariance ``sigma_Q2``
    they share through the candidate's quality, which is what a simulated
    electorate produces.
    """

    PAPER_FAITHFUL = "paper_faithful"
    COVARIANCE_CORRECTED = "covariance_corrected"


@dataclass(frozen=True)
class QuadratureSpec:
    nodes: int = 64
    tol: float = 1e-10
    max_nodes: int = 1024

    def __post_init__(self) -> None:
        if self.nodes < 2:
            raise ModelError(f"need at least 2 quadrature nodes, got {self.nodes}")
        if self.tol <= 0:
            raise ModelError(f"quadrature tolerance must be > 0, got {self.tol}")
        if self.max_nodes < 2 * self.nodes:
            raise ModelError("max_nodes must allow at least one doubling")


DEFAULT_QUADRATURE = QuadratureSpec()


@dataclass(frozen=True)
class SegmentShare:
    left_share: float
    right_share: float

    @property
    def total_share(self) -> float:
        return self.left_share + self.right_share


def _check_scenario(n_challengers: int) -> None:
    if n_challengers not in (0, 1, 2):
        raise ModelError(f"n_challengers must be 0, 1 or 2, got {n_challengers!r}")


def _incumbent_var(params: ModelParams) -> float:
    return params.sigma_Q2**2 / (params.sigma_Q2 + params.general_var)


def diff_std_one_challenger(params: ModelParams, segment: str) -> float:
    """Std of the posterior-mean difference when the challenger had no primary."""
    inc = _incumbent_var(params)
    if segment == "left":
        return math.sqrt(2.0 * inc)
    if segment == "right":
        crossover = params.sigma_Q2**2 / (params.sigma_Q2 + params.crossover_var)
        return math.sqrt(inc + crossover)
    raise ModelError(f"segment must be 'left' or 'right', got {segment!r}")


def challenger_two_signal_var(params: ModelParams, mode: VarianceMode) -> float:
    """Variance of a left-wing voter's posterior mean of the primary winner."""
    w = two_signal_weights(params)
    a, b = w.w_general, w.w_primary
    var = a * a * (params.sigma_Q2 + params.general_var) + b * b * (params.sigma_Q2 + params.sigma_s2)
    if VarianceMode(mode) is VarianceMode.COVARIANCE_CORRECTED:
        var += 2.0 * a * b * params.sigma_Q2
    return var


def diff_std_two_challenger_left(params: ModelParams, mode: VarianceMode = VarianceMode.PAPER_FAITHFUL) -> float:
    return math.sqrt(_incumbent_var(params) + challenger_two_signal_var(params, mode))


def segment_stds(params: ModelParams, n_challengers: int, mode: VarianceMode) -> tuple[float, float]:
    """(left, right) difference standard deviations for a scenario."""
    _check_scenario(n_challengers)
    if n_challengers == 0:
        raise ModelError("no general-election challenger in a zero-challenger scenario")
    right = diff_std_one_challenger(params, "right")
    if n_challengers == 1:
        left = diff_std_one_challenger(params, "left")
    else:
        left = diff_std_two_challenger_left(params, mode)
    return left, right


@lru_cache(maxsize=32)
def _legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


def _gl_integral(f, a: float, b: float, n: int) -> float:
    x, w = _legendre(n)
    half = 0.5 * (b - a)
    return float(half * np.dot(w, f(half * x + 0.5 * (a + b))))


def _segment_losing(t: float, offset: float, sd: float, a: float, b: float, quad: QuadratureSpec) -> float:
    """Integral over [a, b] of G((t(1 - 2x) + offset) / sd)."""

    def integrand(x):
        return ndtr((t * (1.0 - 2.0 * x) + offset) / sd)

    # The integrand is monotone in x, so the endpoints bound it.
    ends = integrand(np.array([a, b]))
    for const in (0.0, 1.0):
        if np.all(np.abs(ends - const) <= 1e-16):
            return const * (b - a)

    n = quad.nodes
    coarse = _gl_integral(integrand, a, b, n)
    while True:
        fine = _gl_integral(integrand, a, b, 2 * n)
        if abs(fine - coarse) <= quad.tol:
            return fine
        if 4 * n > quad.max_nodes:
            raise QuadratureError(
                "Gauss-Legendre rule did not converge",
                nodes=2 * n,
                change=abs(fine - coarse),
                tol=quad.tol,
                interval=(a, b),
                sd=sd,
            )
        n, coarse = 2 * n, fine


def losing_share_segments(
    params: ModelParams,
    n_challengers: int,
    eps: float,
    mode: VarianceMode = VarianceMode.PAPER_FAITHFUL,
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
) -> tuple[float, float]:
    """Challenger's share on the (left, right) halves of the line at shock ``eps``."""
    if not math.isfinite(eps):
        raise ModelError(f"eps must be finite, got {eps!r}")
    sd_left, sd_right = segment_stds(params, n_challengers, mode)
    offset = -eps - params.q
    left = _segment_losing(params.t, offset, sd_left, 0.0, 0.5, quad)
    right = _segment_losing(params.t, offset, sd_right, 0.5, 1.0, quad)
    return left, right


def losing_share(
    params: ModelParams,
    n_challengers: int,
    eps: float,
    mode: VarianceMode = VarianceMode.PAPER_FAITHFUL,
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """Share of the vote going to the challenger; the threshold sets this to 1/2."""
    _check_scenario(n_challengers)
    if n_challengers == 0:
        return 0.0
    return sum(losing_share_segments(params, n_challengers, eps, mode, quad))


def incumbent_vote_share(
    params: ModelParams,
    n_challengers: int,
    eps: float,
    mode: VarianceMode = VarianceMode.PAPER_FAITHFUL,
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
) -> SegmentShare:
    """Incumbent's vote share on each half of the line for a given shock.

    With no challenger the incumbent takes every vote. Otherwise each half
    contributes at most 1/2, and the total is strictly increasing in ``eps``.

    Raises:
        QuadratureError: If node doubling cannot meet ``quad.tol``.
    """
    _check_scenario(n_challengers)
    if n_challengers == 0:
        return SegmentShare(0.5, 0.5)
    left, right = losing_share_segments(params, n_challengers, eps, mode, quad)
    return SegmentShare(0.5 - left, 0.5 - right)

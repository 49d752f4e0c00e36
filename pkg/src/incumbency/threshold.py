"""Winning thresholds for the common shock and the one-vs-two challenger test.

The incumbent wins iff the shock exceeds a threshold ``eps_star`` at which
the challenger's vote share is exactly 1/2. The challenger's share is
strictly decreasing in the shock, so a bracketed bisection finds the
unique root.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ModelError, SolverError
from .model import ModelParams, gaussian_cdf
from .voteshare import (
    DEFAULT_QUADRATURE,
    QuadratureSpec,
    VarianceMode,
    challenger_two_signal_var,
    losing_share,
    segment_stds,
)


@dataclass(frozen=True)
class SolverSpec:
    """Bisection settings.

    Attributes:
        tol: Largest accepted |challenger share - 1/2| at the returned root.
        xtol: Bracket width at which bisection stops.
        max_iter: Iteration cap for the bisection phase.
        half_width: Initial bracket half-width; ``None`` picks ``|q| + t + 5 sd``.
        expansion: Factor applied to the half-width while no sign change is found.
        max_scale: Give up once the half-width exceeds this many scale units.
    """

    tol: float = 1e-10
    xtol: float = 1e-12
    max_iter: int = 200
    half_width: float | None = None
    expansion: float = 2.0
    max_scale: float = 1e3

    def __post_init__(self) -> None:
        if self.tol <= 0 or self.xtol <= 0:
            raise ModelError("solver tolerances must be > 0")
        if self.expansion <= 1:
            raise ModelError(f"bracket expansion factor must exceed 1, got {self.expansion}")
        if self.max_iter < 1:
            raise ModelError("max_iter must be >= 1")
        if self.half_width is not None and self.half_width <= 0:
            raise ModelError("half_width must be > 0")


DEFAULT_SOLVER = SolverSpec()


@dataclass(frozen=True)
class ThresholdResult:
    eps_star: float
    win_prob_incumbent: float
    iterations: int
    residual: float
    bracket: tuple[float, float]

    @property
    def error_bound(self) -> float:
        return self.bracket[1] - self.bracket[0]


def win_prob(eps_star: float, sigma_eps: float) -> float:
    """Probability that a N(0, sigma_eps^2) shock exceeds ``eps_star``."""
    if not sigma_eps > 0:
        raise ModelError(f"sigma_eps must be > 0, got {sigma_eps}")
    if eps_star == math.inf:
        return 0.0
    if eps_star == -math.inf:
        return 1.0
    return gaussian_cdf(-eps_star / sigma_eps)


def solve_threshold(
    params: ModelParams,
    n_challengers: int,
    mode: VarianceMode = VarianceMode.PAPER_FAITHFUL,
    spec: SolverSpec = DEFAULT_SOLVER,
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
) -> ThresholdResult:
    """Find the shock at which the incumbent takes exactly half the vote.

    Raises:
        ModelError: For a scenario without a challenger.
        SolverError: If no sign change is found or the residual tolerance is missed.
    """
    if n_challengers not in (1, 2):
        raise ModelError(f"a threshold needs 1 or 2 challengers, got {n_challengers!r}")

    def residual(eps: float) -> float:
        return losing_share(params, n_challengers, eps, mode, quad) - 0.5

    if params.t == 0.0 and params.q == 0.0:
        # Both integrands reduce to G(-eps / sd): the root is 0 whatever the sds.
        return ThresholdResult(0.0, win_prob(0.0, params.sigma_eps), 0, residual(0.0), (0.0, 0.0))

    sd_max = max(segment_stds(params, n_challengers, mode))
    scale = abs(params.q) + params.t + sd_max
    h = spec.half_width if spec.half_width is not None else abs(params.q) + params.t + 5.0 * sd_max
    lo, hi = -h, h
    r_lo, r_hi = residual(lo), residual(hi)
    while r_lo <= 0.0 or r_hi >= 0.0:
        if r_lo == 0.0:
            return ThresholdResult(lo, win_prob(lo, params.sigma_eps), 0, 0.0, (lo, lo))
        if r_hi == 0.0:
            return ThresholdResult(hi, win_prob(hi, params.sigma_eps), 0, 0.0, (hi, hi))
        h *= spec.expansion
        if h > spec.max_scale * scale:
            raise SolverError(
                "no sign change in the threshold bracket",
                bracket=(lo, hi),
                residuals=(r_lo, r_hi),
                n_challengers=n_challengers,
            )
        lo, hi = -h, h
        r_lo, r_hi = residual(lo), residual(hi)

    mid, r_mid = lo, r_lo
    iterations = 0
    for iterations in range(1, spec.max_iter + 1):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        r_mid = residual(mid)
        if r_mid > 0.0:
            lo = mid
        elif r_mid < 0.0:
            hi = mid
        else:
            lo = hi = mid
            break
        if hi - lo <= spec.xtol and abs(r_mid) <= spec.tol:
            break
    if abs(r_mid) > spec.tol:
        raise SolverError(
            "bisection stopped above the residual tolerance",
            eps=mid,
            residual=r_mid,
            iterations=iterations,
            bracket=(lo, hi),
        )
    return ThresholdResult(mid, win_prob(mid, params.sigma_eps), iterations, r_mid, (lo, hi))


def two_challenger_bound(beta: float) -> float:
    """Critical noise ratio sigma_s2 / sigma_Q2 above which two challengers help the incumbent.

    Equals ``(sqrt((beta - 1)^2 + 8) - (beta - 1)) / (2 beta)``, strictly
    decreasing in ``beta``.
    """
    if not beta > 0:
        raise ModelError(f"beta must be > 0, got {beta}")
    d = beta - 1.0
    return (math.sqrt(d * d + 8.0) - d) / (2.0 * beta)


def two_challengers_favor_incumbent(params: ModelParams) -> bool:
    """True iff adding a second challenger lowers the threshold (strict inequality)."""
    return params.sigma_s2 / params.sigma_Q2 > two_challenger_bound(params.beta)


def larger_field_favors_incumbent(beta_e: float, sigma_s2_e: float, sigma_Q2: float) -> bool:
    """The bound above multiplied through by ``beta_e``, for a field of e challengers."""
    for name, v in (("beta_e", beta_e), ("sigma_s2_e", sigma_s2_e), ("sigma_Q2", sigma_Q2)):
        if not v > 0:
            raise ModelError(f"{name} must be > 0, got {v}")
    d = beta_e - 1.0
    return beta_e * sigma_s2_e / sigma_Q2 > (math.sqrt(d * d + 8.0) - d) / 2.0


def left_evaluation_noisier(params: ModelParams, mode: VarianceMode = VarianceMode.PAPER_FAITHFUL) -> bool:
    """Compare a left-wing voter's posterior-mean variance of the challenger.

    True iff the primary winner's two-signal variance exceeds the one-signal
    variance of a challenger who skipped the primary. Under
    ``PAPER_FAITHFUL`` this is algebraically equivalent to
    :func:`two_challengers_favor_incumbent`.
    """
    one_signal = params.sigma_Q2**2 / (params.sigma_Q2 + params.general_var)
    return challenger_two_signal_var(params, mode) > one_signal

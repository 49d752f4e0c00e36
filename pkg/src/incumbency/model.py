"""Model parameters, the standard normal CDF, and Bayesian quality updates.

Voters sit on [0, 1]. Challengers are located at 0 and the incumbent at 1.
Every voter holds a normal prior over each candidate's quality (mean ``q``
for the incumbent, 0 for challengers, common variance ``sigma_Q2``) and
updates it with Gaussian signals:

* primary signals, variance ``sigma_s2`` (left-wing voters only),
* general-election signals, variance ``beta * sigma_s2``, inflated by
  ``lam`` when a right-wing voter hears about a challenger.

The posterior means returned here exclude the ideology penalty
``-t * (x - x_i)**2``; vote-share code adds it where it matters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Literal

import numpy as np
from scipy.special import ndtr

from .errors import ModelError

#: Utility of winning the general election. Entry costs are quoted in these units.
PRIZE = 1.0

CHALLENGER_POSITION = 0.0
INCUMBENT_POSITION = 1.0

Role = Literal["incumbent", "challenger_aligned", "challenger_crossover"]
ROLES: tuple[str, ...] = ("incumbent", "challenger_aligned", "challenger_crossover")


@dataclass(frozen=True)
class ModelParams:
    """Scalar parameters of the election model.

    Attributes:
        t: Weight on squared ideological distance.
        q: Prior mean of the incumbent's quality (challengers have mean 0).
        sigma_Q2: Prior quality variance.
        sigma_s2: Variance of a primary-stage signal.
        beta: General-election signal variance relative to the primary.
        lam: Extra variance factor on challenger signals heard by right-wing voters.
        sigma_eps: Standard deviation of the common shock favouring the incumbent.
        entry_cost: Cost a challenger pays to run, in units of ``PRIZE``.
    """

    t: float = 1.0
    q: float = 0.0
    sigma_Q2: float = 1.0
    sigma_s2: float = 1.0
    beta: float = 1.0
    lam: float = 1.0
    sigma_eps: float = 1.0
    entry_cost: float = 0.0

    def __post_init__(self) -> None:
        for f in fields(self):
            value = getattr(self, f.name)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise ModelError(f"{f.name} must be a real number, got {value!r}")
            if not math.isfinite(value):
                raise ModelError(f"{f.name} must be finite, got {value!r}")
            object.__setattr__(self, f.name, float(value))
        if self.t < 0:
            raise ModelError(f"t must be >= 0, got {self.t}")
        for name in ("sigma_Q2", "sigma_s2", "beta", "sigma_eps"):
            if getattr(self, name) <= 0:
                raise ModelError(f"{name} must be > 0, got {getattr(self, name)}")
        if self.lam < 1:
            raise ModelError(f"lam must be >= 1, got {self.lam}")
        if self.entry_cost < 0:
            raise ModelError(f"entry_cost must be >= 0, got {self.entry_cost}")

    def replace(self, **changes) -> "ModelParams":
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        values.update(changes)
        return ModelParams(**values)

    @property
    def general_var(self) -> float:
        """Variance of an aligned general-election signal."""
        return self.beta * self.sigma_s2

    @property
    def crossover_var(self) -> float:
        """Variance of a challenger's general-election signal among right-wing voters."""
        return self.lam * self.beta * self.sigma_s2


@dataclass(frozen=True)
class VoterIdeology:
    x: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.x <= 1.0):
            raise ModelError(f"voter position must lie in [0, 1], got {self.x}")

    @property
    def left_wing(self) -> bool:
        return self.x < 0.5


@dataclass(frozen=True)
class PosteriorWeights:
    """Weights a posterior mean places on the prior mean and each signal."""

    w_prior: float
    w_primary: float = 0.0
    w_general: float = 0.0

    @property
    def total(self) -> float:
        return self.w_prior + self.w_primary + self.w_general


def gaussian_cdf(z):
    """Standard normal CDF.

    Accepts a scalar or an array. Values come from ``scipy.special.ndtr``,
    which evaluates ``erf``/``erfc`` to within a few ulps, well inside an
    absolute error of 1e-12.

    Raises:
        ValueError: If any input is NaN or infinite.
    """
    arr = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"gaussian_cdf needs finite input, got {z!r}")
    out = ndtr(arr)
    if out.ndim == 0:
        return float(out)
    return out


def candidate_position(candidate: int) -> float:
    if candidate in (1, 2):
        return CHALLENGER_POSITION
    if candidate == 3:
        return INCUMBENT_POSITION
    raise ModelError(f"candidate must be 1, 2 or 3, got {candidate!r}")


def valuation(params: ModelParams, x: float, candidate: int, Q: float, eps: float) -> float:
    """Realised utility voter ``x`` gets from ``candidate`` with quality ``Q``.

    The common shock ``eps`` only enters the incumbent's (candidate 3) value.
    """
    xi = candidate_position(candidate)
    shock = eps if candidate == 3 else 0.0
    return Q - params.t * (x - xi) ** 2 + shock


def _ratio(prior_var: float, signal_var: float) -> float:
    return prior_var / (prior_var + signal_var)


def primary_weights(params: ModelParams) -> PosteriorWeights:
    w = _ratio(params.sigma_Q2, params.sigma_s2)
    return PosteriorWeights(w_prior=1.0 - w, w_primary=w)


def general_weights(params: ModelParams, role: Role) -> PosteriorWeights:
    if role in ("incumbent", "challenger_aligned"):
        w = _ratio(params.sigma_Q2, params.general_var)
    elif role == "challenger_crossover":
        w = _ratio(params.sigma_Q2, params.crossover_var)
    else:
        raise ModelError(f"unknown role {role!r}; expected one of {ROLES}")
    return PosteriorWeights(w_prior=1.0 - w, w_general=w)


def two_signal_weights(params: ModelParams) -> PosteriorWeights:
    """Precision weights for a left-wing voter who heard the primary winner twice."""
    prec_prior = 1.0 / params.sigma_Q2
    prec_primary = 1.0 / params.sigma_s2
    prec_general = 1.0 / params.general_var
    total = prec_prior + prec_primary + prec_general
    return PosteriorWeights(
        w_prior=prec_prior / total,
        w_primary=prec_primary / total,
        w_general=prec_general / total,
    )


def posterior_mean_primary(params: ModelParams, s_p):
    """Posterior quality mean of a challenger after one primary signal."""
    return primary_weights(params).w_primary * s_p


def posterior_mean_general(params: ModelParams, role: Role, s_g):
    """Posterior quality mean after one general-election signal.

    ``role`` selects the prior mean and signal variance: the incumbent
    (prior ``q``), a challenger seen by a left-wing voter, or a challenger
    seen by a right-wing voter (variance scaled by ``lam``).
    """
    w = general_weights(params, role)
    prior_mean = params.q if role == "incumbent" else 0.0
    return w.w_prior * prior_mean + w.w_general * s_g


def posterior_mean_two_signal(params: ModelParams, s_p, s_g):
    w = two_signal_weights(params)
    return w.w_primary * s_p + w.w_general * s_g

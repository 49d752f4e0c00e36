"""Entry game, comparative-statics sweeps, and larger challenger fields."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

from .errors import ModelError, NumericalError
from .model import PRIZE, ModelParams, gaussian_cdf
from .threshold import (
    DEFAULT_SOLVER,
    SolverSpec,
    larger_field_favors_incumbent,
    solve_threshold,
    two_challengers_favor_incumbent,
)
from .voteshare import DEFAULT_QUADRATURE, QuadratureSpec, VarianceMode


@dataclass(frozen=True)
class EquilibriumOutcome:
    """Pure-strategy entry equilibrium.

    ``t_duo`` is each challenger's payoff from a two-way primary and
    ``t_solo`` a lone entrant's; both are compared with the entry cost.
    """

    n_entrants: int
    win_prob_incumbent: float
    win_prob_per_challenger: float
    t_duo: float
    t_solo: float
    eps_one: float
    eps_two: float


def entry_from_thresholds(entry_cost: float, eps_one: float, eps_two: float, sigma_eps: float) -> EquilibriumOutcome:
    """Resolve the entry game once both thresholds are known.

    Ties go to entry: a challenger indifferent between running and staying
    out runs.
    """
    t_duo = 0.5 * PRIZE * gaussian_cdf(eps_two / sigma_eps)
    t_solo = PRIZE * gaussian_cdf(eps_one / sigma_eps)
    if entry_cost <= t_duo:
        n = 2
    elif t_duo < t_solo and entry_cost <= t_solo:
        n = 1
    else:
        n = 0

    if n == 2:
        inc = gaussian_cdf(-eps_two / sigma_eps)
    elif n == 1:
        inc = gaussian_cdf(-eps_one / sigma_eps)
    else:
        inc = 1.0
    per = (1.0 - inc) / n if n else 0.0
    return EquilibriumOutcome(n, inc, per, t_duo, t_solo, eps_one, eps_two)


def equilibrium_entry(
    params: ModelParams,
    mode: VarianceMode = VarianceMode.PAPER_FAITHFUL,
    spec: SolverSpec = DEFAULT_SOLVER,
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
) -> EquilibriumOutcome:
    eps_one = solve_threshold(params, 1, mode, spec, quad).eps_star
    eps_two = solve_threshold(params, 2, mode, spec, quad).eps_star
    return entry_from_thresholds(params.entry_cost, eps_one, eps_two, params.sigma_eps)


# -- larger fields ---------------------------------------------------------


@dataclass(frozen=True)
class InfoSchedule:
    """Primary-signal variance and informativeness ratio for e = 1..E.

    More challengers sharpen primary signals (``sigma_s2`` strictly
    decreasing) while general-election signals stay put
    (``beta * sigma_s2`` constant).
    """

    sigma_s2: tuple[float, ...]
    beta: tuple[float, ...]
    rtol: float = 1e-9

    def __post_init__(self) -> None:
        object.__setattr__(self, "sigma_s2", tuple(float(v) for v in self.sigma_s2))
        object.__setattr__(self, "beta", tuple(float(v) for v in self.beta))
        if len(self.sigma_s2) != len(self.beta):
            raise ModelError("schedule columns sigma_s2 and beta differ in length")
        if not self.sigma_s2:
            raise ModelError("schedule must define at least e = 1")
        for e, (s, b) in enumerate(zip(self.sigma_s2, self.beta), start=1):
            if not (math.isfinite(s) and math.isfinite(b) and s > 0 and b > 0):
                raise ModelError(f"schedule entries must be positive and finite (e={e})")
        for e in range(1, len(self.sigma_s2)):
            if not self.sigma_s2[e] < self.sigma_s2[e - 1]:
                raise ModelError(f"sigma_s2 must be strictly decreasing in e (violated at e={e + 1})")
        base = self.general_var
        for e, (s, b) in enumerate(zip(self.sigma_s2, self.beta), start=1):
            if not math.isclose(s * b, base, rel_tol=self.rtol):
                raise ModelError(
                    f"beta * sigma_s2 must be constant in e: {s * b!r} at e={e} vs {base!r} at e=1"
                )

    @classmethod
    def from_rows(cls, rows: Iterable[tuple[int, float, float]]) -> "InfoSchedule":
        """Build from ``(e, sigma_s2, beta)`` rows; e must run 1, 2, ... without gaps."""
        rows = sorted(rows, key=lambda r: r[0])
        for expected, row in enumerate(rows, start=1):
            if int(row[0]) != expected:
                raise ModelError(f"schedule rows must cover e = 1..E without gaps; missing e={expected}")
        return cls(tuple(r[1] for r in rows), tuple(r[2] for r in rows))

    @classmethod
    def harmonic(cls, sigma_s2_one: float, beta_one: float, e_max: int) -> "InfoSchedule":
        """Demo schedule with ``sigma_s2(e) = sigma_s2(1) / e``."""
        es = range(1, e_max + 1)
        return cls(tuple(sigma_s2_one / e for e in es), tuple(beta_one * e for e in es))

    @property
    def e_max(self) -> int:
        return len(self.sigma_s2)

    @property
    def general_var(self) -> float:
        return self.sigma_s2[0] * self.beta[0]

    def at(self, e: int) -> tuple[float, float]:
        if not 1 <= e <= self.e_max:
            raise ModelError(f"schedule defines e = 1..{self.e_max}, asked for e={e}")
        return self.sigma_s2[e - 1], self.beta[e - 1]

    def rows(self) -> list[tuple[int, float, float]]:
        return [(e, s, b) for e, (s, b) in enumerate(zip(self.sigma_s2, self.beta), start=1)]


def winprob_vs_challengers(
    params: ModelParams,
    schedule: InfoSchedule,
    mode: VarianceMode = VarianceMode.PAPER_FAITHFUL,
    e_max: int | None = None,
    spec: SolverSpec = DEFAULT_SOLVER,
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
) -> list[tuple[int, float]]:
    """Incumbent win probability against fields of e = 0..e_max challengers.

    A field of two or more runs a primary whose winner faces the incumbent,
    so it reuses the two-challenger threshold with that field's signal
    parameters. ``params.sigma_s2`` and ``params.beta`` are ignored.
    """
    e_max = schedule.e_max if e_max is None else e_max
    if e_max > schedule.e_max:
        raise ModelError(f"schedule defines e up to {schedule.e_max}, asked for {e_max}")
    curve = [(0, 1.0)]
    for e in range(1, e_max + 1):
        s2, b = schedule.at(e)
        p = params.replace(sigma_s2=s2, beta=b)
        res = solve_threshold(p, 1 if e == 1 else 2, mode, spec, quad)
        curve.append((e, res.win_prob_incumbent))
    return curve


def larger_field_conditions(schedule: InfoSchedule, sigma_Q2: float) -> list[bool]:
    """Evaluate the larger-field condition at every e and check it never switches off.

    Raises:
        AssertionError: If the condition holds at some e but fails at a later one.
    """
    flags = [larger_field_favors_incumbent(b, s2, sigma_Q2) for _, s2, b in schedule.rows()]
    for e in range(1, len(flags)):
        if flags[e - 1] and not flags[e]:
            raise AssertionError(f"condition holds at e={e} but fails at e={e + 1}")
    return flags


def describe_curve(curve: Sequence[tuple[int, float]]) -> str:
    """One-line shape summary of a win-probability curve from e = 1 onward."""
    probs = [p for e, p in curve if e >= 1]
    if len(probs) < 2:
        return "too short to classify"
    diffs = [b - a for a, b in zip(probs, probs[1:])]
    if all(d > 0 for d in diffs):
        return "increasing from e=1"
    if all(d < 0 for d in diffs):
        return "decreasing from e=1"
    lowest = min(range(len(probs)), key=probs.__getitem__)
    falls, rises = diffs[:lowest], diffs[lowest:]
    if lowest > 0 and all(d < 0 for d in falls) and all(d > 0 for d in rises):
        return f"dip then rise: decreasing to e={lowest + 1}, increasing after"
    return "non-monotone"


# -- comparative statics ---------------------------------------------------

SWEEP_AXES = ("q", "lambda", "beta", "ratio", "C")

SWEEP_COLUMNS = (
    "axis",
    "value",
    "eps_one",
    "eps_two",
    "t_duo",
    "t_solo",
    "n_entrants",
    "win_prob_incumbent",
    "win_prob_per_challenger",
    "two_favor_incumbent",
    "error",
)


@dataclass(frozen=True)
class SweepRow:
    axis: str
    value: float
    eps_one: float = math.nan
    eps_two: float = math.nan
    t_duo: float = math.nan
    t_solo: float = math.nan
    n_entrants: int | None = None
    win_prob_incumbent: float = math.nan
    win_prob_per_challenger: float = math.nan
    two_favor_incumbent: bool | None = None
    error: str | None = None

    def as_dict(self) -> dict:
        return asdict(self)


def params_along(base: ModelParams, axis: str, value: float) -> ModelParams:
    if axis == "q":
        return base.replace(q=value)
    if axis == "lambda":
        return base.replace(lam=value)
    if axis == "beta":
        return base.replace(beta=value)
    if axis == "ratio":
        return base.replace(sigma_s2=value * base.sigma_Q2)
    if axis == "C":
        return base.replace(entry_cost=value)
    raise ModelError(f"unknown sweep axis {axis!r}; expected one of {SWEEP_AXES}")


def comparative_statics_sweep(
    base: ModelParams,
    axis: str,
    grid: Sequence[float],
    mode: VarianceMode = VarianceMode.PAPER_FAITHFUL,
    spec: SolverSpec = DEFAULT_SOLVER,
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
    workers: int = 1,
) -> list[SweepRow]:
    """Thresholds, entry and win probabilities at each grid value of one parameter.

    Rows come back in grid order. A solver failure is written into that
    row's ``error`` field; invalid grid values raise before any solving.
    """
    points = [params_along(base, axis, float(v)) for v in grid]

    if axis == "C":
        # Thresholds do not depend on the entry cost.
        try:
            one = solve_threshold(base, 1, mode, spec, quad).eps_star
            two = solve_threshold(base, 2, mode, spec, quad).eps_star
        except NumericalError as exc:
            return [SweepRow(axis, float(v), error=str(exc)) for v in grid]
        return [_row(axis, float(v), p, entry_from_thresholds(p.entry_cost, one, two, p.sigma_eps)) for v, p in zip(grid, points)]

    def solve(item):
        v, p = item
        try:
            out = equilibrium_entry(p, mode, spec, quad)
        except NumericalError as exc:
            return SweepRow(axis, float(v), error=str(exc))
        return _row(axis, float(v), p, out)

    items = list(zip(grid, points))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(solve, items))
    return [solve(item) for item in items]


def _row(axis: str, value: float, p: ModelParams, out: EquilibriumOutcome) -> SweepRow:
    return SweepRow(
        axis=axis,
        value=value,
        eps_one=out.eps_one,
        eps_two=out.eps_two,
        t_duo=out.t_duo,
        t_solo=out.t_solo,
        n_entrants=out.n_entrants,
        win_prob_incumbent=out.win_prob_incumbent,
        win_prob_per_challenger=out.win_prob_per_challenger,
        two_favor_incumbent=two_challengers_favor_incumbent(p),
    )

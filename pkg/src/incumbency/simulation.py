"""Seeded Monte Carlo electorate used to cross-check the analytic results.

Each trial draws a finite electorate, quality evaluations and signals
from the generative model, runs the primary (when two challengers enter)
and the general election, and reports the plurality winner.

Reproducibility: trial ``i`` draws from its own ``numpy.random.PCG64``
stream seeded by ``SeedSequence(entropy=seed, spawn_key=(i,))``. Results
therefore depend only on ``(params, spec)``, never on the worker count
or scheduling order. Within a trial the draw order is fixed:

1. voter positions ``x ~ U[0, 1)``, shape (n,)
2. the shock, if random: one ``N(0, sigma_eps^2)`` draw
3. incumbent quality and general signal noise, shape (n,) each
4. challenger qualities, shape (k, n), with k = 1 or 2
5. primary signal noise, shape (2, n) (two-challenger scenario only)
6. one uniform for the primary coin, one for a tied primary
7. challenger general signal noise, shape (n,)
8. extra uniforms only when a voter or the election is exactly tied
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ModelError
from .model import (
    ModelParams,
    posterior_mean_general,
    posterior_mean_primary,
    posterior_mean_two_signal,
)

SELECTION_MODES = ("unconditional_winner", "full_pipeline")


@dataclass(frozen=True)
class SimulationSpec:
    """Monte Carlo settings.

    Attributes:
        n_voters: Electorate size per trial; even so both halves are equal in expectation.
        n_trials: Number of independent elections.
        seed: 64-bit root seed.
        n_challengers: 1 or 2 entrants.
        selection_mode: ``unconditional_winner`` sends a fair-coin pick to the
            general election, so the finalist's primary signals are not
            selected on; ``full_pipeline`` sends the actual primary winner.
        eps: Fixed shock value, or ``None`` to draw ``N(0, sigma_eps^2)`` per trial.
        workers: Threads used to run trials. Does not affect results.
        swap_labels: Swap challengers 1 and 2 after drawing (exchangeability checks).
    """

    n_voters: int = 2000
    n_trials: int = 20000
    seed: int = 20240601
    n_challengers: int = 1
    selection_mode: str = "unconditional_winner"
    eps: float | None = None
    workers: int = 1
    swap_labels: bool = False

    def __post_init__(self) -> None:
        if self.n_voters < 2 or self.n_voters % 2:
            raise ModelError(f"n_voters must be even and >= 2, got {self.n_voters}")
        if self.n_trials < 1:
            raise ModelError(f"n_trials must be >= 1, got {self.n_trials}")
        if not 0 <= self.seed < 2**64:
            raise ModelError("seed must fit in 64 unsigned bits")
        if self.n_challengers not in (1, 2):
            raise ModelError(f"simulation needs 1 or 2 challengers, got {self.n_challengers}")
        if self.selection_mode not in SELECTION_MODES:
            raise ModelError(f"selection_mode must be one of {SELECTION_MODES}")
        if self.eps is not None and not math.isfinite(self.eps):
            raise ModelError("fixed eps must be finite")
        if self.workers < 1:
            raise ModelError("workers must be >= 1")


@dataclass(frozen=True)
class TrialOutcome:
    winner: int
    primary_winner: int | None
    incumbent_votes: int
    challenger_votes: int
    eps: float
    primary_votes: tuple[int, int] | None = None

    @property
    def incumbent_share(self) -> float:
        return self.incumbent_votes / (self.incumbent_votes + self.challenger_votes)


@dataclass(frozen=True)
class ElectionEstimate:
    win_prob_hat: float
    std_error: float
    n_trials: int
    primary_wins: tuple[int, int]
    finalist_counts: tuple[int, int]
    mean_incumbent_share: float


def trial_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=(index,))))


def simulate_trial(params: ModelParams, spec: SimulationSpec, rng: np.random.Generator) -> TrialOutcome:
    """Run one primary + general election on a fresh electorate."""
    n = spec.n_voters
    sigma_Q = math.sqrt(params.sigma_Q2)

    x = rng.random(n)
    left = x < 0.5
    eps = spec.eps if spec.eps is not None else float(rng.normal(0.0, params.sigma_eps))

    q3 = params.q + sigma_Q * rng.standard_normal(n)
    s3 = q3 + math.sqrt(params.general_var) * rng.standard_normal(n)
    mean3 = posterior_mean_general(params, "incumbent", s3)

    k = spec.n_challengers
    quality = sigma_Q * rng.standard_normal((k, n))
    primary_winner = None
    primary_votes = None
    if k == 2:
        s_p = quality + math.sqrt(params.sigma_s2) * rng.standard_normal((2, n))
        if spec.swap_labels:
            quality, s_p = quality[::-1], s_p[::-1]
        coin, primary_tie = rng.random(2)
        # The ideology penalty is the same for both challengers, so it cancels.
        m_p = posterior_mean_primary(params, s_p[:, left])
        v1 = int(np.count_nonzero(m_p[0] > m_p[1]))
        v2 = int(np.count_nonzero(m_p[1] > m_p[0]))
        ties = m_p.shape[1] - v1 - v2
        if ties:
            v1 += int(np.count_nonzero(rng.random(ties) < 0.5))
            v2 = m_p.shape[1] - v1
        primary_votes = (v1, v2)
        if v1 != v2:
            primary_winner = 1 if v1 > v2 else 2
        else:
            primary_winner = 1 if primary_tie < 0.5 else 2
            if spec.swap_labels:
                primary_winner = 3 - primary_winner
        coin_pick = 1 if coin < 0.5 else 2
        if spec.swap_labels:
            coin_pick = 3 - coin_pick
        finalist = primary_winner if spec.selection_mode == "full_pipeline" else coin_pick
        idx = finalist - 1
    else:
        finalist, idx, s_p = 1, 0, None

    noise = rng.standard_normal(n)
    sd = np.where(left, math.sqrt(params.general_var), math.sqrt(params.crossover_var))
    s_g = quality[idx] + sd * noise
    if s_p is not None:
        aligned = posterior_mean_two_signal(params, s_p[idx], s_g)
    else:
        aligned = posterior_mean_general(params, "challenger_aligned", s_g)
    crossover = posterior_mean_general(params, "challenger_crossover", s_g)
    mean_c = np.where(left, aligned, crossover)

    value3 = mean3 - params.t * (x - 1.0) ** 2 + eps
    value_c = mean_c - params.t * x**2
    inc = int(np.count_nonzero(value3 > value_c))
    chal = int(np.count_nonzero(value_c > value3))
    tied = n - inc - chal
    if tied:
        inc += int(np.count_nonzero(rng.random(tied) < 0.5))
        chal = n - inc
    if inc != chal:
        winner = 3 if inc > chal else finalist
    else:
        winner = 3 if rng.random() < 0.5 else finalist
    return TrialOutcome(winner, primary_winner, inc, chal, eps, primary_votes)


def run_trials(params: ModelParams, spec: SimulationSpec) -> list[TrialOutcome]:
    """All trials of ``spec`` in index order."""

    def chunk(bounds: tuple[int, int]) -> list[TrialOutcome]:
        return [simulate_trial(params, spec, trial_rng(spec.seed, i)) for i in range(*bounds)]

    if spec.workers == 1:
        return chunk((0, spec.n_trials))
    step = math.ceil(spec.n_trials / spec.workers)
    bounds = [(lo, min(lo + step, spec.n_trials)) for lo in range(0, spec.n_trials, step)]
    with ThreadPoolExecutor(max_workers=spec.workers) as pool:
        parts = list(pool.map(chunk, bounds))
    return [out for part in parts for out in part]


def summarize(outcomes: Sequence[TrialOutcome]) -> ElectionEstimate:
    n = len(outcomes)
    wins = sum(o.winner == 3 for o in outcomes)
    p = wins / n
    primary = (
        sum(o.primary_winner == 1 for o in outcomes),
        sum(o.primary_winner == 2 for o in outcomes),
    )
    finalists = (
        sum(o.winner == 1 for o in outcomes),
        sum(o.winner == 2 for o in outcomes),
    )
    share = math.fsum(o.incumbent_share for o in outcomes) / n
    return ElectionEstimate(p, math.sqrt(p * (1.0 - p) / n), n, primary, finalists, share)


def estimate_win_prob(params: ModelParams, spec: SimulationSpec) -> ElectionEstimate:
    """Frequency of incumbent wins over ``spec.n_trials`` seeded elections.

    ``std_error`` is the binomial standard error ``sqrt(p (1 - p) / n_trials)``.
    """
    return summarize(run_trials(params, spec))


def estimate_vote_share_curve(
    params: ModelParams,
    spec: SimulationSpec,
    eps_grid: Sequence[float],
) -> list[tuple[float, float, float]]:
    """Mean incumbent vote share and its standard error at each fixed shock.

    Every grid point reuses the same trial seeds, so the electorate is
    shared across points and only the shock moves.
    """
    curve = []
    for eps in eps_grid:
        run = SimulationSpec(**{**spec.__dict__, "eps": float(eps)})
        shares = np.array([o.incumbent_share for o in run_trials(params, run)])
        se = float(shares.std(ddof=1) / math.sqrt(len(shares))) if len(shares) > 1 else math.nan
        curve.append((float(eps), float(shares.mean()), se))
    return curve

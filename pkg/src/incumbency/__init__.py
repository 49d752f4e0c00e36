"""Primaries, entry and incumbency advantage in a probabilistic voting model."""

from .equilibrium import (
    EquilibriumOutcome,
    InfoSchedule,
    SweepRow,
    comparative_statics_sweep,
    equilibrium_entry,
    larger_field_conditions,
    winprob_vs_challengers,
)
from .errors import ModelError, NumericalError, QuadratureError, SolverError
from .model import PRIZE, ModelParams, gaussian_cdf
from .simulation import ElectionEstimate, SimulationSpec, estimate_vote_share_curve, estimate_win_prob
from .threshold import (
    SolverSpec,
    ThresholdResult,
    larger_field_favors_incumbent,
    left_evaluation_noisier,
    solve_threshold,
    two_challenger_bound,
    two_challengers_favor_incumbent,
    win_prob,
)
from .tullock import TullockParams, tullock_equilibrium, tullock_foc_residual, tullock_foc_root
from .voteshare import QuadratureSpec, SegmentShare, VarianceMode, incumbent_vote_share

__all__ = [
    "PRIZE",
    "ElectionEstimate",
    "EquilibriumOutcome",
    "InfoSchedule",
    "ModelError",
    "ModelParams",
    "NumericalError",
    "QuadratureError",
    "QuadratureSpec",
    "SegmentShare",
    "SimulationSpec",
    "SolverError",
    "SolverSpec",
    "SweepRow",
    "ThresholdResult",
    "TullockParams",
    "VarianceMode",
    "comparative_statics_sweep",
    "equilibrium_entry",
    "estimate_vote_share_curve",
    "estimate_win_prob",
    "gaussian_cdf",
    "incumbent_vote_share",
    "larger_field_conditions",
    "larger_field_favors_incumbent",
    "left_evaluation_noisier",
    "solve_threshold",
    "tullock_equilibrium",
    "tullock_foc_residual",
    "tullock_foc_root",
    "two_challenger_bound",
    "two_challengers_favor_incumbent",
    "win_prob",
]

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from incumbency.errors import ModelError, QuadratureError
from incumbency.model import ModelParams
from incumbency.voteshare import (
    QuadratureSpec,
    VarianceMode,
    diff_std_one_challenger,
    diff_std_two_challenger_left,
    incumbent_vote_share,
    losing_share,
    segment_stds,
)
from incumbency.threshold import left_evaluation_noisier

import oracles

REFERENCE = ModelParams(t=1.0, q=0.1, sigma_Q2=1.0, sigma_s2=1.0, beta=1.0, lam=2.0)

# Incumbent shares from a trapezoid rule with 10^6 nodes per half of the line.
REFERENCE_SHARE_AT_ZERO = 0.5424154194933339
REFERENCE_SHARE_LEFT = 0.17525209705902722
REFERENCE_SHARE_RIGHT = 0.36716332243430666

pos = st.floats(min_value=0.05, max_value=20.0)
MODES = list(VarianceMode)


class TestDifferenceStds:
    def test_left_unit_case(self):
        assert diff_std_one_challenger(ModelParams(), "left") == pytest.approx(1.0, abs=1e-15)

    def test_right_with_crossover(self):
        got = diff_std_one_challenger(ModelParams(lam=3.0), "right")
        assert got == pytest.approx(math.sqrt(0.75), abs=1e-15)

    def test_segments_equal_without_crossover(self):
        p = ModelParams(sigma_Q2=2.3, sigma_s2=0.4, beta=1.7, lam=1.0)
        assert diff_std_one_challenger(p, "left") == diff_std_one_challenger(p, "right")

    def test_bad_segment(self):
        with pytest.raises(ModelError):
            diff_std_one_challenger(ModelParams(), "middle")

    def test_two_challenger_independent_terms_value(self):
        got = diff_std_two_challenger_left(ModelParams(), VarianceMode.PAPER_FAITHFUL)
        assert got == pytest.approx(math.sqrt(17.0 / 18.0), abs=1e-14)

    @settings(max_examples=200)
    @given(pos, pos, pos, st.floats(1.0, 10.0))
    def test_against_written_out_formulas(self, sQ2, ss2, beta, lam):
        p = ModelParams(sigma_Q2=sQ2, sigma_s2=ss2, beta=beta, lam=lam)
        assert diff_std_one_challenger(p, "left") == pytest.approx(oracles.sd_left_one(sQ2, ss2, beta), rel=1e-12)
        assert diff_std_one_challenger(p, "right") == pytest.approx(oracles.sd_right(sQ2, ss2, beta, lam), rel=1e-12)
        assert diff_std_two_challenger_left(p, "paper_faithful") == pytest.approx(
            oracles.sd_left_two_independent(sQ2, ss2, beta), rel=1e-12
        )
        assert diff_std_two_challenger_left(p, "covariance_corrected") == pytest.approx(
            oracles.sd_left_two_cov(sQ2, ss2, beta), rel=1e-12
        )

    @given(pos, pos, pos)
    def test_covariance_correction_increases_std(self, sQ2, ss2, beta):
        p = ModelParams(sigma_Q2=sQ2, sigma_s2=ss2, beta=beta)
        assert diff_std_two_challenger_left(p, "covariance_corrected") > diff_std_two_challenger_left(p, "paper_faithful")

    @pytest.mark.parametrize("mode", MODES)
    def test_uninformative_primary_limit(self, mode):
        general_var = 1.5
        one = diff_std_one_challenger(ModelParams(sigma_Q2=0.8, sigma_s2=1.0, beta=general_var), "left")
        ss2 = 1e9
        p = ModelParams(sigma_Q2=0.8, sigma_s2=ss2, beta=general_var / ss2)
        assert diff_std_two_challenger_left(p, mode) == pytest.approx(one, abs=1e-6)

    def test_ordering_matches_variance_comparison(self):
        # A noisier left-wing evaluation of the challenger is exactly a wider left segment.
        rng = np.random.default_rng(7)
        for _ in range(300):
            beta, ratio = rng.uniform(0.1, 10.0, size=2)
            p = ModelParams(sigma_Q2=1.0, sigma_s2=ratio, beta=beta)
            wider = diff_std_two_challenger_left(p) > diff_std_one_challenger(p, "left")
            assert wider == left_evaluation_noisier(p)

    def test_zero_challenger_has_no_std(self):
        with pytest.raises(ModelError):
            segment_stds(ModelParams(), 0, VarianceMode.PAPER_FAITHFUL)


class TestIncumbentVoteShare:
    def test_reference_case_against_trapezoid(self):
        share = incumbent_vote_share(REFERENCE, 1, 0.0)
        assert share.total_share == pytest.approx(REFERENCE_SHARE_AT_ZERO, abs=1e-8)
        assert share.left_share == pytest.approx(REFERENCE_SHARE_LEFT, abs=1e-8)
        assert share.right_share == pytest.approx(REFERENCE_SHARE_RIGHT, abs=1e-8)

    def test_trapezoid_oracle_reproduces(self):
        sd_l, sd_r = segment_stds(REFERENCE, 1, VarianceMode.PAPER_FAITHFUL)
        off = -REFERENCE.q
        left = 0.5 - oracles.trapezoid_segment(1.0, off, sd_l, 0.0, 0.5, nodes=200_001)
        right = 0.5 - oracles.trapezoid_segment(1.0, off, sd_r, 0.5, 1.0, nodes=200_001)
        assert left + right == pytest.approx(REFERENCE_SHARE_AT_ZERO, abs=1e-9)

    @settings(max_examples=100, deadline=None)
    @given(
        st.one_of(st.just(0.0), st.floats(1e-3, 3.0)), st.floats(-2.0, 2.0), st.floats(-3.0, 3.0),
        pos, pos, pos, st.floats(1.0, 5.0), st.sampled_from([1, 2]), st.sampled_from(MODES),
    )
    def test_against_closed_form(self, t, q, eps, sQ2, ss2, beta, lam, n, mode):
        p = ModelParams(t=t, q=q, sigma_Q2=sQ2, sigma_s2=ss2, beta=beta, lam=lam)
        sd_l, sd_r = segment_stds(p, n, mode)
        want = oracles.losing_closed_form(t, q, eps, sd_l, sd_r)
        assert losing_share(p, n, eps, mode) == pytest.approx(want, abs=1e-9)

    @pytest.mark.parametrize("n", [1, 2])
    def test_flat_symmetric_case(self, n):
        share = incumbent_vote_share(ModelParams(t=0.0, q=0.0, lam=1.0), n, 0.0)
        assert share.total_share == pytest.approx(0.5, abs=1e-15)

    @pytest.mark.parametrize("n", [1, 2])
    def test_deep_upper_tail(self, n):
        p = REFERENCE
        sd = max(segment_stds(p, n, VarianceMode.PAPER_FAITHFUL))
        eps = 10.0 * (p.t + abs(p.q) + 10.0 * sd)
        assert incumbent_vote_share(p, n, eps).total_share >= 0.999

    def test_deep_lower_tail(self):
        assert incumbent_vote_share(REFERENCE, 1, -100.0).total_share <= 1e-12

    def test_no_challenger(self):
        share = incumbent_vote_share(REFERENCE, 0, -50.0)
        assert share.total_share == 1.0

    @pytest.mark.parametrize("n", [1, 2])
    @pytest.mark.parametrize("mode", MODES)
    def test_strictly_increasing_in_shock(self, n, mode):
        grid = np.linspace(-3.0, 3.0, 100)
        totals = np.array([incumbent_vote_share(REFERENCE, n, e, mode).total_share for e in grid])
        assert np.all(np.diff(totals) > 0)

    @pytest.mark.parametrize("eps", [-0.7, 0.0, 0.4])
    def test_segment_symmetry_without_crossover(self, eps):
        # With lam = 1 and q = 0 the line is symmetric about 1/2 after reflecting the shock.
        p = ModelParams(t=1.0, q=0.0, lam=1.0)
        left = incumbent_vote_share(p, 1, eps).left_share
        right = incumbent_vote_share(p, 1, -eps).right_share
        assert left + right == pytest.approx(0.5, abs=1e-12)

    def test_each_half_bounded(self):
        for eps in np.linspace(-5, 5, 41):
            share = incumbent_vote_share(REFERENCE, 2, float(eps))
            assert 0.0 <= share.left_share <= 0.5
            assert 0.0 <= share.right_share <= 0.5

    def test_non_finite_shock(self):
        with pytest.raises(ModelError):
            incumbent_vote_share(REFERENCE, 1, math.nan)

    def test_bad_scenario(self):
        with pytest.raises(ModelError):
            incumbent_vote_share(REFERENCE, 3, 0.0)


class TestQuadratureHygiene:
    @pytest.mark.parametrize("n", [1, 2])
    @pytest.mark.parametrize("mode", MODES)
    def test_node_doubling_is_stable(self, n, mode):
        rng = np.random.default_rng(11)
        for _ in range(25):
            p = ModelParams(
                t=rng.uniform(0.2, 2.0),
                q=rng.uniform(-0.5, 1.0),
                sigma_s2=rng.uniform(0.1, 5.0),
                beta=rng.uniform(0.2, 5.0),
                lam=rng.uniform(1.0, 4.0),
            )
            eps = rng.uniform(-2.0, 2.0)
            coarse = losing_share(p, n, eps, mode, QuadratureSpec(nodes=64))
            fine = losing_share(p, n, eps, mode, QuadratureSpec(nodes=128))
            assert abs(fine - coarse) < 1e-10

    def test_unreachable_tolerance_raises(self):
        # A steep integrand with a tiny node budget cannot converge.
        # The step sits at x = 0.2, off-centre in the left half.
        p = ModelParams(t=50.0, q=30.0, sigma_Q2=1e-4, sigma_s2=1.0)
        with pytest.raises(QuadratureError) as info:
            losing_share(p, 1, 0.0, quad=QuadratureSpec(nodes=4, tol=1e-14, max_nodes=8))
        assert "nodes" in info.value.diagnostics

    def test_invalid_spec(self):
        with pytest.raises(ModelError):
            QuadratureSpec(nodes=0)

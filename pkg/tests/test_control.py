"""Unit tests for the tracker, PI loops, reference currents and comparator."""

import pytest

from wecsim.control import (
    MpptRule,
    MpptState,
    PiState,
    boost_duty_controller,
    dclink_current_magnitude,
    hysteresis_comparator,
    mppt_adaptive_step,
    mppt_step,
    mppt_update,
    pi_update,
    ramped_magnitude,
    reference_currents,
)
from wecsim.models import MpptConfig, PiConfig


class TestMpptRules:
    """Test the four step-and-search rules."""

    @pytest.mark.parametrize(
        "dp, dv, rule, direction",
        [
            (5.0, 1.0, MpptRule.CLIMB, 1),
            (5.0, -1.0, MpptRule.HIGH_SPEED_SIDE, -1),
            (-5.0, 1.0, MpptRule.STEP_BACK, -1),
            (-5.0, -1.0, MpptRule.LOW_SPEED_SIDE, 1),
        ],
    )
    def test_sign_quadrants(self, dp, dv, rule, direction):
        """Test each (ΔP, ΔV) sign pair selects its rule and direction."""
        assert MpptRule.classify(dp, dv) is rule
        assert rule.direction == direction

    def test_ties_count_as_non_negative(self):
        """Test ΔP = 0 and ΔV = 0 behave like positive changes."""
        assert MpptRule.classify(0.0, 0.0) is MpptRule.CLIMB
        assert MpptRule.classify(0.0, -1.0) is MpptRule.HIGH_SPEED_SIDE
        assert MpptRule.classify(-1.0, 0.0) is MpptRule.STEP_BACK


class TestMpptStep:
    """Test fixed-step decisions."""

    @pytest.fixture
    def cfg(self):
        return MpptConfig(delta_v=2.0)

    def test_climb(self, cfg):
        """Test rising power on rising voltage raises the reference."""
        state = MpptState(p_prev=100.0, v_prev=200.0, v_ref=200.0)
        new = mppt_step(105.0, 201.0, state, cfg)

        assert new.v_ref == pytest.approx(202.0)
        assert new.rule is MpptRule.CLIMB
        assert new.step == pytest.approx(2.0)
        assert new.p_prev == 105.0
        assert new.v_prev == 201.0

    def test_step_back(self, cfg):
        """Test falling power after a voltage rise lowers the reference."""
        state = MpptState(p_prev=100.0, v_prev=200.0, v_ref=204.0)
        new = mppt_step(95.0, 204.0, state, cfg)

        assert new.v_ref == pytest.approx(202.0)
        assert new.rule is MpptRule.STEP_BACK

    def test_clamped_to_bracket(self):
        """Test the reference never leaves [v_ref_min, v_ref_max]."""
        cfg = MpptConfig(delta_v=10.0, v_ref_min=40.0, v_ref_max=360.0)
        top = MpptState(p_prev=0.0, v_prev=355.0, v_ref=355.0)
        bottom = MpptState(p_prev=0.0, v_prev=45.0, v_ref=45.0)

        assert mppt_step(10.0, 356.0, top, cfg).v_ref == 360.0
        assert mppt_step(10.0, 44.0, bottom, cfg).v_ref == 40.0

    def test_state_is_immutable(self, cfg):
        """Test a decision returns a new state and leaves the old one intact."""
        state = MpptState(p_prev=100.0, v_prev=200.0, v_ref=200.0)
        mppt_step(105.0, 201.0, state, cfg)

        assert state.v_ref == 200.0

    def test_initial_state(self):
        """Test the memory before the first decision."""
        cfg = MpptConfig(v_ref_init=180.0)
        state = MpptState.initial(cfg, v_measured=95.0)

        assert state.v_ref == 180.0
        assert state.v_prev == 95.0
        assert state.p_prev == 0.0
        assert state.rule is None


class TestAdaptiveStep:
    """Test the slope-scaled tracker."""

    @pytest.fixture
    def cfg(self):
        return MpptConfig(adaptive=True, step_gain=0.2, step_min=1.0, step_max=8.0)

    def test_step_scales_with_slope(self, cfg):
        """Test δ = step_gain·|ΔP/ΔV| inside the clamp."""
        state = MpptState(p_prev=1000.0, v_prev=100.0, v_ref=100.0)
        new = mppt_adaptive_step(1100.0, 104.0, state, cfg)

        assert new.step == pytest.approx(5.0)
        assert new.v_ref == pytest.approx(105.0)

    def test_step_clamped(self, cfg):
        """Test δ stays within [step_min, step_max]."""
        state = MpptState(p_prev=1000.0, v_prev=100.0, v_ref=100.0)

        assert mppt_adaptive_step(2000.0, 101.0, state, cfg).step == pytest.approx(8.0)
        assert mppt_adaptive_step(1000.1, 110.0, state, cfg).step == pytest.approx(1.0)

    def test_no_voltage_change_uses_min_step(self, cfg):
        """Test a zero ΔV falls back to step_min."""
        state = MpptState(p_prev=0.0, v_prev=100.0, v_ref=100.0)

        assert mppt_adaptive_step(500.0, 100.0, state, cfg).step == pytest.approx(1.0)

    def test_update_dispatch(self, cfg):
        """Test mppt_update follows cfg.adaptive."""
        state = MpptState(p_prev=1000.0, v_prev=100.0, v_ref=100.0)
        fixed = MpptConfig(delta_v=4.0)

        assert mppt_update(1100.0, 104.0, state, cfg).step == pytest.approx(5.0)
        assert mppt_update(1100.0, 104.0, state, fixed).step == pytest.approx(4.0)


class TestPiLoops:
    """Test the PI controller and the two loops built on it."""

    @pytest.fixture
    def cfg(self):
        return PiConfig(kp=1.0, ki=10.0, out_min=0.0, out_max=1.0)

    def test_proportional_and_integral(self, cfg):
        """Test output kp·e + integrator, integrator advancing by ki·e·dt."""
        state = PiState()

        assert pi_update(0.5, state, cfg, 0.1) == pytest.approx(0.5)
        assert state.integrator == pytest.approx(0.5)
        assert pi_update(0.5, state, cfg, 0.1) == pytest.approx(1.0)
        assert state.integrator == pytest.approx(1.0)
        assert not state.saturated

    def test_conditional_integration(self, cfg):
        """Test the integrator freezes while saturated and moves again once unclamped."""
        state = PiState(integrator=1.0)

        assert pi_update(0.5, state, cfg, 0.1) == 1.0
        assert state.saturated
        assert state.integrator == pytest.approx(1.0)

        assert pi_update(-0.2, state, cfg, 0.1) == pytest.approx(0.8)
        assert not state.saturated
        assert state.integrator == pytest.approx(0.8)

    def test_saturated_period_freezes_integrator_for_any_error_sign(self):
        """Test a clamped output leaves the integrator untouched even when the error reverses."""
        cfg = PiConfig(kp=0.0, ki=1.0, out_min=0.0, out_max=1.0)
        state = PiState(integrator=2.0)

        assert pi_update(-0.1, state, cfg, 0.1) == 1.0
        assert state.saturated
        assert state.integrator == 2.0

        state = PiState(integrator=-1.0)
        assert pi_update(0.1, state, cfg, 0.1) == 0.0
        assert state.saturated
        assert state.integrator == -1.0

    def test_lower_saturation(self, cfg):
        """Test the output clamps at out_min."""
        state = PiState()

        assert pi_update(-3.0, state, cfg, 0.1) == 0.0
        assert state.saturated
        assert state.integrator == 0.0

    def test_boost_loop_sign(self):
        """Test a rectifier voltage above reference raises the duty."""
        cfg = PiConfig(kp=0.02, ki=2.0, out_min=0.0, out_max=0.95)
        state = PiState(integrator=0.4)

        assert boost_duty_controller(210.0, 200.0, state, cfg, 1e-4) > 0.4
        state = PiState(integrator=0.4)
        assert boost_duty_controller(190.0, 200.0, state, cfg, 1e-4) < 0.4

    def test_dclink_loop_sign(self):
        """Test a DC link above reference exports more current."""
        cfg = PiConfig(kp=5e-4, ki=0.05, out_min=0.0, out_max=80.0)
        state = PiState(integrator=10.0)

        assert dclink_current_magnitude(410.0, 400.0, state, cfg, 1e-4) > 10.0

    def test_dclink_output_never_negative(self):
        """Test the current amplitude is floored at zero."""
        cfg = PiConfig(kp=5e-4, ki=0.05, out_min=0.0, out_max=80.0)

        assert dclink_current_magnitude(300.0, 400.0, PiState(), cfg, 1e-4) == 0.0


class TestReferencesAndComparator:
    """Test unity-power-factor references and the hysteresis comparator."""

    def test_references_in_phase_with_grid(self):
        """Test the reference set at t = 0."""
        assert reference_currents(10.0, 0.0, 50.0) == pytest.approx((10.0, -5.0, -5.0))

    def test_references_sum_to_zero(self):
        """Test the three references cancel at any instant."""
        for t in (0.0, 0.0013, 0.0071, 0.019):
            assert abs(sum(reference_currents(12.5, t, 50.0))) < 1e-12

    def test_ramped_magnitude_is_continuous_across_ticks(self):
        """Test the amplitude starts at the previous output and reaches the latest one."""
        start, target, n = 10.0, 12.0, 20
        ramp = [ramped_magnitude(start, target, k, n) for k in range(n)]

        assert ramp[0] == start
        assert ramped_magnitude(start, target, n, n) == pytest.approx(target)
        assert ramp[10] == pytest.approx(11.0)
        assert max(b - a for a, b in zip(ramp, ramp[1:])) == pytest.approx((target - start) / n)

    def test_comparator_thresholds(self):
        """Test i_e ≥ h drives the leg low and i_e ≤ −h drives it high."""
        out = hysteresis_comparator((1.0, -1.0, 0.0), (0.0, 0.0, 0.0), 0.5, (1, 0, 1))

        assert out == (0, 1, 1)

    def test_comparator_latch(self):
        """Test errors strictly inside the band keep the previous state."""
        out = hysteresis_comparator((0.4, -0.4, 0.0), (0.0, 0.0, 0.0), 0.5, (1, 0, 0))

        assert out == (1, 0, 0)

    def test_comparator_band_edges(self):
        """Test errors exactly at ±h switch."""
        out = hysteresis_comparator((0.5, -0.5, 0.0), (0.0, 0.0, 0.0), 0.5, (1, 0, 1))

        assert out == (0, 1, 1)

"""Tests for the quasi-static solver and static tracking."""

import numpy as np
import pytest

from wecsim.exceptions import OperatingPointError
from wecsim.models import MpptConfig
from wecsim.operating_point import (
    QuasiStaticPlant,
    export_current,
    static_power_curve,
    steady_state_at_duty,
    steady_state_at_speed,
    steady_state_at_voltage,
    track_static,
)
from wecsim.scenario import Scenario


@pytest.fixture(scope="module")
def scenario():
    return Scenario()


class TestSteadyState:
    """Test frozen-input steady states."""

    def test_power_balance_at_voltage(self, scenario):
        """Test shaft power equals electromagnetic power at the solution."""
        op = steady_state_at_voltage(scenario, 8.0, 200.0)
        friction = scenario.drivetrain.B * op.omega**2

        assert op.v_wg == 200.0
        assert op.p_turbine - friction == pytest.approx(op.p_em, rel=1e-9)
        assert op.p_em == pytest.approx(op.p_dc + op.p_cu)
        assert op.duty == pytest.approx(0.5)

    def test_grid_power_below_dc_power(self, scenario):
        """Test the filter loss is the only difference between P_dc and P_grid."""
        op = steady_state_at_voltage(scenario, 8.0, 200.0)
        loss = 1.5 * scenario.converter.R_f * op.i_grid**2

        assert op.p_grid == pytest.approx(op.p_dc - loss)
        assert 0 < op.p_grid < op.p_dc

    def test_export_current(self, scenario):
        """Test the exported current carries the requested power through R_f."""
        conv = scenario.converter
        i = export_current(4000.0, conv)

        assert 1.5 * conv.E_grid * i + 1.5 * conv.R_f * i**2 == pytest.approx(4000.0)
        assert export_current(0.0, conv) == 0.0

    def test_duty_maps_to_voltage(self, scenario):
        """Test a frozen duty is the voltage (1−D)·v_o_ref."""
        by_duty = steady_state_at_duty(scenario, 8.0, 0.5)

        assert by_duty.v_wg == pytest.approx(200.0)
        assert by_duty.p_dc == pytest.approx(steady_state_at_voltage(scenario, 8.0, 200.0).p_dc)

    def test_speed_and_voltage_agree(self, scenario):
        """Test holding the speed found at a voltage returns that voltage."""
        op = steady_state_at_voltage(scenario, 10.0, 250.0)
        back = steady_state_at_speed(scenario, 10.0, op.omega)

        assert back.v_wg == pytest.approx(250.0, rel=1e-6)
        assert back.p_dc == pytest.approx(op.p_dc, rel=1e-6)

    def test_free_spin_above_no_load_voltage(self, scenario):
        """Test a reference above the free-spinning voltage carries no power."""
        op = steady_state_at_voltage(scenario, 8.0, 300.0)

        assert op.i_dc == 0.0
        assert op.p_dc == 0.0
        assert op.cp == pytest.approx(0.0, abs=1e-3)

    def test_non_positive_voltage_rejected(self, scenario):
        """Test v_wg <= 0 raises OperatingPointError."""
        with pytest.raises(OperatingPointError):
            steady_state_at_voltage(scenario, 8.0, 0.0)

    def test_non_positive_speed_rejected(self, scenario):
        """Test omega <= 0 raises OperatingPointError."""
        with pytest.raises(OperatingPointError):
            steady_state_at_speed(scenario, 8.0, 0.0)


class TestStaticCurves:
    """Test the static P(V), P(D) and P(Ω) curves."""

    @pytest.mark.parametrize("v_wind, v_opt", [(6.0, 170.0), (8.0, 219.0), (10.0, 258.0)])
    def test_optimum_voltage(self, scenario, v_wind, v_opt):
        """Test the location of the static power maximum."""
        best = QuasiStaticPlant(scenario, v_wind).argmax(100.0, 340.0, step=1.0)

        assert best.v_wg == pytest.approx(v_opt, abs=4.0)
        assert best.lam == pytest.approx(scenario.turbine.lambda_opt, rel=0.03)

    def test_unimodal(self, scenario):
        """Test P(V) rises to a single peak and then falls."""
        curve = static_power_curve(scenario, 8.0, np.arange(100.0, 281.0, 2.0))
        power = np.array([op.p_dc for op in curve])
        peak = int(np.argmax(power))
        steps = np.diff(power)

        assert 0 < peak < power.size - 1
        assert np.all(steps[:peak] >= -1e-6)
        assert np.all(steps[peak:] <= 1e-6)

    @pytest.mark.parametrize("v_wind", [8.0, 10.0])
    def test_duty_and_speed_maxima_coincide(self, scenario, v_wind):
        """Test P(D) and P(Ω) peak at the same rectifier voltage."""
        d_step = 0.0025
        duties = np.arange(0.2, 0.6, d_step)
        by_duty = max(
            (steady_state_at_duty(scenario, v_wind, float(d)) for d in duties),
            key=lambda op: op.p_dc,
        )

        w_step = 0.02
        centre = scenario.turbine.lambda_opt * v_wind / scenario.turbine.r
        speeds = np.arange(centre - 2.0, centre + 2.0, w_step)
        by_speed = max(
            (steady_state_at_speed(scenario, v_wind, float(w)) for w in speeds),
            key=lambda op: op.p_dc,
        )

        cell = d_step * scenario.control.v_o_ref + 20.0 * w_step
        assert by_duty.v_wg == pytest.approx(by_speed.v_wg, abs=cell)


class TestStaticTracking:
    """Step-and-search against the quasi-static plant."""

    @pytest.mark.parametrize("v_wind", [6.0, 8.0, 10.0, 12.0])
    def test_fixed_step_converges_and_stays(self, scenario, v_wind):
        """Test the tracker reaches 2δ of the optimum within 80 decisions and stays there."""
        cfg = MpptConfig(delta_v=4.0)
        plant = QuasiStaticPlant(scenario, v_wind)
        best = plant.argmax(cfg.v_ref_min, cfg.v_ref_max, step=0.25)
        history = track_static(plant, cfg, 140, v_start=cfg.v_ref_min)
        refs = np.array([s.v_ref for s in history])
        near = np.abs(refs - best.v_wg) <= 2 * cfg.delta_v + 0.25

        first = int(np.argmax(near))
        assert near[first]
        assert first < 80
        assert np.all(near[first:])

    def test_steady_oscillation_amplitude(self, scenario):
        """Test the settled reference swings by at most 2δ."""
        cfg = MpptConfig(delta_v=4.0)
        history = track_static(QuasiStaticPlant(scenario, 8.0), cfg, 140, v_start=40.0)
        tail = [s.v_ref for s in history[-40:]]

        assert max(tail) - min(tail) <= 2 * cfg.delta_v + 1e-9

    def test_adaptive_no_slower_than_unit_step(self, scenario):
        """Test the adaptive tracker enters ±2·step_min no later than δ = 1 does."""
        adaptive = MpptConfig(adaptive=True, step_gain=0.2, step_min=1.0, step_max=8.0)
        fixed = MpptConfig(delta_v=1.0)
        plant = QuasiStaticPlant(scenario, 8.0)
        target = plant.argmax(40.0, 360.0, step=0.25).v_wg

        def first_entry(cfg):
            refs = np.array([s.v_ref for s in track_static(plant, cfg, 400, v_start=40.0)])
            inside = np.abs(refs - target) <= 2 * adaptive.step_min + 0.25
            assert inside.any()
            return int(np.argmax(inside))

        assert first_entry(adaptive) <= first_entry(fixed)

    def test_measure_free_spin(self, scenario):
        """Test a reference above the free-spinning voltage reads no power at V0."""
        plant = QuasiStaticPlant(scenario, 8.0)
        p, v = plant.measure(350.0)

        assert p == 0.0
        assert v < 350.0

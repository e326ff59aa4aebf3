"""Unit tests for the PMSG model and the averaged diode bridge."""

import math

import numpy as np
import pytest

from wecsim.machine import (
    MachineState,
    commutation_resistance,
    copper_loss,
    electromagnetic_torque,
    pmsg_derivs,
    rectifier_average,
    rectifier_current,
    rectifier_no_load_voltage,
    stator_currents,
)
from wecsim.models import DrivetrainParams, GeneratorParams
from wecsim.simcore import integrate_step


@pytest.fixture
def gen():
    return GeneratorParams()


class TestPmsgModel:
    """Test the dq current equations and torque."""

    def test_open_circuit_q_axis_voltage(self, gen):
        """Test zero current is an equilibrium when uq = P·ωg·M·i_f."""
        omega_g = 100.0
        state = MachineState(id=0.0, iq=0.0, omega_g=omega_g)
        uq = gen.P * omega_g * gen.M * gen.i_f

        did, diq = pmsg_derivs(state, 0.0, uq, gen)

        assert did == pytest.approx(0.0)
        assert diq == pytest.approx(0.0, abs=1e-9)

    def test_d_axis_time_constant(self, gen):
        """Test a d-axis voltage step at standstill rises with τ = Ld/Rd."""
        ud = 4.0
        tau = gen.Ld / gen.Rd
        dt = tau / 500

        def deriv(t, x):
            did, diq = pmsg_derivs(MachineState(x[0], x[1], 0.0), ud, 0.0, gen)
            return np.array([did, diq])

        x = np.zeros(2)
        for k in range(500):
            x = integrate_step(x, deriv, dt, k * dt)

        expected = ud / gen.Rd * (1.0 - math.exp(-1.0))
        assert x[0] == pytest.approx(expected, rel=0.02)
        assert x[1] == pytest.approx(0.0, abs=1e-12)

    def test_torque_surface_mounted(self, gen):
        """Test Te = 1.5·P·M·i_f·iq with equal inductances."""
        assert electromagnetic_torque(3.0, 10.0, gen) == pytest.approx(1.5 * 4 * 0.3 * 10.0)

    def test_torque_reluctance_term(self):
        """Test the (Ld − Lq)·id·iq term with salient inductances."""
        gen = GeneratorParams(Ld=3e-3, Lq=2e-3)

        assert electromagnetic_torque(2.0, 10.0, gen) == pytest.approx(
            1.5 * gen.P * (gen.flux * 10.0 + 1e-3 * 2.0 * 10.0)
        )

    def test_electrical_speed(self, gen):
        """Test ωe = P·ωg."""
        assert MachineState(0.0, 0.0, 50.0).omega_e(gen) == pytest.approx(200.0)

    def test_stator_currents_match_power(self, gen):
        """Test Te·ωg reproduces the electromagnetic power with id = 0."""
        omega_g = 120.0
        omega_e = gen.P * omega_g
        id_, iq = stator_currents(omega_e, 4500.0, gen)

        assert id_ == 0.0
        assert electromagnetic_torque(id_, iq, gen) * omega_g == pytest.approx(4500.0)

    def test_stator_currents_at_standstill(self, gen):
        """Test no current is reported without rotation."""
        assert stator_currents(0.0, 100.0, gen) == (0.0, 0.0)


class TestRectifier:
    """Test the averaged six-pulse bridge."""

    def test_no_load_constant(self, gen):
        """Test the no-load voltage per turbine rad/s with the default ratios."""
        drive = DrivetrainParams()
        omega_e = gen.P * drive.G * 1.0

        assert rectifier_no_load_voltage(omega_e, gen) == pytest.approx(9.924, abs=1e-3)

    def test_no_load_formula(self, gen):
        """Test V0 = (3√3/π)·ωe·M·i_f."""
        omega_e = 400.0
        expected = 3.0 * math.sqrt(3.0) / math.pi * omega_e * gen.flux

        assert rectifier_no_load_voltage(omega_e, gen) == pytest.approx(expected)

    def test_commutation_droop(self, gen):
        """Test the droop slope (3/π)·ωe·L_c."""
        omega_e = 400.0
        v0 = rectifier_no_load_voltage(omega_e, gen)
        r_c = commutation_resistance(omega_e, gen)

        assert r_c == pytest.approx(3.0 / math.pi * omega_e * 2e-3)
        assert rectifier_average(omega_e, 10.0, gen) == pytest.approx(v0 - 10.0 * r_c)
        assert rectifier_average(omega_e, 0.0, gen) == pytest.approx(v0)

    def test_output_floored_at_zero(self, gen):
        """Test the bridge never reports a negative voltage."""
        assert rectifier_average(400.0, 1e6, gen) == 0.0

    def test_current_inverts_average(self, gen):
        """Test rectifier_current is the inverse of rectifier_average."""
        omega_e = 480.0
        i_dc = rectifier_current(omega_e, 200.0, gen)

        assert i_dc > 0
        assert rectifier_average(omega_e, i_dc, gen) == pytest.approx(200.0)

    def test_reverse_current_blocked(self, gen):
        """Test zero current when the capacitor is at or above no-load voltage."""
        omega_e = 480.0
        v0 = rectifier_no_load_voltage(omega_e, gen)

        assert rectifier_current(omega_e, v0, gen) == 0.0
        assert rectifier_current(omega_e, v0 + 50.0, gen) == 0.0
        assert rectifier_current(0.0, 10.0, gen) == 0.0

    def test_copper_loss(self, gen):
        """Test P_cu = 2·R_s·i_dc² for quasi-square phase currents."""
        assert copper_loss(10.0, gen) == pytest.approx(2.0 * 0.4 * 100.0)

"""Full plant: turbine, PMSG with averaged bridge, boost, DC link and grid filter."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from enum import IntEnum
from typing import TYPE_CHECKING

import numpy as np

from .aero import drivetrain_step_deriv, power_coefficient, turbine_torque
from .exceptions import NumericalError
from .machine import (
    copper_loss,
    electromagnetic_torque,
    rectifier_current,
    stator_currents,
)
from .models import ConverterParams, DrivetrainParams, GeneratorParams, TurbineParams
from .power import (
    PowerState,
    boost_derivs,
    dc_link_deriv,
    grid_current_derivs,
    grid_emf,
    inverter_dc_current,
    stored_energy,
    vsc_phase_voltage,
)

if TYPE_CHECKING:
    from .scenario import Scenario


class StateIndex(IntEnum):
    """Positions in the plant state vector."""
    OMEGA = 0
    I_LB = 1
    V_WG = 2
    V_O = 3
    I_A = 4
    I_B = 5
    I_C = 6


STATE_NAMES: tuple[str, ...] = ("omega", "i_lb", "v_wg", "v_o", "i_a", "i_b", "i_c")


@dataclass(frozen=True)
class PlantInputs:
    """Inputs held constant across one plant step."""
    v_wind: float
    duty: float
    switches: tuple[int, int, int]


class Plant:
    """
    Right-hand side and algebraic outputs of the complete conversion chain.

    The PMSG currents are algebraic: the averaged bridge sets the DC current
    from the rectifier-side voltage, and the dq currents follow from the power
    it carries with id = 0. The state vector is laid out by :class:`StateIndex`.

    Args:
        turbine: Rotor aerodynamics
        drivetrain: Inertia, gearbox and friction
        generator: PMSG parameters
        converter: Boost, DC link and grid filter parameters

    Example:
        >>> plant = Plant.from_scenario(scenario)
        >>> dx = plant.derivatives(0.0, x, PlantInputs(8.0, 0.45, (1, 0, 0)))
    """

    def __init__(
        self,
        turbine: TurbineParams,
        drivetrain: DrivetrainParams,
        generator: GeneratorParams,
        converter: ConverterParams,
    ):
        self.turbine = turbine
        self.drivetrain = drivetrain
        self.generator = generator
        self.converter = converter
        self._electrical_per_rotor = generator.P * drivetrain.G

    @classmethod
    def from_scenario(cls, scenario: Scenario) -> Plant:
        return cls(scenario.turbine, scenario.drivetrain, scenario.generator, scenario.converter)

    def electrical_speed(self, omega: float) -> float:
        """ωe = P·G·ω for a turbine shaft speed ω."""
        return self._electrical_per_rotor * omega

    def derivatives(self, t: float, x: np.ndarray, inputs: PlantInputs) -> np.ndarray:
        """
        Evaluate dx/dt.

        Raises:
            NumericalError: If the rotor has stalled (ω <= 0)
        """
        omega, i_lb, v_wg, v_o, i_a, i_b, i_c = x.tolist()
        if omega <= 0.0:
            raise NumericalError("omega", t, reason="rotor stalled")
        gen = self.generator
        conv = self.converter

        v = inputs.v_wind
        t_turb = turbine_torque(self.turbine, v, self.turbine.r * omega / v)
        omega_e = self._electrical_per_rotor * omega
        i_rect = rectifier_current(omega_e, v_wg, gen)
        p_em = v_wg * i_rect + copper_loss(i_rect, gen)
        id_, iq = stator_currents(omega_e, p_em, gen)
        d_omega = drivetrain_step_deriv(
            omega, t_turb, electromagnetic_torque(id_, iq, gen), self.drivetrain
        )

        di_lb, dv_wg, i_boost = boost_derivs(i_lb, v_wg, v_o, inputs.duty, i_rect, conv)

        i_abc = (i_a, i_b, i_c)
        u_abc = vsc_phase_voltage(inputs.switches, v_o)
        i_inv = inverter_dc_current(u_abc, i_abc, v_o)
        dv_o = dc_link_deriv(v_o, i_boost, i_inv, conv.C_dc)
        di_a, di_b, di_c = grid_current_derivs(
            u_abc, grid_emf(t, conv.E_grid, conv.f_grid), i_abc, conv
        )
        return np.array([d_omega, di_lb, dv_wg, dv_o, di_a, di_b, di_c])

    def rhs(self, inputs: PlantInputs) -> Callable[[float, np.ndarray], np.ndarray]:
        """Bind ``inputs`` and return f(t, x) for the integrator."""

        def f(t: float, x: np.ndarray) -> np.ndarray:
            return self.derivatives(t, x, inputs)

        return f

    @staticmethod
    def power_state(x: np.ndarray, switches: tuple[int, int, int]) -> PowerState:
        """Power-stage view of the state vector."""
        _, i_lb, v_wg, v_o, i_a, i_b, i_c = x.tolist()
        return PowerState(i_lb, v_wg, v_o, (i_a, i_b, i_c), switches)

    @staticmethod
    def enforce_constraints(x: np.ndarray) -> np.ndarray:
        """Post-step projection: diode non-negativity and a zero current sum."""
        if x[StateIndex.I_LB] < 0.0:
            x[StateIndex.I_LB] = 0.0
        if x[StateIndex.V_WG] < 0.0:
            x[StateIndex.V_WG] = 0.0
        x[StateIndex.I_A :] -= x[StateIndex.I_A :].mean()
        return x

    def outputs(self, t: float, x: np.ndarray, inputs: PlantInputs) -> dict[str, float]:
        """Algebraic quantities at (t, x) used for trace channels."""
        omega, i_lb, v_wg, v_o, i_a, i_b, i_c = x.tolist()
        gen = self.generator
        conv = self.converter
        v = inputs.v_wind
        lam = self.turbine.r * omega / v
        cp = power_coefficient(lam, self.turbine.cp_coeffs)
        t_turb = turbine_torque(self.turbine, v, lam) if lam > 0 else 0.0

        omega_e = self._electrical_per_rotor * omega
        i_rect = rectifier_current(omega_e, v_wg, gen)
        p_cu = copper_loss(i_rect, gen)
        p_em = v_wg * i_rect + p_cu
        id_, iq = stator_currents(omega_e, p_em, gen)

        i_abc = (i_a, i_b, i_c)
        e_abc = grid_emf(t, conv.E_grid, conv.f_grid)
        u_abc = vsc_phase_voltage(inputs.switches, v_o)
        return {
            "v_wind": v,
            "omega": omega,
            "omega_g": self.drivetrain.G * omega,
            "lambda": lam,
            "cp": cp,
            "p_turbine": t_turb * omega,
            "t_turbine": t_turb,
            "t_gen": electromagnetic_torque(id_, iq, gen),
            "id": id_,
            "iq": iq,
            "i_rect": i_rect,
            "v_wg": v_wg,
            "i_lb": i_lb,
            "v_o": v_o,
            "p_em": p_em,
            "p_cu": p_cu,
            "p_dc": v_wg * i_lb,
            "p_grid": e_abc[0] * i_a + e_abc[1] * i_b + e_abc[2] * i_c,
            "p_rf": conv.R_f * (i_a * i_a + i_b * i_b + i_c * i_c),
            "e_stored": stored_energy(self.power_state(x, inputs.switches), conv),
            "e_a": e_abc[0],
            "e_b": e_abc[1],
            "e_c": e_abc[2],
            "u_a": u_abc[0],
            "u_b": u_abc[1],
            "u_c": u_abc[2],
            "i_a": i_a,
            "i_b": i_b,
            "i_c": i_c,
        }

"""Quasi-static steady states of the conversion chain.

With the electrical loops settled, a frozen rectifier-side voltage (or a frozen
duty, or a frozen rotor speed) determines a unique operating point. These maps
give the static P(V), P(D) and P(Ω) curves, the brute-force oracle for the
tracker, and the warm-start initial condition.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.optimize import brentq

from .aero import power_coefficient
from .control import MpptState, mppt_update
from .exceptions import OperatingPointError
from .machine import (
    commutation_resistance,
    copper_loss,
    rectifier_current,
    rectifier_no_load_voltage,
)
from .models import ConverterParams, MpptConfig
from .scenario import Scenario

# Speed scan used to bracket the torque-balance root, as tip-speed ratios.
_SCAN_LAMBDA_MIN = 0.05
_SCAN_POINTS = 400


@dataclass(frozen=True)
class OperatingPoint:
    """
    One steady state of the plant.

    Attributes:
        v_wind: Wind speed, m/s
        omega: Turbine shaft speed, rad/s
        v_wg: Rectifier-side voltage, V
        i_dc: Bridge (and boost inductor) current, A
        duty: Boost duty holding v_wg against the DC-link setpoint
        lam: Tip-speed ratio
        cp: Power coefficient
        p_turbine: Aerodynamic power, W
        p_em: Electromagnetic power, W
        p_cu: Stator copper loss, W
        p_dc: Power into the boost stage, W
        i_grid: Grid phase current amplitude, A
        p_grid: Power delivered to the grid, W
    """
    v_wind: float
    omega: float
    v_wg: float
    i_dc: float
    duty: float
    lam: float
    cp: float
    p_turbine: float
    p_em: float
    p_cu: float
    p_dc: float
    i_grid: float
    p_grid: float


def export_current(p_dc: float, conv: ConverterParams) -> float:
    """Grid current amplitude that exports ``p_dc`` through the R_f filter."""
    if p_dc <= 0:
        return 0.0
    a = 1.5 * conv.R_f
    b = 1.5 * conv.E_grid
    if a == 0:
        return p_dc / b
    return (-b + math.sqrt(b * b + 4.0 * a * p_dc)) / (2.0 * a)


class _Chain:
    """Vectorised static relations for one scenario and wind speed."""

    def __init__(self, scenario: Scenario, v_wind: float):
        if v_wind <= 0:
            raise OperatingPointError(f"Wind speed must be > 0 (got {v_wind})")
        self.scenario = scenario
        self.v_wind = v_wind
        t = scenario.turbine
        self.k_aero = 0.5 * t.rho * t.area * v_wind**3
        self.omega_per_lambda = v_wind / t.r
        self.electrical_per_rotor = scenario.generator.P * scenario.drivetrain.G
        gen = scenario.generator
        self.k_v = rectifier_no_load_voltage(1.0, gen)
        self.k_r = commutation_resistance(1.0, gen)
        self.r_s = gen.stator_resistance

    def shaft_power(self, omega):
        """Aerodynamic power minus friction, W."""
        lam = omega / self.omega_per_lambda
        cp = np.maximum(npoly.polyval(lam, self.scenario.turbine.cp_coeffs), 0.0)
        return self.k_aero * cp - self.scenario.drivetrain.B * omega * omega

    def electromagnetic_power(self, omega, v_wg):
        we = self.electrical_per_rotor * omega
        v0 = self.k_v * we
        i = np.where(v0 > v_wg, (v0 - v_wg) / (self.k_r * we), 0.0)
        return v_wg * i + 2.0 * self.r_s * i * i

    def net_power(self, omega, v_wg):
        return self.shaft_power(omega) - self.electromagnetic_power(omega, v_wg)

    def point(self, omega: float, v_wg: float) -> OperatingPoint:
        scenario = self.scenario
        gen = scenario.generator
        we = self.electrical_per_rotor * omega
        i_dc = rectifier_current(we, v_wg, gen)
        p_cu = copper_loss(i_dc, gen)
        p_dc = v_wg * i_dc
        lam = omega / self.omega_per_lambda
        cp = float(power_coefficient(lam, scenario.turbine.cp_coeffs))
        i_grid = export_current(p_dc, scenario.converter)
        v_o = scenario.control.v_o_ref
        duty = min(max(1.0 - v_wg / v_o, 0.0), scenario.converter.D_max)
        return OperatingPoint(
            v_wind=self.v_wind,
            omega=omega,
            v_wg=v_wg,
            i_dc=i_dc,
            duty=duty,
            lam=lam,
            cp=cp,
            p_turbine=self.k_aero * cp,
            p_em=p_dc + p_cu,
            p_cu=p_cu,
            p_dc=p_dc,
            i_grid=i_grid,
            p_grid=p_dc - 1.5 * scenario.converter.R_f * i_grid * i_grid,
        )


def steady_state_at_voltage(scenario: Scenario, v_wind: float, v_wg: float) -> OperatingPoint:
    """
    Steady state with the rectifier-side voltage held at ``v_wg``.

    The rotor speed is the first stable torque-balance root reached while
    accelerating from rest (net power changes sign from + to −).

    Raises:
        OperatingPointError: If no torque balance exists on the scanned range
    """
    if v_wg <= 0:
        raise OperatingPointError(f"Rectifier voltage must be > 0 (got {v_wg})")
    chain = _Chain(scenario, v_wind)
    t = scenario.turbine
    grid = np.linspace(_SCAN_LAMBDA_MIN, t.lambda_max, _SCAN_POINTS) * chain.omega_per_lambda
    net = chain.net_power(grid, v_wg)
    if net[0] <= 0:
        raise OperatingPointError(
            f"Rotor cannot start at v={v_wind} m/s with v_wg={v_wg} V (net torque <= 0)"
        )
    falling = np.nonzero(net <= 0)[0]
    if falling.size == 0:
        raise OperatingPointError(
            f"No torque balance below lambda_max at v={v_wind} m/s, v_wg={v_wg} V"
        )
    k = int(falling[0])
    omega = brentq(
        lambda w: float(chain.net_power(w, v_wg)), grid[k - 1], grid[k], xtol=1e-12, rtol=1e-14
    )
    return chain.point(float(omega), v_wg)


def steady_state_at_duty(scenario: Scenario, v_wind: float, duty: float) -> OperatingPoint:
    """Steady state for a frozen boost duty with the DC link at its setpoint."""
    return steady_state_at_voltage(scenario, v_wind, (1.0 - duty) * scenario.control.v_o_ref)


def steady_state_at_speed(scenario: Scenario, v_wind: float, omega: float) -> OperatingPoint:
    """
    Steady state with the rotor held at ``omega``.

    The generator absorbs the shaft power; the rectifier voltage is found on
    the upper half of the bridge characteristic, where power falls as voltage
    rises.

    Raises:
        OperatingPointError: If the bridge cannot absorb the shaft power
    """
    if omega <= 0:
        raise OperatingPointError(f"Rotor speed must be > 0 (got {omega})")
    chain = _Chain(scenario, v_wind)
    p_req = float(chain.shaft_power(omega))
    v0 = chain.k_v * chain.electrical_per_rotor * omega
    if p_req <= 0:
        return chain.point(omega, v0)
    p_max = float(chain.electromagnetic_power(omega, 0.5 * v0))
    if p_max < p_req:
        raise OperatingPointError(
            f"Bridge cannot absorb {p_req:.0f} W at omega={omega:.2f} rad/s "
            f"(maximum {p_max:.0f} W)"
        )
    v_wg = brentq(
        lambda v: float(chain.electromagnetic_power(omega, v)) - p_req,
        0.5 * v0,
        v0,
        xtol=1e-10,
    )
    return chain.point(omega, float(v_wg))


def static_power_curve(
    scenario: Scenario, v_wind: float, voltages: Sequence[float]
) -> list[OperatingPoint]:
    """Operating points for each frozen rectifier voltage in ``voltages``."""
    return [steady_state_at_voltage(scenario, v_wind, float(v)) for v in voltages]


class QuasiStaticPlant:
    """
    The plant as the tracker sees it once every loop has settled.

    ``measure(v_ref)`` returns the averaged DC power and the rectifier voltage
    actually reached. When the reference is above what the free-spinning rotor
    can produce, the voltage sits at the open-circuit value and no power flows.

    Example:
        >>> plant = QuasiStaticPlant(scenario, v_wind=8.0)
        >>> p, v = plant.measure(200.0)
    """

    def __init__(self, scenario: Scenario, v_wind: float):
        self.scenario = scenario
        self.v_wind = v_wind
        self._chain = _Chain(scenario, v_wind)
        self._cache: dict[float, tuple[float, float]] = {}

    def operating_point(self, v_ref: float) -> OperatingPoint:
        return steady_state_at_voltage(self.scenario, self.v_wind, v_ref)

    def measure(self, v_ref: float) -> tuple[float, float]:
        cached = self._cache.get(v_ref)
        if cached is not None:
            return cached
        op = self.operating_point(v_ref)
        if op.i_dc > 0:
            result = (op.p_dc, v_ref)
        else:
            we = self._chain.electrical_per_rotor * op.omega
            result = (0.0, self._chain.k_v * we)
        self._cache[v_ref] = result
        return result

    def argmax(self, v_min: float, v_max: float, step: float = 0.25) -> OperatingPoint:
        """Brute-force maximum of the static P(V) curve on a ``step`` grid."""
        grid = np.arange(v_min, v_max + step / 2, step)
        points = static_power_curve(self.scenario, self.v_wind, grid)
        return max(points, key=lambda op: op.p_dc)


def track_static(
    plant: QuasiStaticPlant,
    cfg: MpptConfig,
    n_decisions: int,
    v_start: float | None = None,
) -> list[MpptState]:
    """
    Run the tracker against the quasi-static plant.

    Args:
        plant: Frozen plant to measure
        cfg: Tracker settings (fixed or adaptive per ``cfg.adaptive``)
        n_decisions: Number of decisions to apply
        v_start: Initial reference (defaults to ``cfg.v_ref_init``)

    Returns:
        The tracker state after every decision, in order
    """
    v0 = cfg.v_ref_init if v_start is None else v_start
    state = MpptState(p_prev=0.0, v_prev=v0, v_ref=v0)
    history = []
    for _ in range(n_decisions):
        p, v = plant.measure(state.v_ref)
        state = mppt_update(p, v, state, cfg)
        history.append(state)
    return history

"""Averaged boost stage, DC link, two-level VSC and grid L-filter."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

from .models import ConverterParams

_TWO_PI = 2.0 * math.pi
_PHASE_SHIFT = _TWO_PI / 3.0


@dataclass(frozen=True)
class PowerState:
    """
    Power-stage portion of the plant state.

    Attributes:
        i_lb: Boost inductor current, A (>= 0, diode path)
        v_wg: Rectifier-side capacitor voltage, V (>= 0)
        v_o: DC-link voltage, V
        i_abc: Grid phase currents, A (sum is zero)
        switch_abc: Leg states, 1 = upper switch on
    """
    i_lb: float
    v_wg: float
    v_o: float
    i_abc: tuple[float, float, float] = (0.0, 0.0, 0.0)
    switch_abc: tuple[int, int, int] = (0, 0, 0)


def boost_derivs(
    i_lb: float,
    v_wg: float,
    v_o: float,
    duty: float,
    i_rect: float,
    params: ConverterParams,
) -> tuple[float, float, float]:
    """
    Averaged continuous-conduction boost with a rectifier-side capacitor.

    di_Lb/dt = (v_WG − (1−D)·v_o)/L_b, C1·dv_WG/dt = i_rect − i_Lb and the DC
    node receives (1−D)·i_Lb. The inductor current cannot go negative; when it
    sits at zero and would fall, its derivative is held at zero.

    Args:
        i_lb: Inductor current, A
        v_wg: Rectifier-side voltage, V
        v_o: DC-link voltage, V
        duty: Duty cycle, clamped to [0, D_max]
        i_rect: Bridge output current, A
        params: Converter parameters

    Returns:
        (di_Lb/dt, dv_WG/dt, average current (1−D)·i_Lb delivered to the DC link)
    """
    d = min(max(duty, 0.0), params.D_max)
    off = 1.0 - d
    di_lb = (v_wg - off * v_o) / params.L_b
    if i_lb <= 0.0 and di_lb < 0.0:
        di_lb = 0.0
    dv_wg = (i_rect - i_lb) / params.C1
    return di_lb, dv_wg, off * i_lb


def dc_link_deriv(v_o: float, i_in_dc: float, i_inv_dc: float, c_dc: float) -> float:
    """dv_o/dt = (i_in − i_inv)/C_dc."""
    return (i_in_dc - i_inv_dc) / c_dc


def vsc_phase_voltage(switch_abc: Sequence[int], v_o: float) -> tuple[float, float, float]:
    """
    Phase voltages of a two-level three-wire inverter.

    Each leg drives ±v_o/2 against the DC midpoint; the common mode is removed
    because the neutral is not connected.

    Example:
        >>> vsc_phase_voltage((1, 0, 0), 600.0)
        (400.0, -200.0, -200.0)
    """
    half = 0.5 * v_o
    pa = half if switch_abc[0] else -half
    pb = half if switch_abc[1] else -half
    pc = half if switch_abc[2] else -half
    mean = (pa + pb + pc) / 3.0
    return pa - mean, pb - mean, pc - mean


def inverter_dc_current(
    u_abc: Sequence[float], i_abc: Sequence[float], v_o: float
) -> float:
    """DC current drawn by a lossless inverter: v_o·i_dc = Σ u_k·i_k."""
    return (u_abc[0] * i_abc[0] + u_abc[1] * i_abc[1] + u_abc[2] * i_abc[2]) / v_o


def grid_current_derivs(
    u_abc: Sequence[float],
    e_abc: Sequence[float],
    i_abc: Sequence[float],
    params: ConverterParams,
) -> tuple[float, float, float]:
    """Per-phase L-R filter: di_k/dt = (u_k − e_k − R_f·i_k)/L."""
    inv_l = 1.0 / params.L
    r = params.R_f
    return (
        (u_abc[0] - e_abc[0] - r * i_abc[0]) * inv_l,
        (u_abc[1] - e_abc[1] - r * i_abc[1]) * inv_l,
        (u_abc[2] - e_abc[2] - r * i_abc[2]) * inv_l,
    )


def grid_emf(t: float, e_grid: float, f_grid: float) -> tuple[float, float, float]:
    """Balanced stiff grid E·cos(2πf·t − 2πk/3), k = 0, 1, 2."""
    theta = _TWO_PI * f_grid * t
    return (
        e_grid * math.cos(theta),
        e_grid * math.cos(theta - _PHASE_SHIFT),
        e_grid * math.cos(theta + _PHASE_SHIFT),
    )


def stored_energy(state: PowerState, params: ConverterParams) -> float:
    """Energy held in L_b, C1, C_dc and the three filter inductors, J."""
    i_abc = state.i_abc
    return 0.5 * (
        params.L_b * state.i_lb * state.i_lb
        + params.C1 * state.v_wg * state.v_wg
        + params.C_dc * state.v_o * state.v_o
        + params.L * (i_abc[0] ** 2 + i_abc[1] ** 2 + i_abc[2] ** 2)
    )

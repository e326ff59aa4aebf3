"""PMSG dq model and the averaged three-phase diode bridge."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .models import GeneratorParams

# Averaged six-pulse bridge constants.
_NO_LOAD_GAIN = 3.0 * math.sqrt(6.0) / math.pi  # times E_ph,rms
_COMMUTATION_GAIN = 3.0 / math.pi  # times ωe·L_c
_SQRT2 = math.sqrt(2.0)
# RMS of a 120° quasi-square phase current per ampere of DC current.
PHASE_RMS_PER_DC = math.sqrt(2.0 / 3.0)


@dataclass(frozen=True)
class MachineState:
    """Stator currents in the rotor frame and generator shaft speed."""
    id: float
    iq: float
    omega_g: float

    def omega_e(self, params: GeneratorParams) -> float:
        """Electrical speed ωe = P·ωg, rad/s."""
        return params.P * self.omega_g


def pmsg_derivs(
    state: MachineState, ud: float, uq: float, params: GeneratorParams
) -> tuple[float, float]:
    """
    dq current derivatives of the PMSG.

    did/dt = (ud + P·ωg·Lq·iq − Rd·id)/Ld
    diq/dt = (uq − P·ωg·(Ld·id + M·i_f) − Rq·iq)/Lq

    Returns:
        (did/dt, diq/dt) in A/s
    """
    we = params.P * state.omega_g
    did = (ud + we * params.Lq * state.iq - params.Rd * state.id) / params.Ld
    diq = (uq - we * (params.Ld * state.id + params.flux) - params.Rq * state.iq) / params.Lq
    return did, diq


def electromagnetic_torque(id: float, iq: float, params: GeneratorParams) -> float:
    """Te = 1.5·P·(M·i_f·iq + (Ld − Lq)·id·iq), positive when generating."""
    return 1.5 * params.P * (params.flux * iq + (params.Ld - params.Lq) * id * iq)


def phase_emf_rms(omega_e: float, params: GeneratorParams) -> float:
    """Open-circuit phase EMF, RMS volts."""
    return omega_e * params.flux / _SQRT2


def rectifier_no_load_voltage(omega_e: float, params: GeneratorParams) -> float:
    """Bridge output with no DC current: (3√3/π)·ωe·M·i_f."""
    return _NO_LOAD_GAIN * phase_emf_rms(omega_e, params)


def commutation_resistance(omega_e: float, params: GeneratorParams) -> float:
    """Equivalent droop (3/π)·ωe·L_c, Ω."""
    return _COMMUTATION_GAIN * omega_e * params.commutation_inductance


def rectifier_average(omega_e: float, i_dc: float, params: GeneratorParams) -> float:
    """
    Averaged diode-bridge output voltage.

    V_WG = (3√6/π)·E_ph,rms − (3/π)·ωe·L_c·i_dc, floored at 0 where the
    diodes stop conducting.

    Args:
        omega_e: Electrical speed, rad/s
        i_dc: Bridge output current, A (>= 0)
        params: Generator parameters

    Returns:
        V_WG in volts
    """
    v = rectifier_no_load_voltage(omega_e, params) - commutation_resistance(omega_e, params) * i_dc
    return v if v > 0.0 else 0.0


def rectifier_current(omega_e: float, v_wg: float, params: GeneratorParams) -> float:
    """
    DC current the bridge delivers into a capacitor held at ``v_wg``.

    Inverse of :func:`rectifier_average`; zero when the capacitor voltage is at
    or above the no-load voltage (reverse current blocked).
    """
    if omega_e <= 0.0:
        return 0.0
    v0 = rectifier_no_load_voltage(omega_e, params)
    if v_wg >= v0:
        return 0.0
    return (v0 - v_wg) / commutation_resistance(omega_e, params)


def copper_loss(i_dc: float, params: GeneratorParams) -> float:
    """Stator copper loss 3·R_s·I_rms² for the quasi-square currents, W."""
    i_rms = PHASE_RMS_PER_DC * i_dc
    return 3.0 * params.stator_resistance * i_rms * i_rms


def stator_currents(omega_e: float, p_em: float, params: GeneratorParams) -> tuple[float, float]:
    """
    dq currents consistent with an electromagnetic power ``p_em``.

    The d-axis current is held at zero; iq is chosen so Te·ωg = p_em.

    Returns:
        (id, iq) in amperes
    """
    if omega_e <= 0.0:
        return 0.0, 0.0
    return 0.0, 2.0 * p_em / (3.0 * omega_e * params.flux)

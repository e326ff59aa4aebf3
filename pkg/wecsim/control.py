"""Controller stack: step-and-search MPPT, PI loops, reference currents, hysteresis."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import Enum

from .models import MpptConfig, PiConfig
from .power import grid_emf

# |ΔV| below this is treated as "no voltage change" by the adaptive tracker.
ADAPTIVE_DV_EPS = 1e-6


class MpptRule(Enum):
    """
    The four step-and-search update rules, keyed by the signs of ΔP and ΔV.

    Ties count as non-negative: ΔP = 0 behaves like ΔP > 0, ΔV = 0 like ΔV > 0.
    """
    CLIMB = "climb"  # ΔP >= 0, ΔV >= 0: keep raising the reference
    HIGH_SPEED_SIDE = "high_speed_side"  # ΔP >= 0, ΔV < 0: keep lowering
    STEP_BACK = "step_back"  # ΔP < 0, ΔV >= 0: peak passed, go back down
    LOW_SPEED_SIDE = "low_speed_side"  # ΔP < 0, ΔV < 0: power falling on the low side, go up

    @property
    def direction(self) -> int:
        return 1 if self in (MpptRule.CLIMB, MpptRule.LOW_SPEED_SIDE) else -1

    @classmethod
    def classify(cls, delta_p: float, delta_v: float) -> MpptRule:
        if delta_p >= 0:
            return cls.CLIMB if delta_v >= 0 else cls.HIGH_SPEED_SIDE
        return cls.STEP_BACK if delta_v >= 0 else cls.LOW_SPEED_SIDE


@dataclass(frozen=True)
class MpptState:
    """
    Tracker memory.

    Attributes:
        p_prev: Power measured at the previous decision, W
        v_prev: Rectifier-side voltage measured at the previous decision, V
        v_ref: Current rectifier-side voltage reference, V
        rule: Rule applied at the last decision (None before the first one)
        step: Magnitude of the last reference change, V
    """
    p_prev: float
    v_prev: float
    v_ref: float
    rule: MpptRule | None = None
    step: float = 0.0

    @classmethod
    def initial(cls, cfg: MpptConfig, v_measured: float | None = None) -> MpptState:
        v0 = cfg.v_ref_init if v_measured is None else v_measured
        return cls(p_prev=0.0, v_prev=v0, v_ref=cfg.v_ref_init)


def _apply(
    p_k: float, v_meas: float, state: MpptState, cfg: MpptConfig, step: float
) -> MpptState:
    rule = MpptRule.classify(p_k - state.p_prev, v_meas - state.v_prev)
    v_ref = state.v_ref + rule.direction * step
    v_ref = min(max(v_ref, cfg.v_ref_min), cfg.v_ref_max)
    return MpptState(p_prev=p_k, v_prev=v_meas, v_ref=v_ref, rule=rule, step=step)


def mppt_step(p_k: float, v_meas: float, state: MpptState, cfg: MpptConfig) -> MpptState:
    """
    One fixed-step decision.

    Args:
        p_k: Averaged DC power for the period just ended, W
        v_meas: Rectifier-side voltage measured over the same period, V
        state: Memory from the previous decision
        cfg: Tracker settings (``delta_v`` is the step)

    Returns:
        New state with the updated reference clamped to [v_ref_min, v_ref_max]

    Example:
        >>> s = MpptState(p_prev=100.0, v_prev=200.0, v_ref=200.0)
        >>> mppt_step(105.0, 201.0, s, MpptConfig(delta_v=2.0)).v_ref
        202.0
    """
    return _apply(p_k, v_meas, state, cfg, cfg.delta_v)


def mppt_adaptive_step(
    p_k: float, v_meas: float, state: MpptState, cfg: MpptConfig
) -> MpptState:
    """Variable-step decision: δ = clamp(step_gain·|ΔP/ΔV|, step_min, step_max)."""
    delta_v = v_meas - state.v_prev
    if abs(delta_v) < ADAPTIVE_DV_EPS:
        step = cfg.step_min
    else:
        slope = abs((p_k - state.p_prev) / delta_v)
        step = min(max(cfg.step_gain * slope, cfg.step_min), cfg.step_max)
    return _apply(p_k, v_meas, state, cfg, step)


def mppt_update(p_k: float, v_meas: float, state: MpptState, cfg: MpptConfig) -> MpptState:
    """Dispatch to the fixed or adaptive tracker according to ``cfg.adaptive``."""
    if cfg.adaptive:
        return mppt_adaptive_step(p_k, v_meas, state, cfg)
    return mppt_step(p_k, v_meas, state, cfg)


@dataclass
class PiState:
    """Integrator and saturation flag of one PI loop."""
    integrator: float = 0.0
    saturated: bool = False


def pi_update(error: float, state: PiState, cfg: PiConfig, dt: float) -> float:
    """
    Advance a PI controller by one period with conditional integration.

    The output is clamp(kp·error + integrator). The integrator only moves in
    periods where the clamp left the output unchanged; a saturated period
    freezes it whatever the sign of the error.

    Args:
        error: Control error for this period
        state: Loop state, updated in place
        cfg: Gains and bounds
        dt: Controller period, s

    Returns:
        The clamped controller output
    """
    raw = cfg.kp * error + state.integrator
    out = min(max(raw, cfg.out_min), cfg.out_max)
    state.saturated = out != raw
    if not state.saturated:
        state.integrator += cfg.ki * error * dt
    return out


def boost_duty_controller(
    v_wg_meas: float, v_ref: float, pi_state: PiState, cfg: PiConfig, dt: float
) -> float:
    """
    Rectifier-voltage loop producing the boost duty.

    Raising D lowers v_WG (the generator is loaded harder), so the error is
    v_wg_meas − v_ref.
    """
    return pi_update(v_wg_meas - v_ref, pi_state, cfg, dt)


def dclink_current_magnitude(
    v_o_meas: float, v_o_ref: float, pi_state: PiState, cfg: PiConfig, dt: float
) -> float:
    """
    Squared-voltage DC-link loop producing the grid current amplitude.

    A DC link above its reference exports more current, so the error is
    v_o_meas² − v_o_ref². The result is never negative.
    """
    out = pi_update(v_o_meas * v_o_meas - v_o_ref * v_o_ref, pi_state, cfg, dt)
    return out if out > 0.0 else 0.0


def reference_currents(i_ref: float, t: float, f_grid: float) -> tuple[float, float, float]:
    """Unity-power-factor phase current references, in phase with the grid EMF."""
    return grid_emf(t, i_ref, f_grid)


def ramped_magnitude(start: float, target: float, phase: int, period_steps: int) -> float:
    """
    Current amplitude seen by the reference generator between PI ticks.

    The amplitude moves linearly from the previous PI output ``start`` to the
    latest one ``target`` over ``period_steps`` plant steps, so the phase
    references stay continuous across ticks. ``phase`` is the plant step index
    within the PI period, 0 at the tick itself.
    """
    return start + (target - start) * (phase / period_steps)


def hysteresis_comparator(
    i_meas: Sequence[float],
    i_ref: Sequence[float],
    h: float,
    prev_switch: Sequence[int],
) -> tuple[int, int, int]:
    """
    Two-level comparator per phase with latch.

    i_e = i − i_ref; i_e >= h switches the leg low, i_e <= −h switches it high,
    anything in between keeps the previous state.
    """
    out = []
    for k in range(3):
        err = i_meas[k] - i_ref[k]
        if err >= h:
            out.append(0)
        elif err <= -h:
            out.append(1)
        else:
            out.append(int(prev_switch[k]))
    return out[0], out[1], out[2]


@dataclass
class ControllerState:
    """
    Everything the control stack remembers between ticks.

    Duty and switch states are zero-order-held between their controller's
    ticks. ``i_ref_mag`` is the latest DC-link PI output and ``i_ref_start``
    the one before it; the reference generator ramps between the two.
    """
    mppt: MpptState
    boost_pi: PiState = field(default_factory=PiState)
    dclink_pi: PiState = field(default_factory=PiState)
    switches: tuple[int, int, int] = (0, 0, 0)
    duty: float = 0.0
    i_ref_mag: float = 0.0
    i_ref_start: float = 0.0


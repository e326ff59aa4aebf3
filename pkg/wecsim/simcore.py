"""Fixed-step RK4 integration and the multi-rate simulation loop."""

from __future__ import annotations

import math
import time
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np

from .control import (
    ControllerState,
    MpptState,
    PiState,
    boost_duty_controller,
    dclink_current_magnitude,
    hysteresis_comparator,
    mppt_update,
    ramped_magnitude,
    reference_currents,
)
from .exceptions import DcLinkCollapseError, NumericalError, ScenarioValidationError
from .log import logger, run_context, set_sim_time
from .machine import rectifier_no_load_voltage
from .models import StartMode
from .plant import STATE_NAMES, Plant, PlantInputs, StateIndex
from .scenario import Scenario, validate
from .summary import MpptDecision, SummaryStats, summarize
from .trace import CHANNELS, TimeSeries, TraceRecorder

Derivative = Callable[[float, np.ndarray], np.ndarray]

# Simulated seconds between progress log lines.
PROGRESS_INTERVAL = 1.0


def integrate_step(
    state,
    deriv: Derivative,
    dt: float,
    t: float = 0.0,
    names: Sequence[str] | None = None,
):
    """
    Advance ``state`` by one classical fourth-order Runge-Kutta step.

    Butcher tableau::

        0   |
        1/2 | 1/2
        1/2 | 0    1/2
        1   | 0    0    1
        ----+-------------------
            | 1/6  1/3  1/3  1/6

    Args:
        state: Scalar or 1-D state vector at time ``t``
        deriv: f(t, x) returning dx/dt
        dt: Step size, s (0 returns the state unchanged)
        t: Time at the start of the step
        names: Channel names used in diagnostics

    Returns:
        The state at ``t + dt``; clamping is left to the caller

    Raises:
        ValueError: If dt < 0
        NumericalError: If the update is not finite
    """
    if dt < 0:
        raise ValueError(f"Step size must be >= 0 (got {dt})")
    scalar = np.ndim(state) == 0
    x = np.asarray(state, dtype=float)
    if dt == 0:
        return float(x) if scalar else x.copy()

    half = 0.5 * dt
    k1 = deriv(t, x)
    k2 = deriv(t + half, x + half * k1)
    k3 = deriv(t + half, x + half * k2)
    k4 = deriv(t + dt, x + dt * k3)
    x_new = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    finite = np.isfinite(x_new)
    if not finite.all():
        idx = int(np.argmin(np.atleast_1d(finite)))
        channel = names[idx] if names is not None and idx < len(names) else f"x[{idx}]"
        raise NumericalError(channel, t + dt)
    return float(x_new) if scalar else x_new


@dataclass
class RunResult:
    """Trace, summary and tracker log of one run."""
    trace: TimeSeries
    summary: SummaryStats
    mppt_log: list[MpptDecision]


class Simulation:
    """
    One deterministic run of a scenario.

    Every plant step evaluates the comparators and integrates the plant; every
    ``dt_pi`` the two PI loops update; every ``dt_mppt`` the tracker moves the
    rectifier-voltage reference. Controller outputs are held between ticks.

    Args:
        scenario: The experiment; validated on construction
        label: Run name stamped on log records

    Raises:
        ScenarioValidationError: If the scenario violates any invariant

    Example:
        >>> result = Simulation(step_wind_scenario()).run()
        >>> result.summary.windows[-1].mean_cp
    """

    def __init__(self, scenario: Scenario, label: str = "run"):
        violations = validate(scenario)
        if violations:
            raise ScenarioValidationError(violations)
        self.scenario = scenario
        self.label = label
        self.plant = Plant.from_scenario(scenario)

    def initial_state(self) -> tuple[np.ndarray, ControllerState]:
        """Plant state and controller memory at t = 0 according to ``start_mode``."""
        s = self.scenario
        v0 = s.wind.speed_at(0.0)
        mppt_cfg = s.control.mppt
        x = np.zeros(len(STATE_NAMES))
        x[StateIndex.V_O] = s.control.v_o_ref

        if s.solver.start_mode is StartMode.WARM:
            from .operating_point import steady_state_at_voltage

            op = steady_state_at_voltage(s, v0, mppt_cfg.v_ref_init)
            x[StateIndex.OMEGA] = op.omega
            x[StateIndex.I_LB] = op.i_dc
            x[StateIndex.V_WG] = op.v_wg
            x[StateIndex.I_A :] = reference_currents(op.i_grid, 0.0, s.converter.f_grid)
            ctrl = ControllerState(
                mppt=MpptState(p_prev=op.p_dc, v_prev=op.v_wg, v_ref=mppt_cfg.v_ref_init),
                boost_pi=PiState(integrator=op.duty),
                dclink_pi=PiState(integrator=op.i_grid),
                duty=op.duty,
                i_ref_mag=op.i_grid,
                i_ref_start=op.i_grid,
            )
            logger.debug(
                f"Warm start at omega={op.omega:.3f} rad/s, v_wg={op.v_wg:.1f} V, "
                f"p_dc={op.p_dc:.0f} W"
            )
            return x, ctrl

        omega = s.drivetrain.lambda_init * v0 / s.turbine.r
        v_wg = rectifier_no_load_voltage(self.plant.electrical_speed(omega), s.generator)
        x[StateIndex.OMEGA] = omega
        x[StateIndex.V_WG] = v_wg
        ctrl = ControllerState(mppt=MpptState.initial(mppt_cfg, v_measured=v_wg))
        return x, ctrl

    def run(self) -> RunResult:
        """
        Execute the multi-rate loop to ``t_end``.

        Raises:
            NumericalError: On a non-finite state, rotor stall or DC-link collapse
        """
        with run_context(self.label):
            return self._run()

    def _run(self) -> RunResult:
        s = self.scenario
        solver = s.solver
        ctrl_cfg = s.control
        mppt_cfg = ctrl_cfg.mppt
        conv = s.converter
        plant = self.plant

        dt = solver.dt_plant
        n_steps = solver.n_steps
        pi_every = solver.pi_every
        switch_every = solver.switch_every
        mppt_every = solver.mppt_every
        avg_len = max(1, math.ceil(mppt_cfg.avg_fraction * mppt_every))
        avg_start = mppt_every - avg_len
        decimate = s.outputs.decimate
        progress_every = max(1, round(PROGRESS_INTERVAL / dt))
        v_o_min = conv.min_dc_link_voltage
        h = ctrl_cfg.hysteresis.h

        x, ctrl = self.initial_state()
        recorder = TraceRecorder(n_steps // decimate + 1, CHANNELS)
        log: list[MpptDecision] = []
        p_acc = v_acc = 0.0
        acc_n = 0
        duty_high = False

        logger.info(
            f"Starting run: {n_steps} steps of {dt:g} s, t_end={solver.t_end:g} s, "
            f"start={solver.start_mode.value}"
        )
        wall_start = time.perf_counter()

        for k in range(n_steps + 1):
            t = k * dt

            if k % pi_every == 0:
                if mppt_cfg.enabled and k > 0 and k % mppt_every == 0 and acc_n:
                    p_k = p_acc / acc_n
                    v_k = v_acc / acc_n
                    ctrl.mppt = mppt_update(p_k, v_k, ctrl.mppt, mppt_cfg)
                    rule = ctrl.mppt.rule.value if ctrl.mppt.rule else ""
                    log.append(MpptDecision(t, rule, p_k, v_k, ctrl.mppt.step, ctrl.mppt.v_ref))
                    logger.debug(
                        f"MPPT t={t:.3f}s P={p_k:.1f}W V={v_k:.2f}V rule={rule} "
                        f"v_ref={ctrl.mppt.v_ref:.2f}V"
                    )
                    p_acc = v_acc = 0.0
                    acc_n = 0

                ctrl.duty = boost_duty_controller(
                    x[StateIndex.V_WG], ctrl.mppt.v_ref, ctrl.boost_pi, ctrl_cfg.boost_pi,
                    solver.dt_pi,
                )
                at_max = ctrl.boost_pi.saturated and ctrl.duty >= ctrl_cfg.boost_pi.out_max
                if at_max and not duty_high:
                    set_sim_time(t)
                    logger.warning(f"Boost duty saturated at {ctrl.duty:.3f} (t={t:.4f}s)")
                duty_high = at_max
                ctrl.i_ref_start = ctrl.i_ref_mag
                ctrl.i_ref_mag = dclink_current_magnitude(
                    x[StateIndex.V_O], ctrl_cfg.v_o_ref, ctrl.dclink_pi, ctrl_cfg.dclink_pi,
                    solver.dt_pi,
                )

            i_mag = ramped_magnitude(ctrl.i_ref_start, ctrl.i_ref_mag, k % pi_every, pi_every)
            i_ref_abc = reference_currents(i_mag, t, conv.f_grid)
            i_abc = x[StateIndex.I_A :].tolist()
            if k % switch_every == 0:
                ctrl.switches = hysteresis_comparator(i_abc, i_ref_abc, h, ctrl.switches)
            inputs = PlantInputs(s.wind.speed_at(t), ctrl.duty, ctrl.switches)

            if k % decimate == 0:
                row = plant.outputs(t, x, inputs)
                row["v_ref"] = ctrl.mppt.v_ref
                row["duty"] = ctrl.duty
                row["duty_saturated"] = 1.0 if ctrl.boost_pi.saturated else 0.0
                row["i_ref_mag"] = i_mag
                row["i_ref_a"], row["i_ref_b"], row["i_ref_c"] = i_ref_abc
                row["sw_a"], row["sw_b"], row["sw_c"] = ctrl.switches
                recorder.append(t, row)

            if k == n_steps:
                break

            if mppt_cfg.enabled and k % mppt_every >= avg_start:
                p_acc += x[StateIndex.V_WG] * x[StateIndex.I_LB]
                v_acc += x[StateIndex.V_WG]
                acc_n += 1

            try:
                x = integrate_step(x, plant.rhs(inputs), dt, t, STATE_NAMES)
            except NumericalError as e:
                set_sim_time(e.time)
                logger.error(f"Run aborted: {e}")
                raise
            x = plant.enforce_constraints(x)
            if x[StateIndex.V_O] < v_o_min:
                err = DcLinkCollapseError(t + dt, float(x[StateIndex.V_O]), v_o_min)
                set_sim_time(t + dt)
                logger.error(f"Run aborted: {err}")
                raise err

            if (k + 1) % progress_every == 0:
                set_sim_time(t + dt)
                logger.info(
                    f"t={t + dt:.2f}s omega={x[StateIndex.OMEGA]:.2f} rad/s "
                    f"v_wg={x[StateIndex.V_WG]:.1f} V v_o={x[StateIndex.V_O]:.1f} V"
                )

        trace = recorder.finish()
        summary = summarize(trace, s, log)
        logger.info(
            f"Run finished: {len(trace)} records, {len(log)} MPPT decisions "
            f"in {time.perf_counter() - wall_start:.1f}s"
        )
        return RunResult(trace=trace, summary=summary, mppt_log=log)


def run_scenario(scenario: Scenario, label: str = "run") -> RunResult:
    """
    Validate and run ``scenario``.

    Returns:
        RunResult with the full trace, its summary and the tracker log

    Raises:
        ScenarioValidationError: If the scenario is invalid
        NumericalError: If the integration aborts
    """
    return Simulation(scenario, label=label).run()

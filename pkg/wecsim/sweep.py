"""Parameter sweeps: one run per value, executed concurrently."""

from __future__ import annotations

import asyncio
import statistics
from collections.abc import Sequence
from concurrent.futures import Executor, ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields, is_dataclass
from pathlib import Path
from typing import Any

import pandas as pd

from .exceptions import ConfigurationError, ScenarioValidationError
from .log import logger
from .operating_point import (
    OperatingPoint,
    QuasiStaticPlant,
    steady_state_at_voltage,
    track_static,
)
from .scenario import (
    Scenario,
    decision_budget,
    scenario_from_dict,
    scenario_to_dict,
    validate,
)

# Pseudo-path that replaces the wind profile with a constant speed.
WIND_SPEED_PATH = "wind.speed"
# Tracker decisions averaged for a static steady state.
STATIC_TAIL = 12


@dataclass(frozen=True)
class SweepPoint:
    """Steady-state figures for one sweep value."""
    value: float
    v_ref: float
    v_wg: float
    omega: float
    cp: float
    lam: float
    p_dc: float
    p_grid: float


def scalar_paths(scenario: Scenario) -> list[str]:
    """Dotted paths of every numeric scalar in the scenario, plus ``wind.speed``."""
    paths: list[str] = [WIND_SPEED_PATH]

    def walk(obj: Any, prefix: str) -> None:
        for f in fields(obj):
            value = getattr(obj, f.name)
            path = f"{prefix}.{f.name}" if prefix else f.name
            if is_dataclass(value):
                walk(value, path)
            elif isinstance(value, (int, float)) and not isinstance(value, bool):
                paths.append(path)

    walk(scenario, "")
    return paths


def apply_parameter(scenario: Scenario, path: str, value: float) -> Scenario:
    """
    Copy of ``scenario`` with the scalar at ``path`` set to ``value``.

    Raises:
        ConfigurationError: If ``path`` is not a recognised scalar path
    """
    if path not in scalar_paths(scenario):
        raise ConfigurationError(f"Unknown sweep parameter '{path}'")
    data = scenario_to_dict(scenario)
    if path == WIND_SPEED_PATH:
        data["wind"] = {"breakpoints": [[0.0, float(value)]], "mode": "step"}
        return scenario_from_dict(data)
    *parents, leaf = path.split(".")
    node = data
    for key in parents:
        node = node[key]
    node[leaf] = int(value) if isinstance(node[leaf], int) else float(value)
    return scenario_from_dict(data)


def _from_window(value: float, scenario: Scenario) -> SweepPoint:
    from .simcore import run_scenario

    result = run_scenario(scenario, label=f"sweep={value:g}")
    w = result.summary.windows[-1]
    return SweepPoint(
        value=value,
        v_ref=w.mean_v_ref,
        v_wg=w.mean_v_wg,
        omega=w.mean_omega,
        cp=w.mean_cp,
        lam=w.mean_lambda,
        p_dc=w.mean_p_dc,
        p_grid=w.mean_p_out,
    )


def _point(value: float, v_ref: float, op: OperatingPoint) -> SweepPoint:
    return SweepPoint(
        value=value,
        v_ref=v_ref,
        v_wg=op.v_wg,
        omega=op.omega,
        cp=op.cp,
        lam=op.lam,
        p_dc=op.p_dc,
        p_grid=op.p_grid,
    )


def static_point(value: float, scenario: Scenario) -> SweepPoint:
    """
    Steady state from the quasi-static plant at the final wind speed.

    With the tracker enabled the reference is the mean of the last decisions
    of a static tracking run started at ``v_ref_min``; otherwise it is
    ``v_ref_init``.
    """
    mppt = scenario.control.mppt
    v_wind = scenario.wind.speed_at(scenario.solver.t_end)
    if mppt.enabled:
        plant = QuasiStaticPlant(scenario, v_wind)
        history = track_static(
            plant, mppt, decision_budget(scenario) + STATIC_TAIL, v_start=mppt.v_ref_min
        )
        v_ref = statistics.fmean(s.v_ref for s in history[-STATIC_TAIL:])
    else:
        v_ref = mppt.v_ref_init
    return _point(value, v_ref, steady_state_at_voltage(scenario, v_wind, v_ref))


def sweep_point(value: float, scenario: Scenario, static: bool) -> SweepPoint:
    """Evaluate one sweep value; module-level so process pools can pickle it."""
    if static:
        return static_point(value, scenario)
    return _from_window(value, scenario)


def _executor(kind: str, workers: int) -> Executor:
    if kind == "process":
        return ProcessPoolExecutor(max_workers=workers)
    if kind == "thread":
        return ThreadPoolExecutor(max_workers=workers)
    raise ConfigurationError(f"Unknown executor kind '{kind}' (use 'process' or 'thread')")


async def run_sweep(
    scenario: Scenario,
    path: str,
    values: Sequence[float],
    *,
    workers: int = 1,
    static: bool = False,
    executor_kind: str = "process",
) -> list[SweepPoint]:
    """
    Run one scenario per value of the parameter at ``path``.

    Runs share nothing mutable, so they are fanned out to an executor with at
    most ``workers`` in flight. With ``workers == 1`` they run inline, in order.

    Args:
        scenario: Base scenario
        path: Dotted scalar path, or ``wind.speed``
        values: Values to apply (must not be empty)
        workers: Maximum concurrent runs
        static: Use the quasi-static plant instead of a dynamic run
        executor_kind: "process" or "thread"

    Returns:
        One SweepPoint per value, in input order

    Raises:
        ConfigurationError: On an empty value list or unknown path
        ScenarioValidationError: If a swept scenario is invalid
        NumericalError: If a dynamic run aborts
    """
    if not values:
        raise ConfigurationError("Sweep needs at least one value")
    scenarios = [apply_parameter(scenario, path, v) for v in values]
    for value, scen in zip(values, scenarios):
        violations = validate(scen)
        if violations:
            raise ScenarioValidationError([f"{path}={value:g}: {v}" for v in violations])
    logger.info(
        f"Sweeping {path} over {len(values)} value(s) "
        f"({'static' if static else 'dynamic'}, workers={workers})"
    )

    if workers <= 1:
        return [sweep_point(v, s, static) for v, s in zip(values, scenarios)]

    loop = asyncio.get_running_loop()
    semaphore = asyncio.Semaphore(workers)
    with _executor(executor_kind, workers) as pool:

        async def one(value: float, scen: Scenario) -> SweepPoint:
            async with semaphore:
                point = await loop.run_in_executor(pool, sweep_point, value, scen, static)
                logger.info(f"Sweep {path}={value:g}: p_dc={point.p_dc:.1f} W")
                return point

        return list(await asyncio.gather(*(one(v, s) for v, s in zip(values, scenarios))))


def write_sweep_summary(points: Sequence[SweepPoint], path: str | Path) -> None:
    columns = [f.name for f in fields(SweepPoint)]
    pd.DataFrame([asdict(p) for p in points], columns=columns).to_csv(path, index=False)


"""Scenario definition, validation, JSON I/O and the canonical wind-step experiment."""

from __future__ import annotations

import bisect
import json
import math
import types
import typing
from dataclasses import dataclass, field, fields, is_dataclass, replace
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Any

from .exceptions import ConfigurationError
from .log import logger
from .models import (
    WIND_BRACKET,
    ControlConfig,
    ConverterParams,
    DrivetrainParams,
    GeneratorParams,
    OutputConfig,
    SolverConfig,
    TurbineParams,
)


class WindMode(str, Enum):
    """Interpolation between wind breakpoints."""
    STEP = "step"
    LINEAR = "linear"


@dataclass(frozen=True)
class WindProfile:
    """
    Piecewise wind speed v(t).

    In ``step`` mode each breakpoint's speed holds until the next breakpoint;
    in ``linear`` mode speeds ramp between breakpoints. Before the first and
    after the last breakpoint the end values hold.

    Attributes:
        breakpoints: (t, v) pairs, t strictly increasing, v in m/s
        mode: "step" or "linear"
    """
    breakpoints: tuple[tuple[float, float], ...] = ((0.0, 8.0),)
    mode: WindMode = WindMode.STEP

    @classmethod
    def constant(cls, v: float) -> WindProfile:
        return cls(breakpoints=((0.0, float(v)),))

    @cached_property
    def _times(self) -> list[float]:
        return [bp[0] for bp in self.breakpoints]

    def speed_at(self, t: float) -> float:
        times = self._times
        idx = bisect.bisect_right(times, t) - 1
        if idx < 0:
            return self.breakpoints[0][1]
        if self.mode is WindMode.STEP or idx >= len(times) - 1:
            return self.breakpoints[idx][1]
        (t0, v0), (t1, v1) = self.breakpoints[idx], self.breakpoints[idx + 1]
        return v0 + (v1 - v0) * (t - t0) / (t1 - t0)

    @property
    def min_speed(self) -> float:
        return min(v for _, v in self.breakpoints)

    @property
    def max_speed(self) -> float:
        return max(v for _, v in self.breakpoints)

    def violations(self, prefix: str = "wind") -> list[str]:
        out: list[str] = []
        if not self.breakpoints:
            return [f"{prefix}.breakpoints must not be empty"]
        times = self._times
        if any(b <= a for a, b in zip(times, times[1:])):
            out.append(f"{prefix}.breakpoints times must be strictly increasing")
        lo, hi = WIND_BRACKET
        for t, v in self.breakpoints:
            if not v > 0:
                out.append(f"{prefix}.breakpoints speed at t={t} must be > 0 (got {v})")
            elif not lo <= v <= hi:
                out.append(
                    f"{prefix}.breakpoints speed at t={t} must lie in the cut-in/rated "
                    f"bracket [{lo}, {hi}] m/s (got {v})"
                )
        return out


@dataclass(frozen=True)
class Scenario:
    """
    Everything a run needs: parameters, controllers, solver, wind and outputs.

    Immutable after construction, so one instance can be shared between
    concurrent sweep workers.
    """
    turbine: TurbineParams = field(default_factory=TurbineParams)
    drivetrain: DrivetrainParams = field(default_factory=DrivetrainParams)
    generator: GeneratorParams = field(default_factory=GeneratorParams)
    converter: ConverterParams = field(default_factory=ConverterParams)
    control: ControlConfig = field(default_factory=ControlConfig)
    solver: SolverConfig = field(default_factory=SolverConfig)
    wind: WindProfile = field(default_factory=WindProfile)
    outputs: OutputConfig = field(default_factory=OutputConfig)


def _feasibility(scenario: Scenario) -> list[str]:
    from .aero import runaway_tip_speed_ratio
    from .machine import rectifier_no_load_voltage

    out: list[str] = []
    conv = scenario.converter
    ctrl = scenario.control
    mppt = ctrl.mppt

    if not ctrl.v_o_ref / 2 > conv.E_grid:
        out.append(
            f"control.v_o_ref={ctrl.v_o_ref} V cannot synthesize grid current: "
            f"v_o_ref/2 must exceed converter.E_grid={conv.E_grid} V"
        )
    if ctrl.boost_pi.out_max > conv.D_max:
        out.append(
            f"control.boost_pi.out_max={ctrl.boost_pi.out_max} exceeds "
            f"converter.D_max={conv.D_max}"
        )
    if mppt.v_ref_max >= ctrl.v_o_ref:
        out.append(
            f"control.mppt.v_ref_max={mppt.v_ref_max} V must stay below "
            f"control.v_o_ref={ctrl.v_o_ref} V (the boost only steps up)"
        )

    turbine = scenario.turbine
    lam_opt = turbine.lambda_opt

    def no_load(lam: float, v_wind: float) -> float:
        omega = lam * v_wind / turbine.r
        omega_e = scenario.generator.P * scenario.drivetrain.G * omega
        return rectifier_no_load_voltage(omega_e, scenario.generator)

    v_low = no_load(lam_opt, scenario.wind.min_speed)
    v_high = no_load(lam_opt, scenario.wind.max_speed)
    if not mppt.v_ref_min < v_low:
        out.append(
            f"control.mppt.v_ref_min={mppt.v_ref_min} V is above the no-load rectifier "
            f"voltage at the optimum for the lowest wind ({v_low:.1f} V)"
        )
    # The bridge transfers its peak power at half the no-load voltage.
    if not mppt.v_ref_max >= 0.5 * v_high:
        out.append(
            f"control.mppt.v_ref_max={mppt.v_ref_max} V is below half the no-load rectifier "
            f"voltage at the optimum for the highest wind ({0.5 * v_high:.1f} V)"
        )
    v_free = no_load(runaway_tip_speed_ratio(turbine), scenario.wind.max_speed)
    if mppt.v_ref_max > v_free:
        logger.info(
            f"control.mppt.v_ref_max={mppt.v_ref_max} V exceeds the free-spinning rectifier "
            f"voltage at the highest wind ({v_free:.1f} V); references above it deliver no power"
        )
    return out


def validate(scenario: Scenario) -> list[str]:
    """
    Check every invariant and the cross-cutting feasibility rules.

    Never raises for a structurally well-formed scenario.

    Returns:
        All violations found; an empty list means the scenario is valid
    """
    violations: list[str] = []
    violations += scenario.turbine.violations()
    violations += scenario.drivetrain.violations()
    violations += scenario.generator.violations()
    violations += scenario.converter.violations()
    violations += scenario.control.violations()
    violations += scenario.solver.violations()
    violations += scenario.wind.violations()
    violations += scenario.outputs.violations()
    if violations:
        return violations
    try:
        violations += _feasibility(scenario)
    except (ArithmeticError, ValueError) as e:
        violations.append(f"feasibility check failed: {e}")
    return violations


# ---------------------------------------------------------------------------
# JSON (de)serialization


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _coerce(value: Any, hint: Any, path: str, default: Any) -> Any:
    origin = typing.get_origin(hint)
    if origin in (typing.Union, types.UnionType):
        if value is None:
            return None
        (inner,) = [a for a in typing.get_args(hint) if a is not type(None)]
        return _coerce(value, inner, path, default)
    if origin is tuple:
        args = typing.get_args(hint)
        if not isinstance(value, (list, tuple)):
            raise ConfigurationError(f"{path} must be a list (got {type(value).__name__})")
        if len(args) == 2 and args[1] is Ellipsis:
            return tuple(_coerce(v, args[0], f"{path}[{i}]", None) for i, v in enumerate(value))
        if len(value) != len(args):
            raise ConfigurationError(f"{path} must have {len(args)} entries (got {len(value)})")
        return tuple(
            _coerce(v, a, f"{path}[{i}]", None) for i, (v, a) in enumerate(zip(value, args))
        )
    if is_dataclass(hint):
        if not isinstance(value, dict):
            raise ConfigurationError(f"{path} must be an object (got {type(value).__name__})")
        return _build(hint, value, path, default)
    if isinstance(hint, type) and issubclass(hint, Enum):
        try:
            return hint(value)
        except ValueError:
            allowed = ", ".join(m.value for m in hint)
            raise ConfigurationError(f"{path} must be one of {allowed} (got {value!r})") from None
    if hint is bool:
        if not isinstance(value, bool):
            raise ConfigurationError(f"{path} must be true or false (got {value!r})")
        return value
    if hint is int:
        if not (isinstance(value, int) and not isinstance(value, bool)):
            raise ConfigurationError(f"{path} must be an integer (got {value!r})")
        return value
    if hint is float:
        if not _is_number(value):
            raise ConfigurationError(f"{path} must be a number (got {value!r})")
        return float(value)
    if hint is str:
        if not isinstance(value, str):
            raise ConfigurationError(f"{path} must be a string (got {value!r})")
        return value
    raise ConfigurationError(f"{path}: unsupported field type {hint!r}")


def _build(cls: type, data: dict[str, Any], path: str, base: Any) -> Any:
    hints = typing.get_type_hints(cls)
    names = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - names)
    if unknown:
        where = path or "scenario"
        raise ConfigurationError(f"Unknown key(s) in {where}: {', '.join(unknown)}")
    kwargs = {}
    for name in names:
        current = getattr(base, name)
        if name in data:
            kwargs[name] = _coerce(
                data[name], hints[name], f"{path}.{name}" if path else name, current
            )
        else:
            kwargs[name] = current
    return replace(base, **kwargs)


def scenario_from_dict(data: dict[str, Any]) -> Scenario:
    """
    Build a Scenario from a parsed JSON object.

    Missing keys take their ledger defaults; unknown keys are rejected.

    Raises:
        ConfigurationError: On unknown keys or wrongly typed values
    """
    if not isinstance(data, dict):
        raise ConfigurationError("Scenario file must contain a JSON object")
    return _build(Scenario, data, "", Scenario())


def _to_jsonable(value: Any) -> Any:
    if is_dataclass(value) and not isinstance(value, type):
        return {f.name: _to_jsonable(getattr(value, f.name)) for f in fields(value)}
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (tuple, list)):
        return [_to_jsonable(v) for v in value]
    return value


def scenario_to_dict(scenario: Scenario) -> dict[str, Any]:
    return _to_jsonable(scenario)


def load_scenario(path: str | Path) -> Scenario:
    """
    Read a scenario JSON file.

    Raises:
        FileNotFoundError: If ``path`` does not exist
        ConfigurationError: If the file is not valid JSON or has bad keys
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"{path} is not valid JSON: {e}") from e
    scenario = scenario_from_dict(data)
    logger.debug(f"Loaded scenario from {path}")
    return scenario


def save_scenario(scenario: Scenario, path: str | Path) -> None:
    Path(path).write_text(json.dumps(scenario_to_dict(scenario), indent=2) + "\n", encoding="utf-8")


def with_constant_wind(scenario: Scenario, v: float) -> Scenario:
    return replace(scenario, wind=WindProfile.constant(v))


def step_wind_scenario() -> Scenario:
    """
    The canonical experiment: 8 m/s until t = 10 s, then 10 m/s, run to 20 s.

    Summary windows cover the last two seconds before and after the step.
    """
    return Scenario(
        solver=SolverConfig(t_end=20.0),
        wind=WindProfile(breakpoints=((0.0, 8.0), (10.0, 10.0)), mode=WindMode.STEP),
        outputs=OutputConfig(windows=((8.0, 10.0), (18.0, 20.0))),
    )


def decision_budget(scenario: Scenario) -> int:
    """⌈(v_ref_max − v_ref_min)/δ⌉ decisions needed to cross the whole bracket."""
    mppt = scenario.control.mppt
    return math.ceil((mppt.v_ref_max - mppt.v_ref_min) / mppt.delta_v)

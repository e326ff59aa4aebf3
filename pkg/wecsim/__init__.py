"""
Simulator of a grid-connected PMSG wind energy conversion system.

Features:
- Turbine, drivetrain, PMSG, diode bridge, boost converter, DC link and
  hysteresis-controlled inverter integrated with fixed-step RK4
- Step-and-search MPPT on the rectifier voltage, fixed or adaptive step
- Quasi-static steady-state solver for fast MPPT and power-curve studies
- JSON scenarios, CSV traces, JSON summaries and SVG charts
- Concurrent parameter sweeps

Example:
    from wecsim import Simulation, step_wind_scenario

    result = Simulation(step_wind_scenario()).run()
    for window in result.summary.windows:
        print(window.t_start, window.mean_cp, window.mean_lambda)
"""

from .exceptions import (
    ConfigurationError,
    DcLinkCollapseError,
    DomainError,
    NumericalError,
    OperatingPointError,
    ScenarioValidationError,
    TraceError,
    WecsimError,
)
from .models import (
    ControlConfig,
    ConverterParams,
    DrivetrainParams,
    GeneratorParams,
    HysteresisConfig,
    MpptConfig,
    OutputConfig,
    PiConfig,
    SolverConfig,
    StartMode,
    TurbineParams,
)
from .operating_point import (
    OperatingPoint,
    QuasiStaticPlant,
    steady_state_at_duty,
    steady_state_at_speed,
    steady_state_at_voltage,
)
from .scenario import (
    Scenario,
    WindMode,
    WindProfile,
    load_scenario,
    save_scenario,
    step_wind_scenario,
    validate,
)
from .simcore import RunResult, Simulation, integrate_step, run_scenario
from .summary import SummaryStats, WindowStats, summarize
from .sweep import SweepPoint, run_sweep
from .trace import CHANNELS, TimeSeries
from .version import __version__

__all__ = [
    "Simulation",
    "RunResult",
    "run_scenario",
    "integrate_step",
    "Scenario",
    "WindProfile",
    "WindMode",
    "load_scenario",
    "save_scenario",
    "step_wind_scenario",
    "validate",
    "TurbineParams",
    "DrivetrainParams",
    "GeneratorParams",
    "ConverterParams",
    "MpptConfig",
    "PiConfig",
    "HysteresisConfig",
    "ControlConfig",
    "SolverConfig",
    "OutputConfig",
    "StartMode",
    "OperatingPoint",
    "QuasiStaticPlant",
    "steady_state_at_voltage",
    "steady_state_at_duty",
    "steady_state_at_speed",
    "TimeSeries",
    "CHANNELS",
    "SummaryStats",
    "WindowStats",
    "summarize",
    "SweepPoint",
    "run_sweep",
    "__version__",
    "WecsimError",
    "DomainError",
    "ConfigurationError",
    "ScenarioValidationError",
    "NumericalError",
    "DcLinkCollapseError",
    "OperatingPointError",
    "TraceError",
]

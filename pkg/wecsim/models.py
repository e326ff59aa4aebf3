"""Parameter models and the default-parameter ledger for wecsim.

Every physical and controller default used anywhere in the package is a field
default below. Apart from the Cp polynomial coefficients none of them are
published values; they describe a ~9 kW small wind system.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

# Cp(λ) = c0 + c1·λ + ... + c5·λ⁵ with the alternating signs folded in.
DEFAULT_CP_COEFFS: tuple[float, ...] = (0.043, -0.108, 0.146, -0.0602, 0.0104, -0.0006)

# Cut-in / rated validity bracket for wind profiles, m/s.
WIND_BRACKET: tuple[float, float] = (4.0, 12.0)


class StartMode(str, Enum):
    """How the simulation state is initialised."""
    COLD = "cold"
    WARM = "warm"


def _require_positive(prefix: str, values: dict[str, float], out: list[str]) -> None:
    for name, value in values.items():
        if not value > 0:
            out.append(f"{prefix}.{name} must be > 0 (got {value})")


def _require_non_negative(prefix: str, values: dict[str, float], out: list[str]) -> None:
    for name, value in values.items():
        if not value >= 0:
            out.append(f"{prefix}.{name} must be >= 0 (got {value})")


def _is_multiple(value: float, base: float) -> bool:
    ratio = value / base
    return abs(ratio - round(ratio)) <= 1e-9 * max(1.0, ratio)


@dataclass(frozen=True)
class TurbineParams:
    """
    Fixed-pitch rotor aerodynamics.

    Attributes:
        r: Rotor radius, m
        rho: Air density, kg/m³
        cp_coeffs: Six Cp polynomial coefficients c0..c5, signs included
        lambda_max: Upper end of the [0, λ_max] bracket searched for the optimum

    The optimum (``lambda_opt``, ``cp_opt``) and the cube-law constant
    ``k_cube`` are derived on first access and cached.
    """
    r: float = 2.5
    rho: float = 1.225
    cp_coeffs: tuple[float, ...] = DEFAULT_CP_COEFFS
    lambda_max: float = 12.0

    @property
    def area(self) -> float:
        """Swept area πr², m²."""
        return math.pi * self.r**2

    @cached_property
    def _optimum(self) -> tuple[float, float]:
        from .aero import find_optimum

        return find_optimum(self.cp_coeffs, self.lambda_max)

    @property
    def lambda_opt(self) -> float:
        return self._optimum[0]

    @property
    def cp_opt(self) -> float:
        return self._optimum[1]

    @property
    def k_cube(self) -> float:
        """Cube-law constant, W·s³/rad³: P_opt = k_cube·ω³."""
        return 0.5 * self.rho * self.cp_opt * math.pi * self.r**5 / self.lambda_opt**3

    def violations(self, prefix: str = "turbine") -> list[str]:
        out: list[str] = []
        _require_positive(
            prefix, {"r": self.r, "rho": self.rho, "lambda_max": self.lambda_max}, out
        )
        if len(self.cp_coeffs) != 6:
            out.append(f"{prefix}.cp_coeffs must have 6 entries (got {len(self.cp_coeffs)})")
        return out


@dataclass(frozen=True)
class DrivetrainParams:
    """
    One-mass drivetrain referred to the turbine shaft.

    Attributes:
        J: Lumped inertia, kg·m²
        G: Gearbox ratio (generator speed / turbine speed)
        B: Viscous friction, N·m·s/rad
        lambda_init: Tip-speed ratio used for a cold start
    """
    J: float = 3.5
    G: float = 5.0
    B: float = 0.003
    lambda_init: float = 3.0

    def violations(self, prefix: str = "drivetrain") -> list[str]:
        out: list[str] = []
        _require_positive(prefix, {"J": self.J, "lambda_init": self.lambda_init}, out)
        _require_non_negative(prefix, {"B": self.B}, out)
        if not self.G >= 1:
            out.append(f"{prefix}.G must be >= 1 (got {self.G})")
        return out


@dataclass(frozen=True)
class GeneratorParams:
    """
    PMSG dq-model parameters.

    Attributes:
        Ld, Lq: Axis inductances, H
        Rd, Rq: Axis resistances, Ω
        M: Mutual inductance, H
        i_f: Equivalent rotor current, A (M·i_f is the PM flux linkage)
        P: Pole pairs
    """
    Ld: float = 2e-3
    Lq: float = 2e-3
    Rd: float = 0.4
    Rq: float = 0.4
    M: float = 0.03
    i_f: float = 10.0
    P: int = 4

    @property
    def flux(self) -> float:
        """PM flux linkage M·i_f, V·s."""
        return self.M * self.i_f

    @property
    def commutation_inductance(self) -> float:
        return 0.5 * (self.Ld + self.Lq)

    @property
    def stator_resistance(self) -> float:
        return 0.5 * (self.Rd + self.Rq)

    def violations(self, prefix: str = "generator") -> list[str]:
        out: list[str] = []
        _require_positive(
            prefix,
            {
                "Ld": self.Ld,
                "Lq": self.Lq,
                "Rd": self.Rd,
                "Rq": self.Rq,
                "M": self.M,
                "i_f": self.i_f,
            },
            out,
        )
        if not (isinstance(self.P, int) and self.P >= 1):
            out.append(f"{prefix}.P must be an integer >= 1 (got {self.P})")
        return out


@dataclass(frozen=True)
class ConverterParams:
    """
    Boost stage, DC link and grid-side filter.

    Attributes:
        L_b: Boost inductance, H
        C1: Rectifier-side capacitance, F
        C_dc: DC-link capacitance, F
        L: Grid filter inductance per phase, H
        R_f: Filter resistance per phase, Ω
        E_grid: Grid phase voltage amplitude (peak), V
        f_grid: Grid frequency, Hz
        D_max: Boost duty saturation
    """
    L_b: float = 2e-3
    C1: float = 1e-3
    C_dc: float = 2.2e-3
    L: float = 5e-3
    R_f: float = 0.1
    E_grid: float = 163.0
    f_grid: float = 50.0
    D_max: float = 0.95

    @property
    def min_dc_link_voltage(self) -> float:
        """Line-to-line grid peak; below it the inverter loses current control."""
        return math.sqrt(3.0) * self.E_grid

    def violations(self, prefix: str = "converter") -> list[str]:
        out: list[str] = []
        _require_positive(
            prefix,
            {
                "L_b": self.L_b,
                "C1": self.C1,
                "C_dc": self.C_dc,
                "L": self.L,
                "E_grid": self.E_grid,
                "f_grid": self.f_grid,
            },
            out,
        )
        _require_non_negative(prefix, {"R_f": self.R_f}, out)
        if not 0 < self.D_max < 1:
            out.append(f"{prefix}.D_max must be in (0, 1) (got {self.D_max})")
        return out


@dataclass(frozen=True)
class MpptConfig:
    """
    Step-and-search tracker settings.

    Attributes:
        enabled: When False, v_ref stays at ``v_ref_init`` for the whole run
        delta_v: Fixed perturbation step, V
        v_ref_min, v_ref_max: Reference bracket, V
        v_ref_init: Reference at t = 0, V
        adaptive: Use the slope-scaled step instead of ``delta_v``
        step_gain: Adaptive gain, V²/W (δ = step_gain·|ΔP/ΔV|)
        step_min, step_max: Adaptive step clamp, V
        avg_fraction: Trailing fraction of each period over which power is averaged
    """
    enabled: bool = True
    delta_v: float = 4.0
    v_ref_min: float = 40.0
    v_ref_max: float = 360.0
    v_ref_init: float = 200.0
    adaptive: bool = False
    step_gain: float = 0.2
    step_min: float = 1.0
    step_max: float = 8.0
    avg_fraction: float = 0.4

    def violations(self, prefix: str = "control.mppt") -> list[str]:
        out: list[str] = []
        _require_positive(
            prefix,
            {
                "delta_v": self.delta_v,
                "v_ref_min": self.v_ref_min,
                "step_gain": self.step_gain,
                "step_min": self.step_min,
            },
            out,
        )
        if not self.v_ref_min < self.v_ref_max:
            out.append(
                f"{prefix}.v_ref_min must be < v_ref_max "
                f"(got {self.v_ref_min} >= {self.v_ref_max})"
            )
        elif not self.v_ref_min <= self.v_ref_init <= self.v_ref_max:
            out.append(
                f"{prefix}.v_ref_init must lie in [v_ref_min, v_ref_max] (got {self.v_ref_init})"
            )
        if not self.step_min <= self.step_max:
            out.append(
                f"{prefix}.step_min must be <= step_max "
                f"(got {self.step_min} > {self.step_max})"
            )
        if not 0 < self.avg_fraction <= 1:
            out.append(f"{prefix}.avg_fraction must be in (0, 1] (got {self.avg_fraction})")
        return out


@dataclass(frozen=True)
class PiConfig:
    """PI gains and output saturation bounds."""
    kp: float
    ki: float
    out_min: float
    out_max: float

    def violations(self, prefix: str) -> list[str]:
        out: list[str] = []
        _require_non_negative(prefix, {"kp": self.kp, "ki": self.ki}, out)
        if not self.out_min < self.out_max:
            out.append(
                f"{prefix}.out_min must be < out_max (got {self.out_min} >= {self.out_max})"
            )
        return out


def default_boost_pi() -> PiConfig:
    """Rectifier-voltage loop: error in V, output is duty."""
    return PiConfig(kp=0.02, ki=2.0, out_min=0.0, out_max=0.95)


def default_dclink_pi() -> PiConfig:
    """Squared DC-link voltage loop: error in V², output is current amplitude in A."""
    return PiConfig(kp=5e-4, ki=0.05, out_min=0.0, out_max=80.0)


@dataclass(frozen=True)
class HysteresisConfig:
    """Half-width ``h`` of the current tolerance band, A."""
    h: float = 0.5

    def violations(self, prefix: str = "control.hysteresis") -> list[str]:
        out: list[str] = []
        _require_positive(prefix, {"h": self.h}, out)
        return out


@dataclass(frozen=True)
class ControlConfig:
    """Controller stack: tracker, both PI loops, comparator band and DC-link setpoint."""
    mppt: MpptConfig = field(default_factory=MpptConfig)
    boost_pi: PiConfig = field(default_factory=default_boost_pi)
    dclink_pi: PiConfig = field(default_factory=default_dclink_pi)
    hysteresis: HysteresisConfig = field(default_factory=HysteresisConfig)
    v_o_ref: float = 400.0

    def violations(self, prefix: str = "control") -> list[str]:
        out = self.mppt.violations(f"{prefix}.mppt")
        out += self.boost_pi.violations(f"{prefix}.boost_pi")
        out += self.dclink_pi.violations(f"{prefix}.dclink_pi")
        out += self.hysteresis.violations(f"{prefix}.hysteresis")
        _require_positive(prefix, {"v_o_ref": self.v_o_ref}, out)
        if self.dclink_pi.out_min < 0:
            out.append(f"{prefix}.dclink_pi.out_min must be >= 0 (got {self.dclink_pi.out_min})")
        return out


@dataclass(frozen=True)
class SolverConfig:
    """
    Fixed steps of the multi-rate loop.

    ``dt_switch`` is the comparator period. It is tied to ``dt_plant`` so that
    leg states are fixed across every RK4 step.

    Attributes:
        dt_plant: Plant integration step, s
        dt_pi: PI controller period, s
        dt_mppt: MPPT decision period, s
        t_end: Simulated duration, s
        start_mode: "cold" (rotor at lambda_init, controllers empty) or "warm"
    """
    dt_plant: float = 5e-6
    dt_pi: float = 1e-4
    dt_mppt: float = 0.25
    t_end: float = 20.0
    start_mode: StartMode = StartMode.COLD

    @property
    def dt_switch(self) -> float:
        return self.dt_plant

    @property
    def switch_every(self) -> int:
        return round(self.dt_switch / self.dt_plant)

    @property
    def pi_every(self) -> int:
        return round(self.dt_pi / self.dt_plant)

    @property
    def mppt_every(self) -> int:
        return round(self.dt_mppt / self.dt_plant)

    @property
    def n_steps(self) -> int:
        return round(self.t_end / self.dt_plant)

    def violations(self, prefix: str = "solver") -> list[str]:
        out: list[str] = []
        _require_positive(
            prefix,
            {
                "dt_plant": self.dt_plant,
                "dt_pi": self.dt_pi,
                "dt_mppt": self.dt_mppt,
                "t_end": self.t_end,
            },
            out,
        )
        if out:
            return out
        if not self.dt_mppt >= self.dt_pi >= self.dt_plant:
            out.append(
                f"{prefix}: steps must satisfy dt_mppt >= dt_pi >= dt_plant "
                f"(got {self.dt_mppt}, {self.dt_pi}, {self.dt_plant})"
            )
        if not _is_multiple(self.dt_pi, self.dt_plant):
            out.append(f"{prefix}.dt_pi must be an integer multiple of dt_plant")
        if not _is_multiple(self.dt_mppt, self.dt_plant):
            out.append(f"{prefix}.dt_mppt must be an integer multiple of dt_plant")
        elif not _is_multiple(self.dt_mppt, self.dt_pi):
            out.append(f"{prefix}.dt_mppt must be an integer multiple of dt_pi")
        if self.t_end < self.dt_plant * (1 - 1e-9):
            out.append(f"{prefix}.t_end must cover at least one dt_plant")
        return out


@dataclass(frozen=True)
class OutputConfig:
    """
    Trace selection.

    Attributes:
        channels: Channel names written to the trace, in column order (None = all)
        decimate: Keep every n-th plant step
        windows: (t_start, t_end) averaging windows for the summary; empty means
            the last two seconds of the run
    """
    channels: tuple[str, ...] | None = None
    decimate: int = 20
    windows: tuple[tuple[float, float], ...] = ()

    def violations(self, prefix: str = "outputs") -> list[str]:
        from .trace import CHANNELS

        out: list[str] = []
        if not (isinstance(self.decimate, int) and self.decimate >= 1):
            out.append(f"{prefix}.decimate must be an integer >= 1 (got {self.decimate})")
        if self.channels is not None:
            unknown = [c for c in self.channels if c not in CHANNELS]
            if unknown:
                out.append(f"{prefix}.channels references unknown channel(s): {', '.join(unknown)}")
            if len(set(self.channels)) != len(self.channels):
                out.append(f"{prefix}.channels contains duplicates")
        for t0, t1 in self.windows:
            if not t0 < t1:
                out.append(f"{prefix}.windows entry ({t0}, {t1}) must have t_start < t_end")
        return out

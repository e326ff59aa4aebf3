"""Fixed-pitch turbine aerodynamics and the one-mass drivetrain."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.optimize import brentq, minimize_scalar

from .exceptions import DomainError
from .models import DrivetrainParams, TurbineParams

# Grid spacing of the brute-force optimum scan.
SCAN_STEP = 1e-4


def tip_speed_ratio(r: float, omega: float, v: float) -> float:
    """
    Blade-tip speed over wind speed, λ = r·ω/v.

    Args:
        r: Rotor radius, m
        omega: Turbine shaft speed, rad/s
        v: Wind speed, m/s

    Raises:
        DomainError: If v <= 0
    """
    if v <= 0:
        raise DomainError(f"Wind speed must be > 0 for tip-speed ratio (got {v})")
    return r * omega / v


def power_coefficient_raw(lam, coeffs: Sequence[float]):
    """Evaluate the Cp polynomial without clamping; accepts scalars or arrays."""
    if isinstance(lam, (int, float)):
        acc = 0.0
        for c in reversed(coeffs):
            acc = acc * lam + c
        return acc
    return npoly.polyval(np.asarray(lam, dtype=float), coeffs)


def power_coefficient(lam, coeffs: Sequence[float]):
    """
    Power coefficient Cp(λ), clamped below at 0.

    The raw polynomial turns negative past its upper root (λ ≈ 8.85 for the
    default coefficients); negative aerodynamic power is outside the model.

    Example:
        >>> power_coefficient(0.0, DEFAULT_CP_COEFFS)
        0.043
    """
    raw = power_coefficient_raw(lam, coeffs)
    if isinstance(raw, float):
        return raw if raw > 0.0 else 0.0
    return np.maximum(raw, 0.0)


def find_optimum(coeffs: Sequence[float], lambda_max: float) -> tuple[float, float]:
    """
    Locate (λ*, Cp*) on [0, lambda_max].

    A brute-force scan at ``SCAN_STEP`` brackets the maximum, then a bounded
    scalar minimisation polishes it inside the neighbouring grid cells.

    Returns:
        (lambda_opt, cp_opt)
    """
    grid = np.arange(0.0, lambda_max + SCAN_STEP / 2, SCAN_STEP)
    values = npoly.polyval(grid, coeffs)
    idx = int(np.argmax(values))
    lo = grid[max(idx - 1, 0)]
    hi = grid[min(idx + 1, grid.size - 1)]
    if hi <= lo:
        return float(grid[idx]), float(values[idx])

    result = minimize_scalar(
        lambda lam: -power_coefficient_raw(float(lam), coeffs),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-10},
    )
    lam_opt = float(result.x)
    cp_opt = float(power_coefficient_raw(lam_opt, coeffs))
    if cp_opt < values[idx]:
        return float(grid[idx]), float(values[idx])
    return lam_opt, cp_opt


def runaway_tip_speed_ratio(params: TurbineParams) -> float:
    """First zero of Cp above λ* (free-spinning rotor), or λ_max if Cp stays positive."""
    lam_opt = params.lambda_opt
    cp_end = power_coefficient_raw(params.lambda_max, params.cp_coeffs)
    if cp_end > 0:
        return params.lambda_max
    grid = np.linspace(lam_opt, params.lambda_max, 256)
    values = npoly.polyval(grid, params.cp_coeffs)
    first = int(np.argmax(values <= 0))
    return float(
        brentq(
            lambda lam: power_coefficient_raw(lam, params.cp_coeffs),
            grid[first - 1],
            grid[first],
            xtol=1e-12,
        )
    )


def turbine_power(params: TurbineParams, v: float, lam: float) -> float:
    """
    Aerodynamic power ½·Cp(λ)·ρ·A·v³, W.

    Raises:
        DomainError: If v <= 0
    """
    if v <= 0:
        raise DomainError(f"Wind speed must be > 0 for turbine power (got {v})")
    return 0.5 * power_coefficient(lam, params.cp_coeffs) * params.rho * params.area * v**3


def turbine_torque(params: TurbineParams, v: float, lam: float) -> float:
    """
    Aerodynamic torque ½·ρ·A·r·(Cp(λ)/λ)·v², N·m.

    Equals turbine_power / ω for every ω > 0.

    Raises:
        DomainError: If λ <= 0 or v <= 0
    """
    if lam <= 0:
        raise DomainError(f"Tip-speed ratio must be > 0 for turbine torque (got {lam})")
    if v <= 0:
        raise DomainError(f"Wind speed must be > 0 for turbine torque (got {v})")
    cp = power_coefficient(lam, params.cp_coeffs)
    return 0.5 * params.rho * params.area * params.r * (cp / lam) * v * v


def optimal_power(omega: float, params: TurbineParams) -> float:
    """Cube-law envelope k_cube·ω³, W."""
    return params.k_cube * omega**3


def drivetrain_step_deriv(
    omega: float, t_turbine: float, t_gen: float, params: DrivetrainParams
) -> float:
    """
    Rotor acceleration dω/dt = (T_t − G·T_gen − B·ω)/J.

    Args:
        omega: Turbine shaft speed, rad/s
        t_turbine: Aerodynamic torque, N·m
        t_gen: Generator electromagnetic torque on the generator shaft, N·m
        params: Drivetrain parameters
    """
    return (t_turbine - params.G * t_gen - params.B * omega) / params.J


def generator_speed(omega: float, params: DrivetrainParams) -> float:
    """Generator shaft speed ω_g = G·ω."""
    return params.G * omega

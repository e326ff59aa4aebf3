"""Summary statistics computed from a trace."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd
from scipy.integrate import trapezoid

from .scenario import Scenario
from .trace import TimeSeries

# Post-start settling excluded from the band statistics, in grid cycles.
BAND_TRANSIENT_CYCLES = 2.0
# Length of the default summary window, s.
DEFAULT_WINDOW = 2.0

_BAND_CHANNELS = ("i_a", "i_b", "i_c", "i_ref_a", "i_ref_b", "i_ref_c", "v_o")
_ENERGY_CHANNELS = ("p_em", "p_cu", "p_grid", "p_rf", "e_stored")


@dataclass(frozen=True)
class MpptDecision:
    """One tracker decision as logged by the simulation loop."""
    t: float
    rule: str
    p: float
    v: float
    step: float
    v_ref: float


@dataclass(frozen=True)
class WindowStats:
    """Channel means over one averaging window; None where the trace lacks the data."""
    t_start: float
    t_end: float
    samples: int
    mean_cp: float | None
    mean_lambda: float | None
    mean_p_out: float | None
    mean_p_dc: float | None
    mean_omega: float | None
    mean_v_wg: float | None
    mean_v_ref: float | None
    mean_v_o: float | None


@dataclass(frozen=True)
class SummaryStats:
    """
    Run-level figures of merit.

    Attributes:
        windows: Per-window means
        band_violation_fraction: Share of phase-current samples, after the
            start-up transient, farther than h + one-step slew from reference
        max_band_error: Largest |i − i_ref| over the same samples, A
        energy_residual: |∫P_em − ∫P_cu − ∫P_grid − ∫P_Rf − ΔE| / ∫P_em
        mppt_log: Tracker decisions in time order
    """
    windows: tuple[WindowStats, ...]
    band_violation_fraction: float | None
    max_band_error: float | None
    energy_residual: float | None
    mppt_log: tuple[MpptDecision, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def _mean(trace: TimeSeries, name: str, mask: np.ndarray) -> float | None:
    if not trace.has(name) or not mask.any():
        return None
    return float(np.mean(trace[name][mask]))


def window_stats(trace: TimeSeries, t_start: float, t_end: float) -> WindowStats:
    mask = (trace.t >= t_start) & (trace.t <= t_end)
    return WindowStats(
        t_start=t_start,
        t_end=t_end,
        samples=int(mask.sum()),
        mean_cp=_mean(trace, "cp", mask),
        mean_lambda=_mean(trace, "lambda", mask),
        mean_p_out=_mean(trace, "p_grid", mask),
        mean_p_dc=_mean(trace, "p_dc", mask),
        mean_omega=_mean(trace, "omega", mask),
        mean_v_wg=_mean(trace, "v_wg", mask),
        mean_v_ref=_mean(trace, "v_ref", mask),
        mean_v_o=_mean(trace, "v_o", mask),
    )


def band_statistics(
    trace: TimeSeries, scenario: Scenario
) -> tuple[float | None, float | None]:
    """
    Fraction of samples outside h + (v_o/2 + E)·dt/L, and the worst error.

    Samples within two grid cycles of the trace start are skipped.
    """
    if not all(trace.has(c) for c in _BAND_CHANNELS) or len(trace) == 0:
        return None, None
    conv = scenario.converter
    settle = trace.t[0] + BAND_TRANSIENT_CYCLES / conv.f_grid
    mask = trace.t >= settle
    if not mask.any():
        return None, None
    errors = np.abs(
        np.stack(
            [trace[f"i_{p}"][mask] - trace[f"i_ref_{p}"][mask] for p in "abc"],
            axis=1,
        )
    )
    slew = (0.5 * trace["v_o"][mask] + conv.E_grid) * scenario.solver.dt_plant / conv.L
    threshold = scenario.control.hysteresis.h + slew
    outside = errors > threshold[:, None]
    return float(outside.mean()), float(errors.max())


def energy_residual(trace: TimeSeries) -> float | None:
    """Relative imbalance of the electrical energy budget over the whole trace."""
    if not all(trace.has(c) for c in _ENERGY_CHANNELS):
        return None
    if len(trace) < 2:
        return 0.0
    t = trace.t
    e_in = trapezoid(trace["p_em"], t)
    e_out = trapezoid(trace["p_grid"], t)
    e_loss = trapezoid(trace["p_cu"], t) + trapezoid(trace["p_rf"], t)
    stored = trace["e_stored"]
    delta = stored[-1] - stored[0]
    residual = abs(e_in - e_loss - e_out - delta) / max(abs(e_in), 1e-9)
    return float(residual) if math.isfinite(residual) else None


def default_windows(trace: TimeSeries) -> tuple[tuple[float, float], ...]:
    if len(trace) == 0:
        return ()
    t_end = float(trace.t[-1])
    return ((max(float(trace.t[0]), t_end - DEFAULT_WINDOW), t_end),)


def summarize(
    trace: TimeSeries,
    scenario: Scenario,
    mppt_log: Sequence[MpptDecision] = (),
) -> SummaryStats:
    """
    Compute summary statistics from a trace.

    Depends only on the trace values and the scenario parameters, so a trace
    read back from CSV yields the same numbers as the in-memory one.
    """
    windows = scenario.outputs.windows or default_windows(trace)
    fraction, worst = band_statistics(trace, scenario)
    return SummaryStats(
        windows=tuple(window_stats(trace, t0, t1) for t0, t1 in windows),
        band_violation_fraction=fraction,
        max_band_error=worst,
        energy_residual=energy_residual(trace),
        mppt_log=tuple(mppt_log),
    )


def write_mppt_log(log: Sequence[MpptDecision], path: str | Path) -> None:
    columns = ["t", "rule", "p", "v", "step", "v_ref"]
    frame = pd.DataFrame([asdict(d) for d in log], columns=columns)
    frame.to_csv(path, index=False)


def read_mppt_log(path: str | Path) -> list[MpptDecision]:
    frame = pd.read_csv(path, float_precision="round_trip")
    return [
        MpptDecision(
            t=float(row.t),
            rule=str(row.rule),
            p=float(row.p),
            v=float(row.v),
            step=float(row.step),
            v_ref=float(row.v_ref),
        )
        for row in frame.itertuples(index=False)
    ]

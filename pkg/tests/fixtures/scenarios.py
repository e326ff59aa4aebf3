"""Scenario factories and small reference systems shared by the tests."""

from dataclasses import replace

import numpy as np

from wecsim.models import MpptConfig, OutputConfig, SolverConfig, StartMode
from wecsim.scenario import Scenario, WindProfile


def short_scenario(
    v_wind: float = 8.0,
    t_end: float = 0.1,
    dt_plant: float = 1e-5,
    decimate: int = 1,
    start_mode: StartMode = StartMode.WARM,
    mppt_enabled: bool = False,
    v_ref_init: float = 200.0,
    dt_mppt: float = 0.25,
    windows: tuple[tuple[float, float], ...] = (),
) -> Scenario:
    """
    Scenario sized for unit tests: constant wind, coarse plant step, short run.

    Defaults to a warm start with the tracker disabled, so the rectifier-side
    reference stays at ``v_ref_init``.
    """
    base = Scenario()
    return replace(
        base,
        solver=SolverConfig(
            dt_plant=dt_plant,
            dt_pi=1e-4,
            dt_mppt=dt_mppt,
            t_end=t_end,
            start_mode=start_mode,
        ),
        control=replace(
            base.control,
            mppt=MpptConfig(enabled=mppt_enabled, v_ref_init=v_ref_init),
        ),
        wind=WindProfile.constant(v_wind),
        outputs=OutputConfig(decimate=decimate, windows=windows),
    )


def exponential_decay(t: float, x):
    """dx/dt = −x."""
    return -x


def lc_oscillator(t: float, x: np.ndarray) -> np.ndarray:
    """Lossless LC tank with L = C = 1: x = (i, v)."""
    return np.array([x[1], -x[0]])

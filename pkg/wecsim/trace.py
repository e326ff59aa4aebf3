"""Time-series traces: channel catalogue, in-run recorder and CSV I/O."""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from .exceptions import TraceError

# Every channel a run records, in default column order. Units are SI.
CHANNELS: tuple[str, ...] = (
    "v_wind",
    "omega",
    "omega_g",
    "lambda",
    "cp",
    "p_turbine",
    "t_turbine",
    "t_gen",
    "id",
    "iq",
    "i_rect",
    "v_wg",
    "v_ref",
    "i_lb",
    "duty",
    "duty_saturated",
    "v_o",
    "i_ref_mag",
    "p_em",
    "p_cu",
    "p_dc",
    "p_grid",
    "p_rf",
    "e_stored",
    "e_a",
    "e_b",
    "e_c",
    "u_a",
    "u_b",
    "u_c",
    "i_a",
    "i_b",
    "i_c",
    "i_ref_a",
    "i_ref_b",
    "i_ref_c",
    "sw_a",
    "sw_b",
    "sw_c",
)

TIME_COLUMN = "t"


@dataclass
class TimeSeries:
    """
    Ordered records of (t, channel values) with a fixed schema.

    Attributes:
        t: Sample times, strictly increasing
        channels: Column names, in order
        data: Array of shape (len(t), len(channels))
    """
    t: np.ndarray
    channels: tuple[str, ...]
    data: np.ndarray

    def __post_init__(self) -> None:
        if self.data.shape != (self.t.shape[0], len(self.channels)):
            raise TraceError(
                f"Trace data shape {self.data.shape} does not match "
                f"{self.t.shape[0]} rows x {len(self.channels)} channels",
                list(self.channels),
            )

    def __len__(self) -> int:
        return int(self.t.shape[0])

    def has(self, name: str) -> bool:
        return name == TIME_COLUMN or name in self.channels

    def __getitem__(self, name: str) -> np.ndarray:
        if name == TIME_COLUMN:
            return self.t
        try:
            return self.data[:, self.channels.index(name)]
        except ValueError:
            raise TraceError(f"Unknown channel '{name}'", list(self.channels)) from None

    def select(self, names: Sequence[str]) -> TimeSeries:
        """Copy restricted to ``names`` in the given order."""
        missing = [n for n in names if n not in self.channels]
        if missing:
            raise TraceError(f"Unknown channel(s): {', '.join(missing)}", list(self.channels))
        cols = [self.channels.index(n) for n in names]
        return TimeSeries(self.t.copy(), tuple(names), self.data[:, cols].copy())

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.data, columns=list(self.channels))
        frame.insert(0, TIME_COLUMN, self.t)
        return frame

    def to_csv(self, path: str | Path) -> None:
        """Write a header row of channel names and one row per record."""
        self.to_frame().to_csv(path, index=False)

    @classmethod
    def from_frame(cls, frame: pd.DataFrame) -> TimeSeries:
        if TIME_COLUMN not in frame.columns:
            raise TraceError(f"Trace has no '{TIME_COLUMN}' column", list(frame.columns))
        channels = tuple(str(c) for c in frame.columns if c != TIME_COLUMN)
        t = frame[TIME_COLUMN].to_numpy(dtype=float)
        if t.size > 1 and not np.all(np.diff(t) > 0):
            raise TraceError("Trace time column is not strictly increasing", list(channels))
        data = frame[list(channels)].to_numpy(dtype=float)
        return cls(t, channels, data)

    @classmethod
    def from_csv(cls, path: str | Path) -> TimeSeries:
        """Read a trace written by :meth:`to_csv`, preserving every float exactly."""
        try:
            frame = pd.read_csv(path, float_precision="round_trip")
        except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
            raise TraceError(f"Cannot parse trace file {path}: {e}") from e
        return cls.from_frame(frame)


class TraceRecorder:
    """
    Preallocated row buffer filled by the simulation loop.

    Args:
        capacity: Number of rows that will be appended
        channels: Column order (defaults to all channels)
    """

    def __init__(self, capacity: int, channels: Iterable[str] = CHANNELS):
        self.channels = tuple(channels)
        self._t = np.empty(capacity)
        self._data = np.empty((capacity, len(self.channels)))
        self._n = 0

    def append(self, t: float, values: Mapping[str, float]) -> None:
        row = self._n
        self._t[row] = t
        self._data[row] = [values[c] for c in self.channels]
        self._n = row + 1

    def finish(self) -> TimeSeries:
        n = self._n
        return TimeSeries(self._t[:n].copy(), self.channels, self._data[:n].copy())

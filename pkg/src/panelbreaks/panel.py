"""Core data model: rectangular multivariate panels with 1-based interval slicing.

All user-facing time coordinates are 1-based and inclusive, so an interval
(s, e) covers columns s..e and a candidate split b satisfies s <= b < e.
Time labels (e.g. season years) are carried alongside so downstream results
can be reported in label units rather than raw indices.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BadTimeIndex,
    EmptyPanel,
    IndexOutOfRange,
    NonFinite,
    RaggedPanel,
    ShapeMismatch,
)


@dataclass(frozen=True)
class Panel:
    """n series observed on a common grid of T time points.

    Immutable after construction; the value matrix is marked read-only.
    Construct through :func:`build_panel`, which owns input coercion.
    """

    values: np.ndarray
    series_ids: tuple[str, ...]
    time_index: tuple[int, ...]

    def __post_init__(self):
        v = self.values
        if v.ndim != 2:
            raise RaggedPanel(f"expected a 2-d value matrix, got ndim={v.ndim}")
        n, T = v.shape
        if n < 1 or T < 2:
            raise EmptyPanel(f"panel needs n >= 1 and T >= 2, got {n}x{T}")
        if len(self.series_ids) != n:
            raise ShapeMismatch(f"{len(self.series_ids)} series ids for {n} rows")
        if len(self.time_index) != T:
            raise ShapeMismatch(f"{len(self.time_index)} time labels for {T} columns")
        if not np.all(np.isfinite(v)):
            raise NonFinite("panel contains NaN or infinite values")
        if any(b <= a for a, b in zip(self.time_index, self.time_index[1:])):
            raise BadTimeIndex("time index must be strictly increasing")
        v.setflags(write=False)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def T(self) -> int:
        return self.values.shape[1]

    def slice(self, s: int, e: int) -> "Panel":
        """View over time columns s..e (1-based, inclusive)."""
        if not (1 <= s < e <= self.T):
            raise IndexOutOfRange(f"slice ({s}, {e}) invalid for T={self.T}")
        return Panel(self.values[:, s - 1 : e], self.series_ids, self.time_index[s - 1 : e])

    def fingerprint(self) -> str:
        """Content hash covering values, series ids and time labels."""
        h = hashlib.sha256()
        h.update(b"panelbreaks/panel/v1")
        h.update(repr(self.series_ids).encode())
        h.update(repr(self.time_index).encode())
        h.update(np.ascontiguousarray(self.values, dtype=np.float64).tobytes())
        return "sha256:" + h.hexdigest()


@dataclass(frozen=True)
class Interval:
    """Candidate split b inside a segment (s, e); all 1-based inclusive."""

    s: int
    b: int
    e: int

    def __post_init__(self):
        if not (self.s <= self.b < self.e):
            raise IndexOutOfRange(f"need s <= b < e, got {(self.s, self.b, self.e)}")


def build_panel(values, series_ids, time_index) -> Panel:
    """Validate and assemble a Panel from array-likes.

    The only place shape errors can arise: ragged rows raise RaggedPanel,
    NaN/inf raise NonFinite, and degenerate shapes raise EmptyPanel.
    """
    rows = list(values)
    if len(rows) == 0:
        raise EmptyPanel("no series supplied")
    lengths = {len(np.atleast_1d(r)) for r in rows}
    if len(lengths) > 1:
        raise RaggedPanel(f"rows of unequal length: {sorted(lengths)}")
    try:
        arr = np.asarray(rows, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise RaggedPanel(f"could not form a rectangular matrix: {exc}") from None
    if arr.ndim != 2:
        raise RaggedPanel(f"expected a 2-d value matrix, got ndim={arr.ndim}")
    return Panel(arr.copy(), tuple(str(s) for s in series_ids), tuple(int(t) for t in time_index))

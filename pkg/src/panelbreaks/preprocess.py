"""Transformations applied before detection.

Per-game rates, cross-sectional (per-season) z-scores, per-series z-scores,
and deterministic regression imputation of missing values. The standard
deviation convention is sample (n-1) everywhere.

Missing values are represented explicitly: a RawSeries pairs values with a
boolean mask (True = missing) so missingness survives arithmetic instead of
being smuggled through NaN.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    DegenerateSeason,
    DegenerateSeries,
    InsufficientData,
    MisalignedSeries,
    ZeroGames,
)
from .panel import Panel, build_panel


class StandardizationMode(Enum):
    PER_GAME_RATE = "per_game_rate"
    SEASON_ZSCORE = "season_zscore"
    SERIES_ZSCORE = "series_zscore"
    NONE = "none"


@dataclass(frozen=True)
class RawSeries:
    """Observations on a year grid with an explicit missingness mask."""

    time_index: tuple[int, ...]
    values: np.ndarray
    missing: np.ndarray  # bool, True where the observation is absent

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        mask = np.asarray(self.missing, dtype=bool)
        if vals.shape != mask.shape or vals.ndim != 1:
            raise MisalignedSeries("values and missingness mask must be 1-d and equal length")
        if len(self.time_index) != vals.size:
            raise MisalignedSeries("time index and values must have equal length")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "missing", mask)

    @classmethod
    def from_optional(cls, time_index, values) -> "RawSeries":
        """Build from a sequence where None marks a missing observation."""
        mask = np.array([v is None for v in values], dtype=bool)
        vals = np.array([0.0 if v is None else float(v) for v in values], dtype=np.float64)
        return cls(tuple(int(t) for t in time_index), vals, mask)

    @property
    def n_observed(self) -> int:
        return int((~self.missing).sum())


def per_game_rate(counts: RawSeries, games: RawSeries) -> RawSeries:
    """Seasonal count divided by games played; missingness is the union of inputs.

    Scale-consistent: doubling both counts and games leaves the rate unchanged.
    """
    if counts.time_index != games.time_index:
        raise MisalignedSeries("counts and games cover different years")
    bad = (~counts.missing) & (~games.missing) & (games.values == 0)
    if bad.any():
        year = counts.time_index[int(np.argmax(bad))]
        raise ZeroGames(f"zero games in {year} where counts are observed")
    mask = counts.missing | games.missing
    out = np.zeros_like(counts.values)
    ok = ~mask
    out[ok] = counts.values[ok] / games.values[ok]
    return RawSeries(counts.time_index, out, mask)


def season_zscore(value: float, peers) -> float:
    """Standardize one observation against its season's peer set.

    Uses the peer mean and sample (n-1) standard deviation, so the peer set
    itself maps to mean 0 and sd 1.
    """
    p = np.asarray(peers, dtype=np.float64)
    if p.size < 2:
        raise DegenerateSeason(f"need at least 2 peers, got {p.size}")
    sd = float(np.std(p, ddof=1))
    if sd == 0.0:
        raise DegenerateSeason("peer set has zero spread")
    return (float(value) - float(np.mean(p))) / sd


def impute_linear(series: RawSeries) -> RawSeries:
    """Fill missing values with the least-squares line of value on year.

    Fitted on this series' observed points only; observed values pass through
    bit-identical, so the operation is idempotent and deterministic.
    """
    if series.n_observed < 2:
        raise InsufficientData(
            f"imputation needs >= 2 observed values, got {series.n_observed}"
        )
    if not series.missing.any():
        return series
    obs = ~series.missing
    years = np.asarray(series.time_index, dtype=np.float64)
    slope, intercept = np.polyfit(years[obs], series.values[obs], deg=1)
    filled = series.values.copy()
    filled[series.missing] = slope * years[series.missing] + intercept
    return RawSeries(series.time_index, filled, np.zeros_like(series.missing))


def series_zscore(panel: Panel) -> Panel:
    """Standardize each row of the panel to mean 0 and sample sd 1."""
    sds = np.std(panel.values, axis=1, ddof=1)
    if np.any(sds == 0.0):
        flat = panel.series_ids[int(np.argmax(sds == 0.0))]
        raise DegenerateSeries(f"series {flat!r} has zero spread")
    means = np.mean(panel.values, axis=1)
    standardized = (panel.values - means[:, None]) / sds[:, None]
    return build_panel(standardized, panel.series_ids, panel.time_index)

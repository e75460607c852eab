"""Per-series scaled CUSUM over arbitrary intervals.

For series j with values x_t on an interval [s, e] and candidate split b,
the statistic is

    X(s, b, e) = (1/sigma_j) * [ w1 * sum(x_s..x_b) - w2 * sum(x_{b+1}..x_e) ]
    w1 = sqrt((e - b) / ((e - s + 1) * (b - s + 1)))
    w2 = sqrt((b - s + 1) / ((e - s + 1) * (e - b)))

The weights satisfy w1*(b-s+1) == w2*(e-b), which makes the statistic
invariant to adding a constant to the series and antisymmetric under value
negation. sigma_j is a per-series scale; the estimator is configurable
because mean shifts contaminate naive spread estimates.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DegenerateSeries, IndexOutOfRange, InsufficientData
from .panel import Panel

logger = logging.getLogger(__name__)

# Phi^{-1}(0.75): makes the median absolute first difference a consistent
# estimator of the noise sd for Gaussian series.
GAUSSIAN_MAD_FACTOR = 0.6745

SCALE_METHODS = ("mad_diff", "sd_diff", "unit")


@dataclass(frozen=True)
class ScaleEstimate:
    sigma: float
    method: str

    def __post_init__(self):
        if self.sigma <= 0:
            raise DegenerateSeries(f"scale must be positive, got {self.sigma}")


@dataclass(frozen=True)
class CusumRow:
    """CUSUM values of one series for every split b = s..e-1 of an interval."""

    s: int
    e: int
    j: int
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != (self.e - self.s,):
            raise IndexOutOfRange(
                f"row for ({self.s}, {self.e}) must have length {self.e - self.s}"
            )


def estimate_scale(series, method: str = "mad_diff") -> ScaleEstimate:
    """Estimate a per-series noise scale.

    mad_diff: median(|x_t - x_{t-1}|) / (0.6745 * sqrt(2)), robust to the
    mean shifts being detected. sd_diff: sd of first differences / sqrt(2).
    unit: no scaling. Difference methods need at least 3 observations and
    raise DegenerateSeries when the estimate collapses to zero.
    """
    if method == "unit":
        return ScaleEstimate(1.0, "unit")
    if method not in SCALE_METHODS:
        raise ConfigError(f"unknown scale method {method!r}; choose from {SCALE_METHODS}")
    x = np.asarray(series, dtype=np.float64)
    if x.size < 3:
        raise InsufficientData(f"{method} needs length >= 3, got {x.size}")
    d = np.diff(x)
    if method == "mad_diff":
        sigma = float(np.median(np.abs(d))) / (GAUSSIAN_MAD_FACTOR * np.sqrt(2.0))
    else:
        sigma = float(np.std(d, ddof=1)) / np.sqrt(2.0)
    if sigma <= 0:
        raise DegenerateSeries(f"{method} scale is zero (constant or near-constant series)")
    return ScaleEstimate(sigma, method)


def panel_scales(panel: Panel, method: str = "mad_diff") -> np.ndarray:
    """Per-series scales for a panel, estimated once on the full series.

    A degenerate series falls back to unit scale with a logged warning
    rather than aborting the whole panel run.
    """
    sigmas = np.empty(panel.n)
    for i in range(panel.n):
        try:
            sigmas[i] = estimate_scale(panel.values[i], method).sigma
        except DegenerateSeries:
            logger.warning(
                "series %r has degenerate %s scale; falling back to unit",
                panel.series_ids[i],
                method,
            )
            sigmas[i] = 1.0
    return sigmas


def _check_interval(panel: Panel, s: int, b: int, e: int) -> None:
    if not (1 <= s <= b < e <= panel.T):
        raise IndexOutOfRange(f"(s, b, e) = {(s, b, e)} invalid for T={panel.T}")


def cusum_at(panel: Panel, j: int, s: int, b: int, e: int, sigma_j: float) -> float:
    """Direct evaluation of the scaled CUSUM for series j at one split b.

    j, s, b, e are 1-based; s <= b < e <= T. Computed from explicit slice
    sums, independently of the prefix-sum path in cusum_row.
    """
    _check_interval(panel, s, b, e)
    if not (1 <= j <= panel.n):
        raise IndexOutOfRange(f"series index {j} outside 1..{panel.n}")
    if sigma_j <= 0:
        raise DegenerateSeries(f"sigma must be positive, got {sigma_j}")
    x = panel.values[j - 1, s - 1 : e]
    n1 = b - s + 1
    n2 = e - b
    L = e - s + 1
    w1 = np.sqrt(n2 / (L * n1))
    w2 = np.sqrt(n1 / (L * n2))
    return float((w1 * x[:n1].sum() - w2 * x[n1:].sum()) / sigma_j)


def cusum_row(panel: Panel, j: int, s: int, e: int, sigma_j: float) -> CusumRow:
    """Scaled CUSUM of series j for every b in s..e-1, in O(e-s) via prefix sums."""
    _check_interval(panel, s, s, e)
    if not (1 <= j <= panel.n):
        raise IndexOutOfRange(f"series index {j} outside 1..{panel.n}")
    if sigma_j <= 0:
        raise DegenerateSeries(f"sigma must be positive, got {sigma_j}")
    x = panel.values[j - 1, s - 1 : e]
    L = x.size
    cum = np.cumsum(x)
    left = cum[:-1]
    right = cum[-1] - left
    n1 = np.arange(1, L, dtype=np.float64)
    n2 = L - n1
    w1 = np.sqrt(n2 / (L * n1))
    w2 = np.sqrt(n1 / (L * n2))
    return CusumRow(s, e, j, (w1 * left - w2 * right) / sigma_j)


def abs_cusum_matrix(panel: Panel, s: int, e: int, scales) -> np.ndarray:
    """|CUSUM| for every series (rows) and every split b = s..e-1 (columns)."""
    _check_interval(panel, s, s, e)
    sig = np.asarray(scales, dtype=np.float64)
    if sig.shape != (panel.n,):
        raise ConfigError(f"need one scale per series, got shape {sig.shape}")
    if np.any(sig <= 0):
        raise DegenerateSeries("all scales must be positive")
    window = panel.values[:, s - 1 : e]
    L = window.shape[1]
    cum = np.cumsum(window, axis=1)
    left = cum[:, :-1]
    right = cum[:, -1:] - left
    n1 = np.arange(1, L, dtype=np.float64)
    n2 = L - n1
    w1 = np.sqrt(n2 / (L * n1))
    w2 = np.sqrt(n1 / (L * n2))
    return np.abs((left * w1 - right * w2) / sig[:, None])

"""Cross-sectional aggregation of per-series CUSUM values at each split.

At a candidate split b the per-series |CUSUM| values are ordered
descending, |X^(1)| >= ... >= |X^(n)|, and aggregated as

    D_m = {m(2n - m) / (2n)}^phi * ( mean of the top m  -  sum of the rest / (2n - m) )

for m = 1..n and phi in [0, 1]. The statistic of an interval is the maximum
of D_m(b) over all splits b and counts m; ordering makes it invariant to
permuting the panel's rows, and the top-m mean always dominates the scaled
remainder, so the maximized value is non-negative.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cusum import abs_cusum_matrix
from .errors import BadM, ConfigError, UnsortedInput
from .panel import Panel


@dataclass(frozen=True)
class DcConfig:
    """Aggregation exponent phi; 0 removes the count-dependent weight."""

    phi: float = 0.5

    def __post_init__(self):
        if not (0.0 <= self.phi <= 1.0):
            raise ConfigError(f"phi must lie in [0, 1], got {self.phi}")


@dataclass(frozen=True)
class DcResult:
    """Maximizing split, series count and value over one interval.

    Ties are broken toward the smallest b, then the smallest m.
    """

    b_star: int
    m_star: int
    value: float


def dc_at(ordered_abs_cusums, m: int, phi: float) -> float:
    """Aggregate one descending vector of |CUSUM| values at series count m."""
    a = np.asarray(ordered_abs_cusums, dtype=np.float64)
    n = a.size
    if not (1 <= m <= n):
        raise BadM(f"m must lie in 1..{n}, got {m}")
    if np.any(np.diff(a) > 0):
        raise UnsortedInput("input must be sorted in descending order")
    if not (0.0 <= phi <= 1.0):
        raise ConfigError(f"phi must lie in [0, 1], got {phi}")
    weight = (m * (2 * n - m) / (2 * n)) ** phi
    top = a[:m].mean()
    rest = a[m:].sum() / (2 * n - m)
    return float(weight * (top - rest))


def dc_statistic(panel: Panel, s: int, e: int, scales, config: DcConfig) -> DcResult:
    """Maximize the aggregated statistic over all (b, m) in an interval.

    Materializes the full n x (e-s) |CUSUM| matrix, sorts each column
    descending and evaluates every m via cumulative sums; at this package's
    panel sizes that is cheap and exact.
    """
    A = abs_cusum_matrix(panel, s, e, scales)  # (n, e-s)
    n, nb = A.shape
    ordered = -np.sort(-A, axis=0)
    csum = np.cumsum(ordered, axis=0)
    m = np.arange(1, n + 1, dtype=np.float64)[:, None]
    top = csum / m
    rest = (csum[-1:, :] - csum) / (2 * n - m)
    weight = (m * (2 * n - m) / (2 * n)) ** config.phi
    D = weight * (top - rest)  # (n_m, n_b)
    # flat argmax over (b, m) order: first maximum = smallest b, then smallest m
    flat = np.argmax(D.T)
    b_idx, m_idx = divmod(int(flat), n)
    return DcResult(b_star=s + b_idx, m_star=m_idx + 1, value=float(D[m_idx, b_idx]))

"""Variance change detection through Haar wavelet periodograms.

The squared Haar detail coefficient at dyadic scale -k tracks local
variance: for a window of 2^k points starting at t,

    d_t = 2^{-k/2} * (sum of the first 2^{k-1} values - sum of the last 2^{k-1})

and the periodogram entry is d_t^2. Windows that run past the right edge
are completed by symmetric reflection (edge value repeated), so the output
keeps the input length. Mean-change machinery applied to periodogram series
then finds variance change points.

Mean shifts would masquerade as variance shifts, so each series is
mean-stabilized first: per-segment means from a preliminary mean-change
pass are subtracted before the transform.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .double_cusum import DcConfig
from .errors import ConfigError, ScaleTooCoarse
from .panel import Panel, build_panel
from .segmentation import DEFAULT_MIN_SEG, ChangePoint, DetectionResult, detect_mean_changes


@dataclass(frozen=True)
class WaveletScaleSet:
    """Dyadic scales -1, -2, ..., -J (finest first)."""

    scales: tuple[int, ...] = (-1, -2)

    def __post_init__(self):
        if len(self.scales) == 0:
            raise ConfigError("at least one scale required")
        if tuple(self.scales) != tuple(range(-1, -len(self.scales) - 1, -1)):
            raise ConfigError(f"scales must be -1, -2, ..., -J; got {self.scales}")

    @classmethod
    def down_to(cls, J: int) -> "WaveletScaleSet":
        if J < 1:
            raise ConfigError(f"J must be >= 1, got {J}")
        return cls(tuple(range(-1, -J - 1, -1)))

    @property
    def J(self) -> int:
        return len(self.scales)

    def validate_for(self, T: int) -> None:
        if self.J > int(np.floor(np.log2(T))) - 1:
            raise ScaleTooCoarse(f"J={self.J} too coarse for T={T}")


def haar_periodogram(series, scale: int) -> np.ndarray:
    """Squared Haar detail coefficients of one series at a dyadic scale."""
    if scale >= 0:
        raise ConfigError(f"scale must be a negative integer, got {scale}")
    x = np.asarray(series, dtype=np.float64)
    k = -int(scale)
    width = 2**k
    if x.size < width:
        raise ScaleTooCoarse(f"scale {scale} needs length >= {width}, got {x.size}")
    padded = np.pad(x, (0, width - 1), mode="symmetric")
    cum = np.concatenate(([0.0], np.cumsum(padded)))
    half = width // 2
    starts = np.arange(x.size)
    first = cum[starts + half] - cum[starts]
    last = cum[starts + width] - cum[starts + half]
    detail = (first - last) / np.sqrt(width)
    return detail**2


def mean_stabilize(panel: Panel, mean_result: DetectionResult) -> Panel:
    """Subtract each series' per-segment mean, using a prior mean-change pass."""
    values = panel.values.copy()
    for s, e in mean_result.segments:
        block = values[:, s - 1 : e]
        block -= block.mean(axis=1, keepdims=True)
    return Panel(values, panel.series_ids, panel.time_index)


def build_variance_panel(
    panel: Panel,
    scales: WaveletScaleSet = WaveletScaleSet(),
    config: DcConfig = DcConfig(),
    min_seg: int = DEFAULT_MIN_SEG,
    mean_threshold: float = 0.0,
    scale_method: str = "mad_diff",
) -> Panel:
    """Mean-stabilize, then expand each series into one periodogram row per scale.

    Row order is series-major: all scales of series 1, then series 2, ...
    """
    scales.validate_for(panel.T)
    pre = detect_mean_changes(panel, mean_threshold, config, min_seg, scale_method)
    stabilized = mean_stabilize(panel, pre)
    rows = []
    ids = []
    for i, sid in enumerate(stabilized.series_ids):
        for sc in scales.scales:
            rows.append(haar_periodogram(stabilized.values[i], sc))
            ids.append(f"{sid}|d{-sc}")
    return build_panel(rows, ids, panel.time_index)


def detect_variance_changes(
    panel: Panel,
    scales: WaveletScaleSet = WaveletScaleSet(),
    threshold: float = 0.0,
    config: DcConfig = DcConfig(),
    min_seg: int = DEFAULT_MIN_SEG,
    mean_threshold: float | None = None,
    scale_method: str = "mad_diff",
    seed: int | None = None,
) -> DetectionResult:
    """Variance change points: mean detection on the expanded periodogram panel.

    mean_threshold controls the preliminary stabilization pass and defaults
    to the detection threshold. Equals detect_mean_changes applied to
    build_variance_panel output, with change points relabelled as variance
    and provenance pointing at the original panel.
    """
    if mean_threshold is None:
        mean_threshold = threshold
    vp = build_variance_panel(panel, scales, config, min_seg, mean_threshold, scale_method)
    res = detect_mean_changes(vp, threshold, config, min_seg, scale_method, seed=seed)
    relabelled = tuple(
        ChangePoint(
            time_label=cp.time_label,
            index=cp.index,
            kind="variance",
            dc_value=cp.dc_value,
            threshold=cp.threshold,
            segment=cp.segment,
        )
        for cp in res.change_points
    )
    return DetectionResult(
        change_points=relabelled,
        segments=res.segments,
        config={
            **res.config,
            "kind": "variance",
            "scales": list(scales.scales),
            "mean_threshold": float(mean_threshold),
        },
        seed=seed,
        panel_fingerprint=panel.fingerprint(),
    )

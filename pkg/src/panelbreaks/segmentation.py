"""Recursive binary segmentation driven by the aggregated CUSUM statistic.

A segment's maximizing split is accepted when the statistic exceeds the
threshold and both children keep at least min_seg points; accepted splits
recurse. The same threshold applies at every level, so raising it can only
prune the recursion tree — the detected set at a higher threshold is always
a subset of the set at a lower one.

A change point's reported year is the label at index b, i.e. the last year
of the left segment.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cusum import panel_scales
from .double_cusum import DcConfig, dc_statistic
from .errors import ConfigError, FingerprintMismatch
from .panel import Panel

DEFAULT_MIN_SEG = 5


@dataclass(frozen=True)
class ChangePoint:
    time_label: int
    index: int  # b in 1..T-1
    kind: str  # "mean" | "variance"
    dc_value: float
    threshold: float
    segment: tuple[int, int]  # interval (s, e) the split was found in


@dataclass(frozen=True)
class DetectionResult:
    change_points: tuple[ChangePoint, ...]
    segments: tuple[tuple[int, int], ...]
    config: dict
    seed: int | None
    panel_fingerprint: str

    def indices(self) -> tuple[int, ...]:
        return tuple(cp.index for cp in self.change_points)

    def years(self) -> tuple[int, ...]:
        return tuple(cp.time_label for cp in self.change_points)


def _segments_from_indices(indices, T: int) -> tuple[tuple[int, int], ...]:
    bounds = [0, *indices, T]
    return tuple((bounds[i] + 1, bounds[i + 1]) for i in range(len(bounds) - 1))


def detect_mean_changes(
    panel: Panel,
    threshold: float,
    config: DcConfig = DcConfig(),
    min_seg: int = DEFAULT_MIN_SEG,
    scale_method: str = "mad_diff",
    seed: int | None = None,
) -> DetectionResult:
    """Locate mean change points by thresholded binary segmentation.

    Per-series scales are estimated once on the full panel. Deterministic:
    identical inputs give identical results regardless of recursion order.
    """
    if min_seg < 2:
        raise ConfigError(f"min_seg must be >= 2, got {min_seg}")
    if not (threshold >= 0):
        raise ConfigError(f"threshold must be >= 0, got {threshold}")
    scales = panel_scales(panel, scale_method)
    found: list[ChangePoint] = []
    stack: list[tuple[int, int]] = [(1, panel.T)]
    while stack:
        s, e = stack.pop()
        if e - s + 1 < 2 * min_seg:
            continue  # no split can leave both children >= min_seg
        r = dc_statistic(panel, s, e, scales, config)
        if r.value > threshold and r.b_star - s + 1 >= min_seg and e - r.b_star >= min_seg:
            found.append(
                ChangePoint(
                    time_label=panel.time_index[r.b_star - 1],
                    index=r.b_star,
                    kind="mean",
                    dc_value=r.value,
                    threshold=float(threshold),
                    segment=(s, e),
                )
            )
            stack.append((s, r.b_star))
            stack.append((r.b_star + 1, e))
    found.sort(key=lambda cp: cp.index)
    return DetectionResult(
        change_points=tuple(found),
        segments=_segments_from_indices([cp.index for cp in found], panel.T),
        config={
            "kind": "mean",
            "phi": config.phi,
            "min_seg": min_seg,
            "threshold": float(threshold),
            "scale_method": scale_method,
        },
        seed=seed,
        panel_fingerprint=panel.fingerprint(),
    )


def segment_means(panel: Panel, result: DetectionResult) -> np.ndarray:
    """Per-series arithmetic means within each detected segment.

    Returns an (n, n_segments) array whose columns follow result.segments.
    The result must have been produced from this panel.
    """
    if result.panel_fingerprint != panel.fingerprint():
        raise FingerprintMismatch("result was produced from a different panel")
    out = np.empty((panel.n, len(result.segments)))
    for k, (s, e) in enumerate(result.segments):
        out[:, k] = panel.values[:, s - 1 : e].mean(axis=1)
    return out

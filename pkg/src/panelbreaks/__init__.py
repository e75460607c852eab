"""Mean and variance change-point detection for multivariate panel time series.

Per-series CUSUM statistics are aggregated across a panel by ordering and
contrasting the largest against the rest, binary segmentation recurses on
thresholded maxima, a factor-model block bootstrap calibrates thresholds,
and Haar periodograms turn variance shifts into mean shifts. A seasonal
baseball ingestion pipeline and a CLI tie the pieces into runnable analyses.
"""

from .cusum import CusumRow, ScaleEstimate, cusum_at, cusum_row, estimate_scale, panel_scales
from .double_cusum import DcConfig, DcResult, dc_at, dc_statistic
from .errors import PanelbreaksError
from .panel import Interval, Panel, build_panel
from .preprocess import RawSeries, impute_linear, per_game_rate, season_zscore, series_zscore
from .segmentation import (
    DEFAULT_MIN_SEG,
    ChangePoint,
    DetectionResult,
    detect_mean_changes,
    segment_means,
)
from .synth import (
    DetectionScore,
    PlantedPanelSpec,
    brute_force_single_change,
    gen_piecewise_panel,
    score_detection,
)
from .threshold import (
    FactorModel,
    ThresholdSpec,
    bootstrap_replicate,
    calibrate_threshold,
    choose_n_factors,
    deterministic_threshold,
    fit_factor_model,
)
from .wavelet import (
    WaveletScaleSet,
    build_variance_panel,
    detect_variance_changes,
    haar_periodogram,
    mean_stabilize,
)

__version__ = "0.1.0"

__all__ = [
    "ChangePoint",
    "CusumRow",
    "DcConfig",
    "DcResult",
    "DetectionResult",
    "DetectionScore",
    "DEFAULT_MIN_SEG",
    "FactorModel",
    "Interval",
    "Panel",
    "PanelbreaksError",
    "PlantedPanelSpec",
    "RawSeries",
    "ScaleEstimate",
    "ThresholdSpec",
    "WaveletScaleSet",
    "bootstrap_replicate",
    "brute_force_single_change",
    "build_panel",
    "build_variance_panel",
    "calibrate_threshold",
    "choose_n_factors",
    "cusum_at",
    "cusum_row",
    "dc_at",
    "dc_statistic",
    "detect_mean_changes",
    "detect_variance_changes",
    "deterministic_threshold",
    "estimate_scale",
    "fit_factor_model",
    "gen_piecewise_panel",
    "haar_periodogram",
    "impute_linear",
    "mean_stabilize",
    "panel_scales",
    "per_game_rate",
    "score_detection",
    "season_zscore",
    "segment_means",
    "series_zscore",
]

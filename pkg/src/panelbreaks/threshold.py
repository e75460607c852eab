"""Detection-threshold calibration.

Bootstrap route: fit a static approximate factor model (principal
components of the cross-sectional covariance), resample factor and
idiosyncratic series by circular block bootstrap, and take an upper
quantile of the full-interval maximum aggregated-CUSUM statistic across
replicates. Resampling whole time blocks of the factor and residual
matrices preserves both serial and cross-series dependence, which plain
i.i.d. resampling would destroy.

Deterministic route: a fixed rate in the series length, C * sqrt(log T) *
log(log(8T)), with the constant supplied by the caller.

Calibration is a pure function of (panel, parameters, seed): each replicate
draws from its own child stream spawned by index, so serial and parallel
execution would produce identical thresholds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cusum import panel_scales
from .double_cusum import DcConfig, dc_statistic
from .errors import ConfigError, RankDeficient
from .panel import Panel

_EIG_TOL = 1e-10


@dataclass(frozen=True)
class ThresholdSpec:
    """How a detection threshold was produced, plus the threshold itself."""

    method: str  # "bootstrap" | "deterministic"
    threshold: float
    alpha: float | None = None
    n_reps: int | None = None
    n_factors: int | None = None
    seed: int | None = None
    constant: float | None = None
    block_len: int | None = None

    def __post_init__(self):
        if self.threshold < 0:
            raise ConfigError(f"threshold must be >= 0, got {self.threshold}")
        if self.method == "bootstrap":
            if self.alpha is None or not (0.0 < self.alpha < 1.0):
                raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha}")
            if self.n_reps is None or self.n_reps < 100:
                raise ConfigError(f"bootstrap needs n_reps >= 100, got {self.n_reps}")
        elif self.method == "deterministic":
            if self.constant is None or self.constant <= 0:
                raise ConfigError(f"constant must be > 0, got {self.constant}")
        else:
            raise ConfigError(f"unknown threshold method {self.method!r}")


@dataclass(frozen=True)
class FactorModel:
    """values = mean + loadings @ factors + residuals, reconstructed exactly."""

    mean: np.ndarray  # (n,)
    loadings: np.ndarray  # (n, r)
    factors: np.ndarray  # (r, T)
    residuals: np.ndarray  # (n, T)
    series_ids: tuple[str, ...]
    time_index: tuple[int, ...]

    @property
    def n_factors(self) -> int:
        return self.loadings.shape[1]

    @property
    def T(self) -> int:
        return self.factors.shape[1]

    def reconstruct(self) -> np.ndarray:
        return self.mean[:, None] + self.loadings @ self.factors + self.residuals


def choose_n_factors(values: np.ndarray) -> int:
    """Eigenvalue-ratio rule: argmax of lambda_k / lambda_{k+1}, k <= min(n, T)/2."""
    centered = values - values.mean(axis=1, keepdims=True)
    n, T = centered.shape
    eig = np.linalg.eigvalsh(centered @ centered.T / T)[::-1]
    kmax = max(1, min(n, T) // 2)
    ratios = eig[:kmax] / np.maximum(eig[1 : kmax + 1], _EIG_TOL)
    return int(np.argmax(ratios)) + 1


def fit_factor_model(panel: Panel, n_factors: int) -> FactorModel:
    """Principal-components factor fit of a panel.

    Series are centered internally; loadings are the top n_factors
    eigenvectors of the cross-sectional covariance and factors the
    corresponding scores, so loadings @ factors is the rank-n_factors
    projection and the reconstruction identity is exact by construction.
    """
    n, T = panel.n, panel.T
    if not (1 <= n_factors < min(n, T)):
        raise ConfigError(f"n_factors must lie in 1..{min(n, T) - 1}, got {n_factors}")
    mean = panel.values.mean(axis=1)
    centered = panel.values - mean[:, None]
    cov = centered @ centered.T / T
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1]
    eigvals = eigvals[order]
    if eigvals[n_factors - 1] <= _EIG_TOL * max(eigvals[0], 1.0):
        raise RankDeficient(
            f"covariance supports fewer than {n_factors} factors "
            f"(eigenvalue {n_factors} is {eigvals[n_factors - 1]:.3e})"
        )
    loadings = eigvecs[:, order[:n_factors]]
    factors = loadings.T @ centered
    residuals = centered - loadings @ factors
    return FactorModel(mean, loadings, factors, residuals, panel.series_ids, panel.time_index)


def default_block_len(T: int) -> int:
    return int(math.ceil(T ** (1.0 / 3.0)))


def _circular_block_indices(T: int, block_len: int, rng: np.random.Generator) -> np.ndarray:
    n_blocks = math.ceil(T / block_len)
    starts = rng.integers(0, T, size=n_blocks)
    idx = (starts[:, None] + np.arange(block_len)[None, :]) % T
    return idx.ravel()[:T]


def bootstrap_replicate(model: FactorModel, rng: np.random.Generator) -> Panel:
    """One resampled panel: factors and residuals drawn by independent
    circular block bootstraps (factor blocks first, then residual blocks),
    recombined through the loadings."""
    T = model.T
    block = default_block_len(T)
    f_idx = _circular_block_indices(T, block, rng)
    e_idx = _circular_block_indices(T, block, rng)
    values = (
        model.mean[:, None]
        + model.loadings @ model.factors[:, f_idx]
        + model.residuals[:, e_idx]
    )
    return Panel(values, model.series_ids, model.time_index)


def calibrate_threshold(
    panel: Panel,
    config: DcConfig = DcConfig(),
    n_reps: int = 500,
    alpha: float = 0.05,
    seed: int = 0,
    n_factors: int | None = None,
    scale_method: str = "mad_diff",
) -> ThresholdSpec:
    """Empirical (1 - alpha) quantile of full-interval maxima across replicates.

    Each replicate re-estimates per-series scales and maximizes the
    aggregated statistic over the whole interval (no recursion). The panel
    itself is the calibration null; any change points it contains inflate
    the threshold conservatively.
    """
    if not (0.0 < alpha < 1.0):
        raise ConfigError(f"alpha must lie in (0, 1), got {alpha}")
    if n_reps < 100:
        raise ConfigError(f"n_reps must be >= 100, got {n_reps}")
    if n_factors is None:
        n_factors = choose_n_factors(panel.values)
    model = fit_factor_model(panel, n_factors)
    streams = np.random.SeedSequence(seed).spawn(n_reps)
    maxima = np.empty(n_reps)
    for i in range(n_reps):
        rep = bootstrap_replicate(model, np.random.default_rng(streams[i]))
        scales = panel_scales(rep, scale_method)
        maxima[i] = dc_statistic(rep, 1, rep.T, scales, config).value
    threshold = float(np.quantile(maxima, 1.0 - alpha, method="higher"))
    return ThresholdSpec(
        method="bootstrap",
        threshold=threshold,
        alpha=alpha,
        n_reps=n_reps,
        n_factors=n_factors,
        seed=seed,
        block_len=default_block_len(panel.T),
    )


def deterministic_threshold(n: int, T: int, C: float) -> ThresholdSpec:
    """Fixed-rate threshold C * sqrt(log T) * log(log(8T)).

    The rate depends on the series length only; n is accepted for interface
    symmetry with the bootstrap route.
    """
    if C <= 0:
        raise ConfigError(f"C must be > 0, got {C}")
    if T < 2:
        raise ConfigError(f"T must be >= 2, got {T}")
    threshold = C * math.sqrt(math.log(T)) * math.log(math.log(8.0 * T))
    return ThresholdSpec(method="deterministic", threshold=float(threshold), constant=C)

"""Result and threshold documents, plus static figure emission.

Documents are single JSON files with sorted keys and no timestamps, so a
re-run with identical inputs and seed is byte-identical and diffs stay
readable. Detection documents embed the analyzed panel, which makes them
self-contained inputs for plotting and re-scoring.

Figures are written with a fixed SVG hash salt and no creation date so the
output bytes are deterministic too. Mean change points draw as solid
vertical lines, variance change points as dashed ones.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .errors import MalformedResult
from .panel import Panel
from .segmentation import DetectionResult
from .threshold import ThresholdSpec

RESULT_SCHEMA = "panelbreaks/result/v1"
THRESHOLD_SCHEMA = "panelbreaks/threshold/v1"

_SVG_SALT = "panelbreaks"

MEAN_STYLE = dict(color="crimson", linestyle="-")
VARIANCE_STYLE = dict(color="navy", linestyle="--")


def write_document(doc: dict, path: str | Path) -> None:
    """Serialize to JSON atomically (write then rename)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    os.replace(tmp, path)


def read_document(path: str | Path, expected_schema: str) -> dict:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise MalformedResult(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(doc, dict) or doc.get("schema") != expected_schema:
        raise MalformedResult(f"{path}: expected schema {expected_schema!r}")
    return doc


def panel_to_dict(panel: Panel) -> dict:
    return {
        "n": panel.n,
        "T": panel.T,
        "series_ids": list(panel.series_ids),
        "time_index": list(panel.time_index),
        "fingerprint": panel.fingerprint(),
        "values": [[float(v) for v in row] for row in panel.values],
    }


def detection_to_dict(result: DetectionResult) -> dict:
    return {
        "change_points": [
            {
                "index": cp.index,
                "year": cp.time_label,
                "kind": cp.kind,
                "dc_value": cp.dc_value,
                "threshold": cp.threshold,
                "segment": list(cp.segment),
            }
            for cp in result.change_points
        ],
        "segments": [list(seg) for seg in result.segments],
        "config": result.config,
        "seed": result.seed,
        "panel_fingerprint": result.panel_fingerprint,
    }


def threshold_spec_to_dict(spec: ThresholdSpec) -> dict:
    return asdict(spec)


def threshold_spec_from_dict(d: dict) -> ThresholdSpec:
    try:
        return ThresholdSpec(**d)
    except TypeError as exc:
        raise MalformedResult(f"bad threshold spec: {exc}") from None


def result_document(
    recipe: str,
    input_path: str,
    panel: Panel,
    params: dict,
    runs: dict,
    threshold_specs: dict,
) -> dict:
    return {
        "schema": RESULT_SCHEMA,
        "command": "detect",
        "recipe": recipe,
        "input": str(input_path),
        "panel": panel_to_dict(panel),
        "params": params,
        "thresholds": {k: threshold_spec_to_dict(v) for k, v in threshold_specs.items()},
        "runs": {k: detection_to_dict(v) for k, v in runs.items()},
    }


def threshold_document(
    recipe: str,
    input_path: str,
    panel: Panel,
    params: dict,
    threshold_specs: dict,
) -> dict:
    return {
        "schema": THRESHOLD_SCHEMA,
        "command": "calibrate",
        "recipe": recipe,
        "input": str(input_path),
        "panel_fingerprint": panel.fingerprint(),
        "params": params,
        "thresholds": {k: threshold_spec_to_dict(v) for k, v in threshold_specs.items()},
    }


def _doc_change_points(doc: dict) -> list[dict]:
    points = []
    for run in doc.get("runs", {}).values():
        points.extend(run.get("change_points", []))
    return points


def plot_result_figure(doc: dict):
    """One stacked subplot per series with change-point markers on each."""
    panel = doc.get("panel")
    if not panel or "values" not in panel:
        raise MalformedResult("document carries no panel values to plot")
    values = np.asarray(panel["values"], dtype=float)
    years = panel["time_index"]
    ids = panel["series_ids"]
    points = _doc_change_points(doc)

    n = values.shape[0]
    fig, axes = plt.subplots(n, 1, sharex=True, figsize=(9.0, 1.6 * n + 1.0), squeeze=False)
    for i, ax in enumerate(axes[:, 0]):
        ax.plot(years, values[i], color="0.25", linewidth=1.0)
        ax.set_ylabel(ids[i], rotation=0, ha="right", va="center", fontsize=8)
        for cp in points:
            style = MEAN_STYLE if cp["kind"] == "mean" else VARIANCE_STYLE
            ax.axvline(cp["year"], linewidth=1.0, alpha=0.8, **style)
    axes[-1, 0].set_xlabel("year")
    fig.suptitle(f"{doc.get('recipe', '')}: change points", fontsize=10)
    fig.tight_layout()
    return fig


def plot_timeline_figure(docs: list[dict]):
    """One row per analyzed panel, markers at each change-point year."""
    if not docs:
        raise MalformedResult("no documents to plot")
    labels = [doc.get("recipe", f"run {i}") for i, doc in enumerate(docs)]
    fig, ax = plt.subplots(figsize=(9.0, 0.4 * len(docs) + 1.5))
    spans = []
    for row, doc in enumerate(docs):
        years = doc["panel"]["time_index"]
        spans.extend((years[0], years[-1]))
        ax.hlines(row, years[0], years[-1], color="0.8", linewidth=2.0)
        for cp in _doc_change_points(doc):
            style = MEAN_STYLE if cp["kind"] == "mean" else VARIANCE_STYLE
            ax.vlines(cp["year"], row - 0.35, row + 0.35, linewidth=1.6, **style)
    ax.set_yticks(range(len(docs)))
    ax.set_yticklabels(labels, fontsize=8)
    ax.set_xlim(min(spans) - 2, max(spans) + 2)
    ax.set_xlabel("year")
    ax.invert_yaxis()
    fig.tight_layout()
    return fig


def save_figure(fig, path: str | Path) -> None:
    """Write a figure with deterministic bytes; format follows the suffix."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with matplotlib.rc_context({"svg.hashsalt": _SVG_SALT}):
        fig.savefig(path, metadata={"Date": None} if path.suffix == ".svg" else None)
    plt.close(fig)

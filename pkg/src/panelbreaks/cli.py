"""Command-line surface.

Three subcommands: detect (build a panel, calibrate or accept a threshold,
run mean and/or variance detection, write one result document), calibrate
(write a reusable threshold document), and plot (render figures from result
documents). Every run is reproducible from its echoed parameters and seed.

Exit codes: 0 success, 2 usage, 3 ingest, 4 numeric or configuration,
5 input/output.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import baseball
from .double_cusum import DcConfig
from .errors import (
    BadTimeIndex,
    EmptyPanel,
    FranchiseTooShort,
    MalformedResult,
    MisalignedSeries,
    MissingFranchiseYear,
    MissingYears,
    NonFinite,
    PanelbreaksError,
    ParseError,
    RaggedPanel,
    ShapeMismatch,
    UnknownFranchise,
)
from .panel import Panel
from .report import (
    RESULT_SCHEMA,
    THRESHOLD_SCHEMA,
    plot_result_figure,
    plot_timeline_figure,
    read_document,
    result_document,
    save_figure,
    threshold_document,
    threshold_spec_from_dict,
    write_document,
)
from .segmentation import DEFAULT_MIN_SEG, detect_mean_changes
from .threshold import ThresholdSpec, calibrate_threshold, deterministic_threshold
from .wavelet import WaveletScaleSet, build_variance_panel, detect_variance_changes

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INGEST = 3
EXIT_NUMERIC = 4
EXIT_IO = 5

INGEST_ERRORS = (
    ParseError,
    UnknownFranchise,
    MissingYears,
    MissingFranchiseYear,
    FranchiseTooShort,
    MisalignedSeries,
    RaggedPanel,
    ShapeMismatch,
    NonFinite,
    EmptyPanel,
    BadTimeIndex,
    MalformedResult,
)

logger = logging.getLogger(__name__)


class UsageError(Exception):
    pass


def _child_seed(seed: int, stream: int) -> int:
    """Deterministic per-purpose seed (0 = mean pass, 1 = variance pass)."""
    return int(np.random.SeedSequence([seed, stream]).generate_state(1)[0])


def _parse_scales(text: str) -> WaveletScaleSet:
    try:
        return WaveletScaleSet(tuple(int(p) for p in text.split(",") if p.strip()))
    except (ValueError, PanelbreaksError) as exc:
        raise UsageError(f"bad --scales {text!r}: {exc}") from None


def _add_run_arguments(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="Teams CSV or generic wide CSV")
    p.add_argument(
        "--recipe",
        default="generic",
        help="league | stat:<name> | team:<franchise> | generic (default)",
    )
    p.add_argument("--phi", type=float, default=0.5, help="aggregation exponent in [0, 1]")
    p.add_argument("--min-seg", type=int, default=DEFAULT_MIN_SEG, help="minimum segment length")
    p.add_argument(
        "--threshold",
        default="bootstrap",
        help="bootstrap (default) or fixed:<C> for the deterministic rate rule",
    )
    p.add_argument("--alpha", type=float, default=0.05, help="bootstrap significance level")
    p.add_argument("--boot-reps", type=int, default=500, help="bootstrap replicates")
    p.add_argument("--factors", type=int, default=None, help="factor count (default: ratio rule)")
    p.add_argument("--seed", type=int, default=None, help="seed; required for bootstrap runs")
    p.add_argument("--scales", default="-1,-2", help="wavelet scales, e.g. -1,-2")
    p.add_argument("--scale-method", default="mad_diff", choices=("mad_diff", "sd_diff", "unit"))
    p.add_argument("--kind", default="both", choices=("mean", "variance", "both"))
    p.add_argument("--strict-franchises", action="store_true")
    p.add_argument("--franchise-map", default=None, help="override the bundled lookup table")
    p.add_argument("--out", required=True, help="output document path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="panelbreaks", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_detect = sub.add_parser("detect", help="run change-point detection, write a result document")
    _add_run_arguments(p_detect)
    p_detect.add_argument("--threshold-file", default=None, help="reuse a calibrate document")
    p_detect.add_argument("--plots", action="store_true", help="emit figures next to the document")

    p_cal = sub.add_parser("calibrate", help="calibrate thresholds, write a threshold document")
    _add_run_arguments(p_cal)

    p_plot = sub.add_parser("plot", help="render figures from result documents")
    p_plot.add_argument("results", nargs="+", help="result document paths")
    p_plot.add_argument("--out", required=True, help="output directory")
    return parser


def _validate_run_args(args) -> None:
    if not (0.0 <= args.phi <= 1.0):
        raise UsageError(f"--phi must lie in [0, 1], got {args.phi}")
    if args.min_seg < 2:
        raise UsageError(f"--min-seg must be >= 2, got {args.min_seg}")
    if not (0.0 < args.alpha < 1.0):
        raise UsageError(f"--alpha must lie in (0, 1), got {args.alpha}")
    if args.threshold != "bootstrap" and not args.threshold.startswith("fixed:"):
        raise UsageError(f"--threshold must be 'bootstrap' or 'fixed:<C>', got {args.threshold!r}")
    threshold_file = getattr(args, "threshold_file", None)
    if args.threshold == "bootstrap" and args.seed is None and threshold_file is None:
        raise UsageError("--seed is required for bootstrap runs")
    if args.threshold.startswith("fixed:"):
        try:
            c = float(args.threshold.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"bad fixed threshold constant in {args.threshold!r}") from None
        if c <= 0:
            raise UsageError("fixed threshold constant must be > 0")


def _build_panel(args) -> Panel:
    recipe = args.recipe
    if recipe == "generic":
        return baseball.load_wide_csv(args.input)
    fmap = baseball.load_franchise_map(args.franchise_map)
    rows = baseball.load_teams_csv(args.input, fmap, strict_franchises=args.strict_franchises)
    if recipe == "league":
        return baseball.build_league_panel(rows)
    if recipe.startswith("stat:"):
        return baseball.build_stat_panel(rows, recipe.split(":", 1)[1])
    if recipe.startswith("team:"):
        return baseball.build_team_panel(rows, recipe.split(":", 1)[1])
    raise UsageError(f"unknown recipe {args.recipe!r}")


def _compute_threshold_specs(args, panel: Panel, scales: WaveletScaleSet, kinds) -> dict:
    """Threshold per requested kind; the variance pass needs the mean
    threshold first to stabilize the panel it calibrates on."""
    config = DcConfig(args.phi)
    specs: dict[str, ThresholdSpec] = {}
    if args.threshold.startswith("fixed:"):
        c = float(args.threshold.split(":", 1)[1])
        mean_spec = deterministic_threshold(panel.n, panel.T, c)
    else:
        mean_spec = calibrate_threshold(
            panel,
            config,
            n_reps=args.boot_reps,
            alpha=args.alpha,
            seed=_child_seed(args.seed, 0),
            n_factors=args.factors,
            scale_method=args.scale_method,
        )
    specs["mean"] = mean_spec
    if "variance" in kinds:
        vp = build_variance_panel(
            panel, scales, config, args.min_seg, mean_spec.threshold, args.scale_method
        )
        if args.threshold.startswith("fixed:"):
            c = float(args.threshold.split(":", 1)[1])
            specs["variance"] = deterministic_threshold(vp.n, vp.T, c)
        else:
            specs["variance"] = calibrate_threshold(
                vp,
                config,
                n_reps=args.boot_reps,
                alpha=args.alpha,
                seed=_child_seed(args.seed, 1),
                n_factors=args.factors,
                scale_method=args.scale_method,
            )
    return specs


def _params_echo(args, kinds, scales: WaveletScaleSet) -> dict:
    return {
        "recipe": args.recipe,
        "phi": args.phi,
        "min_seg": args.min_seg,
        "threshold": args.threshold,
        "alpha": args.alpha,
        "boot_reps": args.boot_reps,
        "factors": args.factors,
        "seed": args.seed,
        "scales": list(scales.scales),
        "scale_method": args.scale_method,
        "kind": ",".join(kinds),
    }


def cmd_detect(args) -> int:
    _validate_run_args(args)
    scales = _parse_scales(args.scales)
    kinds = ("mean", "variance") if args.kind == "both" else (args.kind,)
    panel = _build_panel(args)

    if args.threshold_file is not None:
        doc = read_document(args.threshold_file, THRESHOLD_SCHEMA)
        if doc["panel_fingerprint"] != panel.fingerprint():
            raise MalformedResult(
                "threshold document was calibrated on a different panel"
            )
        specs = {k: threshold_spec_from_dict(v) for k, v in doc["thresholds"].items()}
        missing = [k for k in kinds if k != "mean" and k not in specs]
        if "mean" not in specs or missing:
            raise MalformedResult(f"threshold document lacks entries for {missing or ['mean']}")
    else:
        specs = _compute_threshold_specs(args, panel, scales, kinds)

    config = DcConfig(args.phi)
    runs = {}
    if "mean" in kinds:
        runs["mean"] = detect_mean_changes(
            panel,
            specs["mean"].threshold,
            config,
            args.min_seg,
            args.scale_method,
            seed=args.seed,
        )
    if "variance" in kinds:
        runs["variance"] = detect_variance_changes(
            panel,
            scales,
            specs["variance"].threshold,
            config,
            args.min_seg,
            mean_threshold=specs["mean"].threshold,
            scale_method=args.scale_method,
            seed=args.seed,
        )

    doc = result_document(
        recipe=args.recipe,
        input_path=args.input,
        panel=panel,
        params=_params_echo(args, kinds, scales),
        runs=runs,
        threshold_specs={k: specs[k] for k in specs if k in kinds or k == "mean"},
    )
    write_document(doc, args.out)
    for kind in kinds:
        points = runs[kind].change_points
        years = ", ".join(str(cp.time_label) for cp in points) or "none"
        print(f"{kind}: {len(points)} change point(s) [{years}] "
              f"(threshold {specs[kind].threshold:.4f})")
    if args.plots:
        out = Path(args.out)
        save_figure(plot_result_figure(doc), out.with_suffix(".svg"))
        print(f"wrote {out.with_suffix('.svg')}")
    return EXIT_OK


def cmd_calibrate(args) -> int:
    _validate_run_args(args)
    scales = _parse_scales(args.scales)
    kinds = ("mean", "variance") if args.kind == "both" else (args.kind,)
    panel = _build_panel(args)
    specs = _compute_threshold_specs(args, panel, scales, kinds)
    doc = threshold_document(
        recipe=args.recipe,
        input_path=args.input,
        panel=panel,
        params=_params_echo(args, kinds, scales),
        threshold_specs=specs,
    )
    write_document(doc, args.out)
    for kind, spec in specs.items():
        print(f"{kind}: threshold {spec.threshold:.6f} ({spec.method})")
    return EXIT_OK


def cmd_plot(args) -> int:
    out_dir = Path(args.out)
    docs = [read_document(p, RESULT_SCHEMA) for p in args.results]
    for path, doc in zip(args.results, docs):
        target = out_dir / (Path(path).stem + "_series.svg")
        save_figure(plot_result_figure(doc), target)
        print(f"wrote {target}")
    team_docs = [d for d in docs if str(d.get("recipe", "")).startswith("team:")]
    if team_docs:
        target = out_dir / "timeline.svg"
        save_figure(plot_timeline_figure(team_docs), target)
        print(f"wrote {target}")
    return EXIT_OK


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handlers = {"detect": cmd_detect, "calibrate": cmd_calibrate, "plot": cmd_plot}
    try:
        return handlers[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except INGEST_ERRORS as exc:
        print(f"ingest error: {exc}", file=sys.stderr)
        return EXIT_INGEST
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except PanelbreaksError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    raise SystemExit(main())

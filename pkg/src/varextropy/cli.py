"""Command-line surface.

Verbs: ``estimate``, ``test``, ``pit``, ``calibrate``, ``study``.  Exit
codes follow a strict contract: 0 success, 2 input or configuration error
(bad files, bad flags, unknown presets, missing table entries), 3 numerical
or statistical failure (tied spacings, degenerate densities, fit failures).

Values print with 7 significant digits.  Results embed their run manifest;
re-running a command with the manifest's parameters reproduces the payload
byte for byte (outputs carry no timestamps).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import io as vio
from .errors import MissingCriticalValue, VarextropyError
from .estimators import ESTIMATOR_IDS, estimate
from .density import GridSpec
from .reference import ReferenceDistribution
from .sample import make_sample
from .simulation import StudyConfig, run_study
from .uniformity import (
    STAT_KINDS,
    calibrate_table,
    fit_model,
    probability_integral_transform,
    run_test,
)

__all__ = ["main"]


class UsageError(Exception):
    """Maps to exit code 2."""


PRESETS = {
    # bias/MSE grids, one reference distribution each
    "table1": dict(study_type="mse", statistics=ESTIMATOR_IDS,
                   sample_sizes=(10, 20, 30, 40, 50, 100),
                   distributions=("gamma_2_1",)),
    "table2": dict(study_type="mse", statistics=ESTIMATOR_IDS,
                   sample_sizes=(10, 20, 30, 40, 50, 100),
                   distributions=("uniform01",)),
    "table3": dict(study_type="mse", statistics=ESTIMATOR_IDS,
                   sample_sizes=(10, 20, 30, 40, 50, 100),
                   distributions=("exponential_mean1",)),
    # percentage points of the five varextropy statistics
    "table4": dict(study_type="critical", statistics=("GV", "GD", "GB", "GS", "GQ"),
                   sample_sizes=(10, 20, 30, 40, 50, 75, 100), alpha=0.05),
    # power grids
    "table5": dict(study_type="power", statistics=("GV", "GD", "GB", "GS", "GQ"),
                   sample_sizes=(10, 20, 30), alpha=0.05,
                   distributions=("A(1.5)", "A(2)", "B(1.5)", "B(2)", "B(3)",
                                  "C(1.5)", "C(2)")),
    "table6": dict(study_type="power", statistics=("TV", "TE", "TD", "TB", "TC", "TA", "KS"),
                   sample_sizes=(10, 20, 30), alpha=0.05,
                   distributions=("A(1.5)", "A(2)", "B(1.5)", "B(2)", "B(3)",
                                  "C(1.5)", "C(2)")),
}


def _emit(text: str, out_path) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _load_sample(args):
    values = vio.read_dataset(args.dataset, column=args.column)
    if getattr(args, "jitter", False):
        rng = np.random.default_rng(args.seed)
        span = float(values.max() - values.min())
        values = values + (rng.random(values.size) - 0.5) * 2e-9 * span
    return make_sample(values)


# ---------------------------------------------------------------------------
# estimate


def cmd_estimate(args) -> int:
    sample = _load_sample(args)
    est_id = args.estimator.upper()
    if est_id not in ESTIMATOR_IDS:
        raise UsageError(f"unknown estimator {args.estimator!r}; choose from {', '.join(ESTIMATOR_IDS)}")
    tuning = {}
    if est_id in ("VJV", "VJQ") and args.m is not None:
        tuning["m"] = args.m
    if est_id == "VJD":
        if args.bandwidth is not None:
            tuning["h"] = args.bandwidth
        if args.grid_points is not None:
            from .density import default_grid
            from .estimators import vjd_default_bandwidth
            from .sample import sample_std
            h = tuning.get("h") or vjd_default_bandwidth(sample.n, sample_std(sample))
            tuning.setdefault("h", h)
            tuning["grid"] = default_grid(sample, h, args.grid_points)
    if est_id == "VJS" and args.grid_points is not None:
        tuning["u_grid"] = GridSpec(0.0, 1.0, args.grid_points)
    result = estimate(est_id, sample, **tuning)
    params = {
        "estimator": est_id,
        "n": sample.n,
        "m": result.window_m,
        "bandwidth": result.bandwidth_h,
        "grid": None if result.grid is None else
                [result.grid.lo, result.grid.hi, result.grid.points],
        "jitter": bool(getattr(args, "jitter", False)),
        "column": args.column,
    }
    manifest = vio.RunManifest("estimate", params, seed=args.seed,
                               input_digest=vio.file_digest(args.dataset))
    if args.format == "structured":
        payload = {"manifest": manifest.to_dict(),
                   "result": {"estimator_id": result.estimator_id,
                              "value": result.value,
                              "window_m": result.window_m,
                              "bandwidth_h": result.bandwidth_h}}
        _emit(json.dumps(payload, indent=2, sort_keys=True), args.out)
    else:
        lines = manifest.header_lines()
        used = []
        if result.window_m is not None:
            used.append(f"m={result.window_m}")
        if result.bandwidth_h is not None:
            used.append(f"h={vio.format_value(result.bandwidth_h)}")
        lines.append(f"estimator={result.estimator_id} {' '.join(used)} "
                     f"value={vio.format_value(result.value)}".replace("  ", " "))
        _emit("\n".join(lines), args.out)
    return 0


# ---------------------------------------------------------------------------
# test


def _parse_kinds(spec: str):
    if spec.strip().lower() in ("g", "all-g"):
        return ["GV", "GD", "GB", "GS", "GQ"]
    if spec.strip().lower() == "all":
        return list(STAT_KINDS)
    kinds = [k.strip().upper() for k in spec.split(",") if k.strip()]
    for k in kinds:
        if k not in STAT_KINDS:
            raise UsageError(f"unknown statistic kind {k!r}; choose from {', '.join(STAT_KINDS)}")
    return kinds


def cmd_test(args) -> int:
    if not 0.0 < args.alpha < 1.0:
        raise UsageError(f"alpha must be in (0, 1), got {args.alpha}")
    sample = _load_sample(args)
    kinds = _parse_kinds(args.kinds)
    if args.table:
        tables = vio.load_critical_values(args.table)
    elif args.calibrate:
        tables = {k: calibrate_table(k, [sample.n], args.alpha, args.reps, args.seed,
                                     workers=args.workers)
                  for k in kinds}
    else:
        raise UsageError("no critical values: pass --table FILE or --calibrate")
    outcomes = []
    for k in kinds:
        if k not in tables:
            raise UsageError(f"table has no entries for kind {k}; re-run with --calibrate")
        try:
            outcomes.append(run_test(k, sample, tables[k]))
        except MissingCriticalValue:
            raise UsageError(
                f"table has no critical value for kind {k} at n={sample.n}; "
                "re-run with --calibrate")
    params = {"kinds": kinds, "alpha": args.alpha, "n": sample.n,
              "table": args.table, "calibrate": bool(args.calibrate),
              "reps": args.reps if args.calibrate else None, "column": args.column}
    manifest = vio.RunManifest("test", params, seed=args.seed,
                               input_digest=vio.file_digest(args.dataset))
    any_reject = any(o.reject for o in outcomes)
    if args.format == "structured":
        payload = {"manifest": manifest.to_dict(),
                   "outcomes": [vars(o) for o in outcomes],
                   "summary": "reject" if any_reject else "accept"}
        _emit(json.dumps(payload, indent=2, sort_keys=True), args.out)
    else:
        lines = manifest.header_lines()
        for o in outcomes:
            lines.append(f"{o.kind} statistic={vio.format_value(o.statistic)} "
                         f"critical={vio.format_value(o.critical_value)} "
                         f"alpha={o.alpha:g} -> {'reject' if o.reject else 'accept'}")
        lines.append("reject" if any_reject else "accept")
        _emit("\n".join(lines), args.out)
    return 0


# ---------------------------------------------------------------------------
# pit


def cmd_pit(args) -> int:
    values = vio.read_dataset(args.dataset, column=args.column)
    if args.params:
        p = tuple(float(x) for x in args.params.split(","))
        family = {"uniform": "uniform01"}.get(args.family, args.family)
        model = ReferenceDistribution(family, p)
    else:
        model = fit_model(args.family, values)
    transformed = probability_integral_transform(values, model)
    params = {"family": model.family, "fitted_params": list(model.params),
              "n": int(values.size), "column": args.column}
    manifest = vio.RunManifest("pit", params,
                               input_digest=vio.file_digest(args.dataset))
    out = args.out or (args.dataset + ".pit")
    vio.write_dataset(out, transformed.values, header_lines=manifest.header_lines())
    sys.stdout.write(f"wrote {transformed.n} transformed observations to {out}\n")
    return 0


# ---------------------------------------------------------------------------
# calibrate


def cmd_calibrate(args) -> int:
    if not 0.0 < args.alpha < 1.0:
        raise UsageError(f"alpha must be in (0, 1), got {args.alpha}")
    kinds = _parse_kinds(args.kinds)
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    if not sizes or any(n < 2 for n in sizes):
        raise UsageError(f"bad sizes {args.sizes!r}: need integers >= 2")
    tables = {k: calibrate_table(k, sizes, args.alpha, args.reps, args.seed,
                                 workers=args.workers) for k in kinds}
    out = args.out or "critical_values.csv"
    vio.save_critical_values(out, tables)
    sys.stdout.write(f"wrote {len(kinds)} x {len(sizes)} critical values to {out}\n")
    return 0


# ---------------------------------------------------------------------------
# study


def _read_config_file(path) -> dict:
    raw = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                raise UsageError(f"{path}:{lineno}: expected key=value, got {text!r}")
            key, val = text.split("=", 1)
            raw[key.strip()] = val.strip()
    return raw


def _config_from_args(args) -> tuple:
    base: dict = {}
    raw_text = None
    if args.preset:
        if args.preset not in PRESETS:
            raise UsageError(f"unknown preset {args.preset!r}; presets: {', '.join(sorted(PRESETS))}")
        base.update(PRESETS[args.preset])
    if args.config:
        raw = _read_config_file(args.config)
        with open(args.config, "r", encoding="utf-8") as fh:
            raw_text = fh.read()
        if "type" in raw:
            base["study_type"] = raw.pop("type")
        for key in ("statistics", "distributions"):
            if key in raw:
                base[key] = tuple(x.strip() for x in raw.pop(key).split(",") if x.strip())
        if "sizes" in raw:
            base["sample_sizes"] = tuple(int(x) for x in raw.pop("sizes").split(",") if x.strip())
        for key in ("reps", "seed", "workers", "cal_reps", "cal_seed"):
            if key in raw:
                base[key] = int(raw.pop(key))
        if "alpha" in raw:
            base["alpha"] = float(raw.pop("alpha"))
        if raw:
            raise UsageError(f"unknown config keys: {', '.join(sorted(raw))}")
    if args.type:
        base["study_type"] = args.type
    if args.reps is not None:
        base["reps"] = args.reps
    if args.seed is not None:
        base["seed"] = args.seed
    if args.alpha is not None:
        base["alpha"] = args.alpha
    if args.workers is not None:
        base["workers"] = args.workers
    if "study_type" not in base:
        raise UsageError("no study type: pass --preset tableN or --type mse|power|critical")
    for field in ("statistics", "sample_sizes"):
        if field not in base:
            raise UsageError(f"study config is missing {field!r}")
    try:
        cfg = StudyConfig(**base)
    except (TypeError, VarextropyError) as exc:
        raise UsageError(f"bad study config: {exc}")
    return cfg, raw_text


def _report_text(report, manifest) -> str:
    lines = manifest.header_lines()
    lines.append(f"# redraws: {report.redraws}")
    lines.append(f"{'kind':<6} {'n':>5} {'distribution':<22} {'metric':<9} "
                 f"{'value':>14} {'mc_se':>12}")
    for c in report.cells:
        lines.append(f"{c.kind:<6} {c.n:>5} {c.distribution:<22} {c.metric:<9} "
                     f"{vio.format_value(c.value):>14} {vio.format_value(c.mc_se):>12}")
    return "\n".join(lines)


def cmd_study(args) -> int:
    cfg, raw_text = _config_from_args(args)
    report = run_study(cfg)
    params = {"preset": args.preset, "config": cfg.to_dict()}
    if raw_text is not None:
        params["config_file_text"] = raw_text
    manifest = vio.RunManifest("study", params, seed=cfg.seed)
    if args.format == "structured":
        payload = {"manifest": manifest.to_dict(), **report.to_dict()}
        _emit(json.dumps(payload, indent=2, sort_keys=True), args.out)
    else:
        _emit(_report_text(report, manifest), args.out)
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="varextropy",
        description="Varextropy estimation, uniformity testing and Monte Carlo studies.")
    sub = parser.add_subparsers(dest="verb", required=True)

    def shared(p, dataset=True):
        if dataset:
            p.add_argument("dataset", help="delimited text file, one observation per line")
            p.add_argument("--column", type=int, default=0, help="0-based column to read")
        p.add_argument("--seed", type=int, default=1)
        p.add_argument("--reps", type=int, default=10_000)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--format", choices=("text", "structured"), default="text")
        p.add_argument("--out", default=None, help="write results to this file")

    p = sub.add_parser("estimate", help="run one varextropy estimator on a dataset")
    shared(p)
    p.add_argument("--estimator", required=True, help="VJV|VJD|VJB|VJS|VJQ")
    p.add_argument("--m", type=int, default=None, help="window size override")
    p.add_argument("--bandwidth", type=float, default=None, help="bandwidth override")
    p.add_argument("--grid-points", type=int, default=None, dest="grid_points")
    p.add_argument("--jitter", action="store_true",
                   help="break exact ties with +-1e-9*range uniform noise (seeded)")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("test", help="uniformity tests on a [0,1] dataset")
    shared(p)
    p.add_argument("--kinds", default="all-g",
                   help="comma list of statistic kinds, or 'all-g' / 'all'")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--table", default=None, help="critical-values CSV from 'calibrate'")
    p.add_argument("--calibrate", action="store_true",
                   help="calibrate critical values now (--reps, --seed)")
    p.add_argument("--jitter", action="store_true")
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("pit", help="probability integral transform of a dataset")
    shared(p)
    p.add_argument("--family", required=True,
                   help="uniform|normal|exponential|a (fitted by MLE unless --params)")
    p.add_argument("--params", default=None,
                   help="fixed parameters, comma-separated (skips fitting)")
    p.set_defaults(func=cmd_pit)

    p = sub.add_parser("calibrate", help="Monte Carlo critical values to a CSV")
    shared(p, dataset=False)
    p.add_argument("--kinds", default="all-g")
    p.add_argument("--sizes", required=True, help="comma list of sample sizes")
    p.add_argument("--alpha", type=float, default=0.05)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("study", help="bias/MSE, percentage-point or power study")
    p.add_argument("--preset", default=None, help="table1..table6")
    p.add_argument("--config", default=None, help="key=value config file")
    p.add_argument("--type", choices=("mse", "power", "critical"), default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--reps", type=int, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_study)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except vio.DatasetError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except VarextropyError as exc:
        sys.stderr.write(f"error: {exc.__class__.__name__}: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())

"""Command line entry point: ``lindblad-spectra {sample,rmt,boundary,compare,stats}``."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .boundary import GAUSSIAN, TWO_SEMICIRCLES, BoundaryCurve, boundary_curve, ellipse_sum_boundary_numeric
from .experiment import (
    ExperimentConfig,
    batch_failed,
    compute_stats,
    load_histogram,
    load_marginals,
    read_spectra_csv,
    resolve_boundary,
    run_batch,
    write_run,
)
from .spectra import l1_distance

log = logging.getLogger("lindblad_spectra")

DEFAULT_THRESHOLD = 0.08

# CLI flag -> config field; flags left unset fall back to the config file, then defaults
_RUN_FLAGS = ("n", "realizations", "seed", "alpha", "sampler", "workers", "out", "bins", "boundary", "inflation")


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="JSON config file")
    p.add_argument("--n", type=int)
    p.add_argument("--realizations", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--sampler", help="wishart | bures | svd | composite:k,s")
    p.add_argument("--workers", type=int)
    p.add_argument("--out", help="output directory")
    p.add_argument("--bins", type=int)
    p.add_argument("--boundary", help="auto | none | lemon | semicircles | gaussian | ellipse_numeric")
    p.add_argument("--inflation", type=float)


def _build_config(args, **forced) -> ExperimentConfig:
    doc = ExperimentConfig.load(args.config).to_json() if args.config else {}
    for name in _RUN_FLAGS:
        value = getattr(args, name, None)
        if value is not None:
            doc[name] = value
    for name, value in forced.items():
        if value is not None:
            doc[name] = value
    return ExperimentConfig.from_json(doc)


def _run(config: ExperimentConfig) -> int:
    batch = run_batch(config)
    curve = resolve_boundary(config)
    manifest = write_run(batch, config.out, curve)
    stats = json.loads((Path(config.out) / "stats.json").read_text())
    print(json.dumps({"out": str(config.out), "failures": manifest["failures"], **stats}, sort_keys=True))
    if batch_failed(batch):
        log.error("%d of %d realizations failed", batch.failures, len(batch.results))
        return 2
    return 0


def cmd_sample(args) -> int:
    return _run(_build_config(args, mode="lindblad"))


def cmd_rmt(args) -> int:
    forced = {"mode": "rmt", "model": args.model}
    if args.inflation is None and args.config is None:
        forced["inflation"] = 0.15
    return _run(_build_config(args, **forced))


def make_boundary(kind: str, alpha: float, resolution: int) -> BoundaryCurve:
    if kind == "lemon":
        return boundary_curve(TWO_SEMICIRCLES, alpha, resolution)
    if kind == "gaussian":
        return boundary_curve(GAUSSIAN, alpha, resolution)
    if kind == "ellipse_numeric":
        return ellipse_sum_boundary_numeric(alpha, resolution=resolution)
    raise ValueError(f"unknown boundary kind {kind!r}")


def write_boundary_csv(curve: BoundaryCurve, path, resolution: int) -> None:
    pts = curve.points
    with open(path, "w", newline="") as fh:
        fh.write(f"# kind={curve.kind} alpha={curve.alpha!r} resolution={resolution} "
                 f"points={len(pts)} circularity={curve.circularity():.6f}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("re", "im"))
        for z in pts:
            writer.writerow((format(z.real, ".17g"), format(z.imag, ".17g")))


def read_boundary_csv(path) -> tuple[dict, np.ndarray]:
    with open(path) as fh:
        header = fh.readline().lstrip("#").split()
        meta = dict(item.split("=", 1) for item in header)
        rows = list(csv.DictReader(fh))
    return meta, np.array([complex(float(r["re"]), float(r["im"])) for r in rows])


def cmd_boundary(args) -> int:
    if args.alpha <= 0:
        raise ValueError("alpha must be positive")
    curve = make_boundary(args.kind, args.alpha, args.resolution)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_boundary_csv(curve, out, args.resolution)
    x0, x1, y0, y1 = curve.extent()
    print(json.dumps({
        "kind": curve.kind, "alpha": args.alpha, "resolution": args.resolution,
        "points": len(curve.points), "circularity": curve.circularity(),
        "extent": [x0, x1, y0, y1], "out": str(out),
    }, sort_keys=True))
    return 0


def compare_runs(run_a, run_b) -> dict:
    ha, hb = load_histogram(run_a), load_histogram(run_b)
    if not (np.array_equal(ha.re_edges, hb.re_edges) and np.array_equal(ha.im_edges, hb.im_edges)):
        raise ValueError("runs do not share histogram grids")
    ma, mb = load_marginals(run_a), load_marginals(run_b)
    return {
        "run_a": str(run_a),
        "run_b": str(run_b),
        "l1_2d": l1_distance(ha.counts, hb.counts),
        "l1_re": l1_distance(ma["re"]["counts"], mb["re"]["counts"]),
        "l1_im": l1_distance(ma["im"]["counts"], mb["im"]["counts"]),
    }


def cmd_compare(args) -> int:
    report = compare_runs(args.run_a, args.run_b)
    report["threshold"] = args.threshold
    report["pass"] = report["l1_2d"] <= args.threshold
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    sys.stdout.write(text)
    return 0 if report["pass"] else 1


def cmd_stats(args) -> int:
    run = Path(args.run)
    config = ExperimentConfig.load(run / "config.json")
    if args.boundary is not None:
        config.boundary = args.boundary
    if args.inflation is not None:
        config.inflation = args.inflation
    config.validate()
    samples = read_spectra_csv(run / "eigenvalues.csv", config.n, stationary=config.mode == "lindblad")
    stats = compute_stats(config, samples, resolve_boundary(config))
    # the K spread is not recoverable from eigenvalues; keep the recorded one
    stored = run / "stats.json"
    if stored.exists():
        old = json.loads(stored.read_text())
        stats.update({k: old[k] for k in ("k_spread_mean", "k_spread_std") if k in old})
    sys.stdout.write(json.dumps(stats, indent=2, sort_keys=True) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lindblad-spectra", description="Spectra of random Lindblad generators.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="sample random Lindbladians and record their spectra")
    _add_run_flags(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("rmt", help="sample the random-matrix surrogate")
    _add_run_flags(p)
    p.add_argument("--model", choices=("general", "scaled"), default=None)
    p.set_defaults(func=cmd_rmt)

    p = sub.add_parser("boundary", help="trace an analytic or numeric spectral boundary")
    p.add_argument("--kind", choices=("lemon", "gaussian", "ellipse_numeric"), default="lemon")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--resolution", type=int, default=512)
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=cmd_boundary)

    p = sub.add_parser("compare", help="L1 distance between the histograms of two runs")
    p.add_argument("run_a", type=Path)
    p.add_argument("run_b", type=Path)
    p.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    p.add_argument("--out", help="report JSON path")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("stats", help="recompute statistics from a run directory")
    p.add_argument("run", type=Path)
    p.add_argument("--boundary")
    p.add_argument("--inflation", type=float)
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        log.error("%s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())

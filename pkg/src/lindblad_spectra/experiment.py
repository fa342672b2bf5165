"""Batch runner: seeded realizations, ordered reduction, and run artifacts on disk."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Optional

import numpy as np
from threadpoolctl import threadpool_limits

from .basis import sun_basis
from .boundary import (
    GAUSSIAN,
    TWO_SEMICIRCLES,
    BoundaryCurve,
    boundary_curve,
    ellipse_sum_boundary_numeric,
    lemon,
)
from .ensembles import RngStream, gue
from .generator import build_rmt_surrogate, build_superop
from .kossakowski import SamplerSpec, sample_kossakowski
from .spectra import (
    DensityHistogram,
    EigenFailure,
    SpectrumSample,
    eig,
    histogram2d,
    inside_fraction,
    lindblad_eigvals,
    marginal,
    real_axis_fraction,
    rescale,
    spectral_gap,
    surrogate_sample,
)

log = logging.getLogger(__name__)

__all__ = [
    "ExperimentConfig",
    "RealizationResult",
    "BatchResult",
    "realize",
    "run_batch",
    "resolve_boundary",
    "compute_stats",
    "write_run",
    "read_spectra_csv",
    "CSV_COLUMNS",
    "WORKERS_ENV",
]

WORKERS_ENV = "LINDBLAD_SPECTRA_WORKERS"
CSV_COLUMNS = ("realization", "re_raw", "im_raw", "re_rescaled", "im_rescaled")
FAILURE_LIMIT = 0.10


@dataclass
class ExperimentConfig:
    n: int = 30
    realizations: int = 20
    sampler: str = "wishart"
    alpha: float = 0.0
    seed: int = 0
    workers: int = field(default_factory=lambda: os.cpu_count() or 1)
    mode: str = "lindblad"  # lindblad | rmt
    model: str = "general"  # rmt only: general | scaled
    re_range: tuple = (-2.5, 2.5)
    im_range: tuple = (-2.5, 2.5)
    bins: int = 50
    boundary: str = "auto"  # auto | none | lemon | semicircles | gaussian | ellipse_numeric
    inflation: float = 0.1
    real_axis_eps: float = 1e-6
    out: str = "run"

    def __post_init__(self):
        self.re_range = tuple(float(x) for x in self.re_range)
        self.im_range = tuple(float(x) for x in self.im_range)
        self.validate()

    def validate(self):
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if self.realizations < 1:
            raise ValueError("realizations must be >= 1")
        if self.alpha < 0:
            raise ValueError("alpha must be non-negative")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.mode not in ("lindblad", "rmt"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.model not in ("general", "scaled"):
            raise ValueError(f"unknown surrogate model {self.model!r}")
        if self.bins < 1:
            raise ValueError("bins must be >= 1")
        if len(self.re_range) != 2 or len(self.im_range) != 2:
            raise ValueError("histogram ranges need two values")
        if self.boundary not in ("auto", "none", "lemon", "semicircles", "gaussian", "ellipse_numeric"):
            raise ValueError(f"unknown boundary {self.boundary!r}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        SamplerSpec.parse(self.sampler)

    @property
    def sampler_spec(self) -> SamplerSpec:
        return SamplerSpec.parse(self.sampler)

    def to_json(self) -> dict:
        doc = asdict(self)
        doc["re_range"] = list(self.re_range)
        doc["im_range"] = list(self.im_range)
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, doc: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(doc) - known)
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(unknown)}")
        return cls(**doc)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def science_json(self) -> dict:
        """Everything that determines the numbers; drops ``workers`` and ``out``."""
        doc = self.to_json()
        doc.pop("workers")
        doc.pop("out")
        return doc

    def science_hash(self) -> str:
        blob = json.dumps(self.science_json(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


@dataclass
class RealizationResult:
    index: int
    sample: Optional[SpectrumSample]
    wall_time: float
    error: Optional[str] = None
    k_spread: Optional[float] = None

    @property
    def ok(self) -> bool:
        return self.sample is not None


@dataclass
class BatchResult:
    config: ExperimentConfig
    results: list = field(default_factory=list)

    @property
    def samples(self) -> list:
        return [r.sample for r in self.results if r.ok]

    @property
    def failures(self) -> int:
        return sum(not r.ok for r in self.results)


def _canonical_order(z: np.ndarray) -> np.ndarray:
    return z[np.lexsort((z.imag, z.real))]


def realize(config: ExperimentConfig, index: int) -> RealizationResult:
    """Build and diagonalize realization ``index``; a pure function of ``(config, index)``."""
    stream = RngStream(config.seed, index)
    start = time.perf_counter()
    meta = {"sampler": config.sampler, "alpha": config.alpha, "mode": config.mode}
    k_spread = None
    try:
        with threadpool_limits(limits=1):
            n = config.n
            if config.mode == "lindblad":
                k = sample_kossakowski(n, config.sampler_spec, stream.child(0))
                h = gue(n, 1.0 / n, stream.child(1)) if config.alpha > 0 else None
                gamma_dev = k.matrix - (n / (n * n - 1)) * np.eye(n * n - 1)
                k_spread = float(np.linalg.norm(gamma_dev))
                raw = lindblad_eigvals(build_superop(k, sun_basis(n), config.alpha, h))
                sample = rescale(_canonical_order(raw), n, index, meta)
            else:
                surrogate = build_rmt_surrogate(n, config.alpha, stream.child(0), config.model)
                sample = surrogate_sample(_canonical_order(eig(surrogate.matrix)), n, index, meta)
    except EigenFailure as exc:
        log.warning("realization %d failed: %s", index, exc)
        return RealizationResult(index, None, time.perf_counter() - start, str(exc))
    return RealizationResult(index, sample, time.perf_counter() - start, None, k_spread)


def _realize_task(args):
    config_doc, index = args
    return realize(ExperimentConfig.from_json(config_doc), index)


def effective_workers(requested: int) -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        try:
            value = int(env)
        except ValueError:
            raise ValueError(f"{WORKERS_ENV} must be an integer, got {env!r}") from None
        if value < 1:
            raise ValueError(f"{WORKERS_ENV} must be >= 1")
        return value
    return requested


def run_batch(config: ExperimentConfig, workers: Optional[int] = None) -> BatchResult:
    """Run all realizations; results come back in index order whatever the pool does."""
    workers = effective_workers(config.workers if workers is None else workers)
    indices = range(config.realizations)
    if workers == 1:
        results = [realize(config, i) for i in indices]
    else:
        doc = config.to_json()
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_realize_task, [(doc, i) for i in indices]))
    results.sort(key=lambda r: r.index)
    return BatchResult(config, results)


def resolve_boundary(config: ExperimentConfig) -> Optional[BoundaryCurve]:
    kind = config.boundary
    if kind == "auto":
        if config.mode == "rmt" and config.model == "scaled":
            kind = "semicircles"
        elif config.alpha == 0:
            kind = "lemon"
        else:
            kind = "ellipse_numeric"
    if kind == "none":
        return None
    if kind == "lemon":
        return lemon(512)
    if kind == "semicircles":
        if config.alpha <= 0:
            raise ValueError("semicircle boundary needs alpha > 0")
        return boundary_curve(TWO_SEMICIRCLES, config.alpha, 512)
    if kind == "gaussian":
        return boundary_curve(GAUSSIAN, config.alpha or 1.0, 512)
    if kind == "ellipse_numeric":
        return ellipse_sum_boundary_numeric(config.alpha, resolution=128)
    raise ValueError(f"unknown boundary {kind!r}")


def _mean_std(values):
    if not values:
        return None, None
    arr = np.asarray(values, dtype=float)
    return float(arr.mean()), float(arr.std(ddof=1)) if arr.size > 1 else 0.0


def compute_stats(config: ExperimentConfig, samples: list, curve: Optional[BoundaryCurve] = None,
                  k_spreads: Optional[list] = None) -> dict:
    stats = {
        "n": config.n,
        "realizations_ok": len(samples),
        "bulk_eigenvalues": int(sum(len(s.raw) - (1 if s.stationary else 0) for s in samples)),
        "real_axis_fraction": real_axis_fraction(samples, config.real_axis_eps) if samples else None,
        "real_axis_eps": config.real_axis_eps,
    }
    if config.mode == "lindblad" and samples:
        gaps = [spectral_gap(s) for s in samples]
        scaled = [config.n * (1.0 - g) for g in gaps]
        stats["gap_mean"], stats["gap_std"] = _mean_std(gaps)
        stats["gap_scaled_mean"], stats["gap_scaled_std"] = _mean_std(scaled)
    else:
        stats["gap_mean"] = stats["gap_std"] = None
        stats["gap_scaled_mean"] = stats["gap_scaled_std"] = None
    if k_spreads:
        stats["k_spread_mean"], stats["k_spread_std"] = _mean_std(k_spreads)
    if curve is not None and samples:
        stats["boundary_kind"] = curve.kind
        stats["boundary_alpha"] = curve.alpha
        stats["inflation"] = config.inflation
        stats["inside_fraction"] = inside_fraction(samples, curve, config.inflation)
    return stats


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def spectra_csv_text(samples: list) -> tuple[str, int]:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    rows = 0
    for s in samples:
        for lr, lp in zip(s.raw, s.rescaled):
            writer.writerow((s.realization_id, _fmt(lr.real), _fmt(lr.imag), _fmt(lp.real), _fmt(lp.imag)))
            rows += 1
    return buf.getvalue(), rows


def read_spectra_csv(path, n: int, stationary: bool = True) -> list:
    """Rebuild samples (grouped by realization) from an eigenvalue CSV."""
    data = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise ValueError(f"{path}: unexpected columns {reader.fieldnames}")
        for row in reader:
            idx = int(row["realization"])
            raw = complex(float(row["re_raw"]), float(row["im_raw"]))
            res = complex(float(row["re_rescaled"]), float(row["im_rescaled"]))
            data.setdefault(idx, ([], []))
            data[idx][0].append(raw)
            data[idx][1].append(res)
    return [
        SpectrumSample(n, np.array(raw), np.array(res), idx, {}, stationary)
        for idx, (raw, res) in sorted(data.items())
    ]


def _dump_json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_run(batch: BatchResult, out_dir=None, curve: Optional[BoundaryCurve] = None) -> dict:
    """Write eigenvalues.csv, histogram.json, marginals.json, stats.json, manifest.json."""
    config = batch.config
    out = Path(out_dir or config.out)
    out.mkdir(parents=True, exist_ok=True)
    samples = batch.samples

    csv_text, rows = spectra_csv_text(samples)
    hist = histogram2d(samples, config.re_range, config.im_range, config.bins) if samples else None
    k_spreads = [r.k_spread for r in batch.results if r.ok and r.k_spread is not None]
    stats = compute_stats(config, samples, curve, k_spreads)

    artifacts = {}
    (out / "eigenvalues.csv").write_text(csv_text)
    artifacts["eigenvalues.csv"] = {"rows": rows}
    if hist is not None:
        (out / "histogram.json").write_text(_dump_json(hist.to_json()))
        artifacts["histogram.json"] = {"total": hist.total}
        marg = {}
        for axis, rng in (("re", config.re_range), ("im", config.im_range)):
            edges, counts = marginal(samples, axis, config.bins, rng)
            marg[axis] = {"edges": [float(e) for e in edges], "counts": counts.tolist()}
        (out / "marginals.json").write_text(_dump_json(marg))
        artifacts["marginals.json"] = {"total": hist.total}
    (out / "stats.json").write_text(_dump_json(stats))
    artifacts["stats.json"] = {"keys": len(stats)}
    science = config.science_json()
    (out / "config.json").write_text(_dump_json(science))
    artifacts["config.json"] = {"keys": len(science)}

    artifacts["timings.json"] = {"entries": len(batch.results)}
    manifest = {
        "config_hash": config.science_hash(),
        "volatile": ["timings.json"],
        "realizations": [
            {"index": r.index, "status": "ok" if r.ok else "failed", "error": r.error} for r in batch.results
        ],
        "artifacts": artifacts,
        "failures": batch.failures,
        "failure_fraction": batch.failures / max(1, len(batch.results)),
    }
    # wall-clock data is the one nondeterministic output, so it lives in its own file
    timings = {"wall_times": [round(r.wall_time, 6) for r in batch.results]}
    (out / "timings.json").write_text(_dump_json(timings))
    (out / "manifest.json").write_text(_dump_json(manifest))
    return manifest


def load_histogram(run_dir) -> DensityHistogram:
    with open(Path(run_dir) / "histogram.json") as fh:
        return DensityHistogram.from_json(json.load(fh))


def load_marginals(run_dir) -> dict:
    with open(Path(run_dir) / "marginals.json") as fh:
        return json.load(fh)


def batch_failed(batch: BatchResult) -> bool:
    return batch.failures > FAILURE_LIMIT * len(batch.results)

"""Eigenvalues, the universal rescaling and spectral statistics.

Statistics act on the *bulk*: for Lindbladian samples the stationary
eigenvalue (raw 0, rescaled ``N``) is removed first; surrogate samples have
no stationary mode and are used as they are.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence

import numpy as np

from .basis import HermitianBasis
from .boundary import BoundaryCurve
from .generator import LindbladSuperop, real_representation

__all__ = [
    "EigenFailure",
    "SpectrumSample",
    "DensityHistogram",
    "eig",
    "lindblad_eigvals",
    "rescale",
    "surrogate_sample",
    "bulk",
    "spectral_gap",
    "histogram2d",
    "marginal",
    "slice_marginal",
    "real_axis_fraction",
    "inside_fraction",
    "l1_distance",
    "DEFAULT_WINDOW",
]

DEFAULT_WINDOW = (-2.5, 2.5)
STATIONARY_TOL = 1e-6


class EigenFailure(RuntimeError):
    """The dense eigensolver did not converge for one realization."""


@dataclass(frozen=True, eq=False)
class SpectrumSample:
    dim_n: int
    raw: np.ndarray
    rescaled: np.ndarray
    realization_id: int = 0
    metadata: dict = field(default_factory=dict)
    stationary: bool = True  # a zero mode is present and not yet removed

    def __len__(self):
        return len(self.raw)


@dataclass(frozen=True, eq=False)
class DensityHistogram:
    re_edges: np.ndarray
    im_edges: np.ndarray
    counts: np.ndarray
    total: int

    @property
    def binned(self) -> int:
        return int(self.counts.sum())

    @property
    def outside(self) -> int:
        return self.total - self.binned

    def normalized(self) -> np.ndarray:
        """Probability per bin over the binned eigenvalues."""
        s = self.counts.sum()
        return self.counts / s if s else self.counts.astype(float)

    def to_json(self) -> dict:
        return {
            "re_edges": [float(x) for x in self.re_edges],
            "im_edges": [float(x) for x in self.im_edges],
            "counts": self.counts.astype(int).tolist(),
            "total": int(self.total),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "DensityHistogram":
        return cls(
            np.asarray(doc["re_edges"], dtype=float),
            np.asarray(doc["im_edges"], dtype=float),
            np.asarray(doc["counts"], dtype=np.int64),
            int(doc["total"]),
        )


def eig(matrix) -> np.ndarray:
    a = np.asarray(matrix)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"need a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    try:
        return np.linalg.eigvals(a).astype(complex)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(str(exc)) from exc


def lindblad_eigvals(superop: LindbladSuperop, basis: Optional[HermitianBasis] = None) -> np.ndarray:
    """Spectrum of a Lindbladian via its real representation.

    Same eigenvalues as ``eig(superop.matrix)``, but the real nonsymmetric
    solver is several times faster and returns exact conjugate pairs and
    exactly real eigenvalues.
    """
    return eig(real_representation(superop, basis))


def rescale(raw, n: int, realization_id: int = 0, metadata: Optional[dict] = None) -> SpectrumSample:
    """``l' = N (l + 1)``."""
    raw = np.asarray(raw, dtype=complex)
    return SpectrumSample(int(n), raw, n * (raw + 1.0), realization_id, dict(metadata or {}), True)


def surrogate_sample(eigs, n: int, realization_id: int = 0, metadata: Optional[dict] = None) -> SpectrumSample:
    """Surrogate spectra are already in rescaled coordinates and have no zero mode."""
    eigs = np.asarray(eigs, dtype=complex)
    return SpectrumSample(int(n), eigs, eigs, realization_id, dict(metadata or {}), False)


def bulk(sample: SpectrumSample) -> SpectrumSample:
    """Drop the stationary eigenvalue (the one closest to raw 0)."""
    if not sample.stationary:
        return sample
    i = int(np.argmin(np.abs(sample.raw)))
    if abs(sample.raw[i]) > STATIONARY_TOL:
        raise ValueError(f"no stationary eigenvalue: smallest |l| = {abs(sample.raw[i]):.3e}")
    keep = np.ones(len(sample.raw), dtype=bool)
    keep[i] = False
    return replace(sample, raw=sample.raw[keep], rescaled=sample.rescaled[keep], stationary=False)


def _as_list(samples) -> list:
    if isinstance(samples, SpectrumSample):
        return [samples]
    return list(samples)


def _bulk_rescaled(samples) -> np.ndarray:
    parts = [bulk(s).rescaled for s in _as_list(samples)]
    if not parts:
        return np.zeros(0, dtype=complex)
    return np.concatenate(parts)


def spectral_gap(sample: SpectrumSample) -> float:
    """``-max Re l`` over the bulk; the zero mode is excluded."""
    b = bulk(sample)
    if len(b.raw) == 0:
        raise ValueError("empty bulk")
    return float(-np.max(b.raw.real))


def histogram2d(
    samples,
    re_range: Sequence[float] = DEFAULT_WINDOW,
    im_range: Sequence[float] = DEFAULT_WINDOW,
    bins: int = 50,
) -> DensityHistogram:
    """Counts of rescaled bulk eigenvalues; out-of-window values only enter ``total``.

    Bins are half-open ``[a, b)``. With an even bin count, 0 is an edge, so
    exactly real eigenvalues land in the bin just above the real axis.
    """
    if bins < 1:
        raise ValueError("bins must be >= 1")
    z = _bulk_rescaled(samples)
    re_edges = np.linspace(re_range[0], re_range[1], bins + 1)
    im_edges = np.linspace(im_range[0], im_range[1], bins + 1)
    counts, _, _ = np.histogram2d(z.real, z.imag, bins=[re_edges, im_edges])
    return DensityHistogram(re_edges, im_edges, counts.astype(np.int64), int(z.size))


def marginal(samples, axis: str = "im", bins: int = 50, value_range: Sequence[float] = DEFAULT_WINDOW):
    """1-D histogram of ``Re l'`` or ``Im l'``; returns ``(edges, counts)``."""
    z = _bulk_rescaled(samples)
    values = {"re": z.real, "im": z.imag}[axis]
    edges = np.linspace(value_range[0], value_range[1], bins + 1)
    counts, _ = np.histogram(values, bins=edges)
    return edges, counts.astype(np.int64)


def slice_marginal(samples, delta: float, bins: int = 50, value_range: Sequence[float] = DEFAULT_WINDOW):
    """Histogram of ``Im l'`` restricted to the strip ``|Re l'| < delta``."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    z = _bulk_rescaled(samples)
    z = z[np.abs(z.real) < delta]
    edges = np.linspace(value_range[0], value_range[1], bins + 1)
    counts, _ = np.histogram(z.imag, bins=edges)
    return edges, counts.astype(np.int64)


def real_axis_fraction(samples, epsilon: float = 1e-6) -> float:
    """Fraction of bulk eigenvalues with ``|Im l'| < epsilon``."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    z = _bulk_rescaled(samples)
    if z.size == 0:
        return float("nan")
    return float(np.count_nonzero(np.abs(z.imag) < epsilon) / z.size)


def inside_fraction(samples, curve: BoundaryCurve, inflation: float = 0.0) -> float:
    """Fraction of bulk rescaled eigenvalues strictly inside ``curve`` dilated by ``inflation``."""
    return curve.contains_fraction(_bulk_rescaled(samples), inflation)


def l1_distance(a, b) -> float:
    """``sum |p_a - p_b|`` of two histograms normalized to unit mass (range [0, 2])."""
    pa = np.asarray(a, dtype=float)
    pb = np.asarray(b, dtype=float)
    if pa.shape != pb.shape:
        raise ValueError(f"histogram shapes differ: {pa.shape} vs {pb.shape}")
    sa, sb = pa.sum(), pb.sum()
    if sa == 0 or sb == 0:
        raise ValueError("cannot normalize an empty histogram")
    return float(np.abs(pa / sa - pb / sb).sum())


def concat_rescaled(samples: Iterable[SpectrumSample]) -> np.ndarray:
    return _bulk_rescaled(samples)

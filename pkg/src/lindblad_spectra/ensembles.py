"""Seeded samplers for the random-matrix primitives.

Normalization conventions (all ``n x n``):

=============== ============================== ==========================
sampler         entries                        normalization
=============== ============================== ==========================
ginibre_complex Re, Im ~ N(0, 1/(2n))          E Tr GG^dag = n, unit disk
ginibre_real    N(0, 1/n)                      E Tr GG^T = n, unit disk
goe             off-diag var r^2/(4n)          semicircle on [-r, r]
gue             Hermitian Gaussian, rescaled   Tr H^2 = target exactly
haar_unitary    QR of Ginibre + phase fix      Haar on U(n)
=============== ============================== ==========================

Every sampler accepts either an :class:`RngStream` (pure function of the
stream) or a live :class:`numpy.random.Generator` (draws advance it).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

__all__ = [
    "RngStream",
    "as_generator",
    "ginibre_complex",
    "ginibre_real",
    "goe",
    "gue",
    "haar_unitary",
    "random_prob_vector",
]


@dataclass(frozen=True)
class RngStream:
    """Addressable random stream: ``(master_seed, stream_index)`` plus an optional sub-path.

    Equal addresses give identical draws. Distinct addresses map to distinct
    :class:`numpy.random.SeedSequence` spawn keys, which are independent for
    all practical purposes.
    """

    master_seed: int
    stream_index: int = 0
    path: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if not 0 <= self.master_seed < 2**64:
            raise ValueError(f"master_seed must be a 64-bit unsigned integer, got {self.master_seed}")
        if self.stream_index < 0:
            raise ValueError(f"stream_index must be non-negative, got {self.stream_index}")

    def child(self, key: int) -> "RngStream":
        """Sub-stream for one ingredient of a realization (e.g. K vs. H)."""
        return RngStream(self.master_seed, self.stream_index, self.path + (int(key),))

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(self.master_seed, spawn_key=(self.stream_index,) + self.path)
        return np.random.Generator(np.random.PCG64(seq))


RandomSource = Union[RngStream, np.random.Generator]


def as_generator(source: RandomSource) -> np.random.Generator:
    if isinstance(source, RngStream):
        return source.generator()
    if isinstance(source, np.random.Generator):
        return source
    raise TypeError(f"expected RngStream or numpy Generator, got {type(source).__name__}")


def _check_dim(n):
    if int(n) != n or n < 1:
        raise ValueError(f"matrix dimension must be a positive integer, got {n}")
    return int(n)


def ginibre_complex(n: int, stream: RandomSource) -> np.ndarray:
    """Complex Ginibre matrix with ``E|G_ij|^2 = 1/n``; spectrum fills the unit disk."""
    n = _check_dim(n)
    rng = as_generator(stream)
    scale = np.sqrt(0.5 / n)
    return scale * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))


def ginibre_real(n: int, stream: RandomSource) -> np.ndarray:
    """Real Ginibre matrix with i.i.d. ``N(0, 1/n)`` entries."""
    n = _check_dim(n)
    rng = as_generator(stream)
    return rng.standard_normal((n, n)) / np.sqrt(n)


def goe(n: int, radius: float, stream: RandomSource) -> np.ndarray:
    """Real symmetric GOE sample whose semicircle has the given radius.

    Off-diagonal variance is ``radius**2 / (4 n)`` and diagonal variance
    ``radius**2 / (2 n)``, so ``E Tr C^2 = radius**2 (n + 1) / 4``.
    """
    n = _check_dim(n)
    if radius <= 0:
        raise ValueError("radius must be positive")
    rng = as_generator(stream)
    a = rng.standard_normal((n, n)) * (radius / np.sqrt(2.0 * n))
    return 0.5 * (a + a.T)


def gue(n: int, target_trace_sq: float, stream: RandomSource) -> np.ndarray:
    """GUE sample rescaled so that ``Tr H^2 == target_trace_sq``."""
    n = _check_dim(n)
    if target_trace_sq <= 0:
        raise ValueError("target_trace_sq must be positive")
    rng = as_generator(stream)
    while True:
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        h = 0.5 * (a + a.conj().T)
        norm_sq = np.sum(np.abs(h) ** 2)
        if norm_sq > 0:
            break
    h *= np.sqrt(target_trace_sq / norm_sq)
    # make Hermiticity exact after the floating-point rescale
    h = 0.5 * (h + h.conj().T)
    return h


def haar_unitary(n: int, stream: RandomSource) -> np.ndarray:
    """Haar-distributed unitary from the QR decomposition of a complex Ginibre matrix.

    Columns of Q are multiplied by the phase of the matching diagonal entry of
    R, which removes the bias of the LAPACK sign convention (Mezzadri 2007).
    """
    n = _check_dim(n)
    z = ginibre_complex(n, stream)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    phases = d / np.abs(d)
    return q * phases[np.newaxis, :]


def random_prob_vector(k: int, stream: RandomSource) -> np.ndarray:
    """Uniform point on the probability simplex (flat Dirichlet)."""
    k = _check_dim(k)
    rng = as_generator(stream)
    p = rng.dirichlet(np.ones(k))
    return p / p.sum()

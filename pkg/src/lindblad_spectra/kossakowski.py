"""Random Kossakowski matrices (``K >= 0``, ``Tr K = N``) and their jump decomposition."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg.blas import zherk

from .basis import HermitianBasis
from .ensembles import RandomSource, as_generator, ginibre_complex, haar_unitary, random_prob_vector

__all__ = [
    "SamplerSpec",
    "KossakowskiMatrix",
    "JumpSet",
    "sample_kossakowski",
    "jump_decomposition",
    "WISHART",
]

RATE_CLAMP = 1e-10


@dataclass(frozen=True)
class SamplerSpec:
    """Which ensemble K is drawn from.

    ``composite(k, s)`` is ``S = (p_1 U_1 + ... + p_k U_k) G_1 ... G_s`` with
    ``K ~ S S^dag``; ``(1, 1)`` is the square Wishart case, ``(2, 1)`` Bures,
    ``(2, 0)`` arcsine, ``(1, s)`` Fuss-Catalan. ``svd_core`` draws Haar
    eigenvectors with the singular values of a Ginibre matrix as spectrum.
    """

    variant: str = "composite"
    k: int = 1
    s: int = 1

    def __post_init__(self):
        if self.variant == "composite":
            if self.k < 1 or self.s < 0 or self.k + self.s < 1:
                raise ValueError(f"composite sampler needs k >= 1, s >= 0; got k={self.k}, s={self.s}")
        elif self.variant != "svd_core":
            raise ValueError(f"unknown sampler variant {self.variant!r}")

    @classmethod
    def composite(cls, k: int, s: int) -> "SamplerSpec":
        return cls("composite", int(k), int(s))

    @classmethod
    def svd_core(cls) -> "SamplerSpec":
        return cls("svd_core", 0, 0)

    @classmethod
    def parse(cls, text: str) -> "SamplerSpec":
        """Parse ``wishart``, ``bures``, ``svd`` or ``composite:k,s``."""
        text = text.strip().lower()
        if text == "wishart":
            return cls.composite(1, 1)
        if text == "bures":
            return cls.composite(2, 1)
        if text in ("svd", "svd_core"):
            return cls.svd_core()
        if text.startswith("composite:"):
            try:
                k, s = (int(v) for v in text.split(":", 1)[1].split(","))
            except ValueError:
                raise ValueError(f"malformed sampler {text!r}; expected composite:k,s") from None
            return cls.composite(k, s)
        raise ValueError(f"unknown sampler {text!r}")

    def __str__(self):
        if self.variant == "svd_core":
            return "svd"
        return f"composite:{self.k},{self.s}"


WISHART = SamplerSpec.composite(1, 1)


@dataclass(frozen=True, eq=False)
class KossakowskiMatrix:
    dim_n: int
    matrix: np.ndarray
    source: Optional[SamplerSpec] = None

    @property
    def dim_m(self) -> int:
        return self.matrix.shape[0]

    def validate(self, herm_tol=1e-12, psd_tol=1e-10, trace_tol=1e-10):
        k = self.matrix
        if k.shape != (self.dim_n**2 - 1,) * 2:
            raise ValueError(f"K has shape {k.shape}, expected M x M with M = {self.dim_n**2 - 1}")
        if np.max(np.abs(k - k.conj().T)) > herm_tol:
            raise ValueError("K is not Hermitian")
        if abs(np.trace(k) - self.dim_n) > trace_tol:
            raise ValueError(f"Tr K = {np.trace(k)}, expected {self.dim_n}")
        if np.linalg.eigvalsh(k).min() < -psd_tol:
            raise ValueError("K is not positive semi-definite")
        return self


@dataclass(frozen=True, eq=False)
class JumpSet:
    """Rates ``gamma_m >= 0`` and jump operators ``V_m`` (stacked ``(M, N, N)``)."""

    rates: np.ndarray
    jumps: np.ndarray

    @property
    def dim_n(self) -> int:
        return self.jumps.shape[-1]

    def __len__(self):
        return len(self.rates)


def _gram(s_mat):
    """``S S^dag`` through the Hermitian rank-k BLAS kernel."""
    upper = np.triu(zherk(1.0, s_mat))
    return upper + np.triu(upper, 1).conj().T


def _composite_core(m, k, s, rng):
    if k == 1 and s >= 1:
        # U G_1 has the law of G_1 (left unitary invariance); skip the QR
        mix = None
    elif k == 1:
        mix = haar_unitary(m, rng)
    else:
        p = random_prob_vector(k, rng)
        mix = sum(pi * haar_unitary(m, rng) for pi in p)
    out = mix
    for _ in range(s):
        g = ginibre_complex(m, rng)
        out = g if out is None else out @ g
    return out


def sample_kossakowski(n: int, spec: SamplerSpec, stream: RandomSource) -> KossakowskiMatrix:
    """Draw ``K`` of size ``N**2 - 1`` from ``spec``, normalized to ``Tr K = n``."""
    if int(n) != n or n < 2:
        raise ValueError(f"need N >= 2, got {n}")
    n = int(n)
    m = n * n - 1
    rng = as_generator(stream)
    while True:
        if spec.variant == "composite":
            s_mat = _composite_core(m, spec.k, spec.s, rng)
            k_mat = _gram(s_mat)
        else:
            u = haar_unitary(m, rng)
            # singular values of G, via the spectrum of G G^dag
            d = np.sqrt(np.clip(np.linalg.eigvalsh(_gram(ginibre_complex(m, rng))), 0.0, None))
            k_mat = (u * d[np.newaxis, :]) @ u.conj().T
        tr = np.trace(k_mat).real
        if tr > 0:
            break
    k_mat *= n / tr
    k_mat = 0.5 * (k_mat + k_mat.conj().T)
    return KossakowskiMatrix(n, k_mat, spec)


def jump_decomposition(k_matrix: KossakowskiMatrix, basis: HermitianBasis) -> JumpSet:
    """Diagonalize K: ``L_D(rho) = sum_m gamma_m (V_m rho V_m^dag - {V_m^dag V_m, rho}/2)``.

    With ``K = U diag(gamma) U^dag`` the jumps are ``V_m = sum_n conj(U_nm) F_n``.
    """
    k = np.asarray(k_matrix.matrix)
    if len(basis) != k.shape[0]:
        raise ValueError(f"K of size {k.shape[0]} does not match basis of size {len(basis)}")
    if np.max(np.abs(k - k.conj().T)) > 1e-12 * max(1.0, np.max(np.abs(k))):
        raise ValueError("Kossakowski matrix must be Hermitian")
    gamma, u = np.linalg.eigh(k)
    if gamma.min() < -RATE_CLAMP:
        raise ValueError(f"negative rate {gamma.min():.3e}: K is not positive semi-definite")
    gamma = np.where(gamma < 0, 0.0, gamma)
    jumps = np.tensordot(u.conj().T, basis.matrices, axes=(1, 0))
    return JumpSet(gamma, jumps)

"""Orthonormal traceless Hermitian basis of su(N) (generalized Gell-Mann matrices)."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np
import scipy.sparse as sp

__all__ = ["HermitianBasis", "sun_basis"]


@dataclass(frozen=True, eq=False)
class HermitianBasis:
    """The ``N**2 - 1`` generators, stacked as an array of shape ``(N**2 - 1, N, N)``.

    Ordering: symmetric ``S_jk`` for ``j < k`` in lexicographic order, then
    antisymmetric ``J_jk`` in the same order, then diagonal ``D_l``.
    """

    dim_n: int
    matrices: np.ndarray
    labels: tuple[str, ...]

    def __len__(self):
        return self.matrices.shape[0]

    def __getitem__(self, idx):
        return self.matrices[idx]

    def __iter__(self):
        return iter(self.matrices)

    @cached_property
    def vec_matrix(self) -> sp.csr_matrix:
        """Sparse ``(M, N**2)`` matrix whose row ``n`` is the row-major ``vec(F_n)``."""
        m, n, _ = self.matrices.shape
        return sp.csr_matrix(self.matrices.reshape(m, n * n))

    @cached_property
    def unitary_frame(self) -> sp.csc_matrix:
        """Sparse unitary ``N**2 x N**2`` whose columns are ``vec(1/sqrt(N))`` and the ``vec(F_n)``.

        Conjugating a hermiticity-preserving superoperator with this frame
        yields a real matrix.
        """
        n = self.dim_n
        ident = sp.csr_matrix(np.eye(n).reshape(1, n * n) / np.sqrt(n))
        return sp.vstack([ident, self.vec_matrix]).T.tocsc()

    def gram(self) -> np.ndarray:
        """``Tr(F_n F_m^dag)``; equals the identity for a valid basis."""
        flat = self.matrices.reshape(len(self), -1)
        return flat @ flat.conj().T

    def coefficients(self, a: np.ndarray) -> np.ndarray:
        """Expansion coefficients ``Tr(F_n^dag A)``."""
        return np.einsum("nij,ij->n", self.matrices.conj(), a)


@lru_cache(maxsize=16)
def sun_basis(n: int) -> HermitianBasis:
    """Build (and cache) the basis for dimension ``n``."""
    if int(n) != n or n < 2:
        raise ValueError(f"su(N) basis needs N >= 2, got {n}")
    n = int(n)
    m = n * n - 1
    mats = np.zeros((m, n, n), dtype=complex)
    labels = []
    s = 1.0 / np.sqrt(2.0)
    idx = 0
    pairs = [(j, k) for j in range(n) for k in range(j + 1, n)]
    for j, k in pairs:
        mats[idx, j, k] = mats[idx, k, j] = s
        labels.append(f"S{j + 1}{k + 1}")
        idx += 1
    for j, k in pairs:
        mats[idx, j, k] = -1j * s
        mats[idx, k, j] = 1j * s
        labels.append(f"J{j + 1}{k + 1}")
        idx += 1
    for l in range(1, n):
        c = 1.0 / np.sqrt(l * (l + 1))
        mats[idx, np.arange(l), np.arange(l)] = c
        mats[idx, l, l] = -l * c
        labels.append(f"D{l}")
        idx += 1
    mats.setflags(write=False)
    return HermitianBasis(dim_n=n, matrices=mats, labels=tuple(labels))

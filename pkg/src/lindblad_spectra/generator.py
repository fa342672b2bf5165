"""Dense superoperator matrices of random Lindbladians and of their RMT surrogates.

Vectorization is row-major throughout: ``vec(A rho B) = (A kron B^T) vec(rho)``,
so the dissipator's sandwich term ``V rho V^dag`` becomes ``V kron conj(V)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .basis import HermitianBasis, sun_basis
from .ensembles import RandomSource, as_generator, ginibre_real, goe, gue
from .kossakowski import JumpSet, KossakowskiMatrix

__all__ = [
    "LindbladSuperop",
    "RmtSurrogate",
    "translation_matrix",
    "channel_superop",
    "build_superop_kron",
    "build_superop_direct",
    "build_superop",
    "dissipator_blocks",
    "real_representation",
    "build_rmt_surrogate",
    "surrogate_ellipse_params",
]


@dataclass(frozen=True, eq=False)
class LindbladSuperop:
    dim_n: int
    alpha: float
    matrix: np.ndarray
    provenance: dict = field(default_factory=dict)

    def check_invariants(self, tp_tol=1e-9):
        """Raise if the trace-preservation condition ``vec(1)^dag L = 0`` fails."""
        n = self.dim_n
        row = np.eye(n).reshape(-1) @ self.matrix
        err = np.max(np.abs(row))
        if err > tp_tol:
            raise ValueError(f"superoperator is not trace preserving (residual {err:.3e})")
        return self


@dataclass(frozen=True, eq=False)
class RmtSurrogate:
    dim_n: int
    alpha: float
    matrix: np.ndarray
    model: str = "general"


def _check_hamiltonian(alpha, h, n):
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    if alpha > 0:
        if h is None:
            raise ValueError("alpha > 0 requires a Hamiltonian")
        h = np.asarray(h)
        if h.shape != (n, n):
            raise ValueError(f"Hamiltonian has shape {h.shape}, expected {(n, n)}")
    return h


def _add_kron_sum(out: np.ndarray, a: np.ndarray, b: np.ndarray) -> None:
    """In place: ``out += a kron 1 + 1 kron b`` without forming either product."""
    n = a.shape[0]
    view = out.reshape(n, n, n, n)  # (i, k, j, l) for row (i, k), column (j, l)
    for k in range(n):
        view[:, k, :, k] += a
        view[k, :, k, :] += b


def translation_matrix(jumps: JumpSet, n: Optional[int] = None) -> np.ndarray:
    """``X = sum_m gamma_m V_m^dag V_m - 1``, the Hermitian part that deforms the disk."""
    v = jumps.jumps
    n = v.shape[-1] if n is None else n
    if v.shape[-2:] != (n, n):
        raise ValueError(f"jumps are {v.shape[-2:]}, expected {(n, n)}")
    x = np.einsum("m,mji,mjk->ik", jumps.rates, v.conj(), v) - np.eye(n)
    return 0.5 * (x + x.conj().T)


def channel_superop(jumps: JumpSet) -> np.ndarray:
    """``Phi_hat = sum_m gamma_m V_m kron conj(V_m)``.

    The M Kronecker products are accumulated as one matrix product over the
    flattened jumps, then permuted into ``(i, k), (j, l)`` order.
    """
    m, n, _ = jumps.jumps.shape
    a = jumps.jumps.reshape(m, n * n) * np.sqrt(jumps.rates)[:, np.newaxis]
    p = a.T @ a.conj()  # p[(i,j),(k,l)] = sum_m g_m V[i,j] conj(V[k,l])
    return p.reshape(n, n, n, n).transpose(0, 2, 1, 3).reshape(n * n, n * n)


def build_superop_kron(
    jumps: JumpSet, alpha: float = 0.0, h: Optional[np.ndarray] = None, n: Optional[int] = None
) -> LindbladSuperop:
    """Superoperator from jump form: ``Phi_hat - 1 - D kron 1 - 1 kron conj(D)``, ``D = X/2 + i alpha H``."""
    n = jumps.dim_n if n is None else int(n)
    if jumps.jumps.shape[-2:] != (n, n):
        raise ValueError(f"jumps are {jumps.jumps.shape[-2:]}, expected {(n, n)}")
    h = _check_hamiltonian(alpha, h, n)
    out = channel_superop(jumps)
    out[np.diag_indices_from(out)] -= 1.0
    d = 0.5 * translation_matrix(jumps, n)
    if alpha > 0:
        d = d + 1j * alpha * h
    _add_kron_sum(out, -d, -d.conj())
    return LindbladSuperop(n, float(alpha), out, {"builder": "kron"})


def build_superop_direct(
    k_matrix: KossakowskiMatrix,
    basis: HermitianBasis,
    alpha: float = 0.0,
    h: Optional[np.ndarray] = None,
) -> LindbladSuperop:
    """Literal double sum over ``K_mn`` with explicit Kronecker products.

    Cost is O(N**8); meant only as a cross-check for small N.
    """
    n = basis.dim_n
    k = np.asarray(k_matrix.matrix)
    if k.shape != (len(basis), len(basis)):
        raise ValueError(f"K of shape {k.shape} does not match basis of size {len(basis)}")
    h = _check_hamiltonian(alpha, h, n)
    eye = np.eye(n)
    f = basis.matrices
    out = np.zeros((n * n, n * n), dtype=complex)
    for mi in range(len(basis)):
        for ni in range(len(basis)):
            kmn = k[mi, ni]
            if kmn == 0:
                continue
            fmfn = f[mi].conj().T @ f[ni]
            out += kmn * (
                np.kron(f[ni], f[mi].conj())
                - 0.5 * np.kron(fmfn, eye)
                - 0.5 * np.kron(eye, fmfn.T)
            )
    if alpha > 0:
        out += -1j * alpha * (np.kron(h, eye) - np.kron(eye, h.conj()))
    return LindbladSuperop(n, float(alpha), out, {"builder": "direct"})


def dissipator_blocks(
    k_matrix: KossakowskiMatrix, basis: Optional[HermitianBasis] = None
) -> tuple[np.ndarray, np.ndarray]:
    """``(Phi_hat, X)`` straight from K, without diagonalizing it.

    ``Phi_hat = sum_mn K_mn F_n kron conj(F_m)`` and ``X + 1 = sum_mn K_mn F_m^dag F_n``
    each reduce to two sparse-dense products against the basis.
    """
    n = k_matrix.dim_n
    basis = sun_basis(n) if basis is None else basis
    k = np.asarray(k_matrix.matrix)
    m = len(basis)
    if k.shape != (m, m):
        raise ValueError(f"K of shape {k.shape} does not match basis of size {m}")
    fv = basis.vec_matrix  # (M, N^2), rows vec(F_n)

    t = (fv.conj().T @ k).T  # K^T conj(Fv)
    p = np.asarray(fv.T @ t)  # p[(i,j),(k,l)] = sum_mn F_n[i,j] K_mn conj(F_m[k,l])
    phi = np.ascontiguousarray(p.reshape(n, n, n, n).transpose(0, 2, 1, 3).reshape(n * n, n * n))

    y = np.asarray((fv.T @ k.T).T).reshape(m * n, n)  # rows (m, j) of Y_m = sum_n K_mn F_n
    stacked = fv.reshape(m * n, n)  # rows (m, j) of F_m
    x = np.asarray(stacked.conj().T @ y) - np.eye(n)
    return phi, 0.5 * (x + x.conj().T)


def build_superop(
    k_matrix: KossakowskiMatrix,
    basis: Optional[HermitianBasis] = None,
    alpha: float = 0.0,
    h: Optional[np.ndarray] = None,
) -> LindbladSuperop:
    """Batch-path builder: same operator as the jump route, but K is never diagonalized."""
    n = k_matrix.dim_n
    h = _check_hamiltonian(alpha, h, n)
    out, x = dissipator_blocks(k_matrix, basis)
    out[np.diag_indices_from(out)] -= 1.0
    d = 0.5 * x
    if alpha > 0:
        d = d + 1j * alpha * h
    _add_kron_sum(out, -d, -d.conj())
    return LindbladSuperop(n, float(alpha), out, {"builder": "basis"})


def real_representation(superop: LindbladSuperop, basis: Optional[HermitianBasis] = None) -> np.ndarray:
    """Similarity transform into the Hermitian frame ``{1/sqrt(N), F_n}``; real for any Lindbladian.

    Entries are ``Tr[G_a L(G_b)]``. The discarded imaginary part is checked.
    """
    n = superop.dim_n
    basis = sun_basis(n) if basis is None else basis
    b = basis.unitary_frame
    lb = np.asarray((b.T @ superop.matrix.T).T)
    r = np.asarray(b.conj().T @ lb)
    scale = max(1.0, float(np.max(np.abs(r.real))))
    imag = float(np.max(np.abs(r.imag)))
    if imag > 1e-9 * scale:
        raise ValueError(f"superoperator is not hermiticity preserving (imag residue {imag:.3e})")
    return np.ascontiguousarray(r.real)


def surrogate_ellipse_params(alpha: float) -> tuple[float, float]:
    """Semi-axes ``(a, b)`` of the ellipse filled by ``W = C + i alpha H'``."""
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    root = np.sqrt(1.0 + 4.0 * alpha**2)
    return 1.0 / root, 4.0 * alpha**2 / root


def build_rmt_surrogate(n: int, alpha: float, stream: RandomSource, model: str = "general") -> RmtSurrogate:
    """RMT model of the rescaled generator, in rescaled coordinates.

    ``model="general"``: ``G_R - (W kron 1 + 1 kron conj(W))`` with
    ``W = C + i alpha H'``, ``Tr H'^2 = N``; alpha = 0 is the purely
    dissipative model.
    ``model="scaled"``: ``G_R + alpha (C kron 1 + 1 kron C)``, the family
    whose boundary solves ``Im[alpha z + G(z / alpha)] = 0``.

    ``G_R`` is real Ginibre of size ``N**2`` (unit disk), ``C`` is GOE with
    semicircle radius 1.
    """
    if int(n) != n or n < 2:
        raise ValueError(f"need N >= 2, got {n}")
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    n = int(n)
    rng = as_generator(stream)
    out = ginibre_real(n * n, rng)
    c = goe(n, 1.0, rng)
    if model == "general":
        w = c.astype(complex)
        if alpha > 0:
            w = w + 1j * alpha * gue(n, float(n), rng)
        out = out.astype(complex)
        _add_kron_sum(out, -w, -w.conj())
    elif model == "scaled":
        _add_kron_sum(out, alpha * c, alpha * c)
    else:
        raise ValueError(f"unknown surrogate model {model!r}")
    return RmtSurrogate(n, float(alpha), out, model)

"""Independent reference computations used by the tests.

Nothing here calls into the package except for types; every value is
obtained by a different route (quadrature, closed forms, hand assembly).
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy import integrate


def semicircle_pair_density(x: float) -> float:
    """Density of the sum of two free unit-radius semicircles, by direct quadrature."""
    x = abs(x)
    if x >= 2:
        return 0.0

    # the square-root edges at t = x - 1 and t = 1 go into the algebraic weight
    def smooth(t):
        return (2 / np.pi) ** 2 * np.sqrt(1 + t) * np.sqrt(1 + x - t)

    return integrate.quad(smooth, x - 1, 1.0, weight="alg", wvar=(0.5, 0.5), epsabs=1e-14, epsrel=1e-12)[0]


@lru_cache(maxsize=1)
def _density_table(panels: int = 400, order: int = 10):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(-2.0, 2.0, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    w = (half[:, None] * weights[None, :]).ravel()
    rho = np.array([semicircle_pair_density(v) for v in x])
    return x, w, rho


def stieltjes_quadrature(z) -> np.ndarray:
    """``G(z) = int rho(x) / (z - x) dx`` on a composite Gauss-Legendre grid.

    Accurate to ~1e-9 for ``|Im z| >= 0.1``.
    """
    x, w, rho = _density_table()
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    return (w * rho / (z[:, None] - x[None, :])).sum(axis=1)


def gaussian_stieltjes_quadrature(z: complex) -> complex:
    f = lambda x: np.exp(-x * x / 2) / np.sqrt(2 * np.pi) / (z - x)
    re = integrate.quad(lambda x: f(x).real, -np.inf, np.inf, limit=400)[0]
    im = integrate.quad(lambda x: f(x).imag, -np.inf, np.inf, limit=400)[0]
    return re + 1j * im


def elliptic_k_quadrature(m: float) -> float:
    return integrate.quad(lambda t: 1 / np.sqrt(1 - m * np.sin(t) ** 2), 0, np.pi / 2, epsabs=1e-14)[0]


def elliptic_e_quadrature(m: float) -> float:
    return integrate.quad(lambda t: np.sqrt(1 - m * np.sin(t) ** 2), 0, np.pi / 2, epsabs=1e-14)[0]


def amplitude_damping_superop() -> np.ndarray:
    """Hand-assembled generator of ``V = |0><1|``, rate 1, row-major ``vec(rho)``.

    d rho00 = rho11, d rho01 = -rho01/2, d rho10 = -rho10/2, d rho11 = -rho11.
    """
    return np.array(
        [
            [0.0, 0.0, 0.0, 1.0],
            [0.0, -0.5, 0.0, 0.0],
            [0.0, 0.0, -0.5, 0.0],
            [0.0, 0.0, 0.0, -1.0],
        ]
    )


def marchenko_pastur_bin_mass(edges: np.ndarray) -> np.ndarray:
    """Square-case MP law (unit mean) integrated over histogram bins."""
    density = lambda x: np.sqrt(max(0.0, x * (4 - x))) / (2 * np.pi * x) if x > 0 else 0.0
    return np.array(
        [integrate.quad(density, max(a, 0.0), min(b, 4.0))[0] if b > 0 and a < 4 else 0.0 for a, b in zip(edges[:-1], edges[1:])]
    )


def dissipator_apply(k: np.ndarray, f: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Dissipator applied to a density matrix, straight from the double sum over ``K_mn``."""
    out = np.zeros_like(rho, dtype=complex)
    for a in range(len(f)):
        for b in range(len(f)):
            if k[a, b] == 0:
                continue
            fb_fa = f[a].conj().T @ f[b]
            out += k[a, b] * (f[b] @ rho @ f[a].conj().T - 0.5 * (fb_fa @ rho + rho @ fb_fa))
    return out


def spectral_mismatch(a, b) -> float:
    """Largest distance between two multisets of eigenvalues under the best pairing."""
    from scipy.optimize import linear_sum_assignment

    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError("spectra differ in size")
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())

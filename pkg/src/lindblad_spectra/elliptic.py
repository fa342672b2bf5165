"""Complete elliptic integrals K(m), E(m) by the arithmetic-geometric mean.

Parameter convention ``m = k**2``. Complex ``m`` off the cut ``[1, inf)`` is
supported on the principal branch: at each AGM step the geometric mean takes
the square root closer to the arithmetic mean ("right choice"), which keeps
the iteration on the principal sheet whenever ``Re sqrt(1 - m) > 0``.
"""

from __future__ import annotations

import numpy as np

__all__ = ["elliptic_k", "elliptic_e", "elliptic_ke"]

_MAX_ITER = 64


def _agm_terms(m):
    """Run the AGM on (1, sqrt(1 - m)); return the limit and ``sum 2**(n-1) c_n**2``."""
    a = np.ones_like(m)
    b = np.sqrt(1.0 - m)
    csum = 0.5 * m
    weight = 0.5
    for _ in range(_MAX_ITER):
        a_next = 0.5 * (a + b)
        g = np.sqrt(a * b)
        g = np.where(np.abs(a_next - g) <= np.abs(a_next + g), g, -g)
        c = 0.5 * (a - b)
        weight *= 2.0
        csum = csum + weight * c * c
        a, b = a_next, g
        if np.all(np.abs(a - b) <= 4e-16 * np.abs(a)):
            break
    else:
        raise ArithmeticError("AGM did not converge")
    # one extra correction term, c_{n+1} is O(eps) here but keeps E accurate
    c = 0.5 * (a - b)
    csum = csum + 2.0 * weight * c * c
    return 0.5 * (a + b), csum


def _prepare(m):
    arr = np.asarray(m)
    if np.iscomplexobj(arr):
        arr = arr.astype(complex)
        on_cut = (arr.imag == 0) & (arr.real >= 1)
    else:
        arr = arr.astype(float)
        on_cut = arr >= 1
        if np.any(arr > 1):
            raise ValueError("real parameter m > 1 lies on the branch cut; pass a complex value")
    return arr, on_cut


def elliptic_ke(m):
    """Return ``(K(m), E(m))``; shares one AGM run."""
    arr, on_cut = _prepare(m)
    if np.any(arr == 1):
        raise ValueError("K(m) has a logarithmic pole at m = 1")
    if np.any(on_cut):
        raise ValueError("parameter on the branch cut [1, inf)")
    agm, csum = _agm_terms(arr)
    k = np.pi / (2.0 * agm)
    e = k * (1.0 - csum)
    if np.ndim(m) == 0:
        return k[()], e[()]
    return k, e


def elliptic_k(m):
    return elliptic_ke(m)[0]


def elliptic_e(m):
    """Complete elliptic integral of the second kind; ``E(1) = 1``."""
    arr = np.asarray(m)
    ones = arr == 1
    if np.any(ones):
        safe = np.where(ones, 0, arr)
        out = np.where(ones, 1.0, elliptic_ke(safe)[1])
        return out[()] if np.ndim(m) == 0 else out
    return elliptic_ke(m)[1]

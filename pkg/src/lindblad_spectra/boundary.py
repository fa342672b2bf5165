"""Support boundaries of ``Ginibre + Hermitian`` spectra and related curve geometry.

For ``A + alpha B`` with ``A`` a unit Ginibre matrix and ``B`` Hermitian with
Stieltjes transform ``G``, the spectral border is the non-trivial solution of

    Im[alpha z + G(z / alpha)] = 0.

With ``B = C kron 1 + 1 kron C`` (``C`` a radius-one semicircle) this is the
"lemon" bounding the rescaled spectrum of a random purely dissipative
Lindbladian.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.optimize import brentq
from scipy.spatial import ConvexHull, QhullError
from scipy.stats import qmc
from scipy.special import wofz

from .elliptic import elliptic_ke

__all__ = [
    "BoundaryCurve",
    "StieltjesFn",
    "TWO_SEMICIRCLES",
    "GAUSSIAN",
    "stieltjes_two_semicircles",
    "stieltjes_gaussian",
    "boundary_curve",
    "lemon",
    "ellipse_sum_boundary_numeric",
    "empirical_boundary",
    "hausdorff_distance",
    "BoundaryError",
]


class BoundaryError(RuntimeError):
    """Tracing failed (no sign change in the scan window, degenerate hull, ...)."""


def stieltjes_two_semicircles(z):
    """Stieltjes transform of the convolution of two radius-one semicircles.

    ``G(z) = 2z - 2z/(3 pi) [(4 + z^2) E(4/z^2) + (4 - z^2) K(4/z^2)]`` with the
    parameter convention ``m = k^2``. Undefined on the support ``[-2, 2]``.
    """
    z = np.asarray(z, dtype=complex)
    if np.any((z.imag == 0) & (np.abs(z.real) <= 2)):
        raise ValueError("G is undefined on the support [-2, 2] of the real axis")
    m = 4.0 / (z * z)
    # real z outside the support gives m in (0, 1); keep it off the cut side
    m = np.where(m.imag == 0, m.real + 0j, m)
    kk, ee = elliptic_ke(m)
    g = 2 * z - (2 * z / (3 * np.pi)) * ((4 + z * z) * ee + (4 - z * z) * kk)
    g = np.where(z.imag == 0, g.real + 0j, g)
    return g[()] if g.ndim == 0 else g


def stieltjes_gaussian(z):
    """Stieltjes transform of the standard normal density, ``Im z != 0``.

    Equals ``sqrt(pi/2) exp(-z^2/2) (erfi(z/sqrt 2) - i sgn Im z)``; evaluated
    as ``-i sqrt(pi/2) w(z/sqrt 2)`` through the Faddeeva function for
    ``Im z > 0`` and by conjugation below the axis, which avoids the overflow
    of ``exp(-z^2/2)`` and ``erfi`` separately.
    """
    z = np.asarray(z, dtype=complex)
    if np.any(z.imag == 0):
        raise ValueError("Gaussian Stieltjes transform needs Im z != 0")
    upper = np.where(z.imag > 0, z, z.conj())
    g = -1j * np.sqrt(np.pi / 2) * wofz(upper / np.sqrt(2))
    g = np.where(z.imag > 0, g, g.conj())
    return g[()] if g.ndim == 0 else g


@dataclass(frozen=True)
class StieltjesFn:
    kind: str
    evaluate: Callable
    support_edge: float  # half-width of the real support; inf for unbounded

    def __call__(self, z):
        return self.evaluate(z)


TWO_SEMICIRCLES = StieltjesFn("two_semicircles", stieltjes_two_semicircles, 2.0)
GAUSSIAN = StieltjesFn("gaussian", stieltjes_gaussian, np.inf)


@dataclass(frozen=True, eq=False)
class BoundaryCurve:
    """Closed polyline; ``points[0] == points[-1]``."""

    points: np.ndarray
    kind: str
    alpha: Optional[float] = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=complex)
        if abs(pts[0] - pts[-1]) > 1e-9:
            pts = np.append(pts, pts[0])
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)

    @property
    def centroid(self) -> complex:
        """Area centroid of the enclosed polygon."""
        p = self.points
        x, y = p.real, p.imag
        cross = x[:-1] * y[1:] - x[1:] * y[:-1]
        area = 0.5 * cross.sum()
        if abs(area) < 1e-300:
            return complex(p[:-1].mean())
        cx = ((x[:-1] + x[1:]) * cross).sum() / (6 * area)
        cy = ((y[:-1] + y[1:]) * cross).sum() / (6 * area)
        return complex(cx, cy)

    def inflated(self, inflation: float) -> "BoundaryCurve":
        """Every vertex pushed radially outward from the centroid by ``inflation``."""
        if inflation < 0:
            raise ValueError("inflation must be non-negative")
        if inflation == 0:
            return self
        c = self.centroid
        d = self.points - c
        r = np.abs(d)
        scale = np.where(r > 0, (r + inflation) / np.where(r > 0, r, 1), 1.0)
        return BoundaryCurve(c + d * scale, self.kind, self.alpha)

    def contains(self, z) -> np.ndarray:
        """Even-odd ray casting; points exactly on an edge count as outside."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        x, y = z.real[:, None], z.imag[:, None]
        p = self.points
        x0, y0 = p[:-1].real[None, :], p[:-1].imag[None, :]
        x1, y1 = p[1:].real[None, :], p[1:].imag[None, :]
        straddle = (y0 > y) != (y1 > y)
        with np.errstate(divide="ignore", invalid="ignore"):
            x_cross = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
        hits = straddle & (x < x_cross)
        return (np.count_nonzero(hits, axis=1) % 2) == 1

    def contains_fraction(self, z, inflation: float = 0.0, chunk: int = 20000) -> float:
        z = np.asarray(z, dtype=complex).ravel()
        if z.size == 0:
            return float("nan")
        curve = self.inflated(inflation)
        inside = 0
        for start in range(0, z.size, chunk):
            inside += int(np.count_nonzero(curve.contains(z[start:start + chunk])))
        return inside / z.size

    def radii(self, center: Optional[complex] = None) -> np.ndarray:
        c = self.centroid if center is None else center
        return np.abs(self.points[:-1] - c)

    def circularity(self, center: Optional[complex] = None) -> float:
        """max/min vertex distance from the centroid (1 for a regular polygon)."""
        r = self.radii(center)
        return float(r.max() / r.min())

    def extent(self) -> tuple[float, float, float, float]:
        p = self.points
        return float(p.real.min()), float(p.real.max()), float(p.imag.min()), float(p.imag.max())


def _polyline_distance(points: np.ndarray, poly: np.ndarray) -> np.ndarray:
    """Distance from each point to the polyline ``poly``."""
    a = poly[:-1][None, :]
    b = poly[1:][None, :]
    p = points[:, None]
    ab = b - a
    denom = np.abs(ab) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(denom > 0, ((p - a) * ab.conj()).real / denom, 0.0)
    t = np.clip(t, 0.0, 1.0)
    return np.abs(p - (a + t * ab)).min(axis=1)


def hausdorff_distance(c1: BoundaryCurve, c2: BoundaryCurve) -> float:
    """Symmetric Hausdorff distance between two polylines (vertex-to-segment)."""
    d12 = _polyline_distance(c1.points, c2.points).max()
    d21 = _polyline_distance(c2.points, c1.points).max()
    return float(max(d12, d21))


# smallest traced angle; fixed so that refinement never moves the tips
THETA_FLOOR = 1e-8
_MAX_BISECT = 12


def _angle_grid(resolution):
    half = max(resolution // 2, 32)
    uniform = np.linspace(0.0, np.pi, half + 1)[1:-1]
    step = np.pi / half
    refine = np.geomspace(THETA_FLOOR, 0.5 * step, 80)
    theta = np.concatenate([refine, uniform, np.pi - refine])
    return np.unique(theta)


def _outer_root(fn: Callable, theta: float, radii: np.ndarray) -> float:
    """Largest r with fn(r e^{i theta}) = 0, bracketed on the scan grid ``radii``."""
    direction = np.exp(1j * theta)
    vals = fn(radii * direction)
    if vals[-1] <= 0:
        raise BoundaryError(f"no exterior point along theta={theta:.4g}; enlarge the scan window")
    nonpos = np.nonzero(vals <= 0)[0]
    if nonpos.size == 0:
        raise BoundaryError(f"no sign change along theta={theta:.4g}; refine the scan grid")
    i = nonpos[-1]
    f = lambda r: float(fn(np.array([r * direction]))[0])
    return brentq(f, radii[i], radii[i + 1], xtol=1e-13, rtol=1e-15, maxiter=200)


def boundary_curve(
    g: StieltjesFn = TWO_SEMICIRCLES,
    alpha: float = 1.0,
    resolution: int = 512,
    r_max: Optional[float] = None,
    scan_points: int = 800,
) -> BoundaryCurve:
    """Trace the closed non-trivial branch of ``Im[alpha z + G(z/alpha)] = 0``.

    The real axis solves the equation trivially, so the curve is found in
    polar form: for each angle in ``(0, pi)`` the outermost root in ``r``,
    then mirrored below the axis. Angles are refined geometrically towards
    the axis down to ``THETA_FLOOR`` and the tips are the roots there.
    For a compactly supported density that is the real-axis tip to roundoff;
    for the Gaussian the true curve has an exponentially thin tail along the
    axis (width ~ pi rho(x)) and the floor is where it is cut.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if resolution < 64:
        raise ValueError("resolution must be at least 64")
    if r_max is None:
        edge = g.support_edge if np.isfinite(g.support_edge) else 6.0
        r_max = 2.0 * (alpha * edge + 2.0)

    def fn(z):
        return (alpha * z + g(z / alpha)).imag

    radii = np.linspace(r_max / scan_points, r_max, scan_points)
    theta = _angle_grid(resolution)
    r = np.array([_outer_root(fn, t, radii) for t in theta])
    upper = r * np.exp(1j * theta)
    # bisect angular gaps whose chord is long compared with the target arc length
    max_chord = 2.0 * np.abs(np.diff(upper)).sum() / resolution
    for _ in range(_MAX_BISECT):
        long = np.nonzero(np.abs(np.diff(upper)) > max_chord)[0]
        if long.size == 0:
            break
        mid = 0.5 * (theta[long] + theta[long + 1])
        r_mid = np.array([_outer_root(fn, t, radii) for t in mid])
        theta = np.concatenate([theta, mid])
        r = np.concatenate([r, r_mid])
        order = np.argsort(theta)
        theta, r = theta[order], r[order]
        upper = r * np.exp(1j * theta)
    right_tip = complex(r[0], 0.0)
    left_tip = complex(-r[-1], 0.0)
    pts = np.concatenate([[right_tip], upper, [left_tip], upper[::-1].conj(), [right_tip]])
    return BoundaryCurve(pts, g.kind, float(alpha))


def lemon(resolution: int = 512) -> BoundaryCurve:
    """Asymptotic border of the rescaled purely dissipative spectrum."""
    curve = boundary_curve(TWO_SEMICIRCLES, 1.0, resolution)
    return BoundaryCurve(curve.points, "lemon", 1.0)


def _uniform_ellipse(u, v, a, b):
    """Map unit-square coordinates to a uniform point on the ellipse."""
    r = np.sqrt(u)
    phi = 2 * np.pi * v
    return a * r * np.cos(phi) + 1j * b * r * np.sin(phi)


def ellipse_sum_boundary_numeric(
    alpha: float,
    mc_points: int = 2**16,
    resolution: int = 256,
    seed: int = 0,
    r_max: float = 8.0,
) -> BoundaryCurve:
    """Numeric border for ``unit Ginibre + (W kron 1 + 1 kron conj W)`` with ``W = C + i alpha H'``.

    Uses the additive-Ginibre support criterion for a normal deformation
    ``D``: ``z`` lies outside the support iff ``mean 1/|z - w|^2 < 1`` over
    the spectrum ``w`` of ``D``. The spectrum of ``D`` is modelled as
    ``w1 + conj(w2)`` with ``w1, w2`` uniform on the ellipse of
    :func:`~lindblad_spectra.generator.surrogate_ellipse_params`; its support
    is the doubled ellipse. The mean diverges wherever that density is
    positive, so the doubled ellipse is always inside and the average is
    only estimated beyond it (scrambled Sobol points, fixed seed, so the
    criterion is a deterministic smooth function of z).
    Diagnostic only: validated empirically, not derived.
    """
    from .generator import surrogate_ellipse_params

    if alpha <= 0:
        raise ValueError("alpha must be positive")
    a, b = surrogate_ellipse_params(alpha)
    sobol = qmc.Sobol(d=4, scramble=True, seed=seed)
    u = sobol.random(2 ** int(np.ceil(np.log2(mc_points))))
    w = _uniform_ellipse(u[:, 0], u[:, 1], a, b) + np.conj(_uniform_ellipse(u[:, 2], u[:, 3], a, b))

    def excess(z):
        z = np.atleast_1d(z)
        out = np.empty(z.shape)
        step = max(1, 2_000_000 // w.size)
        for start in range(0, z.size, step):
            block = z[start:start + step, None] - w[None, :]
            out[start:start + step] = 1.0 - np.mean(1.0 / (block.real**2 + block.imag**2), axis=1)
        return out

    half = max(resolution // 2, 32)
    theta = np.linspace(0.0, np.pi, half + 1)
    roots = []
    for t in theta:
        direction = np.exp(1j * t)
        edge = 1.0 / np.sqrt((np.cos(t) / (2 * a)) ** 2 + (np.sin(t) / (2 * b)) ** 2)
        if edge >= r_max:
            raise BoundaryError(f"support of the deformation exceeds r_max={r_max}")
        radii = edge + (r_max - edge) * np.linspace(0.0, 1.0, 161) ** 2
        vals = excess(radii * direction)
        if vals[-1] <= 0:
            raise BoundaryError(f"scan window too small at theta={t:.3g}; enlarge r_max")
        nonpos = np.nonzero(vals <= 0)[0]
        if nonpos.size == 0:
            roots.append(edge)
            continue
        i = nonpos[-1]
        roots.append(brentq(lambda r: float(excess(r * direction)[0]), radii[i], radii[i + 1], xtol=1e-10))
    upper = np.array(roots) * np.exp(1j * theta)
    pts = np.concatenate([upper, upper[-2:0:-1].conj(), upper[:1]])
    return BoundaryCurve(pts, "ellipse_convolution_numeric", float(alpha))


def empirical_boundary(points, min_points: int = 100) -> BoundaryCurve:
    """Convex hull of a cloud of (rescaled bulk) eigenvalues."""
    z = np.asarray(points, dtype=complex).ravel()
    if z.size < min_points:
        raise BoundaryError(f"need at least {min_points} points, got {z.size}")
    xy = np.column_stack([z.real, z.imag])
    try:
        hull = ConvexHull(xy)
    except QhullError as exc:
        raise BoundaryError(f"degenerate point cloud: {exc}") from exc
    verts = z[hull.vertices]
    return BoundaryCurve(np.append(verts, verts[0]), "empirical")

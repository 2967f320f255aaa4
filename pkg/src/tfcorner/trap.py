"""Trapping potentials, the Thomas-Fermi chemical potential, and the geometry
of the Thomas-Fermi boundary (radius or extracted contour, normal-derivative
scale beta, curvature).

Supported trap family: anisotropic harmonic y1^2 + L^2 y2^2 (optionally
rescaled), radial Gaussian-bump r^2 + a exp(-b r^2), and tabulated radial
profiles.  All are star-shaped about the origin with a single level crossing
per ray for the chemical potentials of interest, so mass integrals reduce to
per-ray quadrature (adaptive Gauss segments) plus a periodic angular rule.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline, PchipInterpolator
from scipy.optimize import brentq, minimize_scalar

from .errors import TopologyError

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(40)


class Trap:
    """A trapping potential with gradient evaluators.

    Construct via the factory classmethods.  Instances are immutable and safe
    to share across workers.
    """

    def __init__(self, kind: str, radial_fn, radial_grad, params: dict,
                 r_far: float, growth_power: float = 2.0):
        self.kind = kind
        self.params = dict(params)
        self._radial_fn = radial_fn      # W along a ray: (r, cos, sin) -> W
        self._radial_grad = radial_grad  # dW/dr along a ray
        self.r_far = r_far
        self.growth_power = growth_power
        self._validate()

    # -- constructors -------------------------------------------------------

    @classmethod
    def harmonic(cls, aniso: float = 1.0, scale: float = 1.0) -> "Trap":
        """W = scale^2 (y1^2 + aniso^2 y2^2), anisotropy in (0, 1]."""
        if not 0 < aniso <= 1:
            raise ValueError("anisotropy must lie in (0, 1]")
        if scale <= 0:
            raise ValueError("scale must be positive")
        s2 = scale * scale
        a2 = aniso * aniso

        def w(r, c, s):
            return s2 * r * r * (c * c + a2 * s * s)

        def dw(r, c, s):
            return 2.0 * s2 * r * (c * c + a2 * s * s)

        return cls("harmonic", w, dw, {"aniso": aniso, "scale": scale}, r_far=10.0 / scale)

    @classmethod
    def gaussian_bump(cls, a: float, b: float) -> "Trap":
        """Radial W(r) = r^2 + a exp(-b r^2); a = 0 reduces to the harmonic trap."""
        if a < 0 or b <= 0:
            raise ValueError("need a >= 0 and b > 0")

        def w(r, c, s):
            return r * r + a * np.exp(-b * r * r)

        def dw(r, c, s):
            return 2.0 * r * (1.0 - a * b * np.exp(-b * r * r))

        return cls("gaussian_bump", w, dw, {"a": a, "b": b}, r_far=10.0)

    @classmethod
    def radial_table(cls, r: np.ndarray, values: np.ndarray) -> "Trap":
        """Tabulated radial potential, monotone beyond the core.

        Monotone cubic interpolation inside the table; beyond the last sample
        the potential continues with the fitted far-field power law.
        """
        r = np.asarray(r, dtype=float)
        values = np.asarray(values, dtype=float)
        if r.ndim != 1 or r.shape != values.shape or len(r) < 8:
            raise ValueError("need matching 1-D arrays with at least 8 samples")
        if r[0] != 0.0 or np.any(np.diff(r) <= 0):
            raise ValueError("radii must start at 0 and increase")
        if np.any(values < 0):
            raise ValueError("potential samples must be nonnegative")
        interp = PchipInterpolator(r, values)
        dinterp = interp.derivative()
        # far-field power from the last decade of samples
        tail = r >= 0.5 * r[-1]
        p_est = np.polyfit(np.log(r[tail]), np.log(np.maximum(values[tail], 1e-300)), 1)[0]
        if p_est < 1.9:
            raise ValueError(f"far-field growth power {p_est:.2f} below quadratic")
        r_end, w_end = r[-1], values[-1]

        def w(rr, c, s):
            rr = np.asarray(rr, dtype=float)
            out = np.where(rr <= r_end, interp(np.minimum(rr, r_end)),
                           w_end * (np.maximum(rr, r_end) / r_end) ** p_est)
            return out if out.ndim else float(out)

        def dw(rr, c, s):
            rr = np.asarray(rr, dtype=float)
            out = np.where(rr <= r_end, dinterp(np.minimum(rr, r_end)),
                           p_est * w_end * (np.maximum(rr, r_end) / r_end) ** (p_est - 1) / r_end)
            return out if out.ndim else float(out)

        return cls("radial_table", w, dw, {"n_samples": len(r), "r_max": r_end},
                   r_far=r_end, growth_power=p_est)

    # -- evaluation ----------------------------------------------------------

    @property
    def is_radial(self) -> bool:
        return self.kind != "harmonic" or self.params["aniso"] == 1.0

    def W_ray(self, r, cos_phi: float = 1.0, sin_phi: float = 0.0):
        return self._radial_fn(r, cos_phi, sin_phi)

    def dW_ray(self, r, cos_phi: float = 1.0, sin_phi: float = 0.0):
        return self._radial_grad(r, cos_phi, sin_phi)

    def W(self, y):
        """Potential at points with trailing axis (y1, y2)."""
        y = np.asarray(y, dtype=float)
        r = np.hypot(y[..., 0], y[..., 1])
        with np.errstate(invalid="ignore"):
            c = np.where(r > 0, y[..., 0] / np.where(r > 0, r, 1.0), 1.0)
            s = np.where(r > 0, y[..., 1] / np.where(r > 0, r, 1.0), 0.0)
        return self._radial_fn(r, c, s)

    def grad_W(self, y):
        """Gradient at points with trailing axis (y1, y2)."""
        y = np.asarray(y, dtype=float)
        if self.kind == "harmonic":
            s2 = self.params["scale"] ** 2
            a2 = self.params["aniso"] ** 2
            return np.stack([2 * s2 * y[..., 0], 2 * s2 * a2 * y[..., 1]], axis=-1)
        r = np.hypot(y[..., 0], y[..., 1])
        safe = np.where(r > 0, r, 1.0)
        dwr = self._radial_grad(r, 1.0, 0.0)
        return np.stack([dwr * y[..., 0] / safe, dwr * y[..., 1] / safe], axis=-1)

    def W_min(self) -> float:
        if self.kind == "harmonic":
            return 0.0
        res = minimize_scalar(lambda r: float(self._radial_fn(r, 1.0, 0.0)),
                              bounds=(0.0, self.r_far), method="bounded",
                              options={"xatol": 1e-12})
        return float(res.fun)

    def _validate(self):
        ring = np.linspace(0.0, 2 * np.pi, 33)[:-1]
        pts = self.r_far * np.stack([np.cos(ring), np.sin(ring)], axis=-1)
        w = self.W(pts)
        if np.any(w < 0):
            raise ValueError("potential must be nonnegative")
        if np.any(w < self.r_far**2 / 100.0):
            raise ValueError("potential grows slower than |y|^2/100 on the far ring")


# -- mass function and chemical potential -----------------------------------


def _ray_mass(trap: Trap, lam: float, c: float, s: float) -> float:
    """int (lam - W)^+ r dr along one ray, splitting at level crossings."""
    r_hi = trap.r_far
    while trap.W_ray(r_hi, c, s) < lam:
        r_hi *= 2.0
        if r_hi > 1e8:
            raise ValueError("potential does not reach the requested level")
    rs = np.linspace(0.0, r_hi, 2049)
    below = trap.W_ray(rs, c, s) < lam
    if not np.any(below):
        return 0.0
    edges = np.nonzero(np.diff(below.astype(int)))[0]
    crossings = [brentq(lambda r: trap.W_ray(r, c, s) - lam, rs[i], rs[i + 1],
                        xtol=1e-15, rtol=8.9e-16) for i in edges]
    bounds = []
    start = 0.0 if below[0] else None
    for i, x in zip(edges, crossings):
        if below[i]:
            bounds.append((start, x))
            start = None
        else:
            start = x
    if start is not None:
        bounds.append((start, r_hi))
    total = 0.0
    for a, b in bounds:
        mid = 0.5 * (a + b)
        half = 0.5 * (b - a)
        r = mid + half * _GL_NODES
        total += half * np.sum(_GL_WEIGHTS * (lam - trap.W_ray(r, c, s)) * r)
    return total


def mass_of_lambda(trap: Trap, lam: float, n_phi: int = 64) -> float:
    """m(lam) = int (lam - W)^+ dy; continuous and strictly increasing above inf W."""
    if trap.is_radial:
        return 2.0 * np.pi * _ray_mass(trap, lam, 1.0, 0.0)
    phis = np.linspace(0.0, 2 * np.pi, n_phi, endpoint=False)
    vals = [_ray_mass(trap, lam, np.cos(p), np.sin(p)) for p in phis]
    return float(np.mean(vals) * 2.0 * np.pi)


def compute_lambda0(trap: Trap, tol: float = 1e-10) -> float:
    """Chemical potential with |int (lam0 - W)^+ dy - 1| <= tol, by bisection."""
    if tol < 1e-12:
        raise ValueError("tolerance below 1e-12 is not supported")
    w_min = trap.W_min()
    lo = w_min
    hi = w_min + 1.0
    while mass_of_lambda(trap, hi) < 1.0:
        hi = w_min + 2.0 * (hi - w_min)
        if hi - w_min > 1e6:
            raise ValueError("failed to bracket the unit-mass level")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        m = mass_of_lambda(trap, mid)
        if abs(m - 1.0) <= 0.5 * tol:
            return mid
        if m < 1.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 4e-16 * max(1.0, abs(hi)):
            break
    mid = 0.5 * (lo + hi)
    if abs(mass_of_lambda(trap, mid) - 1.0) > tol:
        raise ValueError("bisection converged without meeting the mass tolerance")
    return mid


# -- Thomas-Fermi boundary geometry ------------------------------------------


@dataclass(eq=False)
class TFData:
    """Thomas-Fermi data at a chemical potential: boundary curve, arclength,
    normal-derivative scale beta(theta) and curvature k(theta).

    ``lambda0`` records the level the geometry was built at (the TF chemical
    potential, or a solver's Lagrange multiplier when paired with a ground
    state).  Immutable after construction.
    """

    trap: Trap
    lambda0: float
    radial: bool
    R: float | None
    thetas: np.ndarray          # arclength samples in [0, ell0)
    points: np.ndarray          # boundary points, shape (n, 2)
    normals: np.ndarray         # outward unit normals, shape (n, 2)
    beta: np.ndarray
    curvature: np.ndarray
    ell0: float
    _beta_spline: CubicSpline = field(init=False, repr=False)

    def __post_init__(self):
        for arr in (self.thetas, self.points, self.normals, self.beta, self.curvature):
            arr.setflags(write=False)
        th = np.concatenate([self.thetas, [self.ell0]])
        be = np.concatenate([self.beta, [self.beta[0]]])
        self._beta_spline = CubicSpline(th, be, bc_type="periodic")

    def beta_at(self, theta):
        return self._beta_spline(np.mod(theta, self.ell0))

    def a_plus(self, y):
        """(lambda - W(y))^+, exactly zero outside the domain."""
        return np.maximum(self.lambda0 - self.trap.W(y), 0.0)

    def mass_defect(self) -> float:
        return abs(mass_of_lambda(self.trap, self.lambda0) - 1.0)


def _outer_radius(trap: Trap, lam: float, c: float, s: float) -> float:
    r_hi = trap.r_far
    while trap.W_ray(r_hi, c, s) < lam:
        r_hi *= 2.0
    rs = np.linspace(0.0, r_hi, 4097)
    below = trap.W_ray(rs, c, s) < lam
    if not below[0]:
        raise TopologyError("origin lies outside the domain (annular level set)")
    edges = np.nonzero(np.diff(below.astype(int)))[0]
    if len(edges) != 1:
        raise TopologyError("level set crosses the ray more than once")
    i = edges[0]
    return brentq(lambda r: trap.W_ray(r, c, s) - lam, rs[i], rs[i + 1],
                  xtol=1e-15, rtol=8.9e-16)


def boundary_and_beta(trap: Trap, lam: float, n_theta: int = 256,
                      force_general: bool = False) -> TFData:
    """Boundary geometry of {W = lam}: radius/polyline, beta(theta), curvature.

    Radial traps use exact radial relations; other traps go through
    marching-squares contour extraction, arclength reparametrization, and a
    5-point quadratic fit for curvature.
    """
    if lam <= trap.W_min():
        raise ValueError("level must exceed the potential minimum")
    if trap.is_radial and not force_general:
        return _tfdata_radial(trap, lam, n_theta)
    return _tfdata_general(trap, lam, n_theta)


def _tfdata_radial(trap: Trap, lam: float, n_theta: int) -> TFData:
    R = _outer_radius(trap, lam, 1.0, 0.0)
    dW = float(trap.dW_ray(R, 1.0, 0.0))
    if dW <= 0:
        raise ValueError("normal derivative vanishes on the boundary")
    thetas = np.linspace(0.0, 2 * np.pi * R, n_theta, endpoint=False)
    ang = thetas / R
    points = R * np.stack([np.cos(ang), np.sin(ang)], axis=-1)
    normals = np.stack([np.cos(ang), np.sin(ang)], axis=-1)
    beta = np.full(n_theta, dW ** (1.0 / 3.0))
    curvature = np.full(n_theta, 1.0 / R)
    return TFData(trap, lam, True, R, thetas, points, normals, beta, curvature,
                  ell0=2 * np.pi * R)


def _extract_contour(trap: Trap, lam: float, n_grid: int = 1024) -> np.ndarray:
    from skimage.measure import find_contours

    # bounding box from the maximal ray radius
    radii = [_outer_radius(trap, lam, np.cos(p), np.sin(p))
             for p in np.linspace(0, 2 * np.pi, 64, endpoint=False)]
    L = 1.3 * max(radii)
    ax = np.linspace(-L, L, n_grid)
    X, Y = np.meshgrid(ax, ax, indexing="ij")
    Wg = trap.W(np.stack([X, Y], axis=-1))
    contours = find_contours(Wg, lam)
    closed = [c for c in contours if np.allclose(c[0], c[-1])]
    if len(closed) != 1:
        raise TopologyError(f"expected one closed level curve, found {len(closed)}")
    c = closed[0]
    h = ax[1] - ax[0]
    pts = np.stack([ax[0] + c[:, 0] * h, ax[0] + c[:, 1] * h], axis=-1)
    return pts[:-1]  # drop duplicated endpoint


def _tfdata_general(trap: Trap, lam: float, n_theta: int) -> TFData:
    pts = _extract_contour(trap, lam)
    # positive orientation (counterclockwise): signed area > 0
    x, y = pts[:, 0], pts[:, 1]
    area2 = np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)
    if area2 < 0:
        pts = pts[::-1]
    # winding about the origin must be exactly one turn (simple closed check)
    ang = np.arctan2(pts[:, 1], pts[:, 0])
    winding = np.sum(np.mod(np.diff(np.concatenate([ang, ang[:1]])) + np.pi, 2 * np.pi) - np.pi)
    if abs(winding - 2 * np.pi) > 1e-6:
        raise TopologyError("extracted curve does not wind once about the origin")

    seg = np.linalg.norm(np.diff(np.vstack([pts, pts[:1]]), axis=0), axis=1)
    s_raw = np.concatenate([[0.0], np.cumsum(seg)])
    ell0 = s_raw[-1]
    closed = np.vstack([pts, pts[:1]])
    fx = CubicSpline(s_raw, closed[:, 0], bc_type="periodic")
    fy = CubicSpline(s_raw, closed[:, 1], bc_type="periodic")
    thetas = np.linspace(0.0, ell0, n_theta, endpoint=False)
    bx, by = fx(thetas), fy(thetas)
    points = np.stack([bx, by], axis=-1)
    tx, ty = fx(thetas, 1), fy(thetas, 1)
    tnorm = np.hypot(tx, ty)
    normals = np.stack([ty / tnorm, -tx / tnorm], axis=-1)
    grads = trap.grad_W(points)
    dn = np.einsum("ij,ij->i", grads, normals)
    if np.median(dn) < 0:
        normals = -normals
        dn = -dn
    if np.any(dn <= 0):
        raise ValueError("normal derivative of W is not positive on the boundary")
    beta = dn ** (1.0 / 3.0)
    curvature = _polyline_curvature(points, thetas, ell0)
    return TFData(trap, lam, False, None, thetas, points, normals, beta, curvature, ell0)


def _polyline_curvature(points: np.ndarray, thetas: np.ndarray, ell0: float) -> np.ndarray:
    """Curvature by 5-point local quadratic fit in arclength."""
    n = len(points)
    kap = np.empty(n)
    for i in range(n):
        idx = (np.arange(i - 2, i + 3)) % n
        s = thetas[idx].copy()
        # unwrap arclength across the seam
        s += ell0 * (np.arange(i - 2, i + 3) // n)
        s -= s[2]
        cx = np.polyfit(s, points[idx, 0], 2)
        cy = np.polyfit(s, points[idx, 1], 2)
        xp, xpp = cx[1], 2 * cx[0]
        yp, ypp = cy[1], 2 * cy[0]
        kap[i] = (xp * ypp - yp * xpp) / (xp * xp + yp * yp) ** 1.5
    return kap


def tf_density(tfdata: TFData) -> Callable:
    """Thomas-Fermi density sqrt((lambda - W)^+) as a callable on points."""

    def density(y):
        return np.sqrt(tfdata.a_plus(y))

    return density


def write_tfdata_csv(tfdata: TFData, path) -> None:
    """CSV export of (theta, boundary point, beta, curvature)."""
    with open(path, "w", encoding="utf-8") as f:
        f.write("theta,y1,y2,beta,k\n")
        for th, (y1, y2), b, k in zip(tfdata.thetas, tfdata.points,
                                      tfdata.beta, tfdata.curvature):
            f.write(f"{th:.17g},{y1:.17g},{y2:.17g},{b:.17g},{k:.17g}\n")

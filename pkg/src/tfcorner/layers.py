"""Matched inner/outer approximation of the ground state in physical
coordinates, its pointwise residual, and the closed-form asymptotic
predictions (corner-layer profile, energy coefficients, auxiliary-function
limits).

The approximation glues three pieces across the Thomas-Fermi boundary: the
modified outer profile sqrt(a + eps^{2/3} beta^2 chi [x + V^2]) deep inside,
the corner-layer profile eps^{1/3} beta V(x) near the boundary (blended over
the stretched window [-2L, -L]), and the cutoff-decayed layer profile
outside, identically zero beyond the outermost cutoff.  All cutoffs are C^2
quintic plateaus, so the residual of the glued field is well defined through
second derivatives.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from ._numutil import cumulative_integral, plateau_cutoff, ramp_down
from .errors import ParameterError
from .painleve import FULL_LINE, ProfileSolution
from .trap import TFData

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(40)


class FermiMap:
    """Signed-distance coordinates (t, theta) about the TF boundary curve.

    t < 0 inside the domain; theta is arclength.  The map is a local
    diffeomorphism for |t| below the reach of normals delta0; forward
    evaluation asserts this on the inward side (outward, the supported
    boundaries are convex so the nearest-point map stays valid).
    """

    def __init__(self, tfdata: TFData):
        self.tfdata = tfdata
        self.ell0 = tfdata.ell0
        kmax = float(np.max(np.abs(tfdata.curvature)))
        self.delta0 = 0.5 / kmax if kmax > 0 else np.inf
        if tfdata.radial:
            self.R = tfdata.R
        else:
            th = np.concatenate([tfdata.thetas, [self.ell0]])
            px = np.concatenate([tfdata.points[:, 0], [tfdata.points[0, 0]]])
            py = np.concatenate([tfdata.points[:, 1], [tfdata.points[0, 1]]])
            self._fx = CubicSpline(th, px, bc_type="periodic")
            self._fy = CubicSpline(th, py, bc_type="periodic")

    def forward(self, y):
        """(t, theta) for points with trailing axis (y1, y2)."""
        y = np.asarray(y, dtype=float)
        if self.tfdata.radial:
            r = np.hypot(y[..., 0], y[..., 1])
            phi = np.mod(np.arctan2(y[..., 1], y[..., 0]), 2.0 * np.pi)
            t = r - self.R
            theta = self.R * phi
        else:
            pts = self.tfdata.points
            flat = y.reshape(-1, 2)
            d2 = ((flat[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2)
            theta = self.tfdata.thetas[np.argmin(d2, axis=1)]
            for _ in range(8):  # Newton on (y - gamma).gamma' = 0
                gx, gy = self._fx(theta), self._fy(theta)
                tx, ty = self._fx(theta, 1), self._fy(theta, 1)
                txx, tyy = self._fx(theta, 2), self._fy(theta, 2)
                rx, ry = flat[:, 0] - gx, flat[:, 1] - gy
                g = rx * tx + ry * ty
                dg = -(tx * tx + ty * ty) + rx * txx + ry * tyy
                theta = np.mod(theta - g / dg, self.ell0)
            gx, gy = self._fx(theta), self._fy(theta)
            tx, ty = self._fx(theta, 1), self._fy(theta, 1)
            tn = np.hypot(tx, ty)
            nx, ny = ty / tn, -tx / tn
            rx, ry = flat[:, 0] - gx, flat[:, 1] - gy
            t = (rx * nx + ry * ny).reshape(y.shape[:-1])
            theta = theta.reshape(y.shape[:-1])
        if np.any(t < -self.delta0 * (1 + 1e-12)):
            raise ValueError("point beyond the inward reach of normal coordinates")
        return t, theta

    def inverse(self, t, theta):
        """Physical point gamma(theta) + t n(theta)."""
        t = np.asarray(t, dtype=float)
        theta = np.asarray(theta, dtype=float)
        if self.tfdata.radial:
            phi = theta / self.R
            r = self.R + t
            return np.stack([r * np.cos(phi), r * np.sin(phi)], axis=-1)
        th = np.mod(theta, self.ell0)
        gx, gy = self._fx(th), self._fy(th)
        tx, ty = self._fx(th, 1), self._fy(th, 1)
        tn = np.hypot(tx, ty)
        return np.stack([gx + t * ty / tn, gy - t * tx / tn], axis=-1)


@dataclass(eq=False)
class ApproxSolution:
    """The glued approximate ground state in physical coordinates.

    ``lambda_used`` records whether the geometry carries the TF chemical
    potential or a solved Lagrange multiplier.  Evaluator calls are pure and
    safe to run concurrently.
    """

    epsilon: float
    tfdata: TFData
    hm: ProfileSolution
    delta: float
    L: float
    fermi: FermiMap
    lambda_used: float
    _beta_min: float = field(init=False)

    def __post_init__(self):
        self._beta_min = float(np.min(self.tfdata.beta))

    # region thresholds: beyond these every cutoff sits on its plateau, so the
    # evaluator can bypass the Fermi map (inward it must, for |t| > delta0)
    @property
    def _t_far_in(self) -> float:
        return 3.0 * self.delta / self._beta_min

    @property
    def _t_far_out(self) -> float:
        return 20.5 * self.delta / self._beta_min

    def _a(self, y):
        return self.lambda_used - self.tfdata.trap.W(y)

    def pieces(self, t, theta):
        """(u_in, u_out_tilde, x) on Fermi coordinates (vectorized)."""
        t = np.asarray(t, dtype=float)
        beta = self.tfdata.beta_at(theta)
        e23 = self.epsilon ** (2.0 / 3.0)
        x = beta * t / e23
        V = self.hm(x)
        u_in = self.epsilon ** (1.0 / 3.0) * beta * V
        y = self.fermi.inverse(t, theta)
        a = self._a(y)
        chi = plateau_cutoff(beta * t, self.delta, 2.0 * self.delta)
        radicand = a + e23 * beta**2 * chi * (x + V * V)
        return u_in, radicand, x

    def _compose(self, t, theta, u_in, radicand, x):
        """Select the three-piece value; the outer radicand is only consulted
        where the glue weight is positive (x < -L)."""
        if np.any((radicand < 0) & (x < -self.L)):
            raise ParameterError("modified outer radicand negative; increase L")
        u_out = np.sqrt(np.maximum(radicand, 0.0))
        rho = ramp_down(x, -self.L, -2.0 * self.L)
        glue = u_in + rho * (u_out - u_in)
        beta = self.tfdata.beta_at(theta)
        outer_cut = plateau_cutoff(beta * t, 10.0 * self.delta, 20.0 * self.delta)
        return np.where(x <= -2.0 * self.L, u_out,
                        np.where(beta * t <= self.delta, glue, outer_cut * u_in))

    def evaluate_section(self, theta, t):
        """u_ap along a normal section theta = const (t is an array)."""
        t = np.asarray(t, dtype=float)
        th = np.full_like(t, float(theta))
        u_in, radicand, x = self.pieces(t, th)
        return self._compose(t, th, u_in, radicand, x)

    def __call__(self, y):
        """u_ap at physical points (any shape with trailing axis 2)."""
        y = np.asarray(y, dtype=float)
        flat = y.reshape(-1, 2)
        out = np.empty(len(flat))
        if self.tfdata.radial:
            t_hat = np.hypot(flat[:, 0], flat[:, 1]) - self.fermi.R
        else:
            pts = self.tfdata.points
            d2 = ((flat[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2)
            t_hat = np.sqrt(d2.min(axis=1))
            a_sign = np.where(self._a(flat) > 0, -1.0, 1.0)
            t_hat = t_hat * a_sign
        far = (t_hat < -self._t_far_in) | (t_hat > self._t_far_out)
        out[far] = np.sqrt(np.maximum(self._a(flat[far]), 0.0))
        near_idx = np.nonzero(~far)[0]
        if len(near_idx):
            t, theta = self.fermi.forward(flat[near_idx])
            u_in, radicand, x = self.pieces(t, theta)
            out[near_idx] = self._compose(t, theta, u_in, radicand, x)
        return out.reshape(y.shape[:-1])

    def residual_at(self, y, h: float | None = None):
        """Delta u_ap - eps^{-2} u_ap (u_ap^2 - a) by fourth-order differences.

        This is the physical-coordinate residual; under the stretching
        y -> eps^{-2/3} y the residual of the stretched equation equals
        eps^{4/3} times this value, which is the scaling the band estimates
        are stated in.
        """
        y = np.asarray(y, dtype=float)
        if h is None:
            h = 0.25 * self.epsilon
        box = self.tfdata.trap.r_far
        if np.any(np.abs(y) + 2 * h > box):
            raise ValueError("residual stencil crosses the computational box")
        flat = np.atleast_2d(y.reshape(-1, 2))
        coefs = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / (12.0 * h * h)
        offs = np.array([-2.0, -1.0, 0.0, 1.0, 2.0]) * h
        lap = np.zeros(len(flat))
        for axis in (0, 1):
            pts = np.repeat(flat[:, None, :], 5, axis=1)
            pts[:, :, axis] += offs[None, :]
            vals = self(pts.reshape(-1, 2)).reshape(-1, 5)
            lap += vals @ coefs
        u0 = self(flat)
        a0 = self._a(flat)
        res = lap - u0 * (u0 * u0 - a0) / self.epsilon**2
        return res.reshape(y.shape[:-1]) if y.ndim > 1 else float(res[0])


def default_delta(tfdata: TFData) -> float:
    """min(delta0, 0.1 R_eff) / 2 with delta0 from the reach of normals."""
    kmax = float(np.max(np.abs(tfdata.curvature)))
    delta0 = 0.5 / kmax if kmax > 0 else np.inf
    r_eff = tfdata.R if tfdata.radial else tfdata.ell0 / (2.0 * np.pi)
    return min(delta0, 0.1 * r_eff) / 2.0


def build_u_ap(tfdata: TFData, hm: ProfileSolution, epsilon: float,
               delta: float | None = None, L: float | None = None) -> ApproxSolution:
    """Assemble the glued approximation at the geometry's chemical potential.

    The glue window [-2L, -L] must sit inside the outer cutoff's plateau,
    i.e. delta eps^{-2/3} >= 4L; explicit arguments violating this raise
    ParameterError.  The default glue width is L = min(4, delta eps^{-2/3}/4):
    at desk-scale epsilon the stretched plateau is only a few units wide, so
    the nominal width 4 is shrunk to keep the construction consistent.  Also
    raises ParameterError when the modified outer radicand goes negative
    (L too small).
    """
    if hm.orientation != FULL_LINE:
        raise ValueError("the corner-layer profile must be a full-line solution")
    if delta is None:
        delta = default_delta(tfdata)
    if L is None:
        L = min(4.0, delta * epsilon ** (-2.0 / 3.0) / 4.0)
    if delta * epsilon ** (-2.0 / 3.0) < 4.0 * L:
        raise ParameterError(
            f"delta*eps^(-2/3) = {delta * epsilon ** (-2.0 / 3.0):.2f} < 4L = {4 * L}; "
            "epsilon too large for this cutoff geometry")
    approx = ApproxSolution(epsilon, tfdata, hm, delta, L, FermiMap(tfdata),
                            lambda_used=tfdata.lambda0)
    # radicand scan over the band where the outer piece is consulted
    for theta in tfdata.thetas[:: max(1, len(tfdata.thetas) // 32)]:
        beta = float(tfdata.beta_at(theta))
        t = np.linspace(-2.0 * delta / beta, 0.0, 200)
        approx.evaluate_section(theta, t)  # raises ParameterError on a bad radicand
    return approx


@dataclass(eq=False)
class PredictionBundle:
    """Closed-form asymptotic predictions derived from the geometry and the
    corner-layer profile."""

    epsilon: float
    tfdata: TFData
    hm: ProfileSolution
    c_minus2: float          # coefficient of eps^{-2} in the energy
    c_log: float             # coefficient of |ln eps|
    f_boundary: float        # limit of f_eps(R)/eps^{2/3}
    _tail: object = field(repr=False)
    _f0_spline: CubicSpline = field(repr=False)

    def inner(self, t, theta=0.0):
        """Corner-layer prediction eps^{1/3} beta(theta) V(beta t / eps^{2/3})."""
        beta = self.tfdata.beta_at(theta)
        return (self.epsilon ** (1.0 / 3.0) * beta
                * self.hm(beta * np.asarray(t, dtype=float) / self.epsilon ** (2.0 / 3.0)))

    def f_pred(self, r):
        """Boundary-layer form of the auxiliary function f_eps (radial)."""
        if not self.tfdata.radial:
            raise ValueError("f predictions require a radial geometry")
        R = self.tfdata.R
        beta = float(self.tfdata.beta[0])
        e23 = self.epsilon ** (2.0 / 3.0)
        xh = beta * (np.asarray(r, dtype=float) - R) / e23
        V = self.hm(xh)
        return R / beta * e23 * self._tail(xh) / V**2

    def f0(self, r):
        """Limit profile (1/A) int_r^R s A ds inside the支持, 0 beyond."""
        r = np.asarray(r, dtype=float)
        R = self.tfdata.R
        out = np.where(r < R, self._f0_spline(np.minimum(r, R)), 0.0)
        return out if out.ndim else float(out)


def _radial_moment(tfdata: TFData, power: int) -> float:
    """int (lambda - W)^{power,+} dy for radial and star-shaped geometries."""
    trap = tfdata.trap
    lam = tfdata.lambda0

    def ray(c, s):
        from .trap import _outer_radius
        rb = _outer_radius(trap, lam, c, s)
        half = rb / 2.0
        rr = half + half * _GL_NODES
        return half * np.sum(_GL_WEIGHTS * (lam - trap.W_ray(rr, c, s)) ** power * rr)

    if trap.is_radial:
        return 2.0 * np.pi * ray(1.0, 0.0)
    phis = np.linspace(0.0, 2 * np.pi, 256, endpoint=False)
    return float(np.mean([ray(np.cos(p), np.sin(p)) for p in phis]) * 2.0 * np.pi)


def predict(tfdata: TFData, hm: ProfileSolution, epsilon: float) -> PredictionBundle:
    """Asymptotic predictions: inner profile, two-term energy coefficients,
    and the auxiliary-function forms."""
    if hm.orientation != FULL_LINE:
        raise ValueError("predictions require the full-line profile")
    lam = tfdata.lambda0
    ap2 = _radial_moment(tfdata, 2)
    c_minus2 = lam / 2.0 - 0.25 * ap2
    beta3_mean = float(np.mean(tfdata.beta**3))
    c_log = beta3_mean * tfdata.ell0 / 12.0

    from .painleve import tail_mass
    tail = tail_mass(hm)
    if tfdata.radial:
        beta = float(tfdata.beta[0])
        V0 = float(hm(0.0))
        f_boundary = tfdata.R / beta / V0**2 * float(tail(0.0))
        rg = np.linspace(0.0, tfdata.R, 4001)
        A = lam - np.asarray(tfdata.trap.W_ray(rg), dtype=float)
        cum = cumulative_integral(rg, rg * A)
        integral = cum[-1] - cum
        with np.errstate(divide="ignore", invalid="ignore"):
            f0_vals = np.where(A > 0, integral / np.where(A > 0, A, 1.0), 0.0)
        f0_vals[-1] = 0.0
        f0_spline = CubicSpline(rg, f0_vals)
    else:
        f_boundary = float("nan")
        f0_spline = CubicSpline([0.0, 1.0], [0.0, 0.0])
    return PredictionBundle(epsilon, tfdata, hm, c_minus2, c_log, f_boundary,
                            _tail=tail, _f0_spline=f0_spline)


def residual(approx: ApproxSolution):
    """Curried residual evaluator y -> Delta u_ap - eps^{-2} u_ap (u_ap^2 - a)."""

    def res(y, h: float | None = None):
        return approx.residual_at(y, h=h)

    return res


def write_section_csv(approx: ApproxSolution, bundle: PredictionBundle, theta: float,
                      t_values: np.ndarray, path) -> None:
    """CSV of (t, theta, u_ap, inner prediction, sqrt(a+)) along a normal section."""
    u = approx.evaluate_section(theta, t_values)
    inner = bundle.inner(t_values, theta)
    y = approx.fermi.inverse(t_values, np.full_like(t_values, theta))
    sqa = np.sqrt(np.maximum(approx._a(y), 0.0))
    with open(path, "w", encoding="utf-8") as f:
        f.write("t,theta,u_ap,inner,sqrt_a_plus\n")
        for ti, ui, ii, si in zip(t_values, u, inner, sqa):
            f.write(f"{ti:.17g},{theta:.17g},{ui:.17g},{ii:.17g},{si:.17g}\n")

"""Ground states of the Gross-Pitaevskii energy under the unit-mass
constraint: a radial collocation-Newton solver with the Lagrange multiplier as
an augmented unknown, and a 2-D normalized-gradient-flow solver.

The radial solver discretizes  eps^2 (eta'' + eta'/r) + (lam - W) eta - eta^3
with second-order stencils on a graded grid (at least 200 nodes inside the
corner-layer band), solves the bordered system (eta, lam) by damped Newton,
then iterates the same Jacobian against fourth-order residuals so that the
converged state supports the tight Lagrange-multiplier tolerances downstream.
Quadratures (mass row, energies, auxiliary integrals) use fourth-order
corrected-trapezoid weights for the same reason.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.linalg import solve_banded

from ._numutil import (cumulative_integral, derivative_matrix, fd_weights,
                        quad_weights, smoothstep)
from .errors import SolverError, StagnationError
from .painleve import ProfileSolution
from .trap import Trap, TFData, compute_lambda0, _outer_radius

RADIAL = "radial"
GRID2D = "grid2d"

_ETA_FLOOR = 1e-30  # below this, eta^2 is treated as underflowed in f_eps


@dataclass(eq=False)
class GroundState:
    """Discretized minimizer with its Lagrange multiplier and diagnostics.

    ``residual`` is the sup of the discrete Euler-Lagrange residual in the
    eps^2-scaled form for the radial solver, and the L2 norm of the same
    quantity for the 2-D solver.  Energy parts are attached by ``energy``.
    Immutable after construction.
    """

    epsilon: float
    geometry: str
    grid: np.ndarray              # radial nodes, or the common 1-D axis in 2-D
    eta: np.ndarray               # values per node (1-D) or per cell (2-D)
    lambda_eps: float
    iterations: int
    residual: float
    trap: Trap
    R: float                      # TF radius at lambda0 (radial reference)
    lambda0: float
    eta_r: np.ndarray | None = None
    box_half: float | None = None
    energy_total: float | None = None
    energy_g1: float | None = None
    energy_constant: float | None = None
    _spline: CubicSpline | None = field(default=None, init=False, repr=False)

    def __post_init__(self):
        self.grid.setflags(write=False)
        self.eta.setflags(write=False)
        if self.eta_r is not None:
            self.eta_r.setflags(write=False)
        if self.geometry == RADIAL:
            self._spline = CubicSpline(self.grid, self.eta)

    def eta_at(self, r):
        """Radial profile at arbitrary radii (0 beyond the grid)."""
        if self.geometry != RADIAL:
            raise ValueError("eta_at is for radial states")
        r = np.asarray(r, dtype=float)
        out = np.where(r <= self.grid[-1], self._spline(np.minimum(r, self.grid[-1])), 0.0)
        return out if out.ndim else float(out)

    def mass(self) -> float:
        if self.geometry == RADIAL:
            w = quad_weights(self.grid)
            return float(w @ (2 * np.pi * self.grid * self.eta**2))
        dA = (2 * self.box_half / len(self.grid)) ** 2
        return float(np.sum(self.eta**2) * dA)


def layer_grid(r_max: float, R: float, epsilon: float, n: int) -> np.ndarray:
    """Graded radial grid with >= max(200, n/3) nodes in |r - R| <= 5 eps^{2/3}."""
    band = 5.0 * epsilon ** (2.0 / 3.0)
    w = band / 2.0
    ref = np.linspace(0.0, r_max, max(4 * n, 8001))
    target = max(200, n // 3)
    boost = 0.0
    for _ in range(60):
        dens = 1.0 + boost * np.exp(-0.5 * ((ref - R) / w) ** 2)
        cdf = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(ref))])
        grid = np.interp(np.linspace(0.0, cdf[-1], n), cdf, ref)
        if np.sum(np.abs(grid - R) <= band) >= target:
            grid[0], grid[-1] = 0.0, r_max
            return grid
        boost = (boost + 0.5) * 1.5
    raise ValueError("cannot satisfy the layer-resolution requirement; increase n")


def _initial_guess(r: np.ndarray, lam0: float, R: float, epsilon: float,
                   trap: Trap, profile: ProfileSolution | None) -> np.ndarray:
    """Smoothed TF density; blended with the corner-layer prediction when a
    full-line profile is supplied, else a cubic ramp."""
    tf = np.sqrt(np.maximum(lam0 - trap.W_ray(r), 0.0))
    b = 3.0 * epsilon ** (2.0 / 3.0)
    if profile is not None:
        beta = float(trap.dW_ray(R)) ** (1.0 / 3.0)
        inner = epsilon ** (1.0 / 3.0) * beta * profile(beta * (r - R) / epsilon ** (2.0 / 3.0))
        s = smoothstep((r - (R - b)) / (2.0 * b))
        return (1.0 - s) * tf + s * np.maximum(inner, 0.0)
    ramp = 1.0 - smoothstep((r - (R - b)) / (2.0 * b))
    return np.maximum(tf * ramp, 0.0) + 1e-8


def solve_radial(trap: Trap, epsilon: float, r_max: float | None = None,
                 n: int = 3000, *, profile: ProfileSolution | None = None,
                 warm: GroundState | None = None) -> GroundState:
    """Radial ground state by bordered Newton on (eta, lambda).

    Unknowns are the nodal values and the Lagrange multiplier; the mass row
    carries the quadrature weights.  eta'(0) = 0 and eta(r_max) = 0; r_max
    defaults to max(1.5 R, the radius where W = lambda0 + 1.2), keeping the
    Dirichlet truncation below quadrature error.
    """
    if trap.kind == "harmonic" and trap.params["aniso"] != 1.0:
        raise ValueError("radial solver needs a radial trap")
    if not 1e-3 <= epsilon <= 0.5:
        raise ValueError("epsilon outside [1e-3, 0.5]")
    if n < 2000:
        raise ValueError("need n >= 2000")
    lam0 = compute_lambda0(trap)
    R = _outer_radius(trap, lam0, 1.0, 0.0)
    if r_max is None:
        # cover the exterior-decay fit window [R + 3 eps^{2/3}, R + 10 eps^{2/3}]
        # and keep the Dirichlet truncation below quadrature error
        r_max = max(1.5 * R, _outer_radius(trap, lam0 + 1.2, 1.0, 0.0),
                    R + 10.5 * epsilon ** (2.0 / 3.0))
    if r_max < 1.5 * R:
        raise ValueError("r_max must be at least 1.5 R")

    r = layer_grid(r_max, R, epsilon, n)
    Wr = np.asarray(trap.W_ray(r), dtype=float)
    wq = quad_weights(r)
    mass_row = 2.0 * np.pi * wq * r

    if warm is not None:
        eta = np.maximum(warm.eta_at(r), 0.0)
        lam = warm.lambda_eps
    else:
        eta = _initial_guess(r, lam0, R, epsilon, trap, profile)
        lam = lam0
    eta = eta / np.sqrt(mass_row @ eta**2)

    eta, lam, iters, resid = _radial_newton(r, Wr, mass_row, eta, lam, epsilon)
    off, w1 = derivative_matrix(r, 1, stencil=5)
    cols = off[:, None] + np.arange(5)[None, :]
    eta_r = np.einsum("ij,ij->i", w1, eta[cols])
    return GroundState(epsilon, RADIAL, r, eta, lam, iters, resid, trap, R, lam0,
                       eta_r=eta_r)


def _radial_newton(r, Wr, mass_row, eta, lam, epsilon, tol: float = 5e-11):
    n = len(r)
    hm = r[1:-1] - r[:-2]
    hp = r[2:] - r[1:-1]
    a2m = 2.0 / (hm * (hm + hp))
    a2c = -2.0 / (hm * hp)
    a2p = 2.0 / (hp * (hm + hp))
    a1m = -hp / (hm * (hm + hp))
    a1c = (hp - hm) / (hm * hp)
    a1p = hm / (hp * (hm + hp))
    rin = r[1:-1]
    off5_2, w5_2 = derivative_matrix(r, 2, stencil=5)
    off5_1, w5_1 = derivative_matrix(r, 1, stencil=5)
    cols2 = off5_2[:, None] + np.arange(5)[None, :]
    cols1 = off5_1[:, None] + np.arange(5)[None, :]
    w_neu = fd_weights(r[:5], r[0], 1)

    eps2 = epsilon * epsilon

    def interior(eta_, lam_, order4: bool):
        if order4:
            d2 = np.einsum("ij,ij->i", w5_2, eta_[cols2])[1:-1]
            d1 = np.einsum("ij,ij->i", w5_1, eta_[cols1])[1:-1]
        else:
            d2 = a2m * eta_[:-2] + a2c * eta_[1:-1] + a2p * eta_[2:]
            d1 = a1m * eta_[:-2] + a1c * eta_[1:-1] + a1p * eta_[2:]
        return eps2 * (d2 + d1 / rin) + (lam_ - Wr[1:-1]) * eta_[1:-1] - eta_[1:-1] ** 3

    def full_resid(eta_, lam_, order4: bool):
        F = np.empty(n + 1)
        F[0] = w_neu @ eta_[:5]
        F[1:-2] = interior(eta_, lam_, order4)
        F[n - 1] = eta_[-1]
        F[n] = mass_row @ eta_**2 - 1.0
        return F

    def norm(F):
        return float(np.max(np.abs(F)))

    iters = 0
    restarts = 0
    for phase, order4 in enumerate((False, True)):
        F = full_resid(eta, lam, order4)
        best = norm(F)
        for _ in range(80):
            if best <= tol:
                break
            ab = np.zeros((9, n))
            idx = np.arange(1, n - 1)
            ab[4, idx] = eps2 * (a2c + a1c / rin) + (lam - Wr[1:-1]) - 3.0 * eta[1:-1] ** 2
            ab[5, idx - 1] = eps2 * (a2m + a1m / rin)
            ab[3, idx + 1] = eps2 * (a2p + a1p / rin)
            for k in range(5):
                ab[4 - k, k] += w_neu[k]
            ab[4, n - 1] += 1.0
            b = np.zeros(n)
            b[1:-1] = eta[1:-1]
            c = 2.0 * mass_row * eta
            x1 = solve_banded((4, 4), ab, -F[:n])
            x2 = solve_banded((4, 4), ab, b)
            denom = c @ x2
            dlam = (c @ x1 + F[n]) / denom
            deta = x1 - dlam * x2
            s = 1.0
            accepted = False
            for _ in range(40):
                eta_new = eta + s * deta
                lam_new = lam + s * dlam
                F_new = full_resid(eta_new, lam_new, order4)
                if norm(F_new) < best:
                    accepted = True
                    break
                s *= 0.5
            if not accepted:
                if best <= 1e-9:
                    break
                raise SolverError(f"radial Newton stalled at residual {best:.3e}")
            # a genuine interior collapse, not sub-noise tail sign flutter
            if np.any(eta_new[1:-1] < -1e-12 * eta_new.max()):
                restarts += 1
                if restarts > 3:
                    raise SolverError("eta touched zero in the interior repeatedly")
                eta = np.maximum(eta_new, 1e-8)
                eta /= np.sqrt(mass_row @ eta**2)
                F = full_resid(eta, lam_new, order4)
                best = norm(F)
                lam = lam_new
                continue
            eta, lam, F, best = eta_new, lam_new, F_new, norm(F_new)
            iters += 1
        else:
            raise SolverError(f"radial Newton did not converge: residual {best:.3e}")
    eta[-1] = 0.0
    # far-tail magnitudes below the solve's noise floor carry arbitrary sign;
    # take the positive representative so interior positivity is meaningful
    tiny = 1e-16 * eta.max()
    np.abs(eta, out=eta, where=np.abs(eta) < tiny)
    resid = float(np.max(np.abs(interior(eta, lam, True))))
    return eta, lam, iters, resid


def solve_radial_ladder(trap: Trap, eps_list, n: int = 3000, *,
                        r_max: float | None = None,
                        profile: ProfileSolution | None = None) -> list[GroundState]:
    """Solve a descending epsilon ladder, warm-starting each from the last."""
    eps_sorted = sorted(eps_list, reverse=True)
    out = []
    warm = None
    for eps in eps_sorted:
        state = solve_radial(trap, eps, r_max=r_max, n=n, profile=profile, warm=warm)
        out.append(state)
        warm = state
    order = np.argsort([-s.epsilon for s in out])
    by_eps = {s.epsilon: s for s in out}
    return [by_eps[e] for e in sorted(eps_list, reverse=True)]


# -- 2-D normalized gradient flow --------------------------------------------


def _fd_grad2_sum(u: np.ndarray, h: float) -> float:
    """sum |grad u|^2 dA with periodic forward differences; matches the
    summation-by-parts adjoint of the 5-point Laplacian exactly."""
    dx = (np.roll(u, -1, axis=0) - u) / h
    dy = (np.roll(u, -1, axis=1) - u) / h
    return float(np.sum(dx * dx + dy * dy) * h * h)


def _fd_laplacian(u: np.ndarray, h: float) -> np.ndarray:
    return (np.roll(u, -1, 0) + np.roll(u, 1, 0) + np.roll(u, -1, 1)
            + np.roll(u, 1, 1) - 4.0 * u) / (h * h)


def solve_2d(trap: Trap, epsilon: float, box_half: float | None = None,
             n: int = 256, *, resid_tol: float = 1e-6,
             energy_tol: float = 1e-12, max_steps: int = 200_000) -> GroundState:
    """Ground state on a square grid by the normalized gradient flow.

    Splitting steps (exact pointwise relaxation of the potential/interaction
    part, exact spectral diffusion) with renormalization to unit mass after
    every step; the time step starts at 0.5 eps^2 and is halved whenever the
    energy fails to decrease.  The flow's fixed-point bias is first order in
    the step, so once the per-step relative energy change falls below
    ``energy_tol`` the state is polished by a bordered Newton solve of the
    five-point discretization (same structure as the radial solver), which
    drives the discrete Euler-Lagrange residual far below ``resid_tol`` and
    yields the Lagrange multiplier directly.
    """
    if not 5e-3 <= epsilon <= 0.5:
        raise ValueError("epsilon outside [5e-3, 0.5]")
    if n < 256:
        raise ValueError("need at least 256 points per axis")
    lam0 = compute_lambda0(trap)
    R = _outer_radius(trap, lam0, 1.0, 0.0)
    extent = R if trap.is_radial else 1.25 * R
    if box_half is None:
        box_half = 1.6 * extent
    if box_half < 1.5 * extent:
        raise ValueError("box_half below 1.5x the TF extent")

    h = 2.0 * box_half / n
    ax = -box_half + h * (np.arange(n) + 0.5)
    X, Y = np.meshgrid(ax, ax, indexing="ij")
    Wg = trap.W(np.stack([X, Y], axis=-1))
    dA = h * h
    k = 2.0 * np.pi * np.fft.fftfreq(n, d=h)
    K2 = k[:, None] ** 2 + k[None, :] ** 2

    rad = np.hypot(X, Y)
    b = 3.0 * epsilon ** (2.0 / 3.0)
    eta = np.sqrt(np.maximum(lam0 - Wg, 0.0)) * (1.0 - smoothstep((rad - (R - b)) / (2.0 * b)))
    eta = eta + 1e-6
    eta /= np.sqrt(np.sum(eta**2) * dA)

    inv_eps2 = 1.0 / epsilon**2

    def total_energy(u):
        return (0.5 * _fd_grad2_sum(u, h)
                + np.sum(0.25 * inv_eps2 * u**4 + 0.5 * inv_eps2 * Wg * u**2) * dA)

    def relax_potential(u, tau):
        # exact solution of u_t = -(W u + u^3)/eps^2 over tau
        decay = np.exp(-Wg * inv_eps2 * tau)
        aW = Wg * inv_eps2
        grow = np.where(aW > 1e-300,
                        inv_eps2 * u**2 * (1.0 - np.exp(-2.0 * aW * tau)) / np.where(aW > 0, aW, 1.0),
                        2.0 * inv_eps2 * u**2 * tau)
        return u * decay / np.sqrt(1.0 + grow)

    dt = 0.5 * epsilon**2
    E = total_energy(eta)
    steps = 0
    check = 50
    while steps < max_steps:
        diff = np.exp(-K2 * dt)
        for _ in range(check):
            eta = relax_potential(eta, dt / 2.0)
            eta = np.real(np.fft.ifft2(diff * np.fft.fft2(eta)))
            eta = relax_potential(eta, dt / 2.0)
            eta = np.abs(eta)
            eta /= np.sqrt(np.sum(eta**2) * dA)
            steps += 1
        E_new = total_energy(eta)
        per_step = abs(E_new - E) / (check * max(abs(E_new), 1.0))
        if E_new > E * (1.0 + 1e-15):
            dt *= 0.5
            if dt < 1e-10:
                raise StagnationError("2-D flow time step collapsed below 1e-10")
        E = E_new
        if per_step <= energy_tol:
            break
    else:
        raise SolverError(f"2-D flow did not converge within {max_steps} steps")

    eta, lam, newton_iters, resid = _polish_2d(eta, Wg, h, epsilon, dA)
    if resid > resid_tol:
        raise SolverError(f"2-D Euler-Lagrange residual {resid:.2e} above {resid_tol:.0e}")
    return GroundState(epsilon, GRID2D, ax, eta, lam, steps + newton_iters, resid,
                       trap, R, lam0, box_half=box_half)


def _polish_2d(eta: np.ndarray, Wg: np.ndarray, h: float, epsilon: float, dA: float,
               tol: float = 1e-9, max_iter: int = 12):
    """Bordered Newton for the five-point discretization with the mass row."""
    import scipy.sparse as sp
    import scipy.sparse.linalg as spla

    n = eta.shape[0]
    N = n * n
    eps2 = epsilon * epsilon
    lam = (eps2 * _fd_grad2_sum(eta, h) + np.sum((Wg * eta**2 + eta**4)) * dA)

    e = np.ones(n)
    ring = sp.diags([e[:-1], e[:-1]], [-1, 1], shape=(n, n), format="lil")
    ring[0, -1] = 1.0
    ring[-1, 0] = 1.0
    ring = ring.tocsr()
    eye = sp.identity(n, format="csr")
    lap = (sp.kron(ring, eye) + sp.kron(eye, ring)
           - 4.0 * sp.identity(N, format="csr")) / (h * h)

    def resid(u, l):
        F = eps2 * _fd_laplacian(u, h) + (l - Wg) * u - u**3
        m = np.sum(u**2) * dA - 1.0
        return F, m

    def norm(F, m):
        return max(float(np.sqrt(np.sum(F**2) * dA)), abs(m))

    iters = 0
    F, m = resid(eta, lam)
    best = norm(F, m)
    for _ in range(max_iter):
        if best <= tol:
            break
        A = eps2 * lap + sp.diags((lam - Wg - 3.0 * eta**2).ravel())
        lu = spla.splu(A.tocsc())
        x1 = lu.solve(-F.ravel())
        x2 = lu.solve(eta.ravel())
        c = 2.0 * dA * eta.ravel()
        dlam = (c @ x1 + m) / (c @ x2)
        deta = (x1 - dlam * x2).reshape(n, n)
        s = 1.0
        for _ in range(30):
            F_new, m_new = resid(eta + s * deta, lam + s * dlam)
            if norm(F_new, m_new) < best:
                break
            s *= 0.5
        else:
            break
        eta = eta + s * deta
        lam = lam + s * dlam
        F, m, best = F_new, m_new, norm(F_new, m_new)
        iters += 1
    resid_l2 = float(np.sqrt(np.sum(F**2) * dA))
    return eta, float(lam), iters, resid_l2


# -- energy and auxiliary functions -------------------------------------------


@dataclass(frozen=True)
class EnergyParts:
    total: float
    g1: float
    constant: float


def energy(state: GroundState, tfdata: TFData) -> EnergyParts:
    """Energy of the state: total from the defining functional, plus the
    split into the layer part g1 and the constant part; total = g1 + constant
    holds identically at unit discrete mass.  Results are attached to the
    state."""
    lam0 = tfdata.lambda0
    inv_eps2 = 1.0 / state.epsilon**2
    if state.geometry == RADIAL:
        r, eta = state.grid, state.eta
        w = quad_weights(r) * 2.0 * np.pi * r
        Wr = np.asarray(state.trap.W_ray(r), dtype=float)
        grad2 = state.eta_r**2
        Ap = np.maximum(lam0 - Wr, 0.0)
        Am = np.maximum(Wr - lam0, 0.0)
    else:
        n = len(state.grid)
        h = 2.0 * state.box_half / n
        eta = state.eta
        grad2_int = _fd_grad2_sum(eta, h)  # matches the 2-D solver's operator
        X, Y = np.meshgrid(state.grid, state.grid, indexing="ij")
        Wr = state.trap.W(np.stack([X, Y], axis=-1))
        Ap = np.maximum(lam0 - Wr, 0.0)
        Am = np.maximum(Wr - lam0, 0.0)
        w = np.full_like(eta, h * h)

    if state.geometry == RADIAL:
        total = float(w @ (0.5 * grad2 + 0.25 * inv_eps2 * eta**4 + 0.5 * inv_eps2 * Wr * eta**2))
        g1 = float(w @ (0.5 * grad2 + 0.25 * inv_eps2 * (eta**2 - Ap) ** 2
                        + 0.5 * inv_eps2 * Am * eta**2))
        ap2 = float(w @ Ap**2)
    else:
        total = float(0.5 * grad2_int
                      + np.sum(w * (0.25 * inv_eps2 * eta**4 + 0.5 * inv_eps2 * Wr * eta**2)))
        g1 = float(0.5 * grad2_int
                   + np.sum(w * (0.25 * inv_eps2 * (eta**2 - Ap) ** 2
                                 + 0.5 * inv_eps2 * Am * eta**2)))
        ap2 = float(np.sum(w * Ap**2))
    constant = 0.5 * inv_eps2 * (lam0 - 0.5 * ap2)
    state.energy_total, state.energy_g1, state.energy_constant = total, g1, constant
    return EnergyParts(total, g1, constant)


@dataclass(eq=False)
class XiF:
    """Radial auxiliary functions: xi(r) = int_r^rmax s eta^2 ds and
    f = xi / eta^2 where eta^2 stays above the underflow floor (flagged
    beyond)."""

    r: np.ndarray
    xi: np.ndarray
    f: np.ndarray
    flagged: np.ndarray


def xi_f(state: GroundState) -> XiF:
    if state.geometry != RADIAL:
        raise ValueError("xi/f are radial-state quantities")
    r, eta = state.grid, state.eta
    cum = cumulative_integral(r, r * eta**2)
    xi = cum[-1] - cum
    eta2 = eta**2
    flagged = eta2 <= _ETA_FLOOR
    f = np.where(flagged, np.nan, xi / np.where(flagged, 1.0, eta2))
    return XiF(r, xi, f, flagged)


# -- persistence ---------------------------------------------------------------


def write_state(state: GroundState, csv_path, sidecar_path=None) -> None:
    """CSV export with a JSON sidecar carrying the scalars.

    Radial states write (r, eta, eta_r, W); 2-D states write the values
    flattened row-major alongside axis metadata in the sidecar.
    """
    meta = {
        "epsilon": state.epsilon,
        "geometry": state.geometry,
        "lambda_eps": state.lambda_eps,
        "lambda0": state.lambda0,
        "R": state.R,
        "iterations": state.iterations,
        "residual": state.residual,
        "trap_kind": state.trap.kind,
        "trap_params": state.trap.params,
    }
    if state.geometry == RADIAL:
        Wr = np.asarray(state.trap.W_ray(state.grid), dtype=float)
        with open(csv_path, "w", encoding="utf-8") as fh:
            fh.write("r,eta,eta_r,W\n")
            for ri, e, er, wv in zip(state.grid, state.eta, state.eta_r, Wr):
                fh.write(f"{ri:.17g},{e:.17g},{er:.17g},{wv:.17g}\n")
    else:
        meta.update({"box_half": state.box_half, "n": len(state.grid)})
        with open(csv_path, "w", encoding="utf-8") as fh:
            fh.write("eta\n")
            for v in state.eta.ravel(order="C"):
                fh.write(f"{v:.17g}\n")
    if sidecar_path is not None:
        with open(sidecar_path, "w", encoding="utf-8") as fh:
            json.dump(meta, fh, sort_keys=True, indent=1)
            fh.write("\n")


def read_state(csv_path, sidecar_path, trap: Trap) -> GroundState:
    """Rebuild a GroundState from its CSV/sidecar export."""
    with open(sidecar_path, encoding="utf-8") as fh:
        meta = json.load(fh)
    if meta["geometry"] == RADIAL:
        data = np.loadtxt(csv_path, delimiter=",", skiprows=1)
        return GroundState(meta["epsilon"], RADIAL, data[:, 0].copy(), data[:, 1].copy(),
                           meta["lambda_eps"], meta["iterations"], meta["residual"],
                           trap, meta["R"], meta["lambda0"], eta_r=data[:, 2].copy())
    n = meta["n"]
    vals = np.loadtxt(csv_path, skiprows=1).reshape(n, n)
    h = 2.0 * meta["box_half"] / n
    ax = -meta["box_half"] + h * (np.arange(n) + 0.5)
    return GroundState(meta["epsilon"], GRID2D, ax, vals, meta["lambda_eps"],
                       meta["iterations"], meta["residual"], trap, meta["R"],
                       meta["lambda0"], box_half=meta["box_half"])

"""Shared low-level numerics: finite-difference weights, high-order quadrature
weights on nonuniform grids, and smooth cutoff profiles.

Everything here is deterministic and purely functional; these helpers back the
solver modules and are not part of the public API.
"""

from __future__ import annotations

import numpy as np


def fd_weights(x: np.ndarray, x0: float, m: int) -> np.ndarray:
    """Finite-difference weights for the m-th derivative at x0 on nodes x.

    Fornberg's recursion; exact for polynomials of degree len(x)-1.
    """
    x = np.asarray(x, dtype=float)
    n = len(x)
    if m >= n:
        raise ValueError("need at least m+1 nodes for the m-th derivative")
    c = np.zeros((n, m + 1))
    c1 = 1.0
    c4 = x[0] - x0
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, m)
        c2 = 1.0
        c5 = c4
        c4 = x[i] - x0
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, m]


def derivative_matrix(x: np.ndarray, m: int, stencil: int = 5):
    """Banded m-th derivative operator on the (possibly nonuniform) grid x.

    Returns (offsets, weights) where weights[i] applies to
    x[offsets[i] : offsets[i] + stencil]; one-sided near the ends.
    """
    x = np.asarray(x, dtype=float)
    n = len(x)
    if n < stencil:
        raise ValueError("grid shorter than stencil")
    half = stencil // 2
    offsets = np.clip(np.arange(n) - half, 0, n - stencil)
    wts = np.empty((n, stencil))
    for i in range(n):
        j = offsets[i]
        wts[i] = fd_weights(x[j : j + stencil], x[i], m)
    return offsets, wts


def apply_stencil(offsets: np.ndarray, wts: np.ndarray, f: np.ndarray) -> np.ndarray:
    stencil = wts.shape[1]
    cols = offsets[:, None] + np.arange(stencil)[None, :]
    return np.einsum("ij,ij->i", wts, f[cols])


def differentiate(x: np.ndarray, f: np.ndarray, m: int = 1, stencil: int = 5) -> np.ndarray:
    """m-th derivative of samples f on grid x via local polynomial stencils."""
    off, wts = derivative_matrix(x, m, stencil)
    return apply_stencil(off, wts, f)


def quad_weights(x: np.ndarray) -> np.ndarray:
    """Fourth-order quadrature weights on a nonuniform grid.

    Piecewise-Hermite corrected trapezoid: on each interval
    int f = h/2 (f_i + f_{i+1}) + h^2/12 (f'_i - f'_{i+1}),
    with f' taken from 5-point finite differences.  The result is a single
    weight vector, so integral constraints stay linear in the nodal values.
    """
    x = np.asarray(x, dtype=float)
    n = len(x)
    h = np.diff(x)
    w = np.zeros(n)
    w[:-1] += h / 2
    w[1:] += h / 2
    # q_j multiplies f'_j: +h_j^2/12 from the interval on the right,
    # -h_{j-1}^2/12 from the interval on the left.
    q = np.zeros(n)
    q[:-1] += h**2 / 12
    q[1:] -= h**2 / 12
    off, wts = derivative_matrix(x, 1, stencil=5)
    cols = off[:, None] + np.arange(5)[None, :]
    np.add.at(w, cols, q[:, None] * wts)
    return w


def cumulative_integral(x: np.ndarray, f: np.ndarray) -> np.ndarray:
    """Cumulative integral of f from x[0], fourth order (Hermite-corrected)."""
    x = np.asarray(x, dtype=float)
    f = np.asarray(f, dtype=float)
    h = np.diff(x)
    df = differentiate(x, f)
    seg = h / 2 * (f[:-1] + f[1:]) + h**2 / 12 * (df[:-1] - df[1:])
    out = np.empty(len(x))
    out[0] = 0.0
    np.cumsum(seg, out=out[1:])
    return out


def smoothstep(u):
    """Quintic smoothstep: 0 at u<=0, 1 at u>=1, C^2 at both ends."""
    u = np.clip(u, 0.0, 1.0)
    return u**3 * (10.0 + u * (-15.0 + 6.0 * u))


def plateau_cutoff(t, inner: float, outer: float):
    """C^2 bump in |t|: identically 1 for |t| <= inner, 0 for |t| >= outer."""
    if not outer > inner > 0:
        raise ValueError("need 0 < inner < outer")
    a = np.abs(np.asarray(t, dtype=float))
    return 1.0 - smoothstep((a - inner) / (outer - inner))


def ramp_down(x, hi: float, lo: float):
    """C^2 transition equal to 1 for x <= lo and 0 for x >= hi (lo < hi)."""
    if not hi > lo:
        raise ValueError("need lo < hi")
    return 1.0 - smoothstep((np.asarray(x, dtype=float) - lo) / (hi - lo))

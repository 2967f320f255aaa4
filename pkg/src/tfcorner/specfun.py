"""Airy functions Ai, Bi and derivatives on the real line.

No special-function library is used: the evaluator combines the Maclaurin
series of y'' = x y (exact constants at the origin), classical asymptotic
expansions on both ends, and stable Taylor marching across the gap where
neither is accurate to full precision.  Accuracy target: relative error
<= 1e-10 for |x| <= 20, <= 1e-8 for the decaying Ai beyond.

Evaluation regions
------------------
x <= -7          oscillatory asymptotic expansions
-7 < x <= 3.5    Maclaurin series about 0
3.5 < x < 9      Ai, Ai': Taylor march leftward from x = 12 (seeded by the
                 asymptotics; the decaying solution is stable in that
                 direction).  Bi, Bi': Taylor march rightward from 3.5.
x >= 9           exponential asymptotic expansions

Ai underflows below 1e-300 around x ~ 102 and Bi overflows around x ~ 104;
both cases are flagged on the returned value rather than raised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_SQRT_PI = math.sqrt(math.pi)

# Exact values at the origin, from the closed forms 3^{-2/3}/Gamma(2/3) etc.
AI0 = 3.0 ** (-2.0 / 3.0) / math.gamma(2.0 / 3.0)
AIP0 = -(3.0 ** (-1.0 / 3.0)) / math.gamma(1.0 / 3.0)
BI0 = 3.0 ** (-1.0 / 6.0) / math.gamma(2.0 / 3.0)
BIP0 = 3.0 ** (1.0 / 6.0) / math.gamma(1.0 / 3.0)

_SERIES_EDGE = 3.5
_NEG_EDGE = -7.0
_POS_EDGE = 9.0
_MARCH_SEED = 12.0
_UNDERFLOW = 1e-300
_LOG_MAX = math.log(8.9e307)


@dataclass(frozen=True)
class AiryValues:
    """Ai, Bi and derivatives at one point.

    ``underflow`` marks an Ai value below 1e-300 returned as 0;
    ``overflow`` marks a Bi value beyond float range returned as inf.
    """

    x: float
    ai: float
    ai_prime: float
    bi: float
    bi_prime: float
    underflow: bool = False
    overflow: bool = False


def _taylor_pair(x0: float, y: float, yp: float, h: float, nterms: int = 40):
    """Advance a solution of y'' = x y from x0 to x0 + h by local Taylor series."""
    a = np.zeros(nterms)
    a[0] = y
    a[1] = yp
    a[2] = x0 * y / 2.0
    for k in range(1, nterms - 2):
        a[k + 2] = (x0 * a[k] + a[k - 1]) / ((k + 1) * (k + 2))
    val = 0.0
    der = 0.0
    for k in range(nterms - 1, -1, -1):
        val = val * h + a[k]
    for k in range(nterms - 1, 0, -1):
        der = der * h + k * a[k]
    return val, der


def _march(x0: float, y: float, yp: float, x1: float, step: float = 0.5):
    """March (y, y') of y'' = x y from x0 to x1 in bounded Taylor steps."""
    n = max(1, int(math.ceil(abs(x1 - x0) / step)))
    h = (x1 - x0) / n
    x = x0
    for _ in range(n):
        y, yp = _taylor_pair(x, y, yp, h)
        x += h
    return y, yp


def _maclaurin(x: float):
    """All four values from the Maclaurin series of the two ODE solutions.

    Large |x| is reached by re-centered Taylor steps: a single series from 0
    has intermediate terms up to ~1e4 near |x| = 7 and loses ~6 digits to
    roundoff, while half-unit steps stay at machine precision.
    """
    # y1: y(0)=1, y'(0)=0 ; y2: y(0)=0, y'(0)=1
    if abs(x) <= 1.5:
        y1, y1p = _taylor_pair(0.0, 1.0, 0.0, x)
        y2, y2p = _taylor_pair(0.0, 0.0, 1.0, x)
    else:
        y1, y1p = _march(0.0, 1.0, 0.0, x)
        y2, y2p = _march(0.0, 0.0, 1.0, x)
    ai = AI0 * y1 + AIP0 * y2
    aip = AI0 * y1p + AIP0 * y2p
    bi = BI0 * y1 + BIP0 * y2
    bip = BI0 * y1p + BIP0 * y2p
    return ai, aip, bi, bip


def _asym_coeffs(nmax: int = 26):
    u = [1.0]
    v = [1.0]
    for k in range(1, nmax):
        uk = u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / (216.0 * k * (2 * k - 1))
        u.append(uk)
        v.append(uk * (6 * k + 1) / (1 - 6 * k))
    return np.array(u), np.array(v)


_UK, _VK = _asym_coeffs()


def _asym_sums(zeta: float, alternating: bool):
    """Truncate the asymptotic series at its smallest term."""
    sign = -1.0 if alternating else 1.0
    su = 0.0
    sv = 0.0
    term_prev = math.inf
    powers = 1.0
    for k in range(len(_UK)):
        tu = _UK[k] * powers
        if abs(tu) > term_prev:
            break
        su += (sign**k) * tu
        sv += (sign**k) * _VK[k] * powers
        term_prev = abs(tu)
        powers /= zeta
    return su, sv


def _asym_positive(x: float):
    """Exponential expansions for x >= _POS_EDGE; works in log space for Bi."""
    zeta = 2.0 / 3.0 * x**1.5
    su_m, sv_m = _asym_sums(zeta, alternating=True)
    su_p, sv_p = _asym_sums(zeta, alternating=False)
    q = 0.25 * math.log(x)
    log_ai = -zeta - q - math.log(2 * _SQRT_PI)
    underflow = log_ai < math.log(_UNDERFLOW)
    if underflow:
        ai, aip = 0.0, 0.0
    else:
        ai = math.exp(log_ai) * su_m
        aip = -math.exp(-zeta + q - math.log(2 * _SQRT_PI)) * sv_m
    log_bi = zeta - q - math.log(_SQRT_PI)
    overflow = log_bi > _LOG_MAX
    if overflow:
        bi, bip = math.inf, math.inf
    else:
        bi = math.exp(log_bi) * su_p
        bip = math.exp(zeta + q - math.log(_SQRT_PI)) * sv_p
    return ai, aip, bi, bip, underflow, overflow


def _asym_negative(x: float):
    """Oscillatory expansions for x <= _NEG_EDGE."""
    z = -x
    xi = 2.0 / 3.0 * z**1.5
    cu = np.zeros(len(_UK))
    cv = np.zeros(len(_UK))
    powers = 1.0
    term_prev = math.inf
    kmax = 0
    for k in range(len(_UK)):
        t = _UK[k] * powers
        if abs(t) > term_prev:
            break
        cu[k] = t
        cv[k] = _VK[k] * powers
        term_prev = abs(t)
        powers /= xi
        kmax = k
    s_even_u = sum((-1.0) ** j * cu[2 * j] for j in range(kmax // 2 + 1))
    s_odd_u = sum((-1.0) ** j * cu[2 * j + 1] for j in range((kmax - 1) // 2 + 1))
    s_even_v = sum((-1.0) ** j * cv[2 * j] for j in range(kmax // 2 + 1))
    s_odd_v = sum((-1.0) ** j * cv[2 * j + 1] for j in range((kmax - 1) // 2 + 1))
    ang = xi + math.pi / 4.0
    zq = z**0.25
    ai = (math.sin(ang) * s_even_u - math.cos(ang) * s_odd_u) / (_SQRT_PI * zq)
    bi = (math.cos(ang) * s_even_u + math.sin(ang) * s_odd_u) / (_SQRT_PI * zq)
    aip = -zq / _SQRT_PI * (math.cos(ang) * s_even_v + math.sin(ang) * s_odd_v)
    bip = zq / _SQRT_PI * (math.sin(ang) * s_even_v - math.cos(ang) * s_odd_v)
    return ai, aip, bi, bip


def airy(x: float) -> AiryValues:
    """Evaluate Ai, Bi and their derivatives at a real point.

    Raises ValueError on non-finite input or |x| > 200.
    """
    x = float(x)
    if not math.isfinite(x):
        raise ValueError("airy: argument must be finite")
    if abs(x) > 200.0:
        raise ValueError("airy: argument outside the supported range |x| <= 200")

    if x <= _NEG_EDGE:
        ai, aip, bi, bip = _asym_negative(x)
        return AiryValues(x, ai, aip, bi, bip)
    if x <= _SERIES_EDGE:
        ai, aip, bi, bip = _maclaurin(x)
        return AiryValues(x, ai, aip, bi, bip)
    if x < _POS_EDGE:
        seed = _asym_positive(_MARCH_SEED)
        ai, aip = _march(_MARCH_SEED, seed[0], seed[1], x)
        bi0, _, bi, bip = _maclaurin(_SERIES_EDGE)
        bi, bip = _march(_SERIES_EDGE, bi, bip, x)
        return AiryValues(x, ai, aip, bi, bip)
    ai, aip, bi, bip, under, over = _asym_positive(x)
    return AiryValues(x, ai, aip, bi, bip, underflow=under, overflow=over)


def ai_grid(x) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized (Ai, Ai') over an array of points."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    ai = np.empty_like(x)
    aip = np.empty_like(x)
    for i, xi in enumerate(x):
        v = airy(xi)
        ai[i] = v.ai
        aip[i] = v.ai_prime
    return ai, aip

"""Power series with reciprocal-gamma coefficients, in double or double-double.

Both Mittag-Leffler derivatives and Wright functions are series of the form

    S(x) = sum_m  w_m * x**m / Gamma(b + a*(m + k))

with ``w_m = (m+1)_k`` (Mittag-Leffler, k-th derivative) or ``w_m = 1/m!``
(Wright, k = 0). Terms are built in log space so intermediate overflow is
impossible, and every sum comes with a rounding-error bound of the form
``u * sum_m c_m |t_m|`` where ``c_m`` measures the sensitivity of the log of
term m. The first neglected term is added to cover truncation.
"""
from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np
from scipy import special as sc

from . import ddouble as dd
from .gamma_kit import POLE_SNAP

EPS = np.finfo(float).eps
MAX_TERMS = 1 << 18
_TAIL_DROP = {"double": 45.0, "dd": 85.0}
_LOG_ZERO_X = -745.0


@dataclass(frozen=True)
class SeriesKind:
    """Coefficient family: ``'ml'`` for (m+1)_k weights, ``'wright'`` for 1/m!."""

    family: str
    a: float
    b: float
    k: int = 0

    def arg(self, m):
        return self.b + self.a * (m + self.k)


def _pow2(n):
    return 1 << max(6, int(math.ceil(math.log2(max(n, 2)))))


@lru_cache(maxsize=256)
def _coeffs(kind, n):
    m = np.arange(n, dtype=float)
    if kind.family == "ml":
        logw = sc.gammaln(m + kind.k + 1) - sc.gammaln(m + 1)
    else:
        logw = -sc.gammaln(m + 1)
    arg = kind.arg(m)
    r = np.round(arg)
    pole = (r <= 0) & (np.abs(arg - r) <= POLE_SNAP)
    with np.errstate(divide="ignore", invalid="ignore"):
        logr = np.where(pole, -np.inf, -sc.gammaln(arg))
        sign = np.where(pole, 0.0, sc.gammasgn(arg))
        sens = np.where(pole, 0.0, np.abs(arg * sc.psi(arg)))
    sens = np.abs(logw) + np.abs(np.where(np.isfinite(logr), logr, 0.0)) + sens + 2.0
    return logw, logr, sign, sens


@lru_cache(maxsize=64)
def _coeffs_dd(kind, n):
    m = np.arange(n, dtype=float)
    if kind.family == "ml":
        w = dd.asdd(np.ones(n))
        for j in range(1, kind.k + 1):
            w = dd.mul(w, dd.asdd(m + j))
        logw = dd.log(w)
    else:
        logw = dd.neg(dd.lgamma_pos(dd.asdd(m + 1.0)))
    # b + a*(m+k) exactly in double-double
    arg = dd.add(dd.two_prod(np.full(n, kind.a), m + kind.k), dd.asdd(np.full(n, kind.b)))
    logr, sign = dd.log_rgamma(arg)
    return logw, logr, sign


def _log_terms(kind, n, logabsx):
    logw, logr, sign, sens = _coeffs(kind, n)
    m = np.arange(n, dtype=float)
    return logw + logr + m * logabsx, sign, sens


def term_count(kind, xabs, drop):
    """Terms needed so the tail is ``drop`` e-folds below the peak and falling."""
    if xabs == 0:
        return 1
    lx = math.log(xabs)
    n = 64
    while True:
        L, sign, _ = _log_terms(kind, _pow2(n), lx)
        L = np.where(sign == 0, -np.inf, L)
        finite = np.isfinite(L)
        peak = L[finite].max() if finite.any() else 0.0
        # terms carry an oscillating |sin| factor, so judge the trend blockwise
        q = L.size // 8
        last, prev = L[-q:], L[-2 * q:-q]
        if last.max() < peak - drop and last.max() < prev.max():
            # trim to the last term above the cut
            above = np.nonzero(finite & (L >= peak - drop))[0]
            return int(min(L.size, above[-1] + 8))
        if n >= MAX_TERMS:
            return MAX_TERMS
        n *= 2


def sum_double(kind, x):
    """Vectorised double-precision sum. Returns ``(value, abs_err)`` arrays."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    xmax = float(np.max(np.abs(x))) if x.size else 0.0
    n = term_count(kind, xmax, _TAIL_DROP["double"])
    logw, logr, sign, sens = _coeffs(kind, _pow2(n + 1))
    logw, logr, sign, sens = logw[: n + 1], logr[: n + 1], sign[: n + 1], sens[: n + 1]
    m = np.arange(n + 1, dtype=float)[:, None]
    ax = np.abs(x)[None, :]
    with np.errstate(divide="ignore"):
        lx = np.where(ax > 0, np.log(ax), _LOG_ZERO_X)
    L = (logw + logr)[:, None] + m * lx
    L = np.where(sign[:, None] == 0, -np.inf, L)
    L[1:, (ax == 0)[0]] = -np.inf
    s = sign[:, None] * np.where((np.signbit(x)[None, :]) & (m % 2 == 1), -1.0, 1.0)
    lmax = np.max(L[:-1], axis=0)
    lmax = np.where(np.isfinite(lmax), lmax, 0.0)
    with np.errstate(under="ignore"):
        t = s * np.exp(L - lmax)
    body, nxt = t[:-1], np.abs(t[-1])
    total = np.sum(body, axis=0)
    sens_x = sens[:-1, None] + m[:-1] * np.abs(lx)
    err = EPS * (np.sum(sens_x * np.abs(body), axis=0)
                 + math.log2(max(n, 2)) * np.sum(np.abs(body), axis=0)) + nxt
    with np.errstate(over="ignore"):
        scale = np.exp(lmax)
        return total * scale, err * scale


def sum_dd(kind, x):
    """Double-double sum at a scalar ``x``. Returns ``(value, abs_err)`` floats."""
    with np.errstate(invalid="ignore", under="ignore", over="ignore"):
        return _sum_dd(kind, float(x))


def _sum_dd(kind, x):
    if x == 0:
        logw, logr, sign, _ = _coeffs(kind, 64)
        return float(sign[0] * math.exp(logw[0] + logr[0])) if sign[0] else 0.0, 0.0
    n = term_count(kind, abs(x), _TAIL_DROP["dd"])
    size = _pow2(n + 1)
    logw, logr, sign = _coeffs_dd(kind, size)
    sens = _coeffs(kind, size)[3]
    sl = slice(0, n + 1)
    logw = (logw[0][sl], logw[1][sl])
    logr = (logr[0][sl], logr[1][sl])
    sign, sens = sign[sl], sens[sl]
    m = np.arange(n + 1, dtype=float)
    lx = dd.log(dd.asdd(abs(x)))
    lxm = dd.mul_d((np.full(n + 1, float(lx[0])), np.full(n + 1, float(lx[1]))), m)
    L = dd.add(dd.add(logw, logr), lxm)
    L = (np.where(sign == 0, -np.inf, L[0]), np.where(sign == 0, 0.0, L[1]))
    lmax = float(np.max(L[0][:-1]))
    L = dd.sub(L, dd.asdd(np.full(n + 1, lmax)))
    t = dd.exp(L)
    s = sign * np.where((x < 0) & (m % 2 == 1), -1.0, 1.0)
    hi, lo = s * t[0], s * t[1]
    total = math.fsum(np.concatenate([hi[:-1], lo[:-1]]))
    sens_x = sens + m * abs(float(lx[0]))
    err = dd.EPS_DD * float(np.sum(sens_x[:-1] * np.abs(hi[:-1]))) + abs(hi[-1])
    err += EPS * abs(total)
    scale = math.exp(lmax) if lmax < 709 else math.inf
    return total * scale, err * scale

"""Wright functions phi(rho, beta, z) = sum_n z**n / (n! Gamma(beta + rho n)) on the real axis.

For rho = -alpha in (-1, 0) and z = -x < 0 the series alternates with
enormous cancellation once x is moderately large. Evaluation escalates:

1. the series in double precision (vectorised), accepted when its rounding
   bound is small;
2. a Mellin-Barnes integral along the vertical line through the real saddle
   point of the integrand, discretised by the trapezoidal rule (spectrally
   accurate for this analytic, exponentially decaying integrand);
3. the series in double-double arithmetic.

The best certified candidate is returned together with its error bound.
"""
from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np
from scipy import optimize
from scipy import special as sc

from . import _series, quadrature
from .errors import AccuracyError, DomainError, RegimeError
from .gamma_kit import recip_gamma
from .mittag_leffler import EvalResult, Method, ml_eval

ACCEPT_REL = 1e-12
DD_TRIGGER_REL = 1e-9
STRICT_REL = 1e-6
_SERIES_MAX_TSTAR = 20.0
_MB_DROP = 46.0


@dataclass(frozen=True)
class WrightParams:
    """Parameters (rho, beta) of phi(rho, beta, .), with rho > -1."""

    rho: float
    beta: float

    def __post_init__(self):
        if not (math.isfinite(self.rho) and math.isfinite(self.beta)):
            raise DomainError("Wright parameters must be finite")
        if not self.rho > -1:
            raise DomainError(f"rho must exceed -1, got {self.rho}")

    @property
    def probabilistic(self):
        """True when phi(rho, beta, -x) is a positive integrable function."""
        return -1 < self.rho <= 0 and self.beta >= 0


def _params(p):
    if isinstance(p, WrightParams):
        return p
    return WrightParams(float(p[0]), float(p[1]))


def _tstar(alpha, x):
    return (alpha * np.abs(x)) ** (1.0 / (1.0 - alpha))


# --------------------------------------------------------------------------
# Mellin-Barnes saddle-line quadrature

def _g1(alpha, beta, c, lx):
    return sc.psi(c) - alpha * sc.psi(beta + alpha * c) - lx


def _saddles(alpha, beta, lx):
    """Real saddle points c(x) of Gamma(s) x^-s / Gamma(beta + alpha s), vectorised.

    The saddle is the upward crossing of psi(c) - alpha psi(beta + alpha c) = ln x
    to the right of max(0.25, (0.25 - beta)/alpha). Returns ``(c, g2)`` with
    NaN where no usable saddle exists.
    """
    c_lo = max(0.25, (0.25 - beta) / alpha)
    ladder = c_lo * 2.0 ** (np.arange(161) / 4.0)
    f = _g1(alpha, beta, ladder[None, :], lx[:, None])
    neg = f < 0
    # first non-negative rung after the first negative one
    first_neg = np.where(neg.any(axis=1), np.argmax(neg, axis=1), -1)
    after = (~neg) & (np.arange(ladder.size)[None, :] > first_neg[:, None])
    k_hi = np.where(after.any(axis=1) & (first_neg >= 0), np.argmax(after, axis=1), -1)
    ok = k_hi > 0
    c = np.full(lx.shape, np.nan)
    g2 = np.full(lx.shape, np.nan)
    if not ok.any():
        return c, g2
    lo = ladder[k_hi[ok] - 1]
    hi = ladder[k_hi[ok]]
    lxo = lx[ok]
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        below = _g1(alpha, beta, mid, lxo) < 0
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        if np.all(hi - lo <= 4e-16 * hi):
            break
    cc = 0.5 * (lo + hi)
    gg = sc.polygamma(1, cc) - alpha**2 * sc.polygamma(1, beta + alpha * cc)
    good = gg > 0
    idx = np.nonzero(ok)[0]
    c[idx[good]] = cc[good]
    g2[idx[good]] = gg[good]
    return c, g2


def _log_integrand(alpha, beta, lx, s):
    return sc.loggamma(s) - sc.loggamma(beta + alpha * s) - s * lx


_MB_MAX_NODES = 400000


def mb_values(alpha, beta, x):
    """phi(-alpha, beta, -x) by the saddle-line integral, vectorised over x > 0.

    Along Re s = c the integrand is sampled by the trapezoidal rule with a
    step resolving both its Gaussian width and its oscillation; the error is
    estimated from the half-step rule plus rounding. NaN marks points without
    a usable saddle.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    vals = np.full(x.shape, np.nan)
    errs = np.full(x.shape, np.inf)
    pos = np.nonzero(x > 0)[0]
    if pos.size == 0:
        return vals, errs
    lx = np.log(x[pos])
    c, g2 = _saddles(alpha, beta, lx)
    ok = np.isfinite(c)
    pos, lx, c, g2 = pos[ok], lx[ok], c[ok], g2[ok]
    if pos.size == 0:
        return vals, errs
    sigma = 1.0 / np.sqrt(g2)
    peak = _log_integrand(alpha, beta, lx, c + 0j).real
    # extent: first rung of a geometric ladder where the integrand has dropped by e^-_MB_DROP
    rungs = sigma[:, None] * 1.5 ** np.arange(50)[None, :]
    drop = _log_integrand(alpha, beta, lx[:, None], c[:, None] + 1j * rungs).real < peak[:, None] - _MB_DROP
    ymax = rungs[np.arange(pos.size), np.argmax(drop, axis=1)]
    found = drop.any(axis=1) & (ymax <= 1e7)
    # step: resolve the Gaussian width and the oscillation frequency of the phase
    ys = np.linspace(0.0, 1.0, 65)[1:][None, :] * ymax[:, None]
    omega = np.abs((sc.psi(c[:, None] + 1j * ys)
                    - alpha * sc.psi(beta + alpha * (c[:, None] + 1j * ys))).real - lx[:, None])
    h = np.minimum(np.minimum(sigma, c), math.pi / np.maximum(omega.max(axis=1), 1e-300)) / 4.0
    n = np.ceil(ymax / h).astype(np.int64)
    n += n % 2
    found &= n <= _MB_MAX_NODES
    pos, lx, c, peak, h, n = pos[found], lx[found], c[found], peak[found], h[found], n[found]
    if pos.size == 0:
        return vals, errs
    # flattened nodes y_j = j h for j = 0..n of every point
    counts = n + 1
    owner = np.repeat(np.arange(pos.size), counts)
    start = np.concatenate([[0], np.cumsum(counts)[:-1]])
    j = np.arange(owner.size) - start[owner]
    logf = _log_integrand(alpha, beta, lx[owner], c[owner] + 1j * (j * h[owner]))
    F = np.exp(logf - peak[owner])
    w = np.where(j == 0, 0.5, 1.0)
    I_h = h * np.bincount(owner, weights=w * F.real, minlength=pos.size)
    even = j % 2 == 0
    I_2h = 2 * h * np.bincount(owner[even], weights=(w * F.real)[even], minlength=pos.size)
    absF = np.abs(F)
    rounding = _series.EPS * h * np.bincount(owner, weights=absF * (np.abs(logf) + 2.0), minlength=pos.size)
    last = absF[start + n]
    err = np.abs(I_h - I_2h) + rounding + 4.0 * h * last
    with np.errstate(over="ignore", under="ignore", divide="ignore"):
        vals[pos] = np.sign(I_h) * np.exp(np.log(np.abs(I_h)) + peak) / math.pi
        errs[pos] = np.exp(np.log(err) + peak) / math.pi
    # rounding of the rescaling by exp(peak), whose argument is itself a rounded sum
    errs[pos] += 4 * _series.EPS * (np.abs(peak) + c * np.abs(lx) + 4.0) * np.abs(vals[pos])
    return vals, errs


# --------------------------------------------------------------------------
# Combined evaluator

def _lift_negative_beta(alpha, beta, x):
    """phi(-a, b, -x) for b < 0 from values at b >= 0.

    Applies phi(-a, b, -x) = a x phi(-a, b+1-a, -x) + b phi(-a, b+1, -x)
    with every intermediate beta evaluated once on the whole vector.
    """
    memo = {}

    def get(b):
        key = round(b, 12)
        if key in memo:
            return memo[key]
        if b >= 0:
            out = phi_values(-alpha, b, -x, strict=False, return_method=True)
        else:
            v1, e1, m1 = get(b + 1 - alpha)
            v2, e2, _ = get(b + 1)
            v = alpha * x * v1 + b * v2
            e = (alpha * x * e1 + abs(b) * e2
                 + _series.EPS * (alpha * x * np.abs(v1) + abs(b * v2)))
            out = (v, e, m1)
        memo[key] = out
        return out

    return get(beta)


def phi_values(rho, beta, z, strict=True, return_method=False):
    """Vectorised phi(rho, beta, z). Returns ``(values, abs_errs)``.

    With ``strict=True`` an :class:`AccuracyError` is raised when some point
    cannot be certified to ``STRICT_REL`` relative accuracy; the best effort
    is attached to the exception.
    """
    rho = float(rho)
    beta = float(beta)
    z = np.atleast_1d(np.asarray(z, dtype=float))
    methods = np.full(z.shape, Method.SERIES.value, dtype=object)
    if rho == 0:
        v = np.exp(z) * recip_gamma(beta)
        e = _series.EPS * np.abs(v) * 2
        methods[:] = Method.CLOSED_FORM.value
        return (v, e, methods) if return_method else (v, e)

    vals = np.full(z.shape, np.nan)
    errs = np.full(z.shape, np.inf)
    kind = _series.SeriesKind("wright", rho, beta)
    negative_regime = -1 < rho < 0
    alpha = -rho
    if negative_regime:
        try_series = ~((z < 0) & (_tstar(alpha, z) > _SERIES_MAX_TSTAR))
    else:
        try_series = np.ones(z.shape, dtype=bool)
    if try_series.any():
        v, e = _series.sum_double(kind, z[try_series])
        vals[try_series], errs[try_series] = v, e

    def unresolved():
        return ~(errs <= ACCEPT_REL * np.abs(vals))

    if negative_regime:
        todo = np.nonzero(unresolved() & (z < 0))[0]
        if todo.size:
            v, e = mb_values(alpha, beta, -z[todo])
            better = e < errs[todo]
            vals[todo[better]] = v[better]
            errs[todo[better]] = e[better]
            methods[todo[better]] = Method.QUADRATURE.value
    if negative_regime:
        # far tail: the leading asymptotic is below the smallest subnormal
        todo = np.nonzero(unresolved() & (z < 0))[0]
        if todo.size:
            t = _tstar(alpha, z[todo])
            with np.errstate(divide="ignore"):
                logv = ((0.5 - beta) * np.log(t) - t * (1 - alpha) / alpha
                        - 0.5 * math.log(2 * math.pi * (1 - alpha)))
            gone = (logv < -800.0) & (t > 1e3)
            vals[todo[gone]] = 0.0
            errs[todo[gone]] = 0.0
            methods[todo[gone]] = Method.ASYMPTOTIC.value
    if negative_regime and beta < 0:
        todo = np.nonzero(unresolved() & (z < 0))[0]
        if todo.size:
            v, e, m = _lift_negative_beta(alpha, beta, -z[todo])
            better = e < errs[todo]
            vals[todo[better]] = v[better]
            errs[todo[better]] = e[better]
            methods[todo[better]] = m[better]
    for i in np.nonzero(~(errs <= DD_TRIGGER_REL * np.abs(vals)))[0]:
        if negative_regime and z[i] < 0 and _tstar(alpha, z[i]) > 60:
            continue
        v, e = _series.sum_dd(kind, float(z[i]))
        if e < errs[i] or not np.isfinite(vals[i]):
            vals[i], errs[i] = v, e
            methods[i] = Method.SERIES.value
    if strict:
        bad = ~(np.isfinite(errs) & (errs <= STRICT_REL * np.abs(vals))) & ~((vals == 0) & (errs == 0))
        if bad.any():
            i = int(np.nonzero(bad)[0][0])
            raise AccuracyError(
                f"phi({rho}, {beta}, {z[i]}) not certified: value {vals[i]}, error {errs[i]}",
                best=(vals, errs),
            )
    return (vals, errs, methods) if return_method else (vals, errs)


def wright_eval(p, z):
    """phi(rho, beta, z) at a scalar z, with error estimate and method tag."""
    p = _params(p)
    z = float(z)
    if not math.isfinite(z):
        raise DomainError("z must be finite")
    v, e, m = phi_values(p.rho, p.beta, np.array([z]), return_method=True)
    return EvalResult(float(v[0]), float(e[0]), Method(m[0]))


def wright_deriv_shift(p, z, order):
    """order-th derivative of x -> phi(rho, beta, -x) at x = -z.

    Equal to (-1)**order * phi(rho, beta + order*rho, z); no differencing.
    """
    p = _params(p)
    if not -1 < p.rho < 0:
        raise DomainError("the shift rule is stated for rho in (-1, 0)")
    if order not in (1, 2, 3):
        raise DomainError("order must be 1, 2 or 3")
    if z > 0:
        raise DomainError("the shift rule is used on z <= 0")
    r = wright_eval(WrightParams(p.rho, p.beta + order * p.rho), z)
    sign = -1.0 if order % 2 else 1.0
    return EvalResult(sign * r.value, r.abs_err, r.method)


# --------------------------------------------------------------------------
# Leading-order asymptotics for phi(-alpha, beta, -x), x -> +inf

def asymptotic_rate(alpha):
    """B(alpha) in phi(-alpha, beta, -x) ~ exp(-B x^(1/(1-alpha)))."""
    return (1.0 - alpha) * alpha ** (alpha / (1.0 - alpha))


def asymptotic_power(alpha, beta):
    """Exponent of x in the algebraic prefactor: (1/2 - beta)/(1 - alpha)."""
    return (0.5 - beta) / (1.0 - alpha)


def _first_correction(alpha, beta):
    a = alpha
    num = (-beta * (beta + 1) / 2 + beta * (2 - a) / 2
           + (2 - a) * (3 - a) / 8 - 5 * (2 - a) ** 2 / 24)
    return num / (1 - a)


def _leading(alpha, beta, x):
    t = _tstar(alpha, x)
    logv = ((0.5 - beta) * np.log(t) - t * (1 - alpha) / alpha
            - 0.5 * math.log(2 * math.pi * (1 - alpha)))
    return np.exp(logv), t


@lru_cache(maxsize=128)
def x_asym(alpha, beta=None):
    """Smallest x where the series condition number sum|t_n|/|phi| exceeds 1e12.

    ``beta`` defaults to ``1 - alpha``. Cached per parameter pair.
    """
    beta = 1.0 - alpha if beta is None else beta
    kind = _series.SeriesKind("wright", -alpha, beta)

    def log_cond(x):
        from scipy.special import logsumexp

        n = _series.term_count(kind, x, 45.0)
        logw, logr, sign, _ = _series._coeffs(kind, _series._pow2(n + 1))
        L = (logw + logr + np.arange(logw.size) * math.log(x))[: n + 1]
        L = L[sign[: n + 1] != 0]
        v, _ = phi_values(-alpha, beta, np.array([-x]), strict=False)
        return float(logsumexp(L)) - math.log(abs(v[0]))

    target = math.log(1e12)
    lo, hi = 0.5, 1.0
    while log_cond(hi) < target:
        lo, hi = hi, hi * 1.5
    return optimize.brentq(lambda x: log_cond(x) - target, lo, hi, xtol=1e-3)


def wright_asymptotic(p, x, corrected=False):
    """Leading exponential asymptotic of phi(rho, beta, -x) for rho = -alpha in (-1, 0).

    phi ~ t^(1/2-beta) exp(-t (1-alpha)/alpha) / sqrt(2 pi (1-alpha)),
    t = (alpha x)^(1/(1-alpha)). ``abs_err`` is the size of the next
    correction c1/t; with ``corrected=True`` that correction is applied and
    the error is estimated from the size of the following order.
    """
    p = _params(p)
    if not -1 < p.rho < 0:
        raise DomainError("the asymptotic form needs rho in (-1, 0)")
    alpha = -p.rho
    x = float(x)
    if x < x_asym(alpha, p.beta):
        raise RegimeError(f"x = {x} below the asymptotic onset {x_asym(alpha, p.beta):.4g}")
    v, t = _leading(alpha, p.beta, x)
    c1 = _first_correction(alpha, p.beta) / t
    if corrected:
        err = abs(v) * (2 * abs(c1) / t + 4 * c1 * c1)
        return EvalResult(float(v * (1 + c1)), float(err), Method.ASYMPTOTIC)
    return EvalResult(float(v), float(abs(v * c1)), Method.ASYMPTOTIC)


def tail_cutoff(alpha, beta, drop=60.0):
    """x beyond which phi(-alpha, beta, -x) is below e^-drop times its typical size."""
    if alpha == 0:
        return drop + 20.0
    B = asymptotic_rate(alpha)
    x = (drop / B) ** (1.0 - alpha)
    # the algebraic prefactor can be large for big beta; push until it is not
    for _ in range(60):
        v, _ = _leading(alpha, beta, x)
        if float(v) < math.exp(-drop) * max(1.0, abs(recip_gamma(beta))):
            break
        x *= 1.2
    return float(x)


# --------------------------------------------------------------------------
# Integral identities

def _phi_vec(alpha, beta):
    def f(x):
        v, _ = phi_values(-alpha, beta, -np.asarray(x), strict=False)
        return v
    return f


def laplace_transform(alpha, beta, t, rtol=1e-11):
    """int_0^inf phi(-alpha, beta, -x) exp(-x t) dx by adaptive quadrature.

    Returns ``(value, error_estimate)``. The range is truncated where the
    asymptotic tail makes the remainder negligible.
    """
    X = tail_cutoff(alpha, beta)
    phi = _phi_vec(alpha, beta)
    return quadrature.integrate(lambda x: phi(x) * np.exp(-x * t), 0.0, X, rtol=rtol)


def laplace_identity_check(p, t):
    """Both sides of int_0^inf phi(rho, beta, -x) e^{-xt} dx = E_{-rho, beta-rho}(-t).

    Returns ``(lhs, rhs)`` where lhs is by quadrature and rhs by the
    Mittag-Leffler evaluator.
    """
    p = _params(p)
    if not -1 < p.rho < 0:
        raise DomainError("rho must lie in (-1, 0)")
    if p.beta < 0:
        raise DomainError("beta must be >= 0")
    if not t > 0:
        raise DomainError("t must be positive")
    alpha = -p.rho
    lhs, _ = laplace_transform(alpha, p.beta, float(t))
    rhs = ml_eval((alpha, p.beta + alpha), -float(t)).value
    return lhs, rhs


def survival_integral(alpha, beta, x, rtol=1e-11):
    """int_x^inf phi(-alpha, beta, -u) du by quadrature (an oracle for the shift rule)."""
    X = max(tail_cutoff(alpha, beta), x + 1.0)
    val, _ = quadrature.integrate(_phi_vec(alpha, beta), x, X, rtol=rtol)
    return val

"""The two-parameter Mittag-Leffler function on the real line.

E_{a,b}(x) = sum_n x**n / Gamma(b + a n).

Evaluation strategy for the k-th derivative at a real point x:

* x >= 0: the power series in double precision with log-scaled terms, or the
  exponential asymptotic (1/a) x**((1-b)/a) exp(x**(1/a)) once that is
  astronomically large.
* x < 0 with 0 < a < 1: the series in double precision while the
  cancellation is mild, the series in double-double arithmetic in the
  middle range, and the optimally truncated algebraic expansion
  -sum_n x**-n / Gamma(b - a n) far out. Whichever certified candidate
  has the smallest error estimate wins.
* a >= 1 on the negative axis: double then double-double series.
* a = 0: the rational extension 1/(Gamma(b)(1-x)).
* (a, b) = (1, 1): exp.
"""
from dataclasses import dataclass
import enum
import math

import numpy as np

from scipy.special import gammaln

from . import _series
from .errors import DomainError, RegimeError
from .gamma_kit import log_abs_recip_gamma, recip_gamma

REL_TARGET = 1e-13
_DOUBLE_SERIES_MAX_S = 14.0
_DD_SERIES_MAX_S = 60.0
_ASYM_MIN_S = 20.0
_POS_ASYM_S = 500.0
ASYMPTOTIC_GUARD = -8.0


class Method(str, enum.Enum):
    SERIES = "series"
    ASYMPTOTIC = "asymptotic"
    LAPLACE_QUADRATURE = "laplace_quadrature"
    QUADRATURE = "quadrature"
    CLOSED_FORM = "closed_form"


@dataclass(frozen=True)
class EvalResult:
    """A function value with an absolute error estimate and the method used."""

    value: float
    abs_err: float
    method: Method

    def __float__(self):
        return float(self.value)

    @property
    def rel_err(self):
        return self.abs_err / abs(self.value) if self.value else math.inf


@dataclass(frozen=True)
class MLParams:
    alpha: float
    beta: float

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise DomainError("Mittag-Leffler parameters must be finite")
        if self.alpha < 0:
            raise DomainError(f"alpha must be >= 0, got {self.alpha}")


def _params(p):
    if isinstance(p, MLParams):
        return p
    return MLParams(float(p[0]), float(p[1]))


def _check_order(order):
    if int(order) != order or not 0 <= order <= 4:
        raise DomainError(f"derivative order must be an integer in 0..4, got {order}")
    return int(order)


def _rational(beta, x, k):
    if np.any(x >= 1):
        raise DomainError("E_0(x) = 1/(1-x) is only defined for x < 1")
    v = math.factorial(k) * recip_gamma(beta) / (1.0 - x) ** (k + 1)
    return v, _series.EPS * np.abs(v) * (k + 2)


def _asym_negative(alpha, beta, x, k, nterms=None):
    """Algebraic expansion of the k-th derivative at x < 0.

    Returns ``(value, abs_err, terms_used)``. With ``nterms=None`` the sum
    stops just before the smallest term (optimal truncation).
    """
    t = -x
    nmax = 400 if nterms is None else nterms + 2
    n = np.arange(1, nmax + 1, dtype=float)
    lr, sg = log_abs_recip_gamma(beta - alpha * n)
    # d^k/dx^k x^-n = (-1)^k (n)_k x^(-n-k)
    lpoch = gammaln(n + k) - gammaln(n)
    with np.errstate(invalid="ignore"):
        logmag = lpoch + lr - (n + k) * math.log(t)
    sign = sg * (-1.0) ** (n + k) * (-1.0) ** k
    mag = np.where(sg == 0, 0.0, np.exp(np.minimum(logmag, 700)))
    terms = -sign * mag
    if nterms is None:
        # optimal truncation on the smooth envelope |1/Gamma(b-an)| <= Gamma(1-b+an)/pi,
        # which ignores the oscillating sine factor of the reflection formula
        env = lpoch + gammaln(1.0 - beta + alpha * n) - math.log(math.pi) - (n + k) * math.log(t)
        nterms = int(np.argmin(env)) + 1
        value = math.fsum(terms[:nterms])
        err = float(np.exp(min(env[min(nterms, nmax - 1)], 700.0)))
    else:
        value = math.fsum(terms[:nterms])
        nxt = mag[nterms:nterms + 2]
        err = float(np.max(nxt)) if nxt.size else 0.0
    # exponentially small contributions live near the negative axis for a > 2/3
    s = t ** (1.0 / alpha)
    c = math.cos(math.pi / alpha)
    if alpha > 2.0 / 3.0 and c < 0:
        g1 = (1.0 / alpha) * t ** (1.0 / alpha - 1.0)
        expo = (1.0 / alpha) * t ** ((1.0 - beta) / alpha) * math.exp(s * c) * max(1.0, g1) ** k
        err += expo
    err += _series.EPS * (abs(value) + math.fsum(np.abs(terms[:nterms])))
    return value, err, nterms


def _asym_positive(alpha, beta, x, k):
    """Exponential asymptotic (1/a) x^((1-b)/a) exp(x^(1/a)) and its derivatives."""
    lx = math.log(x)
    a = 1.0 / alpha
    c = (1.0 - beta) / alpha
    # g = c log x + x^a; derivatives g^(j)
    xa = x ** a
    g1 = c / x + a * xa / x
    g2 = -c / x**2 + a * (a - 1) * xa / x**2
    g3 = 2 * c / x**3 + a * (a - 1) * (a - 2) * xa / x**3
    g4 = -6 * c / x**4 + a * (a - 1) * (a - 2) * (a - 3) * xa / x**4
    poly = [1.0, g1, g2 + g1**2, g3 + 3 * g1 * g2 + g1**3,
            g4 + 4 * g1 * g3 + 3 * g2**2 + 6 * g1**2 * g2 + g1**4][k]
    logv = -math.log(alpha) + c * lx + xa + math.log(abs(poly))
    v = math.copysign(math.exp(logv) if logv < 709.7 else math.inf, poly)
    return v, abs(v) * 1e-15


def _point(alpha, beta, x, k):
    """Best certified value of the k-th derivative at a scalar x."""
    if x >= 0:
        if alpha > 0 and x > 0 and x ** (1.0 / alpha) > _POS_ASYM_S and alpha < 2:
            v, e = _asym_positive(alpha, beta, x, k)
            return v, e, Method.ASYMPTOTIC
        kind = _series.SeriesKind("ml", alpha, beta, k)
        v, e = _series.sum_double(kind, np.array([x]))
        return float(v[0]), float(e[0]), Method.SERIES

    s = (-x) ** (1.0 / alpha)
    kind = _series.SeriesKind("ml", alpha, beta, k)
    best = None
    if s <= _DOUBLE_SERIES_MAX_S:
        v, e = _series.sum_double(kind, np.array([x]))
        best = (float(v[0]), float(e[0]), Method.SERIES)
        if best[1] <= REL_TARGET * abs(best[0]):
            return best
    if alpha < 2 and s >= _ASYM_MIN_S:
        v, e, _ = _asym_negative(alpha, beta, x, k)
        cand = (v, e, Method.ASYMPTOTIC)
        if best is None or e < best[1]:
            best = cand
        if e <= REL_TARGET * abs(v):
            return best
    if s <= _DD_SERIES_MAX_S:
        v, e = _series.sum_dd(kind, x)
        if best is None or e < best[1]:
            best = (v, e, Method.SERIES)
    if best is None:
        v, e = _series.sum_double(kind, np.array([x]))
        best = (float(v[0]), float(e[0]), Method.SERIES)
    return best


def _special(alpha, beta, x, k):
    if alpha == 0:
        v, e = _rational(beta, x, k)
        return float(v), float(e), Method.CLOSED_FORM
    if alpha == 1 and beta == 1:
        v = math.exp(x) if x < 709.7 else math.inf
        return v, _series.EPS * v, Method.CLOSED_FORM
    return None


def ml_eval(p, x):
    """E_{alpha,beta}(x) at a real point, with error estimate."""
    return ml_derivative(p, x, 0)


def ml_derivative(p, x, order):
    """k-th derivative of E_{alpha,beta} at x (order 0 is the function)."""
    p = _params(p)
    k = _check_order(order)
    x = float(x)
    if not math.isfinite(x):
        raise DomainError("x must be finite")
    sp = _special(p.alpha, p.beta, x, k)
    if sp is None:
        sp = _point(p.alpha, p.beta, x, k)
    return EvalResult(sp[0], sp[1], sp[2])


def ml_values(p, x, order=0):
    """Vectorised k-th derivative. Returns ``(values, abs_errs)`` arrays.

    Points that the plain double series certifies are done in one pass;
    the rest go through the per-point regime selection.
    """
    p = _params(p)
    k = _check_order(order)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    vals = np.empty_like(x)
    errs = np.empty_like(x)
    if p.alpha == 0 or (p.alpha == 1 and p.beta == 1):
        for i, xi in enumerate(x):
            vals[i], errs[i], _ = _special(p.alpha, p.beta, xi, k)
        return vals, errs
    easy = np.zeros(x.shape, dtype=bool)
    with np.errstate(divide="ignore"):
        s = np.abs(x) ** (1.0 / p.alpha)
    cand = (s <= _DOUBLE_SERIES_MAX_S) & ~((x > 0) & (s > _POS_ASYM_S))
    if cand.any():
        kind = _series.SeriesKind("ml", p.alpha, p.beta, k)
        v, e = _series.sum_double(kind, x[cand])
        ok = e <= REL_TARGET * np.abs(v)
        idx = np.nonzero(cand)[0]
        vals[idx[ok]] = v[ok]
        errs[idx[ok]] = e[ok]
        easy[idx[ok]] = True
    for i in np.nonzero(~easy)[0]:
        vals[i], errs[i], _ = _point(p.alpha, p.beta, float(x[i]), k)
    return vals, errs


def ml_asymptotic_negative(p, x, nterms, tol=None):
    """The truncated algebraic expansion -sum_{n<=nterms} x^-n / Gamma(beta - alpha n).

    ``abs_err`` holds the size of the first omitted nonzero term. With
    ``tol`` given, a :class:`RegimeError` is raised if that estimate exceeds
    ``tol * |value|``.
    """
    p = _params(p)
    x = float(x)
    if not 0 < p.alpha < 1:
        raise DomainError("the algebraic expansion is used for 0 < alpha < 1")
    if x > ASYMPTOTIC_GUARD:
        raise RegimeError(f"expansion needs x <= {ASYMPTOTIC_GUARD}, got {x}")
    nterms = int(nterms)
    if nterms < 1:
        raise DomainError("nterms must be >= 1")
    v, e, _ = _asym_negative(p.alpha, p.beta, x, 0, nterms=nterms)
    if tol is not None and e > tol * abs(v):
        raise RegimeError(f"|x| = {-x} too small for relative accuracy {tol}")
    return EvalResult(v, e, Method.ASYMPTOTIC)


def ml_laplace(p, x):
    """E_{alpha,beta}(x) for x < 0 through the Wright-density Laplace transform.

    Uses E_{a,b}(-t) = int_0^inf phi(-a, b-a, -u) exp(-u t) du, valid for
    0 < a < 1 and b >= a. Meant as an independent cross-check.
    """
    from .wright import laplace_transform

    p = _params(p)
    x = float(x)
    if not (0 < p.alpha < 1 and p.beta >= p.alpha and x <= 0):
        raise DomainError("Laplace representation needs 0<alpha<1, beta>=alpha, x<=0")
    v, e = laplace_transform(p.alpha, p.beta - p.alpha, -x)
    return EvalResult(v, e, Method.LAPLACE_QUADRATURE)


def reciprocal_convexity_statistic(p, x):
    """D(x) = 2 E'(x)^2 - E(x) E''(x) and its error bound, vectorised over x."""
    e0, d0 = ml_values(p, x, 0)
    e1, d1 = ml_values(p, x, 1)
    e2, d2 = ml_values(p, x, 2)
    D = 2 * e1**2 - e0 * e2
    err = 4 * np.abs(e1) * d1 + np.abs(e0) * d2 + np.abs(e2) * d0 + _series.EPS * (2 * e1**2 + np.abs(e0 * e2))
    return D, err

"""The positive random variables M_{alpha,beta} with density Gamma(alpha+beta) phi(-alpha, beta, -x).

Derivatives of the density and its distribution function come from exact
parameter shifts of the Wright function:

    d/dx phi(-a, b, -x) = -phi(-a, b - a, -x)
    int_x^inf phi(-a, b, -u) du = phi(-a, b + a, -x)
"""
from dataclasses import dataclass, field
import math

import numpy as np
from scipy import optimize
from scipy.interpolate import PchipInterpolator
from scipy.special import gammaln

from .errors import DomainError
from .gamma_kit import log_abs_gamma, pochhammer, recip_gamma
from .roots import bracketed_root
from .wright import phi_values, tail_cutoff

CDF_GRID_POINTS = 512
CDF_GRID_TAIL = 1e-6


@dataclass(frozen=True)
class AdmissiblePair:
    """(alpha, beta) with alpha in [0, 1] and beta >= 0."""

    alpha: float
    beta: float

    def __post_init__(self):
        a, b = self.alpha, self.beta
        if not (math.isfinite(a) and math.isfinite(b)):
            raise DomainError("parameters must be finite")
        if not 0 <= a <= 1:
            raise DomainError(f"alpha must lie in [0, 1], got {a}")
        if b < 0:
            raise DomainError(f"beta must be >= 0, got {b}")

    @property
    def degenerate(self):
        """The corner (1, 0), where the variable is the constant 1."""
        return self.alpha == 1 and self.beta == 0


def _pair(p):
    if isinstance(p, AdmissiblePair):
        return p
    if isinstance(p, DensityModel):
        return p.params
    return AdmissiblePair(float(p[0]), float(p[1]))


def mellin_moment(p, s):
    """E[M^s] = Gamma(1+s) Gamma(alpha+beta) / Gamma(alpha+beta+alpha s), s > -1."""
    p = _pair(p)
    s = float(s)
    if not s > -1:
        raise DomainError(f"moments exist for s > -1, got {s}")
    a, b = p.alpha, p.beta
    if a + b == 0:
        return math.gamma(1 + s)
    lg, sg = log_abs_gamma(a + b + a * s)
    return math.exp(gammaln(1 + s) + gammaln(a + b) - lg) * sg


def mellin_factor_x(p, s):
    """E[X^s] for the factor X in M = G^(1-alpha) X, G ~ Gamma(2-alpha-beta).

    Defined for alpha in [1/2, 1) and beta in [0, alpha).
    """
    p = _pair(p)
    a, b = p.alpha, p.beta
    s = float(s)
    if not (0.5 <= a < 1 and 0 <= b < a):
        raise DomainError("needs alpha in [1/2, 1) and beta in [0, alpha)")
    if not s > -1:
        raise DomainError("needs s > -1")
    return pochhammer(1.0, s) / (pochhammer(a + b, a * s) * pochhammer(2 - a - b, (1 - a) * s))


@dataclass(frozen=True)
class DensityModel:
    """Density, derivatives, distribution function and sampler for one pair.

    The mode and the interpolation table for the quantile function are
    computed at construction; the object is immutable afterwards.
    """

    params: AdmissiblePair
    normalizer: float = field(init=False)
    mode_cache: float = field(init=False)
    cdf_grid: tuple = field(init=False, repr=False)

    def __init__(self, params, build_table=True):
        p = _pair(params)
        object.__setattr__(self, "params", p)
        a, b = p.alpha, p.beta
        object.__setattr__(self, "normalizer", math.gamma(a + b) if a + b > 0 else math.inf)
        object.__setattr__(self, "mode_cache", _mode(self)[0] if 0 < a < 1 else None)
        object.__setattr__(self, "cdf_grid", _build_table(self) if build_table else None)

    @property
    def alpha(self):
        return self.params.alpha

    @property
    def beta(self):
        return self.params.beta

    # density and its derivatives -----------------------------------------
    def _log_norm(self):
        return gammaln(self.alpha + self.beta)

    def pdf_err(self, x, order=0):
        """order-th derivative of the density with an absolute error bound."""
        a, b = self.alpha, self.beta
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if np.any(x < 0):
            raise DomainError("the density lives on x >= 0")
        if a == 0:
            v = (-1.0) ** order * np.exp(-x)
            return v, 1e-16 * np.abs(v)
        if a == 1:
            if b == 0:
                raise DomainError("M_{1,0} = 1 has no density")
            v = np.where(x < 1, b * _falling(b - 1, order) * (1 - np.minimum(x, 1)) ** (b - 1 - order), 0.0)
            return (-1.0) ** order * v, 1e-15 * np.abs(v)
        v, e = phi_values(-a, b - order * a, -x, strict=False)
        scale = math.exp(self._log_norm()) * (-1.0) ** order
        return scale * v, abs(scale) * e

    def pdf(self, x):
        v, _ = self.pdf_err(x)
        return v if np.ndim(x) else float(v[0])

    def pdf_derivative(self, x, order):
        v, _ = self.pdf_err(x, order)
        return v if np.ndim(x) else float(v[0])

    # distribution function -------------------------------------------------
    def sf(self, x):
        """P(M > x) = Gamma(alpha+beta) phi(-alpha, alpha+beta, -x)."""
        a, b = self.alpha, self.beta
        xa = np.atleast_1d(np.asarray(x, dtype=float))
        if np.any(xa < 0):
            raise DomainError("x must be >= 0")
        if a == 0:
            out = np.exp(-xa)
        elif a == 1:
            out = np.where(xa < 1, (1 - np.minimum(xa, 1)) ** b, 0.0) if b > 0 else (xa < 1).astype(float)
        else:
            v, _ = phi_values(-a, a + b, -xa, strict=False)
            out = np.clip(math.exp(self._log_norm()) * v, 0.0, 1.0)
            out = np.where(xa == 0, 1.0, out)
        return out if np.ndim(x) else float(out[0])

    def cdf(self, x):
        s = self.sf(x)
        return 1.0 - s

    def quantile(self, u):
        """Inverse distribution function by bracketed root finding."""
        u = float(u)
        if not 0 < u < 1:
            raise DomainError("u must lie in (0, 1)")
        a, b = self.alpha, self.beta
        if a == 0:
            return -math.log1p(-u)
        if a == 1:
            if b == 0:
                return 1.0
            return 1 - (1 - u) ** (1 / b)
        lo, hi = 0.0, tail_cutoff(a, b)
        if self.cdf_grid is not None:
            xs, us = self.cdf_grid
            i = int(np.searchsorted(us, u))
            if 0 < i < len(us):
                lo, hi = xs[i - 1], xs[i]
        while self.cdf(hi) < u:
            lo, hi = hi, 2 * hi
        res = bracketed_root(lambda x: self.cdf(x) - u, lo, hi, xtol=1e-14 * max(1.0, hi))
        return res.root

    # sampling --------------------------------------------------------------
    def sample(self, n, seed):
        """n i.i.d. draws; identical output for identical (n, seed)."""
        return sample(self, n, seed)

    def find_mode(self):
        return _mode(self)


def _falling(b, k):
    out = 1.0
    for j in range(k):
        out *= b - j
    return out


def _mode(m):
    a, b = m.alpha, m.beta
    if not 0 < a < 1:
        raise DomainError("mode search needs alpha in (0, 1)")
    if b >= a:
        return 0.0, False
    # phi'(0) = -Gamma(a+b)/Gamma(b-a) is positive for b < a
    X = tail_cutoff(a, b, drop=30.0)
    xs = np.linspace(0, X, 257)
    f, _ = phi_values(-a, b, -xs, strict=False)
    i = int(np.clip(np.argmax(f), 1, len(xs) - 2))
    res = optimize.minimize_scalar(
        lambda x: -float(phi_values(-a, b, np.array([-x]), strict=False)[0][0]),
        bracket=(xs[i - 1], xs[i], xs[i + 1]), method="golden", tol=1e-10)
    x0 = float(res.x)

    # polish on the exact derivative -phi(-a, b - a, -x)
    def dphi(x):
        return float(phi_values(-a, b - a, np.array([-x]), strict=False)[0][0])

    lo, hi = max(0.0, x0 - (xs[1] - xs[0])), x0 + (xs[1] - xs[0])
    if dphi(lo) < 0 < dphi(hi):
        x0 = bracketed_root(dphi, lo, hi, xtol=1e-14 * max(1.0, x0)).root
    return x0, True


def find_mode(m):
    """(mode, is_interior) of the density; mode 0 when beta >= alpha."""
    if not isinstance(m, DensityModel):
        m = DensityModel(m, build_table=False)
    if m.mode_cache is not None:
        return m.mode_cache, m.mode_cache > 0
    return _mode(m)


def _build_table(m):
    a, b = m.alpha, m.beta
    if not 0 < a < 1:
        return None
    X = tail_cutoff(a, b)
    # locate the upper end where the survival function reaches CDF_GRID_TAIL
    f = lambda x: float(m.sf(x)) - CDF_GRID_TAIL
    lo = 0.0
    hi = X
    x_hi = bracketed_root(f, lo, hi, xtol=1e-10 * hi).root if f(hi) < 0 else hi
    kappa = 2.0
    i = np.linspace(-1.0, 1.0, CDF_GRID_POINTS)
    xs = x_hi * 0.5 * (1 + np.tanh(kappa * i) / math.tanh(kappa))
    xs[0] = 0.0
    us = np.maximum.accumulate(m.cdf(xs))
    keep = np.concatenate([[True], np.diff(us) > 0])
    return xs[keep], us[keep]


def cdf(m, x):
    return m.cdf(x)


def quantile(m, u):
    return m.quantile(u)


def density(m, x):
    if not isinstance(m, DensityModel):
        m = DensityModel(m, build_table=False)
    return m.pdf(x)


# --------------------------------------------------------------------------
# Sampling

def sample_stable(alpha, n, rng):
    """Positive alpha-stable draws with Laplace transform exp(-lambda^alpha).

    Kanter's representation: Z = (A(U)/E)^((1-alpha)/alpha) with U uniform on
    (0, pi) and E standard exponential.
    """
    if not 0 < alpha < 1:
        raise DomainError("stable index must lie in (0, 1)")
    u = rng.uniform(0.0, math.pi, size=n)
    e = rng.standard_exponential(size=n)
    A = (np.sin(alpha * u) ** (alpha / (1 - alpha)) * np.sin((1 - alpha) * u)
         / np.sin(u) ** (1 / (1 - alpha)))
    return (A / e) ** ((1 - alpha) / alpha)


def sample(m, n, seed):
    """n i.i.d. draws of M_{alpha,beta}, reproducible from ``seed``.

    beta = 1 - alpha uses M = Z^-alpha with Z positive stable; other pairs
    invert the tabulated distribution function.
    """
    if not isinstance(m, DensityModel):
        m = DensityModel(m)
    n = int(n)
    rng = np.random.default_rng(seed)
    a, b = m.alpha, m.beta
    if a == 1 and b == 0:
        return np.ones(n)
    if a == 0:
        return rng.standard_exponential(size=n)
    if a == 1:
        return 1 - rng.uniform(size=n) ** (1 / b)
    if b == 1 - a:
        return sample_stable(a, n, rng) ** (-a)
    xs, us = m.cdf_grid
    inv = PchipInterpolator(us, xs)
    u = rng.uniform(size=n)
    out = np.empty(n)
    inside = (u >= us[0]) & (u <= us[-1])
    out[inside] = inv(u[inside])
    for i in np.nonzero(~inside)[0]:
        out[i] = m.quantile(u[i])
    return out

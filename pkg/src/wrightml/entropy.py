"""Generalized logarithms and entropy generators built on Mittag-Leffler functions.

For alpha in (0, 1] and beta >= 0 let

    F(z) = Gamma(alpha+beta) E_{alpha, alpha+beta}(z),

so that F(0) = 1 and F is increasing on the real line. The generalized
logarithm is log_{alpha,beta}(x) = F^{-1}(x) / Gamma(alpha+beta)^2 and the
generator is

    g(x) = -x log_{alpha,beta}(x) + (x - 1) / (Gamma(beta) Gamma(alpha+beta)).

With beta = 1 - alpha this is F = E_alpha, log_alpha = E_alpha^{-1} and
g_alpha(x) = -x log_alpha(x) + (x - 1)/Gamma(1 - alpha). The scaling makes
g vanish at both ends of [0, 1].
"""
from dataclasses import dataclass, field
import math

import numpy as np

from .errors import DomainError
from .gamma_kit import recip_gamma
from .mittag_leffler import ml_values
from .reports import GridSpec, ScanReport, Verdict
from .roots import bracketed_root

Z_TABLE = 1e4
Z_POSITIVE_MAX = 50.0
CONCAVITY_REL_TOL = 1e-10
ROUND_TRIP_REL = 1e-12


@dataclass(frozen=True)
class EntropyGen:
    """Entropy generator for one (alpha, beta); beta defaults to 1 - alpha.

    ``inversion_table`` holds increasing pairs (z, F(z)) on
    ``[-Z_TABLE, Z_POSITIVE_MAX]`` used to seed the inversion.
    """

    alpha: float
    beta: float
    gamma_ab: float = field(repr=False)
    inversion_table: tuple = field(repr=False)

    def __init__(self, alpha, beta=None):
        alpha = float(alpha)
        if not 0 < alpha <= 1:
            raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
        beta = 1.0 - alpha if beta is None else float(beta)
        if not (beta >= 0 and math.isfinite(beta)):
            raise DomainError(f"beta must be a finite number >= 0, got {beta}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "gamma_ab", math.gamma(alpha + beta))
        zs = np.concatenate([-np.geomspace(Z_TABLE, 1e-3, 240), [0.0],
                             np.geomspace(1e-3, Z_POSITIVE_MAX, 120)])
        with np.errstate(over="ignore", invalid="ignore"):
            fs = self.F(zs)
        keep = np.isfinite(fs)
        object.__setattr__(self, "inversion_table", (zs[keep], fs[keep]))

    @property
    def classical(self):
        """True for the Mittag-Leffler case beta = 1 - alpha."""
        return self.beta == 1.0 - self.alpha

    @property
    def linear_coeff(self):
        """1 / (Gamma(beta) Gamma(alpha+beta)); zero when beta = 0."""
        return float(recip_gamma(self.beta)) / self.gamma_ab

    def F_err(self, z, order=0):
        """order-th derivative of F with its absolute error bound."""
        v, e = ml_values((self.alpha, self.alpha + self.beta), z, order)
        return self.gamma_ab * v, self.gamma_ab * e

    def F(self, z, order=0):
        return self.F_err(z, order)[0]

    @property
    def upper_limit(self):
        """Largest tabulated F value (F(Z_POSITIVE_MAX) unless that overflows)."""
        return float(self.inversion_table[1][-1])


def _invert(gen, x):
    zs, fs = gen.inversion_table
    i = int(np.searchsorted(fs, x))
    if i < len(fs) and fs[i] == x:
        return float(zs[i])
    f = lambda z: float(gen.F(np.array([z]))[0]) - x
    if i == 0:
        # below the table: F(z) ~ c/|z|, so widen geometrically
        hi = float(zs[0])
        lo = 2 * hi
        while f(lo) > 0:
            hi, lo = lo, 2 * lo
    else:
        lo, hi = float(zs[i - 1]), float(zs[i])
    scale = max(1.0, abs(lo), abs(hi))
    z = bracketed_root(f, lo, hi, xtol=1e-6 * scale).root
    lo_b, hi_b = lo, hi
    for _ in range(20):
        v = f(z)
        if v == 0:
            break
        if v < 0:
            lo_b = max(lo_b, z)
        else:
            hi_b = min(hi_b, z)
        d = float(gen.F(np.array([z]), 1)[0])
        step = v / d if d > 0 else math.nan
        z_new = z - step
        if not lo_b <= z_new <= hi_b:
            z_new = 0.5 * (lo_b + hi_b)
        if abs(z_new - z) <= 4e-16 * max(1.0, abs(z)):
            z = z_new
            break
        z = z_new
    return z


def log_alpha(gen, x):
    """Generalized logarithm F^{-1}(x) / Gamma(alpha+beta)^2; vectorised.

    Raises :class:`DomainError` for x <= 0 and for x above ``gen.upper_limit``.
    """
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(~(xa > 0)):
        raise DomainError("the generalized logarithm needs x > 0")
    if np.any(xa > gen.upper_limit):
        raise DomainError(f"x exceeds the evaluable range {gen.upper_limit:.6g}")
    if gen.alpha == 1:
        z = np.log(xa) - math.log(gen.gamma_ab) if gen.beta == 0 else np.array([_invert(gen, v) for v in xa])
    else:
        z = np.array([0.0 if v == 1 else _invert(gen, v) for v in xa])
    out = z / gen.gamma_ab**2
    return out if np.ndim(x) else float(out[0])


def g_alpha(gen, x):
    """Entropy generator g(x) on [0, 1]; g(0) = 0 by continuous extension."""
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any((xa < 0) | (xa > 1)):
        raise DomainError("the generator is defined on [0, 1]")
    out = np.zeros_like(xa)
    pos = xa > 0
    if pos.any():
        xp = xa[pos]
        out[pos] = -xp * np.atleast_1d(log_alpha(gen, xp)) + (xp - 1) * gen.linear_coeff
    return out if np.ndim(x) else float(out[0])


def entropy(gen, p):
    """S(p) = sum_i g(p_i) for a probability vector p."""
    p = np.asarray(p, dtype=float).ravel()
    if p.size == 0 or np.any(~np.isfinite(p)) or np.any(p < 0):
        raise DomainError("a probability vector needs finite entries >= 0")
    if abs(p.sum() - 1) > 1e-9:
        raise DomainError(f"probabilities sum to {p.sum():.17g}, not 1")
    return float(np.sum(g_alpha(gen, np.minimum(p, 1.0))))


# --------------------------------------------------------------------------
# Concavity

def concavity_statistic(gen, z):
    """D(z) = 2 F'(z)^2 - F(z) F''(z) and its error bound; vectorised.

    On the negative half-line D >= 0 everywhere exactly when x log(x) is
    convex on (0, 1], i.e. when g is concave.
    """
    f0, e0 = gen.F_err(z, 0)
    f1, e1 = gen.F_err(z, 1)
    f2, e2 = gen.F_err(z, 2)
    D = 2 * f1**2 - f0 * f2
    err = 4 * np.abs(f1) * e1 + np.abs(f0) * e2 + np.abs(f2) * e0 + 2.3e-16 * (2 * f1**2 + np.abs(f0 * f2))
    return D, err


def tail_coefficients(alpha, beta=None):
    """(c6, c7) with z^6 D(z) = c6 + c7/z + O(z^-2) as z -> -infinity.

    For beta = 1 - alpha, c6 = 2 rho(alpha).
    """
    beta = 1.0 - alpha if beta is None else beta
    g = math.gamma(alpha + beta)
    a = [None] + [-g * float(recip_gamma(alpha + beta - alpha * n)) for n in range(1, 5)]
    return 2 * (a[2] ** 2 - a[1] * a[3]), 6 * (a[2] * a[3] - a[1] * a[4])


def tail_diagnostic(gen, z=-40.0):
    """z^6 D(z), which tends to the first tail coefficient."""
    D, _ = concavity_statistic(gen, np.array([float(z)]))
    return float(z) ** 6 * float(D[0])


def concavity_range(gen):
    """|z| extent of the concavity scan: far enough that the limit term dominates."""
    c6, c7 = tail_coefficients(gen.alpha, gen.beta)
    if c6 == 0:
        return Z_TABLE
    return float(np.clip(10 * abs(c7 / c6), 50.0, Z_TABLE))


def certify_concavity(gen, grid=400, z_max=None):
    """Grid certificate for concavity of g via the sign of D on z <= 0.

    D is sampled at z = 0 and at ``grid`` log-spaced points in
    [-z_max, -1e-3]. The verdict is ``holds`` iff min D >= -tol with
    tol = 1e-10 max|D|.
    """
    grid = int(grid)
    if grid < 100:
        raise DomainError("the concavity grid needs at least 100 points")
    z_max = concavity_range(gen) if z_max is None else float(z_max)
    spec = GridSpec(-z_max, -1e-3, grid, "log")
    zs = np.concatenate([spec.points(), [0.0]])
    D, _ = concavity_statistic(gen, zs)
    tol = CONCAVITY_REL_TOL * float(np.max(np.abs(D)))
    i = int(np.argmin(D))
    verdict = Verdict.HOLDS if D[i] >= -tol else Verdict.FAILS
    return ScanReport("entropy-concavity", {"alpha": gen.alpha, "beta": gen.beta}, spec,
                      verdict, float(D[i]), float(zs[i]), tol)

"""Grid checks of sign conditions on Wright and Mittag-Leffler functions.

Derivatives in x are never taken by finite differences. For
f(x) = phi(-a, b, -x) the shift rule d/dx phi(-a, b, -x) = -phi(-a, b-a, -x)
gives

    f'  = -phi(-a, b - a, -x),    f'' = phi(-a, b - 2a, -x),

so every statistic is a polynomial in exactly evaluated Wright values and
its tolerance is 10 times the propagated evaluation error.
"""
from dataclasses import dataclass
import math

import numpy as np
from scipy.special import logsumexp

from .distribution import AdmissiblePair, DensityModel
from .errors import AccuracyError, DomainError
from .gamma_kit import log_abs_gamma
from .mittag_leffler import ml_values, reciprocal_convexity_statistic
from .reports import GridSpec, ScanReport, Verdict, verdict_from_samples
from .roots import bracketed_root
from .wright import phi_values, tail_cutoff

__all__ = [
    "GridSpec", "ScanReport", "Verdict", "ZeroReport",
    "default_grid", "logconcavity_scan", "logconcavity_statistic", "turan_check", "turan_statistic", "count_zeros",
    "count_inflections", "count_derivative_sign_changes", "reciprocal_convexity_un",
    "reciprocal_convexity_grid", "recip_default_grid", "msu_classify", "msu_predicted", "msu_statistic",
]

DEFAULT_GRID_POINTS = 2000
TOL_FACTOR = 10.0
EPS = 2.220446049250313e-16
UN_REL_TOL = 1e-12


@dataclass(frozen=True)
class ZeroReport:
    """Certified positive zeros of x -> phi(rho, beta, -x) on (0, xmax]."""

    rho: float
    beta: float
    count: int
    locations: tuple
    scan_range: tuple

    def to_csv(self):
        lines = ["rho,beta,index,location"]
        lines += [f"{self.rho:.17g},{self.beta:.17g},{i},{x:.17g}" for i, x in enumerate(self.locations)]
        return "\n".join(lines) + "\n"

    def to_text(self):
        out = [f"rho       = {self.rho:.17g}", f"beta      = {self.beta:.17g}",
               f"range     = (0, {self.scan_range[1]:.17g}]", f"count     = {self.count}"]
        out += [f"zero[{i}]   = {x:.17g}" for i, x in enumerate(self.locations)]
        return "\n".join(out) + "\n"


def _pair(p):
    p = p.params if isinstance(p, DensityModel) else p
    p = p if isinstance(p, AdmissiblePair) else AdmissiblePair(float(p[0]), float(p[1]))
    if not 0 < p.alpha < 1:
        raise DomainError("the scan needs alpha in (0, 1)")
    return p


def _phi(alpha, b, x):
    v, e = phi_values(-alpha, b, -x, strict=False)
    return v, e


def default_grid(p, n=DEFAULT_GRID_POINTS):
    """Linear on [0, 2 mode + 1], then geometric out to the e^-60 tail of the density."""
    p = _pair(p)
    mode = DensityModel(p, build_table=False).mode_cache
    split = 2.0 * mode + 1.0
    xmax = max(tail_cutoff(p.alpha, p.beta), 2.0 * split)
    return GridSpec(0.0, xmax, int(n), "mixed", split)


def _grid_points(p, grid):
    grid = default_grid(p) if grid is None else grid
    xs = grid.points()
    if np.any(xs < 0):
        raise DomainError("scan grids live on x >= 0")
    return grid, xs


def _params_of(p):
    return {"alpha": p.alpha, "beta": p.beta}


def _report(prop, params, grid, values, errors, xs):
    verdict, vmin, witness, tol = verdict_from_samples(values, errors, xs, factor=TOL_FACTOR)
    return ScanReport(prop, params, grid, verdict, vmin, witness, tol)


# --------------------------------------------------------------------------
# Log-concavity, Turan, MSU

def logconcavity_statistic(p, x):
    """psi = f'^2 - f f'' (up to the positive factor Gamma(a+b)^2) with its error."""
    p = _pair(p)
    a, b = p.alpha, p.beta
    x = np.atleast_1d(np.asarray(x, dtype=float))
    f0, e0 = _phi(a, b, x)
    f1, e1 = _phi(a, b - a, x)
    f2, e2 = _phi(a, b - 2 * a, x)
    psi = f1**2 - f0 * f2
    err = 2 * np.abs(f1) * e1 + np.abs(f0) * e2 + np.abs(f2) * e0 + EPS * (f1**2 + np.abs(f0 * f2))
    return psi, err


def logconcavity_scan(p, grid=None):
    """Sign of psi on the grid: ``holds`` means the density is log-concave there."""
    p = _pair(p)
    grid, xs = _grid_points(p, grid)
    psi, err = logconcavity_statistic(p, xs)
    return _report("logconcavity", _params_of(p), grid, psi, err, xs)


def turan_statistic(p, x):
    """phi(-a, b, -x)^2 - phi(-a, b+a, -x) phi(-a, b-a, -x) with its error."""
    p = _pair(p)
    a, b = p.alpha, p.beta
    x = np.atleast_1d(np.asarray(x, dtype=float))
    f0, e0 = _phi(a, b, x)
    fp, ep = _phi(a, b + a, x)
    fm, em = _phi(a, b - a, x)
    T = f0**2 - fp * fm
    err = 2 * np.abs(f0) * e0 + np.abs(fp) * em + np.abs(fm) * ep + EPS * (f0**2 + np.abs(fp * fm))
    return T, err


def turan_check(alpha, beta, grid=None):
    """Turan-type inequality phi(-a, b+a, -x) phi(-a, b-a, -x) <= phi(-a, b, -x)^2 on the grid."""
    p = _pair((alpha, beta))
    grid, xs = _grid_points(p, grid)
    T, err = turan_statistic(p, xs)
    return _report("turan", _params_of(p), grid, T, err, xs)


def msu_predicted(p):
    """Closed-form characterisation: beta >= alpha, or beta = 0 and alpha <= 1/2."""
    p = _pair(p)
    return bool(p.beta >= p.alpha or (p.beta == 0 and p.alpha <= 0.5))


def msu_statistic(p, x):
    """S = x psi - f f', which is >= 0 iff t -> log f(e^t) is concave at t = log x."""
    p = _pair(p)
    a, b = p.alpha, p.beta
    x = np.atleast_1d(np.asarray(x, dtype=float))
    f0, e0 = _phi(a, b, x)
    f1, e1 = _phi(a, b - a, x)
    f2, e2 = _phi(a, b - 2 * a, x)
    psi = f1**2 - f0 * f2
    psi_err = 2 * np.abs(f1) * e1 + np.abs(f0) * e2 + np.abs(f2) * e0
    # f' = -phi(-a, b-a, -x)
    S = x * psi + f0 * f1
    err = (x * psi_err + np.abs(f0) * e1 + np.abs(f1) * e0
           + EPS * (x * (f1**2 + np.abs(f0 * f2)) + np.abs(f0 * f1)) * 2)
    return S, err


def msu_classify(p, grid=None):
    """(predicted, report) for multiplicative strong unimodality."""
    p = _pair(p)
    grid, xs = _grid_points(p, grid)
    S, err = msu_statistic(p, xs)
    return msu_predicted(p), _report("msu", _params_of(p), grid, S, err, xs)


# --------------------------------------------------------------------------
# Sign changes

def _certified_brackets(v, e, xs):
    """Brackets between consecutive certified points of opposite sign.

    A point is certified when |value| > 10 * error. Returns the brackets and
    the mask of certified points.
    """
    cert = np.abs(v) > TOL_FACTOR * e
    idx = np.nonzero(cert)[0]
    s = np.sign(v[idx])
    flips = np.nonzero(s[1:] != s[:-1])[0]
    return [(xs[idx[i]], xs[idx[i + 1]]) for i in flips], cert


def _refine(f, lo, hi, xtol=1e-9):
    return bracketed_root(f, lo, hi, xtol=xtol).root


def _scalar(alpha, b):
    return lambda x: float(_phi(alpha, b, np.array([x]))[0][0])


def count_zeros(rho, beta, xmax=None, n=DEFAULT_GRID_POINTS):
    """Certified sign changes of x -> phi(rho, beta, -x) on (0, xmax].

    The default ``xmax`` puts the saddle variable t* = (a x)^(1/(1-a)) at
    30 + 5|beta|, well inside the regime where the exponentially small
    positive asymptotic term dominates.
    """
    rho, beta = float(rho), float(beta)
    if not -1 < rho < 0:
        raise DomainError("zero counting needs rho in (-1, 0)")
    a = -rho
    if xmax is None:
        xmax = (30.0 + 5.0 * abs(beta)) ** (1 - a) / a
    xs = np.linspace(0.0, float(xmax), int(n) + 1)[1:]
    v, e = _phi(a, beta, xs)
    brackets, cert = _certified_brackets(v, e, xs)
    if not cert[-1] or cert.mean() < 0.9:
        raise AccuracyError(f"sign of phi({rho}, {beta}, -x) not certified on (0, {xmax}]",
                            best=(v, e))
    f = _scalar(a, beta)
    locs = tuple(sorted(float(_refine(f, lo, hi)) for lo, hi in brackets))
    return ZeroReport(rho, beta, len(locs), locs, (0.0, float(xmax)))


def _count_changes(p, b, grid, what):
    p = _pair(p)
    grid, xs = _grid_points(p, grid)
    v, e = _phi(p.alpha, b, xs)
    brackets, cert = _certified_brackets(v, e, xs)
    # points where the value underflows to an exact zero carry no sign
    live = (v != 0) | (e != 0)
    if not live.any() or cert[live].mean() < 0.5:
        raise AccuracyError(f"{what}: too few certified grid points", best=(v, e))
    return len(brackets)


def count_inflections(p, grid=None):
    """Number of certified sign changes of the second derivative of the density."""
    p = _pair(p)
    if not (0.5 <= p.alpha < 1 and 0 <= p.beta <= p.alpha):
        raise DomainError("inflection counting needs alpha in [1/2, 1) and beta in [0, alpha]")
    return _count_changes(p, p.beta - 2 * p.alpha, grid, "inflections")


def count_derivative_sign_changes(p, grid=None):
    """Number of certified sign changes of the derivative of the density."""
    p = _pair(p)
    return _count_changes(p, p.beta - p.alpha, grid, "derivative")


# --------------------------------------------------------------------------
# Reciprocal convexity of Mittag-Leffler functions

def _log_un(alpha, beta, nmax):
    """log u_n for n = 0..nmax; -inf where u_n = 0."""
    k = np.arange(nmax + 1)
    lg, sg = log_abs_gamma(beta + alpha * k)
    # log(1/Gamma) with -inf at the poles, where 1/Gamma vanishes
    lr = np.where(sg > 0, -lg, -np.inf)
    out = np.empty(nmax + 1)
    for n in range(nmax + 1):
        terms = lr[: n + 1] + lr[n::-1]
        s = logsumexp(terms) if np.any(np.isfinite(terms)) else -np.inf
        lead, lead_sign = log_abs_gamma(beta + alpha * (n + 1))
        out[n] = lead - math.log(n + 1) + s if lead_sign > 0 else -np.inf
    return out


def reciprocal_convexity_un(alpha, beta, nmax=60):
    """Monotonicity of u_n = Gamma(b + a(n+1))/(n+1) sum_k 1/(Gamma(b+ak) Gamma(b+a(n-k))).

    Verdict ``holds`` iff u_{n+1} >= u_n (1 - 1e-12) for all n < nmax.
    ``min_value`` is the smallest relative increment and ``witness`` its n.
    """
    alpha, beta, nmax = float(alpha), float(beta), int(nmax)
    if not alpha > 0 or beta < 0:
        raise DomainError("needs alpha > 0 and beta >= 0")
    if nmax < 2:
        raise DomainError("nmax must be >= 2")
    lu = _log_un(alpha, beta, nmax)
    with np.errstate(invalid="ignore"):
        inc = np.expm1(lu[1:] - lu[:-1])
    inc = np.where(np.isneginf(lu[:-1]), np.inf, inc)
    i = int(np.argmin(inc))
    verdict = Verdict.HOLDS if inc[i] >= -UN_REL_TOL else Verdict.FAILS
    grid = GridSpec(0, nmax, nmax + 1, "index")
    return ScanReport("recip-convexity-un", {"alpha": alpha, "beta": beta}, grid,
                      verdict, float(inc[i]), float(i), UN_REL_TOL, extra={"log_u": lu})


def recip_default_grid(alpha, halfline, n=400):
    if halfline == "positive":
        # E grows like exp(x^(1/alpha)); stop near exp(50)
        return GridSpec(0.0, 50.0 ** alpha, n, "linear")
    return GridSpec(-200.0, -1e-3, n, "log")


def reciprocal_convexity_grid(alpha, beta, halfline="positive", grid=None):
    """2 E'^2 - E E'' >= -tol on a half-line grid, restricted to points with E > 0."""
    alpha, beta = float(alpha), float(beta)
    if halfline not in ("positive", "negative"):
        raise DomainError("halfline must be 'positive' or 'negative'")
    if not alpha > 0 or beta < 0:
        raise DomainError("needs alpha > 0 and beta >= 0")
    grid = recip_default_grid(alpha, halfline) if grid is None else grid
    xs = grid.points()
    if halfline == "negative":
        xs = np.unique(np.concatenate([xs[xs <= 0], [0.0]]))
    elif np.any(xs < 0):
        raise DomainError("a positive half-line grid needs x >= 0")
    D, err = reciprocal_convexity_statistic((alpha, beta), xs)
    E, Ee = ml_values((alpha, beta), xs)
    keep = E > TOL_FACTOR * Ee
    if not keep.any():
        raise AccuracyError("E is not certified positive anywhere on the grid")
    rep = _report(f"recip-convexity-{halfline}", {"alpha": alpha, "beta": beta}, grid,
                  D[keep], err[keep], xs[keep])
    return rep

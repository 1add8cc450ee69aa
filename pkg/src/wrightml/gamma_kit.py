"""Gamma-function primitives on the whole real line.

The float kernels are scipy's ``rgamma``/``gammaln``/``gammasgn``. Arguments
within ``POLE_SNAP`` of a non-positive integer are treated as sitting on the
pole, which keeps the sign of 1/Gamma clean in residual computations.
"""
import numpy as np
from scipy import special as sc

from .errors import DomainError

POLE_SNAP = 1e-12


def _pole_mask(x):
    x = np.asarray(x, dtype=float)
    r = np.round(x)
    return (r <= 0) & (np.abs(x - r) <= POLE_SNAP)


def recip_gamma(x):
    """1/Gamma(x), exactly zero at the poles of Gamma.

    Accepts scalars or arrays and returns the same shape.
    """
    xa = np.asarray(x, dtype=float)
    out = np.where(_pole_mask(xa), 0.0, sc.rgamma(xa))
    return float(out) if out.ndim == 0 else out


def log_abs_gamma(x):
    """Return ``(ln|Gamma(x)|, sign Gamma(x))``.

    At a pole the pair is ``(inf, 0)``.
    """
    xa = np.asarray(x, dtype=float)
    pole = _pole_mask(xa)
    lg = np.where(pole, np.inf, sc.gammaln(xa))
    sg = np.where(pole, 0.0, sc.gammasgn(xa))
    if lg.ndim == 0:
        return float(lg), int(sg)
    return lg, sg.astype(int)


def log_abs_recip_gamma(x):
    """Return ``(ln|1/Gamma(x)|, sign)`` with ``(-inf, 0)`` at poles."""
    lg, sg = log_abs_gamma(x)
    return -lg, sg


def pochhammer(a, s):
    """Rising factorial (a)_s = Gamma(a+s)/Gamma(a) for real s and a > 0."""
    a = float(a)
    s = float(s)
    if not a > 0:
        raise DomainError(f"pochhammer needs a > 0, got a={a}")
    if s == 0:
        return 1.0
    lg_num, sg_num = log_abs_gamma(a + s)
    if sg_num == 0:
        raise DomainError(f"a + s = {a + s} is a pole of Gamma")
    with np.errstate(over="ignore"):
        return sg_num * float(np.exp(lg_num - sc.gammaln(a)))

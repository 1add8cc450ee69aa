"""Critical log-concavity parameters.

rho(alpha) = 1/Gamma(1-2a)^2 - 1/(Gamma(1-a) Gamma(1-3a)) is positive on
(0, alpha*) and negative on (alpha*, 1). Its two-parameter analogue

    rho(alpha, beta) = 1/Gamma(beta-a)^2 - 1/(Gamma(beta) Gamma(beta-2a))

reduces to rho(alpha) at beta = 1 - alpha and has a unique root alpha*(beta)
in ((beta+1)/2, 1) for beta in (0, 1).
"""
from dataclasses import dataclass
import math

import numpy as np

from .errors import DomainError
from .gamma_kit import recip_gamma
from .roots import bracketed_root

ROOT_TOL = 1e-13


@dataclass(frozen=True)
class CriticalResult:
    """A bracketed root of a critical-parameter equation.

    ``flag`` is ``'root'`` for a computed root and ``'convention'`` where
    the value 1 is assigned by convention (beta = 0 or beta >= 1).
    """

    alpha_star: float
    bracket: tuple
    residual: float
    iterations: int
    flag: str = "root"


def rho_of_alpha(alpha):
    """rho(alpha) for alpha in (0, 1); vectorised."""
    a = np.asarray(alpha, dtype=float)
    out = recip_gamma(1 - 2 * a) ** 2 - recip_gamma(1 - a) * recip_gamma(1 - 3 * a)
    return float(out) if np.ndim(out) == 0 else out


def rho_factorized(alpha):
    """rho(alpha) in product form, valid away from alpha in {1/2, 2/3}.

    rho = (1/Gamma(1-2a))^2 * (1 - K(a)), with
    K(a) = (3a-1)(3a-2) Gamma(2-2a)^2 / ((2a-1)^2 Gamma(1-a) Gamma(3-3a)).
    """
    a = np.asarray(alpha, dtype=float)
    return recip_gamma(1 - 2 * a) ** 2 * (1 - rho_factor(a))


def rho_factor(alpha):
    """K(alpha) above; increases from 0 at 2/3 towards 3/2 as alpha -> 1."""
    from scipy.special import gamma

    a = np.asarray(alpha, dtype=float)
    return ((3 * a - 1) * (3 * a - 2) * gamma(2 - 2 * a) ** 2
            / ((2 * a - 1) ** 2 * gamma(1 - a) * gamma(3 - 3 * a)))


def solve_alpha_star():
    """The unique root of rho on (0, 1), bracketed on (2/3, 1)."""
    res = bracketed_root(rho_of_alpha, 2.0 / 3.0 + 1e-6, 1.0 - 1e-9, xtol=ROOT_TOL)
    return CriticalResult(res.root, res.bracket, res.residual, res.iterations)


def rho_of_alpha_beta(alpha, beta):
    """rho(alpha, beta); vectorised over both arguments."""
    a = np.asarray(alpha, dtype=float)
    b = np.asarray(beta, dtype=float)
    out = recip_gamma(b - a) ** 2 - recip_gamma(b) * recip_gamma(b - 2 * a)
    return float(out) if np.ndim(out) == 0 else out


def solve_alpha_star_beta(beta):
    """alpha*(beta): root of rho(., beta) on ((beta+1)/2, 1).

    By convention alpha*(0) = 1 and alpha*(beta) = 1 for beta >= 1; those
    return ``flag='convention'``.
    """
    beta = float(beta)
    if beta < 0 or not math.isfinite(beta):
        raise DomainError(f"beta must be a finite number >= 0, got {beta}")
    if beta == 0 or beta >= 1:
        return CriticalResult(1.0, (1.0, 1.0), 0.0, 0, flag="convention")
    lo = (beta + 1) / 2
    res = bracketed_root(lambda a: rho_of_alpha_beta(a, beta), lo, 1.0, xtol=ROOT_TOL)
    return CriticalResult(res.root, res.bracket, res.residual, res.iterations)


def rho_curve(npoints):
    """Rows (alpha_i, rho(alpha_i)) on the grid alpha_i = i/(npoints+1), i = 1..npoints."""
    npoints = int(npoints)
    if npoints < 2:
        raise DomainError("npoints must be >= 2")
    alpha = np.arange(1, npoints + 1) / (npoints + 1)
    return np.column_stack([alpha, rho_of_alpha(alpha)])

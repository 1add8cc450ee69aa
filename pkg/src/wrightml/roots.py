"""Bracketed scalar root finding."""
from dataclasses import dataclass
import math

from .errors import BracketError


@dataclass(frozen=True)
class RootResult:
    root: float
    bracket: tuple
    residual: float
    iterations: int


def bracketed_root(f, lo, hi, xtol=1e-13, maxiter=200):
    """Root of ``f`` on ``[lo, hi]`` by bisection with secant acceleration.

    The secant (regula falsi, Illinois variant) step is used while it
    shrinks the bracket quickly; otherwise the step is a bisection. Every
    iterate stays inside the current sign-change bracket.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return RootResult(lo, (lo, hi), 0.0, 0)
    if fhi == 0:
        return RootResult(hi, (lo, hi), 0.0, 0)
    if math.copysign(1, flo) == math.copysign(1, fhi):
        raise BracketError(f"no sign change on [{lo}, {hi}]: f={flo}, {fhi}")
    a, b, fa, fb = lo, hi, flo, fhi
    wa, wb = fa, fb  # Illinois-weighted values used for the secant
    side = 0
    checkpoint = b - a
    it = 0
    for it in range(1, maxiter + 1):
        width = b - a
        if it % 3 == 0:
            force_bisect = width > 0.5 * checkpoint
            checkpoint = width
        else:
            force_bisect = False
        x = b - wb * (b - a) / (wb - wa)
        if force_bisect or not (a < x < b):
            x = 0.5 * (a + b)
        fx = f(x)
        if fx == 0:
            return RootResult(x, (x, x), 0.0, it)
        if math.copysign(1, fx) == math.copysign(1, fa):
            a, fa, wa = x, fx, fx
            if side == -1:
                wb *= 0.5
            side = -1
        else:
            b, fb, wb = x, fx, fx
            if side == 1:
                wa *= 0.5
            side = 1
        if b - a <= xtol:
            break
    root, res = (a, fa) if abs(fa) <= abs(fb) else (b, fb)
    return RootResult(root, (a, b), res, it)

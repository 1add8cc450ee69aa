"""Vectorised double-double arithmetic.

A double-double value is the unevaluated sum ``hi + lo`` of two float64
numbers with ``|lo| <= ulp(hi) / 2``, which carries roughly 106 bits of
significand. All functions take and return ``(hi, lo)`` tuples whose
members are numpy arrays (or floats) of a common shape.

Only what the alternating series need is provided: the four operations,
``exp``, ``log``, ``sin(pi x)`` and a log-gamma kernel valid on the whole
real line.
"""
from fractions import Fraction
from math import factorial

import numpy as np

EPS_DD = 2.0 ** -104

PI = (3.141592653589793, 1.2246467991473532e-16)
LN2 = (0.6931471805599453, 2.3190468138462996e-17)
LN_PI = (1.1447298858494002, 1.0265951162707826e-17)
HALF_LN_2PI = (0.9189385332046728, -3.8782941580672414e-17)

_SPLITTER = 134217729.0  # 2**27 + 1
_STIRLING_SHIFT = 25.0


def _from_fraction(q):
    hi = float(q)
    return hi, float(q - Fraction(hi))


def _bernoulli_even(kmax):
    # Akiyama-Tanigawa; returns B_2, B_4, ..., B_{2 kmax} exactly
    m = 2 * kmax
    a = [Fraction(0)] * (m + 1)
    out = []
    for i in range(m + 1):
        a[i] = Fraction(1, i + 1)
        for j in range(i, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        if i >= 2 and i % 2 == 0:
            out.append(a[0])
    return out


_STIRLING = [
    _from_fraction(b / (2 * k * (2 * k - 1)))
    for k, b in enumerate(_bernoulli_even(14), start=1)
]
_INV_FACT = [_from_fraction(Fraction(1, factorial(i))) for i in range(32)]


def asdd(x):
    x = np.asarray(x, dtype=float)
    return x, np.zeros_like(x)


def two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def _split(a):
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def add(a, b):
    s, e = two_sum(a[0], b[0])
    t, f = two_sum(a[1], b[1])
    s, e = quick_two_sum(s, e + t)
    return quick_two_sum(s, e + f)


def neg(a):
    return -a[0], -a[1]


def sub(a, b):
    return add(a, neg(b))


def mul(a, b):
    p, e = two_prod(a[0], b[0])
    return quick_two_sum(p, e + (a[0] * b[1] + a[1] * b[0]))


def mul_d(a, d):
    p, e = two_prod(a[0], d)
    return quick_two_sum(p, e + a[1] * d)


def div(a, b):
    q1 = a[0] / b[0]
    r = sub(a, mul_d(b, q1))
    q2 = r[0] / b[0]
    r = sub(r, mul_d(b, q2))
    q3 = r[0] / b[0]
    return add(quick_two_sum(q1, q2), (q3, np.zeros_like(q3)))


def where(mask, a, b):
    return np.where(mask, a[0], b[0]), np.where(mask, a[1], b[1])


def _horner(coeffs, x):
    acc = (np.full_like(x[0], coeffs[-1][0]), np.full_like(x[0], coeffs[-1][1]))
    for c in reversed(coeffs[:-1]):
        acc = add(mul(acc, x), c)
    return acc


def exp(a):
    hi = np.asarray(a[0], dtype=float)
    lo = np.asarray(a[1], dtype=float)
    finite = np.isfinite(hi) & (hi > -745.0) & (hi < 709.0)
    hi_s = np.where(finite, hi, 0.0)
    lo_s = np.where(finite, lo, 0.0)
    k = np.round(hi_s / LN2[0])
    r = sub((hi_s, lo_s), add(two_prod(k, LN2[0]), (k * LN2[1], np.zeros_like(k))))
    r = (r[0] * 2.0 ** -10, r[1] * 2.0 ** -10)
    # expm1(r) = r * (1 + r/2 + r^2/6 + ...)
    s = mul(r, _horner(_INV_FACT[1:12], r))
    for _ in range(10):
        s = add(mul_d(s, 2.0), mul(s, s))
    s = add(s, (np.ones_like(hi_s), np.zeros_like(hi_s)))
    ki = k.astype(int)
    out_hi = np.ldexp(s[0], ki)
    out_lo = np.ldexp(s[1], ki)
    big = np.where(hi >= 709.0, np.inf, 0.0)
    out_hi = np.where(finite, out_hi, big)
    out_lo = np.where(finite, out_lo, 0.0)
    return out_hi, out_lo


def log(a):
    """Natural log for positive double-double input (one Newton step)."""
    hi = np.asarray(a[0], dtype=float)
    pos = hi > 0
    x0 = np.log(np.where(pos, hi, 1.0))
    x = (x0, np.zeros_like(x0))
    t = mul((np.where(pos, hi, 1.0), np.where(pos, a[1], 0.0)), exp(neg(x)))
    x = add(x, sub(t, (np.ones_like(x0), np.zeros_like(x0))))
    out_hi = np.where(pos, x[0], np.where(hi == 0, -np.inf, np.nan))
    return out_hi, np.where(pos, x[1], 0.0)


_SIN_C = [_from_fraction(Fraction((-1) ** k, factorial(2 * k + 1))) for k in range(15)]
_COS_C = [_from_fraction(Fraction((-1) ** k, factorial(2 * k))) for k in range(15)]


def _sin_small(u):
    return mul(u, _horner(_SIN_C, mul(u, u)))


def _cos_small(u):
    return _horner(_COS_C, mul(u, u))


def sinpi(a):
    """sin(pi * a), exact zero at integers."""
    hi = np.asarray(a[0], dtype=float)
    k = np.round(hi)
    r = sub((hi, np.asarray(a[1], dtype=float)), (k, np.zeros_like(k)))
    # |r| <= 1/2 now; fold |r| > 1/4 onto the cosine
    absr = where(r[0] < 0, neg(r), r)
    use_cos = absr[0] > 0.25
    half = (np.full_like(hi, 0.5), np.zeros_like(hi))
    s_branch = _sin_small(mul(_pi_like(hi), absr))
    c_branch = _cos_small(mul(_pi_like(hi), sub(half, absr)))
    val = where(use_cos, c_branch, s_branch)
    sign = np.where(r[0] < 0, -1.0, 1.0) * np.where(np.mod(k, 2) == 0, 1.0, -1.0)
    val = (val[0] * sign, val[1] * sign)
    exact_zero = (r[0] == 0) & (r[1] == 0)
    return np.where(exact_zero, 0.0, val[0]), np.where(exact_zero, 0.0, val[1])


def _pi_like(like):
    return np.full_like(like, PI[0]), np.full_like(like, PI[1])


def lgamma_pos(a):
    """log Gamma(a) for double-double a >= 1/2."""
    hi = np.asarray(a[0], dtype=float)
    lo = np.asarray(a[1], dtype=float)
    m = np.maximum(0.0, np.ceil(_STIRLING_SHIFT - hi))
    prod = (np.ones_like(hi), np.zeros_like(hi))
    y = (hi, lo)
    for j in range(int(m.max()) if m.size else 0):
        nxt = mul(prod, add(y, (np.full_like(hi, float(j)), np.zeros_like(hi))))
        prod = where(j < m, nxt, prod)
    Y = add(y, (m, np.zeros_like(m)))
    lnY = log(Y)
    w = div((np.ones_like(hi), np.zeros_like(hi)), mul(Y, Y))
    corr = div(_horner(_STIRLING, w), Y)
    half = (np.full_like(hi, 0.5), np.zeros_like(hi))
    out = sub(mul(sub(Y, half), lnY), Y)
    out = add(out, (np.full_like(hi, HALF_LN_2PI[0]), np.full_like(hi, HALF_LN_2PI[1])))
    out = add(out, corr)
    return sub(out, log(prod))


def log_rgamma(a):
    """Return ``(log|1/Gamma(a)|, sign(1/Gamma(a)))`` for any real a.

    Poles of Gamma give ``(-inf, 0)``.
    """
    hi = np.asarray(a[0], dtype=float)
    lo = np.asarray(a[1], dtype=float)
    reflect = hi < 0.5
    with np.errstate(invalid="ignore", divide="ignore"):
        return _log_rgamma(hi, lo, reflect)


def _log_rgamma(hi, lo, reflect):
    one = (np.ones_like(hi), np.zeros_like(hi))
    z = where(reflect, sub(one, (hi, lo)), (hi, lo))
    lg = lgamma_pos(z)
    s = sinpi((hi, lo))
    s_abs = where(s[0] < 0, neg(s), s)
    lsin = log(s_abs)
    refl = sub(add(lsin, lg), (np.full_like(hi, LN_PI[0]), np.full_like(hi, LN_PI[1])))
    out = where(reflect, refl, neg(lg))
    sign = np.where(reflect, np.sign(s[0]), 1.0)
    pole = reflect & (s[0] == 0)
    return (np.where(pole, -np.inf, out[0]), np.where(pole, 0.0, out[1])), sign

"""Exact rational enclosures of logarithms and related helpers.

Everything here works on :class:`fractions.Fraction` and Python integers.
No floating point value is ever trusted: each function returns bounds that
are guaranteed by construction (truncated alternating-free series with an
explicit geometric tail bound).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import isqrt

import mpmath


def _floor_log2(x: Fraction) -> int:
    """Largest integer k with 2**k <= x (x > 0)."""
    k = x.numerator.bit_length() - x.denominator.bit_length()
    if _pow2(k) > x:
        k -= 1
    elif _pow2(k + 1) <= x:
        k += 1
    return k


def _pow2(k: int) -> Fraction:
    return Fraction(1 << k) if k >= 0 else Fraction(1, 1 << -k)


def round_down(x: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    return Fraction((x.numerator * scale) // x.denominator, scale)


def round_up(x: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    return Fraction(-((-x.numerator * scale) // x.denominator), scale)


def _atanh_bounds(z: Fraction, terms: int) -> tuple[Fraction, Fraction]:
    # atanh(z) = sum z^(2k+1)/(2k+1); all terms positive for 0 <= z < 1.
    z2 = z * z
    power = z
    total = Fraction(0)
    for k in range(terms):
        total += power / (2 * k + 1)
        power *= z2
    tail = power / ((2 * terms + 1) * (1 - z2))
    return total, total + tail


def _ln_dyadic_bounds(y: Fraction, work: int) -> tuple[Fraction, Fraction]:
    """Bounds on ln(y) for 1 <= y <= 2 with width about 2**-work."""
    if y == 1:
        return Fraction(0), Fraction(0)
    z = (y - 1) / (y + 1)  # in (0, 1/3]
    # 9**-terms <= 2**-work  =>  terms >= work / log2(9)
    terms = work * 10 // 31 + 2
    lo, hi = _atanh_bounds(z, terms)
    return 2 * lo, 2 * hi


@lru_cache(maxsize=64)
def ln2_bounds(work: int) -> tuple[Fraction, Fraction]:
    """Rigorous enclosure of ln 2 = 2 atanh(1/3)."""
    lo, hi = _atanh_bounds(Fraction(1, 3), work * 10 // 31 + 2)
    return round_down(2 * lo, work + 4), round_up(2 * hi, work + 4)


def ln_bounds(x: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Enclosure [lo, hi] of the natural log of ``x`` with hi - lo <= 2**-bits."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("logarithm of a nonpositive number")
    k = _floor_log2(x)
    y = x / _pow2(k)
    work = bits + 8 + abs(k).bit_length()
    while True:
        y_lo, y_hi = round_down(y, work), round_up(y, work)
        l_lo, _ = _ln_dyadic_bounds(max(y_lo, Fraction(1)), work)
        _, l_hi = _ln_dyadic_bounds(min(y_hi, Fraction(2)), work)
        c_lo, c_hi = ln2_bounds(work)
        if k >= 0:
            lo, hi = l_lo + k * c_lo, l_hi + k * c_hi
        else:
            lo, hi = l_lo + k * c_hi, l_hi + k * c_lo
        lo, hi = round_down(lo, bits + 2), round_up(hi, bits + 2)
        if hi - lo <= _pow2(-bits):
            return lo, hi
        work += 16


def log2_bounds(x: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Enclosure [lo, hi] of log2(x) with hi - lo <= 2**-bits.

    Exact (lo == hi) whenever ``x`` is an integral power of two.
    """
    x = Fraction(x)
    if x <= 0:
        raise ValueError("logarithm of a nonpositive number")
    k = _floor_log2(x)
    y = x / _pow2(k)
    if y == 1:
        return Fraction(k), Fraction(k)
    work = bits + 8
    while True:
        y_lo, y_hi = round_down(y, work), round_up(y, work)
        l_lo, _ = _ln_dyadic_bounds(max(y_lo, Fraction(1)), work)
        _, l_hi = _ln_dyadic_bounds(min(y_hi, Fraction(2)), work)
        c_lo, c_hi = ln2_bounds(work)
        lo = k + round_down(l_lo / c_hi, bits + 2)
        hi = k + round_up(l_hi / c_lo, bits + 2)
        if hi - lo <= _pow2(-bits):
            return lo, hi
        work += 16


def log2_approx(x: Fraction, bits: int) -> Fraction:
    """A rational r with |r - log2(x)| <= 2**-bits."""
    lo, hi = log2_bounds(x, bits)
    return (lo + hi) / 2


def iroot_floor(n: int, k: int) -> int:
    """floor(n ** (1/k)) for n >= 0, k >= 1, in exact integer arithmetic."""
    if n < 0 or k < 1:
        raise ValueError("iroot_floor needs n >= 0 and k >= 1")
    if n < 2 or k == 1:
        return n
    if k == 2:
        return isqrt(n)
    r = 1 << ((n.bit_length() + k - 1) // k)
    # Newton from above converges monotonically to the floor root.
    while True:
        s = ((k - 1) * r + n // r ** (k - 1)) // k
        if s >= r:
            break
        r = s
    while r ** k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


def rational_power_bounds(x: Fraction, exponent: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Dyadic bounds lo <= x**exponent < hi (x > 0, exponent > 0).

    The grid is fine enough that hi - lo = 2**-s with s >= bits plus the size
    of x**a, so the relative width is about 2**-bits.
    """
    x, exponent = Fraction(x), Fraction(exponent)
    if x <= 0 or exponent <= 0:
        raise ValueError("rational_power_bounds needs x > 0 and exponent > 0")
    a, b = exponent.numerator, exponent.denominator
    xa = x ** a
    s = bits + xa.denominator.bit_length() + 2
    target = (xa.numerator << (s * b)) // xa.denominator
    r = iroot_floor(target, b)
    if r ** b == target and target * xa.denominator == xa.numerator << (s * b):
        return Fraction(r, 1 << s), Fraction(r, 1 << s)
    return Fraction(r, 1 << s), Fraction(r + 1, 1 << s)


def rational_power_lower(x: Fraction, exponent: Fraction, bits: int) -> Fraction:
    return rational_power_bounds(x, exponent, bits)[0]


def rational_power_upper(x: Fraction, exponent: Fraction, bits: int) -> Fraction:
    return rational_power_bounds(x, exponent, bits)[1]


def ceil_exp_plus_one(x_num: int, x_den: int, root: int = 1) -> int:
    """ceil(exp(y) + 1) where y = (x_num / x_den) ** (1/root).

    The argument is a nonzero algebraic number, so exp(y) is transcendental
    and never an integer; widening the working precision therefore always
    separates the ceiling. Interval evaluation is delegated to mpmath.iv.
    """
    prec = 64
    while True:
        mpmath.iv.prec = prec
        y = (mpmath.iv.mpf(x_num) / x_den) ** (mpmath.iv.mpf(1) / root)
        v = mpmath.iv.exp(y) + 1
        lo, hi = int(mpmath.floor(v.a)), int(mpmath.floor(v.b))
        if lo == hi:
            return lo + 1
        prec *= 2

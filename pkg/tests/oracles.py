"""Reference computations written independently of the library."""

from __future__ import annotations

from fractions import Fraction


def oracle_round(x: Fraction, t: int) -> Fraction:
    """Nearest t-bit value, exact ties toward zero; written independently of the library."""
    if x == 0:
        return Fraction(0)
    s, a = (1, x) if x > 0 else (-1, -x)
    e = a.numerator.bit_length() - a.denominator.bit_length()
    while Fraction(2) ** e <= a:
        e += 1
    while Fraction(2) ** (e - 1) > a:
        e -= 1
    ulp = Fraction(2) ** (e - t)
    q = a / ulp
    lo = q.numerator // q.denominator
    rem = q - lo
    m = lo + 1 if rem > Fraction(1, 2) else lo
    return s * m * ulp


def power_H(alpha):
    """Limit of H for a term c x^alpha: alpha (alpha - 1) / (1 + alpha^2)."""
    return alpha * (alpha - 1) / (1 + alpha * alpha)


def pole_H(k):
    """Limit of H at a pole of order k."""
    return (k + 1) / k

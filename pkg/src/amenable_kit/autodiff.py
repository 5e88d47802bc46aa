"""Second-order forward-mode differentiation of expression trees.

A :class:`Jet2` carries (f, f', f'') at one point.  Besides the values, each
jet records whether its value is numerically zero: exact zeros of
transcendental expressions are rarely representable, so cancellation is
tracked at the node where it happens (a sum, or an intrinsic whose argument
sits on one of its zeros) and propagated through products and quotients.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import expr as ex
from .refnum import mp, mpf, numerically_zero, to_mpf


@dataclass(frozen=True)
class Jet2:
    v: object
    d1: object
    d2: object
    vanishes: bool = False

    @classmethod
    def const(cls, c) -> "Jet2":
        c = mpf(c)
        return cls(c, mpf(0), mpf(0), c == 0)

    @classmethod
    def var(cls, x) -> "Jet2":
        x = mpf(x)
        return cls(x, mpf(1), mpf(0), x == 0)

    def __add__(self, o: "Jet2") -> "Jet2":
        v = self.v + o.v
        z = (self.vanishes and o.vanishes) or numerically_zero(v, max(abs(self.v), abs(o.v)))
        return Jet2(v, self.d1 + o.d1, self.d2 + o.d2, z)

    def __sub__(self, o: "Jet2") -> "Jet2":
        v = self.v - o.v
        z = (self.vanishes and o.vanishes) or numerically_zero(v, max(abs(self.v), abs(o.v)))
        return Jet2(v, self.d1 - o.d1, self.d2 - o.d2, z)

    def __neg__(self) -> "Jet2":
        return Jet2(-self.v, -self.d1, -self.d2, self.vanishes)

    def __mul__(self, o: "Jet2") -> "Jet2":
        return Jet2(
            self.v * o.v,
            self.d1 * o.v + self.v * o.d1,
            self.d2 * o.v + 2 * self.d1 * o.d1 + self.v * o.d2,
            self.vanishes or o.vanishes,
        )

    def scale(self, a) -> "Jet2":
        a = mpf(a)
        return Jet2(a * self.v, a * self.d1, a * self.d2, self.vanishes or a == 0)

    def __truediv__(self, o: "Jet2") -> "Jet2":
        if o.v == 0:
            raise ZeroDivisionError("jet division by zero")
        q = self.v / o.v
        d1 = (self.d1 - q * o.d1) / o.v
        d2 = (self.d2 - 2 * d1 * o.d1 - q * o.d2) / o.v
        return Jet2(q, d1, d2, self.vanishes)

    def chain(self, f0, f1, f2, vanishes: bool = False) -> "Jet2":
        """Compose an outer function with value/derivatives (f0, f1, f2) at self.v."""
        return Jet2(f0, f1 * self.d1, f2 * self.d1**2 + f1 * self.d2, vanishes)


def _intrinsic(kind: str, a: Jet2, node) -> Jet2:
    x = a.v
    ex.check_growth(kind, x, node)
    if kind == "sin":
        s, c = mp.sin(x), mp.cos(x)
        return a.chain(s, c, -s, a.vanishes or numerically_zero(s, abs(x)))
    if kind == "cos":
        s, c = mp.sin(x), mp.cos(x)
        return a.chain(c, -s, -c, numerically_zero(c, abs(x)))
    if kind == "tan":
        s, c = mp.sin(x), mp.cos(x)
        if c == 0:
            raise ex.DomainViolation(node, x, "pole of tan")
        t = s / c
        sec2 = 1 + t * t
        return a.chain(t, sec2, 2 * t * sec2, a.vanishes or numerically_zero(s, abs(x)))
    if kind == "cot":
        s, c = mp.sin(x), mp.cos(x)
        if s == 0 or (a.vanishes and x != 0):
            raise ex.DomainViolation(node, x, "pole of cot")
        t = c / s
        csc2 = 1 + t * t
        return a.chain(t, -csc2, 2 * t * csc2, numerically_zero(c, abs(x)))
    if kind == "exp":
        e = mp.exp(x)
        return a.chain(e, e, e)
    if kind == "log":
        if x <= 0:
            raise ex.DomainViolation(node, x, "log of non-positive value")
        return a.chain(mp.log(x), 1 / x, -1 / (x * x), numerically_zero(x - 1))
    if kind == "sinh":
        return a.chain(mp.sinh(x), mp.cosh(x), mp.sinh(x), a.vanishes)
    if kind == "cosh":
        return a.chain(mp.cosh(x), mp.sinh(x), mp.cosh(x))
    if kind == "atan":
        w = 1 + x * x
        return a.chain(mp.atan(x), 1 / w, -2 * x / (w * w), a.vanishes)
    if kind == "asinh":
        w = 1 + x * x
        r = mp.sqrt(w)
        return a.chain(mp.asinh(x), 1 / r, -x / (w * r), a.vanishes)
    if kind == "acosh":
        if x <= 1:
            raise ex.DomainViolation(node, x, "acosh outside (1, inf)")
        w = x * x - 1
        r = mp.sqrt(w)
        return a.chain(mp.acosh(x), 1 / r, -x / (w * r), numerically_zero(x - 1))
    if kind == "sqrt":
        if x <= 0 or a.vanishes:
            raise ex.DomainViolation(node, x, "sqrt at a non-positive value")
        r = mp.sqrt(x)
        return a.chain(r, 1 / (2 * r), -1 / (4 * r * x))
    if kind in ("gamma", "digamma", "trigamma"):
        if x <= 0 and mp.isint(x):
            raise ex.DomainViolation(node, x, f"pole of {kind}")
        if kind == "gamma":
            g = mp.gamma(x)
            p0, p1 = mp.psi(0, x), mp.psi(1, x)
            return a.chain(g, g * p0, g * (p0 * p0 + p1))
        m = 0 if kind == "digamma" else 1
        v = mp.psi(m, x)
        return a.chain(v, mp.psi(m + 1, x), mp.psi(m + 2, x), numerically_zero(v, 1))
    raise ValueError(f"unknown intrinsic {kind!r}")


def _pow(b: Jet2, q, node) -> Jet2:
    x = b.v
    if q.denominator == 1:
        n = q.numerator
        if n == 0:
            return Jet2.const(1)
        if n < 0 and (x == 0 or b.vanishes):
            raise ex.DomainViolation(node, x, "zero to a negative power")
        f0 = x**n
        f1 = n * x ** (n - 1) if n != 0 else mpf(0)
        f2 = n * (n - 1) * x ** (n - 2) if n not in (0, 1) else mpf(0)
        return b.chain(f0, f1, f2, b.vanishes and n > 0)
    if x <= 0 or b.vanishes:
        raise ex.DomainViolation(node, x, "non-positive base with non-integer exponent")
    a = to_mpf(q)
    f0 = mp.power(x, a)
    return b.chain(f0, a * f0 / x, a * (a - 1) * f0 / (x * x))


def eval_jet2(f: ex.Expr, x) -> Jet2:
    """(f(x), f'(x), f''(x)) at reference precision."""
    return _jet(f, Jet2.var(to_mpf(x)))


def _jet(e: ex.Expr, xj: Jet2) -> Jet2:
    if isinstance(e, ex.Var):
        return xj
    if isinstance(e, ex.Const):
        return Jet2.const(to_mpf(e.value))
    if isinstance(e, ex.Neg):
        return -_jet(e.arg, xj)
    if isinstance(e, ex.Add):
        return _jet(e.left, xj) + _jet(e.right, xj)
    if isinstance(e, ex.Sub):
        return _jet(e.left, xj) - _jet(e.right, xj)
    if isinstance(e, ex.Mul):
        return _jet(e.left, xj) * _jet(e.right, xj)
    if isinstance(e, ex.Div):
        den = _jet(e.right, xj)
        if den.v == 0 or den.vanishes:
            raise ex.DomainViolation(e, den.v, "division by zero")
        return _jet(e.left, xj) / den
    if isinstance(e, ex.Pow):
        return _pow(_jet(e.base, xj), e.exponent, e)
    return _intrinsic(e.kind, _jet(e.arg, xj), e)


def try_jet2(f: ex.Expr, x):
    try:
        return eval_jet2(f, x)
    except (ex.DomainViolation, ZeroDivisionError, ValueError):
        return None


def central_differences(f: ex.Expr, x, h=None) -> tuple:
    """(f', f'') by central differences at reference precision (test oracle)."""
    x = to_mpf(x)
    h = mp.ldexp(mpf(1), -40) * max(mpf(1), abs(x)) if h is None else to_mpf(h)
    fp, f0, fm = ex.evaluate(f, x + h), ex.evaluate(f, x), ex.evaluate(f, x - h)
    return (fp - fm) / (2 * h), (fp - 2 * f0 + fm) / (h * h)

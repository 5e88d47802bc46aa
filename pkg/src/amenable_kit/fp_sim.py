"""A binary floating-point system with precision t and unbounded exponent.

Representable numbers are 0 and +-m * 2**(e - t) with 2**(t-1) <= m < 2**t.
fl(x) is the nearest representable number; exact ties go to the one of
smaller magnitude.  +, -, * and / are computed exactly on rationals and then
rounded, so every recorded relative error delta is exact.  Intrinsics are
modelled as correctly rounded: the reference-precision value is rounded once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from . import expr as ex
from .refnum import mp, mpf, mpf_parts, to_fraction, to_mpf


class NoOutput(ArithmeticError):
    """The floating-point algorithm produced no value (domain or 0 division)."""

    def __init__(self, message: str, node_id: int | None = None):
        super().__init__(message)
        self.node_id = node_id


@dataclass(frozen=True)
class FpSystem:
    t: int

    def __post_init__(self):
        if self.t < 2:
            raise ValueError("precision t must be >= 2")

    @property
    def u(self) -> Fraction:
        return Fraction(1, 2**self.t)


@dataclass(frozen=True)
class FpValue:
    sign: int  # +1 or -1; 0 for the zero value
    mantissa: int
    exponent: int
    t: int

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    def to_fraction(self) -> Fraction:
        if self.sign == 0:
            return Fraction(0)
        k = self.exponent - self.t
        mag = Fraction(self.mantissa << k) if k >= 0 else Fraction(self.mantissa, 1 << -k)
        return mag if self.sign > 0 else -mag

    def to_mpf(self):
        if self.sign == 0:
            return mpf(0)
        return mp.ldexp(mpf(self.sign * self.mantissa), self.exponent - self.t)

    def hex(self) -> str:
        if self.sign == 0:
            return "0"
        s = "-" if self.sign < 0 else "+"
        return f"{s}0x{self.mantissa:x}p{self.exponent - self.t}"

    def __neg__(self) -> "FpValue":
        return FpValue(-self.sign, self.mantissa, self.exponent, self.t)


def _pow2(e: int) -> Fraction:
    return Fraction(1 << e) if e >= 0 else Fraction(1, 1 << -e)


def _zero(t: int) -> FpValue:
    return FpValue(0, 0, 0, t)


def _round_scaled(t: int, n: int, d: int, shift: int) -> FpValue:
    """Round (n / d) * 2**shift to t bits; d > 0.  Ties go toward zero."""
    if n == 0:
        return _zero(t)
    sign = 1 if n > 0 else -1
    n = abs(n)
    # e with 2**(e-1) <= n/d < 2**e, then shift it
    e = n.bit_length() - d.bit_length()
    if (n << max(0, -e)) >= (d << max(0, e)):
        e += 1
    if (n << max(0, 1 - e)) < (d << max(0, e - 1)):
        e -= 1
    # scaled = n/d * 2**(t-e), in [2**(t-1), 2**t)
    k = t - e
    num = n << k if k >= 0 else n
    den = d if k >= 0 else d << -k
    m, rem = divmod(num, den)
    if 2 * rem > den:
        m += 1
    e += shift
    if m == 1 << t:
        m >>= 1
        e += 1
    return FpValue(sign, m, e, t)


def _parts(x) -> tuple[int, int, int]:
    """x as (n, d, shift) with x = n / d * 2**shift."""
    if isinstance(x, FpValue):
        return x.sign * x.mantissa, 1, x.exponent - x.t
    if isinstance(x, Fraction):
        return x.numerator, x.denominator, 0
    if isinstance(x, int):
        return x, 1, 0
    if isinstance(x, float):
        q = Fraction(x)
        return q.numerator, q.denominator, 0
    v = to_mpf(x)
    if not mp.isfinite(v):
        raise ValueError("cannot round a non-finite value")
    man, exp = mpf_parts(v)
    return man, 1, exp


def round_fl(sys: FpSystem, x) -> FpValue:
    """Nearest element of F_u; ties resolve toward zero."""
    return _round_scaled(sys.t, *_parts(x))


def _delta_scaled(r: FpValue, n: int, d: int, shift: int) -> Fraction:
    """r / (n/d * 2**shift) - 1, exactly; the exponents nearly cancel."""
    if n == 0:
        return Fraction(0)
    k = r.exponent - r.t - shift
    q = Fraction(r.sign * r.mantissa * d, n)
    return (q * _pow2(k)) - 1


def delta_of(exact, rounded: FpValue) -> Fraction:
    return _delta_scaled(rounded, *_parts(exact))


# beyond this exponent gap a sum is the larger operand perturbed far below u
_ALIGN_LIMIT = 4096


def _exact_op(op: str, a: FpValue, b: FpValue) -> tuple[int, int, int]:
    na, _, ka = _parts(a)
    nb, _, kb = _parts(b)
    if op == "*":
        return na * nb, 1, ka + kb
    if op == "/":
        if nb == 0:
            raise NoOutput("division by zero")
        return (na, nb, ka - kb) if nb > 0 else (-na, -nb, ka - kb)
    if op == "-":
        nb = -nb
    elif op != "+":
        raise ValueError(f"unknown operation {op!r}")
    if na == 0:
        return nb, 1, kb
    if nb == 0:
        return na, 1, ka
    base = min(ka, kb)
    if abs(ka - kb) > _ALIGN_LIMIT:
        # keep the small operand only as a sticky contribution below every rounding boundary
        big, kbig, small = (na, ka, nb) if ka > kb else (nb, kb, na)
        sticky = 1 if small > 0 else -1
        return (big << (_ALIGN_LIMIT)) + sticky, 1, kbig - _ALIGN_LIMIT
    return (na << (ka - base)) + (nb << (kb - base)), 1, base


def fp_op(sys: FpSystem, op: str, a: FpValue, b: FpValue) -> tuple[FpValue, Fraction]:
    """a op b computed exactly then rounded; returns (result, delta).

    When the operands of a sum differ in scale by more than 2**4096 the
    smaller one is replaced by a sticky unit far below the last place; the
    rounded result is unaffected and delta is exact for that stand-in.
    """
    n, d, shift = _exact_op(op, a, b)
    r = _round_scaled(sys.t, n, d, shift)
    return r, _delta_scaled(r, n, d, shift)


def exact_value(op: str, a: FpValue, b: FpValue):
    """The exact result of a op b as a Fraction, or a reference mpf if it is huge."""
    n, d, shift = _exact_op(op, a, b)
    if abs(shift) <= 1 << 16:
        return Fraction(n, d) * _pow2(shift)
    return mp.ldexp(mp.fdiv(n, d), shift)


@dataclass(frozen=True)
class TraceRecord:
    node_id: int
    op: str
    inputs: tuple  # FpValues
    exact: object  # Fraction for arithmetic, reference mpf for intrinsics
    rounded: FpValue
    delta: Fraction

    def line(self) -> str:
        ins = ",".join(v.hex() for v in self.inputs) or "-"
        return f"{self.node_id}\t{self.op}\t{ins}\t{self.rounded.hex()}\t{self.delta.numerator}/{self.delta.denominator}"


@dataclass
class OpTrace:
    records: list = field(default_factory=list)

    def max_abs_delta(self) -> Fraction:
        return max((abs(r.delta) for r in self.records), default=Fraction(0))

    def export(self) -> str:
        """Line-delimited records: node id, op, inputs, result, delta."""
        return "\n".join(r.line() for r in self.records) + ("\n" if self.records else "")


_OPS = {ex.Add: "+", ex.Sub: "-", ex.Mul: "*", ex.Div: "/"}


def eval_in_fp(sys: FpSystem, f: ex.Expr, x, trace: bool = True) -> tuple[FpValue, OpTrace]:
    """Run the AST as a floating-point algorithm in F_u.

    The input is rounded first; every node is then one correctly rounded
    operation, in parse order.  Raises :class:`NoOutput` when a rounded
    intermediate leaves the domain of its node.
    """
    tr = OpTrace()
    xin = x if isinstance(x, FpValue) else (x if isinstance(x, Fraction) else to_fraction(x))
    xr = round_fl(sys, xin)
    if trace:
        tr.records.append(TraceRecord(-1, "input", (), xin, xr, delta_of(xin, xr)))
    counter = iter(range(10**9))
    val = _run(sys, f, xr, tr if trace else None, counter)
    return val, tr


def _record(tr, nid, op, inputs, exact, rounded):
    if tr is not None:
        tr.records.append(TraceRecord(nid, op, tuple(inputs), exact, rounded, delta_of(exact, rounded)))


def _run(sys: FpSystem, e: ex.Expr, xr: FpValue, tr, counter) -> FpValue:
    if isinstance(e, ex.Var):
        next(counter)
        return xr
    if isinstance(e, ex.Const):
        r = round_fl(sys, e.value)
        _record(tr, next(counter), "const", (), e.value, r)
        return r
    if isinstance(e, ex.Neg):
        a = _run(sys, e.arg, xr, tr, counter)
        next(counter)
        return -a
    if isinstance(e, tuple(_OPS)):
        a = _run(sys, e.left, xr, tr, counter)
        b = _run(sys, e.right, xr, tr, counter)
        nid = next(counter)
        try:
            r, d = fp_op(sys, _OPS[type(e)], a, b)
        except NoOutput as exc:
            raise NoOutput(str(exc), nid) from None
        if tr is not None:
            tr.records.append(TraceRecord(nid, _OPS[type(e)], (a, b), exact_value(_OPS[type(e)], a, b), r, d))
        return r
    arg_node = e.base if isinstance(e, ex.Pow) else e.arg
    a = _run(sys, arg_node, xr, tr, counter)
    nid = next(counter)
    av = a.to_mpf()
    try:
        if isinstance(e, ex.Pow):
            exact = ex.apply_pow(av, e.exponent, e)
            op = f"^{e.exponent}"
        else:
            exact = ex.apply_intrinsic(e.kind, av, e)
            op = e.kind
    except (ex.DomainViolation, ZeroDivisionError, ValueError) as exc:
        raise NoOutput(str(exc), nid) from None
    if not mp.isfinite(exact):
        raise NoOutput(f"{op} is not finite at the rounded argument", nid)
    r = round_fl(sys, exact)
    _record(tr, nid, op, (a,), exact, r)
    return r


def fp_value(sys: FpSystem, f: ex.Expr, x):
    """Output of the floating-point algorithm as a reference mpf."""
    v, _ = eval_in_fp(sys, f, x, trace=False)
    return v.to_mpf()


def representable(sys: FpSystem, lo_exp: int, hi_exp: int) -> Iterable[Fraction]:
    """Positive elements of F_u with exponent e in [lo_exp, hi_exp]."""
    t = sys.t
    for e in range(lo_exp, hi_exp + 1):
        for m in range(1 << (t - 1), 1 << t):
            yield FpValue(1, m, e, t).to_fraction()

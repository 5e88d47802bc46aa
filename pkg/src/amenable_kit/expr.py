"""Expression trees for univariate elementary functions.

Grammar (whitespace insensitive)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | atom ('^' signed_number)?
    atom   := number | 'x' | ident '(' expr ')' | '(' expr ')'

Nodes are frozen dataclasses, so trees are hashable and safe to share.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Union

import numpy as np
from scipy import special

from .refnum import mp, mpf, to_mpf

INTRINSICS = (
    "sin", "cos", "tan", "cot", "exp", "log", "sinh", "cosh", "atan",
    "asinh", "acosh", "sqrt", "gamma", "digamma", "trigamma",
)


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, offset: int, text: str = ""):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
        self.text = text


class UnknownIdentifier(ExprSyntaxError):
    pass


class NonConstantExponent(ExprSyntaxError):
    pass


class DomainViolation(ValueError):
    """Raised when a node is evaluated outside its natural domain."""

    def __init__(self, node: "Expr", value, reason: str):
        super().__init__(f"{reason}: {to_text(node)} at argument {mp.nstr(mpf(value), 12)}")
        self.node = node
        self.value = value
        self.reason = reason


# ---------------------------------------------------------------------------
# nodes


@dataclass(frozen=True)
class Const:
    value: Fraction


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Div:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: Fraction


@dataclass(frozen=True)
class Intrinsic:
    kind: str
    arg: "Expr"


Expr = Union[Const, Var, Neg, Add, Sub, Mul, Div, Pow, Intrinsic]
BINARY = (Add, Sub, Mul, Div)
X = Var()


def children(e: Expr) -> tuple:
    if isinstance(e, (Const, Var)):
        return ()
    if isinstance(e, BINARY):
        return (e.left, e.right)
    if isinstance(e, Pow):
        return (e.base,)
    return (e.arg,)


def walk(e: Expr) -> Iterator[Expr]:
    """Post-order traversal; node ids elsewhere are indices into this order."""
    for c in children(e):
        yield from walk(c)
    yield e


def node_count(e: Expr) -> int:
    return sum(1 for _ in walk(e))


def depth(e: Expr) -> int:
    cs = children(e)
    return 1 + (max(depth(c) for c in cs) if cs else 0)


def substitute(outer: Expr, inner: Expr) -> Expr:
    """Replace every occurrence of x in ``outer`` by ``inner`` (g o h)."""
    if isinstance(outer, Var):
        return inner
    if isinstance(outer, Const):
        return outer
    if isinstance(outer, BINARY):
        return type(outer)(substitute(outer.left, inner), substitute(outer.right, inner))
    if isinstance(outer, Pow):
        return Pow(substitute(outer.base, inner), outer.exponent)
    if isinstance(outer, Neg):
        return Neg(substitute(outer.arg, inner))
    return Intrinsic(outer.kind, substitute(outer.arg, inner))


compose = substitute


def reflect(e: Expr) -> Expr:
    """The expression for f(-x)."""
    return substitute(e, Neg(X))


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<id>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ExprSyntaxError(f"unexpected character {text[start]!r}", start, text)
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, pos = self.take()
        if val != value or kind != "op":
            what = "end of input" if kind == "end" else repr(val)
            raise ExprSyntaxError(f"expected {value!r}, found {what}", pos, self.text)

    def error(self, tok, expected: str):
        kind, val, pos = tok
        what = "end of input" if kind == "end" else repr(val)
        return ExprSyntaxError(f"expected {expected}, found {what}", pos, self.text)

    def parse(self) -> Expr:
        e = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise self.error(tok, "operator or end of input")
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            r = self.term()
            e = Add(e, r) if op == "+" else Sub(e, r)
        return e

    def term(self) -> Expr:
        e = self.factor()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            r = self.factor()
            e = Mul(e, r) if op == "*" else Div(e, r)
        return e

    def factor(self) -> Expr:
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "-":
            self.take()
            return Neg(self.factor())
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            return Pow(base, self.signed_number())
        return base

    def signed_number(self) -> Fraction:
        sign = 1
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            sign = -1 if tok[1] == "-" else 1
            tok = self.peek()
        if tok[0] == "num":
            self.take()
            return sign * Fraction(tok[1])
        if tok[0] == "end":
            raise self.error(tok, "numeric exponent")
        raise NonConstantExponent("exponent must be a numeric constant", tok[2], self.text)

    def atom(self) -> Expr:
        tok = self.take()
        kind, val, pos = tok
        if kind == "num":
            return Const(Fraction(val))
        if kind == "id":
            if val == "x":
                return X
            if val not in INTRINSICS:
                raise UnknownIdentifier(f"unknown identifier {val!r}", pos, self.text)
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            return Intrinsic(val, arg)
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect(")")
            return e
        raise self.error(tok, "number, 'x', function or '('")


def parse(text: str) -> Expr:
    """Parse an expression in the single variable ``x``."""
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# printing

_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2, Neg: 3, Pow: 4}
_SYM = {Add: "+", Sub: "-", Mul: "*", Div: "/"}


def _num_text(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    d = q.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"({q.numerator}/{q.denominator})"
    places = max(twos, fives)
    scaled = abs(q.numerator) * 10**places // q.denominator
    digits = str(scaled).rjust(places + 1, "0")
    s = digits[:-places] + "." + digits[-places:]
    return ("-" if q < 0 else "") + s


def _prec(e: Expr) -> int:
    return _PREC.get(type(e), 5)


def to_text(e: Expr) -> str:
    """Render ``e`` so that ``parse(to_text(e)) == e`` for parsed trees."""
    if isinstance(e, Var):
        return "x"
    if isinstance(e, Const):
        s = _num_text(e.value)
        return f"({s})" if e.value < 0 else s
    if isinstance(e, Intrinsic):
        return f"{e.kind}({to_text(e.arg)})"
    if isinstance(e, Neg):
        inner = to_text(e.arg)
        return f"-{inner}" if _prec(e.arg) >= 3 else f"-({inner})"
    if isinstance(e, Pow):
        base = to_text(e.base)
        if _prec(e.base) < 5 or (isinstance(e.base, Const) and e.base.value < 0):
            base = f"({base})"
        exp = _num_text(e.exponent)
        if exp.startswith("("):
            raise ValueError("exponent is not a terminating decimal")
        return f"{base}^{exp}"
    p = _PREC[type(e)]
    left = to_text(e.left)
    if _prec(e.left) < p:
        left = f"({left})"
    right = to_text(e.right)
    if _prec(e.right) <= p:
        right = f"({right})"
    return f"{left} {_SYM[type(e)]} {right}" if p == 1 else f"{left}{_SYM[type(e)]}{right}"


# ---------------------------------------------------------------------------
# reference evaluation


def _is_integer(q: Fraction) -> bool:
    return q.denominator == 1


# exp(2**50) still has a machine-sized exponent; beyond that results are
# astronomically large (or small) and treated as overflow.
GROWTH_ARG_LIMIT = mpf(2) ** 50


def check_growth(kind: str, a, node: Expr) -> None:
    if kind in ("exp", "sinh", "cosh", "gamma") and abs(a) > GROWTH_ARG_LIMIT:
        raise DomainViolation(node, a, f"overflow in {kind}")


def apply_intrinsic(kind: str, a, node: Expr | None = None):
    """Value of an intrinsic at a reference mpf, with domain checks."""
    node = node if node is not None else Intrinsic(kind, X)
    check_growth(kind, a, node)
    if kind == "sin":
        return mp.sin(a)
    if kind == "cos":
        return mp.cos(a)
    if kind == "tan":
        c = mp.cos(a)
        if c == 0:
            raise DomainViolation(node, a, "pole of tan")
        return mp.sin(a) / c
    if kind == "cot":
        s = mp.sin(a)
        if s == 0:
            raise DomainViolation(node, a, "pole of cot")
        return mp.cos(a) / s
    if kind == "exp":
        return mp.exp(a)
    if kind == "log":
        if a <= 0:
            raise DomainViolation(node, a, "log of non-positive value")
        return mp.log(a)
    if kind == "sinh":
        return mp.sinh(a)
    if kind == "cosh":
        return mp.cosh(a)
    if kind == "atan":
        return mp.atan(a)
    if kind == "asinh":
        return mp.asinh(a)
    if kind == "acosh":
        if a < 1:
            raise DomainViolation(node, a, "acosh of value below 1")
        return mp.acosh(a)
    if kind == "sqrt":
        if a < 0:
            raise DomainViolation(node, a, "sqrt of negative value")
        return mp.sqrt(a)
    if kind in ("gamma", "digamma", "trigamma"):
        if a <= 0 and mp.isint(a):
            raise DomainViolation(node, a, f"pole of {kind}")
        if kind == "gamma":
            return mp.gamma(a)
        return mp.psi(0 if kind == "digamma" else 1, a)
    raise ValueError(f"unknown intrinsic {kind!r}")


def apply_pow(base, alpha: Fraction, node: Expr | None = None):
    node = node if node is not None else Pow(X, alpha)
    if _is_integer(alpha):
        n = alpha.numerator
        if n < 0 and base == 0:
            raise DomainViolation(node, base, "zero to a negative power")
        return base**n
    if base < 0:
        raise DomainViolation(node, base, "negative base with non-integer exponent")
    if base == 0:
        if alpha < 0:
            raise DomainViolation(node, base, "zero to a negative power")
        return mpf(0)
    return mp.power(base, to_mpf(alpha))


def evaluate(f: Expr, x) -> "mpf":
    """f(x) at reference precision.  Raises DomainViolation naming the node."""
    xv = to_mpf(x)
    return _eval(f, xv)


def _eval(e: Expr, xv):
    if isinstance(e, Var):
        return xv
    if isinstance(e, Const):
        return to_mpf(e.value)
    if isinstance(e, Neg):
        return -_eval(e.arg, xv)
    if isinstance(e, Add):
        return _eval(e.left, xv) + _eval(e.right, xv)
    if isinstance(e, Sub):
        return _eval(e.left, xv) - _eval(e.right, xv)
    if isinstance(e, Mul):
        return _eval(e.left, xv) * _eval(e.right, xv)
    if isinstance(e, Div):
        den = _eval(e.right, xv)
        if den == 0:
            raise DomainViolation(e, den, "division by zero")
        return _eval(e.left, xv) / den
    if isinstance(e, Pow):
        return apply_pow(_eval(e.base, xv), e.exponent, e)
    return apply_intrinsic(e.kind, _eval(e.arg, xv), e)


def try_evaluate(f: Expr, x):
    """f(x) or None outside the natural domain."""
    try:
        return evaluate(f, x)
    except (DomainViolation, ZeroDivisionError, ValueError):
        return None


# ---------------------------------------------------------------------------
# vectorised float64 evaluation (grid scans only; NaN marks "undefined")

_FLOAT_FN: dict[str, Callable] = {
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "cot": lambda a: 1.0 / np.tan(a),
    "exp": np.exp,
    "log": lambda a: np.where(a > 0, np.log(np.where(a > 0, a, 1.0)), np.nan),
    "sinh": np.sinh,
    "cosh": np.cosh,
    "atan": np.arctan,
    "asinh": np.arcsinh,
    "acosh": np.arccosh,
    "sqrt": np.sqrt,
    "gamma": special.gamma,
    "digamma": special.psi,
    "trigamma": lambda a: special.polygamma(1, a),
}


def evaluate_float(f: Expr, xs) -> np.ndarray:
    xs = np.asarray(xs, dtype=float)
    with np.errstate(all="ignore"):
        out = _feval(f, xs)
    out = np.array(out, dtype=float) * np.ones_like(xs)
    out[~np.isfinite(out)] = np.nan
    return out


def _feval(e: Expr, xs):
    if isinstance(e, Var):
        return xs
    if isinstance(e, Const):
        return float(e.value)
    if isinstance(e, Neg):
        return -_feval(e.arg, xs)
    if isinstance(e, Add):
        return _feval(e.left, xs) + _feval(e.right, xs)
    if isinstance(e, Sub):
        return _feval(e.left, xs) - _feval(e.right, xs)
    if isinstance(e, Mul):
        return _feval(e.left, xs) * _feval(e.right, xs)
    if isinstance(e, Div):
        d = _feval(e.right, xs)
        return np.where(d == 0, np.nan, _feval(e.left, xs) / np.where(d == 0, 1.0, d))
    if isinstance(e, Pow):
        b = _feval(e.base, xs)
        a = float(e.exponent)
        if _is_integer(e.exponent):
            return np.power(b, a)
        return np.where(b > 0, np.power(np.abs(b), a), np.nan)
    if e.kind in ("gamma", "digamma", "trigamma"):
        a = np.asarray(_feval(e.arg, xs), dtype=float)
        bad = (a <= 0) & (np.floor(a) == a)
        return np.where(bad, np.nan, _FLOAT_FN[e.kind](a))
    return _FLOAT_FN[e.kind](_feval(e.arg, xs))


def float_fn(f: Expr) -> Callable[[np.ndarray], np.ndarray]:
    return lambda xs: evaluate_float(f, xs)


def mp_fn(f: Expr) -> Callable:
    return lambda x: evaluate(f, x)


def is_constant(f: Expr) -> bool:
    return not any(isinstance(n, Var) for n in walk(f))


def float_or_nan(v) -> float:
    try:
        return float(v)
    except (TypeError, ValueError, OverflowError):
        return math.nan

"""Expression trees in the layer index m.

Leaves are rational constants, ``m``, ``floor(m/2)`` and ``(-1)^m``; inner
nodes are + - * / and integer powers.  Rendering produces text that
:func:`parse` reads back, so forms survive a round trip through the CLI.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .algebra import Poly, as_rational

CHECK_RANGE = range(0, 21)
EQUIV_POINTS = tuple(range(0, 21)) + (100, 1000)


class ClosedForm:
    """Base node.  Subclasses are frozen dataclasses."""

    def evaluate(self, m: int) -> Fraction:
        raise NotImplementedError

    def render(self) -> str:
        raise NotImplementedError

    def _prec(self) -> int:
        return 100

    def __str__(self) -> str:
        return self.render()

    def __call__(self, m: int) -> Fraction:
        return self.evaluate(m)

    # construction sugar with light constant folding
    def __add__(self, other):
        return add(self, lift(other))

    def __radd__(self, other):
        return add(lift(other), self)

    def __sub__(self, other):
        return sub(self, lift(other))

    def __rsub__(self, other):
        return sub(lift(other), self)

    def __mul__(self, other):
        return mul(self, lift(other))

    def __rmul__(self, other):
        return mul(lift(other), self)

    def __truediv__(self, other):
        return div(self, lift(other))

    def __rtruediv__(self, other):
        return div(lift(other), self)

    def __pow__(self, n: int):
        return power(self, n)

    def __neg__(self):
        return mul(Const(Fraction(-1)), self)


@dataclass(frozen=True, eq=True)
class Const(ClosedForm):
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", as_rational(self.value))

    def evaluate(self, m):
        return self.value

    def render(self):
        return str(self.value)

    def _prec(self):
        # negative constants and p/q print like sums/quotients
        if self.value < 0:
            return 0
        return 100 if self.value.denominator == 1 else 2


@dataclass(frozen=True, eq=True)
class Var(ClosedForm):
    def evaluate(self, m):
        return Fraction(m)

    def render(self):
        return "m"


@dataclass(frozen=True, eq=True)
class FloorHalf(ClosedForm):
    def evaluate(self, m):
        return Fraction(m // 2)

    def render(self):
        return "floor(m/2)"


@dataclass(frozen=True, eq=True)
class AltSign(ClosedForm):
    def evaluate(self, m):
        return Fraction(-1 if m % 2 else 1)

    def render(self):
        return "(-1)^m"


_OPS = {"+": 1, "-": 1, "*": 2, "/": 2}


@dataclass(frozen=True, eq=True)
class BinOp(ClosedForm):
    op: str
    left: ClosedForm
    right: ClosedForm

    def __post_init__(self):
        if self.op not in _OPS:
            raise ValueError(f"unknown operator {self.op!r}")
        if self.op == "/":
            for m in CHECK_RANGE:
                if self.right.evaluate(m) == 0:
                    raise ZeroDivisionError(f"denominator {self.right.render()} vanishes at m = {m}")

    def evaluate(self, m):
        a, b = self.left.evaluate(m), self.right.evaluate(m)
        if self.op == "+":
            return a + b
        if self.op == "-":
            return a - b
        if self.op == "*":
            return a * b
        return a / b

    def _prec(self):
        return _OPS[self.op]

    def render(self):
        p = _OPS[self.op]
        lhs = self.left.render()
        if self.left._prec() < p:
            lhs = f"({lhs})"
        rhs = self.right.render()
        # right operand of - and / needs brackets at equal precedence too
        if self.right._prec() < p or (self.right._prec() == p and self.op in "-/"):
            rhs = f"({rhs})"
        return f"{lhs} {self.op} {rhs}" if p == 1 else f"{lhs}*{rhs}" if self.op == "*" else f"{lhs}/{rhs}"


@dataclass(frozen=True, eq=True)
class Pow(ClosedForm):
    base: ClosedForm
    exponent: int

    def evaluate(self, m):
        return self.base.evaluate(m) ** self.exponent

    def _prec(self):
        return 3

    def render(self):
        b = self.base.render()
        if self.base._prec() <= 3 or isinstance(self.base, AltSign):
            b = f"({b})"
        e = str(self.exponent) if self.exponent >= 0 else f"({self.exponent})"
        return f"{b}^{e}"


M = Var()
FLOOR_HALF = FloorHalf()
ALT = AltSign()


def lift(x) -> ClosedForm:
    return x if isinstance(x, ClosedForm) else Const(as_rational(x))


def _is_const(x, v=None) -> bool:
    return isinstance(x, Const) and (v is None or x.value == v)


def add(a: ClosedForm, b: ClosedForm) -> ClosedForm:
    if _is_const(a) and _is_const(b):
        return Const(a.value + b.value)
    if _is_const(a, 0):
        return b
    if _is_const(b, 0):
        return a
    if _is_const(b) and b.value < 0:
        return BinOp("-", a, Const(-b.value))
    return BinOp("+", a, b)


def sub(a: ClosedForm, b: ClosedForm) -> ClosedForm:
    if _is_const(b):
        return add(a, Const(-b.value))
    if _is_const(a, 0):
        return mul(Const(Fraction(-1)), b)
    return BinOp("-", a, b)


def mul(a: ClosedForm, b: ClosedForm) -> ClosedForm:
    if _is_const(a) and _is_const(b):
        return Const(a.value * b.value)
    if _is_const(a, 0) or _is_const(b, 0):
        return Const(Fraction(0))
    if _is_const(a, 1):
        return b
    if _is_const(b, 1):
        return a
    if _is_const(b):
        a, b = b, a
    if _is_const(a) and a.value == -1:
        # -(expr) prints as -1*expr; keep it explicit rather than inventing a unary node
        return BinOp("*", a, b)
    return BinOp("*", a, b)


def div(a: ClosedForm, b: ClosedForm) -> ClosedForm:
    if _is_const(b):
        if b.value == 0:
            raise ZeroDivisionError("division by the constant 0")
        return mul(Const(1 / b.value), a) if not _is_const(a) else Const(a.value / b.value)
    return BinOp("/", a, b)


def power(a: ClosedForm, n: int) -> ClosedForm:
    if n == 1:
        return a
    if n == 0:
        return Const(Fraction(1))
    if _is_const(a):
        return Const(a.value**n)
    return Pow(a, n)


# --- polynomials in m -----------------------------------------------------------


def _linear(q: int, p: int) -> ClosedForm:
    """q*m + p with integer q > 0."""
    return add(mul(Const(q), M), Const(p))


def from_poly(p: Poly) -> ClosedForm:
    """Render a polynomial in m, expanded about whichever shift m + s gives the fewest terms."""
    if p.degree <= 0:
        return Const(p.coeff(0))
    d = p.degree
    candidates = [Fraction(0), Fraction(1), Fraction(-1), Fraction(2)]
    s_star = p.coeff(d - 1) / (d * p.lc)
    if s_star not in candidates:
        candidates.append(s_star)

    def nterms(s):
        return sum(1 for c in p.shift(-s).coeffs if c != 0)

    best = min(candidates, key=lambda s: (nterms(s), abs(s) != 0, abs(s)))
    shifted = p.shift(-best)  # shifted(u) = p(u - best), so p(m) = shifted(m + best)
    q, num = best.denominator, best.numerator
    base = M if best == 0 else _linear(q, num)
    out: ClosedForm = Const(0)
    for j in range(d, -1, -1):
        c = shifted.coeff(j)
        if c == 0:
            continue
        c = c / Fraction(q) ** j  # (m + s)^j = (q m + p)^j / q^j
        term = mul(Const(c), power(base, j))
        out = term if _is_const(out, 0) else add(out, term)
    return out


def poly_through(ms: Iterable[int], vals: Iterable[Fraction]) -> Poly:
    """Exact interpolating polynomial through (m_i, v_i)."""
    ms = [Fraction(m) for m in ms]
    vals = [as_rational(v) for v in vals]
    n = len(ms)
    coef = list(vals)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (ms[i] - ms[i - j])
    poly = Poly((coef[-1],))
    for i in range(n - 2, -1, -1):
        poly = poly * Poly((-ms[i], 1)) + coef[i]
    return poly


# --- comparison and parsing -----------------------------------------------------


def equivalent(f: ClosedForm, g: ClosedForm, points: Iterable[int] = EQUIV_POINTS) -> bool:
    """Exact agreement on m = 0..20 and two large indices."""
    try:
        return all(f.evaluate(m) == g.evaluate(m) for m in points)
    except ZeroDivisionError:
        return False


def parse(text: str) -> ClosedForm:
    """Read back the output of :meth:`ClosedForm.render`."""
    tree = ast.parse(text.replace("^", "**"), mode="eval")
    return _from_ast(tree.body)


def _from_ast(node) -> ClosedForm:
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return Const(Fraction(node.value))
    if isinstance(node, ast.Name) and node.id == "m":
        return M
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id == "floor":
        if len(node.args) == 1 and ast.dump(node.args[0]) == ast.dump(ast.parse("m/2", mode="eval").body):
            return FLOOR_HALF
        raise ValueError("only floor(m/2) is supported")
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        inner = _from_ast(node.operand)
        return Const(-inner.value) if isinstance(inner, Const) else mul(Const(-1), inner)
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            exp = _from_ast(node.right)
            if not (isinstance(exp, Const) and exp.value.denominator == 1):
                if isinstance(exp, Var) and isinstance(node.left, (ast.Constant, ast.UnaryOp)):
                    base = _from_ast(node.left)
                    if isinstance(base, Const) and base.value == -1:
                        return ALT
                raise ValueError("exponents must be integer literals (or (-1)^m)")
            base = _from_ast(node.left)
            n = int(exp.value)
            return Const(base.value**n) if isinstance(base, Const) else Pow(base, n)
        a, b = _from_ast(node.left), _from_ast(node.right)
        if isinstance(node.op, ast.Div) and isinstance(a, Const) and isinstance(b, Const):
            return Const(a.value / b.value)
        op = {ast.Add: "+", ast.Sub: "-", ast.Mult: "*", ast.Div: "/"}.get(type(node.op))
        if op is None:
            raise ValueError(f"unsupported operator {type(node.op).__name__}")
        return BinOp(op, a, b)
    raise ValueError(f"cannot parse {ast.dump(node)}")


def as_form(x: Union[ClosedForm, str, int, Fraction]) -> ClosedForm:
    if isinstance(x, ClosedForm):
        return x
    if isinstance(x, str):
        return parse(x)
    return Const(as_rational(x))

"""Exact rational functions over QQ in a fixed list of chart coordinates.

Polynomials are FLINT ``fmpq_mpoly`` objects under graded-lex order.  An
:class:`Expression` is a reduced numerator/denominator pair with a monic
denominator, which makes structural equality the same as mathematical
equality.
"""

from __future__ import annotations

import re
from math import gcd as _gcd
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import flint

__all__ = [
    "Expression",
    "Polynomial",
    "ParseError",
    "PoleError",
    "UnknownVariableError",
    "parse",
    "add",
    "mul",
    "div",
    "neg",
    "differentiate",
    "evaluate",
    "expr_sum",
    "to_fraction",
]

ORDERING = "deglex"


class ParseError(ValueError):
    """Syntax error in an expression string, with a 0-based character offset."""

    def __init__(self, message: str, position: int, text: str = ""):
        self.message = message
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


class UnknownVariableError(ParseError):
    pass


class PoleError(ArithmeticError):
    """Evaluation hit a zero denominator."""


def _context(variables: Sequence[str]):
    return flint.fmpq_mpoly_ctx.get(tuple(variables), ORDERING)


def to_fraction(q) -> Fraction:
    """Convert an ``fmpq``/int/Fraction into a :class:`fractions.Fraction`."""
    if isinstance(q, Fraction):
        return q
    if isinstance(q, int):
        return Fraction(q)
    if isinstance(q, flint.fmpq):
        return Fraction(int(q.p), int(q.q))
    if isinstance(q, flint.fmpz):
        return Fraction(int(q))
    if isinstance(q, str):
        return Fraction(q)
    raise TypeError(f"cannot convert {type(q).__name__} to Fraction")


def _fmpq(q) -> flint.fmpq:
    if isinstance(q, flint.fmpq):
        return q
    if isinstance(q, int):
        return flint.fmpq(q)
    q = to_fraction(q)
    return flint.fmpq(q.numerator, q.denominator)


class Polynomial:
    """Read-only view of a polynomial: variable names plus an exponent→coefficient map."""

    __slots__ = ("_p", "variables")

    def __init__(self, poly, variables: Sequence[str]):
        self._p = poly
        self.variables = tuple(variables)

    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return {tuple(m): to_fraction(c) for m, c in self._p.terms()}

    def is_zero(self) -> bool:
        return self._p.is_zero()

    def total_degree(self) -> int:
        return -1 if self._p.is_zero() else int(self._p.total_degree())

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.variables == other.variables and self._p == other._p

    def __hash__(self):
        return hash((self.variables, tuple(self.terms.items())))

    def __repr__(self):
        return f"Polynomial({_format_poly(self._p, self.variables)!r})"


class Expression:
    """An immutable, canonical rational function.

    Arithmetic operators accept other Expressions over the same variables as
    well as ints and Fractions.
    """

    __slots__ = ("_num", "_den", "_vars", "_hash")

    def __init__(self, num, den, variables: tuple[str, ...], _normalized: bool = False):
        self._vars = variables
        self._hash = None
        if _normalized:
            self._num, self._den = num, den
            return
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            ctx = num.context()
            self._num, self._den = ctx.constant(0), ctx.constant(1)
            return
        if not den.is_constant():
            g = num.gcd(den)
            if not g.is_one():
                num = num / g
                den = den / g
        lc = den.leading_coefficient()
        if lc != 1:
            num = num / lc
            den = den / lc
        self._num, self._den = num, den

    # construction ---------------------------------------------------------

    @classmethod
    def constant(cls, value, variables: Sequence[str]) -> "Expression":
        variables = tuple(variables)
        ctx = _context(variables)
        return cls(ctx.constant(_fmpq(value)), ctx.constant(1), variables, _normalized=True)

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "Expression":
        return cls.constant(0, variables)

    @classmethod
    def one(cls, variables: Sequence[str]) -> "Expression":
        return cls.constant(1, variables)

    @classmethod
    def variable(cls, name: str, variables: Sequence[str]) -> "Expression":
        variables = tuple(variables)
        if name not in variables:
            raise KeyError(f"unknown variable {name!r}")
        ctx = _context(variables)
        return cls(ctx.gen(variables.index(name)), ctx.constant(1), variables, _normalized=True)

    @classmethod
    def from_terms(
        cls,
        numerator: Mapping[tuple[int, ...], object],
        variables: Sequence[str],
        denominator: Mapping[tuple[int, ...], object] | None = None,
    ) -> "Expression":
        variables = tuple(variables)
        ctx = _context(variables)
        num = ctx.from_dict({tuple(k): _fmpq(v) for k, v in numerator.items()})
        den = ctx.constant(1)
        if denominator is not None:
            den = ctx.from_dict({tuple(k): _fmpq(v) for k, v in denominator.items()})
        return cls(num, den, variables)

    # accessors ------------------------------------------------------------

    @property
    def variables(self) -> tuple[str, ...]:
        return self._vars

    @property
    def numerator(self) -> Polynomial:
        return Polynomial(self._num, self._vars)

    @property
    def denominator(self) -> Polynomial:
        return Polynomial(self._den, self._vars)

    def is_zero(self) -> bool:
        return self._num.is_zero()

    def is_constant(self) -> bool:
        return self._num.is_constant() and self._den.is_constant()

    def is_polynomial(self) -> bool:
        return self._den.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        if self._num.is_zero():
            return Fraction(0)
        return to_fraction(self._num.leading_coefficient())

    def free_variables(self) -> tuple[str, ...]:
        used = set()
        for poly in (self._num, self._den):
            for mon in poly.monoms():
                used.update(i for i, e in enumerate(mon) if e)
        return tuple(self._vars[i] for i in sorted(used))

    def degree_in(self, name: str) -> int:
        """Degree of the numerator in one variable (denominator must be free of it)."""
        i = self._vars.index(name)
        if any(m[i] for m in self._den.monoms()):
            raise ValueError(f"denominator of {self} depends on {name}")
        if self._num.is_zero():
            return -1
        return max(m[i] for m in self._num.monoms())

    # arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> "Expression":
        if isinstance(other, Expression):
            if other._vars != self._vars:
                raise ValueError(f"variable mismatch: {self._vars} vs {other._vars}")
            return other
        if isinstance(other, (int, Fraction, flint.fmpq)):
            return Expression.constant(other, self._vars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other._num.is_zero():
            return self
        if self._num.is_zero():
            return other
        return _add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return Expression(-self._num, self._den, self._vars, _normalized=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other._num.is_zero():
            return self
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _mul(self, other.inverse())

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def inverse(self) -> "Expression":
        if self._num.is_zero():
            raise ZeroDivisionError("division by the zero expression")
        num, den = self._den, self._num
        lc = den.leading_coefficient()
        if lc != 1:
            num = num / lc
            den = den / lc
        return Expression(num, den, self._vars, _normalized=True)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        # powers of a reduced fraction stay reduced
        return Expression(self._num ** k, self._den ** k, self._vars, _normalized=True)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        if not isinstance(other, Expression):
            return NotImplemented
        return self._vars == other._vars and self._num == other._num and self._den == other._den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._vars, str(self._num), str(self._den)))
        return self._hash

    def __bool__(self):
        return not self._num.is_zero()

    # calculus / evaluation -------------------------------------------------

    def diff(self, name: str) -> "Expression":
        try:
            i = self._vars.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None
        return self._diff_index(i)

    def _diff_index(self, i: int) -> "Expression":
        if self._num.is_zero():
            return self
        dn = self._num.derivative(i)
        if self._den.is_constant():
            return Expression(dn, self._den, self._vars, _normalized=True)
        dd = self._den.derivative(i)
        if dd.is_zero():
            return Expression(dn, self._den, self._vars)
        # with g = gcd(d, d'), d = g*d1: (n/d)' = (n'*d1 - n*(d'/g)) / (d*d1), already reduced
        g = self._den.gcd(dd)
        if g.is_one():
            d1, ddg = self._den, dd
        else:
            d1, ddg = self._den / g, dd / g
        num = dn * d1 - self._num * ddg
        if num.is_zero():
            return Expression.zero(self._vars)
        return Expression(num, self._den * d1, self._vars, _normalized=True)

    def evaluate(self, point) -> Fraction:
        """Exact value at a point given as a sequence or a name→value mapping."""
        vals = self._point_values(point)
        d = self._den(*vals)
        if d == 0:
            raise PoleError(f"pole of {self} at {tuple(to_fraction(v) for v in vals)}")
        return to_fraction(self._num(*vals) / d)

    def _point_values(self, point):
        if isinstance(point, Mapping):
            missing = [v for v in self._vars if v not in point]
            if missing:
                raise KeyError(f"point is missing coordinates {missing}")
            return [_fmpq(point[v]) for v in self._vars]
        if len(point) != len(self._vars):
            raise ValueError(f"point has {len(point)} entries, expected {len(self._vars)}")
        return [_fmpq(v) for v in point]

    def to_float(self, point) -> float:
        return float(self.evaluate(point))

    def subs(self, values: Mapping[str, object]) -> "Expression":
        """Substitute rational constants for some variables."""
        sub = {k: _fmpq(v) for k, v in values.items()}
        num = self._num.subs(sub)
        den = self._den.subs(sub)
        if den.is_zero():
            raise PoleError(f"pole of {self} under substitution {values}")
        return Expression(num, den, self._vars)

    def with_variables(self, variables: Sequence[str]) -> "Expression":
        """Re-express over a larger (or reordered) variable list containing ours."""
        variables = tuple(variables)
        if variables == self._vars:
            return self
        index = [variables.index(v) for v in self._vars]

        def remap(poly):
            out = {}
            for mon, c in poly.terms():
                new = [0] * len(variables)
                for j, e in zip(index, mon):
                    new[j] = e
                out[tuple(new)] = c
            return out

        ctx = _context(variables)
        return Expression(ctx.from_dict(remap(self._num)), ctx.from_dict(remap(self._den)), variables)

    # printing ---------------------------------------------------------------

    def __str__(self):
        if self._den.is_one():
            return _format_poly(self._num, self._vars)
        # display with an integer primitive denominator
        coeffs = [to_fraction(c) for c in self._den.coeffs()]
        lcm = 1
        for c in coeffs:
            lcm = lcm * c.denominator // _gcd(lcm, c.denominator)
        g = 0
        for c in coeffs:
            g = _gcd(g, (c * lcm).numerator)
        scale = flint.fmpq(lcm, g)
        num_poly, den_poly = self._num * scale, self._den * scale
        num = _format_poly(num_poly, self._vars)
        den = _format_poly(den_poly, self._vars)
        if len(num_poly.coeffs()) > 1:
            num = f"({num})"
        if len(den_poly.coeffs()) > 1 or "*" in den or "^" in den:
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self):
        return f"Expression({str(self)!r})"


def _format_poly(poly, variables) -> str:
    if poly.is_zero():
        return "0"
    parts = []
    for mon, c in poly.terms():
        c = to_fraction(c)
        factors = []
        for name, e in zip(variables, mon):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        sign = "-" if c < 0 else "+"
        c = abs(c)
        if factors:
            if c == 1:
                body = "*".join(factors)
            else:
                body = f"{c}*" + "*".join(factors)
        else:
            body = str(c)
        parts.append((sign, body))
    sign, body = parts[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def _add(a: Expression, b: Expression) -> Expression:
    an, ad, bn, bd = a._num, a._den, b._num, b._den
    if ad == bd:
        if ad.is_one():
            return Expression(an + bn, ad, a._vars, _normalized=True)
        return Expression(an + bn, ad, a._vars)
    if ad.is_one():
        return Expression(an * bd + bn, bd, a._vars, _normalized=True)
    if bd.is_one():
        return Expression(an + bn * ad, ad, a._vars, _normalized=True)
    g = ad.gcd(bd)
    if g.is_one():
        return Expression(an * bd + bn * ad, ad * bd, a._vars, _normalized=True)
    ad_g = ad / g
    bd_g = bd / g
    num = an * bd_g + bn * ad_g
    den = ad * bd_g
    if num.is_zero():
        return Expression.zero(a._vars)
    h = num.gcd(g)
    if not h.is_one():
        num = num / h
        den = den / h
    return Expression(num, den, a._vars, _normalized=True)


def _mul(a: Expression, b: Expression) -> Expression:
    an, ad, bn, bd = a._num, a._den, b._num, b._den
    if an.is_zero():
        return a
    if bn.is_zero():
        return b
    if ad.is_one() and bd.is_one():
        return Expression(an * bn, ad, a._vars, _normalized=True)
    if not bd.is_one():
        g1 = an.gcd(bd)
        if not g1.is_one():
            an = an / g1
            bd = bd / g1
    if not ad.is_one():
        g2 = bn.gcd(ad)
        if not g2.is_one():
            bn = bn / g2
            ad = ad / g2
    num = an * bn
    den = ad * bd
    lc = den.leading_coefficient()
    if lc != 1:
        num = num / lc
        den = den / lc
    return Expression(num, den, a._vars, _normalized=True)


def expr_sum(terms: Iterable[Expression], variables: Sequence[str] | None = None) -> Expression:
    """Sum many Expressions, adding numerators over shared denominators first."""
    groups: list[list] = []
    vars_ = None if variables is None else tuple(variables)
    for t in terms:
        if vars_ is None:
            vars_ = t._vars
        if t._num.is_zero():
            continue
        for g in groups:
            if g[0] == t._den:
                g[1] = g[1] + t._num
                break
        else:
            groups.append([t._den, t._num])
    if vars_ is None:
        raise ValueError("expr_sum of an empty iterable needs explicit variables")
    total = Expression.zero(vars_)
    for den, num in groups:
        if num.is_zero():
            continue
        if den.is_one():
            part = Expression(num, den, vars_, _normalized=True)
        else:
            part = Expression(num, den, vars_)
        total = total + part
    return total


# module-level operation names -------------------------------------------


def add(a: Expression, b: Expression) -> Expression:
    return a + b


def mul(a: Expression, b: Expression) -> Expression:
    return a * b


def div(a: Expression, b: Expression) -> Expression:
    return a / b


def neg(a: Expression) -> Expression:
    return -a


def differentiate(e: Expression, variable: str) -> Expression:
    return e.diff(variable)


def evaluate(e: Expression, point) -> Fraction:
    return e.evaluate(point)


# parsing ------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>\*\*|[-+*/^()])|(?P<bad>\S))"
)


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace remains
            break
        if m.end() == pos:
            break
        kind = m.lastgroup
        start = m.start(kind)
        value = m.group(kind)
        if kind == "bad":
            raise ParseError(f"unexpected character {value!r}", start, text)
        if kind == "num" and "." in value:
            raise ParseError("decimal literals are not allowed; write p/q", start, text)
        if kind == "op" and value == "**":
            raise ParseError("use '^' for powers", start, text)
        tokens.append((kind, value, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: tuple[str, ...]):
        self.text = text
        self.variables = variables
        self.tokens = _tokenize(text)
        self.i = 0
        self.ctx = _context(variables)

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        return ParseError(message, tok[2], self.text)

    def parse(self) -> Expression:
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        e = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected {self.peek()[1]!r}")
        return e

    def expr(self):
        e = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            e = e + rhs if op == "+" else e - rhs
        return e

    def term(self):
        e = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            op_tok = self.take()
            rhs_tok = self.peek()
            rhs = self.unary()
            if op_tok[1] == "*":
                e = e * rhs
            else:
                if rhs.is_zero():
                    raise ParseError("division by zero", rhs_tok[2], self.text)
                e = e / rhs
        return e

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("+", "-"):
            self.take()
            e = self.unary()
            return -e if tok[1] == "-" else e
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            tok = self.peek()
            if tok[0] != "num":
                raise self.error("exponent must be a nonnegative integer literal")
            self.take()
            if self.peek()[0] == "op" and self.peek()[1] == "^":
                raise self.error("chained exponents are ambiguous; use parentheses")
            return base ** int(tok[1])
        return base

    def atom(self):
        tok = self.take()
        kind, value, pos = tok
        if kind == "num":
            return Expression(self.ctx.constant(int(value)), self.ctx.constant(1), self.variables, _normalized=True)
        if kind == "name":
            if self.peek()[0] == "op" and self.peek()[1] == "(":
                raise ParseError(f"function {value!r} is not supported (rational expressions only)", pos, self.text)
            if value not in self.variables:
                raise UnknownVariableError(f"unknown variable {value!r}", pos, self.text)
            return Expression(self.ctx.gen(self.variables.index(value)), self.ctx.constant(1), self.variables,
                              _normalized=True)
        if kind == "op" and value == "(":
            e = self.expr()
            if self.peek()[1] != ")" or self.peek()[0] != "op":
                raise self.error("expected ')'")
            self.take()
            return e
        if kind == "end":
            raise ParseError("unexpected end of expression", pos, self.text)
        raise ParseError(f"unexpected {value!r}", pos, self.text)


def parse(text: str, variables: Sequence[str]) -> Expression:
    """Parse a rational expression over the given coordinate names.

    Grammar: integers, names, ``+ - * /``, ``^`` with a nonnegative integer
    literal exponent, and parentheses.  Whitespace is ignored.
    """
    return _Parser(text, tuple(variables)).parse()

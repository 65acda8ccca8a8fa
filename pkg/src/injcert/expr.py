"""Expression AST, recursive-descent parser and generic evaluator.

Grammar (see ``docs/grammar.md``)::

    expr    = term { ("+" | "-") term }
    term    = unary { ("*" | "/") unary }
    unary   = ("-" | "+") unary | power
    power   = primary [ "^" unary ]          (right side: non-negative integer literal)
    primary = number | name | func "(" expr ")" | "(" expr ")"
    func    = "exp" | "sin" | "cos"

The same AST is evaluated over floats, complex numbers, numpy arrays,
:class:`~injcert.dual.Dual` numbers and the interval types.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping, Sequence, Union

from .dual import Dual, elementary, ipow
from .errors import DimensionMismatch, DomainError, NonIntegerExponent, ParseError, UnknownVariable
from .interval import Box, ComplexBox, Interval

FUNCTIONS = ("exp", "sin", "cos")
UNARY_OPS = ("neg",) + FUNCTIONS
BINARY_OPS = ("add", "sub", "mul", "div", "pow")
MAX_DIM = 8


@dataclass(frozen=True)
class Constant:
    value: float
    text: str = field(default="", compare=False)

    def enclosure(self) -> Interval:
        return _literal_enclosure(self.text or repr(self.value))


@lru_cache(maxsize=4096)
def _literal_enclosure(text: str) -> Interval:
    return Interval.from_literal(text)


@dataclass(frozen=True)
class Variable:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str
    child: "Expr"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"


Expr = Union[Constant, Variable, Unary, Binary]


# -- tokenizer -----------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^(),]))"
)


@dataclass(frozen=True)
class _Token:
    kind: str  # "number", "name", an operator character, or "end"
    text: str
    offset: int  # byte offset


def _tokenize(source: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    n = len(source)

    def boff(i: int) -> int:
        return len(source[:i].encode("utf-8"))

    while True:
        while pos < n and source[pos].isspace():
            pos += 1
        if pos >= n:
            tokens.append(_Token("end", "", boff(n)))
            return tokens
        m = _TOKEN.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", boff(pos),
                             frozenset({"number", "name", "operator"}))
        start = m.start(m.lastgroup)
        kind = m.lastgroup
        text = m.group(kind)
        tokens.append(_Token(text if kind == "op" else kind, text, boff(start)))
        pos = m.end()


class _Parser:
    def __init__(self, source: str, variables: Sequence[str] | None):
        self.tokens = _tokenize(source)
        self.i = 0
        self.variables = None if variables is None else frozenset(variables)

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, kind: str) -> _Token:
        if self.tok.kind != kind:
            raise ParseError(f"unexpected {self._describe(self.tok)}", self.tok.offset, frozenset({kind}))
        return self.advance()

    @staticmethod
    def _describe(t: _Token) -> str:
        return "end of input" if t.kind == "end" else f"token {t.text!r}"

    def parse(self) -> Expr:
        e = self.expr()
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self._describe(self.tok)}", self.tok.offset,
                             frozenset({"+", "-", "*", "/", "^", "end"}))
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.tok.kind in ("+", "-"):
            op = "add" if self.advance().kind == "+" else "sub"
            e = Binary(op, e, self.term())
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.tok.kind in ("*", "/"):
            op = "mul" if self.advance().kind == "*" else "div"
            e = Binary(op, e, self.unary())
        return e

    def unary(self) -> Expr:
        if self.tok.kind == "-":
            self.advance()
            return Unary("neg", self.unary())
        if self.tok.kind == "+":
            self.advance()
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.primary()
        if self.tok.kind != "^":
            return base
        self.advance()
        at = self.tok.offset
        rhs = self.unary()
        if not (isinstance(rhs, Constant) and rhs.text.isdigit()):
            raise NonIntegerExponent("exponent must be a non-negative integer literal", at,
                                     frozenset({"integer"}))
        return Binary("pow", base, Constant(float(int(rhs.text)), str(int(rhs.text))))

    def primary(self) -> Expr:
        t = self.tok
        if t.kind == "number":
            self.advance()
            value = float(t.text)
            if not math.isfinite(value):
                raise ParseError(f"literal {t.text!r} overflows", t.offset, frozenset({"number"}))
            return Constant(value, t.text)
        if t.kind == "name":
            self.advance()
            if t.text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Unary(t.text, arg)
            if self.variables is not None and t.text not in self.variables:
                raise UnknownVariable(f"unknown variable {t.text!r}", t.offset,
                                      frozenset(self.variables))
            return Variable(t.text)
        if t.kind == "(":
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        raise ParseError(f"unexpected {self._describe(t)}", t.offset,
                         frozenset({"number", "name", "(", "-", "+"}))


def parse(source: str, variables: Sequence[str] | None = None) -> Expr:
    """Parse ``source``; if ``variables`` is given, other names raise UnknownVariable."""
    return _Parser(source, variables).parse()


_SYMBOL = {"add": "+", "sub": "-", "mul": "*", "div": "/", "pow": "^"}


def to_source(e: Expr) -> str:
    """Fully parenthesized text that parses back to a structurally equal AST."""
    if isinstance(e, Constant):
        if e.text and not e.text.startswith("-"):
            return e.text
        return repr(e.value) if e.value >= 0 else f"(-{repr(-e.value)})"
    if isinstance(e, Variable):
        return e.name
    if isinstance(e, Unary):
        if e.op == "neg":
            return f"(-{to_source(e.child)})"
        return f"{e.op}({to_source(e.child)})"
    if e.op == "pow":
        return f"({to_source(e.left)}^{int(e.right.value)})"
    return f"({to_source(e.left)} {_SYMBOL[e.op]} {to_source(e.right)})"


def variables_of(e: Expr) -> set[str]:
    if isinstance(e, Variable):
        return {e.name}
    if isinstance(e, Constant):
        return set()
    if isinstance(e, Unary):
        return variables_of(e.child)
    return variables_of(e.left) | variables_of(e.right)


def depth(e: Expr) -> int:
    if isinstance(e, (Constant, Variable)):
        return 0
    if isinstance(e, Unary):
        return 1 + depth(e.child)
    return 1 + max(depth(e.left), depth(e.right))


# -- evaluation ------------------------------------------------------------------

def _is_rigorous(x) -> bool:
    if isinstance(x, Dual):
        return _is_rigorous(x.val)
    return isinstance(x, (Interval, ComplexBox))


def evaluate(e: Expr, bindings: Mapping[str, object]):
    """Evaluate ``e`` with the arithmetic of the bound values.

    When any binding is an interval type, decimal literals are lifted to
    enclosing intervals so the result encloses every point evaluation.
    """
    rigorous = any(_is_rigorous(v) for v in bindings.values())
    try:
        return _eval(e, bindings, rigorous)
    except ZeroDivisionError as exc:
        raise DomainError(str(exc) or "division by zero") from exc


def _eval(e: Expr, env: Mapping[str, object], rigorous: bool):
    if isinstance(e, Binary):
        left = _eval(e.left, env, rigorous)
        op = e.op
        if op == "pow":
            n = int(e.right.value)
            if isinstance(left, (Dual, Interval, ComplexBox)):
                return left**n
            return ipow(left, n)
        right = _eval(e.right, env, rigorous)
        if op == "add":
            return left + right
        if op == "sub":
            return left - right
        if op == "mul":
            return left * right
        return left / right
    if isinstance(e, Variable):
        try:
            return env[e.name]
        except KeyError:
            raise UnknownVariable(f"unbound variable {e.name!r}") from None
    if isinstance(e, Constant):
        return e.enclosure() if rigorous else e.value
    child = _eval(e.child, env, rigorous)
    if e.op == "neg":
        return -child
    return elementary(e.op, child)


# -- problem instances -------------------------------------------------------------

class MapKind(str, enum.Enum):
    REAL_MAP = "real_map"
    COMPLEX = "complex"


@dataclass(frozen=True)
class MapSpec:
    """A map R^n -> R^n (``REAL_MAP``) or f = u + iv of z = x + iy (``COMPLEX``)."""

    kind: MapKind
    variables: tuple[str, ...]
    components: tuple[Expr, ...]
    domain: Box
    sources: tuple[str, ...] = ()

    def __post_init__(self):
        n = len(self.variables)
        if len(set(self.variables)) != n:
            raise DimensionMismatch("duplicate variable names")
        if self.kind is MapKind.COMPLEX:
            if n != 2 or len(self.components) != 2:
                raise DimensionMismatch("a complex function needs exactly u, v in x, y")
        elif not 1 <= n <= MAX_DIM or len(self.components) != n:
            raise DimensionMismatch(
                f"real map needs n components in n variables with 1 <= n <= {MAX_DIM}, "
                f"got {len(self.components)} components in {n} variables")
        if self.domain.dim != n:
            raise DimensionMismatch(f"domain has {self.domain.dim} dimensions, expected {n}")
        for c in self.components:
            extra = variables_of(c) - set(self.variables)
            if extra:
                raise UnknownVariable(f"undeclared variables {sorted(extra)}")

    @property
    def dim(self) -> int:
        return len(self.variables)

    @classmethod
    def real_map(cls, components: Sequence[str], variables: Sequence[str],
                 domain: Box | Sequence[Sequence[float]]) -> "MapSpec":
        variables = tuple(variables)
        box = domain if isinstance(domain, Box) else Box.from_bounds(domain)
        exprs = tuple(parse(s, variables) for s in components)
        return cls(MapKind.REAL_MAP, variables, exprs, box, tuple(components))

    @classmethod
    def complex_function(cls, u: str, v: str, domain: Box | Sequence[Sequence[float]],
                         variables: Sequence[str] = ("x", "y")) -> "MapSpec":
        variables = tuple(variables)
        box = domain if isinstance(domain, Box) else Box.from_bounds(domain)
        return cls(MapKind.COMPLEX, variables, (parse(u, variables), parse(v, variables)), box, (u, v))

    @classmethod
    def holomorphic(cls, source: str, domain: Box | Sequence[Sequence[float]]) -> "MapSpec":
        """Complex function from a real-coefficient polynomial in ``z``."""
        u, v = expand_holomorphic(source)
        return cls.complex_function(u, v, domain)

    def bind(self, point: Sequence) -> dict[str, object]:
        if len(point) != self.dim:
            raise DimensionMismatch(f"expected {self.dim} coordinates, got {len(point)}")
        return dict(zip(self.variables, point))

    def evaluate(self, point: Sequence) -> tuple:
        env = self.bind(point)
        return tuple(evaluate(c, env) for c in self.components)

    def evaluate_complex(self, z):
        """f(z) for a complex function; ``z`` complex or a numpy complex array."""
        if self.kind is not MapKind.COMPLEX:
            raise DimensionMismatch("not a complex function")
        u, v = self.evaluate((z.real, z.imag))
        return u + 1j * v


# -- holomorphic polynomial shorthand ----------------------------------------------

class _Poly:
    """Real polynomial in one variable, used to expand the ``holo:`` shorthand."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Mapping[int, float]):
        self.c = {k: float(v) for k, v in coeffs.items() if v != 0}

    @staticmethod
    def lift(x) -> "_Poly":
        if isinstance(x, _Poly):
            return x
        if isinstance(x, (int, float)):
            return _Poly({0: float(x)})
        raise TypeError(f"cannot use {type(x).__name__} in a polynomial")

    def __add__(self, other):
        o = _Poly.lift(other)
        out = dict(self.c)
        for k, v in o.c.items():
            out[k] = out.get(k, 0.0) + v
        return _Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return _Poly({k: -v for k, v in self.c.items()})

    def __sub__(self, other):
        return self + (-_Poly.lift(other))

    def __rsub__(self, other):
        return _Poly.lift(other) - self

    def __mul__(self, other):
        o = _Poly.lift(other)
        out: dict[int, float] = {}
        for i, a in self.c.items():
            for j, b in o.c.items():
                out[i + j] = out.get(i + j, 0.0) + a * b
        return _Poly(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, (int, float)):
            o = _Poly.lift(other)
            if set(o.c) - {0}:
                raise TypeError("division by a non-constant polynomial")
            other = o.c.get(0, 0.0)
        if other == 0:
            raise DomainError("division by zero")
        return _Poly({k: v / other for k, v in self.c.items()})

    def __rtruediv__(self, other):
        raise TypeError("division by a polynomial")

    def __pow__(self, n: int):
        out = _Poly({0: 1.0})
        for _ in range(n):
            out = out * self
        return out


def polynomial_coefficients(source: str, variable: str = "z") -> dict[int, float]:
    """Coefficients of a real polynomial in ``variable`` given as text."""
    e = parse(source, (variable,))
    try:
        p = _eval(e, {variable: _Poly({1: 1.0})}, False)
    except (TypeError, AttributeError) as exc:
        raise ParseError(f"holomorphic shorthand accepts only real polynomials in {variable}: {exc}") from None
    return dict(sorted(_Poly.lift(p).c.items()))


def _monomial(coef: float, a: int, b: int) -> str:
    parts = [repr(coef)]
    for name, k in (("x", a), ("y", b)):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def holomorphic_uv(coeffs: Mapping[int, complex]) -> tuple[str, str]:
    """Expand ``sum_k c_k z^k`` (complex c_k allowed) into u(x, y), v(x, y) text."""
    u_terms: dict[tuple[int, int], float] = {}
    v_terms: dict[tuple[int, int], float] = {}
    for k, c in coeffs.items():
        c = complex(c)
        for j in range(k + 1):
            # (x + iy)^k = sum_j C(k, j) x^(k-j) (iy)^j, i^j cycles 1, i, -1, -i
            b = comb(k, j)
            key = (k - j, j)
            re_part, im_part = [(b, 0), (0, b), (-b, 0), (0, -b)][j % 4]
            u_terms[key] = u_terms.get(key, 0.0) + c.real * re_part - c.imag * im_part
            v_terms[key] = v_terms.get(key, 0.0) + c.real * im_part + c.imag * re_part

    def render(terms: dict[tuple[int, int], float]) -> str:
        pieces = [_monomial(v, a, b) for (a, b), v in sorted(terms.items()) if v != 0.0]
        return " + ".join(pieces) if pieces else "0"

    return render(u_terms), render(v_terms)


def expand_holomorphic(source: str) -> tuple[str, str]:
    """``"z^2 + 3*z"`` -> (u, v) expression text in x, y."""
    return holomorphic_uv(polynomial_coefficients(source, "z"))


def iter_nodes(e: Expr) -> Iterable[Expr]:
    yield e
    if isinstance(e, Unary):
        yield from iter_nodes(e.child)
    elif isinstance(e, Binary):
        yield from iter_nodes(e.left)
        yield from iter_nodes(e.right)

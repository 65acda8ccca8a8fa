"""Interval arithmetic with outward widening.

Endpoints are plain floats. Instead of switching the FPU rounding mode every
primitive widens its result by ``WIDEN_ULPS`` units in the last place, which
dominates the <= 1 ulp error of IEEE arithmetic and of the libm functions used
here.
"""

from __future__ import annotations

import math
from decimal import Decimal
from typing import Iterable, Iterator, Sequence

from .errors import DivisionByZeroInterval, DomainError

WIDEN_ULPS = 4

_INF = math.inf
_PI = math.pi
_TWO_PI = 2.0 * math.pi


def _down(x: float) -> float:
    if x != x or x == _INF or x == -_INF:
        return x
    return x - WIDEN_ULPS * math.ulp(x)


def _up(x: float) -> float:
    if x != x or x == _INF or x == -_INF:
        return x
    return x + WIDEN_ULPS * math.ulp(x)


def _prod(a: float, b: float) -> float:
    p = a * b
    # 0 * inf is 0 in interval arithmetic
    return 0.0 if p != p else p


class Interval:
    """Closed interval ``[lo, hi]`` of reals; ``lo == hi`` is a point interval."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo: float, hi: float | None = None):
        lo = float(lo)
        hi = lo if hi is None else float(hi)
        if not lo <= hi:
            raise ValueError(f"invalid interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    @classmethod
    def _raw(cls, lo: float, hi: float) -> "Interval":
        obj = object.__new__(cls)
        obj.lo = lo
        obj.hi = hi
        return obj

    @classmethod
    def widened(cls, lo: float, hi: float) -> "Interval":
        return cls._raw(_down(lo), _up(hi))

    @classmethod
    def entire(cls) -> "Interval":
        return cls._raw(-_INF, _INF)

    @classmethod
    def from_literal(cls, text: str) -> "Interval":
        """Tightest enclosure of a decimal literal (a point if it is a binary float)."""
        v = float(text)
        if Decimal(text) == Decimal(v):
            return cls._raw(v, v)
        return cls._raw(math.nextafter(v, -_INF), math.nextafter(v, _INF))

    @staticmethod
    def coerce(x: "Interval | float | int") -> "Interval":
        if isinstance(x, Interval):
            return x
        return Interval._raw(float(x), float(x))

    # -- queries ---------------------------------------------------------------

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        if self.lo == -_INF or self.hi == _INF:
            return 0.0 if self.lo == -_INF and self.hi == _INF else (self.lo if self.hi == _INF else self.hi)
        return 0.5 * self.lo + 0.5 * self.hi

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0.0 <= self.hi

    def issubset(self, other: "Interval") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def mig(self) -> float:
        """Smallest absolute value in the interval."""
        if self.lo <= 0.0 <= self.hi:
            return 0.0
        return min(abs(self.lo), abs(self.hi))

    def mag(self) -> float:
        """Largest absolute value in the interval."""
        return max(abs(self.lo), abs(self.hi))

    def __iter__(self) -> Iterator[float]:
        yield self.lo
        yield self.hi

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Interval):
            return self.lo == other.lo and self.hi == other.hi
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.lo, self.hi))

    def __repr__(self) -> str:
        return f"Interval({self.lo!r}, {self.hi!r})"

    # -- arithmetic ------------------------------------------------------------

    def __neg__(self) -> "Interval":
        return Interval._raw(-self.hi, -self.lo)

    def __pos__(self) -> "Interval":
        return self

    def __add__(self, other):
        if isinstance(other, Interval):
            return Interval._raw(_down(self.lo + other.lo), _up(self.hi + other.hi))
        if isinstance(other, (int, float)):
            return Interval._raw(_down(self.lo + other), _up(self.hi + other))
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Interval):
            return Interval._raw(_down(self.lo - other.hi), _up(self.hi - other.lo))
        if isinstance(other, (int, float)):
            return Interval._raw(_down(self.lo - other), _up(self.hi - other))
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, float)):
            return Interval._raw(_down(other - self.hi), _up(other - self.lo))
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, Interval):
            a, b, c, d = self.lo, self.hi, other.lo, other.hi
        elif isinstance(other, (int, float)):
            a, b, c, d = self.lo, self.hi, float(other), float(other)
        else:
            return NotImplemented
        p1, p2, p3, p4 = _prod(a, c), _prod(a, d), _prod(b, c), _prod(b, d)
        return Interval._raw(_down(min(p1, p2, p3, p4)), _up(max(p1, p2, p3, p4)))

    __rmul__ = __mul__

    def reciprocal(self) -> "Interval":
        if self.lo <= 0.0 <= self.hi:
            raise DivisionByZeroInterval(f"division by interval {self!r} containing zero")
        return Interval._raw(_down(1.0 / self.hi), _up(1.0 / self.lo))

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            other = Interval._raw(float(other), float(other))
        if not isinstance(other, Interval):
            return NotImplemented
        if other.lo <= 0.0 <= other.hi:
            raise DivisionByZeroInterval(f"division by interval {other!r} containing zero")
        a, b, c, d = self.lo, self.hi, other.lo, other.hi
        q = (a / c, a / d, b / c, b / d)
        return Interval._raw(_down(min(q)), _up(max(q)))

    def __rtruediv__(self, other):
        if isinstance(other, (int, float)):
            return Interval._raw(float(other), float(other)) / self
        return NotImplemented

    def sqr(self) -> "Interval":
        m, M = self.mig(), self.mag()
        return Interval._raw(max(0.0, _down(m * m)), _up(M * M))

    def __pow__(self, n):
        if not isinstance(n, int) or isinstance(n, bool) or n < 0:
            return NotImplemented
        if n == 0:
            return Interval._raw(1.0, 1.0)
        if n == 1:
            return self
        if n % 2 == 0:
            lo = _point_pow(self.mig(), n).lo
            hi = _point_pow(self.mag(), n).hi
            return Interval._raw(max(0.0, lo), hi)
        return Interval._raw(_point_pow(self.lo, n).lo, _point_pow(self.hi, n).hi)

    def sqrt(self) -> "Interval":
        if self.hi < 0.0:
            raise DomainError(f"sqrt of negative interval {self!r}")
        lo = max(self.lo, 0.0)
        return Interval._raw(max(0.0, _down(math.sqrt(lo))), _up(math.sqrt(self.hi)))

    def __abs__(self) -> "Interval":
        return Interval._raw(self.mig(), self.mag())

    def exp(self) -> "Interval":
        return Interval._raw(max(0.0, _down(_exp(self.lo))), _up(_exp(self.hi)))

    def sin(self) -> "Interval":
        return _periodic(math.sin, self.lo, self.hi, 0.5 * _PI, -0.5 * _PI)

    def cos(self) -> "Interval":
        return _periodic(math.cos, self.lo, self.hi, 0.0, _PI)

    def cosh(self) -> "Interval":
        e = self.exp()
        return ((e + e.reciprocal()) * 0.5).intersect_lower(1.0)

    def sinh(self) -> "Interval":
        e = self.exp()
        return (e - e.reciprocal()) * 0.5

    def intersect_lower(self, floor: float) -> "Interval":
        return Interval._raw(max(self.lo, floor), max(self.hi, floor))

    def hull(self, other: "Interval") -> "Interval":
        return Interval._raw(min(self.lo, other.lo), max(self.hi, other.hi))


def _exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return _INF


def _point_pow(x: float, n: int) -> Interval:
    """Enclosure of x**n by repeated squaring of a point interval."""
    result = Interval._raw(1.0, 1.0)
    base = Interval._raw(x, x)
    while n:
        if n & 1:
            result = result * base
        n >>= 1
        if n:
            base = base * base
    return result


def _has_critical(lo: float, hi: float, phase: float) -> bool:
    # is phase + 2k*pi in [lo, hi] for some k; slack absorbs rounding of the grid point
    k = math.floor((hi - phase) / _TWO_PI)
    c = phase + k * _TWO_PI
    slack = 1e-12 * (1.0 + abs(c))
    return c >= lo - slack or (c + _TWO_PI) <= hi + slack


def _periodic(f, lo: float, hi: float, max_phase: float, min_phase: float) -> Interval:
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi - lo >= _TWO_PI or max(abs(lo), abs(hi)) > 1e12:
        return Interval._raw(-1.0, 1.0)
    a, b = f(lo), f(hi)
    rlo = -1.0 if _has_critical(lo, hi, min_phase) else _down(min(a, b))
    rhi = 1.0 if _has_critical(lo, hi, max_phase) else _up(max(a, b))
    return Interval._raw(max(-1.0, rlo), min(1.0, rhi))


def iv_arith(a: Interval, b: Interval, op: str) -> Interval:
    """Binary interval operation ``op`` in {add, sub, mul, div}."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown interval op {op!r}")


class ComplexBox:
    """Axis-aligned rectangle ``re x im`` enclosing a set of complex numbers."""

    __slots__ = ("re", "im")

    def __init__(self, re: Interval | float, im: Interval | float = 0.0):
        self.re = Interval.coerce(re)
        self.im = Interval.coerce(im)

    @classmethod
    def point(cls, c: complex) -> "ComplexBox":
        c = complex(c)
        return cls(Interval._raw(c.real, c.real), Interval._raw(c.imag, c.imag))

    @staticmethod
    def coerce(x) -> "ComplexBox":
        if isinstance(x, ComplexBox):
            return x
        if isinstance(x, Interval):
            return ComplexBox(x, Interval._raw(0.0, 0.0))
        return ComplexBox.point(x)

    def __repr__(self) -> str:
        return f"ComplexBox({self.re!r}, {self.im!r})"

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ComplexBox):
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def contains(self, c: complex) -> bool:
        return self.re.contains(c.real) and self.im.contains(c.imag)

    @property
    def real(self) -> Interval:
        return self.re

    @property
    def imag(self) -> Interval:
        return self.im

    def conjugate(self) -> "ComplexBox":
        return ComplexBox(self.re, -self.im)

    def __neg__(self) -> "ComplexBox":
        return ComplexBox(-self.re, -self.im)

    def __add__(self, other):
        if not isinstance(other, (ComplexBox, Interval, int, float, complex)):
            return NotImplemented
        o = ComplexBox.coerce(other)
        return ComplexBox(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, (ComplexBox, Interval, int, float, complex)):
            return NotImplemented
        o = ComplexBox.coerce(other)
        return ComplexBox(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        if not isinstance(other, (Interval, int, float, complex)):
            return NotImplemented
        return ComplexBox.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, float, Interval)):
            return ComplexBox(self.re * other, self.im * other)
        if not isinstance(other, (ComplexBox, complex)):
            return NotImplemented
        o = ComplexBox.coerce(other)
        return ComplexBox(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or isinstance(n, bool) or n < 0:
            return NotImplemented
        result = ComplexBox.point(1.0)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def exp(self) -> "ComplexBox":
        r = self.re.exp()
        return ComplexBox(r * self.im.cos(), r * self.im.sin())

    def sin(self) -> "ComplexBox":
        return ComplexBox(self.re.sin() * self.im.cosh(), self.re.cos() * self.im.sinh())

    def cos(self) -> "ComplexBox":
        return ComplexBox(self.re.cos() * self.im.cosh(), -(self.re.sin() * self.im.sinh()))

    def __abs__(self) -> Interval:
        return modulus_bounds(self)


def cbox_arith(a: ComplexBox, b: ComplexBox, op: str) -> ComplexBox:
    """Binary complex-box operation ``op`` in {add, sub, mul}."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown complex box op {op!r}")


def modulus_bounds(c: ComplexBox) -> Interval:
    """Interval ``[m_lo, m_hi]`` with ``m_lo <= |z| <= m_hi`` for every z in ``c``."""
    dx, dy = c.re.mig(), c.im.mig()
    mx, my = c.re.mag(), c.im.mag()
    if dx == 0.0 and dy == 0.0:
        lo = 0.0
    else:
        near = (Interval._raw(dx, dx).sqr() + Interval._raw(dy, dy).sqr()).sqrt().lo
        # |z| >= max(|x|, |y|) keeps the bound positive under underflow
        lo = max(near, dx, dy)
    far = (Interval._raw(mx, mx).sqr() + Interval._raw(my, my).sqr()).sqrt().hi
    return Interval._raw(lo, far)


class Box:
    """Axis-aligned box, one closed interval per coordinate."""

    __slots__ = ("intervals",)

    def __init__(self, intervals: Iterable[Interval | Sequence[float]]):
        ivs = []
        for iv in intervals:
            if not isinstance(iv, Interval):
                lo, hi = iv
                iv = Interval(lo, hi)
            ivs.append(iv)
        if not ivs:
            raise ValueError("box must have at least one dimension")
        self.intervals: tuple[Interval, ...] = tuple(ivs)

    @classmethod
    def from_bounds(cls, bounds: Sequence[Sequence[float]]) -> "Box":
        return cls(Interval(lo, hi) for lo, hi in bounds)

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.intervals)

    def __getitem__(self, i: int) -> Interval:
        return self.intervals[i]

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Box):
            return self.intervals == other.intervals
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.intervals)

    def __repr__(self) -> str:
        return "Box(" + ", ".join(f"[{iv.lo!r}, {iv.hi!r}]" for iv in self.intervals) + ")"

    @property
    def dim(self) -> int:
        return len(self.intervals)

    def bounds(self) -> list[list[float]]:
        return [[iv.lo, iv.hi] for iv in self.intervals]

    def widths(self) -> tuple[float, ...]:
        return tuple(iv.width for iv in self.intervals)

    def widest(self) -> int:
        """Index of the widest coordinate, ties broken by the lowest index."""
        w = self.widths()
        best = 0
        for i in range(1, len(w)):
            if w[i] > w[best]:
                best = i
        return best

    def bisect(self, axis: int | None = None) -> tuple["Box", "Box"]:
        k = self.widest() if axis is None else axis
        iv = self.intervals[k]
        m = iv.mid
        left = list(self.intervals)
        right = list(self.intervals)
        left[k] = Interval._raw(iv.lo, m)
        right[k] = Interval._raw(m, iv.hi)
        return Box(left), Box(right)

    def center(self) -> tuple[float, ...]:
        return tuple(iv.mid for iv in self.intervals)

    def corners(self) -> list[tuple[float, ...]]:
        pts: list[tuple[float, ...]] = [()]
        for iv in self.intervals:
            pts = [p + (v,) for p in pts for v in (iv.lo, iv.hi)]
        return pts

    def contains(self, point: Sequence[float]) -> bool:
        return all(iv.lo <= float(x) <= iv.hi for iv, x in zip(self.intervals, point))

    def issubset(self, other: "Box") -> bool:
        return all(a.issubset(b) for a, b in zip(self.intervals, other.intervals))

    def as_complex(self) -> ComplexBox:
        if self.dim != 2:
            raise ValueError("only 2-dimensional boxes map to complex boxes")
        return ComplexBox(self.intervals[0], self.intervals[1])

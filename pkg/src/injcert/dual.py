"""Forward-mode dual numbers over any base of the numeric tower.

``Dual(val, der)`` represents ``val + der*eps`` with ``eps**2 == 0``. The base
may be a float, complex, :class:`~injcert.interval.Interval`,
:class:`~injcert.interval.ComplexBox` or a numpy array (vectorized evaluation).
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import DomainError

_MATH = {"exp": math.exp, "sin": math.sin, "cos": math.cos}
_CMATH = {"exp": cmath.exp, "sin": cmath.sin, "cos": cmath.cos}
_NUMPY = {"exp": np.exp, "sin": np.sin, "cos": np.cos}


def elementary(name: str, x):
    """Apply exp/sin/cos to any member of the numeric tower."""
    if isinstance(x, (float, int)) and not isinstance(x, bool):
        try:
            return _MATH[name](x)
        except OverflowError:
            if name == "exp":
                return math.inf
            raise DomainError(f"{name}({x!r}) overflow") from None
    if isinstance(x, complex):
        try:
            return _CMATH[name](x)
        except OverflowError as exc:
            raise DomainError(f"{name}({x!r}) overflow") from exc
    if isinstance(x, (np.ndarray, np.generic)):
        return _NUMPY[name](x)
    return getattr(x, name)()


def ipow(x, n: int):
    """Non-negative integer power by repeated squaring (intervals use their own rule)."""
    if hasattr(x, "__pow__") and not isinstance(x, (float, int, complex, np.ndarray, np.generic)):
        return x**n
    if n == 0:
        return x * 0 + 1
    result = None
    base = x
    while n:
        if n & 1:
            result = base if result is None else result * base
        n >>= 1
        if n:
            base = base * base
    return result


class Dual:
    __slots__ = ("val", "der")
    # keep numpy from broadcasting a Dual into an object array
    __array_ufunc__ = None

    def __init__(self, val, der=0.0):
        self.val = val
        self.der = der

    def __repr__(self) -> str:
        return f"Dual({self.val!r}, {self.der!r})"

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Dual):
            return bool(np.all(self.val == other.val)) and bool(np.all(self.der == other.der))
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def __neg__(self) -> "Dual":
        return Dual(-self.val, -self.der)

    def __pos__(self) -> "Dual":
        return self

    def __add__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val + other.val, self.der + other.der)
        return Dual(self.val + other, self.der)

    def __radd__(self, other):
        return Dual(other + self.val, self.der)

    def __sub__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val - other.val, self.der - other.der)
        return Dual(self.val - other, self.der)

    def __rsub__(self, other):
        return Dual(other - self.val, -self.der)

    def __mul__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val * other.val, self.val * other.der + self.der * other.val)
        return Dual(self.val * other, self.der * other)

    def __rmul__(self, other):
        return Dual(other * self.val, other * self.der)

    def __truediv__(self, other):
        if isinstance(other, Dual):
            q = _div(self.val, other.val)
            return Dual(q, _div(self.der - q * other.der, other.val))
        return Dual(_div(self.val, other), _div(self.der, other))

    def __rtruediv__(self, other):
        q = _div(other, self.val)
        return Dual(q, _div(-q * self.der, self.val))

    def __pow__(self, n):
        if not isinstance(n, int) or isinstance(n, bool) or n < 0:
            return NotImplemented
        if n == 0:
            return Dual(ipow(self.val, 0), self.der * 0)
        return Dual(ipow(self.val, n), n * ipow(self.val, n - 1) * self.der)

    def exp(self) -> "Dual":
        e = elementary("exp", self.val)
        return Dual(e, e * self.der)

    def sin(self) -> "Dual":
        return Dual(elementary("sin", self.val), elementary("cos", self.val) * self.der)

    def cos(self) -> "Dual":
        return Dual(elementary("cos", self.val), -(elementary("sin", self.val) * self.der))


def _div(a, b):
    try:
        return a / b
    except ZeroDivisionError as exc:
        raise DomainError("division by zero") from exc


def value_of(x):
    return x.val if isinstance(x, Dual) else x


def derivative_of(x):
    return x.der if isinstance(x, Dual) else 0.0

"""Margins of the sufficient injectivity conditions.

A margin is ``LHS - RHS`` of a strict inequality. Evaluated at a point it is a
float (stored as a point interval); evaluated over a box it is an interval
whose lower end, when positive, proves the inequality on the whole box.

The ``*_terms`` / ``*_value`` helpers take Wirtinger derivatives directly and
work elementwise on complex scalars or numpy arrays; the witness search and
the acceptance suite use them for vectorized evaluation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .calculus import Jacobian, WirtingerPair, differential, jacobian, wirtinger
from .errors import DegenerateWitness, DimensionMismatch, NotHolomorphic, SingularA
from .expr import MapKind, MapSpec
from .interval import Box, ComplexBox, Interval, modulus_bounds

DELTA_MIN = 1e-9
HOLO_TOL = 1e-10
SINGULAR_TOL = 1e-12

POSITIVE = "positive"
NEGATIVE = "negative"


# -- parameter types ---------------------------------------------------------------

@dataclass(frozen=True)
class LinearOperator:
    """Real n x n matrix A, row-major."""

    entries: tuple[tuple[float, ...], ...]

    def __init__(self, entries):
        rows = tuple(tuple(float(v) for v in row) for row in np.atleast_2d(np.asarray(entries, dtype=float)))
        if any(len(r) != len(rows) for r in rows):
            raise DimensionMismatch("A must be square")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def identity(cls, n: int) -> "LinearOperator":
        return cls(np.eye(n))

    @property
    def n(self) -> int:
        return len(self.entries)

    def to_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=float)

    def det(self) -> float:
        return float(np.linalg.det(self.to_array()))

    def check_invertible(self) -> None:
        if abs(self.det()) <= SINGULAR_TOL:
            raise SingularA(f"|det A| = {abs(self.det()):.3g} <= {SINGULAR_TOL}")

    def __neg__(self) -> "LinearOperator":
        return LinearOperator(-self.to_array())

    def apply(self, v: Sequence) -> tuple:
        return tuple(sum((row[j] * v[j] for j in range(self.n)), 0.0) for row in self.entries)


@dataclass(frozen=True)
class WitnessPair:
    """(w1, w2) normalized to |w1|^2 + |w2|^2 = 1."""

    w1: complex
    w2: complex

    def __post_init__(self):
        w1, w2 = complex(self.w1), complex(self.w2)
        s = math.sqrt(abs(w1) ** 2 + abs(w2) ** 2)
        if s == 0.0 or not math.isfinite(s):
            raise DegenerateWitness("witness pair must be finite and nonzero")
        w1, w2 = w1 / s, w2 / s
        object.__setattr__(self, "w1", w1)
        object.__setattr__(self, "w2", w2)
        if abs(self.delta) <= DELTA_MIN:
            raise DegenerateWitness(
                f"re w1 im w2 - re w2 im w1 = {self.delta:.3g}; need |delta| > {DELTA_MIN}")

    @classmethod
    def from_angle(cls, gamma: float, conjugate: bool = False) -> "WitnessPair":
        """Witness whose Wirtinger inequality is twice the one-angle condition at ``gamma``.

        Standard: w1 = e^{i gamma}, w2 = i e^{i gamma}. Conjugate: w1 = e^{-i gamma},
        w2 = -i e^{-i gamma}; the LHS is then 2 re(dzbar e^{i gamma}).
        """
        if conjugate:
            e = cmath.exp(-1j * gamma)
            return cls(e, -1j * e)
        e = cmath.exp(1j * gamma)
        return cls(e, 1j * e)

    @property
    def delta(self) -> float:
        return self.w1.real * self.w2.imag - self.w2.real * self.w1.imag

    @property
    def L(self) -> np.ndarray:
        return np.array([[self.w1.real, self.w2.real], [self.w1.imag, self.w2.imag]])


@dataclass(frozen=True)
class Margin:
    value: Interval
    criterion: str
    region: Any = None

    @property
    def lo(self) -> float:
        return self.value.lo

    @property
    def hi(self) -> float:
        return self.value.hi


@dataclass(frozen=True)
class Criterion:
    """Tagged criterion with its parameters, as consumed by certify."""

    tag: str  # anww | mocanu | mocanu_conjugate | eq3 | sylvester
    gamma: float | None = None
    witness: WitnessPair | None = None
    A: LinearOperator | None = None
    sign: str = POSITIVE

    TAGS = ("anww", "mocanu", "mocanu_conjugate", "eq3", "sylvester")

    def __post_init__(self):
        if self.tag not in self.TAGS:
            raise ValueError(f"unknown criterion {self.tag!r}")
        if self.tag in ("anww", "mocanu", "mocanu_conjugate") and self.gamma is None:
            raise ValueError(f"{self.tag} needs gamma")
        if self.tag == "eq3" and self.witness is None:
            raise ValueError("eq3 needs a witness pair")
        if self.tag == "sylvester":
            if self.A is None:
                raise ValueError("sylvester needs A")
            self.A.check_invertible()
        if self.sign not in (POSITIVE, NEGATIVE):
            raise ValueError(f"sign must be {POSITIVE!r} or {NEGATIVE!r}")

    def params(self) -> dict:
        if self.tag == "sylvester":
            return {"A": [list(r) for r in self.A.entries], "sign": self.sign}
        if self.tag == "eq3":
            w = self.witness
            return {"w1": [w.w1.real, w.w1.imag], "w2": [w.w2.real, w.w2.imag], "delta": w.delta}
        return {"gamma": self.gamma}


# -- helpers -------------------------------------------------------------------------

def _is_region(at) -> bool:
    return isinstance(at, (Box, ComplexBox))


def _as_box(at) -> Box:
    if isinstance(at, ComplexBox):
        return Box([at.re, at.im])
    return at


def _point(v: float) -> Interval:
    return Interval(v, v)


def _complex_point(at) -> complex:
    if isinstance(at, (complex, np.complexfloating, float, int, np.floating)):
        return complex(at)
    x, y = at
    return complex(x, y)


# -- Sylvester leading-minor criterion ---------------------------------------------

def symmetric_part(A: np.ndarray, J: np.ndarray) -> np.ndarray:
    """A^T J + J^T A."""
    P = A.T @ J
    return P + P.T


def _det_pivoting(M: list[list[float]]) -> float:
    a = [list(r) for r in M]
    n = len(a)
    det = 1.0
    for k in range(n):
        p = max(range(k, n), key=lambda i: abs(a[i][k]))
        if a[p][k] == 0.0:
            return 0.0
        if p != k:
            a[k], a[p] = a[p], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            for j in range(k + 1, n):
                a[i][j] -= f * a[k][j]
    return det


def leading_minors(M) -> list[float]:
    """Leading principal minors d_1..d_n by fraction-free (Bareiss) elimination."""
    rows = [[float(v) for v in r] for r in np.asarray(M, dtype=float)]
    n = len(rows)
    a = [r[:] for r in rows]
    minors: list[float] = []
    prev = 1.0
    for k in range(n):
        pivot = a[k][k]
        minors.append(pivot)
        if k == n - 1:
            break
        if pivot == 0.0:
            # Bareiss breaks down; finish with explicit determinants
            minors.extend(_det_pivoting([r[:m] for r in rows[:m]]) for m in range(k + 2, n + 1))
            return minors
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (pivot * a[i][j] - a[i][k] * a[k][j]) / prev
        prev = pivot
    return minors


def _interval_cofactor_det(M: list[list[Interval]]) -> Interval:
    n = len(M)
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    total = None
    for j in range(n):
        sub = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * _interval_cofactor_det(sub)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total


def _interval_lu_pivots(M: list[list[Interval]]) -> list[Interval]:
    """Pivots of Gaussian elimination without row exchanges; entire() after a zero pivot."""
    a = [row[:] for row in M]
    n = len(a)
    pivots: list[Interval] = []
    for k in range(n):
        p = a[k][k]
        pivots.append(p)
        if p.contains_zero():
            pivots.extend(Interval.entire() for _ in range(k + 1, n))
            return pivots
        for i in range(k + 1, n):
            f = a[i][k] / p
            for j in range(k + 1, n):
                a[i][j] = a[i][j] - f * a[k][j]
    return pivots


def interval_leading_minors(M: list[list[Interval]]) -> list[Interval]:
    """Enclosures of the leading principal minors of an interval matrix.

    Cofactor expansion for orders up to 4, products of interval LU pivots above.
    """
    n = len(M)
    minors = [_interval_cofactor_det([row[:m] for row in M[:m]]) for m in range(1, min(n, 4) + 1)]
    if n > 4:
        pivots = _interval_lu_pivots(M)
        prod = pivots[0]
        for m in range(1, n):
            prod = prod * pivots[m]
            if m + 1 > 4:
                minors.append(prod)
    return minors


def _interval_symmetric_part(A: np.ndarray, J: Sequence[Sequence[Interval]]) -> list[list[Interval]]:
    n = len(J)
    M = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            acc = Interval(0.0)
            for k in range(n):
                acc = acc + J[k][j] * float(A[k, i]) + J[k][i] * float(A[k, j])
            M[i][j] = acc
            M[j][i] = acc
    return M


def minors_margin(minors: Sequence, sign: str = POSITIVE):
    """min_m d_m (positive) or min_m (-1)^m d_m (negative); intervals or floats."""
    signed = [d if sign == POSITIVE or m % 2 == 0 else -d for m, d in enumerate(minors, start=1)]
    if isinstance(signed[0], Interval):
        return Interval(min(d.lo for d in signed), min(d.hi for d in signed))
    return min(signed)


def matrix_margin(M, sign: str = POSITIVE) -> float:
    """Sylvester margin of a symmetric float matrix."""
    return minors_margin(leading_minors(M), sign)


def _check_sylvester(T: MapSpec, A: LinearOperator) -> None:
    if A.n != T.dim:
        raise DimensionMismatch(f"A is {A.n}x{A.n} but the map has dimension {T.dim}")
    A.check_invertible()


def sylvester_margin(T: MapSpec, A: LinearOperator, at, sign: str = POSITIVE) -> Margin:
    """Margin of the leading-minor test on A^T J_T + J_T^T A."""
    _check_sylvester(T, A)
    Am = A.to_array()
    if _is_region(at):
        box = _as_box(at)
        J = jacobian(T, box).matrix
        J = [[Interval.coerce(v) for v in row] for row in J]
        M = _interval_symmetric_part(Am, J)
        return Margin(minors_margin(interval_leading_minors(M), sign), "sylvester", box)
    J = np.array(jacobian(T, tuple(float(c) for c in at)).matrix, dtype=float)
    return Margin(_point(matrix_margin(symmetric_part(Am, J), sign)), "sylvester", tuple(at))


# -- Wirtinger inequality and its specializations -------------------------------

def eq3_terms(dz, dzbar, w1, w2):
    """(LHS, RHS) of the Wirtinger inequality for raw (unnormalized) w1, w2."""
    lhs = (dz * w1 + dzbar * np.conj(w1)).real + (dz * w2 + dzbar * np.conj(w2)).imag
    rhs = abs(dz * (w2 - 1j * w1) + dzbar * np.conj(w2 + 1j * w1))
    return lhs, rhs


def eq3_value(dz, dzbar, w1, w2):
    lhs, rhs = eq3_terms(dz, dzbar, w1, w2)
    return lhs - rhs


def _eq3_interval(dz: ComplexBox, dzbar: ComplexBox, w1: complex, w2: complex) -> Interval:
    W1, W2 = ComplexBox.point(w1), ComplexBox.point(w2)
    iW1 = ComplexBox.point(complex(-w1.imag, w1.real))  # exact: i * w1
    df1 = dz * W1 + dzbar * W1.conjugate()
    df2 = dz * W2 + dzbar * W2.conjugate()
    lhs = df1.re + df2.im
    rhs = dz * (W2 - iW1) + dzbar * (W2 + iW1).conjugate()
    return lhs - modulus_bounds(rhs)


def _complex_function(f: MapSpec) -> None:
    if f.kind is not MapKind.COMPLEX:
        raise DimensionMismatch("criterion needs a complex function")


def eq3_margin(f: MapSpec, w: WitnessPair, at) -> Margin:
    """Margin of the general (w1, w2) Wirtinger inequality."""
    _complex_function(f)
    if not isinstance(w, WitnessPair):
        raise DegenerateWitness("eq3 needs a validated WitnessPair")
    if _is_region(at):
        wp = wirtinger(f, _as_box(at))
        return Margin(_eq3_interval(wp.dz, wp.dzbar, w.w1, w.w2), "eq3", at)
    z = _complex_point(at)
    wp = wirtinger(f, z)
    return Margin(_point(float(eq3_value(wp.dz, wp.dzbar, w.w1, w.w2))), "eq3", z)


def mocanu_value(dz, dzbar, gamma: float, variant: str = "standard"):
    e = cmath.exp(1j * gamma)
    if variant == "standard":
        return (dz * e).real - abs(dzbar)
    if variant == "conjugate":
        return (dzbar * e).real - abs(dz)
    raise ValueError(f"unknown Mocanu variant {variant!r}")


def mocanu_margin(f: MapSpec, gamma: float, variant: str = "standard", at=None) -> Margin:
    """re(dz e^{i gamma}) - |dzbar|  (standard) or re(dzbar e^{i gamma}) - |dz|  (conjugate)."""
    _complex_function(f)
    if variant not in ("standard", "conjugate"):
        raise ValueError(f"unknown Mocanu variant {variant!r}")
    tag = "mocanu" if variant == "standard" else "mocanu_conjugate"
    if at is None:
        at = f.domain
    if _is_region(at):
        wp = wirtinger(f, _as_box(at))
        main, other = (wp.dz, wp.dzbar) if variant == "standard" else (wp.dzbar, wp.dz)
        E = ComplexBox.point(cmath.exp(1j * gamma))
        # |e| is 1 only up to rounding; scale the subtracted modulus by its enclosure
        value = (main * E).re - modulus_bounds(E) * modulus_bounds(other)
        return Margin(value, tag, at)
    z = _complex_point(at)
    wp = wirtinger(f, z)
    return Margin(_point(float(mocanu_value(wp.dz, wp.dzbar, gamma, variant))), tag, z)


def anww_value(dz, gamma: float):
    return (dz * cmath.exp(1j * gamma)).real


def holomorphy_residual(wp: WirtingerPair):
    """|dzbar| relative to max(1, |dz|) (elementwise for arrays)."""
    return abs(wp.dzbar) / np.maximum(1.0, abs(wp.dz))


def check_holomorphic(f: MapSpec, points, tol: float = HOLO_TOL) -> None:
    """Raise NotHolomorphic if the Cauchy-Riemann residual exceeds ``tol`` at any point."""
    pts = np.asarray([_complex_point(p) for p in points], dtype=complex)
    wp = wirtinger(f, pts)
    res = np.broadcast_to(holomorphy_residual(wp), pts.shape)
    worst = int(np.argmax(res))
    if not res[worst] <= tol:
        raise NotHolomorphic(f"|df/dzbar| = {res[worst]:.3g} at z = {pts[worst]} exceeds {tol}")


def _probe_points(box: Box) -> list[complex]:
    return [complex(*box.center())] + [complex(*c) for c in box.corners()]


def anww_margin(f: MapSpec, gamma: float, at=None, holo_tol: float = HOLO_TOL) -> Margin:
    """re(f'(z) e^{i gamma}); holomorphy is checked at the point or box probes."""
    _complex_function(f)
    if at is None:
        at = f.domain
    if _is_region(at):
        box = _as_box(at)
        check_holomorphic(f, _probe_points(box), holo_tol)
        wp = wirtinger(f, box)
        E = ComplexBox.point(cmath.exp(1j * gamma))
        return Margin((wp.dz * E).re, "anww", at)
    z = _complex_point(at)
    check_holomorphic(f, [z], holo_tol)
    wp = wirtinger(f, z)
    return Margin(_point(float(anww_value(wp.dz, gamma))), "anww", z)


# -- determinant form and the segment condition ---------------------------------

@dataclass(frozen=True)
class DetForm:
    detL_value: float
    reDf1: float
    det_symmetric: float = field(default=float("nan"))
    matrix: tuple = ()


def det_form_terms(dz, dzbar, w1, w2):
    """(det of the 2x2 differential matrix, re df(w1)); elementwise."""
    df1 = dz * w1 + dzbar * np.conj(w1)
    df2 = dz * w2 + dzbar * np.conj(w2)
    off = df2.real + df1.imag
    return 4.0 * df1.real * df2.imag - off * off, df1.real


def det_form_check(f: MapSpec, w: WitnessPair, at) -> DetForm:
    """Determinant form of the Wirtinger inequality at a point.

    ``detL_value`` is built from df_z(w1), df_z(w2); ``det_symmetric`` is
    det(J L + (J L)^T) from the Jacobian, an independent route to the same
    number (the columns of J L are df_z(w1), df_z(w2) as real vectors).
    """
    _complex_function(f)
    z = _complex_point(at)
    jac = jacobian(f, z)
    wp = wirtinger(f, z)
    df1 = differential(wp, w.w1)
    df2 = differential(wp, w.w2)
    off = df2.real + df1.imag
    mat = ((2.0 * df1.real, off), (off, 2.0 * df2.imag))
    det = mat[0][0] * mat[1][1] - off * off
    JL = np.array(jac.matrix, dtype=float) @ w.L
    S = JL + JL.T
    return DetForm(float(det), float(df1.real), float(np.linalg.det(S)), mat)


def segment_condition(T: MapSpec, A: LinearOperator, x: Sequence[float], y: Sequence[float],
                      samples: int = 64) -> float:
    """min over sampled z in the open segment (x, y) of <J_T(z)(y - x), A(y - x)>.

    Diagnostic only: a sampled minimum proves nothing about unsampled z.
    """
    n = T.dim
    if len(x) != n or len(y) != n or A.n != n:
        raise DimensionMismatch("x, y and A must match the map dimension")
    if samples < 2:
        raise ValueError("samples must be >= 2")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d = y - x
    if not np.any(d):
        raise ValueError("x and y must differ")
    t = np.arange(1, samples + 1) / (samples + 1)
    pts = x[:, None] + d[:, None] * t[None, :]
    J = jacobian(T, tuple(pts)).matrix
    Jd = [sum(J[i][j] * d[j] for j in range(n)) for i in range(n)]
    Ad = A.to_array() @ d
    vals = sum(np.broadcast_to(Jd[i], t.shape) * Ad[i] for i in range(n))
    return float(np.min(vals))


def pointwise_margin(m: MapSpec, crit: Criterion, at):
    """Float margin of ``crit`` at one point (no holomorphy check)."""
    if crit.tag == "sylvester":
        return sylvester_margin(m, crit.A, at, crit.sign).lo
    z = _complex_point(at)
    wp = wirtinger(m, z)
    return float(_wirtinger_value(crit, wp.dz, wp.dzbar))


def _wirtinger_value(crit: Criterion, dz, dzbar):
    if crit.tag == "anww":
        return anww_value(dz, crit.gamma)
    if crit.tag == "mocanu":
        return mocanu_value(dz, dzbar, crit.gamma, "standard")
    if crit.tag == "mocanu_conjugate":
        return mocanu_value(dz, dzbar, crit.gamma, "conjugate")
    return eq3_value(dz, dzbar, crit.witness.w1, crit.witness.w2)


def pointwise_margins(m: MapSpec, crit: Criterion, points: np.ndarray) -> np.ndarray:
    """Vectorized float margins at complex ``points`` (Wirtinger criteria only)."""
    pts = np.asarray(points, dtype=complex)
    wp = wirtinger(m, pts)
    dz = np.broadcast_to(wp.dz, pts.shape)
    dzbar = np.broadcast_to(wp.dzbar, pts.shape)
    return np.asarray(_wirtinger_value(crit, dz, dzbar), dtype=float)


def criterion_margin(m: MapSpec, crit: Criterion, at) -> Margin:
    """Dispatch ``crit`` onto its margin function at a point or box."""
    if crit.tag == "sylvester":
        return sylvester_margin(m, crit.A, at, crit.sign)
    if crit.tag == "anww":
        return anww_margin(m, crit.gamma, at)
    if crit.tag == "mocanu":
        return mocanu_margin(m, crit.gamma, "standard", at)
    if crit.tag == "mocanu_conjugate":
        return mocanu_margin(m, crit.gamma, "conjugate", at)
    return eq3_margin(m, crit.witness, at)

"""Jacobians, Wirtinger derivatives and differentials by forward-mode AD.

Each Jacobian column comes from one evaluation pass with the tangent seeded
in that variable. Points may be float tuples, numpy arrays (vectorized over
many points at once) or a :class:`~injcert.interval.Box`, in which case every
entry is an interval enclosing the partial derivative over the whole box.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from .dual import Dual, derivative_of, value_of
from .errors import DimensionMismatch
from .expr import MapKind, MapSpec, evaluate
from .interval import Box, ComplexBox, Interval


@dataclass(frozen=True)
class Jacobian:
    """``matrix[i][j]`` is d t_i / d x_j at ``at`` (or an enclosure over the box)."""

    matrix: tuple[tuple[Any, ...], ...]
    at: Any

    @property
    def n(self) -> int:
        return len(self.matrix)

    def to_array(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.matrix])

    def apply(self, vec: Sequence) -> tuple:
        return tuple(sum((row[j] * vec[j] for j in range(len(vec))), 0.0) for row in self.matrix)


@dataclass(frozen=True)
class WirtingerPair:
    """df/dz and df/dzbar at a point (complex) or over a box (ComplexBox)."""

    dz: Any
    dzbar: Any
    at: Any = None


def _coords(m: MapSpec, at) -> tuple:
    if isinstance(at, Box):
        coords = tuple(at.intervals)
    elif isinstance(at, ComplexBox):
        coords = (at.re, at.im)
    elif isinstance(at, (complex, np.complexfloating)) or (
            isinstance(at, np.ndarray) and np.iscomplexobj(at)):
        coords = (np.real(at) if isinstance(at, np.ndarray) else at.real,
                  np.imag(at) if isinstance(at, np.ndarray) else at.imag)
    else:
        coords = tuple(at)
    if len(coords) != m.dim:
        raise DimensionMismatch(f"expected {m.dim} coordinates, got {len(coords)}")
    return tuple(float(c) if isinstance(c, (int, np.floating)) else c for c in coords)


def jacobian_and_value(m: MapSpec, at) -> tuple[Jacobian, tuple]:
    coords = _coords(m, at)
    n = m.dim
    columns = []
    values: tuple = ()
    for j in range(n):
        env = {name: Dual(c, 1.0 if i == j else 0.0) for i, (name, c) in enumerate(zip(m.variables, coords))}
        outs = [evaluate(comp, env) for comp in m.components]
        columns.append([derivative_of(o) for o in outs])
        if j == 0:
            values = tuple(value_of(o) for o in outs)
    if any(isinstance(c, Interval) for c in coords):
        # entries independent of a variable come back as plain zeros
        columns = [[Interval.coerce(e) if not isinstance(e, Interval) else e for e in col] for col in columns]
    matrix = tuple(tuple(columns[j][i] for j in range(n)) for i in range(n))
    return Jacobian(matrix, at), values


def jacobian(m: MapSpec, at) -> Jacobian:
    """Jacobian of the component map (u, v for complex functions) at a point or box."""
    return jacobian_and_value(m, at)[0]


def wirtinger_from_jacobian(jac: Jacobian) -> WirtingerPair:
    (ux, uy), (vx, vy) = jac.matrix
    if any(isinstance(e, Interval) for e in (ux, uy, vx, vy)):
        ux, uy, vx, vy = (Interval.coerce(e) for e in (ux, uy, vx, vy))
        dz = ComplexBox((ux + vy) * 0.5, (vx - uy) * 0.5)
        dzbar = ComplexBox((ux - vy) * 0.5, (vx + uy) * 0.5)
        return WirtingerPair(dz, dzbar, jac.at)
    dz = 0.5 * (ux + vy) + 0.5j * (vx - uy)
    dzbar = 0.5 * (ux - vy) + 0.5j * (vx + uy)
    return WirtingerPair(dz, dzbar, jac.at)


def wirtinger(m: MapSpec, at) -> WirtingerPair:
    """Wirtinger derivatives of f = u + iv at a complex point, (x, y) pair or box."""
    if m.kind is not MapKind.COMPLEX:
        raise DimensionMismatch("Wirtinger derivatives need a complex function")
    return wirtinger_from_jacobian(jacobian(m, at))


def differential(w: WirtingerPair, direction):
    """df_z(direction) = dz * direction + dzbar * conj(direction)."""
    return w.dz * direction + w.dzbar * direction.conjugate()


def jacobian_action(jac: Jacobian, direction):
    """Real-linear action of a 2x2 Jacobian on ``direction`` read as (re, im)."""
    (a, b), (c, d) = jac.matrix
    p, q = direction.real, direction.imag
    return (a * p + b * q) + 1j * (c * p + d * q)

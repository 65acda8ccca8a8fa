from __future__ import annotations

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_expr, rel_err
from injcert.calculus import differential, jacobian, jacobian_action, wirtinger, WirtingerPair
from injcert.errors import DimensionMismatch
from injcert.expr import MapKind, MapSpec, expand_holomorphic, to_source
from injcert.interval import Box
from injcert.oracle import fd_jacobian

SQUARE = [[-2, 2], [-2, 2]]


def test_identity_jacobian():
    m = MapSpec.real_map(["x", "y"], ["x", "y"], SQUARE)
    assert jacobian(m, (0.3, -1.2)).to_array().tolist() == [[1, 0], [0, 1]]


def test_z_squared_jacobian():
    m = MapSpec.complex_function("x^2 - y^2", "2*x*y", SQUARE)
    assert jacobian(m, (1.0, 2.0)).to_array().tolist() == [[2, -4], [4, 2]]


def test_jacobian_matches_finite_differences():
    m = MapSpec.real_map(["x + y^2", "sin(x)"], ["x", "y"], SQUARE)
    J = jacobian(m, (0.0, 1.0)).to_array()
    F = fd_jacobian(m, (0.0, 1.0), 1e-6).to_array()
    assert np.allclose(J, [[1, 2], [1, 0]], atol=0)
    assert np.allclose(J, F, atol=1e-6)


def test_wirtinger_examples():
    sq = MapSpec.complex_function("x^2 - y^2", "2*x*y", SQUARE)
    w = wirtinger(sq, 1 + 2j)
    assert w.dz == 2 + 4j and w.dzbar == 0
    conj = MapSpec.complex_function("x", "-y", SQUARE)
    w = wirtinger(conj, 0.7 - 0.1j)
    assert w.dz == 0 and w.dzbar == 1
    mixed = MapSpec.complex_function("1.5*x", "0.5*y", SQUARE)
    w = wirtinger(mixed, 0.2 + 0.9j)
    F = fd_jacobian(mixed, (0.2, 0.9)).to_array()
    dz_fd = 0.5 * (F[0, 0] + F[1, 1]) + 0.5j * (F[1, 0] - F[0, 1])
    dzbar_fd = 0.5 * (F[0, 0] - F[1, 1]) + 0.5j * (F[1, 0] + F[0, 1])
    assert abs(w.dz - 1) < 1e-15 and abs(w.dzbar - 0.5) < 1e-15
    assert abs(w.dz - dz_fd) < 1e-8 and abs(w.dzbar - dzbar_fd) < 1e-8


def test_differential_examples():
    w = 0.3 - 0.8j
    assert differential(WirtingerPair(1, 0), w) == w
    assert differential(WirtingerPair(0, 1), 1j) == -1j
    sq = MapSpec.complex_function("x^2 - y^2", "2*x*y", SQUARE)
    wp = wirtinger(sq, 1 + 2j)
    assert differential(wp, 1 + 0j) == 2 + 4j
    assert jacobian_action(jacobian(sq, (1.0, 2.0)), 1 + 0j) == 2 + 4j


def test_wirtinger_needs_complex():
    m = MapSpec.real_map(["x", "y"], ["x", "y"], SQUARE)
    with pytest.raises(DimensionMismatch):
        wirtinger(m, 1j)


def _random_complex(seed: int, smooth: bool = True) -> MapSpec:
    rng = np.random.Generator(np.random.Philox(seed))
    u = to_source(random_expr(rng, max_depth=4, smooth=smooth))
    v = to_source(random_expr(rng, max_depth=4, smooth=smooth))
    return MapSpec.complex_function(u, v, SQUARE)


@settings(max_examples=200)
@given(st.integers(0, 2**32 - 1), st.complex_numbers(max_magnitude=1.5), st.complex_numbers(max_magnitude=3))
def test_differential_matches_jacobian_action(seed, z, w):
    m = _random_complex(seed)
    wp = wirtinger(m, z)
    lhs = differential(wp, w)
    rhs = jacobian_action(jacobian(m, (z.real, z.imag)), w)
    if cmath.isfinite(lhs) and cmath.isfinite(rhs):
        assert rel_err(lhs, rhs) <= 1e-12


@settings(max_examples=50)
@given(st.lists(st.floats(-2, 2), min_size=1, max_size=5), st.integers(0, 2**32 - 1))
def test_cauchy_riemann_detection(coeffs, seed):
    src = " + ".join(f"({c!r})*z^{k}" for k, c in enumerate(coeffs))
    u, v = expand_holomorphic(src)
    m = MapSpec.complex_function(u, v, SQUARE)
    rng = np.random.Generator(np.random.Philox(seed))
    z = rng.uniform(-1, 1, 100) + 1j * rng.uniform(-1, 1, 100)
    wp = wirtinger(m, z)
    assert np.all(np.abs(wp.dzbar) < 1e-10)


@settings(max_examples=60)
@given(st.integers(0, 2**32 - 1))
def test_interval_jacobian_encloses_point_jacobians(seed):
    rng = np.random.Generator(np.random.Philox(seed))
    comps = [to_source(random_expr(rng, max_depth=3)) for _ in range(2)]
    m = MapSpec.real_map(comps, ["x", "y"], SQUARE)
    lo = rng.uniform(-1.5, 1, 2)
    box = Box.from_bounds([[lo[0], lo[0] + 0.5], [lo[1], lo[1] + 0.5]])
    try:
        J = jacobian(m, box)
    except ArithmeticError:
        return
    pts = lo + 0.5 * rng.random((100, 2))
    for p in pts:
        P = jacobian(m, tuple(p)).to_array()
        for i in range(2):
            for j in range(2):
                if math.isfinite(P[i, j]):
                    assert J.matrix[i][j].contains(P[i, j])


def test_vectorized_wirtinger_matches_scalar(rng):
    m = MapSpec.complex_function("x^3 - 3*x*y^2 + sin(y)", "3*x^2*y - y^3 + x*y", SQUARE)
    z = rng.uniform(-1, 1, 20) + 1j * rng.uniform(-1, 1, 20)
    wp = wirtinger(m, z)
    for k in range(20):
        s = wirtinger(m, complex(z[k]))
        assert wp.dz[k] == s.dz and wp.dzbar[k] == s.dzbar


def test_complex_function_kind():
    m = MapSpec.complex_function("x", "y", SQUARE)
    assert m.kind is MapKind.COMPLEX

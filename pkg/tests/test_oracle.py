from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from injcert.criteria import LinearOperator
from injcert.errors import DimensionMismatch
from injcert.expr import MapSpec
from injcert.interval import Box
from injcert.oracle import (
    check_relative_monotonicity,
    fd_jacobian,
    find_collision,
    make_rng,
    verify_collision,
)

SQUARE = [[-1, 1], [-1, 1]]


def test_z_squared_collision():
    m = MapSpec.complex_function("x*x - y*y", "2*x*y", SQUARE)
    assert verify_collision(m, (0.5, 0.5), (-0.5, -0.5)).residual == 0.0
    hit = find_collision(m, pairs=20_000, seed=1)
    assert hit is not None
    assert hit.residual <= 1e-9 and hit.separation >= 1e-4
    (x1, y1), (x2, y2) = hit.x1, hit.x2
    # the only collisions of z^2 are antipodal pairs
    assert abs(x1 + x2) < 1e-6 and abs(y1 + y2) < 1e-6


def test_identity_has_no_collision():
    assert find_collision(MapSpec.complex_function("x", "y", SQUARE), pairs=20_000) is None


def test_cubic_components_no_collision():
    # x^3 is strictly increasing, so (x^3, y) is injective
    assert find_collision(MapSpec.real_map(["x^3", "y"], ["x", "y"], SQUARE), pairs=100_000) is None


def test_verify_rejects_close_or_outside_pairs():
    m = MapSpec.complex_function("x*x - y*y", "2*x*y", SQUARE)
    assert verify_collision(m, (0.5, 0.5), (0.5, 0.5)) is None
    assert verify_collision(m, (0.9, 0.9), (-0.9, -0.9), Box.from_bounds([[0, 1], [0, 1]])) is None


def test_collision_in_three_dimensions():
    m = MapSpec.real_map(["x^2", "y", "s"], ["x", "y", "s"], [[-1, 1]] * 3)
    hit = find_collision(m, pairs=5_000, seed=7)
    assert hit is not None and abs(hit.x1[0] + hit.x2[0]) < 1e-6


@settings(max_examples=10)
@given(st.integers(0, 2**63 - 1))
def test_reproducible(seed):
    m = MapSpec.complex_function("x^3 - 3*x*y^2", "3*x^2*y - y^3", SQUARE)
    a = find_collision(m, pairs=2_000, seed=seed)
    b = find_collision(m, pairs=2_000, seed=seed, threads=3)
    assert a == b


def test_rng_streams_are_independent_of_global_state():
    a = make_rng(5).random(4)
    np.random.seed(0)
    np.random.random(10)
    assert np.array_equal(a, make_rng(5).random(4))


def test_monotonicity_examples():
    ident = MapSpec.real_map(["x", "y"], ["x", "y"], SQUARE)
    r = check_relative_monotonicity(ident, LinearOperator.identity(2), pairs=10_000)
    assert r.min_inner > 0 and r.violating_pair is None
    conj = MapSpec.complex_function("x", "-y", SQUARE)
    r = check_relative_monotonicity(conj, LinearOperator.identity(2), pairs=10_000)
    assert r.min_inner < 0
    (x, y) = r.violating_pair
    d = np.subtract(x, y)
    assert d[0] ** 2 - d[1] ** 2 == pytest.approx(r.min_inner)
    r = check_relative_monotonicity(conj, LinearOperator([[1, 0], [0, -1]]), pairs=10_000)
    assert r.min_inner > 0
    with pytest.raises(DimensionMismatch):
        check_relative_monotonicity(conj, LinearOperator.identity(3))


def test_fd_jacobian_examples():
    ident = MapSpec.real_map(["x", "y"], ["x", "y"], SQUARE)
    assert np.allclose(fd_jacobian(ident, (0.3, 0.1)).to_array(), np.eye(2), atol=1e-10)
    sq = MapSpec.complex_function("x^2 - y^2", "2*x*y", SQUARE)
    assert np.allclose(fd_jacobian(sq, (1, 2)).to_array(), [[2, -4], [4, 2]], atol=1e-6)
    with pytest.raises(ValueError):
        fd_jacobian(sq, (1, 2), 0.0)


def test_pairs_must_be_positive():
    with pytest.raises(ValueError):
        find_collision(MapSpec.complex_function("x", "y", SQUARE), pairs=0)

from __future__ import annotations

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from injcert.calculus import wirtinger
from injcert.criteria import anww_value, eq3_value, mocanu_value
from injcert.errors import NoValidWitness
from injcert.expr import MapSpec, holomorphic_uv
from injcert.witness import GRID_SIDE, RANDOM_SAMPLES, domain_samples, search_gamma, search_witness_pair

SQUARE = [[-1, 1], [-1, 1]]


def test_sample_set_shape_and_determinism():
    box = MapSpec.complex_function("x", "y", SQUARE).domain
    s = domain_samples(box)
    assert s.shape == (GRID_SIDE**2 + RANDOM_SAMPLES,)
    assert np.array_equal(s, domain_samples(box))
    assert np.all(np.abs(s.real) <= 1) and np.all(np.abs(s.imag) <= 1)


def test_gamma_rotation():
    r = search_gamma(MapSpec.complex_function("-y", "x", SQUARE), "anww")
    assert r.gamma == pytest.approx(3 * math.pi / 2, abs=1e-5)
    assert r.margin_estimate == pytest.approx(1.0, abs=1e-9)


def test_gamma_identity():
    r = search_gamma(MapSpec.complex_function("x", "y", SQUARE), "mocanu")
    assert r.gamma == 0.0 and r.margin_estimate == 1.0


def test_gamma_mixed_dense_sweep():
    # e^{i pi/4} z + 0.3 conj(z); derived optimum gamma = -pi/4 (mod 2 pi), margin 0.7
    c = cmath.exp(1j * math.pi / 4)
    u = f"{c.real!r}*x - {c.imag!r}*y + 0.3*x"
    v = f"{c.imag!r}*x + {c.real!r}*y - 0.3*y"
    f = MapSpec.complex_function(u, v, SQUARE)
    r = search_gamma(f, "mocanu")
    assert r.gamma == pytest.approx(7 * math.pi / 4, abs=1e-5)
    assert r.margin_estimate == pytest.approx(0.7, abs=1e-9)
    sweep = np.linspace(0, 2 * math.pi, 20001)
    dense = [mocanu_value(c, 0.3, g) for g in sweep]
    assert r.margin_estimate >= max(dense) - 1e-9


def test_witness_identity():
    r = search_witness_pair(MapSpec.complex_function("x", "y", SQUARE))
    assert r.margin_estimate == pytest.approx(math.sqrt(2), abs=1e-6)
    w1, w2 = r.witness.w1, r.witness.w2
    # maximizer family (1, i) up to a common rotation
    assert abs(w2 - 1j * w1) < 1e-3


def test_witness_conjugate():
    r = search_witness_pair(MapSpec.complex_function("x", "-y", SQUARE))
    assert r.margin_estimate > 1.0
    assert eq3_value(0, 1, 1 / math.sqrt(2), -1j / math.sqrt(2)) == pytest.approx(math.sqrt(2))


def test_witness_constant_map():
    r = search_witness_pair(MapSpec.complex_function("1", "2", SQUARE))
    assert r.margin_estimate == 0.0


def test_bad_arguments():
    f = MapSpec.complex_function("x", "y", SQUARE)
    with pytest.raises(ValueError):
        search_gamma(f, "mocanu", grid=4)
    with pytest.raises(ValueError):
        search_gamma(f, "eq3")
    with pytest.raises(ValueError):
        search_witness_pair(f, starts=0)


def _estimates_reproduce(f, r_gamma, variant):
    s = domain_samples(f.domain)
    wp = wirtinger(f, s)
    dz, dzbar = np.broadcast_to(wp.dz, s.shape), np.broadcast_to(wp.dzbar, s.shape)
    if variant == "anww":
        v = float(np.min(anww_value(dz, r_gamma.gamma)))
    else:
        v = float(np.min(mocanu_value(dz, dzbar, r_gamma.gamma,
                                      "standard" if variant == "mocanu" else "conjugate")))
    return v == r_gamma.margin_estimate


@settings(max_examples=20)
@given(st.integers(0, 2**32 - 1), st.sampled_from(["mocanu", "mocanu_conjugate", "anww"]))
def test_gamma_estimate_bit_for_bit(seed, variant):
    rng = np.random.Generator(np.random.Philox(seed))
    coeffs = {1: complex(*rng.normal(size=2)), 2: complex(*rng.normal(size=2)) * 0.3}
    if variant == "mocanu_conjugate":
        u, v = holomorphic_uv(coeffs)
        f = MapSpec.complex_function(u, f"-({v}) + 0.1*x", SQUARE)
    else:
        u, v = holomorphic_uv(coeffs)
        f = MapSpec.complex_function(u, v, SQUARE)
    r = search_gamma(f, variant)
    assert 0 <= r.gamma < 2 * math.pi
    assert _estimates_reproduce(f, r, variant)


@settings(max_examples=10)
@given(st.integers(0, 2**32 - 1))
def test_witness_estimate_bit_for_bit_and_normalized(seed):
    rng = np.random.Generator(np.random.Philox(seed))
    u, v = holomorphic_uv({1: complex(*rng.normal(size=2)), 2: 0.2 * complex(*rng.normal(size=2))})
    f = MapSpec.complex_function(f"{u} + 0.2*y", v, SQUARE)
    r = search_witness_pair(f, starts=3, sweeps=4)
    w = r.witness
    assert abs(abs(w.w1) ** 2 + abs(w.w2) ** 2 - 1) <= 1e-12
    s = domain_samples(f.domain)
    wp = wirtinger(f, s)
    again = float(np.min(eq3_value(np.broadcast_to(wp.dz, s.shape), np.broadcast_to(wp.dzbar, s.shape),
                                   w.w1, w.w2)))
    assert again == r.margin_estimate


@settings(max_examples=20)
@given(st.floats(0, 2 * math.pi), st.floats(0.05, 0.4))
def test_gamma_recovers_half_plane(gamma0, a):
    # f' = e^{-i gamma0} (1 + a z) lies in the half-plane re(e^{i gamma0} .) > 0 on the unit square
    c = cmath.exp(-1j * gamma0)
    u, v = holomorphic_uv({1: c, 2: c * a / 2})
    f = MapSpec.complex_function(u, v, SQUARE)
    r = search_gamma(f, "anww")
    assert r.margin_estimate > 0
    s = domain_samples(f.domain)
    fprime = c * (1 + a * s)
    # returned gamma is within 1e-3 of an angle with positive margin (itself)
    assert min(anww_value(fprime, r.gamma)) > 0
    d = abs((r.gamma - gamma0 + math.pi) % (2 * math.pi) - math.pi)
    assert d < 0.5


def test_no_valid_witness_is_an_error_type():
    assert issubclass(NoValidWitness, Exception)

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_expr
from injcert.dual import Dual
from injcert.errors import DimensionMismatch, DomainError, NonIntegerExponent, ParseError, UnknownVariable
from injcert.expr import (
    Binary,
    Constant,
    MapKind,
    MapSpec,
    Unary,
    Variable,
    depth,
    evaluate,
    expand_holomorphic,
    holomorphic_uv,
    parse,
    polynomial_coefficients,
    to_source,
    variables_of,
)
from injcert.interval import Box, ComplexBox, Interval

X, Y = Variable("x"), Variable("y")


def two(n: int) -> Constant:
    return Constant(float(n), str(n))


def test_grammar_example_difference_of_squares():
    assert parse("x^2 - y^2") == Binary("sub", Binary("pow", X, two(2)), Binary("pow", Y, two(2)))


def test_grammar_example_functions():
    assert parse("exp(x)*cos(y)") == Binary("mul", Unary("exp", X), Unary("cos", Y))


def test_non_integer_exponent():
    with pytest.raises(NonIntegerExponent) as info:
        parse("x ^ y")
    assert info.value.offset == 4
    for bad in ("x^2.5", "x^-1", "x^2^3"):
        with pytest.raises(NonIntegerExponent):
            parse(bad)


def test_precedence():
    # unary minus binds looser than ^, tighter than *
    assert parse("-x^2") == Unary("neg", Binary("pow", X, two(2)))
    assert parse("-x*y") == Binary("mul", Unary("neg", X), Y)
    assert parse("x - y - 1") == Binary("sub", Binary("sub", X, Y), Constant(1.0, "1"))
    assert parse("x / y / 2") == Binary("div", Binary("div", X, Y), two(2))
    assert parse("x + y*2") == Binary("add", X, Binary("mul", Y, two(2)))


def test_parse_error_offsets():
    with pytest.raises(ParseError) as info:
        parse("x + * y")
    assert info.value.offset == 4
    assert "number" in info.value.expected
    with pytest.raises(ParseError) as info:
        parse("(x + y")
    assert info.value.offset == 6 and info.value.expected == frozenset({")"})
    with pytest.raises(ParseError) as info:
        parse("x $ y")
    assert info.value.offset == 2


def test_offsets_are_bytes():
    # "é" is two bytes in UTF-8, so ")" sits at character 5 but byte 6
    with pytest.raises(ParseError) as info:
        parse("xé + )")
    assert info.value.offset == 6


def test_unknown_variable():
    with pytest.raises(UnknownVariable) as info:
        parse("x + z", ("x", "y"))
    assert info.value.offset == 4
    assert isinstance(info.value, ParseError)


def test_eval_examples():
    assert evaluate(parse("x^2 - y^2"), {"x": 3, "y": 2}) == 5
    r = evaluate(parse("x*y"), {"x": Interval(0, 1), "y": Interval(-1, 1)})
    assert r.lo <= -1 and r.hi >= 1 and r.width < 2 + 1e-12
    d = evaluate(parse("exp(x)"), {"x": Dual(0.0, 1.0)})
    assert d.val == 1.0 and d.der == 1.0


def test_division_by_zero_point_and_interval():
    with pytest.raises(DomainError):
        evaluate(parse("1/x"), {"x": 0.0})
    with pytest.raises(DomainError):
        evaluate(parse("1/x"), {"x": Interval(-1, 1)})


def test_literal_lifted_in_rigorous_mode():
    r = evaluate(parse("0.1 * x"), {"x": Interval(1, 1)})
    assert r.lo < 0.1 < r.hi or r.lo <= 0.1 <= r.hi
    assert r.lo < r.hi


def test_evaluate_numpy_arrays():
    xs = np.linspace(-1, 1, 7)
    out = evaluate(parse("x^3 - 2*x*y + sin(y)"), {"x": xs, "y": xs[::-1]})
    ref = xs**3 - 2 * xs * xs[::-1] + np.sin(xs[::-1])
    assert np.allclose(out, ref, rtol=1e-14, atol=1e-14)


def test_evaluate_complex_box():
    r = evaluate(parse("x*x + 1"), {"x": ComplexBox(Interval(0, 0), Interval(1, 1))})
    assert r.contains(0j)


def test_deterministic_bits():
    e = parse("exp(x)*sin(y) - x^5/(1 + y^2)")
    a = evaluate(e, {"x": 0.3, "y": -1.7})
    b = evaluate(e, {"x": 0.3, "y": -1.7})
    assert a.hex() == b.hex()


def test_helpers():
    e = parse("sin(x) + y^2")
    assert variables_of(e) == {"x", "y"}
    assert depth(e) == 2
    assert to_source(e) == "(sin(x) + (y^2))"


# -- parse / print / parse ---------------------------------------------------------

@settings(max_examples=200)
@given(st.integers(0, 2**32 - 1), st.integers(0, 5))
def test_parse_print_parse(seed, d):
    rng = np.random.Generator(np.random.Philox(seed))
    s = to_source(random_expr(rng, max_depth=d))
    once = parse(s)
    assert parse(to_source(once)) == once


# -- interval consistency ---------------------------------------------------------

def _interval_consistency(seed: int, samples: int) -> int:
    rng = np.random.Generator(np.random.Philox(seed))
    e = random_expr(rng, max_depth=5)
    lo = rng.uniform(-2, 2, size=2)
    hi = lo + rng.uniform(0, 1.5, size=2)
    try:
        enc = evaluate(e, {"x": Interval(lo[0], hi[0]), "y": Interval(lo[1], hi[1])})
    except DomainError:
        return 0
    u = rng.random((samples, 2))
    pts = lo + u * (hi - lo)
    bad = 0
    for px, py in pts:
        try:
            v = evaluate(e, {"x": float(px), "y": float(py)})
        except (DomainError, OverflowError):
            continue
        if math.isfinite(v) and not enc.contains(v):
            bad += 1
    return bad


@settings(max_examples=100)
@given(st.integers(0, 2**32 - 1))
def test_interval_consistency_property(seed):
    assert _interval_consistency(seed, 100) == 0


def test_interval_consistency_bulk():
    # 10^4 random expressions of depth <= 5, 100 interior samples each
    bad = sum(_interval_consistency(seed, 100) for seed in range(10_000))
    assert bad == 0


# -- MapSpec -----------------------------------------------------------------------

def test_mapspec_validation():
    with pytest.raises(DimensionMismatch):
        MapSpec.real_map(["x", "x"], ["x"], [[0, 1]])
    with pytest.raises(DimensionMismatch):
        MapSpec.real_map([f"x{i}" for i in range(9)], [f"x{i}" for i in range(9)], [[0, 1]] * 9)
    with pytest.raises(UnknownVariable):
        MapSpec.complex_function("x + t", "y", [[0, 1], [0, 1]])
    m = MapSpec.complex_function("x", "y", [[0, 1], [0, 1]])
    assert m.kind is MapKind.COMPLEX and m.dim == 2


def test_holomorphic_expansion_matches_complex_arithmetic(rng):
    m = MapSpec.holomorphic("z^3 - 2*z^2 + 0.5*z + 1", [[-1, 1], [-1, 1]])
    z = rng.uniform(-1, 1, 50) + 1j * rng.uniform(-1, 1, 50)
    assert np.allclose(m.evaluate_complex(z), z**3 - 2 * z**2 + 0.5 * z + 1, atol=1e-12)


def test_holomorphic_complex_coefficients(rng):
    coeffs = {0: 0.3 - 1j, 1: 1j, 3: 0.25 + 0.5j}
    u, v = holomorphic_uv(coeffs)
    m = MapSpec.complex_function(u, v, [[-1, 1], [-1, 1]])
    z = rng.uniform(-1, 1, 50) + 1j * rng.uniform(-1, 1, 50)
    ref = sum(c * z**k for k, c in coeffs.items())
    assert np.allclose(m.evaluate_complex(z), ref, atol=1e-12)


def test_polynomial_coefficients():
    assert polynomial_coefficients("(z + 1)^2") == {0: 1.0, 1: 2.0, 2: 1.0}
    assert expand_holomorphic("z^2") == ("-1.0*y^2 + 1.0*x^2", "2.0*x*y")
    with pytest.raises(ParseError):
        polynomial_coefficients("exp(z)")

from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from injcert.expr import Binary, Constant, Unary, Variable

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

mpmath.mp.prec = 200

finite = st.floats(min_value=-50.0, max_value=50.0, allow_nan=False, allow_infinity=False)


@st.composite
def intervals(draw, lo=-50.0, hi=50.0):
    a = draw(st.floats(min_value=lo, max_value=hi, allow_nan=False))
    b = draw(st.floats(min_value=lo, max_value=hi, allow_nan=False))
    return (min(a, b), max(a, b))


@st.composite
def interval_with_point(draw, lo=-50.0, hi=50.0):
    a, b = draw(intervals(lo, hi))
    t = draw(st.floats(min_value=0.0, max_value=1.0))
    x = min(max(a + t * (b - a), a), b)
    return a, b, x


def random_expr(rng: np.random.Generator, variables=("x", "y"), max_depth: int = 5, smooth: bool = False):
    """Random AST over ``variables``; ``smooth`` avoids division so derivatives are tame."""
    def build(d):
        if d == 0 or rng.random() < 0.25:
            if rng.random() < 0.6:
                return Variable(variables[int(rng.integers(len(variables)))])
            v = round(float(rng.uniform(-2.0, 2.0)), 3)
            return Constant(v, repr(v))
        r = rng.random()
        if r < 0.2:
            op = ["neg", "exp", "sin", "cos"][int(rng.integers(4))]
            child = build(d - 1)
            if op == "exp":
                child = Binary("mul", Constant(0.5, "0.5"), child)
            return Unary(op, child)
        if r < 0.3:
            n = int(rng.integers(0, 4))
            return Binary("pow", build(d - 1), Constant(float(n), str(n)))
        ops = ["add", "sub", "mul"] if smooth else ["add", "sub", "mul", "div"]
        op = ops[int(rng.integers(len(ops)))]
        left, right = build(d - 1), build(d - 1)
        if op == "div":
            # keep denominators away from zero: 2 + sin(.)^2 style
            right = Binary("add", Constant(2.0, "2"), Binary("pow", Unary("sin", right), Constant(2.0, "2")))
        return Binary(op, left, right)

    return build(max_depth)


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(20240611))


def rel_err(a, b) -> float:
    a = complex(a)
    b = complex(b)
    return abs(a - b) / max(1.0, abs(b))


def isclose(a, b, tol):
    return math.isclose(a, b, rel_tol=tol, abs_tol=tol)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])

"""Rigorous certification of global injectivity and univalence on boxes.

Sufficient conditions built from monotonicity relative to a linear operator
(leading-minor test on A^T J + J^T A, the Wirtinger-derivative inequality and
its Mocanu / Alexander-Noshiro-Warschawski-Wolff specializations) are verified
over convex box domains with interval arithmetic and adaptive subdivision.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    BudgetMisconfigured,
    DegenerateWitness,
    DimensionMismatch,
    DivisionByZeroInterval,
    DomainError,
    InjcertError,
    NonIntegerExponent,
    NotHolomorphic,
    NoValidWitness,
    ParseError,
    SingularA,
    UnknownVariable,
)
from .interval import Box, ComplexBox, Interval  # noqa: F401
from .expr import MapSpec, evaluate, parse  # noqa: F401

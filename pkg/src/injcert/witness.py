"""Heuristic search for criterion parameters (angle gamma or witness pair).

The searched quantity is the sampled worst-case margin: the minimum of the
pointwise margin over a fixed sample of the domain. Nothing here is rigorous;
a subsequent :func:`~injcert.certify.certify` call with the returned parameter
is what proves anything.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .calculus import wirtinger
from .criteria import DELTA_MIN, WitnessPair, anww_value, eq3_value, mocanu_value
from .errors import DimensionMismatch, NoValidWitness
from .expr import MapKind, MapSpec
from .interval import Box
from .oracle import make_rng

SAMPLE_SEED = 0xC0FFEE
GRID_SIDE = 17
RANDOM_SAMPLES = 64
GOLDEN_TOL = 1e-6
TWO_PI = 2.0 * math.pi
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0

VARIANTS = ("mocanu", "mocanu_conjugate", "anww")


def domain_samples(box: Box) -> np.ndarray:
    """17 x 17 uniform grid plus 64 seeded pseudo-random points, as complex numbers."""
    if box.dim != 2:
        raise DimensionMismatch("witness sampling needs a 2-dimensional domain")
    (xl, xh), (yl, yh) = box.bounds()
    gx, gy = np.meshgrid(np.linspace(xl, xh, GRID_SIDE), np.linspace(yl, yh, GRID_SIDE), indexing="ij")
    rng = make_rng(SAMPLE_SEED)
    u = rng.random((RANDOM_SAMPLES, 2))
    rx = np.minimum(xl + (xh - xl) * u[:, 0], xh)
    ry = np.minimum(yl + (yh - yl) * u[:, 1], yh)
    return np.concatenate([gx.ravel() + 1j * gy.ravel(), rx + 1j * ry])


def _sampled_derivatives(f: MapSpec) -> tuple[np.ndarray, np.ndarray]:
    if f.kind is not MapKind.COMPLEX:
        raise DimensionMismatch("witness search needs a complex function")
    pts = domain_samples(f.domain)
    wp = wirtinger(f, pts)
    return np.broadcast_to(wp.dz, pts.shape), np.broadcast_to(wp.dzbar, pts.shape)


def golden_max(g, a: float, b: float, tol: float = GOLDEN_TOL) -> tuple[float, float]:
    """Golden-section search for a maximizer of ``g`` on [a, b]."""
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    gc, gd = g(c), g(d)
    while b - a > tol:
        if gc >= gd:
            b, d, gd = d, c, gc
            c = b - _INVPHI * (b - a)
            gc = g(c)
        else:
            a, c, gc = c, d, gd
            d = a + _INVPHI * (b - a)
            gd = g(d)
    x = c if gc >= gd else d
    return x, max(gc, gd)


@dataclass(frozen=True)
class GammaResult:
    gamma: float
    margin_estimate: float
    variant: str


def search_gamma(f: MapSpec, variant: str = "mocanu", grid: int = 64) -> GammaResult:
    """Angle maximizing the sampled worst-case margin of a one-angle criterion."""
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    if grid < 8:
        raise ValueError("grid must be >= 8")
    dz, dzbar = _sampled_derivatives(f)

    def g(gamma: float) -> float:
        if variant == "anww":
            return float(np.min(anww_value(dz, gamma)))
        return float(np.min(mocanu_value(dz, dzbar, gamma,
                                         "standard" if variant == "mocanu" else "conjugate")))

    h = TWO_PI / grid
    gammas = [k * h for k in range(grid)]
    values = [g(t) for t in gammas]
    k = int(np.argmax(values))  # first maximum: smallest gamma
    best_gamma, best_value = gammas[k], values[k]
    refined, _ = golden_max(g, best_gamma - h, best_gamma + h)
    refined = math.fmod(refined, TWO_PI)
    if refined < 0:
        refined += TWO_PI
    rv = g(refined)
    if rv > best_value or (rv == best_value and refined < best_gamma):
        best_gamma, best_value = refined, rv
    return GammaResult(best_gamma, g(best_gamma), variant)


def _chart(angles) -> tuple[complex, complex]:
    a1, a2, a3 = angles
    s1, s2 = math.sin(a1), math.sin(a2)
    return (complex(math.cos(a1), s1 * math.cos(a2)),
            complex(s1 * s2 * math.cos(a3), s1 * s2 * math.sin(a3)))


@dataclass(frozen=True)
class WitnessResult:
    witness: WitnessPair
    margin_estimate: float
    chart: tuple[float, float, float]


def search_witness_pair(f: MapSpec, starts: int = 8, sweeps: int = 10, seed: int = SAMPLE_SEED) -> WitnessResult:
    """Maximize the sampled worst-case Wirtinger margin over the unit 3-sphere.

    Multi-start coordinate-wise golden section on hyperspherical chart
    coordinates; degenerate candidates (|delta| <= DELTA_MIN) score -inf.
    """
    if starts < 1:
        raise ValueError("starts must be >= 1")
    dz, dzbar = _sampled_derivatives(f)

    def objective(angles) -> float:
        w1, w2 = _chart(angles)
        if abs(w1.real * w2.imag - w2.real * w1.imag) <= DELTA_MIN:
            return -math.inf
        return float(np.min(eq3_value(dz, dzbar, w1, w2)))

    rng = make_rng(seed)
    initial = rng.uniform(0.0, math.pi, size=(starts, 3)) * np.array([1.0, 1.0, 2.0])
    found: list[tuple[float, tuple[float, float, float]]] = []
    for init in initial:
        x = [float(v) for v in init]
        fx = objective(x)
        radius = 0.5 * math.pi
        for _ in range(sweeps):
            for i in range(3):
                def along(t, i=i):
                    y = list(x)
                    y[i] = t
                    return objective(y)
                t, ft = golden_max(along, x[i] - radius, x[i] + radius)
                if ft > fx:
                    x[i], fx = t, ft
            radius *= 0.5
        if math.isfinite(fx):
            found.append((fx, tuple(x)))
    if not found:
        raise NoValidWitness("every candidate witness pair was degenerate")
    found.sort(key=lambda item: (-item[0], item[1]))
    chart = found[0][1]
    w1, w2 = _chart(chart)
    w = WitnessPair(w1, w2)
    estimate = float(np.min(eq3_value(dz, dzbar, w.w1, w.w2)))
    return WitnessResult(w, estimate, chart)

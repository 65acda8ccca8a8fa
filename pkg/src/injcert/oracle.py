"""Empirical ground truth: collision search, monotonicity sampling, finite differences.

Nothing here is rigorous. A collision returned by :func:`find_collision` is a
concrete pair that has been re-checked by scalar point evaluation; the absence
of a collision proves nothing.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .calculus import Jacobian, jacobian_and_value
from .criteria import LinearOperator
from .errors import DimensionMismatch, DomainError
from .expr import MapSpec
from .interval import Box

COLLISION_TOL = 1e-9
SEPARATION_MIN = 1e-4
NEWTON_MAX_ITER = 50
NEWTON_DAMPING = 0.5
NEWTON_STARTS = 256
CHUNK = 64


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based generator keyed by a 64-bit seed; no global state."""
    return np.random.Generator(np.random.Philox(int(seed) & 0xFFFFFFFFFFFFFFFF))


def sample_box(box: Box, count: int, rng: np.random.Generator) -> np.ndarray:
    lo = np.array([iv.lo for iv in box])
    hi = np.array([iv.hi for iv in box])
    u = rng.random((count, box.dim))
    return np.minimum(lo + (hi - lo) * u, hi)


def eval_points(m: MapSpec, pts: np.ndarray) -> np.ndarray:
    """Map values at the rows of ``pts`` (shape (k, n)) -> (k, n)."""
    with np.errstate(all="ignore"):
        vals = m.evaluate(tuple(pts.T))
    return np.stack([np.broadcast_to(np.asarray(v, dtype=float), (pts.shape[0],)) for v in vals], axis=1)


@dataclass(frozen=True)
class Collision:
    x1: tuple[float, ...]
    x2: tuple[float, ...]
    residual: float  # |f(x1) - f(x2)|
    separation: float  # |x1 - x2|

    def as_dict(self) -> dict:
        return {"x1": list(self.x1), "x2": list(self.x2),
                "residual": self.residual, "separation": self.separation}


def verify_collision(m: MapSpec, x1: Sequence[float], x2: Sequence[float], box: Box | None = None,
                     collision_tol: float = COLLISION_TOL,
                     separation_min: float = SEPARATION_MIN) -> Collision | None:
    """Re-check a candidate pair by scalar evaluation; None unless both thresholds hold."""
    x1 = tuple(float(v) for v in x1)
    x2 = tuple(float(v) for v in x2)
    if box is not None and not (box.contains(x1) and box.contains(x2)):
        return None
    try:
        f1 = m.evaluate(x1)
        f2 = m.evaluate(x2)
    except (DomainError, OverflowError, ValueError):
        return None
    residual = math.sqrt(sum((float(a) - float(b)) ** 2 for a, b in zip(f1, f2)))
    separation = math.sqrt(sum((a - b) ** 2 for a, b in zip(x1, x2)))
    if not (residual <= collision_tol and separation >= separation_min):
        return None
    return Collision(x1, x2, residual, separation)


def _bucket_candidates(values: np.ndarray, pts: np.ndarray, cell: float, separation_min: float,
                       limit: int) -> list[tuple[int, int]]:
    """Pairs of sample indices whose images share a hash-grid cell."""
    finite = np.all(np.isfinite(values), axis=1)
    idx = np.nonzero(finite)[0]
    if idx.size < 2:
        return []
    with np.errstate(all="ignore"):
        keys = np.floor(values[idx] / cell)
    keys = np.clip(keys, -9e15, 9e15).astype(np.int64)
    _, inverse, counts = np.unique(keys, axis=0, return_inverse=True, return_counts=True)
    inverse = inverse.reshape(-1)
    shared = np.nonzero(counts[inverse] > 1)[0]
    groups: dict[int, list[int]] = {}
    for k in shared:
        groups.setdefault(int(inverse[k]), []).append(int(idx[k]))
    out: list[tuple[int, int]] = []
    for members in sorted(groups.values(), key=lambda g: g[0]):
        first = members[0]
        for other in members[1:]:
            if np.linalg.norm(pts[first] - pts[other]) >= separation_min:
                out.append((other, first))
    out.sort()
    return out[:limit]


def _newton_chunk(m: MapSpec, starts: np.ndarray, anchors: np.ndarray, tol: float) -> np.ndarray:
    """Damped Newton on f(x) = f(anchor) from each start; rows are final iterates (nan on failure)."""
    x = starts.copy()
    target = eval_points(m, anchors)
    alive = np.all(np.isfinite(target), axis=1)
    n = m.dim
    eye = np.eye(n)
    for _ in range(NEWTON_MAX_ITER):
        with np.errstate(all="ignore"):
            jac, vals = jacobian_and_value(m, tuple(x.T))
            J = np.stack([np.stack([np.broadcast_to(np.asarray(jac.matrix[i][j], dtype=float), (x.shape[0],))
                                    for j in range(n)], axis=-1) for i in range(n)], axis=1)
            F = np.stack([np.broadcast_to(np.asarray(v, dtype=float), (x.shape[0],)) for v in vals], axis=1)
            r = F - target
            rn = np.linalg.norm(r, axis=1)
        done = rn <= tol
        ok = alive & np.all(np.isfinite(J), axis=(1, 2)) & np.isfinite(rn)
        dets = np.where(ok, np.linalg.det(np.where(ok[:, None, None], J, eye)), 0.0)
        ok &= dets != 0.0
        alive &= ok | done
        active = alive & ~done
        if not active.any():
            break
        Js = np.where(active[:, None, None], J, eye)
        step = np.linalg.solve(Js, np.where(active[:, None], r, 0.0)[..., None])[..., 0]
        lam = np.ones(x.shape[0])
        trial = x - lam[:, None] * step
        for _ in range(30):
            tr = eval_points(m, trial)
            with np.errstate(all="ignore"):
                tn = np.linalg.norm(tr - target, axis=1)
            worse = active & ~(tn <= rn)
            if not worse.any():
                break
            lam = np.where(worse, lam * NEWTON_DAMPING, lam)
            trial = x - lam[:, None] * step
        x = np.where(active[:, None], trial, x)
    with np.errstate(all="ignore"):
        final = np.linalg.norm(eval_points(m, x) - target, axis=1)
    x[~(alive & (final <= tol))] = np.nan
    return x


def find_collision(m: MapSpec, box: Box | None = None, pairs: int = 100_000, seed: int = 0,
                   collision_tol: float = COLLISION_TOL, separation_min: float = SEPARATION_MIN,
                   newton_starts: int = NEWTON_STARTS, threads: int = 1) -> Collision | None:
    """Search for x1 != x2 in ``box`` with f(x1) = f(x2).

    Random pairs are sampled, images bucketed on a hash grid of cell size
    ``collision_tol * 1e3``; bucket mates and the leading sampled pairs seed a
    damped Newton solve of f(x1) = f(x2) with x2 held fixed. The first
    candidate (in sample order) that survives scalar re-verification is returned.
    The outcome does not depend on ``threads``.
    """
    if pairs < 1:
        raise ValueError("pairs must be >= 1")
    box = m.domain if box is None else box
    if box.dim != m.dim:
        raise DimensionMismatch("box dimension does not match the map")
    rng = make_rng(seed)
    X1 = sample_box(box, pairs, rng)
    X2 = sample_box(box, pairs, rng)
    pts = np.concatenate([X1, X2])
    values = eval_points(m, pts)

    candidates = _bucket_candidates(values, pts, collision_tol * 1e3, separation_min, newton_starts)
    # bucket mates may already be collisions; check them in order before refining
    for i, j in candidates:
        hit = verify_collision(m, pts[i], pts[j], box, collision_tol, separation_min)
        if hit is not None:
            return hit

    starts = [pts[i] for i, _ in candidates] + list(X1[:newton_starts])
    anchors = [pts[j] for _, j in candidates] + list(X2[:newton_starts])
    starts_arr = np.array(starts)
    anchors_arr = np.array(anchors)
    chunks = [(k, min(k + CHUNK, len(starts))) for k in range(0, len(starts), CHUNK)]
    newton_tol = collision_tol * 1e-3

    def run(bounds):
        a, b = bounds
        return _newton_chunk(m, starts_arr[a:b], anchors_arr[a:b], newton_tol)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, chunks))
    else:
        results = [run(c) for c in chunks]
    finals = np.concatenate(results) if results else np.empty((0, m.dim))
    for k in range(finals.shape[0]):
        if np.any(np.isnan(finals[k])):
            continue
        hit = verify_collision(m, finals[k], anchors_arr[k], box, collision_tol, separation_min)
        if hit is not None:
            return hit
    return None


@dataclass(frozen=True)
class MonotonicityResult:
    min_inner: float
    violating_pair: tuple[tuple[float, ...], tuple[float, ...]] | None
    pairs: int
    seed: int

    def as_dict(self) -> dict:
        return {"min_inner": self.min_inner,
                "violating_pair": None if self.violating_pair is None else [list(p) for p in self.violating_pair],
                "pairs": self.pairs, "seed": self.seed}


def check_relative_monotonicity(T: MapSpec, A: LinearOperator, box: Box | None = None,
                                pairs: int = 100_000, seed: int = 0) -> MonotonicityResult:
    """Sampled min of <T(x) - T(y), A(x - y)> over random pairs in ``box``."""
    if pairs < 1:
        raise ValueError("pairs must be >= 1")
    box = T.domain if box is None else box
    if A.n != T.dim or box.dim != T.dim:
        raise DimensionMismatch("A, box and map dimensions must agree")
    rng = make_rng(seed)
    X = sample_box(box, pairs, rng)
    Y = sample_box(box, pairs, rng)
    dT = eval_points(T, X) - eval_points(T, Y)
    Ad = (X - Y) @ A.to_array().T
    inner = np.sum(dT * Ad, axis=1)
    k = int(np.argmin(inner))
    min_inner = float(inner[k])
    violating = None
    if min_inner < 0:
        violating = (tuple(float(v) for v in X[k]), tuple(float(v) for v in Y[k]))
    return MonotonicityResult(min_inner, violating, pairs, int(seed))


def fd_jacobian(m: MapSpec, at: Sequence[float], step: float = 1e-6) -> Jacobian:
    """Central-difference Jacobian with step ``step``."""
    if not step > 0:
        raise ValueError("step must be positive")
    at = tuple(float(v) for v in at)
    n = m.dim
    if len(at) != n:
        raise DimensionMismatch(f"expected {n} coordinates")
    cols = []
    for j in range(n):
        plus = list(at)
        minus = list(at)
        plus[j] += step
        minus[j] -= step
        fp = m.evaluate(plus)
        fm = m.evaluate(minus)
        cols.append([(float(a) - float(b)) / (2.0 * step) for a, b in zip(fp, fm)])
    return Jacobian(tuple(tuple(cols[j][i] for j in range(n)) for i in range(n)), at)

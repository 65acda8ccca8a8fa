"""Domain-wide verification by adaptive box subdivision.

Boxes are processed breadth-first in waves. Each wave is evaluated (optionally
by a thread pool) and then reduced sequentially in queue order, so the
certificate never depends on the number of workers.
"""

from __future__ import annotations

import enum
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .criteria import Criterion, Margin, check_holomorphic, criterion_margin
from .errors import BudgetMisconfigured, DomainError
from .expr import MapSpec
from .interval import Box, Interval
from .oracle import COLLISION_TOL, SEPARATION_MIN, Collision, find_collision

MAX_DEPTH = 24
MAX_BOXES = 1_000_000
ORACLE_PAIRS = 100_000


class Verdict(str, enum.Enum):
    CERTIFIED = "CERTIFIED"
    UNKNOWN = "UNKNOWN"
    REFUTED = "REFUTED"


@dataclass
class Certificate:
    verdict: Verdict
    criterion: str
    params: dict
    margin_lower_bound: float
    boxes_processed: int
    max_depth_reached: int
    refutation: Collision | None = None
    explanation: str = ""
    oracle: dict = field(default_factory=dict)
    wall_time: float = 0.0

    def as_dict(self) -> dict:
        bound = self.margin_lower_bound
        return {
            "verdict": self.verdict.value,
            "criterion": self.criterion,
            "params": self.params,
            "margin_lower_bound": bound if math.isfinite(bound) else None,
            "boxes_processed": self.boxes_processed,
            "max_depth_reached": self.max_depth_reached,
            "refutation": None if self.refutation is None else self.refutation.as_dict(),
            "explanation": self.explanation,
            "oracle": self.oracle,
            "wall_time": self.wall_time,
        }


def verify_box(m: MapSpec, criterion: Criterion, box: Box) -> Margin:
    """Interval margin of ``criterion`` over one box."""
    return criterion_margin(m, criterion, box)


def _safe_margin(m: MapSpec, criterion: Criterion, box: Box) -> Interval:
    try:
        return verify_box(m, criterion, box).value
    except DomainError:
        # e.g. an interval denominator straddling zero; smaller boxes may avoid it
        return Interval.entire()


def certify(m: MapSpec, criterion: Criterion, max_depth: int = MAX_DEPTH, max_boxes: int = MAX_BOXES,
            oracle_pairs: int = ORACLE_PAIRS, oracle_seed: int = 0, threads: int = 1,
            collision_tol: float = COLLISION_TOL, separation_min: float = SEPARATION_MIN) -> Certificate:
    """Prove a positive margin lower bound of ``criterion`` on all of ``m.domain``.

    A box is verified when its margin enclosure is positive, bisected along its
    widest side while the enclosure straddles zero, and handed to the collision
    oracle when the enclosure is negative (the condition is only sufficient, so
    only an actual collision refutes injectivity).
    """
    if max_boxes < 1 or max_depth < 0:
        raise BudgetMisconfigured(f"need max_boxes >= 1 and max_depth >= 0 (got {max_boxes}, {max_depth})")
    start = time.perf_counter()
    if criterion.tag == "anww":
        from .witness import domain_samples
        check_holomorphic(m, domain_samples(m.domain))

    queue: list[tuple[Box, int, float]] = [(m.domain, 0, -math.inf)]
    processed = 0
    deepest = 0
    leaf_min = math.inf
    negative_box: Box | None = None
    exhausted = False
    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        while queue:
            room = max_boxes - processed
            if room <= 0:
                exhausted = True
                # unprocessed boxes are bounded below by their parent's enclosure
                leaf_min = min([leaf_min] + [p for _, _, p in queue])
                break
            wave, rest = queue[:room], queue[room:]
            boxes = [b for b, _, _ in wave]
            if pool is not None:
                margins = list(pool.map(lambda b: _safe_margin(m, criterion, b), boxes))
            else:
                margins = [_safe_margin(m, criterion, b) for b in boxes]
            following: list[tuple[Box, int, float]] = []
            for (box, depth, _), mg in zip(wave, margins):
                processed += 1
                deepest = max(deepest, depth)
                if mg.lo > 0.0:
                    leaf_min = min(leaf_min, mg.lo)
                elif mg.hi < 0.0:
                    leaf_min = min(leaf_min, mg.lo)
                    negative_box = box
                    break
                elif depth >= max_depth:
                    leaf_min = min(leaf_min, mg.lo)
                    exhausted = True
                else:
                    left, right = box.bisect()
                    following.append((left, depth + 1, mg.lo))
                    following.append((right, depth + 1, mg.lo))
            if negative_box is not None:
                break
            queue = rest + following
    finally:
        if pool is not None:
            pool.shutdown()

    oracle_info = {"ran": False, "pairs": oracle_pairs, "seed": oracle_seed}
    verdict = Verdict.CERTIFIED
    explanation = "margin lower bound positive on every leaf box"
    refutation = None
    if negative_box is not None or exhausted:
        oracle_info["ran"] = True
        refutation = find_collision(m, m.domain, oracle_pairs, oracle_seed, collision_tol, separation_min,
                                    threads=threads)
        if refutation is not None:
            verdict = Verdict.REFUTED
            explanation = "collision pair found: the map is not injective on the domain"
        else:
            verdict = Verdict.UNKNOWN
            if negative_box is not None:
                explanation = (f"criterion margin negative on {negative_box!r}; the sufficient condition "
                               "fails there and no collision was found")
            else:
                explanation = "subdivision budget exhausted before every box was verified; no collision found"
    return Certificate(verdict, criterion.tag, criterion.params(), leaf_min, processed, deepest,
                       refutation, explanation, oracle_info, time.perf_counter() - start)

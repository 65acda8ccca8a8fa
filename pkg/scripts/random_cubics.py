#!/usr/bin/env python3
"""Soundness sweep: certify random holomorphic cubics, then hunt for collisions.

Every CERTIFIED instance is handed to the collision oracle; any hit would be a
soundness bug. Instances the witness search cannot find a margin for are skipped.
"""

from __future__ import annotations

import argparse
import sys
from collections import Counter

import numpy as np

from injcert.certify import certify
from injcert.criteria import Criterion
from injcert.expr import MapSpec, holomorphic_uv
from injcert.oracle import find_collision
from injcert.witness import search_gamma


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--draws", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pairs", type=int, default=100_000)
    args = p.parse_args(argv)

    rng = np.random.Generator(np.random.Philox(args.seed))
    tally: Counter[str] = Counter()
    hits = 0
    for k in range(args.draws):
        coeffs = {1: complex(*rng.normal(size=2)), 2: 0.5 * complex(*rng.normal(size=2)),
                  3: 0.3 * complex(*rng.normal(size=2))}
        cx, cy = rng.uniform(-1, 1, 2)
        h = rng.uniform(0.2, 0.8)
        u, v = holomorphic_uv(coeffs)
        f = MapSpec.complex_function(u, v, [[cx - h, cx + h], [cy - h, cy + h]])
        g = search_gamma(f, "anww")
        if g.margin_estimate <= 0:
            tally["no gamma"] += 1
            continue
        cert = certify(f, Criterion("anww", gamma=g.gamma), max_depth=16, max_boxes=20_000,
                       oracle_pairs=args.pairs, oracle_seed=k)
        tally[cert.verdict.value] += 1
        if cert.verdict.value == "CERTIFIED" and find_collision(f, pairs=args.pairs, seed=k) is not None:
            hits += 1
            print(f"draw {k}: collision on a certified instance {coeffs}")
    print(dict(tally))
    print(f"collisions on certified instances: {hits}")
    return 1 if hits else 0


if __name__ == "__main__":
    sys.exit(main())

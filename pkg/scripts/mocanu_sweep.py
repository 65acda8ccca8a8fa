#!/usr/bin/env python3
"""Certified margin of f(z) = z + c*conj(z) on [-1, 1]^2 against the exact 1 - c.

For c < 1 the one-angle condition holds with gamma = 0 and the certified bound
should track 1 - c; past c = 1 the condition fails but the map stays injective
for c != 1, so the expected verdict is UNKNOWN, never REFUTED.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass

import numpy as np

from injcert.certify import certify
from injcert.criteria import Criterion
from injcert.expr import MapSpec


@dataclass
class SweepConfig:
    c_min: float = 0.0
    c_max: float = 1.3
    steps: int = 14
    oracle_pairs: int = 20_000


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--steps", type=int, default=SweepConfig.steps)
    p.add_argument("--csv", help="write rows here as well")
    args = p.parse_args(argv)
    cfg = SweepConfig(steps=args.steps)

    rows = []
    for c in map(float, np.linspace(cfg.c_min, cfg.c_max, cfg.steps)):
        m = MapSpec.complex_function(f"{1 + c!r}*x", f"{1 - c!r}*y", [[-1, 1], [-1, 1]])
        cert = certify(m, Criterion("mocanu", gamma=0.0), oracle_pairs=cfg.oracle_pairs)
        rows.append((c, cert.verdict.value, cert.margin_lower_bound, 1 - c))
    print(f"{'c':>6} {'verdict':>10} {'bound':>12} {'1-c':>8}")
    for c, verdict, bound, exact in rows:
        print(f"{c:6.3f} {verdict:>10} {bound:12.8f} {exact:8.3f}")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["c", "verdict", "bound", "exact"])
            w.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())

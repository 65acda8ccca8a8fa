"""Command line front end.

    injcert certify  --config problem.json [--out report.json] [--threads N] ...
    injcert witness  --config problem.json
    injcert falsify  --config problem.json
    injcert monotone --config problem.json

The report (JSON) goes to stdout and optionally to ``--out``. Exit codes:
0 success (CERTIFIED / witness found / collision found / monotone sample),
1 negative or inconclusive result, 2 input error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from typing import Any, Sequence

import jsonschema
import numpy as np

from . import __version__
from .certify import Verdict, certify
from .config import REPORT_SCHEMA, ConfigError, ProblemConfig
from .criteria import (
    NEGATIVE,
    POSITIVE,
    Criterion,
    LinearOperator,
    WitnessPair,
    pointwise_margins,
    sylvester_margin,
)
from .errors import (
    DegenerateWitness,
    DimensionMismatch,
    DomainError,
    InjcertError,
    NotHolomorphic,
    NoValidWitness,
    ParseError,
    SingularA,
)
from .expr import MapKind, MapSpec
from .oracle import check_relative_monotonicity, find_collision
from .witness import search_gamma, search_witness_pair

log = logging.getLogger("injcert")

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2
GRID_POINTS = 101

_INPUT_ERRORS = (ConfigError, ParseError, DegenerateWitness, SingularA, DimensionMismatch, ValueError)
_NUMERIC_ERRORS = (DomainError, NotHolomorphic, NoValidWitness, ArithmeticError)


class InputError(Exception):
    pass


def _finite(x: float | None) -> float | None:
    if x is None:
        return None
    x = float(x)
    return x if np.isfinite(x) else None


def _resolve_criterion(cfg: ProblemConfig, m: MapSpec, *, search: bool = True) -> tuple[Criterion, dict | None]:
    """Criterion with all parameters filled in, searching for missing gamma / witness."""
    tag = cfg.criterion
    if tag is None:
        raise InputError("this command needs a criterion")
    p = cfg.params
    if tag == "sylvester":
        rows = cfg.matrix_A(m.dim)
        if rows is None:
            raise InputError("criterion sylvester needs params.A")
        A = LinearOperator(rows)
        A.check_invertible()
        center = m.domain.center()
        pos = sylvester_margin(m, A, center, POSITIVE).lo
        neg = sylvester_margin(m, A, center, NEGATIVE).lo
        sign = POSITIVE if pos >= neg else NEGATIVE
        return Criterion("sylvester", A=A, sign=sign), None
    if m.kind is not MapKind.COMPLEX:
        raise InputError(f"criterion {tag} needs kind 'complex'")
    if tag == "eq3":
        if ("w1" in p) != ("w2" in p):
            raise InputError("give both w1 and w2, or neither to search for them")
        if "w1" in p:
            w = WitnessPair(complex(*p["w1"]), complex(*p["w2"]))
            return Criterion("eq3", witness=w), None
        if not search:
            raise InputError("eq3 needs w1, w2")
        res = search_witness_pair(m)
        info = {"method": "witness_pair", "margin_estimate": res.margin_estimate, "chart": list(res.chart)}
        return Criterion("eq3", witness=res.witness), info
    if "gamma" in p:
        return Criterion(tag, gamma=float(p["gamma"])), None
    if not search:
        raise InputError(f"{tag} needs gamma")
    res = search_gamma(m, tag)
    info = {"method": "gamma", "variant": tag, "margin_estimate": res.margin_estimate}
    return Criterion(tag, gamma=res.gamma), info


def _emit_grid(path: str, m: MapSpec, crit: Criterion) -> None:
    if m.dim != 2:
        raise InputError("--emit-grid needs a 2-dimensional domain")
    (xl, xh), (yl, yh) = m.domain.bounds()
    xs = np.linspace(xl, xh, GRID_POINTS)
    ys = np.linspace(yl, yh, GRID_POINTS)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    if crit.tag == "sylvester":
        vals = np.array([sylvester_margin(m, crit.A, (x, y), crit.sign).lo
                         for x, y in zip(gx.ravel(), gy.ravel())])
    else:
        with np.errstate(all="ignore"):
            vals = pointwise_margins(m, crit, gx.ravel() + 1j * gy.ravel())
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "y", "margin"])
        for x, y, v in zip(gx.ravel(), gy.ravel(), vals):
            w.writerow([repr(float(x)), repr(float(y)), repr(float(v))])


def _base_report(command: str, cfg: ProblemConfig, comps: list[str], seed: int) -> dict[str, Any]:
    return {
        "tool": "injcert",
        "version": __version__,
        "command": command,
        "config": cfg.raw,
        "components_used": comps,
        "verdict": "UNKNOWN",
        "exit_code": EXIT_NEGATIVE,
        "criterion": cfg.criterion,
        "params_used": {},
        "search": None,
        "margin_bound": None,
        "statistics": {},
        "refutation": None,
        "explanation": "",
        "seed": seed,
        "wall_time": 0.0,
    }


def _run_certify(cfg, m, args, report):
    crit, info = _resolve_criterion(cfg, m)
    report["params_used"] = crit.params()
    report["search"] = info
    if args.emit_grid:
        _emit_grid(args.emit_grid, m, crit)
    cert = certify(m, crit, max_depth=args.max_depth, max_boxes=args.max_boxes,
                   oracle_pairs=cfg.oracle.pairs, oracle_seed=args.seed, threads=args.threads)
    report["verdict"] = cert.verdict.value
    report["margin_bound"] = _finite(cert.margin_lower_bound)
    report["statistics"] = {
        "boxes_processed": cert.boxes_processed,
        "max_depth_reached": cert.max_depth_reached,
        "max_depth": args.max_depth,
        "max_boxes": args.max_boxes,
        "oracle": cert.oracle,
    }
    report["refutation"] = None if cert.refutation is None else cert.refutation.as_dict()
    report["explanation"] = cert.explanation
    report["exit_code"] = EXIT_OK if cert.verdict is Verdict.CERTIFIED else EXIT_NEGATIVE


def _run_witness(cfg, m, args, report):
    if cfg.criterion == "sylvester":
        raise InputError("witness search covers anww, mocanu, mocanu_conjugate and eq3")
    if m.kind is not MapKind.COMPLEX:
        raise InputError("witness search needs kind 'complex'")
    if cfg.criterion == "eq3":
        res = search_witness_pair(m)
        crit = Criterion("eq3", witness=res.witness)
        info = {"method": "witness_pair", "margin_estimate": res.margin_estimate, "chart": list(res.chart)}
    elif cfg.criterion is not None:
        res = search_gamma(m, cfg.criterion)
        crit = Criterion(cfg.criterion, gamma=res.gamma)
        info = {"method": "gamma", "variant": cfg.criterion, "margin_estimate": res.margin_estimate}
    else:
        raise InputError("witness needs a criterion")
    if args.emit_grid:
        _emit_grid(args.emit_grid, m, crit)
    report["params_used"] = crit.params()
    report["search"] = info
    report["margin_bound"] = _finite(info["margin_estimate"])
    report["statistics"] = {"samples": 17 * 17 + 64}
    found = info["margin_estimate"] > 0
    report["verdict"] = "FOUND" if found else "NOT_FOUND"
    report["explanation"] = ("sampled worst-case margin is positive; run certify to prove it" if found
                             else "no parameter with positive sampled margin")
    report["exit_code"] = EXIT_OK if found else EXIT_NEGATIVE


def _run_falsify(cfg, m, args, report):
    hit = find_collision(m, m.domain, cfg.oracle.pairs, args.seed, threads=args.threads)
    report["statistics"] = {"pairs": cfg.oracle.pairs}
    report["refutation"] = None if hit is None else hit.as_dict()
    report["verdict"] = "REFUTED" if hit is not None else "UNKNOWN"
    report["explanation"] = ("collision pair found: the map is not injective" if hit is not None
                             else "no collision found (this proves nothing)")
    report["exit_code"] = EXIT_OK if hit is not None else EXIT_NEGATIVE


def _run_monotone(cfg, m, args, report):
    rows = cfg.matrix_A(m.dim)
    A = LinearOperator(rows) if rows is not None else LinearOperator.identity(m.dim)
    res = check_relative_monotonicity(m, A, m.domain, cfg.oracle.pairs, args.seed)
    report["params_used"] = {"A": [list(r) for r in A.entries]}
    report["margin_bound"] = _finite(res.min_inner)
    report["statistics"] = res.as_dict()
    ok = res.min_inner >= 0
    report["verdict"] = "CONSISTENT" if ok else "VIOLATED"
    report["explanation"] = ("sampled pairs are consistent with monotonicity relative to A" if ok
                             else "violating pair found: not monotone relative to A")
    report["exit_code"] = EXIT_OK if ok else EXIT_NEGATIVE


_INCONCLUSIVE = {"certify": "UNKNOWN", "falsify": "UNKNOWN", "witness": "NOT_FOUND", "monotone": "VIOLATED"}
_COMMANDS = {"certify": _run_certify, "witness": _run_witness, "falsify": _run_falsify, "monotone": _run_monotone}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="problem description (JSON)")
    common.add_argument("--out", help="also write the report to this path")
    common.add_argument("--threads", type=int, default=1, help="worker threads (report is independent of N)")
    common.add_argument("--emit-grid", dest="emit_grid", help="write a 101x101 CSV of pointwise margins")
    common.add_argument("--max-depth", dest="max_depth", type=int, help="override budget.max_depth")
    common.add_argument("--max-boxes", dest="max_boxes", type=int, help="override budget.max_boxes")
    common.add_argument("--seed", type=int, help="override oracle.seed")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="injcert", description="Certify global injectivity on boxes.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("certify", parents=[common], help="rigorous subdivision certificate")
    sub.add_parser("witness", parents=[common], help="search gamma or (w1, w2)")
    sub.add_parser("falsify", parents=[common], help="search for a collision pair")
    sub.add_parser("monotone", parents=[common], help="sample relative monotonicity")
    return parser


def run(argv: Sequence[str] | None = None, stdout=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    start = time.perf_counter()
    try:
        cfg = ProblemConfig.load(args.config)
        args.max_depth = cfg.budget.max_depth if args.max_depth is None else args.max_depth
        args.max_boxes = cfg.budget.max_boxes if args.max_boxes is None else args.max_boxes
        args.seed = cfg.oracle.seed if args.seed is None else args.seed
        if args.threads < 1:
            raise InputError("--threads must be >= 1")
        if args.max_boxes < 1 or args.max_depth < 0:
            raise InputError("budget needs max_boxes >= 1 and max_depth >= 0")
        comps = cfg.expanded_components()
        m = cfg.map_spec()
        report = _base_report(args.command, cfg, comps, args.seed)
        try:
            _COMMANDS[args.command](cfg, m, args, report)
        except _NUMERIC_ERRORS as exc:
            report["verdict"] = _INCONCLUSIVE[args.command]
            report["exit_code"] = EXIT_NEGATIVE
            report["explanation"] = f"{type(exc).__name__}: {exc}"
    except (InputError, *_INPUT_ERRORS) as exc:
        print(f"injcert: input error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InjcertError as exc:
        print(f"injcert: input error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report["wall_time"] = time.perf_counter() - start
    # round-trip through the serializer before validating, as a consumer would
    text = json.dumps(report, indent=2, allow_nan=False)
    jsonschema.validate(json.loads(text), REPORT_SCHEMA)
    stdout.write(text + "\n")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return report["exit_code"]


def main() -> None:
    sys.exit(run())

"""Command-line front end: analyze, catalog, reproduce, sweep, verify-equivalence.

Exit codes: 0 success, 1 failed assertions, 2 usage or input error,
3 Jacobi failure, 4 degenerate metric.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Optional, Sequence

import numpy as np

from ._linalg import maxabs
from .algebra import AlgebraError, algebra_from_json
from .catalog import GROUPS, families, find_family, reproduce
from .dirac import JacobiError, analyze
from .forms import DegenerateMetricError, MetricError, metric_from_json, verify_equivalence

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_JACOBI, EXIT_DEGENERATE = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {path}: {exc}") from exc


def _load_algebra(path: str):
    try:
        return algebra_from_json(_load_json(path))
    except AlgebraError as exc:
        raise UsageError(str(exc)) from exc


def _load_metric(path: str):
    try:
        return metric_from_json(_load_json(path))
    except MetricError as exc:
        raise UsageError(str(exc)) from exc


def g12(x: float) -> str:
    """Fixed 12-significant-digit formatting; negative zero prints as 0."""
    x = float(x)
    return "0" if x == 0 else f"{x:.12g}"


def parse_range(text: str) -> tuple[str, list[float]]:
    """``name=a:b:step`` to an inclusive grid; ``name=v`` to a single value."""
    if "=" not in text:
        raise UsageError(f"bad --param {text!r}; expected name=a:b:step")
    name, rng = text.split("=", 1)
    parts = rng.split(":")
    try:
        vals = [float(p) for p in parts]
    except ValueError as exc:
        raise UsageError(f"bad --param {text!r}: {exc}") from exc
    if len(vals) == 1:
        return name, vals
    if len(vals) != 3 or vals[2] <= 0:
        raise UsageError(f"bad --param {text!r}; expected name=a:b:step with step > 0")
    a, b, step = vals
    if a > b:
        return name, []
    count = int(np.floor((b - a) / step + 1e-9)) + 1
    return name, [float(np.round(a + i * step, 12)) for i in range(count)]


# -- verbs ---------------------------------------------------------------------

def cmd_analyze(args) -> int:
    L = _load_algebra(args.algebra)
    G = _load_metric(args.metric)
    if G.dim != L.dim:
        raise UsageError(f"metric dimension {G.dim} does not match algebra dimension {L.dim}")
    rep = analyze(L, G, opposite=args.opposite, tol=args.tolerance)
    if args.text:
        print(f"# seed {args.seed}")
        print(rep.to_text())
    else:
        d = rep.to_dict()
        d["seed"] = args.seed
        print(json.dumps(d, indent=2, sort_keys=True))
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_catalog(args) -> int:
    groups = [args.group] if args.group else list(GROUPS)
    out = []
    for g in groups:
        for f in families(g):
            out.append({"group": g, "family": f.family_id, "algebra": f.algebra,
                        "params": list(f.param_names), "constraint": f.constraint,
                        "derived_kernel": f.derived_kernel})
    if args.text:
        print(f"# seed {args.seed}")
        print(f"{'group':<26} {'family':<36} {'algebra':<14} constraint")
        for r in out:
            print(f"{r['group']:<26} {r['family']:<36} {r['algebra']:<14} {r['constraint']}")
    else:
        print(json.dumps({"seed": args.seed, "families": out}, indent=2))
    return EXIT_OK


def cmd_reproduce(args) -> int:
    if args.density < 3:
        raise UsageError("--density must be at least 3")
    rep = reproduce(args.group, args.density)
    if args.text:
        print(f"# seed {args.seed}")
        print(rep.to_text())
    else:
        d = rep.to_dict()
        d["seed"] = args.seed
        print(json.dumps(d, indent=2))
    return EXIT_OK if rep.ok else EXIT_FAIL


def _family_from_spec(spec) -> tuple:
    if not isinstance(spec, dict) or "family" not in spec:
        raise UsageError("family spec must be a JSON object with a 'family' key")
    try:
        fam = find_family(spec["family"], spec.get("group"))
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from exc
    fixed = spec.get("params", {})
    if not isinstance(fixed, dict):
        raise UsageError("'params' must be an object")
    return fam, {k: float(v) for k, v in fixed.items()}


def cmd_sweep(args) -> int:
    fam, fixed = _family_from_spec(_load_json(args.family_spec))
    L_file = None if args.algebra == "@family" else _load_algebra(args.algebra)
    ranges = [parse_range(p) for p in args.param]
    for name, _ in ranges:
        if name not in fam.param_names:
            raise UsageError(f"unknown parameter {name!r} for family {fam.family_id}; "
                             f"expected one of {list(fam.param_names)}")
    missing = set(fam.param_names) - set(fixed) - {n for n, _ in ranges}
    if missing:
        raise UsageError(f"parameters {sorted(missing)} need a value")

    grid = [dict(fixed)]
    for name, vals in ranges:
        grid = [dict(p, **{name: v}) for p in grid for v in vals]
    for p in grid:
        if not fam.valid(p):
            raise UsageError(f"parameters {p} violate the table constraint '{fam.constraint}'")

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cols = list(fam.param_names)
    w.writerow(cols + ["kernel_dim", "ricci_p", "ricci_q", "ricci_r", "scalar"])
    failed = False
    for p in grid:
        L = fam.algebra_for(p)
        if L_file is not None:
            if L_file.dim != L.dim or maxabs(L_file.c - L.c) > 1e-12:
                raise UsageError(f"algebra in {args.algebra} does not match the bracket of "
                                 f"family {fam.family_id} at {p}")
        rep = analyze(L, fam.metric(p), tol=args.tolerance)
        failed |= not rep.ok
        w.writerow([g12(p[c]) for c in cols] + [rep.harmonic_dim, *rep.ricci_signature,
                                                g12(rep.scalar)])
    sys.stdout.write(buf.getvalue())
    return EXIT_FAIL if failed else EXIT_OK


def cmd_verify(args) -> int:
    L = _load_algebra(args.algebra)
    g1, g2 = _load_metric(args.g1), _load_metric(args.g2)
    obj = _load_json(args.witness)
    try:
        A = np.array(obj["A"] if isinstance(obj, dict) else obj, dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed witness in {args.witness}: {exc!r}") from exc
    if A.shape != (L.dim, L.dim) or g1.dim != L.dim or g2.dim != L.dim:
        raise UsageError("dimensions of algebra, metrics and witness differ")
    ok = verify_equivalence(L, g1, g2, A, tol=args.tolerance)
    res = {"equivalent": ok, "seed": args.seed}
    if args.text:
        print(f"# seed {args.seed}")
        print("equivalent" if ok else "not equivalent")
    else:
        print(json.dumps(res))
    return EXIT_OK if ok else EXIT_FAIL


# -- parser ----------------------------------------------------------------------

def _common(p: argparse.ArgumentParser, tol: float = 1e-8) -> None:
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="text", action="store_false", help="JSON output (default)")
    fmt.add_argument("--text", dest="text", action="store_true", help="aligned text output")
    p.set_defaults(text=False)
    p.add_argument("--seed", type=int, default=0, help="random seed, echoed in the output")
    p.add_argument("--tolerance", type=float, default=tol, help="predicate tolerance")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="liespin",
                                 description="Left-invariant harmonic spinors on Lie groups.")
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("analyze", help="full report for one algebra and metric")
    p.add_argument("algebra")
    p.add_argument("metric")
    p.add_argument("--opposite", action="store_true", help="use the other odd irreducible module")
    _common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("catalog", help="list metric families")
    p.add_argument("--group", choices=GROUPS)
    _common(p)
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("reproduce", help="run a table reproduction")
    p.add_argument("--group", choices=GROUPS, required=True)
    p.add_argument("--density", type=int, default=3)
    _common(p)
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("sweep", help="CSV over a parameter grid of one family")
    p.add_argument("algebra", help="algebra JSON, or @family to use the family's own bracket")
    p.add_argument("family_spec")
    p.add_argument("--param", action="append", default=[], metavar="name=a:b:step")
    _common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify-equivalence", help="check A is an automorphism with A^T g1 A = g2")
    p.add_argument("algebra")
    p.add_argument("g1")
    p.add_argument("g2")
    p.add_argument("witness", help="JSON matrix or object with key 'A'")
    _common(p, tol=1e-9)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except JacobiError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_JACOBI
    except DegenerateMetricError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (MetricError, AlgebraError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

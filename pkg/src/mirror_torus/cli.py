"""Command-line front door.

    mirror-torus hom-dims E0.json E1.json
    mirror-torus verify-mirror --demo | --grid | --e0 A --e1 B --e2 C
    mirror-torus cech cover.json
    mirror-torus homcore-suite --seed 42

Exit status: 0 when every requested check passed, 1 when one failed, 2 for
bad input or usage.  ``--json`` output is sorted and carries no timings, so
equal inputs give byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from .cechlab import CoverModel, cech_dims, circle_three_arcs, circle_two_arcs, single_set_model
from .homcore import property_suite
from .linalg import rat, rat_str
from .mirror import dimension_table, functoriality_grid, verify_functoriality
from .sheafside import LineBundle, SheafObject, UnsupportedError

MAX_TOL = 1e-3
BUILTIN_COVERS = {"circle": circle_two_arcs, "three-arcs": circle_three_arcs,
                  "point": lambda: single_set_model(1)}


class InputError(ValueError):
    """Bad user input; reported with exit status 2."""


@dataclass(frozen=True)
class RunConfig:
    cutoff: Fraction = Fraction(6)
    tolerance: float = 1e-8
    seed: int = 42
    output: str = "table"

    def __post_init__(self):
        if self.cutoff <= 0:
            raise InputError("cutoff must be positive")
        # 0 is accepted on purpose: float noise then makes every comparison fail
        if not 0 <= self.tolerance <= MAX_TOL:
            raise InputError(f"tolerance must lie in [0, {MAX_TOL:g}]")
        if self.output not in ("table", "json"):
            raise InputError("output must be table or json")

    @property
    def as_json(self) -> bool:
        return self.output == "json"


def _threads() -> int:
    raw = os.environ.get("MIRROR_TORUS_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"MIRROR_TORUS_THREADS must be an integer, got {raw!r}")
    return max(1, min(n, os.cpu_count() or 1))


def _load_json(src: str):
    """Parse a file path, or an inline JSON object."""
    text = src
    if not src.lstrip().startswith("{"):
        try:
            with open(src) as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {src}: {exc.strerror}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {src}: {exc.msg} at line {exc.lineno} column {exc.colno}")


def _load_sheaf(src: str) -> SheafObject:
    data = _load_json(src)
    try:
        return SheafObject.from_json(data)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad sheaf descriptor in {src}: {exc}")


def _emit(config: RunConfig, payload: dict, lines: list) -> None:
    if config.as_json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print("\n".join(lines))


# -- commands -------------------------------------------------------------

def cmd_hom_dims(config: RunConfig, args) -> int:
    E0, E1 = _load_sheaf(args.e0), _load_sheaf(args.e1)
    try:
        table = dimension_table(E0, E1)
    except UnsupportedError as exc:
        raise InputError(str(exc))
    ok = all(b == a for b, a in table.values())
    payload = {"pair": [E0.to_json(), E1.to_json()], "match": ok,
               "dims": {str(k): {"B": b, "A": a} for k, (b, a) in table.items()}}
    lines = [f"{E0.label()} -> {E1.label()}", f"{'k':>3}  {'B':>3}  {'A':>3}"]
    lines += [f"{k:>3}  {b:>3}  {a:>3}" for k, (b, a) in table.items()]
    lines.append("match" if ok else "MISMATCH")
    _emit(config, payload, lines)
    return 0 if ok else 1


def _verify_one(job):
    triple, cutoff, tol = job
    rep = verify_functoriality(*triple, cutoff=cutoff, tolerance=tol)
    return rep.passed, rep.max_deviation


def _grid(config: RunConfig, args) -> int:
    triples = list(functoriality_grid(args.max_degree, args.max_den))
    jobs = [(t, config.cutoff, config.tolerance) for t in triples]
    start = time.perf_counter()
    workers = _threads()
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_verify_one, jobs, chunksize=64))
    else:
        results = [_verify_one(j) for j in jobs]
    elapsed = time.perf_counter() - start
    groups: Counter = Counter()
    good: Counter = Counter()
    failures = []
    for t, (ok, dev) in zip(triples, results):
        key = tuple(E.n for E in t[:2]) + ((t[2].n,) if t[2].kind == "line" else ("S",))
        groups[key] += 1
        good[key] += ok
        if not ok:
            failures.append({"triple": [E.to_json() for E in t], "max_deviation": dev})
    passed = sum(good.values())
    payload = {"total": len(triples), "passed": passed, "failures": failures,
               "config": {"cutoff": rat_str(config.cutoff), "tolerance": config.tolerance,
                          "max_degree": args.max_degree, "max_den": args.max_den}}
    lines = [f"{'degrees':<12} {'passed':>8} {'total':>8}"]
    for key in sorted(groups, key=str):
        lines.append(f"{','.join(map(str, key)):<12} {good[key]:>8} {groups[key]:>8}")
    lines.append(f"passed {passed}/{len(triples)} in {elapsed:.1f} s")
    _emit(config, payload, lines)
    return 0 if passed == len(triples) else 1


def cmd_verify_mirror(config: RunConfig, args) -> int:
    if args.grid:
        return _grid(config, args)
    if args.demo:
        triple = (LineBundle(0), LineBundle(1), LineBundle(2))
    else:
        if not (args.e0 and args.e1 and args.e2):
            raise InputError("give --demo, --grid, or all of --e0 --e1 --e2")
        triple = tuple(_load_sheaf(s) for s in (args.e0, args.e1, args.e2))
    try:
        rep = verify_functoriality(*triple, cutoff=config.cutoff, tolerance=config.tolerance)
    except UnsupportedError as exc:
        raise InputError(str(exc))
    lines = [rep.summary()]
    for c in rep.comparisons:
        lines.append(f"  {c.label:<28} deviation {c.deviation:.2e}")
    if config.tolerance == 0:
        lines.append("  note: tolerance 0 cannot be met by floating-point coefficients")
    _emit(config, rep.to_json(), lines)
    return 0 if rep.passed else 1


def cmd_cech(config: RunConfig, args) -> int:
    if args.builtin:
        model = BUILTIN_COVERS[args.builtin]()
    elif args.cover:
        data = _load_json(args.cover)
        try:
            model = CoverModel.from_json(data)
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad cover model in {args.cover}: {exc}")
    else:
        raise InputError("give a cover file or --builtin")
    bad = model.check_compatibility()
    if bad:
        raise InputError(f"restrictions are not compatible at {bad[0]}")
    dims = cech_dims(model)
    payload = {"dims": dims}
    _emit(config, payload, [" ".join(f"H{n}={d}" for n, d in enumerate(dims))])
    return 0


def cmd_homcore_suite(config: RunConfig, args) -> int:
    res = property_suite(config.seed, args.count)
    ok = all(v == res["instances"] for v in res["properties"].values())
    lines = [f"{name:<22} {v}/{res['instances']}" for name, v in res["properties"].items()]
    lines.append(f"quasi-isomorphisms among instances: {res['quasi_isos']}")
    lines.append("all properties pass" if ok else "FAILURES")
    _emit(config, dict(res, seed=config.seed), lines)
    return 0 if ok else 1


# -- parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cutoff", default="6", help="q-exponent cutoff, p/q (default 6)")
    common.add_argument("--tol", type=float, default=1e-8, help="coefficient tolerance")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = argparse.ArgumentParser(prog="mirror-torus", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    h = sub.add_parser("hom-dims", parents=[common], help="Hom/Ext dimensions on both sides")
    h.add_argument("e0", help="sheaf descriptor (file or inline JSON)")
    h.add_argument("e1")
    h.set_defaults(func=cmd_hom_dims)

    v = sub.add_parser("verify-mirror", parents=[common], help="compare structure constants")
    v.add_argument("--e0")
    v.add_argument("--e1")
    v.add_argument("--e2")
    v.add_argument("--demo", action="store_true", help="degrees (0, 1, 2) at the origin")
    v.add_argument("--grid", action="store_true", help="run the built-in grid")
    v.add_argument("--max-degree", type=int, default=4)
    v.add_argument("--max-den", type=int, default=4)
    v.set_defaults(func=cmd_verify_mirror)

    c = sub.add_parser("cech", parents=[common], help="Cech cohomology of a cover model")
    c.add_argument("cover", nargs="?")
    c.add_argument("--builtin", choices=sorted(BUILTIN_COVERS))
    c.set_defaults(func=cmd_cech)

    s = sub.add_parser("homcore-suite", parents=[common], help="random chain-map properties")
    s.add_argument("--count", type=int, default=200)
    s.set_defaults(func=cmd_homcore_suite)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        try:
            cutoff = rat(args.cutoff)
        except (ValueError, ZeroDivisionError):
            raise InputError(f"cannot read cutoff {args.cutoff!r}")
        config = RunConfig(cutoff, args.tol, args.seed, "json" if args.json else "table")
        return args.func(config, args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())

"""Command-line front end.

Exit codes: 0 success, 1 a property check failed, 2 usage or input error.
Rational arguments are ``a/b`` strings; decimals are refused except in
``--grid``, whose decimal literals are read as exact rationals.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import platform
import sys
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path
from typing import Callable

from . import combinatorics, counterexample, covers, instances, projective, serialize, stochastic
from .core import FunctionClass, Levels, Measure, as_fraction

OK, PROPERTY_FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def tool_version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "unknown"


@dataclass
class RunManifest:
    command_line: list[str]
    input_digests: dict[str, str]
    seed: int | None
    tool_version: str
    python: str
    started: float
    seconds: float = 0.0
    outputs: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def _digest(path: str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


# -- argument helpers ----------------------------------------------------------


def rational(text: str) -> Fraction:
    try:
        return as_fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def prime_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated primes, got {text!r}") from None


def add_source(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--fano", action="store_true", help="lines of PG(2,2), uniform measure")
    g.add_argument("--blocks", type=prime_list, metavar="Q1,Q2", help="block class on these primes")
    g.add_argument("--cube", type=int, metavar="D", help="coordinate indicators on {0,1}^D")
    g.add_argument("--input", metavar="FILE", help="function class JSON")
    p.add_argument("--measure", metavar="FILE", help="measure JSON (default: uniform, or the built-in one)")


def load_source(args, inputs: dict) -> tuple[FunctionClass, Measure]:
    try:
        if args.fano:
            cls, mu = instances.fano()
        elif args.blocks:
            cls, mu = instances.blocks(args.blocks)
        elif args.cube is not None:
            if not 1 <= args.cube <= 16:
                raise UsageError("--cube needs 1 <= D <= 16")
            cls, mu = instances.cube(args.cube)
        else:
            cls = serialize.load(args.input)
            inputs[args.input] = _digest(args.input)
            if not isinstance(cls, FunctionClass):
                raise UsageError(f"{args.input}: expected a function_class document")
            mu = Measure.uniform(cls.size, exact=cls.exact)
        if args.measure:
            mu = serialize.load(args.measure)
            inputs[args.measure] = _digest(args.measure)
            if not isinstance(mu, Measure):
                raise UsageError(f"{args.measure}: expected a measure document")
    except (serialize.SchemaError, OSError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    return cls, mu


# -- commands ------------------------------------------------------------------


def cmd_plane(args, inputs):
    try:
        plane = projective.build_plane(args.q)
    except projective.NotPrime as exc:
        raise UsageError(str(exc)) from None
    report = plane.axiom_report()
    result = {"plane": plane.to_dict(), "axioms": report}
    return result, None, (all(report.values()) or not args.verify)


def cmd_dims(args, inputs):
    cls, _ = load_source(args, inputs)
    gamma = args.gamma
    dim = combinatorics.gamma_dimension(cls, gamma, cap=args.cap)
    result = {
        "gamma": str(gamma),
        "gamma_dimension": dim.value,
        "capped": dim.capped,
        "witness": dim.witness.to_dict() if dim.witness else None,
    }
    if args.levels:
        lv = Levels(*args.levels)
        size, wit = combinatorics.max_boolean_independent(cls, lv, cap=args.cap)
        result["boolean_independent"] = {"size": size, "witness": wit.to_dict() if wit else None}
    return result, None, True


def cmd_cover(args, inputs):
    cls, mu = load_source(args, inputs)
    cov = covers.covering_number(cls, args.eps, mu, mode=args.mode, centers=args.centers)
    pack = covers.packing_number(cls, args.eps, mu)
    return {"covering": cov.to_dict(), "packing": pack.to_dict()}, None, True


def cmd_bracket(args, inputs):
    cls, mu = load_source(args, inputs)
    res = covers.bracketing_number(cls, args.eps, mu, mode=args.mode)
    return {"bracketing": res.to_dict()}, None, True


def cmd_counterexample(args, inputs):
    try:
        nspec = counterexample.parse_nspec(args.nspec)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.action == "schedule":
        sched = counterexample.choose_subsequence(nspec, args.K)
        return {"schedule": sched.to_dict()}, None, True
    try:
        grid = counterexample.parse_grid(args.grid)
        report = counterexample.verify_blowup(nspec, grid)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return {"blowup": report.to_dict()}, report.to_csv(), report.all_pass


def cmd_simulate(args, inputs):
    seeds = list(range(args.seed, args.seed + args.seeds))
    if args.kind == "gc-fail":
        if args.p is None:
            args.p = Fraction(1, 2)
        try:
            study = stochastic.gc_failure_study(args.d, args.n, args.p, seeds)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        ok = args.min_frequency is None or study.frequency >= float(args.min_frequency)
        return {"gc_failure": study.to_dict()}, None, ok
    cls, mu = load_source(args, inputs)
    brackets = covers.bracketing_number(cls, args.eps, mu, mode=args.mode) if args.eps is not None else None
    study = stochastic.convergence_study(cls, mu, args.n, seeds, brackets)
    return {"gc_converge": study.to_dict()}, study.to_csv(), study.envelope_dominates


def cmd_marczewski(args, inputs):
    if not 1 <= args.n <= stochastic.MAX_PAIRS:
        raise UsageError(f"--n must lie in 1..{stochastic.MAX_PAIRS}")
    size, pairs = stochastic.coordinate_pairs(args.n)
    mu = stochastic.marczewski_measure(size, pairs, args.p)
    sample = None if args.n <= 10 else 1024
    check = stochastic.check_independence(mu, pairs, args.p, sample=sample, seed=args.seed)
    return {"measure": serialize.to_dict(mu), "check": check.to_dict()}, None, check.exact


def cmd_alon(args, inputs):
    try:
        plane = projective.build_plane(args.q)
    except projective.NotPrime as exc:
        raise UsageError(str(exc)) from None
    search = projective.minimize_boundary(
        plane, args.k, budget=args.budget, seed=args.seed, restarts=args.restarts, threads=args.threads
    )
    reports = [projective.alon_bound_check(plane, e, args.k, search=search) for e in args.eps]
    result = {
        "search": {"value": str(search.value), "method": search.method, "evaluations": search.evaluations,
                   "partition": list(search.partition.labels)},
        "checks": [r.to_dict() for r in reports],
    }
    return result, None, all(r.status != "fail" for r in reports)


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="gcfinite", description=__doc__.splitlines()[0])
    top.add_argument("--version", action="version", version=tool_version())
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, seed=False):
        p.add_argument("--out", metavar="FILE", help="write the JSON result here (plus FILE.manifest.json)")
        p.add_argument("--csv", metavar="FILE", help="also write a CSV table, when the command has one")
        p.add_argument("--threads", type=int, default=1, help="worker threads (default 1)")
        if seed:
            p.add_argument("--seed", type=int, default=0, help="base seed (default 0)")

    p = sub.add_parser("plane", help="build PG(2,q) and check its axioms")
    p.add_argument("q", type=int)
    p.add_argument("--verify", action="store_true", help="exit 1 if an axiom fails")
    common(p)
    p.set_defaults(func=cmd_plane)

    p = sub.add_parser("dims", help="gamma-dimension and Boolean independence")
    add_source(p)
    p.add_argument("--gamma", type=rational, default=Fraction(1, 2))
    p.add_argument("--levels", type=rational, nargs=2, metavar=("ALPHA", "BETA"))
    p.add_argument("--cap", type=int, default=combinatorics.MAX_WIDTH)
    common(p)
    p.set_defaults(func=cmd_dims)

    for name, func, helptext in (
        ("cover", cmd_cover, "covering and packing numbers"),
        ("bracket", cmd_bracket, "bracketing number"),
    ):
        p = sub.add_parser(name, help=helptext)
        add_source(p)
        p.add_argument("--eps", type=rational, required=True)
        p.add_argument("--mode", choices=("exact", "greedy"), default="exact")
        if name == "cover":
            p.add_argument("--centers", choices=("internal", "external"), default="internal")
        common(p)
        p.set_defaults(func=func)

    p = sub.add_parser("counterexample", help="block construction with blowing-up bracketing numbers")
    p.add_argument("action", choices=("verify", "schedule"))
    p.add_argument("--nspec", default="ceil-inv", help="ceil-inv | const:N | step:e1=n1,e2=n2,...")
    p.add_argument("--grid", default="0.01:0.33:0.01", help="start:stop:step or a comma list")
    p.add_argument("--K", type=int, default=3, help="number of bands for 'schedule'")
    common(p)
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("simulate", help="Monte Carlo runs")
    p.add_argument("kind", choices=("gc-fail", "gc-converge"))
    g = p.add_mutually_exclusive_group()
    g.add_argument("--fano", action="store_true")
    g.add_argument("--blocks", type=prime_list)
    g.add_argument("--cube", type=int)
    g.add_argument("--input")
    p.add_argument("--measure")
    p.add_argument("--d", type=int, default=10_000, help="coordinates (gc-fail)")
    p.add_argument("--n", type=int, default=10, help="sample size")
    p.add_argument("--p", type=rational, default=None, help="coordinate probability (gc-fail)")
    p.add_argument("--seeds", type=int, default=100, help="number of seeds")
    p.add_argument("--min-frequency", type=rational, default=None, help="exit 1 below this event frequency")
    p.add_argument("--eps", type=rational, default=None, help="bracket width for the envelope (gc-converge)")
    p.add_argument("--mode", choices=("exact", "greedy"), default="exact")
    common(p, seed=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("marczewski", help="independent-sets measure on the coordinate cube")
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--p", type=rational, default=Fraction(1, 2))
    common(p, seed=True)
    p.set_defaults(func=cmd_marczewski)

    p = sub.add_parser("alon", help="line-boundary lower bound on PG(2,q)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--eps", type=rational, nargs="+", required=True)
    p.add_argument("--budget", type=int, default=100_000)
    p.add_argument("--restarts", type=int, default=20)
    common(p, seed=True)
    p.set_defaults(func=cmd_alon)
    return top


def _dump(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=1, default=str) + "\n"


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with 2 on usage errors
    if args.command == "simulate" and args.kind == "gc-converge" and not (
        args.fano or args.blocks or args.cube is not None or args.input
    ):
        parser.error("gc-converge needs --fano, --blocks, --cube or --input")
    inputs: dict[str, str] = {}
    manifest = RunManifest(
        ["gcfinite", *argv], inputs, getattr(args, "seed", None), tool_version(),
        platform.python_version(), time.time(),
    )
    func: Callable = args.func
    try:
        result, table, ok = func(args, inputs)
    except UsageError as exc:
        print(f"gcfinite {args.command}: {exc}", file=sys.stderr)
        return USAGE
    except (covers.CapExceeded, combinatorics.WidthLimitExceeded) as exc:
        print(f"gcfinite {args.command}: {exc}", file=sys.stderr)
        return USAGE
    payload = {"schema_version": serialize.SCHEMA_VERSION, "command": args.command, "ok": ok, "result": result}
    manifest.seconds = round(time.time() - manifest.started, 6)
    if args.csv and table is not None:
        Path(args.csv).write_text(table)
        manifest.outputs.append(args.csv)
    if args.out:
        mpath = args.out + ".manifest.json"
        payload["manifest"] = Path(mpath).name
        Path(args.out).write_text(_dump(payload))
        manifest.outputs.insert(0, args.out)
        Path(mpath).write_text(_dump(manifest.to_dict()))
    else:
        sys.stdout.write(_dump(payload))
    return OK if ok else PROPERTY_FAILED


if __name__ == "__main__":
    sys.exit(main())

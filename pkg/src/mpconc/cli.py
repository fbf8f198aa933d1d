"""Command-line entry point.

Exit codes: 0 success, 1 domain error (bad partition, invalid scheme,
inapplicable method, ...), 2 I/O or parse error (unreadable or invalid
state/scheme file, bad flags).
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib.metadata import PackageNotFoundError, version
from typing import Sequence

from . import bounds, concurrence as conc, example, partitions as parts, qstate, selftest


class InputError(Exception):
    """Raised for anything that should exit with status 2."""


def _version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "0.1.0"


def _read_state(path: str):
    try:
        return qstate.load_state(path)
    except OSError as exc:
        raise InputError(f"cannot read state file {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"state file {path} is not valid JSON: {exc}") from None
    except (qstate.StateError, ValueError) as exc:
        raise InputError(f"invalid state in {path}: {exc}") from None


def _read_scheme(path: str) -> parts.WeightScheme:
    try:
        return parts.WeightScheme.load(path)
    except OSError as exc:
        raise InputError(f"cannot read scheme file {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"scheme file {path} is not valid JSON: {exc}") from None
    except (parts.SchemeError, parts.PartitionError) as exc:
        raise InputError(f"invalid scheme in {path}: {exc}") from None


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def _table(rows: Sequence[tuple[str, object]]) -> None:
    width = max(len(k) for k, _ in rows) if rows else 0
    for k, v in rows:
        print(f"{k:<{width}}  {v}")


def cmd_concurrence(args) -> int:
    state = _read_state(args.state)
    if not isinstance(state, qstate.PureState):
        raise ValueError("exact concurrence is only defined here for pure states; use 'bound' for mixed input")
    if args.partition:
        cv = conc.concurrence_partition(state, parts.Partition.parse(args.partition, state.n))
    else:
        cv = conc.concurrence_full(state)
    print(f"{cv.value:.12g} {cv.squared:.12g}")
    return 0


def cmd_bound(args) -> int:
    state = _read_state(args.state)
    providers = args.providers
    if args.method == "theorem1":
        rep = bounds.theorem1_bound(state, tri_method=args.tri, bi_method=providers)
    elif args.method == "corollary1":
        rep = bounds.corollary1_bound(state, providers)
    elif args.method == "delta":
        rep = bounds.delta_bound(state, providers)
    elif args.method == "theorem2":
        rep = bounds.theorem2_bound(state, providers)
    else:
        if not args.scheme:
            raise InputError("--method scheme requires --scheme FILE")
        rep = bounds.scheme_bound(state, _read_scheme(args.scheme), providers)
    if args.pretty:
        _table([("method", rep.method), ("value", f"{rep.value:.12g}"), ("squared", f"{rep.squared:.12g}")]
               + [(k, f"{v:.12g}") for k, v in rep.contributions.items()])
    else:
        _emit(rep.to_json())
    return 0


def cmd_partitions(args) -> int:
    ms = args.m or list(range(2, args.n))
    family = [p for m in ms for p in parts.enumerate_partitions(args.n, m)]
    if args.compose:
        scheme = parts.compose_weights(args.n, family, args.compose)
        out = scheme.to_json()
        out["profile_uniform"] = scheme.profile_uniform()
        _emit(out)
        return 0
    if args.pretty:
        for p in family:
            extra = " ".join(sorted(parts.mask_to_str(a) for a in parts.realized_subsets(p))) if args.realized else ""
            print(f"{p!s:<12s} {extra}".rstrip())
        return 0
    if args.realized:
        _emit({str(p): sorted(parts.mask_to_str(a) for a in parts.realized_subsets(p)) for p in family})
    else:
        _emit([str(p) for p in family])
    return 0


def cmd_verify(args) -> int:
    scheme = _read_scheme(args.scheme)
    slack = parts.verify_weights(args.n, scheme)
    valid = all(s >= 0 for s in slack.values())
    ordered = sorted(slack.items(), key=lambda kv: (bin(kv[0]).count("1"), parts.mask_to_str(kv[0])))
    if args.pretty:
        _table([(parts.mask_to_str(a), str(s)) for a, s in ordered] + [("valid", valid)])
    else:
        _emit({"n": args.n, "valid": valid, "slacks": {parts.mask_to_str(a): str(s) for a, s in ordered}})
    return 0


def cmd_example(args) -> int:
    if args.action == "point":
        pt = example.example_point(args.t, args.providers)
        if args.pretty:
            _table([(k, f"{v:.12g}") for k, v in example.point_json(pt).items()])
        else:
            _emit(example.point_json(pt))
        return 0
    try:
        pts = example.sweep(args.t_from, args.t_to, args.steps, args.out, method=args.providers, jobs=args.jobs)
    except OSError as exc:
        raise InputError(str(exc)) from None
    print(f"wrote {len(pts)} rows to {args.out}")
    return 0


def cmd_selftest(args) -> int:
    results = selftest.run_all(seed=args.seed, samples=args.samples)
    for r in results:
        print(r.line())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} suites passed")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mpconc", description="Multipartite concurrence and its lower bounds.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {_version()}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("concurrence", help="exact concurrence of a pure state")
    p.add_argument("--state", required=True)
    p.add_argument("--partition", help='e.g. "1|2|34"; default is all singletons')
    p.set_defaults(func=cmd_concurrence)

    p = sub.add_parser("bound", help="lower bound for a (mixed) state")
    p.add_argument("--state", required=True)
    p.add_argument("--method", required=True, choices=["theorem1", "corollary1", "delta", "theorem2", "scheme"])
    p.add_argument("--providers", default="ppt,ccnr,wootters", help="comma list of ppt, ccnr, wootters; or best / exact")
    p.add_argument("--tri", default="best", choices=list(bounds.TRI_METHODS), help="tripartite term for theorem1")
    p.add_argument("--scheme")
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("partitions", help="enumerate set partitions / compose weights")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, action="append", help="block count; repeatable (default 2..n-1)")
    p.add_argument("--realized", action="store_true", help="also list the realized subsets")
    p.add_argument("--compose", choices=["max_uniform", "max_total"])
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=cmd_partitions)

    p = sub.add_parser("verify-scheme", help="coverage slacks of a weight scheme")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--scheme", required=True)
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("example", help="the noisy double-Bell family")
    ex = p.add_subparsers(dest="action", required=True)
    s = ex.add_parser("sweep")
    s.add_argument("--from", dest="t_from", type=float, default=0.0)
    s.add_argument("--to", dest="t_to", type=float, default=1.0)
    s.add_argument("--steps", type=int, default=1001)
    s.add_argument("--out", required=True)
    s.add_argument("--providers", default="best")
    s.add_argument("--jobs", type=int, default=None, help="worker processes (default: all CPUs)")
    s = ex.add_parser("point")
    s.add_argument("--t", type=float, required=True)
    s.add_argument("--providers", default="best")
    s.add_argument("--pretty", action="store_true")
    p.set_defaults(func=cmd_example)

    p = sub.add_parser("selftest", help="run the randomized invariant suites")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--samples", type=int, default=100)
    p.set_defaults(func=cmd_selftest)
    return ap


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

"""Batch command-line front end.

Reads JSON inputs, dispatches to the library, and writes deterministic
JSON (sorted keys, LF endings) to stdout or --out.

Exit codes: 0 success, 1 infeasible/empty result, 2 invalid input,
3 numerical non-convergence, 4 resource limit exceeded.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from . import enumeration, maxent, probability, ratedistortion, typealg
from .graphs import DiGraph, distortion
from .typealg import EdgeType

EXIT_OK = 0
EXIT_EMPTY = 1
EXIT_INVALID = 2
EXIT_NONCONVERGED = 3
EXIT_LIMIT = 4


class EmptyResult(Exception):
    """Signals a well-formed query whose answer is 'infeasible/empty'."""


# ---------------------------------------------------------------------------
# JSON parsing helpers
# ---------------------------------------------------------------------------


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def parse_graph(obj, n: int | None = None) -> DiGraph:
    if obj == "complete":
        if n is None:
            raise ValueError('"complete" shorthand needs a known n')
        return DiGraph.complete(n)
    if not isinstance(obj, dict) or "adj" not in obj:
        raise ValueError('graph JSON must be {"n": int, "adj": [[...]]} or "complete"')
    adj = obj["adj"]
    g = DiGraph(adj)
    if "n" in obj and obj["n"] != g.n:
        raise ValueError("graph JSON n field disagrees with adjacency size")
    return g


def parse_type(obj) -> EdgeType:
    if not isinstance(obj, dict) or "r" not in obj or "c" not in obj:
        raise ValueError('type JSON must be {"r": [...], "c": [...], "w": ...}')
    r = tuple(int(v) for v in obj["r"])
    c = tuple(int(v) for v in obj["c"])
    w = parse_graph(obj.get("w", "complete"), n=len(r))
    return EdgeType(r, c, w)


def _ext_real(v) -> float:
    if v == "inf":
        return math.inf
    if v == "-inf":
        return -math.inf
    return float(v)


def parse_family_params(obj) -> probability.FamilyDParams:
    if not isinstance(obj, dict) or "a" not in obj or "b" not in obj:
        raise ValueError('params JSON must be {"a": [...], "b": [...], "w": ...}')
    a = tuple(_ext_real(v) for v in obj["a"])
    w = parse_graph(obj.get("w", "complete"), n=len(a))
    b = tuple(_ext_real(v) for v in obj["b"])
    return probability.FamilyDParams(a=a, b=b, w=w)


def graph_json(g: DiGraph) -> dict:
    return {"n": g.n, "adj": g.tolist()}


def _emit(obj, out_path: str | None) -> None:
    text = json.dumps(obj, sort_keys=True) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_lines(objs, out_path: str | None) -> None:
    lines = "".join(json.dumps(o, sort_keys=True) + "\n" for o in objs)
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(lines)
    else:
        sys.stdout.write(lines)


# ---------------------------------------------------------------------------
# Subcommand implementations (each returns an exit code)
# ---------------------------------------------------------------------------


def cmd_feasible(args) -> int:
    t = parse_type(_load_json(args.type))
    ok = typealg.gale_ryser_feasible(t.r, t.c)
    if ok and not t.unrestricted:
        ok = typealg.restriction_necessary(t)
        if ok:
            ok = enumeration.count_class(t, limit=args.limit) > 0
    _emit({"feasible": bool(ok)}, args.out)
    return EXIT_OK if ok else EXIT_EMPTY


def cmd_normalize(args) -> int:
    t = parse_type(_load_json(args.type))
    tn, row_perm, col_perm = typealg.normalize(t)
    _emit(
        {
            "r": list(tn.r),
            "c": list(tn.c),
            "w": graph_json(tn.w),
            "row_perm": list(row_perm),
            "col_perm": list(col_perm),
        },
        args.out,
    )
    return EXIT_OK


def cmd_structure(args) -> int:
    t = parse_type(_load_json(args.type))
    if not t.unrestricted:
        raise ValueError("structure matrix requires W complete")
    sm = typealg.structure_matrix(t.r, t.c)
    _emit({"n": t.n, "t": sm.tolist()}, args.out)
    return EXIT_OK


def cmd_invariants(args) -> int:
    t = parse_type(_load_json(args.type))
    if t.unrestricted:
        masks = typealg.invariant_positions(t)
    else:
        masks = enumeration.invariants_by_enumeration(t, limit=args.limit)
    _emit(
        {
            "inv1": graph_json(masks.inv1),
            "inv0": graph_json(masks.inv0),
            "free": graph_json(masks.free),
        },
        args.out,
    )
    return EXIT_OK


def cmd_components(args) -> int:
    t = parse_type(_load_json(args.type))
    if t.unrestricted:
        comp = typealg.components_from_structure(t)
    else:
        comp = enumeration.components_by_enumeration(t, limit=args.limit)
    _emit(
        {
            "row_blocks": [list(b) for b in comp.row_blocks],
            "col_blocks": [list(b) for b in comp.col_blocks],
            "blocks": [
                {"rows": list(rows), "cols": list(cols), "trivial": trivial}
                for rows, cols, trivial in comp.blocks
            ],
        },
        args.out,
    )
    return EXIT_OK


def cmd_count(args) -> int:
    t = parse_type(_load_json(args.type))
    count = enumeration.count_class(t, limit=args.limit)
    _emit({"count": count}, args.out)
    return EXIT_OK if count else EXIT_EMPTY


def cmd_enumerate(args) -> int:
    t = parse_type(_load_json(args.type))
    if args.delta:
        stream = enumeration.enumerate_delta_class(
            t, args.delta, args.dens or t.density(), limit=args.limit
        )
    else:
        stream = enumeration.enumerate_class(t, limit=args.limit)
    _emit_lines((graph_json(g) for g in stream), args.out)
    return EXIT_OK


def cmd_interchange_check(args) -> int:
    t = parse_type(_load_json(args.type))
    connected = enumeration.interchange_connected(t, limit=args.limit)
    members = enumeration.count_class(t, limit=args.limit)
    _emit({"connected": connected, "members": members}, args.out)
    return EXIT_OK


def cmd_maxent(args) -> int:
    t = parse_type(_load_json(args.type))
    f, v, report = maxent.solve_maxent(t, tol=args.tol)
    _emit(
        {
            "p": [[float(x) for x in row] for row in f.p],
            "s": list(v.s),
            "t": list(v.t),
            "alpha": report.alpha,
            "entropy_nats": report.entropy_nats,
            "entropy_bits": report.entropy_nats / math.log(2),
            "iterations": report.iterations,
            "margins_residual": report.grad_norm,
        },
        args.out,
    )
    return EXIT_OK


def cmd_bounds(args) -> int:
    t = parse_type(_load_json(args.type))
    alpha, gap = maxent.barvinok_bounds(t, tol=args.tol, limit=args.limit)
    out = {"alpha": alpha, "measured_gap": gap}
    if t.n <= args.limit:
        out["count"] = enumeration.count_class(t, limit=args.limit)
    _emit(out, args.out)
    return EXIT_OK


def cmd_prob(args) -> int:
    t = parse_type(_load_json(args.type))
    params = parse_family_params(_load_json(args.params))
    point = probability.typeclass_point_prob(params, t, tol=args.tol)
    lower, upper, exact = probability.typeclass_prob_bounds(
        params, t, tol=args.tol, limit=args.limit
    )
    _emit(
        {"point_prob": point, "lower": lower, "upper": upper, "exact": exact},
        args.out,
    )
    return EXIT_OK


def cmd_sanov(args) -> int:
    params = parse_family_params(_load_json(args.params))
    types = [parse_type(_load_json(p)) for p in args.types]
    lower, upper, exact = probability.sanov_bounds(
        params, types, tol=args.tol, limit=args.limit
    )
    _emit({"lower": lower, "upper": upper, "exact": exact}, args.out)
    return EXIT_OK


def cmd_delta(args) -> int:
    t = parse_type(_load_json(args.type))
    dens = args.dens or t.density()
    count = sum(
        1 for _ in enumeration.enumerate_delta_class(t, args.delta, dens, limit=args.limit)
    )
    lo, hi = ratedistortion.delta_class_cardinality_bounds(
        t, args.delta, dens, tol=args.tol, limit=args.limit
    )
    _emit(
        {
            "count_delta": count,
            "prob_lower": probability.delta_class_prob_lower(t, args.delta, dens),
            "card_lower": lo,
            "card_upper": hi,
        },
        args.out,
    )
    return EXIT_OK


def cmd_conditional(args) -> int:
    t = parse_type(_load_json(args.type))
    g = parse_graph(_load_json(args.graph), n=t.n)
    stream = enumeration.enumerate_conditional(
        t, g, delta=args.delta, dens=args.dens or t.density(), limit=args.limit
    )
    _emit_lines((graph_json(h) for h in stream), args.out)
    return EXIT_OK


def cmd_distortion(args) -> int:
    g = parse_graph(_load_json(args.graph))
    h = parse_graph(_load_json(args.graph2), n=g.n)
    d = distortion(g, h)
    _emit(
        {
            "distortion": f"{d.numerator}/{d.denominator}",
            "value": float(d),
        },
        args.out,
    )
    return EXIT_OK


def cmd_cover(args) -> int:
    t = parse_type(_load_json(args.type))
    dens = args.dens or t.density()
    book = ratedistortion.build_cover_random(
        t,
        args.xi,
        args.delta,
        m=args.m,
        seed=args.seed,
        dens=dens,
        tol=args.tol,
        limit=args.limit,
    )
    thr = Fraction(args.xi) + Fraction(args.delta).limit_denominator(10**9) / t.n
    ok, worst, worst_v = ratedistortion.verify_cover(book, t, thr, limit=args.limit)
    _emit(
        {
            "size": len(book.graphs),
            "m_target": book.m_target,
            "provenance": book.provenance,
            "covers": ok,
            "worst_distortion": f"{worst_v.numerator}/{worst_v.denominator}",
            "codebook": [graph_json(g) for g in book.graphs],
        },
        args.out,
    )
    return EXIT_OK if ok else EXIT_EMPTY


def cmd_rd_bounds(args) -> int:
    t = parse_type(_load_json(args.type))
    dens = args.dens or t.density()
    up = ratedistortion.rd_upper(t, args.xi, args.delta, dens=dens, tol=args.tol, limit=args.limit)
    lo = ratedistortion.rd_lower(
        t, args.xi, args.delta, args.delta_hat, dens=dens, tol=args.tol, limit=args.limit
    )
    def report_json(r):
        return {
            "value_nats": r.value_nats,
            "value_bits": r.value_bits,
            "raw_nats": r.raw_nats,
            "slack_terms": r.slack_terms,
            "assumption_flags": r.assumption_flags,
        }
    _emit({"upper": report_json(up), "lower": report_json(lo)}, args.out)
    return EXIT_OK


def cmd_rn_exact(args) -> int:
    t = parse_type(_load_json(args.type))
    source = list(enumeration.enumerate_class(t, limit=args.limit))
    if not source:
        raise EmptyResult("empty class")
    d = Fraction(args.d)
    if args.params:
        params = parse_family_params(_load_json(args.params))
        f = probability.family_d_graph(params)
        rate, book = ratedistortion.exact_rn_prob(f, d, args.eps, limit=args.rn_limit)
    else:
        rate, book = ratedistortion.exact_rn(source, d, limit=args.rn_limit)
    _emit(
        {
            "rate_bits": rate,
            "codebook_size": len(book.graphs),
            "codebook": [graph_json(g) for g in book.graphs],
        },
        args.out,
    )
    return EXIT_OK


def cmd_verify_all(args) -> int:
    """Reduced in-process acceptance sweep at the given n; exits nonzero
    on any violation."""
    n = args.n
    failures: list[str] = []
    buckets = enumeration.partition_by_type(n, limit=max(4, n))
    total = sum(len(v) for v in buckets.values())
    if total != 1 << (n * n):
        failures.append("partition: buckets do not cover graph space")
    for (r, c), members in sorted(buckets.items()):
        t = EdgeType(r, c)
        if typealg.gale_ryser_feasible(r, c) != (len(members) > 0):
            failures.append(f"feasibility mismatch at {r},{c}")
        if not members:
            continue
        if enumeration.count_class(t, limit=n) != len(members):
            failures.append(f"count mismatch at {r},{c}")
        _, _, report = maxent.solve_maxent(t)
        if len(members) > report.alpha * (1 + 1e-6):
            failures.append(f"Barvinok upper bound violated at {r},{c}")
        if not enumeration.interchange_connected(t, limit=n):
            failures.append(f"interchange graph disconnected at {r},{c}")
        tn, _, _ = typealg.normalize(t)
        m_struct = typealg.invariant_positions(tn)
        m_enum = enumeration.invariants_by_enumeration(tn, limit=n)
        if m_struct.inv1 != m_enum.inv1 or m_struct.inv0 != m_enum.inv0:
            failures.append(f"invariant masks disagree at {r},{c}")
    result = {"n": n, "types_checked": len(buckets), "failures": failures}
    _emit(result, args.out)
    return EXIT_OK if not failures else EXIT_EMPTY


# ---------------------------------------------------------------------------
# Argument parsing and dispatch
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="edgetype",
        description="Edge-type combinatorics for directed graphs",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, **need):
        sp = sub.add_parser(name)
        sp.set_defaults(fn=fn)
        if need.get("type"):
            sp.add_argument("--type", required=True, help="type-spec JSON file")
        if need.get("graph"):
            sp.add_argument("--graph", required=True, help="graph JSON file")
        if need.get("graph2"):
            sp.add_argument("--graph2", required=True, help="second graph JSON file")
        if need.get("params"):
            sp.add_argument(
                "--params", required=need["params"] == "req", help="family params JSON file"
            )
        sp.add_argument("--tol", type=float, default=None)
        sp.add_argument("--limit", type=int, default=enumeration.DEFAULT_LIMIT)
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--out", default=None)
        sp.add_argument("--format", choices=["json", "csv"], default="json")
        return sp

    add("feasible", cmd_feasible, type=True)
    add("normalize", cmd_normalize, type=True)
    add("structure", cmd_structure, type=True)
    add("invariants", cmd_invariants, type=True)
    add("components", cmd_components, type=True)
    add("count", cmd_count, type=True)
    sp = add("enumerate", cmd_enumerate, type=True)
    sp.add_argument("--delta", type=float, default=0.0)
    sp.add_argument("--dens", type=int, default=None)
    add("interchange-check", cmd_interchange_check, type=True)
    add("maxent", cmd_maxent, type=True)
    add("bounds", cmd_bounds, type=True)
    add("prob", cmd_prob, type=True, params="req")
    sp = add("sanov", cmd_sanov, params="req")
    sp.add_argument("--types", nargs="+", required=True, help="type-spec JSON files")
    sp = add("delta", cmd_delta, type=True)
    sp.add_argument("--delta", type=float, required=True)
    sp.add_argument("--dens", type=int, default=None)
    sp = add("conditional", cmd_conditional, type=True, graph=True)
    sp.add_argument("--delta", type=float, default=0.0)
    sp.add_argument("--dens", type=int, default=None)
    add("distortion", cmd_distortion, graph=True, graph2=True)
    sp = add("cover", cmd_cover, type=True)
    sp.add_argument("--xi", required=True, help="distortion budget, e.g. 1/3")
    sp.add_argument("--delta", type=float, default=0.0)
    sp.add_argument("--dens", type=int, default=None)
    sp.add_argument("--m", type=int, default=None)
    sp.add_argument("--seed", type=int, default=0)
    sp = add("rd-bounds", cmd_rd_bounds, type=True)
    sp.add_argument("--xi", required=True)
    sp.add_argument("--delta", type=float, default=0.0)
    sp.add_argument("--delta-hat", dest="delta_hat", type=float, default=0.0)
    sp.add_argument("--dens", type=int, default=None)
    sp = add("rn-exact", cmd_rn_exact, type=True, params="opt")
    sp.add_argument("--d", required=True, help="distortion threshold, e.g. 1/3")
    sp.add_argument("--eps", type=float, default=0.0)
    sp.add_argument("--rn-limit", dest="rn_limit", type=int, default=3)
    sp = add("verify-all", cmd_verify_all)
    sp.add_argument("--n", type=int, default=3)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except EmptyResult as exc:
        sys.stderr.write(f"empty result: {exc}\n")
        return EXIT_EMPTY
    except enumeration.EnumerationLimitError as exc:
        sys.stderr.write(f"resource limit: {exc}\n")
        return EXIT_LIMIT
    except ArithmeticError as exc:
        sys.stderr.write(f"non-convergence: {exc}\n")
        return EXIT_NONCONVERGED
    except ValueError as exc:
        if "empty" in str(exc).lower():
            sys.stderr.write(f"empty result: {exc}\n")
            return EXIT_EMPTY
        sys.stderr.write(f"invalid input: {exc}\n")
        return EXIT_INVALID
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        sys.stderr.write(f"invalid input: {exc}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())

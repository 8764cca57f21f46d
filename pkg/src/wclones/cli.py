"""Command-line front end. Payloads go to stdout as JSON, diagnostics to stderr.

Exit codes: 0 ok, 1 checked property false, 2 input error, 3 resource cap,
4 theorem contradiction.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from typing import Optional, Sequence

from . import fixtures, io
from .clones import DEFAULT_OP_CAP
from .errors import InputError, TheoremContradiction, WcloneError
from .gordan import solve_gordan, verify_outcome
from .ops import DEFAULT_ENUM_CAP, FILTERS, classify, count_candidates, enumerate_operations
from .vcsp import (
    DEFAULT_BRUTE_CAP,
    core_reduce,
    express,
    find_weighted_polymorphism,
    solve_bruteforce,
)
from .weightings import superpose_weighting, symmetrize, validate_weighting


class CommandResult:
    def __init__(self, payload, code: int = 0):
        self.payload = payload
        self.code = code


def _single_weighting(source, domain=None):
    ws = io.weightings_from_json(io.load_json(source), domain)
    if len(ws) != 1:
        raise InputError(f"expected one weighting, got {len(ws)}")
    return ws[0]


# --------------------------------------------------------------- op


def cmd_op_classify(a) -> CommandResult:
    f = io.operation_from_json(io.load_json(a.op), a.domain)
    out = {"operation": f.to_json(), "class": classify(f).to_json()}
    if f.arity == 2:
        triples = list(itertools.product(range(f.n), repeat=3))
        out["identities"] = {
            "associative": all(f(f(x, y), z) == f(x, f(y, z)) for x, y, z in triples),
            "rectangular_band": all(f(x, f(y, z)) == f(x, z) for x, y, z in triples),
        }
    return CommandResult(out)


def cmd_op_enumerate(a) -> CommandResult:
    ops = enumerate_operations(a.domain, a.arity, a.filter, cap=a.cap)
    tables = []
    count = 0
    for f in ops:
        count += 1
        if a.limit is None or len(tables) < a.limit:
            tables.append(list(f.table))
    return CommandResult(
        {
            "domain": a.domain,
            "arity": a.arity,
            "filter": a.filter or "all",
            "candidates": count_candidates(a.domain, a.arity, a.filter),
            "count": count,
            "tables": tables,
        }
    )


# --------------------------------------------------------------- weighting


def cmd_weighting_check(a) -> CommandResult:
    w = _single_weighting(a.weighting, a.domain)
    report = validate_weighting(w)
    return CommandResult({"weighting": w.to_json(), "report": report.to_json()}, 0 if report.valid else 1)


def cmd_weighting_superpose(a) -> CommandResult:
    w = _single_weighting(a.weighting, a.domain)
    data = io.load_json(a.ops)
    if not isinstance(data, list):
        raise InputError("--ops must be a JSON list of operations")
    gs = [io.operation_from_json(g, w.n) for g in data]
    out = superpose_weighting(w, gs, require_proper=a.require_proper)
    return CommandResult({"weighting": out.to_json(), "report": validate_weighting(out).to_json()})


def cmd_weighting_symmetrize(a) -> CommandResult:
    w = _single_weighting(a.weighting, a.domain)
    return CommandResult({"weighting": symmetrize(w).to_json()})


# --------------------------------------------------------------- gordan


def cmd_gordan_solve(a) -> CommandResult:
    A = io.matrix_from_json(io.load_json(a.matrix))
    o = solve_gordan(A)
    return CommandResult({**o.to_json(), "verified": verify_outcome(A, o)})


# --------------------------------------------------------------- witness


def cmd_witness_find(a) -> CommandResult:
    from .pipeline import find_witness

    gens = io.weightings_from_json(io.load_json(a.weighting), a.domain)
    clone = io.slice_from_json(io.load_json(a.slice)) if a.slice else None
    report = find_witness(gens, max_arity=a.max_arity, op_cap=a.max_ops, clone=clone)
    return CommandResult(report.to_json())


# --------------------------------------------------------------- vcsp


def cmd_vcsp_solve(a) -> CommandResult:
    inst = io.instance_from_json(io.load_json(a.instance))
    return CommandResult(solve_bruteforce(inst, cap=a.cap, max_solutions=a.max_solutions).to_json())


def cmd_vcsp_express(a) -> CommandResult:
    inst = io.instance_from_json(io.load_json(a.instance))
    free = [int(v) for v in a.free.split(",") if v.strip()]
    phi = express(inst, free, cap=a.cap)
    return CommandResult({"domain": phi.n, **phi.to_json()})


# --------------------------------------------------------------- lang


def cmd_lang_core_reduce(a) -> CommandResult:
    lang = io.language_from_json(io.load_json(a.language))
    return CommandResult(core_reduce(lang).to_json())


def cmd_lang_find_wpol(a) -> CommandResult:
    lang = io.language_from_json(io.load_json(a.language))
    pool = a.pool
    if pool not in ("all", "idempotent"):
        pool = io.slice_from_json(io.load_json(pool))
    res = find_weighted_polymorphism(lang, a.arity, pool, cap=a.cap)
    return CommandResult(res.to_json(), 0 if res.weighting is not None else 1)


# --------------------------------------------------------------- verify


def cmd_verify_examples(a) -> CommandResult:
    if a.dump_fixtures:
        return CommandResult(fixtures.as_json())
    from .suite import run_suite

    results = run_suite(a.only)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name} ({r.seconds:.2f}s)", file=sys.stderr)
    ok = all(r.passed for r in results)
    return CommandResult({"passed": ok, "checks": [r.to_json() for r in results]}, 0 if ok else 1)


# --------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wclones", description="Weighted clones over finite domains.")
    groups = p.add_subparsers(dest="group", required=True)

    def command(group, name, fn, help):
        sp = group.add_parser(name, help=help)
        sp.set_defaults(fn=fn)
        return sp

    op = groups.add_parser("op", help="operations").add_subparsers(dest="cmd", required=True)
    sp = command(op, "classify", cmd_op_classify, "classify an operation")
    sp.add_argument("--op", required=True, help="operation JSON (file or inline)")
    sp.add_argument("--domain", type=int, help="domain size for shorthands")
    sp = command(op, "enumerate", cmd_op_enumerate, "list operations in table order")
    sp.add_argument("--domain", type=int, required=True)
    sp.add_argument("--arity", type=int, required=True)
    sp.add_argument("--filter", choices=sorted(FILTERS))
    sp.add_argument("--cap", type=int, default=DEFAULT_ENUM_CAP)
    sp.add_argument("--limit", type=int, help="print at most this many tables")

    wg = groups.add_parser("weighting", help="weightings").add_subparsers(dest="cmd", required=True)
    for name, fn, help in (
        ("check", cmd_weighting_check, "validate a weighting"),
        ("superpose", cmd_weighting_superpose, "superpose a weighting with operations"),
        ("symmetrize", cmd_weighting_symmetrize, "cyclic symmetrization"),
    ):
        sp = command(wg, name, fn, help)
        sp.add_argument("--weighting", required=True)
        sp.add_argument("--domain", type=int)
        if name == "superpose":
            sp.add_argument("--ops", required=True, help="JSON list of inner operations")
            sp.add_argument("--require-proper", action="store_true")

    gd = groups.add_parser("gordan", help="Gordan alternative").add_subparsers(dest="cmd", required=True)
    sp = command(gd, "solve", cmd_gordan_solve, "solve Ax=0, x>=0, x!=0 or give y^T A > 0")
    sp.add_argument("--matrix", required=True)

    wt = groups.add_parser("witness", help="witness pipeline").add_subparsers(dest="cmd", required=True)
    sp = command(wt, "find", cmd_witness_find, "certified witness weighting")
    sp.add_argument("--weighting", required=True, help="generator weighting(s)")
    sp.add_argument("--domain", type=int)
    sp.add_argument("--max-ops", type=int, default=DEFAULT_OP_CAP, help="operation cap for clone slices")
    sp.add_argument("--max-arity", type=int, help="generate a support-clone slice up to this arity")
    sp.add_argument("--slice", help="clone slice JSON used for the elimination systems")

    vc = groups.add_parser("vcsp", help="VCSP instances").add_subparsers(dest="cmd", required=True)
    sp = command(vc, "solve", cmd_vcsp_solve, "brute-force optimum and minimizers")
    sp.add_argument("--instance", required=True)
    sp.add_argument("--cap", type=int, default=DEFAULT_BRUTE_CAP)
    sp.add_argument("--max-solutions", type=int)
    sp = command(vc, "express", cmd_vcsp_express, "weighted relation expressed by an instance")
    sp.add_argument("--instance", required=True)
    sp.add_argument("--free", required=True, help="comma-separated free variable indices")
    sp.add_argument("--cap", type=int, default=DEFAULT_BRUTE_CAP)

    lg = groups.add_parser("lang", help="valued constraint languages").add_subparsers(dest="cmd", required=True)
    sp = command(lg, "core-reduce", cmd_lang_core_reduce, "reduce to a core")
    sp.add_argument("--language", required=True)
    sp = command(lg, "find-wpol", cmd_lang_find_wpol, "search a positive weighted polymorphism")
    sp.add_argument("--language", required=True)
    sp.add_argument("--arity", type=int, required=True)
    sp.add_argument("--pool", default="idempotent", help="all | idempotent | clone slice JSON")
    sp.add_argument("--cap", type=int, default=DEFAULT_ENUM_CAP)

    vf = groups.add_parser("verify", help="built-in example suite").add_subparsers(dest="cmd", required=True)
    sp = command(vf, "paper-examples", cmd_verify_examples, "run the example suite")
    sp.add_argument("--dump-fixtures", action="store_true", help="print the embedded fixtures and exit")
    sp.add_argument("--only", action="append", help="run only the named check (repeatable)")
    return p


def run_command(argv: Optional[Sequence[str]] = None) -> CommandResult:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except TheoremContradiction as exc:
        print(f"theorem contradiction: {exc}", file=sys.stderr)
        return CommandResult({"error": str(exc), "dump": exc.dump}, exc.exit_code)
    except WcloneError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CommandResult({"error": str(exc)}, exc.exit_code)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        result = run_command(argv)
    except SystemExit as exc:  # argparse usage errors
        return 2 if exc.code else 0
    try:
        sys.stdout.write(json.dumps(result.payload) + "\n")
        sys.stdout.flush()
    except BrokenPipeError:  # pragma: no cover - reader closed early
        pass
    return result.code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

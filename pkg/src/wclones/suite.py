"""Self-contained verification suite over the built-in examples."""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from typing import Callable

from . import fixtures as fx
from .ops import (
    CYCLIC_TRANSITIONS,
    TERNARY_PATTERNS,
    TERNARY_TAGS,
    Operation,
    classify,
    cyclic_variants,
    enumerate_operations,
    identify_args,
    ternary_tag,
    tuples,
)
from .vcsp import WeightedRelation, is_polymorphism, is_weighted_polymorphism, solve_bruteforce


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: dict
    seconds: float

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "seconds": round(self.seconds, 3), **self.detail}


def pattern_holds(f: Operation, tag: str) -> bool:
    """Re-check the three identities of a ternary tag over all (x, y) in D^2."""
    pattern = TERNARY_PATTERNS[tag]
    for x, y in itertools.product(range(f.n), repeat=2):
        if x == y:
            continue
        val = {"x": x, "y": y}
        got = (f(x, x, y), f(x, y, x), f(y, x, x))
        if got != tuple(val[c] for c in pattern):
            return False
    return True


def sharp_ternary(n: int) -> list[Operation]:
    return list(enumerate_operations(n, 3, "sharp"))


# ------------------------------------------------------------------ checks


def sharp_census() -> dict:
    boolean = sharp_ternary(2)
    tags2 = [ternary_tag(f) for f in boolean]
    consistent = all(pattern_holds(f, t) for f, t in zip(boolean, tags2))
    realized3 = {tag: sum(1 for _ in enumerate_operations(3, 3, tag)) for tag in TERNARY_TAGS}
    return {
        "passed": consistent and all(realized3.values()) and len(set(tags2)) == len(tags2),
        "boolean_sharp_count": len(boolean),
        "boolean_tags": sorted(tags2),
        "ternary_domain3_counts": realized3,
    }


def cyclic_law(sample: int = 1000, seed: int = 0) -> dict:
    def check(ops):
        bad = 0
        for f in ops:
            tag = ternary_tag(f)
            got = tuple(ternary_tag(v) for v in cyclic_variants(f))
            if got != CYCLIC_TRANSITIONS[tag]:
                bad += 1
        return bad

    boolean = sharp_ternary(2)
    ops3 = sharp_ternary(3)
    rng = random.Random(seed)
    picked = rng.sample(ops3, min(sample, len(ops3)))
    bad2, bad3 = check(boolean), check(picked)
    return {
        "passed": bad2 == 0 and bad3 == 0 and len(picked) >= min(sample, len(ops3)),
        "boolean_checked": len(boolean),
        "domain3_checked": len(picked),
        "violations": bad2 + bad3,
    }


def swierczkowski_boolean() -> dict:
    sharp = 0
    bad = 0
    for f in enumerate_operations(2, 4):
        c = classify(f)
        if c.is_sharp:
            sharp += 1
            if not c.is_semiprojection:
                bad += 1
    return {"passed": bad == 0, "operations": 2**16, "sharp": sharp, "exceptions": bad}


def swierczkowski_identifications(k: int = 4) -> dict:
    """Every consistent choice of projections for the C(k,2) identifications of a
    k-ary operation on a domain with at least k labels has a common witness."""
    n = k
    pairs = [(i, j) for i in range(1, k) for j in range(i + 1, k + 1)]
    repeats = [t for t in tuples(n, k) if len(set(t)) < k]
    consistent = 0
    bad = 0
    for choice in itertools.product(range(1, k), repeat=len(pairs)):
        table = {}
        ok = True
        for (i, j), r in zip(pairs, choice):
            for t in repeats:
                if t[i - 1] != t[j - 1]:
                    continue
                reduced = t[: j - 1] + t[j:]
                v = reduced[r - 1]
                if table.setdefault(t, v) != v:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        consistent += 1
        witnesses = [i for i in range(1, k + 1) if all(table[t] == t[i - 1] for t in repeats)]
        if not witnesses:
            bad += 1
    return {"passed": bad == 0 and consistent > 0, "assignments": (k - 1) ** len(pairs), "consistent": consistent, "exceptions": bad}


def _submodular(phi: WeightedRelation) -> bool:
    for x, y in itertools.product(tuples(2, phi.arity), repeat=2):
        lo = tuple(min(a, b) for a, b in zip(x, y))
        hi = tuple(max(a, b) for a, b in zip(x, y))
        if phi(*x) + phi(*y) < phi(*lo) + phi(*hi):
            return False
    return True


def submodular_sample(count: int = 300, seed: int = 1) -> dict:
    rng = random.Random(seed)
    agree = 0
    submodular = 0
    relations = [WeightedRelation(2, 2, v) for v in itertools.product(range(3), repeat=4)]
    for _ in range(count):
        relations.append(WeightedRelation(2, 3, [rng.randint(0, 4) for _ in range(8)]))
    for phi in relations:
        sub = _submodular(phi)
        submodular += sub
        agree += sub == is_weighted_polymorphism(fx.OMEGA_SUB, phi).ok
    return {"passed": agree == len(relations), "relations": len(relations), "submodular": submodular, "agreements": agree}


def rectangular_band() -> dict:
    f = fx.RECTANGULAR_BAND
    triples = list(itertools.product(range(f.n), repeat=3))
    band = all(f(x, f(y, z)) == f(x, z) for x, y, z in triples)
    assoc = all(f(f(x, y), z) == f(x, f(y, z)) for x, y, z in triples)
    c = classify(f)
    return {
        "passed": band and assoc and c.is_idempotent and not c.is_projection,
        "triples": len(triples),
        "idempotent": c.is_idempotent,
        "projection": c.is_projection,
        "associative": assoc,
        "band_identity": band,
    }


def noncommutative_example() -> dict:
    from .weightings import validate_weighting

    report = validate_weighting(fx.NONCOMMUTATIVE_OMEGA)
    improves = is_weighted_polymorphism(fx.NONCOMMUTATIVE_OMEGA, fx.NONCOMMUTATIVE_PHI).ok
    sol = solve_bruteforce(fx.NONCOMMUTATIVE_INSTANCE)
    argmin = sorted(sol.argmin)
    return {
        "passed": report.valid and report.positive and not report.commutative_support and improves
        and sol.optimum == 0 and argmin == [(0, 1), (1, 0)],
        "valid": report.valid,
        "positive": report.positive,
        "commutative_support": report.commutative_support,
        "improves_phi": improves,
        "optimum": str(sol.optimum),
        "argmin": [list(a) for a in argmin],
    }


def nae_census() -> dict:
    semis = list(enumerate_operations(3, 3, "semiprojection"))
    failures = sum(1 for f in semis if not is_polymorphism(f, fx.NAE3))
    return {"passed": failures == 0 and len(semis) == 3 * 728, "semiprojections": len(semis), "failures": failures}


SUITE: dict[str, Callable[[], dict]] = {
    "sharp-census": sharp_census,
    "cyclic-law": cyclic_law,
    "swierczkowski-boolean-k4": swierczkowski_boolean,
    "swierczkowski-identifications-k4": swierczkowski_identifications,
    "submodular-omega-sub": submodular_sample,
    "rectangular-band": rectangular_band,
    "noncommutative-example": noncommutative_example,
    "nae-semiprojection-census": nae_census,
}


def run_suite(names=None) -> list[CheckResult]:
    out = []
    for name, fn in SUITE.items():
        if names and name not in names:
            continue
        t = time.perf_counter()
        detail = fn()
        passed = bool(detail.pop("passed"))
        out.append(CheckResult(name, passed, detail, time.perf_counter() - t))
    return out

"""Acceptance criteria 1-11, each at its stated tolerance and runtime bound.

Expected values are fixed in this file; the oracles below are plain loops
that do not call the classification code under test.
"""

import itertools
import random
import time
from fractions import Fraction

import pytest

from wclones import fixtures as fx
from wclones.certificate import replay
from wclones.gordan import QMatrix, solve_gordan, verify_outcome
from wclones.ops import Operation, classify, cyclic_variants, enumerate_operations, projection
from wclones.pipeline import find_witness
from wclones.rationals import INF, is_inf
from wclones.vcsp import (
    Constraint,
    VcspInstance,
    WeightedRelation,
    core_reduce,
    decompose_unary_sum,
    induced_instance,
    is_polymorphism,
    is_weighted_polymorphism,
    solve_bruteforce,
)
from wclones.weightings import Weighting, symmetrize

# column identities on (x,x,y), (x,y,x), (y,x,x)
COLUMNS = {
    "Mj": "xxx", "S1": "xxy", "S2": "xyx", "S3": "yxx",
    "P1": "xyy", "P2": "yxy", "P3": "yyx", "Mn": "yyy",
}
TRANSITIONS = {
    "Mj": ("Mj", "Mj", "Mj"), "Mn": ("Mn", "Mn", "Mn"),
    "S1": ("S1", "S2", "S3"), "S2": ("S2", "S3", "S1"), "S3": ("S3", "S1", "S2"),
    "P1": ("P1", "P3", "P2"), "P2": ("P2", "P1", "P3"), "P3": ("P3", "P2", "P1"),
}


def column_of(table, n):
    """Column whose identities a ternary table satisfies, by direct lookup."""
    f = lambda a, b, c: table[(a * n + b) * n + c]  # noqa: E731
    for name, pattern in COLUMNS.items():
        ok = True
        for x, y in itertools.permutations(range(n), 2):
            want = tuple({"x": x, "y": y}[ch] for ch in pattern)
            if (f(x, x, y), f(x, y, x), f(y, x, x)) != want:
                ok = False
                break
        if ok:
            return name
    return None


def is_sharp_oracle(table, n, k):
    """Non-projection whose every pairwise identification is a projection."""
    tuples = list(itertools.product(range(n), repeat=k))
    val = dict(zip(tuples, table))
    if any(all(val[t] == t[i] for t in tuples) for i in range(k)):
        return False
    for i, j in itertools.combinations(range(k), 2):
        sub = [t for t in tuples if t[i] == t[j]]
        if not any(all(val[t] == t[p] for t in sub) for p in range(k) if p != j):
            return False
    return True


def timed(fn):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


@pytest.mark.criterion(1)
def test_criterion_1_sharp_census():
    def run():
        return [f for f in enumerate_operations(2, 3, "sharp")]

    sharp, seconds = timed(run)
    oracle = [t for t in itertools.product(range(2), repeat=8) if is_sharp_oracle(t, 2, 3)]
    assert [f.table for f in sharp] == oracle
    columns = [column_of(f.table, 2) for f in sharp]
    # classification matches the column identities exactly
    assert [classify(f).ternary_tag for f in sharp] == columns
    assert seconds < 1.0
    assert len(sharp) == 8
    assert sorted(columns) == sorted(COLUMNS)


@pytest.mark.criterion(2)
def test_criterion_2_cyclic_law():
    def run():
        bad = 0
        boolean = [f for f in enumerate_operations(2, 3, "sharp")]
        rng = random.Random(2)
        ops3 = list(enumerate_operations(3, 3, "sharp"))
        sample = rng.sample(ops3, 1000)
        for f in boolean + sample:
            tag = column_of(f.table, f.n)
            got = tuple(classify(g).ternary_tag for g in cyclic_variants(f))
            if got != TRANSITIONS[tag]:
                bad += 1
        return bad, len(boolean), len(sample)

    (bad, nb, ns), seconds = timed(run)
    assert nb >= 1 and ns >= 1000
    assert bad == 0
    assert seconds < 10.0


@pytest.mark.criterion(3)
def test_criterion_3_swierczkowski_boolean():
    def run():
        sharp = exceptions = 0
        for f in enumerate_operations(2, 4):
            c = classify(f)
            if c.is_sharp:
                sharp += 1
                if not c.is_semiprojection:
                    exceptions += 1
        return sharp, exceptions

    (sharp, exceptions), seconds = timed(run)
    assert exceptions == 0
    assert seconds < 30.0
    oracle = sum(1 for t in itertools.product(range(2), repeat=16) if is_sharp_oracle(t, 2, 4))
    assert oracle == sharp


@pytest.mark.criterion(4)
def test_criterion_4_worked_examples():
    def run():
        out = {}
        out["a"] = is_weighted_polymorphism(fx.NONCOMMUTATIVE_OMEGA, fx.NONCOMMUTATIVE_PHI).ok
        out["b"] = sorted(solve_bruteforce(fx.NONCOMMUTATIVE_INSTANCE).argmin)
        f = fx.RECTANGULAR_BAND
        triples = list(itertools.product(range(4), repeat=3))
        out["c"] = (
            len(triples) == 64
            and all(f(x, x) == x for x in range(4))
            and all(f(f(x, y), z) == f(x, f(y, z)) for x, y, z in triples)
            and all(f(x, f(y, z)) == f(x, z) for x, y, z in triples)
        )
        semis = list(enumerate_operations(3, 3, "semiprojection"))
        out["d_count"] = len(semis)
        out["d"] = all(is_polymorphism(g, fx.NAE3).ok for g in semis)
        return out

    out, seconds = timed(run)
    assert out["a"] is True
    assert out["b"] == [(0, 1), (1, 0)]
    assert out["c"] is True
    assert out["d_count"] == 3 * 728
    assert out["d"] is True
    assert seconds < 20.0


def _random_positive_weighting(rng):
    n = rng.randint(2, 3)
    k = rng.randint(1, 3)
    entries = {}
    for _ in range(rng.randint(1, 5)):
        f = Operation(n, k, tuple(rng.randrange(n) for _ in range(n**k)))
        if not f.is_projection:
            entries[f] = entries.get(f, 0) + Fraction(rng.randint(1, 9), rng.randint(1, 4))
    if not entries:
        entries[Operation(n, k, (1,) * n**k)] = Fraction(1)
    total = sum(entries.values())
    idx = rng.randint(1, k)
    entries[projection(n, k, idx)] = -total
    return Weighting(n, k, entries)


@pytest.mark.criterion(5)
def test_criterion_5_symmetrize_properties():
    rng = random.Random(5)
    for _ in range(200):
        w = _random_positive_weighting(rng)
        assert len(w.support) <= 6
        mu = symmetrize(w)
        n, k = w.n, w.arity
        assert all(mu[projection(n, k, i)] == -1 for i in range(1, k + 1))
        for f, c in mu.items():
            for g in cyclic_variants(f):
                assert mu[g] == c
        closure = {g for f in w.nonprojection_support for g in cyclic_variants(f)}
        assert set(mu.nonprojection_support) == closure


@pytest.mark.criterion(6)
def test_criterion_6_gordan_dichotomy():
    def batch():
        rng = random.Random(6)
        outs = []
        for _ in range(500):
            r, c = rng.randint(1, 6), rng.randint(1, 8)
            rows = [[Fraction(rng.randint(-9, 9), 3) for _ in range(c)] for _ in range(r)]
            A = QMatrix.from_rows(rows)
            o = solve_gordan(A)
            assert verify_outcome(A, o)
            outs.append(o.to_json())
        return outs

    assert batch() == batch()


@pytest.mark.criterion(7)
def test_criterion_7_pipeline_cases():
    expected = ["MajorityOnly", "MajorityOnly", "MajMin21", "Semiprojections(3)", "Semiprojections(4)", "BinaryIdempotent"]
    names = ["pixley-triple", "maj-min-positive-a", "maj-min-balanced", "semiprojection-triple", "semiprojection-4ary", "omega-sub"]

    def run():
        return [find_witness([fx.PIPELINE_CASES[name][0]]) for name in names]

    reports, seconds = timed(run)
    assert [r.case.label for r in reports] == expected
    for r in reports:
        assert replay(r.certificate, r.witness).matches is True
        w = r.witness
        if w.arity == 3 and r.case.kind != "Semiprojections":
            for f, c in w.items():
                if not f.is_projection:
                    tag = column_of(f.table, f.n)
                    assert tag in ("Mj", "Mn"), (r.case.label, tag, c)
        if r.case.kind == "Semiprojections" and w.arity == 3:
            assert all(column_of(f.table, f.n) not in ("P1", "P2", "P3") for f in w.nonprojection_support)
    w = reports[2].witness
    maj = sum(c for f, c in w.items() if column_of(f.table, 2) == "Mj")
    mino = sum(c for f, c in w.items() if column_of(f.table, 2) == "Mn")
    assert (maj, mino) == (2, 1)
    assert seconds < 60.0


@pytest.mark.criterion(8)
def test_criterion_8_balance_values():
    report = find_witness([fx.maj_min(Fraction(5, 2), Fraction(1, 2))])
    w = report.witness
    e = [w[projection(2, 3, i)] for i in (1, 2, 3)]
    assert e == [Fraction(-1, 2), -1, -1]
    assert w[fx.BOOL_MAJORITY] == Fraction(5, 2)
    assert w[fx.BOOL_MINORITY] == 0


@pytest.mark.criterion(9)
def test_criterion_9_crispness():
    def run():
        exceptions = improved = 0
        for values in itertools.product([0, 1, 2, INF], repeat=4):
            phi = WeightedRelation(2, 2, values)
            if not any(not is_inf(v) for v in values):
                continue
            if is_weighted_polymorphism(fx.MAJORITY_ONLY, phi).ok or is_weighted_polymorphism(fx.MINORITY_ONLY, phi).ok:
                improved += 1
                finite = {v for v in values if not is_inf(v)}
                if len(finite) > 1:
                    exceptions += 1
        return exceptions, improved

    (exceptions, improved), seconds = timed(run)
    assert improved > 0
    assert exceptions == 0
    assert seconds < 30.0


@pytest.mark.criterion(10)
def test_criterion_10_core_reduction():
    core = core_reduce(fx.CORE_LANGUAGE)
    assert core.labels == [0, 1]
    rng = random.Random(10)
    for _ in range(50):
        nv = rng.randint(1, 6)
        cons = [Constraint("phi", fx.CORE_UNARY, (rng.randrange(nv),)) for _ in range(rng.randint(0, 8))]
        inst = VcspInstance(3, nv, cons)
        reduced = induced_instance(inst, core)
        assert solve_bruteforce(inst).optimum == solve_bruteforce(reduced).optimum


@pytest.mark.criterion(11)
def test_criterion_11_unary_decomposition():
    for values in itertools.product(range(4), repeat=4):
        phi = WeightedRelation(2, 2, values)
        f = lambda a, b: values[2 * a + b]  # noqa: E731
        rectangle = all(f(a, b) + f(0, 0) == f(a, 0) + f(0, b) for a in (0, 1) for b in (0, 1))
        d = decompose_unary_sum(phi)
        assert d.ok == rectangle
        if d.ok:
            p1, p2 = d.parts
            assert all(p1(a) + p2(b) == f(a, b) for a in (0, 1) for b in (0, 1))

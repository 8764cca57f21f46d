"""Constructive witness search: from a positive weighting in a rigid core to a
certified weighting whose support has one of the canonical shapes.

Every intermediate weighting travels together with a construction-tree node
that rebuilds it from the input generator, so the final witness is replayable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .certificate import Leaf, Node, Superpose, linear, replay, tree_to_json
from .clones import DEFAULT_OP_CAP, CloneSlice, is_rigid_core_slice, support_clone
from .errors import InputError, ResourceError, TheoremContradiction
from .gordan import Kernel, QMatrix, solve_gordan
from .ops import (
    Operation,
    classify,
    cyclic_permutations,
    cyclic_variants,
    identification_tuple,
    identify_args,
    is_sharp,
    projection,
    superpose_op,
    ternary_tag,
)
from .rationals import format_rational
from .weightings import Weighting, permutation_tuple, superpose_weighting, symmetrize, validate_weighting


@dataclass(frozen=True)
class WitnessCase:
    kind: str  # BinaryIdempotent | MajorityOnly | MinorityOnly | MajMin21 | Semiprojections
    arity: Optional[int] = None

    @property
    def label(self) -> str:
        return f"Semiprojections({self.arity})" if self.kind == "Semiprojections" else self.kind


BINARY_IDEMPOTENT = WitnessCase("BinaryIdempotent")
MAJORITY_ONLY = WitnessCase("MajorityOnly")
MINORITY_ONLY = WitnessCase("MinorityOnly")
MAJ_MIN_21 = WitnessCase("MajMin21")


def semiprojections_case(k: int) -> WitnessCase:
    return WitnessCase("Semiprojections", k)


@dataclass
class Stage:
    """A weighting paired with the tree node that constructs it."""

    weighting: Weighting
    node: Node


@dataclass
class PipelineReport:
    witness: Weighting
    case: WitnessCase
    certificate: Node
    generators: list
    trace: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "case": self.case.label,
            "witness": self.witness.to_json(),
            "certificate": tree_to_json(self.certificate, self.generators),
            "trace": self.trace,
        }


def _ops_json(ops: Sequence[Operation]) -> list:
    return [list(op.table) for op in ops]


# ------------------------------------------------------------------ helpers


def symmetrize_stage(st: Stage, trace: Optional[list] = None) -> Stage:
    """Cyclic sum followed by scaling, recorded in the tree."""
    w = st.weighting
    n, k = w.n, w.arity
    parts = [Superpose(st.node, tuple(permutation_tuple(n, pi))) for pi in cyclic_permutations(k)]
    total = linear([(1, p) for p in parts])
    e1 = total.value[projection(n, k, 1)]
    if not w.is_positive() or e1 >= 0:
        raise InputError("symmetrize needs a positive weighting")
    node = linear([(1 / abs(e1), total)])
    out = symmetrize(w)
    if node.value != out:  # pragma: no cover - both compute the same sum
        raise TheoremContradiction("symmetrization tree disagrees with direct evaluation")
    if trace is not None:
        trace.append({"step": "symmetrize", "arity": k, "scale": format_rational(1 / abs(e1))})
    return Stage(out, node)


def _positive_support(w: Weighting) -> list[Operation]:
    return w.nonprojection_support


def _class_total(w: Weighting, pred) -> Fraction:
    return sum((c for op, c in w.items() if not op.is_projection and pred(op)), Fraction(0))


def _is_pixley(op: Operation) -> bool:
    t = ternary_tag(op)
    return t is not None and t[0] == "P"


def _is_semi3(op: Operation) -> bool:
    t = ternary_tag(op)
    return t is not None and t[0] == "S"


def _is_majority(op: Operation) -> bool:
    return ternary_tag(op) == "Mj"


def _is_minority(op: Operation) -> bool:
    return ternary_tag(op) == "Mn"


def related_triple(op: Operation) -> tuple[Operation, Operation, Operation]:
    """The Pixley (or semiprojection) triple of types 1, 2, 3 containing op."""
    by_type = {}
    for v in cyclic_variants(op):
        tag = ternary_tag(v)
        if tag is None or tag[0] not in "PS":
            raise InputError(f"{op!r} is not a Pixley operation or ternary semiprojection")
        by_type[int(tag[1])] = v
    return (by_type[1], by_type[2], by_type[3])


# ------------------------------------------------------------- arity descent


def reduce_to_sharp(st: Stage, trace: Optional[list] = None) -> Stage:
    """Identify arguments until every positively weighted operation is sharp.

    Takes the lexicographically first pair (i, j) that sends some support
    operation to a non-projection; the result is re-symmetrized after each
    identification.
    """
    trace = trace if trace is not None else []
    while True:
        w = st.weighting
        support = _positive_support(w)
        if all(is_sharp(f) for f in support):
            return st
        k = w.arity
        if k <= 2:
            raise InputError(
                "a non-sharp operation survived at arity 2; the support is not idempotent"
            )
        pair = next(
            (i, j)
            for i in range(1, k)
            for j in range(i + 1, k + 1)
            if any(not identify_args(f, i, j).is_projection for f in support)
        )
        gs = tuple(identification_tuple(k, pair[0], pair[1], w.n))
        node = Superpose(st.node, gs)
        trace.append({"step": "identify", "positions": list(pair), "arity": k - 1})
        st = symmetrize_stage(Stage(node.value, node), trace)


# ------------------------------------------------------------ Steps I and II


def _local_triples(w: Weighting, member, cap: int) -> list[tuple]:
    """Smallest family of related triples containing the supported ones and
    closed under superposing supported operations with a family member."""
    seen: set = set()
    triples: list = []
    queue = []
    for op in _positive_support(w):
        if member(op):
            t = related_triple(op)
            if t not in seen:
                seen.add(t)
                queue.append(t)
    support = [op for op, c in w.items() if c > 0]
    while queue:
        t = queue.pop()
        triples.append(t)
        for o in support:
            r = superpose_op(o, t)
            if member(r):
                rt = related_triple(r)
                if rt not in seen:
                    seen.add(rt)
                    queue.append(rt)
                    if len(seen) > cap:
                        raise ResourceError(f"related-triple closure exceeded {cap} triples", len(seen))
    return sorted(triples)


def _slice_triples(c: CloneSlice, member) -> tuple[list, list]:
    layer = c.layer(3)
    ops = [op for op in layer if member(op)]
    triples = sorted({related_triple(op) for op in ops})
    return triples, ops


def _eliminate(
    st: Stage,
    member,
    name: str,
    trace: list,
    clone: Optional[CloneSlice],
    cap: int,
) -> Stage:
    """Solve the Gordan system over related triples and return the kernel combination."""
    w = st.weighting
    n = w.n
    ident = tuple(projection(n, 3, i) for i in (1, 2, 3))
    if clone is not None:
        triples, row_ops = _slice_triples(clone, member)
        source = f"slice(max_arity={clone.max_arity})"
    else:
        triples, row_ops = _local_triples(w, member, cap), []
        source = "local-closure"
    columns = [ident] + triples
    images = [w if c == ident else superpose_weighting(w, c) for c in columns]
    rows = set(row_ops)
    for t in triples:
        rows.update(t)
    for img in images:
        rows.update(op for op, c in img.items() if member(op))
    rows = sorted(rows)
    A = QMatrix.from_rows([[img[p] for img in images] for p in rows])
    outcome = solve_gordan(A)
    entry = {
        "step": f"{name}-elimination",
        "branch": "gordan",
        "source": source,
        "rows": len(rows),
        "columns": len(columns),
    }
    if not isinstance(outcome, Kernel):
        trace.append({**entry, "outcome": outcome.to_json()})
        raise TheoremContradiction(
            f"Gordan system for {name} elimination returned the dual alternative",
            dump={"weighting": w.to_json(), "matrix": A.to_json(), "outcome": outcome.to_json()},
        )
    x = outcome.x
    terms = []
    for xc, c in zip(x, columns):
        if xc:
            terms.append((xc, st.node if c == ident else Superpose(st.node, c)))
    node = linear(terms)
    mu = node.value
    entry["x"] = [format_rational(v) for v in x]
    entry["support_columns"] = [_ops_json(c) for xc, c in zip(x, columns) if xc]
    trace.append(entry)
    leftover = [op for op, c in mu.items() if member(op)]
    dump = {"weighting": w.to_json(), "result": mu.to_json(), "matrix": A.to_json()}
    if leftover:
        raise TheoremContradiction(f"{name} weight survived the elimination", dump)
    if not validate_weighting(mu).valid:
        raise TheoremContradiction(f"{name} elimination produced an invalid weighting", dump)
    if not mu.is_positive():
        raise TheoremContradiction(f"{name} elimination left no positive non-projection weight", dump)
    return symmetrize_stage(Stage(mu, node), trace)


def eliminate_pixley(
    st: Stage, trace: Optional[list] = None, clone: Optional[CloneSlice] = None, cap: int = DEFAULT_OP_CAP
) -> Stage:
    """Return a symmetrized weighting with zero weight on every Pixley operation."""
    trace = trace if trace is not None else []
    w = st.weighting
    _require_normal_ternary(w)
    support = _positive_support(w)
    pix = [op for op in support if _is_pixley(op)]
    if not pix:
        return st
    if len(pix) == len(support):
        n = w.n
        e1, e2, e3 = (projection(n, 3, i) for i in (1, 2, 3))
        terms = [(1, st.node)]
        for p in pix:
            slot = {"P1": (e1, e2, p), "P2": (e1, p, e3), "P3": (p, e2, e3)}[ternary_tag(p)]
            terms.append((w[p], Superpose(st.node, slot)))
        node = linear(terms)
        mu = node.value
        trace.append({"step": "pixley-elimination", "branch": "pixley-only", "terms": len(pix)})
        if not validate_weighting(mu).valid or any(_is_pixley(op) for op in mu):
            raise TheoremContradiction(
                "Pixley-only construction did not yield a majority weighting",
                dump={"weighting": w.to_json(), "result": mu.to_json()},
            )
        return Stage(mu, node)
    return _eliminate(st, _is_pixley, "pixley", trace, clone, cap)


def eliminate_semiprojections(
    st: Stage, trace: Optional[list] = None, clone: Optional[CloneSlice] = None, cap: int = DEFAULT_OP_CAP
) -> tuple[Stage, Optional[WitnessCase]]:
    """Return (stage, None) with zero semiprojection weight, or the input with the
    Semiprojections(3) verdict when only semiprojections carry positive weight."""
    trace = trace if trace is not None else []
    w = st.weighting
    _require_normal_ternary(w)
    if any(_is_pixley(op) for op in w):
        raise InputError("semiprojection elimination expects zero weight on Pixley operations")
    support = _positive_support(w)
    semis = [op for op in support if _is_semi3(op)]
    if not semis:
        return st, None
    if len(semis) == len(support):
        trace.append({"step": "semiprojection-elimination", "branch": "semiprojection-only"})
        return st, semiprojections_case(3)
    return _eliminate(st, _is_semi3, "semiprojection", trace, clone, cap), None


def _require_normal_ternary(w: Weighting):
    if w.arity != 3:
        raise InputError("this step works on ternary weightings")
    if any(w[projection(w.n, 3, i)] != -1 for i in (1, 2, 3)):
        raise InputError("this step expects weight -1 on each ternary projection")


# ------------------------------------------------------------------ balance


def balance_majority_minority(st: Stage, trace: Optional[list] = None) -> tuple[Stage, WitnessCase]:
    trace = trace if trace is not None else []
    w = st.weighting
    _require_normal_ternary(w)
    support = _positive_support(w)
    other = [op for op in support if not (_is_majority(op) or _is_minority(op))]
    if other:
        raise InputError(f"support contains {classify(other[0]).label}, not only majority/minority")
    maj = [op for op in support if _is_majority(op)]
    mino = [op for op in support if _is_minority(op)]
    maj_total = sum((w[op] for op in maj), Fraction(0))
    min_total = sum((w[op] for op in mino), Fraction(0))
    a = maj_total - 2
    entry = {
        "step": "balance",
        "majority_total": format_rational(maj_total),
        "minority_total": format_rational(min_total),
        "a": format_rational(a),
    }
    if not mino:
        trace.append(entry)
        return st, MAJORITY_ONLY
    if not maj:
        trace.append(entry)
        return st, MINORITY_ONLY
    if a == 0:
        trace.append(entry)
        return st, MAJ_MIN_21
    n = w.n
    e1 = projection(n, 3, 1)
    if a > 0:
        terms = [(1, st.node)] + [(w[f] / a, Superpose(st.node, (e1, e1, f))) for f in mino]
        node = linear(terms)
        trace.append(entry)
        return Stage(node.value, node), MAJORITY_ONLY
    b = -a
    terms = [(1, st.node)] + [(w[f] / b, Superpose(st.node, (e1, f, f))) for f in maj]
    node = linear(terms)
    raw = node.value
    entry["raw_e1"] = format_rational(raw[e1])
    trace.append(entry)
    return symmetrize_stage(Stage(raw, node), trace), MINORITY_ONLY


# -------------------------------------------------------------------- driver


def check_case(w: Weighting, case: WitnessCase) -> list[str]:
    """Problems with w as a witness for case; empty when it fits."""
    problems = []
    report = validate_weighting(w)
    if not report.valid:
        problems.append("not a valid weighting")
    if not report.positive:
        problems.append("not positive")
    if any(c > 0 for c in w.projection_weights()):
        problems.append("positive weight on a projection")
    support = _positive_support(w)
    kind = case.kind
    for f in support:
        cl = classify(f)
        ok = {
            "BinaryIdempotent": f.arity == 2 and cl.is_idempotent,
            "MajorityOnly": cl.is_majority,
            "MinorityOnly": cl.is_minority,
            "MajMin21": cl.is_majority or cl.is_minority,
            "Semiprojections": cl.is_semiprojection and f.arity == case.arity,
        }[kind]
        if not ok:
            problems.append(f"{cl.label} operation {list(f.table)} does not fit {case.label}")
    if kind == "MajMin21":
        if _class_total(w, _is_majority) != 2 or _class_total(w, _is_minority) != 1:
            problems.append("MajMin21 totals are not 2 and 1")
    return problems


def find_witness(
    generators: Sequence[Weighting],
    max_arity: Optional[int] = None,
    op_cap: int = DEFAULT_OP_CAP,
    clone: Optional[CloneSlice] = None,
) -> PipelineReport:
    """Run the full pipeline on the first positive generator.

    Steps I and II range over a slice of the support clone when ``clone`` is
    given or ``max_arity`` >= 3; otherwise over the smallest family of related
    triples the proof needs.
    """
    generators = list(generators)
    if not generators:
        raise InputError("no generators given")
    n = generators[0].n
    if any(g.n != n for g in generators):
        raise InputError("generators must share one domain")
    trace: list = []
    rigid = is_rigid_core_slice(support_clone(generators, 1, op_cap, n))
    trace.append({"step": "rigid-core-check", "rigid_core": rigid.rigid})
    if not rigid:
        raise InputError(
            "support clone is not a rigid core: extra unary operation "
            + str(list(rigid.extra_unary[0].table))
        )
    start = next((g for g in generators if g.is_positive()), None)
    if start is None:
        raise InputError("no positive generator: some generator must put positive weight on a non-projection")
    if clone is None and max_arity is not None and max_arity >= 3:
        clone = support_clone(generators, 3, op_cap, n)
    if clone is not None:
        trace.append({"step": "slice", "max_arity": clone.max_arity, "size": clone.size()})
    st = symmetrize_stage(Stage(start, Leaf(start, "generator")), trace)
    st = reduce_to_sharp(st, trace)
    k = st.weighting.arity
    if k == 2:
        case = BINARY_IDEMPOTENT
    elif k >= 4:
        case = semiprojections_case(k)
    else:
        st = eliminate_pixley(st, trace, clone, op_cap)
        if st.weighting[projection(n, 3, 1)] != -1:
            st = symmetrize_stage(st, trace)
        st, verdict = eliminate_semiprojections(st, trace, clone, op_cap)
        if verdict is not None:
            case = verdict
        else:
            st, case = balance_majority_minority(st, trace)
    problems = check_case(st.weighting, case)
    if problems:
        raise TheoremContradiction(
            f"witness does not fit {case.label}: " + "; ".join(problems),
            dump={"witness": st.weighting.to_json(), "trace": trace},
        )
    result = replay(st.node, st.weighting)
    if not result.matches:  # pragma: no cover - nodes cache the same values
        raise TheoremContradiction("certificate replay does not reproduce the witness")
    trace.append({"step": "done", "case": case.label})
    return PipelineReport(st.weighting, case, st.node, [start], trace)

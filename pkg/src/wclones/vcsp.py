"""Weighted relations, VCSP instances and (weighted) polymorphism checks.

Everything here is exact brute force over small domains.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .clones import CloneSlice
from .errors import InputError, ResourceError
from .gordan import linprog_exact, verify_farkas
from .ops import Operation, enumerate_operations, projection, tuple_index, tuples
from .rationals import INF, format_rational, is_inf, to_ext_rational, to_rational
from .weightings import Weighting, validate_weighting

DEFAULT_BRUTE_CAP = 2 * 10**7
DEFAULT_POOL_CAP = 10**6

ExtRational = Union[Fraction, type(INF)]


@dataclass(frozen=True)
class WeightedRelation:
    """phi: D^m -> Q u {inf}, values in lexicographic tuple order."""

    n: int
    arity: int
    values: tuple

    def __post_init__(self):
        if self.n < 1 or self.arity < 1:
            raise InputError("weighted relations need n >= 1 and arity >= 1")
        vals = tuple(to_ext_rational(v) for v in self.values)
        if len(vals) != self.n**self.arity:
            raise InputError(f"{len(vals)} values given, expected {self.n}^{self.arity}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, n: int, arity: int, fn) -> "WeightedRelation":
        return cls(n, arity, tuple(fn(*t) for t in tuples(n, arity)))

    def __call__(self, *t: int):
        return self.values[tuple_index(self.n, t)]

    def feasible_tuples(self) -> list[tuple[int, ...]]:
        return [t for t, v in zip(tuples(self.n, self.arity), self.values) if not is_inf(v)]

    def is_feasible(self, t: Sequence[int]) -> bool:
        return not is_inf(self(*t))

    @property
    def is_finite_valued(self) -> bool:
        return not any(is_inf(v) for v in self.values)

    def to_json(self) -> dict:
        return {"arity": self.arity, "values": [format_rational(v) for v in self.values]}


def feasibility_relation(phi: WeightedRelation) -> WeightedRelation:
    return WeightedRelation(phi.n, phi.arity, tuple(INF if is_inf(v) else Fraction(0) for v in phi.values))


def scale_relation(phi: WeightedRelation, c) -> WeightedRelation:
    """c * phi for c >= 0, with 0 * inf = inf."""
    c = to_rational(c)
    if c < 0:
        raise InputError("relations may only be scaled by nonnegative constants")
    return WeightedRelation(phi.n, phi.arity, tuple(INF if is_inf(v) else c * v for v in phi.values))


def add_constant(phi: WeightedRelation, c) -> WeightedRelation:
    c = to_rational(c)
    return WeightedRelation(phi.n, phi.arity, tuple(INF if is_inf(v) else v + c for v in phi.values))


def restrict(phi: WeightedRelation, labels: Sequence[int]) -> WeightedRelation:
    """Restriction to the labels, relabelled 0..len(labels)-1 in the given order."""
    m = len(labels)
    return WeightedRelation(
        m, phi.arity, tuple(phi(*(labels[i] for i in t)) for t in tuples(m, phi.arity))
    )


@dataclass(frozen=True)
class Language:
    n: int
    relations: dict

    def __post_init__(self):
        for name, phi in self.relations.items():
            if phi.n != self.n:
                raise InputError(f"relation {name!r} is over a domain of size {phi.n}, not {self.n}")

    def __iter__(self):
        return iter(self.relations.values())

    def __len__(self):
        return len(self.relations)

    def to_json(self) -> dict:
        return {"domain": self.n, "relations": {k: v.to_json() for k, v in self.relations.items()}}


@dataclass(frozen=True)
class Constraint:
    name: str
    relation: WeightedRelation
    scope: tuple


@dataclass(frozen=True)
class VcspInstance:
    n: int
    num_vars: int
    constraints: list = field(default_factory=list)

    def __post_init__(self):
        for c in self.constraints:
            if len(c.scope) != c.relation.arity:
                raise InputError(f"constraint on {c.name!r}: scope length != arity {c.relation.arity}")
            if any(not 0 <= v < self.num_vars for v in c.scope):
                raise InputError(f"constraint on {c.name!r}: variable index out of range")
            if c.relation.n != self.n:
                raise InputError(f"constraint on {c.name!r}: relation domain mismatch")

    def evaluate(self, assignment: Sequence[int]):
        total = Fraction(0)
        for c in self.constraints:
            v = c.relation(*(assignment[i] for i in c.scope))
            if is_inf(v):
                return INF
            total += v
        return total

    def to_json(self) -> dict:
        rels = {}
        for c in self.constraints:
            rels.setdefault(c.name, c.relation.to_json())
        return {
            "domain": self.n,
            "num_vars": self.num_vars,
            "relations": rels,
            "constraints": [{"rel": c.name, "scope": list(c.scope)} for c in self.constraints],
        }


# --------------------------------------------------------------- polymorphisms


@dataclass
class PolymorphismResult:
    ok: bool
    witness: Optional[tuple] = None  # the violating tuple family
    image: Optional[tuple] = None

    def __bool__(self):
        return self.ok


def _families(phi: WeightedRelation, k: int):
    return itertools.product(phi.feasible_tuples(), repeat=k)


def _image_indices(f: Operation, family: Sequence[tuple], n: int) -> int:
    """Table index of f(x_1, ..., x_k) computed coordinatewise, read as an m-tuple."""
    out = 0
    for col in zip(*family):
        out = out * n + f.table[tuple_index(n, col)]
    return out


def is_polymorphism(f: Operation, phi: WeightedRelation) -> PolymorphismResult:
    if f.n != phi.n:
        raise InputError("operation and relation domains differ")
    vals = phi.values
    for fam in _families(phi, f.arity):
        idx = _image_indices(f, fam, phi.n)
        if is_inf(vals[idx]):
            return PolymorphismResult(False, fam, f.apply(fam))
    return PolymorphismResult(True)


@dataclass
class ImprovementResult:
    ok: bool
    kind: str  # "ok" | "not-polymorphism" | "inequality"
    operation: Optional[Operation] = None
    witness: Optional[tuple] = None
    value: Optional[Fraction] = None
    checked_pool: int = 0

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        out = {"improved": self.ok, "kind": self.kind, "checked_pool_operations": self.checked_pool}
        if self.operation is not None:
            out["operation"] = self.operation.to_json()
        if self.witness is not None:
            out["witness"] = [list(t) for t in self.witness]
        if self.value is not None:
            out["value"] = format_rational(self.value)
        return out


def is_weighted_polymorphism(
    w: Weighting, phi: WeightedRelation, pool: Optional[CloneSlice] = None
) -> ImprovementResult:
    """Check sum_f w(f) phi(f(x_1..x_k)) <= 0 over all families from dom(phi).

    Every weighted operation, and every pool operation when a slice is given,
    must first be a polymorphism of phi.
    """
    if w.n != phi.n:
        raise InputError("weighting and relation domains differ")
    ops = [op for op, c in w.items()]
    pool_ops = []
    if pool is not None:
        for k in range(1, pool.max_arity + 1):
            pool_ops.extend(pool.layer(k))
    for op in list(ops) + [op for op in pool_ops if op not in set(ops)]:
        res = is_polymorphism(op, phi)
        if not res:
            return ImprovementResult(False, "not-polymorphism", op, res.witness, checked_pool=len(pool_ops))
    vals = phi.values
    items = list(w.items())
    for fam in _families(phi, w.arity):
        total = Fraction(0)
        for op, c in items:
            total += c * vals[_image_indices(op, fam, phi.n)]
        if total > 0:
            return ImprovementResult(False, "inequality", None, fam, total, len(pool_ops))
    return ImprovementResult(True, "ok", checked_pool=len(pool_ops))


# ------------------------------------------------------------------ solving


def _check_cap(count: int, cap: int, what: str):
    if count > cap:
        raise ResourceError(f"{what}: {count} assignments exceed cap {cap}", count)


@dataclass
class SolveResult:
    optimum: object
    argmin: list

    def to_json(self) -> dict:
        return {"optimum": format_rational(self.optimum), "argmin": [list(a) for a in self.argmin]}


def solve_bruteforce(inst: VcspInstance, cap: int = DEFAULT_BRUTE_CAP, max_solutions: Optional[int] = None) -> SolveResult:
    _check_cap(inst.n**inst.num_vars, cap, "solve_bruteforce")
    best = None
    argmin: list = []
    for a in itertools.product(range(inst.n), repeat=inst.num_vars):
        v = inst.evaluate(a)
        if best is None or v < best:
            best, argmin = v, [a]
        elif v == best and (max_solutions is None or len(argmin) < max_solutions):
            argmin.append(a)
    return SolveResult(best, argmin)


def express(inst: VcspInstance, free_vars: Sequence[int], cap: int = DEFAULT_BRUTE_CAP) -> WeightedRelation:
    """phi(y) = min over the remaining variables of the instance objective."""
    free_vars = list(free_vars)
    if not free_vars:
        raise InputError("express needs at least one free variable")
    if len(set(free_vars)) != len(free_vars) or any(not 0 <= v < inst.num_vars for v in free_vars):
        raise InputError("free variables must be distinct valid indices")
    _check_cap(inst.n**inst.num_vars, cap, "express")
    n, m = inst.n, len(free_vars)
    table: list = [INF] * (n**m)
    for a in itertools.product(range(n), repeat=inst.num_vars):
        v = inst.evaluate(a)
        idx = tuple_index(n, [a[i] for i in free_vars])
        if v < table[idx]:
            table[idx] = v
    return WeightedRelation(n, m, tuple(table))


# -------------------------------------------------------- weighted polymorphisms


def polymorphism_pool(
    lang: Language, arity: int, pool: Union[None, str, CloneSlice] = "all", cap: int = DEFAULT_POOL_CAP
) -> list[Operation]:
    """k-ary operations from the chosen source that preserve every relation of lang."""
    if isinstance(pool, CloneSlice):
        candidates: Iterable[Operation] = pool.layer(arity)
    else:
        name = pool or "all"
        if name not in ("all", "idempotent"):
            raise InputError(f"unknown pool {name!r}; use 'all', 'idempotent' or a slice")
        candidates = enumerate_operations(lang.n, arity, None if name == "all" else "idempotent", cap=cap)
    return [f for f in candidates if all(is_polymorphism(f, phi) for phi in lang)]


def _improvement_rows(lang: Language, pool: Sequence[Operation], arity: int) -> list[tuple]:
    rows = set()
    for phi in lang:
        vals = phi.values
        for fam in _families(phi, arity):
            rows.add(tuple(vals[_image_indices(f, fam, phi.n)] for f in pool))
    return sorted(rows)


@dataclass
class WpolSearch:
    weighting: Optional[Weighting]
    pool_size: int
    certificate: dict

    def to_json(self) -> dict:
        return {
            "found": self.weighting is not None,
            "weighting": None if self.weighting is None else self.weighting.to_json(),
            "pool_size": self.pool_size,
            "certificate": self.certificate,
        }


def _wpol_lp(lang: Language, pool: Sequence[Operation], arity: int, anchor: Optional[Operation]):
    """Exact feasibility LP for weightings over ``pool`` improving every relation.

    Non-projection weights are variables >= 0; projection weights are split
    into positive and negative parts. The scale is fixed by total
    non-projection weight 1 (or weight 1 on ``anchor``).
    """
    cols = []  # (operation, sign)
    for f in pool:
        cols.append((f, 1))
        if f.is_projection:
            cols.append((f, -1))
    nv = len(cols)
    pos = {f: i for i, f in enumerate(pool)}
    rows = _improvement_rows(lang, pool, arity)
    A_ub = [[s * r[pos[f]] for f, s in cols] for r in rows]
    b_ub = [Fraction(0)] * len(A_ub)
    A_eq = [[Fraction(s) for f, s in cols]]
    if anchor is None:
        A_eq.append([Fraction(0 if f.is_projection else 1) for f, s in cols])
    else:
        A_eq.append([Fraction(1 if f == anchor else 0) for f, s in cols])
    b_eq = [Fraction(0), Fraction(1)]
    res = linprog_exact([Fraction(0)] * nv, A_eq, b_eq, A_ub, b_ub)
    if res.status == "optimal":
        entries: dict = {}
        for (f, s), v in zip(cols, res.x):
            if v:
                entries[f] = entries.get(f, Fraction(0)) + s * v
        n = pool[0].n
        return Weighting(n, arity, entries), {"rows": len(rows), "columns": nv}
    ok = verify_farkas(A_eq, b_eq, A_ub, b_ub, res.duals_eq, res.duals_ub)
    cert = {
        "infeasible": True,
        "rows": len(rows),
        "columns": nv,
        "farkas_verified": ok,
        "y_eq": [format_rational(v) for v in res.duals_eq],
        "y_ub": [format_rational(v) for v in res.duals_ub],
    }
    if not ok:  # pragma: no cover - the simplex duals are exact
        raise RuntimeError("Farkas certificate failed verification")
    return None, cert


def find_weighted_polymorphism(
    lang: Language, arity: int, pool: Union[None, str, CloneSlice] = "idempotent", cap: int = DEFAULT_POOL_CAP
) -> WpolSearch:
    """A positive k-ary weighting over the polymorphism pool improving all of lang, or
    a verified certificate that none exists over that pool."""
    ops = polymorphism_pool(lang, arity, pool, cap)
    if not any(not f.is_projection for f in ops):
        return WpolSearch(None, len(ops), {"infeasible": True, "reason": "pool has no non-projection"})
    w, cert = _wpol_lp(lang, ops, arity, None)
    if w is not None:
        for phi in lang:
            check = is_weighted_polymorphism(w, phi)
            if not check:  # pragma: no cover - LP constraints encode the check
                raise RuntimeError("LP solution failed the improvement check")
        report = validate_weighting(w)
        cert = {**cert, "valid": report.valid, "positive": report.positive}
    return WpolSearch(w, len(ops), cert)


# --------------------------------------------------------------------- cores


@dataclass
class CoreResult:
    language: Language
    labels: list  # original labels of the reduced domain, in new-label order
    steps: list  # each: {"operation": table, "range": original labels, "weighting": ...}

    @property
    def changed(self) -> bool:
        return bool(self.steps)

    def to_json(self) -> dict:
        return {
            "core": self.language.to_json(),
            "labels": self.labels,
            "steps": self.steps,
        }


def _reduction_step(lang: Language):
    n = lang.n
    unary = [f for f in enumerate_operations(n, 1) if all(is_polymorphism(f, phi) for phi in lang)]
    candidates = sorted(
        (f for f in unary if 2 <= len(set(f.table)) < n),
        key=lambda f: (len(set(f.table)), f.table),
    )
    for f in candidates:
        w, _ = _wpol_lp(lang, unary, 1, f)
        if w is not None:
            return f, w
    return None, None


def core_reduce(lang: Language) -> CoreResult:
    """Restrict the language along non-bijective unary weighted polymorphisms
    of smallest range until none remains.

    Ranges are kept at two labels or more.
    """
    labels = list(range(lang.n))
    steps = []
    while True:
        f, w = _reduction_step(lang)
        if f is None:
            return CoreResult(lang, labels, steps)
        rng = sorted(set(f.table))
        steps.append(
            {
                "operation": list(f.table),
                "range": [labels[i] for i in rng],
                "weighting": w.to_json(),
            }
        )
        lang = Language(len(rng), {k: restrict(phi, rng) for k, phi in lang.relations.items()})
        labels = [labels[i] for i in rng]


def induced_instance(inst: VcspInstance, core: CoreResult) -> VcspInstance:
    """The same constraints over the reduced relations of ``core``."""
    rels = core.language.relations
    return VcspInstance(
        len(core.labels),
        inst.num_vars,
        [Constraint(c.name, rels[c.name], c.scope) for c in inst.constraints],
    )


# ---------------------------------------------------------- unary decomposition


@dataclass
class Decomposition:
    parts: Optional[list]
    violation: Optional[tuple] = None  # (x, y, i) with 1-based i

    @property
    def ok(self) -> bool:
        return self.parts is not None

    def to_json(self) -> dict:
        if self.ok:
            return {"decomposable": True, "parts": [p.to_json() for p in self.parts]}
        x, y, i = self.violation
        return {"decomposable": False, "violation": {"x": list(x), "y": list(y), "i": i}}


def _swap(t: tuple, i: int, v: int) -> tuple:
    return t[:i] + (v,) + t[i + 1:]


def decompose_unary_sum(phi: WeightedRelation) -> Decomposition:
    """Split a finite-valued phi into unary parts, or report a rectangle violation."""
    if not phi.is_finite_valued:
        raise InputError("unary decomposition needs a finite-valued relation")
    n, m = phi.n, phi.arity
    all_t = tuples(n, m)
    for x in all_t:
        for y in all_t:
            for i in range(m):
                if phi(*x) + phi(*y) != phi(*_swap(x, i, y[i])) + phi(*_swap(y, i, x[i])):
                    return Decomposition(None, (x, y, i + 1))
    r = (0,) * m
    base = phi(*r)
    parts = []
    for i in range(m):
        shift = 0 if i == 0 else base
        parts.append(WeightedRelation(n, 1, tuple(phi(*_swap(r, i, d)) - shift for d in range(n))))
    return Decomposition(parts)

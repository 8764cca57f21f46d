"""Exact-rational weightings: validity, linear combinations, superposition,
cyclic symmetrization."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .errors import InputError, ProperError, ValidityError
from .ops import (
    Operation,
    classify,
    cyclic_permutations,
    projection,
    superpose_op,
)
from .rationals import format_rational, to_rational


class Weighting:
    """A sparse map from k-ary operations to rationals (absent means 0).

    Instances may be improper (negative weight on a non-projection) or fail
    the zero-sum condition; ``validate_weighting`` reports on both. Improper
    values occur legitimately as intermediates of a construction.
    """

    __slots__ = ("n", "arity", "_entries")

    def __init__(self, n: int, arity: int, entries: Optional[Mapping[Operation, object]] = None):
        self.n = n
        self.arity = arity
        clean: dict[Operation, Fraction] = {}
        for op, w in (entries or {}).items():
            if op.arity != arity or op.n != n:
                raise InputError(
                    f"operation {op!r} does not match weighting arity {arity} / domain {n}"
                )
            w = to_rational(w)
            if w:
                clean[op] = clean.get(op, Fraction(0)) + w
        self._entries = {op: w for op, w in sorted(clean.items()) if w}

    @classmethod
    def zero(cls, n: int, arity: int) -> "Weighting":
        return cls(n, arity)

    def __getitem__(self, op: Operation) -> Fraction:
        return self._entries.get(op, Fraction(0))

    def __iter__(self):
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)

    def items(self):
        return self._entries.items()

    def __eq__(self, other):
        if not isinstance(other, Weighting):
            return NotImplemented
        return (self.n, self.arity, self._entries) == (other.n, other.arity, other._entries)

    def __hash__(self):
        return hash((self.n, self.arity, tuple(self._entries.items())))

    def __repr__(self):
        body = ", ".join(f"{op!r}: {format_rational(w)}" for op, w in self._entries.items())
        return f"Weighting(n={self.n}, arity={self.arity}, {{{body}}})"

    def __add__(self, other: "Weighting") -> "Weighting":
        _check_compatible(self, other)
        merged = dict(self._entries)
        for op, w in other.items():
            merged[op] = merged.get(op, Fraction(0)) + w
        return Weighting(self.n, self.arity, merged)

    def scaled(self, c) -> "Weighting":
        c = to_rational(c)
        return Weighting(self.n, self.arity, {op: c * w for op, w in self._entries.items()})

    @property
    def total(self) -> Fraction:
        return sum(self._entries.values(), Fraction(0))

    @property
    def support(self) -> list[Operation]:
        """Operations with strictly positive weight."""
        return [op for op, w in self._entries.items() if w > 0]

    @property
    def nonprojection_support(self) -> list[Operation]:
        return [op for op in self.support if not op.is_projection]

    def is_positive(self) -> bool:
        return bool(self.nonprojection_support)

    def projection_weights(self) -> list[Fraction]:
        return [self[projection(self.n, self.arity, i)] for i in range(1, self.arity + 1)]

    def to_json(self) -> dict:
        return {
            "domain": self.n,
            "arity": self.arity,
            "entries": [
                {"op": op.to_json(), "weight": format_rational(w)}
                for op, w in self._entries.items()
            ],
        }


def _check_compatible(a: Weighting, b: Weighting):
    if a.arity != b.arity:
        raise InputError(f"arity mismatch: {a.arity} vs {b.arity}")
    if a.n != b.n:
        raise InputError(f"domain mismatch: {a.n} vs {b.n}")


@dataclass
class ValidityReport:
    zero_sum: bool
    total: Fraction
    negative_nonprojections: list[Operation] = field(default_factory=list)
    positive: bool = False
    commutative_support: Optional[bool] = None

    @property
    def valid(self) -> bool:
        return self.zero_sum and not self.negative_nonprojections

    def to_json(self) -> dict:
        out = {
            "valid": self.valid,
            "zero_sum": self.zero_sum,
            "total": format_rational(self.total),
            "negative_nonprojections": [op.to_json() for op in self.negative_nonprojections],
            "positive": self.positive,
        }
        if self.commutative_support is not None:
            out["commutative_support"] = self.commutative_support
        return out


def validate_weighting(w: Weighting) -> ValidityReport:
    negatives = [op for op, v in w.items() if v < 0 and not op.is_projection]
    commutative = None
    if w.arity == 2:
        commutative = all(classify(op).is_commutative for op in w.nonprojection_support)
    return ValidityReport(
        zero_sum=w.total == 0,
        total=w.total,
        negative_nonprojections=negatives,
        positive=w.is_positive(),
        commutative_support=commutative,
    )


def is_valid(w: Weighting) -> bool:
    return validate_weighting(w).valid


def combine(terms: Iterable[tuple[object, Weighting]]) -> Weighting:
    """Nonnegative linear combination; the result must be a valid weighting."""
    terms = list(terms)
    if not terms:
        raise InputError("combine needs at least one term")
    first = terms[0][1]
    out = Weighting.zero(first.n, first.arity)
    for c, w in terms:
        c = to_rational(c)
        if c < 0:
            raise InputError(f"negative coefficient {format_rational(c)}")
        _check_compatible(first, w)
        out = out + w.scaled(c)
    bad = validate_weighting(out).negative_nonprojections
    if bad:
        raise ValidityError("combination places negative weight on a non-projection", bad[0])
    return out


def superpose_weighting(
    w: Weighting, gs: Sequence[Operation], require_proper: bool = False
) -> Weighting:
    """w[g_1..g_k]: each entry's weight moves to f[g_1..g_k], collisions summed."""
    if len(gs) != w.arity:
        raise InputError(f"superposition needs {w.arity} operations, got {len(gs)}")
    for g in gs:
        if g.n != w.n:
            raise InputError("operations must share the weighting's domain")
    if not gs:
        raise InputError("empty superposition")
    ell = gs[0].arity
    pushed: dict[Operation, Fraction] = {}
    for f, c in w.items():
        g = superpose_op(f, gs)
        pushed[g] = pushed.get(g, Fraction(0)) + c
    out = Weighting(w.n, ell, pushed)
    if require_proper:
        bad = [op for op, v in out.items() if v < 0 and not op.is_projection]
        if bad:
            raise ProperError("improper superposition", bad[0])
    return out


def permutation_tuple(n: int, pi: Sequence[int]) -> list[Operation]:
    k = len(pi)
    return [projection(n, k, p) for p in pi]


def cyclic_sum(w: Weighting) -> Weighting:
    """Sum of w[e_pi(1), ..., e_pi(k)] over the k cyclic permutations."""
    out = Weighting.zero(w.n, w.arity)
    for pi in cyclic_permutations(w.arity):
        out = out + superpose_weighting(w, permutation_tuple(w.n, pi))
    return out


def symmetrize(w: Weighting) -> Weighting:
    """Cyclic-invariant positive weighting with weight -1 on every projection."""
    if not w.is_positive():
        raise InputError("symmetrize needs a positive weighting")
    s = cyclic_sum(w)
    e1 = s[projection(w.n, w.arity, 1)]
    if e1 >= 0:
        raise InputError(
            "cyclic sum has nonnegative projection weight; input is not a zero-sum weighting"
        )
    return s.scaled(1 / abs(e1))

"""Finite operations on the domain {0, ..., n-1}.

An operation of arity k is stored as its value table in lexicographic input
order, first argument most significant: entry ``sum(t[i] * n**(k-1-i))`` holds
``f(t[0], ..., t[k-1])``.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable, Iterator, Optional, Sequence, Union

from .errors import InputError, ResourceError

DEFAULT_ENUM_CAP = 10**6

TERNARY_TAGS = ("Mj", "S1", "S2", "S3", "P1", "P2", "P3", "Mn")

# Values on the inputs (x,x,y), (x,y,x), (y,x,x), in that order.
TERNARY_PATTERNS = {
    "Mj": "xxx",
    "S1": "xxy",
    "S2": "xyx",
    "S3": "yxx",
    "P1": "xyy",
    "P2": "yxy",
    "P3": "yyx",
    "Mn": "yyy",
}
_PATTERN_TAGS = {v: k for k, v in TERNARY_PATTERNS.items()}

# Class of f^pi for the cyclic permutations (1,2,3), (2,3,1), (3,1,2).
CYCLIC_TRANSITIONS = {
    "Mj": ("Mj", "Mj", "Mj"),
    "S1": ("S1", "S2", "S3"),
    "S2": ("S2", "S3", "S1"),
    "S3": ("S3", "S1", "S2"),
    "P1": ("P1", "P3", "P2"),
    "P2": ("P2", "P1", "P3"),
    "P3": ("P3", "P2", "P1"),
    "Mn": ("Mn", "Mn", "Mn"),
}


@lru_cache(maxsize=None)
def tuples(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    """All of D^k in table order."""
    return tuple(itertools.product(range(n), repeat=k))


def tuple_index(n: int, t: Sequence[int]) -> int:
    idx = 0
    for v in t:
        idx = idx * n + v
    return idx


@dataclass(frozen=True, order=True)
class Operation:
    n: int
    arity: int
    table: tuple[int, ...]

    def __post_init__(self):
        if self.n < 2:
            raise InputError(f"domain size must be at least 2, got {self.n}")
        if self.arity < 1:
            raise InputError(f"arity must be positive, got {self.arity}")
        if not isinstance(self.table, tuple):
            object.__setattr__(self, "table", tuple(self.table))
        if len(self.table) != self.n**self.arity:
            raise InputError(
                f"table length {len(self.table)} != {self.n}^{self.arity}"
            )
        for v in self.table:
            if not (isinstance(v, int) and 0 <= v < self.n):
                raise InputError(f"invalid label {v!r} for domain of size {self.n}")

    def __call__(self, *args: int) -> int:
        return self.table[tuple_index(self.n, args)]

    def __repr__(self):
        p = self.projection_index
        if p is not None:
            return f"e{p}^({self.arity})[n={self.n}]"
        return f"Operation(n={self.n}, arity={self.arity}, table={''.join(map(str, self.table)) if self.n <= 10 else self.table})"

    @classmethod
    def from_function(cls, n: int, arity: int, fn: Callable[..., int]) -> "Operation":
        return cls(n, arity, tuple(fn(*t) for t in tuples(n, arity)))

    @cached_property
    def projection_index(self) -> Optional[int]:
        """1-based i when this is e_i, else None."""
        for i in range(self.arity):
            if self.table == _projection_table(self.n, self.arity, i + 1):
                return i + 1
        return None

    @property
    def is_projection(self) -> bool:
        return self.projection_index is not None

    @cached_property
    def is_idempotent(self) -> bool:
        step = sum(self.n**i for i in range(self.arity))
        return all(self.table[x * step] == x for x in range(self.n))

    def apply(self, rows: Sequence[Sequence[int]]) -> tuple[int, ...]:
        """Apply coordinatewise to k tuples of equal length m."""
        return tuple(self(*col) for col in zip(*rows))

    def to_json(self) -> dict:
        return {"domain": self.n, "arity": self.arity, "table": list(self.table)}


@lru_cache(maxsize=None)
def _projection_table(n: int, k: int, i: int) -> tuple[int, ...]:
    return tuple(t[i - 1] for t in tuples(n, k))


def projection(n: int, arity: int, i: int) -> Operation:
    if not 1 <= i <= arity:
        raise InputError(f"projection index {i} out of range for arity {arity}")
    return Operation(n, arity, _projection_table(n, arity, i))


def projections(n: int, arity: int) -> list[Operation]:
    return [projection(n, arity, i) for i in range(1, arity + 1)]


def superpose_op(f: Operation, gs: Sequence[Operation]) -> Operation:
    """The superposition f[g_1, ..., g_k]."""
    if len(gs) != f.arity:
        raise InputError(f"superposition needs {f.arity} inner operations, got {len(gs)}")
    if not gs:
        raise InputError("empty superposition")
    ell = gs[0].arity
    for g in gs:
        if g.arity != ell:
            raise InputError("inner operations must share one arity")
        if g.n != f.n:
            raise InputError("operations must share one domain")
    n = f.n
    ft = f.table
    idx = [0] * (n**ell)
    for g in gs:
        idx = [i * n + v for i, v in zip(idx, g.table)]
    return Operation(n, ell, tuple(ft[i] for i in idx))


@lru_cache(maxsize=None)
def _identify_map(n: int, k: int, i: int, j: int) -> tuple[int, ...]:
    out = []
    for t in tuples(n, k - 1):
        full = list(t)
        full.insert(j - 1, t[i - 1])
        out.append(tuple_index(n, full))
    return tuple(out)


def identify_args(f: Operation, i: int, j: int) -> Operation:
    """Equate argument j with argument i (1-based, i < j); arity drops by one."""
    if f.arity < 2:
        raise InputError("argument identification needs arity at least 2")
    if not (1 <= i < j <= f.arity):
        raise InputError(f"positions must satisfy 1 <= i < j <= {f.arity}, got ({i}, {j})")
    ft = f.table
    return Operation(f.n, f.arity - 1, tuple(ft[m] for m in _identify_map(f.n, f.arity, i, j)))


def identification_tuple(k: int, i: int, j: int, n: int) -> list[Operation]:
    """Projections (arity k-1) realizing identify_args(., i, j) as a superposition."""
    gs = []
    for p in range(1, k + 1):
        if p < j:
            q = p
        elif p == j:
            q = i
        else:
            q = p - 1
        gs.append(projection(n, k - 1, q))
    return gs


def cyclic_permutations(k: int) -> list[tuple[int, ...]]:
    """The k cyclic permutations as 1-based images (pi(1), ..., pi(k)), identity first."""
    return [tuple((i + s) % k + 1 for i in range(k)) for s in range(k)]


def permute(f: Operation, pi: Sequence[int]) -> Operation:
    """f^pi(x_1..x_k) = f(x_pi(1), ..., x_pi(k))."""
    return superpose_op(f, [projection(f.n, f.arity, p) for p in pi])


def cyclic_variants(f: Operation) -> list[Operation]:
    return [permute(f, pi) for pi in cyclic_permutations(f.arity)]


@dataclass(frozen=True)
class OpClass:
    arity: int
    projection_index: Optional[int]
    is_idempotent: bool
    is_sharp: bool
    is_near_unanimity: bool
    is_conservative: bool
    is_commutative: Optional[bool]
    ternary_tag: Optional[str]
    semiprojection_type: Optional[int]

    @property
    def is_projection(self) -> bool:
        return self.projection_index is not None

    @property
    def is_majority(self) -> bool:
        return self.ternary_tag == "Mj"

    @property
    def is_minority(self) -> bool:
        return self.ternary_tag == "Mn"

    @property
    def is_pixley(self) -> bool:
        return self.ternary_tag in ("P1", "P2", "P3")

    @property
    def is_semiprojection(self) -> bool:
        return self.semiprojection_type is not None

    @property
    def label(self) -> str:
        if self.is_projection:
            return f"Projection({self.projection_index})"
        if self.ternary_tag:
            return self.ternary_tag
        if self.is_semiprojection:
            return f"Semiprojection({self.semiprojection_type})"
        return "Other"

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "arity": self.arity,
            "is_projection": self.is_projection,
            "projection_index": self.projection_index,
            "is_idempotent": self.is_idempotent,
            "is_sharp": self.is_sharp,
            "is_near_unanimity": self.is_near_unanimity,
            "is_conservative": self.is_conservative,
            "is_commutative": self.is_commutative,
            "ternary_tag": self.ternary_tag,
            "semiprojection_type": self.semiprojection_type,
        }


def _near_unanimity(f: Operation) -> bool:
    k, n = f.arity, f.n
    if k < 3:
        return False
    for x in range(n):
        for y in range(n):
            for p in range(k):
                args = [x] * k
                args[p] = y
                if f(*args) != x:
                    return False
    return True


def _conservative(f: Operation) -> bool:
    return all(v in t for t, v in zip(tuples(f.n, f.arity), f.table))


def _commutative(f: Operation) -> Optional[bool]:
    if f.arity != 2:
        return None
    return all(f(x, y) == f(y, x) for x in range(f.n) for y in range(f.n))


def _identifications(f: Operation) -> dict[tuple[int, int], Optional[int]]:
    """Projection index (in reduced coordinates) of every identification, or None."""
    return {
        (i, j): identify_args(f, i, j).projection_index
        for i, j in itertools.combinations(range(1, f.arity + 1), 2)
    }


def _semiprojection_witness(k: int, idents: dict) -> Optional[int]:
    candidates = set(range(1, k + 1))
    for (i, j), r in idents.items():
        # reduced coordinate r covers original positions {i, j} when r == i
        if r == i:
            covered = {i, j}
        elif r < j:
            covered = {r}
        else:
            covered = {r + 1}
        candidates &= covered
        if not candidates:
            return None
    return min(candidates)


def _ternary_tag(idents: dict) -> str:
    a = "x" if idents[(1, 2)] == 1 else "y"   # f(x,x,y)
    b = "x" if idents[(1, 3)] == 1 else "y"   # f(x,y,x)
    c = "x" if idents[(2, 3)] == 2 else "y"   # f(y,x,x) = g(y, x)
    return _PATTERN_TAGS[a + b + c]


def classify(f: Operation) -> OpClass:
    proj = f.projection_index
    sharp = False
    tag = None
    semi = None
    if f.arity >= 2 and proj is None:
        idents = _identifications(f)
        sharp = all(r is not None for r in idents.values())
        if sharp and f.arity >= 3:
            semi = _semiprojection_witness(f.arity, idents)
            if f.arity == 3:
                tag = _ternary_tag(idents)
    return OpClass(
        arity=f.arity,
        projection_index=proj,
        is_idempotent=f.is_idempotent,
        is_sharp=sharp,
        is_near_unanimity=_near_unanimity(f),
        is_conservative=_conservative(f),
        is_commutative=_commutative(f),
        ternary_tag=tag,
        semiprojection_type=semi,
    )


def is_sharp(f: Operation) -> bool:
    if f.arity < 2 or f.is_projection:
        return False
    return all(r is not None for r in _identifications(f).values())


def ternary_tag(f: Operation) -> Optional[str]:
    """Cheap tag lookup used on hot paths; None for non-sharp or non-ternary f."""
    if f.arity != 3 or f.is_projection:
        return None
    idents = _identifications(f)
    if any(r is None for r in idents.values()):
        return None
    return _ternary_tag(idents)


# ---------------------------------------------------------------- enumeration

_IDEMPOTENT_FAMILY = {
    "idempotent",
    "idempotent-non-projection",
    "projection",
    "sharp",
    "near-unanimity",
    "conservative",
    "semiprojection",
    "majority",
    "minority",
    "pixley",
    *TERNARY_TAGS,
}

_TERNARY_SHARP_FILTERS = {
    "sharp": TERNARY_TAGS,
    "majority": ("Mj",),
    "minority": ("Mn",),
    "pixley": ("P1", "P2", "P3"),
    "semiprojection": ("S1", "S2", "S3"),
    **{t: (t,) for t in TERNARY_TAGS},
}

FILTERS: dict[str, Callable[[OpClass], bool]] = {
    "all": lambda c: True,
    "idempotent": lambda c: c.is_idempotent,
    "idempotent-non-projection": lambda c: c.is_idempotent and not c.is_projection,
    "projection": lambda c: c.is_projection,
    "sharp": lambda c: c.is_sharp,
    "near-unanimity": lambda c: c.is_near_unanimity,
    "conservative": lambda c: c.is_conservative,
    "semiprojection": lambda c: c.is_semiprojection,
    "majority": lambda c: c.is_majority,
    "minority": lambda c: c.is_minority,
    "pixley": lambda c: c.is_pixley,
    **{t: (lambda c, t=t: c.ternary_tag == t) for t in TERNARY_TAGS},
}


def _ternary_template(n: int, tag: str) -> list[Optional[int]]:
    pattern = TERNARY_PATTERNS[tag]
    out: list[Optional[int]] = []
    for a, b, c in tuples(n, 3):
        if a == b == c:
            out.append(a)
        elif a == b:
            out.append(a if pattern[0] == "x" else c)
        elif a == c:
            out.append(a if pattern[1] == "x" else b)
        elif b == c:
            out.append(b if pattern[2] == "x" else a)
        else:
            out.append(None)
    return out


def _fill(template: list[Optional[int]], n: int) -> Iterator[tuple[int, ...]]:
    free = [i for i, v in enumerate(template) if v is None]
    base = list(template)
    for values in itertools.product(range(n), repeat=len(free)):
        for i, v in zip(free, values):
            base[i] = v
        yield tuple(base)


def _candidate_streams(n: int, arity: int, name: Optional[str]):
    """(count, list of ascending table streams) after pruning for the named filter."""
    size = n**arity
    if name is not None and arity == 3 and name in _TERNARY_SHARP_FILTERS:
        templates = [_ternary_template(n, t) for t in _TERNARY_SHARP_FILTERS[name]]
        count = sum(n ** sum(v is None for v in tpl) for tpl in templates)
        return count, [_fill(tpl, n) for tpl in templates]
    if name is not None and name in _IDEMPOTENT_FAMILY:
        step = sum(n**i for i in range(arity))
        tpl: list[Optional[int]] = [None] * size
        for x in range(n):
            tpl[x * step] = x
        return n ** (size - n), [_fill(tpl, n)]
    return n**size, [itertools.product(range(n), repeat=size)]


def count_candidates(n: int, arity: int, filter: Optional[str] = None) -> int:
    return _candidate_streams(n, arity, filter)[0]


def enumerate_operations(
    n: int,
    arity: int,
    filter: Union[None, str, Callable[[OpClass], bool]] = None,
    cap: int = DEFAULT_ENUM_CAP,
) -> Iterator[Operation]:
    """Yield every operation passing ``filter`` once, in ascending table order.

    Named filters (see ``FILTERS``) prune the search space before the cap is
    applied; a callable filter is checked against the full space.
    """
    if n < 2 or arity < 1:
        raise InputError("need domain size >= 2 and arity >= 1")
    if isinstance(filter, str):
        if filter not in FILTERS:
            raise InputError(f"unknown filter {filter!r}; choose from {sorted(FILTERS)}")
        name, pred = filter, FILTERS[filter]
    else:
        name, pred = None, filter
    count, streams = _candidate_streams(n, arity, name)
    if count > cap:
        raise ResourceError(
            f"{count} candidate operations (n={n}, arity={arity}) exceed cap {cap}", count
        )
    merged = streams[0] if len(streams) == 1 else heapq.merge(*streams)
    for table in merged:
        f = Operation(n, arity, table)
        if pred is None or pred(classify(f)):
            yield f

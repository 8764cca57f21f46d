"""Bounded-arity slices of the clone generated by a set of operations."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import InputError, ResourceError
from .ops import Operation, projection

DEFAULT_OP_CAP = 200_000
# argument tuples evaluated per slice before giving up
DEFAULT_EVAL_CAP = 20_000_000
_BATCH_ROWS = 1 << 18


@dataclass(frozen=True)
class CloneSlice:
    n: int
    max_arity: int
    layers: dict  # arity -> sorted tuple of Operations
    generators: tuple

    def layer(self, k: int) -> tuple[Operation, ...]:
        if not 1 <= k <= self.max_arity:
            raise InputError(f"slice covers arities 1..{self.max_arity}, not {k}")
        return self.layers[k]

    def __contains__(self, op: Operation) -> bool:
        return op.n == self.n and op.arity <= self.max_arity and op in set(self.layers[op.arity])

    def size(self) -> int:
        return sum(len(v) for v in self.layers.values())

    def to_json(self) -> dict:
        return {
            "domain": self.n,
            "max_arity": self.max_arity,
            "generators": [g.to_json() for g in self.generators],
            "layers": {str(k): [list(op.table) for op in ops] for k, ops in sorted(self.layers.items())},
        }


def _word_weights(n: int, width: int) -> np.ndarray:
    """Matrix turning a table row into exact base-n int64 words."""
    per_word = 1
    while n ** (per_word + 1) < 2**62:
        per_word += 1
    words = -(-width // per_word)
    w = np.zeros((width, words), dtype=np.int64)
    for c in range(width):
        word, pos = divmod(c, per_word)
        w[c, word] = n ** (per_word - 1 - pos)
    return w


def _unique_rows(codes: np.ndarray) -> np.ndarray:
    """Indices of the first occurrence of each distinct row of ``codes``."""
    if codes.shape[1] == 1:
        return np.unique(codes[:, 0], return_index=True)[1]
    order = np.lexsort(codes.T[::-1])
    s = codes[order]
    keep = np.ones(len(s), dtype=bool)
    keep[1:] = np.any(s[1:] != s[:-1], axis=1)
    return order[keep]


def _close_layer(
    n: int, ell: int, gens: Sequence[Operation], cap: int, eval_cap: int, budget: list
) -> list[tuple[int, ...]]:
    """ell-ary layer: projections closed under the generators, applied pointwise.

    Semi-naive: each round only evaluates tuples that use at least one table
    discovered in the previous round. The last argument position is
    vectorized over its whole pool.
    """
    known = [projection(n, ell, i).table for i in range(1, ell + 1)]
    seen = set(known)
    rows = np.array(known, dtype=np.int64)
    weights = _word_weights(n, rows.shape[1])
    # once every candidate table is present nothing more can be found
    free = n**ell - (n if all(g.is_idempotent for g in gens) else 0)
    full = n**free
    frontier_start = 0
    while frontier_start < len(known) < full:
        old, frontier, everything = rows[:frontier_start], rows[frontier_start:], rows
        frontier_start = len(known)
        found: list = []
        batch: list = []
        pending = 0

        def flush():
            nonlocal pending
            if not batch:
                return
            block = np.concatenate(batch)
            for r in block[_unique_rows(block @ weights)]:
                t = tuple(r.tolist())
                if t not in seen:
                    seen.add(t)
                    found.append(t)
                    budget[0] += 1
                    if budget[0] > cap:
                        raise ResourceError(
                            f"clone slice exceeded op_cap={cap} while closing arity {ell}",
                            budget[0],
                        )
            batch.clear()
            pending = 0

        for g in gens:
            k = g.arity
            gt = np.array(g.table, dtype=np.int64)
            for first in range(k):
                pools = [old] * first + [frontier] + [everything] * (k - first - 1)
                work = 1
                for pool in pools:
                    work *= len(pool)
                if not work:
                    continue
                budget[1] += work
                if budget[1] > eval_cap:
                    raise ResourceError(
                        f"clone slice exceeded eval_cap={eval_cap} superpositions at arity {ell}",
                        budget[1],
                    )
                last = pools[-1]
                for prefix in itertools.product(*(range(len(q)) for q in pools[:-1])):
                    base = np.zeros(rows.shape[1], dtype=np.int64)
                    for q, i in zip(pools, prefix):
                        base = base * n + q[i]
                    batch.append(gt[base * n + last])
                    pending += len(last)
                    if pending >= _BATCH_ROWS:
                        flush()
        flush()
        if found:
            known.extend(found)
            rows = np.vstack([rows, np.array(found, dtype=np.int64)])
    return known


def generate_clone(
    generators: Iterable[Operation],
    max_arity: int,
    op_cap: int = DEFAULT_OP_CAP,
    n: Optional[int] = None,
    eval_cap: int = DEFAULT_EVAL_CAP,
) -> CloneSlice:
    """Arities 1..max_arity of the clone generated by ``generators``.

    Each layer is the closure of its projections under pointwise application
    of the generators, which yields the same layers as closing the whole
    slice under superposition. Both the number of operations (``op_cap``)
    and the number of argument tuples tried (``eval_cap``) are bounded.
    """
    gens = tuple(sorted(set(generators)))
    if gens:
        doms = {g.n for g in gens}
        if len(doms) != 1:
            raise InputError("generators must share one domain")
        dom = doms.pop()
        if n is not None and n != dom:
            raise InputError(f"generators live on a domain of size {dom}, not {n}")
        n = dom
    if n is None:
        raise InputError("domain size is required when there are no generators")
    if max_arity < 1:
        raise InputError("max_arity must be at least 1")
    # projections add nothing to the closure
    active = [g for g in gens if not g.is_projection]
    budget = [0, 0]
    layers = {}
    for ell in range(1, max_arity + 1):
        tables = _close_layer(n, ell, active, op_cap, eval_cap, budget)
        budget[0] += ell
        layers[ell] = tuple(sorted(Operation(n, ell, t) for t in tables))
    return CloneSlice(n, max_arity, layers, gens)


def support_clone(
    ws, max_arity: int, op_cap: int = DEFAULT_OP_CAP, n: Optional[int] = None, eval_cap: int = DEFAULT_EVAL_CAP
) -> CloneSlice:
    """Slice of the clone generated by every operation with nonzero weight."""
    ws = list(ws)
    ops = {op for w in ws for op, c in w.items() if c}
    if n is None and ws:
        n = ws[0].n
    return generate_clone(ops, max_arity, op_cap, n, eval_cap)


@dataclass
class RigidCoreReport:
    rigid: bool
    extra_unary: list
    generators_idempotent: bool

    def __bool__(self):
        return self.rigid

    def to_json(self) -> dict:
        return {
            "rigid_core": self.rigid,
            "extra_unary": [op.to_json() for op in self.extra_unary],
            "generators_idempotent": self.generators_idempotent,
        }


def is_rigid_core_slice(c: CloneSlice) -> RigidCoreReport:
    unary = c.layer(1)
    extra = [op for op in unary if not op.is_projection]
    return RigidCoreReport(
        rigid=not extra,
        extra_unary=extra,
        generators_idempotent=all(g.is_idempotent for g in c.generators),
    )

"""Hypothesis strategies and small brute-force oracles shared by the tests."""

import itertools
from fractions import Fraction

from hypothesis import strategies as st

from wclones.ops import Operation, projection
from wclones.weightings import Weighting


def operations(n=None, arity=None, max_n=3, max_arity=3):
    @st.composite
    def build(draw):
        dn = n or draw(st.integers(2, max_n))
        k = arity or draw(st.integers(1, max_arity))
        table = draw(st.lists(st.integers(0, dn - 1), min_size=dn**k, max_size=dn**k))
        return Operation(dn, k, tuple(table))

    return build()


def idempotent_op(draw, n, k):
    table = []
    for t in itertools.product(range(n), repeat=k):
        table.append(t[0] if len(set(t)) == 1 else draw(st.integers(0, n - 1)))
    return Operation(n, k, tuple(table))


@st.composite
def positive_weightings(draw, max_n=3, max_arity=3, max_support=6, idempotent=False):
    """Valid weightings with at least one positive non-projection entry."""
    n = draw(st.integers(2, max_n))
    k = draw(st.integers(1 if not idempotent else 2, max_arity))
    size = draw(st.integers(1, max_support))
    entries: dict = {}
    for _ in range(size):
        if idempotent:
            f = idempotent_op(draw, n, k)
        else:
            f = Operation(n, k, tuple(draw(st.lists(st.integers(0, n - 1), min_size=n**k, max_size=n**k))))
        if f.is_projection:
            continue
        entries[f] = entries.get(f, 0) + Fraction(draw(st.integers(1, 6)), draw(st.integers(1, 4)))
    if not entries:
        # e_1 changed on (0, ..., 0, 1), or on 0 when unary; never a projection
        table = list(projection(n, k, 1).table)
        table[1 if k >= 2 else 0] = 1
        entries[Operation(n, k, tuple(table))] = Fraction(1)
    total = sum(entries.values())
    shares = [draw(st.integers(0, 3)) for _ in range(k)]
    if not any(shares):
        shares[0] = 1
    s = sum(shares)
    for i, part in enumerate(shares, start=1):
        if part:
            entries[projection(n, k, i)] = -total * Fraction(part, s)
    return Weighting(n, k, entries)


def rationals(lo=-3, hi=3, max_den=3):
    return st.builds(Fraction, st.integers(lo * max_den, hi * max_den), st.integers(1, max_den)).filter(
        lambda q: lo <= q <= hi
    )

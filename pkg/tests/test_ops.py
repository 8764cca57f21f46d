import itertools

import pytest
from hypothesis import given, strategies as st

from helpers import operations
from wclones import fixtures as fx
from wclones.errors import InputError, ResourceError
from wclones.ops import (
    CYCLIC_TRANSITIONS,
    Operation,
    classify,
    count_candidates,
    cyclic_permutations,
    cyclic_variants,
    enumerate_operations,
    identification_tuple,
    identify_args,
    is_sharp,
    permute,
    projection,
    projections,
    superpose_op,
    ternary_tag,
    tuple_index,
    tuples,
)

SHARP3 = list(enumerate_operations(3, 3, "sharp"))


def test_tables_are_lexicographic_first_argument_major():
    assert tuples(2, 2) == ((0, 0), (0, 1), (1, 0), (1, 1))
    assert tuple_index(3, (2, 0, 1)) == 19
    assert projection(2, 2, 1).table == (0, 0, 1, 1)
    assert projection(2, 2, 2).table == (0, 1, 0, 1)


def test_operation_rejects_bad_tables():
    with pytest.raises(InputError):
        Operation(2, 2, (0, 1, 1))
    with pytest.raises(InputError):
        Operation(2, 1, (0, 2))


def test_boolean_examples_classify():
    assert classify(fx.BOOL_MAJORITY).label == "Mj"
    assert classify(fx.BOOL_MINORITY).label == "Mn"
    assert classify(fx.BOOL_MIN).is_commutative
    assert classify(projection(3, 4, 2)).label == "Projection(2)"
    assert classify(fx.SEMI4).semiprojection_type == 1
    assert classify(fx.PIXLEY3).ternary_tag == "P1"
    assert classify(fx.MEDIAN3).is_near_unanimity


def test_binary_idempotent_non_projection_is_sharp():
    c = classify(fx.RECTANGULAR_BAND)
    assert c.is_idempotent and not c.is_projection and c.is_sharp
    assert not c.is_commutative


def test_identify_args_examples():
    # majority with x_2 := x_1 gives the first projection
    assert identify_args(fx.BOOL_MAJORITY, 1, 2) == projection(2, 2, 1)
    assert identify_args(fx.BOOL_MINORITY, 1, 2) == projection(2, 2, 2)
    with pytest.raises(InputError):
        identify_args(fx.BOOL_MAJORITY, 2, 2)
    with pytest.raises(InputError):
        identify_args(projection(2, 1, 1), 1, 2)


def test_cyclic_permutations_identity_first():
    assert cyclic_permutations(3) == [(1, 2, 3), (2, 3, 1), (3, 1, 2)]
    assert cyclic_variants(fx.PIXLEY3)[0] == fx.PIXLEY3


def test_enumeration_counts():
    assert count_candidates(2, 2) == 16
    assert sum(1 for _ in enumerate_operations(2, 2, "idempotent")) == 4
    assert sum(1 for _ in enumerate_operations(3, 2, "idempotent")) == 3**6
    counts = {tag: sum(1 for _ in enumerate_operations(3, 3, tag)) for tag in CYCLIC_TRANSITIONS}
    assert counts == {"Mj": 729, "Mn": 729, "P1": 729, "P2": 729, "P3": 729, "S1": 728, "S2": 728, "S3": 728}


def test_enumeration_order_and_cap():
    tables = [f.table for f in enumerate_operations(2, 2)]
    assert tables == sorted(tables)
    with pytest.raises(ResourceError):
        list(enumerate_operations(3, 3, cap=100))
    with pytest.raises(InputError):
        list(enumerate_operations(2, 2, "nonsense"))


def test_named_filters_match_predicates():
    for name in ("sharp", "semiprojection", "majority", "minority", "pixley", "conservative"):
        fast = [f.table for f in enumerate_operations(2, 3, name)]
        slow = [f.table for f in enumerate_operations(2, 3) if _slow_filter(name, f)]
        assert fast == slow, name


def _slow_filter(name, f):
    c = classify(f)
    return {
        "sharp": c.is_sharp,
        "semiprojection": c.is_semiprojection,
        "majority": c.is_majority,
        "minority": c.is_minority,
        "pixley": c.is_pixley,
        "conservative": c.is_conservative,
    }[name]


@given(operations())
def test_superposition_with_projections_is_identity(f):
    assert superpose_op(f, projections(f.n, f.arity)) == f


@given(operations(n=2, arity=2), operations(n=2, arity=3), operations(n=2, arity=3))
def test_projection_picks_inner_operation(f, g, h):
    assert superpose_op(projection(2, 2, 1), [g, h]) == g
    assert superpose_op(projection(2, 2, 2), [g, h]) == h
    # outer f evaluated pointwise
    s = superpose_op(f, [g, h])
    for t in tuples(2, 3):
        assert s(*t) == f(g(*t), h(*t))


@given(operations(n=2, arity=2), operations(n=2, arity=2), operations(n=2, arity=2), operations(n=2, arity=2))
def test_superposition_is_associative(f, g, h, u):
    left = superpose_op(superpose_op(f, [g, h]), [u, u])
    right = superpose_op(f, [superpose_op(g, [u, u]), superpose_op(h, [u, u])])
    assert left == right


@given(operations(max_arity=4, max_n=2), st.data())
def test_identify_matches_superposition(f, data):
    if f.arity < 2:
        return
    i = data.draw(st.integers(1, f.arity - 1))
    j = data.draw(st.integers(i + 1, f.arity))
    assert identify_args(f, i, j) == superpose_op(f, identification_tuple(f.arity, i, j, f.n))


@given(st.sampled_from(SHARP3))
def test_cyclic_transition_law(f):
    tag = ternary_tag(f)
    assert tuple(ternary_tag(g) for g in cyclic_variants(f)) == CYCLIC_TRANSITIONS[tag]


@given(operations(max_n=3, max_arity=3))
def test_permute_round_trip(f):
    k = f.arity
    pis = cyclic_permutations(k)
    # applying the shift k times returns f
    g = f
    for _ in range(k):
        g = permute(g, pis[1 % k] if k > 1 else pis[0])
    assert g == f


@given(operations(max_n=3, max_arity=3))
def test_sharp_means_all_identifications_are_projections(f):
    if f.arity < 2:
        return
    idents_proj = all(
        identify_args(f, i, j).is_projection for i, j in itertools.combinations(range(1, f.arity + 1), 2)
    )
    assert is_sharp(f) == (not f.is_projection and idents_proj)


def test_operation_json_round_trip():
    f = fx.PIXLEY3
    data = f.to_json()
    assert Operation(data["domain"], data["arity"], tuple(data["table"])) == f

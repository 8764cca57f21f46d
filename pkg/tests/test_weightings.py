from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from helpers import operations, positive_weightings
from wclones import fixtures as fx
from wclones.errors import InputError, ProperError, ValidityError
from wclones.ops import Operation, cyclic_variants, projection, superpose_op
from wclones.weightings import (
    Weighting,
    combine,
    cyclic_sum,
    superpose_weighting,
    symmetrize,
    validate_weighting,
)


def pad(w, before, after):
    """The same weighting viewed at arity before + k + after, ignoring extra arguments."""
    k = w.arity + before + after
    inner = [projection(w.n, k, before + i) for i in range(1, w.arity + 1)]
    return Weighting(w.n, k, {superpose_op(f, inner): c for f, c in w.items()})


def test_omega_sub_is_valid_and_positive():
    r = validate_weighting(fx.OMEGA_SUB)
    assert r.valid and r.positive and r.commutative_support
    assert fx.OMEGA_SUB.total == 0


def test_noncommutative_weighting_report():
    r = validate_weighting(fx.NONCOMMUTATIVE_OMEGA)
    assert r.valid and r.positive and not r.commutative_support


def test_invalid_weightings_are_reported():
    w = Weighting(2, 2, {fx.BOOL_MIN: -1, projection(2, 2, 1): 1})
    r = validate_weighting(w)
    assert not r.valid and r.negative_nonprojections == [fx.BOOL_MIN]
    assert not validate_weighting(Weighting(2, 2, {fx.BOOL_MIN: 1})).zero_sum


def test_weighting_rejects_mixed_arity():
    with pytest.raises(InputError):
        Weighting(2, 2, {fx.BOOL_MAJORITY: 1})


def test_combine_rejects_negative_coefficients():
    with pytest.raises(InputError):
        combine([(-1, fx.OMEGA_SUB)])
    out = combine([(2, fx.OMEGA_SUB), (Fraction(1, 2), fx.OMEGA_SUB)])
    assert out == fx.OMEGA_SUB.scaled(Fraction(5, 2))


def test_improper_superposition_detected():
    e1, e2 = projection(2, 2, 1), projection(2, 2, 2)
    w = Weighting(2, 2, {fx.BOOL_MIN: 2, e1: -1, e2: -1})
    # w[max, e_1]: e_1 is sent to max with weight -1
    with pytest.raises(ProperError) as exc:
        superpose_weighting(w, [fx.BOOL_MAX, e1], require_proper=True)
    assert isinstance(exc.value, ValidityError)
    assert exc.value.operation == fx.BOOL_MAX
    loose = superpose_weighting(w, [fx.BOOL_MAX, e1])
    assert loose == Weighting(2, 2, {fx.BOOL_MAX: -1, e1: 1})
    # absorption makes omega_sub[min, e_1] vanish entirely
    assert len(superpose_weighting(fx.OMEGA_SUB, [fx.BOOL_MIN, e1], require_proper=True)) == 0


def test_symmetrize_omega_sub_is_fixed():
    assert symmetrize(fx.OMEGA_SUB) == fx.OMEGA_SUB


def test_symmetrize_rejects_non_positive():
    with pytest.raises(InputError):
        symmetrize(Weighting.zero(2, 2))


def test_symmetrize_scales_by_absolute_value():
    w = Weighting(2, 2, {fx.BOOL_MIN: 2, projection(2, 2, 1): -2})
    mu = symmetrize(w)
    assert mu[projection(2, 2, 1)] == mu[projection(2, 2, 2)] == -1
    assert mu[fx.BOOL_MIN] == 2


@given(positive_weightings())
def test_symmetrize_properties(w):
    mu = symmetrize(w)
    k = w.arity
    assert all(mu[projection(w.n, k, i)] == -1 for i in range(1, k + 1))
    assert all(mu[g] == c for f, c in mu.items() for g in cyclic_variants(f))
    closure = {g for f in w.nonprojection_support for g in cyclic_variants(f)}
    assert set(mu.nonprojection_support) == closure
    assert validate_weighting(mu).valid


@given(positive_weightings(), st.data())
def test_superposition_preserves_zero_sum(w, data):
    ell = data.draw(st.integers(1, 3))
    gs = [data.draw(operations(n=w.n, arity=ell)) for _ in range(w.arity)]
    assert superpose_weighting(w, gs).total == 0


@given(positive_weightings(max_n=2), positive_weightings(max_n=2), st.integers(0, 5), st.integers(0, 5))
def test_combine_preserves_zero_sum(a, b, c1, c2):
    if (a.n, a.arity) != (b.n, b.arity) or c1 + c2 == 0:
        return
    assert combine([(c1, a), (c2, b)]).total == 0


@given(positive_weightings(), st.data())
def test_projection_superposition_is_proper(w, data):
    ell = data.draw(st.integers(1, 3))
    gs = [projection(w.n, ell, data.draw(st.integers(1, ell))) for _ in range(w.arity)]
    out = superpose_weighting(w, gs, require_proper=True)
    assert validate_weighting(out).valid


@given(positive_weightings(max_n=2), positive_weightings(max_n=2), st.data())
def test_padded_sum_identity(w1, w2, data):
    n = w1.n
    if w2.n != n:
        return
    ell = data.draw(st.integers(1, 2))
    g1 = [data.draw(operations(n=n, arity=ell)) for _ in range(w1.arity)]
    g2 = [data.draw(operations(n=n, arity=ell)) for _ in range(w2.arity)]
    c1 = data.draw(st.integers(0, 4))
    c2 = data.draw(st.integers(0, 4))
    separate = superpose_weighting(w1, g1).scaled(c1) + superpose_weighting(w2, g2).scaled(c2)
    padded = pad(w1, 0, w2.arity).scaled(c1) + pad(w2, w1.arity, 0).scaled(c2)
    assert superpose_weighting(padded, g1 + g2) == separate


@given(positive_weightings())
def test_cyclic_sum_multiplies_projection_mass(w):
    s = cyclic_sum(w)
    assert s.total == 0
    assert sum(s.projection_weights()) == w.arity * sum(w.projection_weights())


def test_json_round_trip():
    from wclones.io import weighting_from_json

    for w in (fx.OMEGA_SUB, fx.NONCOMMUTATIVE_OMEGA, fx.SEMI4_WEIGHTING):
        assert weighting_from_json(w.to_json()) == w


def test_zero_entries_are_dropped():
    w = Weighting(2, 2, {fx.BOOL_MIN: 0, projection(2, 2, 1): 0})
    assert len(w) == 0 and w.support == []
    assert not w.is_positive()


def test_operation_hash_and_equality():
    assert Operation(2, 2, (0, 0, 0, 1)) == fx.BOOL_MIN
    assert len({fx.BOOL_MIN, Operation(2, 2, (0, 0, 0, 1))}) == 1

"""Built-in example data: small operations, weightings, relations and instances.

Everything is exposed both as library objects and as JSON (``as_json``).
"""

from __future__ import annotations

from fractions import Fraction

from .ops import Operation, projection
from .rationals import INF
from .vcsp import Constraint, Language, VcspInstance, WeightedRelation
from .weightings import Weighting


def _e(n: int, k: int) -> dict:
    return {projection(n, k, i): -1 for i in range(1, k + 1)}


# ------------------------------------------------------------- operations

BOOL_MIN = Operation(2, 2, (0, 0, 0, 1))
BOOL_MAX = Operation(2, 2, (0, 1, 1, 1))
BOOL_MAJORITY = Operation(2, 3, (0, 0, 0, 1, 0, 1, 1, 1))
BOOL_MINORITY = Operation(2, 3, (0, 1, 1, 0, 1, 0, 0, 1))

RECTANGULAR_BAND = Operation(4, 2, (0, 1, 0, 1, 0, 1, 0, 1, 2, 3, 2, 3, 2, 3, 2, 3))

# conservative binary operations on {0,1,2}, described on 2-element subsets
CONSERVATIVE_F = Operation(3, 2, (0, 0, 0, 1, 1, 1, 0, 2, 2))
CONSERVATIVE_G = Operation(3, 2, (0, 1, 0, 0, 1, 2, 0, 1, 2))


def _median(x, y, z):
    return sorted((x, y, z))[1]


def _pixley1(x, y, z):
    # values on tuples with a repeat follow the P1 pattern; first argument otherwise
    if x == y:
        return x
    if x == z:
        return y
    if y == z:
        return x
    return x


def _semi1(x, y, z):
    return x if len({x, y, z}) < 3 else z


def _semi4(a, b, c, d):
    return a if len({a, b, c, d}) < 4 else b


MEDIAN3 = Operation.from_function(3, 3, _median)
PIXLEY3 = Operation.from_function(3, 3, _pixley1)
SEMI3 = Operation.from_function(3, 3, _semi1)
SEMI4 = Operation.from_function(4, 4, _semi4)
MAJ_OF_FIRST_THREE = Operation.from_function(2, 4, lambda a, b, c, d: BOOL_MAJORITY(a, b, c))


def cyclic_triple(f: Operation) -> tuple[Operation, ...]:
    from .ops import cyclic_variants

    return tuple(cyclic_variants(f))


# ------------------------------------------------------------- weightings

OMEGA_SUB = Weighting(2, 2, {**_e(2, 2), BOOL_MIN: 1, BOOL_MAX: 1})

NONCOMMUTATIVE_OMEGA = Weighting(
    3,
    2,
    {
        projection(3, 2, 1): Fraction(-1, 2),
        projection(3, 2, 2): Fraction(-1, 2),
        CONSERVATIVE_F: Fraction(1, 2),
        CONSERVATIVE_G: Fraction(1, 2),
    },
)


def maj_min(maj, mino) -> Weighting:
    """Boolean ternary weighting: -1 on projections, given majority/minority weights."""
    return Weighting(2, 3, {**_e(2, 3), BOOL_MAJORITY: maj, BOOL_MINORITY: mino})


PIXLEY_TRIPLE = Weighting(3, 3, {**_e(3, 3), **{f: 1 for f in cyclic_triple(PIXLEY3)}})
SEMI_TRIPLE = Weighting(3, 3, {**_e(3, 3), **{f: 1 for f in cyclic_triple(SEMI3)}})
SEMI4_WEIGHTING = Weighting(4, 4, {**_e(4, 4), SEMI4: 4})
PIXLEY_PLUS_MAJORITY = Weighting(
    3, 3, {**_e(3, 3), **{f: Fraction(1, 3) for f in cyclic_triple(PIXLEY3)}, MEDIAN3: 2}
)
SEMI_PLUS_MAJORITY = Weighting(
    3, 3, {**_e(3, 3), **{f: Fraction(1, 3) for f in cyclic_triple(SEMI3)}, MEDIAN3: 2}
)
MAJORITY_ONLY = Weighting(2, 3, {**_e(2, 3), BOOL_MAJORITY: 3})
MINORITY_ONLY = Weighting(2, 3, {**_e(2, 3), BOOL_MINORITY: 3})
MAJ_OF_FIRST_THREE_WEIGHTING = Weighting(2, 4, {**_e(2, 4), MAJ_OF_FIRST_THREE: 4})

# name -> (generator, expected case label)
PIPELINE_CASES = {
    "pixley-triple": (PIXLEY_TRIPLE, "MajorityOnly"),
    "maj-min-positive-a": (maj_min(Fraction(5, 2), Fraction(1, 2)), "MajorityOnly"),
    "maj-min-balanced": (maj_min(2, 1), "MajMin21"),
    "semiprojection-triple": (SEMI_TRIPLE, "Semiprojections(3)"),
    "semiprojection-4ary": (SEMI4_WEIGHTING, "Semiprojections(4)"),
    "omega-sub": (OMEGA_SUB, "BinaryIdempotent"),
}

# ------------------------------------------------------------- relations

PHI_OR = WeightedRelation(2, 2, (0, 1, 1, 1))
PHI_XOR = WeightedRelation(2, 2, (1, 0, 0, 1))
PHI_EQ3 = WeightedRelation(3, 2, tuple(0 if a == b else INF for a in range(3) for b in range(3)))
NONCOMMUTATIVE_PHI = WeightedRelation(3, 2, (1, 0, 1, 0, 1, 1, 1, 1, 1))
NAE3 = WeightedRelation.from_function(3, 3, lambda x, y, z: 0 if {x, y, z} == {0, 1} else INF)
CORE_UNARY = WeightedRelation(3, 1, (0, 0, 1))

NONCOMMUTATIVE_INSTANCE = VcspInstance(3, 2, [Constraint("phi", NONCOMMUTATIVE_PHI, (0, 1))])
XOR_TRIANGLE = VcspInstance(
    2, 3, [Constraint("xor", PHI_XOR, s) for s in ((0, 1), (1, 2), (0, 2))]
)
CORE_LANGUAGE = Language(3, {"phi": CORE_UNARY})


def as_json() -> dict:
    """Every built-in fixture in the exchange formats."""
    rel = lambda phi: {"domain": phi.n, **phi.to_json()}  # noqa: E731
    return {
        "operations": {
            "boolean-min": BOOL_MIN.to_json(),
            "boolean-max": BOOL_MAX.to_json(),
            "boolean-majority": BOOL_MAJORITY.to_json(),
            "boolean-minority": BOOL_MINORITY.to_json(),
            "rectangular-band": RECTANGULAR_BAND.to_json(),
            "conservative-f": CONSERVATIVE_F.to_json(),
            "conservative-g": CONSERVATIVE_G.to_json(),
            "median3": MEDIAN3.to_json(),
            "pixley3": PIXLEY3.to_json(),
            "semiprojection3": SEMI3.to_json(),
            "semiprojection4": SEMI4.to_json(),
        },
        "weightings": {
            "omega-sub": OMEGA_SUB.to_json(),
            "noncommutative-omega": NONCOMMUTATIVE_OMEGA.to_json(),
            **{name: w.to_json() for name, (w, _) in PIPELINE_CASES.items()},
        },
        "pipeline-expected": {name: case for name, (_, case) in PIPELINE_CASES.items()},
        "relations": {
            "or": rel(PHI_OR),
            "xor": rel(PHI_XOR),
            "noncommutative-phi": rel(NONCOMMUTATIVE_PHI),
            "nae3": rel(NAE3),
            "core-unary": rel(CORE_UNARY),
        },
        "instances": {
            "noncommutative": NONCOMMUTATIVE_INSTANCE.to_json(),
            "xor-triangle": XOR_TRIANGLE.to_json(),
        },
        "languages": {"core-unary": CORE_LANGUAGE.to_json()},
    }

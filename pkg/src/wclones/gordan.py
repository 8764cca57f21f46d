"""Gordan's alternative over exact rationals, on top of a small exact simplex.

Either A x = 0 has a solution with x >= 0, x != 0 (``Kernel``), or some y has
y^T A > 0 in every column (``Dual``); exactly one holds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Optional, Sequence, Union

from .errors import InputError
from .rationals import format_rational, to_rational

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class QMatrix:
    rows: int
    cols: int
    data: tuple  # tuple of row tuples of Fractions

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "QMatrix":
        data = tuple(tuple(to_rational(v) for v in row) for row in rows)
        if not data or not data[0]:
            raise InputError("matrix must have positive dimensions")
        width = len(data[0])
        if any(len(r) != width for r in data):
            raise InputError("ragged matrix rows")
        return cls(len(data), width, data)

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.data)

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "data": [[format_rational(v) for v in r] for r in self.data],
        }


@dataclass(frozen=True)
class Kernel:
    x: tuple

    def to_json(self) -> dict:
        return {"alternative": "kernel", "x": [format_rational(v) for v in self.x]}


@dataclass(frozen=True)
class Dual:
    y: tuple

    def to_json(self) -> dict:
        return {"alternative": "dual", "y": [format_rational(v) for v in self.y]}


GordanOutcome = Union[Kernel, Dual]


# ------------------------------------------------------------ exact simplex


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: Optional[list] = None
    objective: Optional[Fraction] = None
    duals_eq: Optional[list] = None
    duals_ub: Optional[list] = None


def _pivot(T: list, basis: list, r: int, j: int):
    row = T[r]
    piv = row[j]
    if piv != 1:
        T[r] = row = [v / piv for v in row]
    for i, other in enumerate(T):
        if i != r:
            f = other[j]
            if f:
                T[i] = [a - f * b for a, b in zip(other, row)]
    basis[r] = j


def _run_simplex(T: list, basis: list, cost: list, allowed: list) -> str:
    """Maximize cost over the canonical tableau T (last column is rhs), Bland's rule."""
    ncols = len(cost)
    while True:
        cb = [cost[b] for b in basis]
        entering = None
        for j in range(ncols):
            if not allowed[j]:
                continue
            d = cost[j] - sum((c * T[i][j] for i, c in enumerate(cb) if c), ZERO)
            if d > 0:
                entering = j
                break
        if entering is None:
            return "optimal"
        best = None
        for i, row in enumerate(T):
            a = row[entering]
            if a > 0:
                ratio = row[-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return "unbounded"
        _pivot(T, basis, best[1], entering)


def _row_duals(T: list, basis: list, cost: list, init_cols: list) -> list:
    """y_r = c_B^T B^-1 e_r, read off the columns that formed the initial basis."""
    cb = [cost[b] for b in basis]
    return [sum((c * T[i][col] for i, c in enumerate(cb) if c), ZERO) for col in init_cols]


def linprog_exact(
    c: Sequence,
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
) -> LPResult:
    """maximize c.x  s.t.  A_eq x = b_eq,  A_ub x <= b_ub (b_ub >= 0),  x >= 0.

    Two-phase tableau simplex with Bland's rule. Duals follow the convention
    of the maximization: at optimality y^T A >= c with y_ub >= 0. When phase 1
    fails the returned duals are a Farkas certificate: y^T A >= 0 over the
    variables, y_ub >= 0 and y^T b < 0.
    """
    c = [to_rational(v) for v in c]
    nv = len(c)
    A_eq = [[to_rational(v) for v in r] for r in A_eq]
    A_ub = [[to_rational(v) for v in r] for r in A_ub]
    b_eq = [to_rational(v) for v in b_eq]
    b_ub = [to_rational(v) for v in b_ub]
    if any(len(r) != nv for r in A_eq + A_ub) or len(A_eq) != len(b_eq) or len(A_ub) != len(b_ub):
        raise InputError("inconsistent LP dimensions")
    if any(v < 0 for v in b_ub):
        raise InputError("inequality right-hand sides must be nonnegative")
    m_ub, m_eq = len(A_ub), len(A_eq)
    # columns: variables | slacks (ub rows) | artificials (eq rows) | rhs
    ncols = nv + m_ub + m_eq
    signs = [(-1 if b < 0 else 1) for b in b_eq]
    T = []
    for i, (row, b) in enumerate(zip(A_ub, b_ub)):
        slack = [ZERO] * (m_ub + m_eq)
        slack[i] = ONE
        T.append(list(row) + slack + [b])
    for i, (row, b) in enumerate(zip(A_eq, b_eq)):
        s = signs[i]
        art = [ZERO] * (m_ub + m_eq)
        art[m_ub + i] = ONE
        T.append([s * v for v in row] + art + [s * b])
    basis = list(range(nv, nv + m_ub + m_eq))
    init_cols = list(basis)
    is_art = [False] * (nv + m_ub) + [True] * m_eq

    def split(y):
        y_ub = y[:m_ub]
        y_eq = [s * v for s, v in zip(signs, y[m_ub:])]
        return y_eq, y_ub

    if m_eq:
        cost1 = [ZERO] * (nv + m_ub) + [-ONE] * m_eq
        _run_simplex(T, basis, cost1, [True] * ncols)
        infeas = sum((T[i][-1] for i, b in enumerate(basis) if is_art[b]), ZERO)
        if infeas > 0:
            y_eq, y_ub = split(_row_duals(T, basis, cost1, init_cols))
            return LPResult("infeasible", duals_eq=y_eq, duals_ub=y_ub)
        # drive zero-level artificials out of the basis; drop redundant rows
        dropped = []
        for r in range(len(T)):
            if not is_art[basis[r]]:
                continue
            j = next((j for j in range(nv + m_ub) if T[r][j] != 0), None)
            if j is None:
                dropped.append(r)
            else:
                _pivot(T, basis, r, j)
        # each remaining tableau row is still a combination of the original
        # rows with coefficients in the initial-basis columns, so duals stay
        # readable for every original row after the deletion
        for r in reversed(dropped):
            del T[r]
            del basis[r]
    cost2 = c + [ZERO] * (m_ub + m_eq)
    allowed = [not a for a in is_art]
    status = _run_simplex(T, basis, cost2, allowed)
    if status == "unbounded":
        return LPResult("unbounded")
    x = [ZERO] * nv
    for i, b in enumerate(basis):
        if b < nv:
            x[b] = T[i][-1]
    y_eq, y_ub = split(_row_duals(T, basis, cost2, init_cols))
    obj = sum((ci * xi for ci, xi in zip(c, x)), ZERO)
    return LPResult("optimal", x=x, objective=obj, duals_eq=y_eq, duals_ub=y_ub)


def verify_farkas(A_eq, b_eq, A_ub, b_ub, y_eq, y_ub) -> bool:
    """Check an infeasibility certificate for {A_eq x = b_eq, A_ub x <= b_ub, x >= 0}."""
    if any(v < 0 for v in y_ub):
        return False
    rows = list(A_eq) + list(A_ub)
    ys = list(y_eq) + list(y_ub)
    nv = len(rows[0]) if rows else 0
    for j in range(nv):
        if sum((y * r[j] for y, r in zip(ys, rows)), ZERO) < 0:
            return False
    rhs = sum((y * b for y, b in zip(ys, list(b_eq) + list(b_ub))), ZERO)
    return rhs < 0


# ------------------------------------------------------------------ Gordan


def _primitive(v: Sequence[Fraction]) -> tuple:
    """Scale a nonzero nonnegative rational vector to coprime integers."""
    den = 1
    for x in v:
        den = lcm(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for i in ints:
        g = gcd(g, i)
    return tuple(Fraction(i // g) for i in ints)


def solve_gordan(A: QMatrix) -> GordanOutcome:
    """Decide Gordan's alternative for A by maximizing 1.x over {Ax = 0, 0 <= x <= 1}."""
    m = A.cols
    ub_rows = [[ONE if j == i else ZERO for j in range(m)] for i in range(m)]
    res = linprog_exact(
        [ONE] * m,
        A_eq=A.data,
        b_eq=[ZERO] * A.rows,
        A_ub=ub_rows,
        b_ub=[ONE] * m,
    )
    if res.status != "optimal":  # pragma: no cover - x = 0 is always feasible
        raise RuntimeError(f"Gordan LP ended with status {res.status}")
    if res.objective > 0:
        out: GordanOutcome = Kernel(_primitive(res.x))
    else:
        y = tuple(res.duals_eq)
        out = Dual(y)
        if not verify_outcome(A, out):
            # opposite sign convention; verified again below
            out = Dual(tuple(-v for v in y))
    if not verify_outcome(A, out):  # pragma: no cover - guarded by LP duality
        raise RuntimeError("Gordan certificate failed verification")
    return out


def verify_outcome(A: QMatrix, o: GordanOutcome) -> bool:
    if isinstance(o, Kernel):
        x = o.x
        if len(x) != A.cols:
            return False
        if any(v < 0 for v in x) or not any(v > 0 for v in x):
            return False
        return all(sum((a * v for a, v in zip(row, x)), ZERO) == 0 for row in A.data)
    if isinstance(o, Dual):
        y = o.y
        if len(y) != A.rows:
            return False
        for j in range(A.cols):
            if sum((yi * A.data[i][j] for i, yi in enumerate(y)), ZERO) <= 0:
                return False
        return True
    return False

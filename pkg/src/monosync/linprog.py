"""Exact rational feasibility solver: phase-one simplex with Bland's rule.

Decides whether ``A x = b`` admits ``x >= 0``, for a sparse column matrix
with rational entries and ``b >= 0``.  Runs the revised simplex on
``min sum(artificials)`` keeping the basis inverse explicitly; Bland's
pivoting rule guarantees termination without any tolerance.  On success
returns the basic feasible point; on failure returns a Farkas vector
``y`` with ``y.A <= 0`` componentwise and ``y.b > 0``, an exact
certificate that no solution exists.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

F0 = Fraction(0)
F1 = Fraction(1)

SparseColumn = Sequence[tuple[int, Fraction]]


@dataclass(frozen=True)
class FeasiblePoint:
    x: dict[int, Fraction]  # nonzero structural coordinates


@dataclass(frozen=True)
class FarkasVector:
    y: tuple[Fraction, ...]
    gap: Fraction  # y.b, strictly positive


def solve_feasibility(columns: Sequence[SparseColumn],
                      b: Sequence[Fraction],
                      ) -> FeasiblePoint | FarkasVector:
    m = len(b)
    n = len(columns)
    if any(v < 0 for v in b):
        raise ValueError("right-hand side must be nonnegative")

    binv = [[F0] * m for _ in range(m)]
    for i in range(m):
        binv[i][i] = F1
    xb = [Fraction(v) for v in b]
    basis = list(range(n, n + m))  # artificial j sits in column n + j

    def dual() -> list[Fraction]:
        # y = c_B B^{-1}; phase-one cost is 1 on artificials, 0 elsewhere
        y = [F0] * m
        for i, col in enumerate(basis):
            if col >= n:
                row = binv[i]
                for k in range(m):
                    if row[k]:
                        y[k] += row[k]
        return y

    while True:
        y = dual()
        in_basis = set(basis)
        entering = -1
        for j in range(n + m):
            if j in in_basis:
                continue
            if j < n:
                reduced = -sum(c * y[r] for r, c in columns[j])
            else:
                reduced = F1 - y[j - n]
            if reduced < 0:
                entering = j
                break
        if entering < 0:
            break

        if entering < n:
            d = [F0] * m
            for r, c in columns[entering]:
                for i in range(m):
                    if binv[i][r]:
                        d[i] += binv[i][r] * c
        else:
            k = entering - n
            d = [binv[i][k] for i in range(m)]

        leave = -1
        best: Fraction | None = None
        for i in range(m):
            if d[i] > 0:
                ratio = xb[i] / d[i]
                if best is None or ratio < best or (
                        ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:  # pragma: no cover - phase-one objective is bounded
            raise ArithmeticError("unbounded phase-one direction")

        piv = d[leave]
        binv[leave] = [v / piv for v in binv[leave]]
        xb[leave] /= piv
        for i in range(m):
            if i != leave and d[i]:
                f = d[i]
                row_l = binv[leave]
                row_i = binv[i]
                for k in range(m):
                    if row_l[k]:
                        row_i[k] -= f * row_l[k]
                xb[i] -= f * xb[leave]
        basis[leave] = entering

    gap = sum((xb[i] for i, col in enumerate(basis) if col >= n), F0)
    if gap == 0:
        point = {
            col: xb[i]
            for i, col in enumerate(basis)
            if col < n and xb[i] != 0
        }
        return FeasiblePoint(point)
    return FarkasVector(tuple(dual()), gap)

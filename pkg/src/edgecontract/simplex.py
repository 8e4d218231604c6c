"""Dense two-phase simplex over the rationals with Bland's rule.

Solves ``min c.y  s.t.  G y >= h,  0 <= y <= 1``.  Slow but exact; meant for
the small fixtures where solver noise must not blur invariant checks.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

ZERO = Fraction(0)
ONE = Fraction(1)


def _pivot(T: list[list[Fraction]], obj: list[Fraction], basis: list[int], r: int, s: int) -> None:
    row = T[r]
    p = row[s]
    if p != ONE:
        T[r] = row = [a / p for a in row]
    for i, other in enumerate(T):
        if i != r:
            f = other[s]
            if f:
                T[i] = [a - f * b for a, b in zip(other, row)]
    f = obj[s]
    if f:
        obj[:] = [a - f * b for a, b in zip(obj, row)]
    basis[r] = s


def _run(T, obj, basis, allowed: int) -> str:
    """Iterate until optimal; columns ``>= allowed`` may not enter."""
    N = len(obj) - 1
    while True:
        s = next((j for j in range(min(allowed, N)) if obj[j] < 0), None)
        if s is None:
            return "optimal"
        best = None
        for i, row in enumerate(T):
            a = row[s]
            if a > 0:
                key = (row[N] / a, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return "unbounded"
        _pivot(T, obj, basis, best[1], s)


def solve_box_lp(
    c: Sequence[Fraction],
    rows: Sequence[tuple[dict[int, Fraction], Fraction]],
) -> tuple[str, list[Fraction] | None, Fraction | None]:
    """Return ``(status, y, value)``; status is ``optimal`` or ``infeasible``."""
    k = len(c)
    m1 = len(rows)
    # columns: y (k) | surplus s (m1) | upper slack t (k) | artificials
    n_struct = k + m1 + k
    T: list[list[Fraction]] = []
    basis: list[int] = []
    art_rows = []
    for r, (coef, rhs) in enumerate(rows):
        row = [ZERO] * n_struct
        for j, a in coef.items():
            row[j] = Fraction(a)
        row[k + r] = -ONE
        rhs = Fraction(rhs)
        if rhs <= 0:
            row = [-a for a in row]
            row.append(-rhs)
            basis.append(k + r)
        else:
            row.append(rhs)
            art_rows.append(len(T))
            basis.append(-1)
        T.append(row)
    for j in range(k):
        row = [ZERO] * n_struct
        row[j] = ONE
        row[k + m1 + j] = ONE
        row.append(ONE)
        T.append(row)
        basis.append(k + m1 + j)
    n_art = len(art_rows)
    N = n_struct + n_art
    for row in T:
        rhs = row.pop()
        row.extend([ZERO] * n_art)
        row.append(rhs)
    for a, i in enumerate(art_rows):
        T[i][n_struct + a] = ONE
        basis[i] = n_struct + a

    if n_art:
        obj = [ZERO] * (N + 1)
        for i in art_rows:
            obj = [o - v for o, v in zip(obj, T[i])]
        for a in range(n_art):
            obj[n_struct + a] = ZERO
        _run(T, obj, basis, n_struct)
        if -obj[N] > 0:
            return "infeasible", None, None
        for i in range(len(T)):
            if basis[i] >= n_struct:
                s = next((j for j in range(n_struct) if T[i][j] != 0), None)
                if s is not None:
                    _pivot(T, obj, basis, i, s)
        keep = [i for i in range(len(T)) if basis[i] < n_struct]
        T = [T[i][:n_struct] + [T[i][N]] for i in keep]
        basis = [basis[i] for i in keep]
        N = n_struct

    cost = [Fraction(x) for x in c] + [ZERO] * (N - k)
    obj = cost + [ZERO]
    for i, b in enumerate(basis):
        f = cost[b]
        if f:
            obj = [o - f * v for o, v in zip(obj, T[i])]
    status = _run(T, obj, basis, N)
    if status != "optimal":
        raise RuntimeError("box-constrained LP reported unbounded")
    y = [ZERO] * k
    for i, b in enumerate(basis):
        if b < k:
            y[b] = T[i][N]
    value = sum((Fraction(a) * v for a, v in zip(c, y)), ZERO)
    return "optimal", y, value

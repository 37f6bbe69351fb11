"""Integer Smith normal form (invariant factors only)."""
from __future__ import annotations

from typing import Sequence


def invariant_factors(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero diagonal entries ``d_1 | d_2 | ...`` of the Smith normal form.

    The input is not modified.  Works by alternating row and column
    reductions around a pivot of minimal absolute value.
    """
    a = [list(map(int, r)) for r in matrix]
    if not a or not a[0]:
        return []
    m, n = len(a), len(a[0])
    diag = []
    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero entry in the remaining block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = a[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        a[t], a[i] = a[i], a[t]
        for r in a:
            r[t], r[j] = r[j], r[t]
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // p
                    if q:
                        ri, rt = a[i], a[t]
                        for k in range(t, n):
                            ri[k] -= q * rt[k]
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // p
                    if q:
                        for r in a[t:]:
                            r[j] -= q * r[t]
                    if a[t][j]:
                        dirty = True
            if not dirty:
                # divisibility condition on the rest of the block
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                            if a[i][j] % p), None)
                if bad is None:
                    break
                i, _ = bad
                for k in range(t, n):
                    a[t][k] += a[i][k]
                continue
            # move a smaller remainder into the pivot position
            best = None
            for i in range(t, m):
                if a[i][t] and (best is None or abs(a[i][t]) < best[0]):
                    best = (abs(a[i][t]), i, "r")
            for j in range(t, n):
                if a[t][j] and (best is None or abs(a[t][j]) < best[0]):
                    best = (abs(a[t][j]), j, "c")
            _, k, kind = best
            if kind == "r":
                a[t], a[k] = a[k], a[t]
            else:
                for r in a:
                    r[t], r[k] = r[k], r[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def rank(matrix: Sequence[Sequence[int]]) -> int:
    return len(invariant_factors(matrix))


def cokernel(matrix: Sequence[Sequence[int]]) -> tuple[int, list[int]]:
    """``(free rank, torsion coefficients > 1)`` of ``Z^rows / image``."""
    rows = len(matrix)
    inv = invariant_factors(matrix)
    return rows - len(inv), [d for d in inv if d > 1]

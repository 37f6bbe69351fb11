"""Exact bounded-variable primal simplex over the rationals.

Solves ``min c.x  s.t.  A x = b,  lo <= x <= hi`` with
:class:`fractions.Fraction` arithmetic and Bland's rule (lowest-index
entering variable, lowest-index leaving variable among ratio ties), which
guarantees termination on degenerate problems.

The tableau is incremental so that a column-generation driver can keep the
current basis while it adds variables and constraint rows:

* :meth:`Tableau.add_row` appends an equality row that touches none of the
  existing variables; it enters the basis through its own artificial.
* :meth:`Tableau.add_column` appends a variable at its lower bound.

Phase 1 minimizes the sum of artificials; phase 2 fixes every artificial
at zero and minimizes the real cost.  Row duals are read off the artificial
columns, which always hold ``B^-1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

ZERO = Fraction(0)
ONE = Fraction(1)


class Tableau:
    """Sparse-row simplex tableau; see the module docstring."""

    def __init__(self):
        self.rows: list[dict[int, Fraction]] = []
        self.beta: list[Fraction] = []  # values of the basic variables
        self.basis: list[int] = []
        self.lo: list[Fraction] = []
        self.hi: list[Fraction | None] = []
        self.cost: list[Fraction] = []  # real (phase-2) costs
        self.is_art: list[bool] = []
        self.art_of_row: list[int] = []
        self.art_sign: list[int] = []
        self.value: list[Fraction] = []  # nonbasic values (basic entries unused)
        self.is_basic: list[bool] = []
        self.phase = 1
        self.pivots = 0

    # -- construction ---------------------------------------------------

    @property
    def n_vars(self) -> int:
        return len(self.lo)

    def _new_var(self, lo, hi, cost, art):
        self.lo.append(Fraction(lo))
        self.hi.append(None if hi is None else Fraction(hi))
        self.cost.append(Fraction(cost))
        self.is_art.append(art)
        self.value.append(Fraction(lo))
        self.is_basic.append(False)
        return len(self.lo) - 1

    def add_row(self, rhs: Fraction | int) -> int:
        """Append ``0 = rhs`` (to be filled by later columns); returns its index."""
        rhs = Fraction(rhs)
        sign = 1 if rhs >= 0 else -1
        hi = None if self.phase == 1 else ZERO
        if self.phase == 2 and rhs != 0:
            raise ValueError("new rows in phase 2 must have zero right-hand side")
        a = self._new_var(0, hi, 0, True)
        i = len(self.rows)
        self.rows.append({a: ONE})
        self.beta.append(abs(rhs))
        self.basis.append(a)
        self.is_basic[a] = True
        self.art_of_row.append(a)
        self.art_sign.append(sign)
        return i

    def binv_col(self, i: int) -> dict[int, Fraction]:
        """Column ``i`` of ``B^-1`` as a sparse map row -> value."""
        a, s = self.art_of_row[i], self.art_sign[i]
        out = {}
        for r, row in enumerate(self.rows):
            v = row.get(a)
            if v:
                out[r] = v * s
        return out

    def add_column(self, col: Mapping[int, Fraction | int], cost, lo=0, hi=None) -> int:
        """Append a variable with constraint coefficients ``col`` (row -> value).

        The variable starts nonbasic at ``lo``; basic values are updated.
        """
        j = self._new_var(lo, hi, cost, False)
        tcol: dict[int, Fraction] = {}
        for i, a in col.items():
            if not a:
                continue
            for r, v in self.binv_col(i).items():
                tcol[r] = tcol.get(r, ZERO) + v * a
        for r, v in tcol.items():
            if v:
                self.rows[r][j] = v
                if self.lo[j]:
                    self.beta[r] -= v * self.lo[j]
        return j

    def set_bounds(self, j: int, lo, hi) -> None:
        """Change bounds of a nonbasic variable, moving it onto the new lower bound."""
        if self.is_basic[j]:
            raise ValueError("cannot rebound a basic variable")
        old = self.value[j]
        self.lo[j] = Fraction(lo)
        self.hi[j] = None if hi is None else Fraction(hi)
        new = self.lo[j]
        if new != old:
            delta = new - old
            for r, row in enumerate(self.rows):
                v = row.get(j)
                if v:
                    self.beta[r] -= v * delta
            self.value[j] = new

    # -- pivoting ---------------------------------------------------------

    def _phase_cost(self, j: int) -> Fraction:
        if self.phase == 1:
            return ONE if self.is_art[j] else ZERO
        return self.cost[j]

    def duals(self) -> list[Fraction]:
        """``y = c_B B^-1`` for the current phase's costs, original row signs."""
        cb = [self._phase_cost(b) for b in self.basis]
        y = []
        for i in range(len(self.rows)):
            a, s = self.art_of_row[i], self.art_sign[i]
            v = ZERO
            for r, row in enumerate(self.rows):
                t = row.get(a)
                if t and cb[r]:
                    v += cb[r] * t
            y.append(v * s)
        return y

    def _reduced_costs(self) -> list[Fraction]:
        d = [self._phase_cost(j) for j in range(self.n_vars)]
        for r, row in enumerate(self.rows):
            cb = self._phase_cost(self.basis[r])
            if cb:
                for k, v in row.items():
                    d[k] -= cb * v
        return d

    def _pivot(self, r: int, j: int) -> None:
        prow = self.rows[r]
        piv = prow[j]
        if piv != ONE:
            inv = ONE / piv
            prow = {k: v * inv for k, v in prow.items()}
            self.rows[r] = prow
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            f = row.get(j)
            if f:
                for k, v in prow.items():
                    nv = row.get(k, ZERO) - f * v
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
        old = self.basis[r]
        self.is_basic[old] = False
        self.is_basic[j] = True
        self.basis[r] = j
        self.pivots += 1

    def objective(self) -> Fraction:
        tot = ZERO
        for j in range(self.n_vars):
            if not self.is_basic[j]:
                tot += self._phase_cost(j) * self.value[j]
        for r, b in enumerate(self.basis):
            tot += self._phase_cost(b) * self.beta[r]
        return tot

    def _iterate(self) -> str:
        d = self._reduced_costs()
        self._d = d
        while True:
            enter = None
            for j, dj in enumerate(d):
                if not dj or self.is_basic[j]:
                    continue
                if self.hi[j] is not None and self.hi[j] == self.lo[j]:
                    continue
                at_lo = self.value[j] == self.lo[j]
                if (at_lo and dj < 0) or (not at_lo and dj > 0):
                    enter = j
                    break
            if enter is None:
                return OPTIMAL
            step = 1 if self.value[enter] == self.lo[enter] else -1
            # x_B(t) = beta - t * step * T[:, enter]
            best = None  # (ratio, var index, row or None)
            if self.hi[enter] is not None:
                best = (self.hi[enter] - self.lo[enter], enter, None)
            for r, row in enumerate(self.rows):
                a = row.get(enter)
                if not a:
                    continue
                rate = a * step  # basic decreases at this rate
                b = self.basis[r]
                if rate > 0:
                    lim = (self.beta[r] - self.lo[b]) / rate
                elif self.hi[b] is not None:
                    lim = (self.hi[b] - self.beta[r]) / (-rate)
                else:
                    continue
                if best is None or (lim, b) < best[:2]:
                    best = (lim, b, r)
            if best is None:
                return UNBOUNDED
            t, _, r = best
            if t:
                for i, row in enumerate(self.rows):
                    a = row.get(enter)
                    if a:
                        self.beta[i] -= t * step * a
            if r is None:  # bound flip
                self.value[enter] = self.hi[enter] if step == 1 else self.lo[enter]
                continue
            leaving = self.basis[r]
            new_val = self.value[enter] + step * t
            rate = self.rows[r][enter] * step
            self.value[leaving] = self.lo[leaving] if rate > 0 else self.hi[leaving]
            self._pivot(r, enter)
            self.beta[r] = new_val
            dj = d[enter]
            for k, v in self.rows[r].items():
                d[k] -= dj * v

    def solve(self) -> str:
        """Run phase 1 (if still needed) and phase 2 from the current basis."""
        if self.phase == 1:
            self._iterate()
            if self.objective() > 0:
                return INFEASIBLE
            self._enter_phase2()
        return self._iterate()

    def _enter_phase2(self) -> None:
        self.phase = 2
        for r in range(len(self.rows)):
            b = self.basis[r]
            if not self.is_art[b]:
                continue
            j = next((k for k in sorted(self.rows[r]) if not self.is_art[k]
                      and not (self.hi[k] is not None and self.hi[k] == self.lo[k])), None)
            if j is not None:
                # basic artificial is at zero: a degenerate pivot keeps feasibility
                val = self.value[j]
                self._pivot(r, j)
                self.beta[r] = val
        for j in range(self.n_vars):
            if self.is_art[j]:
                self.hi[j] = ZERO
                if not self.is_basic[j]:
                    self.value[j] = ZERO

    def primal(self) -> list[Fraction]:
        x = list(self.value)
        for r, b in enumerate(self.basis):
            x[b] = self.beta[r]
        return x


@dataclass
class LPResult:
    status: str
    value: Fraction | None = None
    x: list[Fraction] | None = None
    # Row duals.  For an infeasible problem this is the phase-1 Farkas ray.
    y: list[Fraction] | None = None
    pivots: int = 0


def solve_lp(columns: Sequence[Mapping[int, Fraction | int]], b: Sequence[Fraction | int],
             cost: Sequence[Fraction | int], upper: Mapping[int, Fraction | int] | None = None,
             lower: Mapping[int, Fraction | int] | None = None) -> LPResult:
    """One-shot convenience wrapper around :class:`Tableau`."""
    upper, lower = dict(upper or {}), dict(lower or {})
    tab = Tableau()
    for v in b:
        tab.add_row(v)
    idx = [tab.add_column(col, c, lower.get(j, 0), upper.get(j))
           for j, (col, c) in enumerate(zip(columns, cost))]
    status = tab.solve()
    y = tab.duals()
    if status == INFEASIBLE:
        return LPResult(INFEASIBLE, y=y, pivots=tab.pivots)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, pivots=tab.pivots)
    x = tab.primal()
    return LPResult(OPTIMAL, tab.objective(), [x[j] for j in idx], y, tab.pivots)

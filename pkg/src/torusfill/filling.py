"""Exact filling norms on finite models of the straight chain complex.

A :class:`FiniteModel` fixes a grid ``(1/q) Z^m`` and a spread bound ``D``:
its columns are all canonical straight ``(d+1)``-simplices with grid vertices
whose canonical lift lies in ``[0, D]^m``; its rows are the ``d``-simplices
of the same box together with every face of a column.  The filling norm of
a ``d``-cycle ``z`` restricted to the model is

    min  sum_sigma |x_sigma|   subject to   B x = z,

solved over Q by an exact simplex (``fill_real``) and over Z by
branch-and-bound on top of it (``fill_int``).  Values are optima *within the
model*, hence upper bounds for the true filling norm.

The LP is solved by column generation: a small restricted problem is solved
exactly and its duals price every column of the model.  The final dual
vector, extended by zero, is an LP-duality certificate checked against the
full boundary matrix.
"""
from __future__ import annotations

import heapq
import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .chains import Chain, StraightSimplex, boundary, chain_from_dict, chain_to_dict, l1_norm
from .simplex import INFEASIBLE, OPTIMAL, Tableau

DEFAULT_MAX_UNIVERSE = 250_000
DEFAULT_NODE_CAP = 2_000


class FillingError(Exception):
    pass


class UniverseTooLarge(FillingError):
    pass


class NotRepresentable(FillingError):
    """``z`` has a term outside the model's rows."""


class ModelInfeasible(FillingError):
    """``z`` is not the boundary of any chain in the model."""

    def __init__(self, msg, farkas=None):
        super().__init__(msg)
        self.farkas = farkas


class BudgetExhausted(FillingError):
    pass


IntKey = tuple[tuple[int, ...], ...]


def _canon_int(verts: Sequence[tuple[int, ...]], q: int) -> IntKey:
    shift = [(x // q) * q for x in verts[0]]
    if any(shift):
        return tuple(tuple(x - s for x, s in zip(v, shift)) for v in verts)
    return tuple(verts)


@dataclass
class FiniteModel:
    ambient_dim: int
    degree: int
    q: int
    D: int
    columns: list[IntKey]
    rows: list[IntKey]
    row_index: dict[IntKey, int]
    B: list[tuple[tuple[int, int], ...]]  # sparse columns: ((row, coeff), ...)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.columns)

    def _to_simplex(self, key: IntKey) -> StraightSimplex:
        q = self.q
        return StraightSimplex(tuple(tuple(Fraction(x, q) for x in v) for v in key))

    def column_simplex(self, j: int) -> StraightSimplex:
        return self._to_simplex(self.columns[j])

    def row_simplex(self, i: int) -> StraightSimplex:
        return self._to_simplex(self.rows[i])

    def key_of(self, s: StraightSimplex) -> IntKey | None:
        """Integer key of ``s`` on this grid, or ``None`` if off-grid."""
        out = []
        for v in s.vertices:
            pt = []
            for x in v:
                y = x * self.q
                if y.denominator != 1:
                    return None
                pt.append(int(y))
            out.append(tuple(pt))
        return tuple(out)

    def column_index(self, s: StraightSimplex) -> int | None:
        key = self.key_of(s)
        if key is None:
            return None
        if not hasattr(self, "_col_index"):
            self._col_index = {k: j for j, k in enumerate(self.columns)}
        return self._col_index.get(key)

    def vector(self, z: Chain) -> dict[int, Fraction | int]:
        """Row coordinates of ``z``; raises :class:`NotRepresentable`."""
        if (z.ambient_dim, z.degree) != (self.ambient_dim, self.degree):
            raise NotRepresentable(
                f"chain lives in C_{z.degree}(T^{z.ambient_dim}), model fills "
                f"C_{self.degree}(T^{self.ambient_dim})")
        out = {}
        for s, c in z.items():
            key = self.key_of(s)
            i = None if key is None else self.row_index.get(key)
            if i is None:
                raise NotRepresentable(f"{s!r} is not a row of the model (q={self.q}, D={self.D})")
            out[i] = c
        return out

    def chain(self, x: dict[int, Fraction | int], degree_shift: int = 1) -> Chain:
        """Chain with coefficients ``x`` on the columns."""
        terms = {}
        for j, v in x.items():
            if v:
                if isinstance(v, Fraction) and v.denominator == 1:
                    v = int(v)
                terms[self.column_simplex(j)] = v
        return Chain(self.ambient_dim, self.degree + degree_shift, terms)

    def apply(self, x: dict[int, Fraction | int]) -> dict[int, Fraction | int]:
        """``B x`` as a sparse row vector."""
        out: dict[int, Fraction | int] = {}
        for j, v in x.items():
            for i, b in self.B[j]:
                out[i] = out.get(i, 0) + b * v
        return {i: v for i, v in out.items() if v}

    def touching(self) -> dict[int, list[int]]:
        """Row index -> columns whose boundary involves that row."""
        if not hasattr(self, "_touching"):
            t: dict[int, list[int]] = {}
            for j, col in enumerate(self.B):
                for i, _ in col:
                    t.setdefault(i, []).append(j)
            self._touching = t
        return self._touching

    def params(self) -> dict:
        return {"m": self.ambient_dim, "d": self.degree, "q": self.q, "D": self.D,
                "columns": len(self.columns), "rows": len(self.rows)}


def build_model(m: int, d: int, q: int, D: int, max_universe: int = DEFAULT_MAX_UNIVERSE
                ) -> FiniteModel:
    """Enumerate the model universes and assemble the boundary matrix.

    Columns are in lexicographic order of canonical vertex tuples, rows too.
    """
    if min(m, q, D) < 1 or d < 0:
        raise ValueError("need m, q, D >= 1 and d >= 0")
    grid_pts = (q * D + 1) ** m
    ncols = q ** m * grid_pts ** (d + 1)
    if ncols > max_universe:
        raise UniverseTooLarge(
            f"model (m={m}, d={d}, q={q}, D={D}) has {ncols} columns > cap {max_universe}")
    firsts = list(itertools.product(range(q), repeat=m))
    pts = list(itertools.product(range(q * D + 1), repeat=m))
    columns = [(v0,) + rest for v0 in firsts for rest in itertools.product(pts, repeat=d + 1)]
    columns.sort()

    row_set = set()
    for v0 in firsts:
        for rest in itertools.product(pts, repeat=d):
            row_set.add((v0,) + rest)
    faces_of = []
    for col in columns:
        fs = []
        for i in range(d + 2):
            f = _canon_int(col[:i] + col[i + 1:], q)
            row_set.add(f)
            fs.append(((-1) ** i, f))
        faces_of.append(fs)
    rows = sorted(row_set)
    row_index = {r: i for i, r in enumerate(rows)}
    B = []
    for fs in faces_of:
        acc: dict[int, int] = {}
        for sgn, f in fs:
            i = row_index[f]
            acc[i] = acc.get(i, 0) + sgn
        B.append(tuple(sorted((i, v) for i, v in acc.items() if v)))
    return FiniteModel(m, d, q, D, columns, rows, row_index, B)


# -- certificates -----------------------------------------------------------

@dataclass
class FillingCertificate:
    """An optimal filling inside a model.

    ``dual`` is a row vector (sparse, zero elsewhere) with ``|y . B_j| <= 1``
    for every column and ``y . z = lp_value``; it proves that no rational
    filling in the model is shorter than ``lp_value``.
    """

    value: Fraction
    witness: Chain
    dual: dict[int, Fraction]
    mode: str  # "real" | "integral"
    lp_value: Fraction
    model: dict = field(default_factory=dict)
    nodes: int = 1

    def to_dict(self, model: FiniteModel | None = None) -> dict:
        if model is not None:
            dual = [[0, 1]] * len(model.rows)
            for i, v in self.dual.items():
                dual[i] = [v.numerator, v.denominator]
        else:
            dual = {str(i): [v.numerator, v.denominator] for i, v in sorted(self.dual.items())}
        return {"value": [self.value.numerator, self.value.denominator],
                "lp_value": [self.lp_value.numerator, self.lp_value.denominator],
                "mode": self.mode, "model": self.model,
                "witness": chain_to_dict(self.witness), "dual": dual}

    @classmethod
    def from_dict(cls, data: dict) -> "FillingCertificate":
        raw = data["dual"]
        if isinstance(raw, list):
            dual = {i: Fraction(n, d) for i, (n, d) in enumerate(raw) if n}
        else:
            dual = {int(i): Fraction(n, d) for i, (n, d) in raw.items()}
        return cls(Fraction(*data["value"]), chain_from_dict(data["witness"]), dual,
                   data["mode"], Fraction(*data["lp_value"]), dict(data.get("model", {})))


def verify_certificate(model: FiniteModel, z: Chain, cert: FillingCertificate) -> None:
    """Re-check a certificate; raises ``AssertionError`` on any failure.

    The witness is checked through the chain calculus, not through ``B``.
    """
    w = cert.witness
    if w.degree != z.degree + 1 or boundary(w) != z:
        raise AssertionError("witness does not fill z")
    if Fraction(l1_norm(w)) != cert.value:
        raise AssertionError("certificate value differs from the witness norm")
    if cert.mode == "integral" and not w.is_integral():
        raise AssertionError("integral certificate with a fractional witness")
    for s, _ in w.items():
        if model.column_index(s) is None:
            raise AssertionError(f"witness simplex {s!r} is outside the model")
    y = cert.dual
    for j, col in enumerate(model.B):
        if abs(sum((y.get(i, 0) * v for i, v in col), Fraction(0))) > 1:
            raise AssertionError(f"dual infeasible at column {j}")
    zvec = model.vector(z)
    if sum((y.get(i, 0) * v for i, v in zvec.items()), Fraction(0)) != cert.lp_value:
        raise AssertionError("dual objective differs from the LP value")
    if cert.mode == "real" and cert.value != cert.lp_value:
        raise AssertionError("real certificate is not tight")
    if cert.value < cert.lp_value:
        raise AssertionError("value below the LP lower bound")


# -- LP by column generation --------------------------------------------------

@dataclass
class _Node:
    lower: dict[int, int]  # bounds on the signed variable x_j = x+_j - x-_j
    upper: dict[int, int]


def _split_bounds(lo, hi):
    """Bounds on ``(x+, x-)`` realizing ``lo <= x+ - x- <= hi`` at an optimum,
    where at most one of the two parts is positive."""
    plo, phi, mlo, mhi = 0, None, 0, None
    if lo is not None:
        if lo > 0:
            plo, mhi = lo, 0
        else:
            mhi = -lo
    if hi is not None:
        if hi < 0:
            mlo, phi = -hi, 0
        else:
            phi = hi
    return plo, phi, mlo, mhi


class _RowGeneration:
    """Solves node LPs over the whole model by cutting-plane row generation.

    The master keeps a subset ``R`` of the equality rows and *every* column
    touching ``R``; it is a relaxation, so its optimum is a lower bound whose
    duals (zero off ``R``) are dual feasible for the full model.  Rows that
    the master solution violates are added until it is feasible, at which
    point it is optimal.  The row pool persists across branch-and-bound nodes.
    """

    def __init__(self, model: FiniteModel, zvec: dict[int, Fraction | int]):
        self.model = model
        self.zvec = zvec
        self.touching = model.touching()
        self.pool: list[int] = sorted(zvec)
        self._pool_set = set(self.pool)
        self.rounds = 0

    def _master(self, node: _Node):
        tab = Tableau()
        pos = {}
        for r in self.pool:
            pos[r] = tab.add_row(self.zvec.get(r, 0))
        cols = sorted({j for r in self.pool for j in self.touching.get(r, ())}
                      | set(node.lower) | set(node.upper))
        split = {}
        for j in cols:
            col = {pos[i]: b for i, b in self.model.B[j] if i in pos}
            plo, phi, mlo, mhi = _split_bounds(node.lower.get(j), node.upper.get(j))
            xp = tab.add_column(col, 1, plo, phi)
            xm = tab.add_column({i: -b for i, b in col.items()}, 1, mlo, mhi)
            split[j] = (xp, xm)
        return tab, split

    def solve(self, node: _Node):
        """Return ``((value, x, y), None)`` or ``(None, farkas_y)`` when the
        node LP is infeasible over the whole model.  ``x`` is keyed by model
        column, ``y`` by model row."""
        while True:
            self.rounds += 1
            tab, split = self._master(node)
            status = tab.solve()
            y = {self.pool[i]: v for i, v in enumerate(tab.duals()) if v}
            if status == INFEASIBLE:
                return None, y
            if status != OPTIMAL:
                raise AssertionError("filling LP cannot be unbounded")
            prim = tab.primal()
            x = {}
            for j, (p, m) in split.items():
                v = prim[p] - prim[m]
                if v:
                    x[j] = v
            bx = self.model.apply(x)
            viol = sorted(r for r in bx if r not in self._pool_set)
            if not viol:
                return (tab.objective(), x, y), None
            for r in viol:
                self._pool_set.add(r)
                self.pool.append(r)


def _lp(model: FiniteModel, z: Chain, node: _Node | None = None, cg=None):
    zvec = model.vector(z)
    cg = cg or _RowGeneration(model, zvec)
    out, farkas = cg.solve(node or _Node({}, {}))
    return out, farkas, cg


def fill_real(model: FiniteModel, z: Chain) -> FillingCertificate:
    """Least rational filling of ``z`` inside ``model``, with dual certificate."""
    zvec = model.vector(z)
    if not zvec:
        return FillingCertificate(Fraction(0), Chain.zero(z.ambient_dim, z.degree + 1), {},
                                  "real", Fraction(0), model.params())
    out, farkas, _ = _lp(model, z)
    if out is None:
        raise ModelInfeasible(f"z is not a boundary in model {model.params()}", farkas)
    value, x, y = out
    w = model.chain(x)
    cert = FillingCertificate(Fraction(value), w, y, "real", Fraction(value), model.params())
    verify_certificate(model, z, cert)
    return cert


def _most_fractional(x: dict[int, Fraction]) -> int | None:
    best = None
    for j in sorted(x):
        fr = x[j] - math.floor(x[j])
        if fr:
            key = (abs(fr - Fraction(1, 2)), j)
            if best is None or key < best[0]:
                best = (key, j)
    return None if best is None else best[1]


def fill_int(model: FiniteModel, z: Chain, node_cap: int = DEFAULT_NODE_CAP
             ) -> FillingCertificate:
    """Least integral filling of ``z`` inside ``model``.

    Best-first branch-and-bound on the LP relaxation, branching on the most
    fractional variable (lowest column index on ties).  The returned value is
    schedule independent; ``lp_value`` and ``dual`` describe the root
    relaxation.
    """
    zvec = model.vector(z)
    if not zvec:
        return FillingCertificate(Fraction(0), Chain.zero(z.ambient_dim, z.degree + 1), {},
                                  "integral", Fraction(0), model.params())
    if any(Fraction(v).denominator != 1 for v in zvec.values()):
        raise ModelInfeasible("z has non-integral coefficients")
    root, farkas, cg = _lp(model, z)
    if root is None:
        raise ModelInfeasible(f"z is not a boundary in model {model.params()}", farkas)
    root_value, _, root_dual = root

    incumbent: tuple[int, dict[int, int]] | None = None
    counter = itertools.count()
    heap = [(root_value, next(counter), _Node({}, {}), root)]
    nodes = 0
    while heap:
        bound, _, node, sol = heapq.heappop(heap)
        if incumbent is not None and math.ceil(bound) >= incumbent[0]:
            continue
        nodes += 1
        if nodes > node_cap:
            raise BudgetExhausted(f"branch-and-bound exceeded {node_cap} nodes")
        if sol is None:
            sol, _ = cg.solve(node)
            if sol is None:
                continue
            if incumbent is not None and math.ceil(sol[0]) >= incumbent[0]:
                continue
        value, x, _ = sol
        j = _most_fractional(x)
        if j is None:
            if incumbent is None or value < incumbent[0]:
                incumbent = (int(value), {k: int(v) for k, v in x.items()})
            continue
        v = x[j]
        lo, hi = math.floor(v), math.ceil(v)
        left = _Node(dict(node.lower), dict(node.upper))
        left.upper[j] = min(lo, left.upper.get(j, lo))
        right = _Node(dict(node.lower), dict(node.upper))
        right.lower[j] = max(hi, right.lower.get(j, hi))
        for child in (left, right):
            if child.lower.get(j, -math.inf) > child.upper.get(j, math.inf):
                continue
            heapq.heappush(heap, (value, next(counter), child, None))
    if incumbent is None:
        raise ModelInfeasible(f"no integral filling in model {model.params()}")
    w = model.chain(incumbent[1])
    cert = FillingCertificate(Fraction(incumbent[0]), w, root_dual, "integral",
                              Fraction(root_value), model.params(), nodes)
    verify_certificate(model, z, cert)
    return cert


# -- brute-force oracle -----------------------------------------------------

def oracle_fill_int(model: FiniteModel, z: Chain, budget: int, max_columns: int = 100_000
                    ) -> int | None:
    """Least norm of an integral filling with norm at most ``budget``.

    Iterative deepening over integer chains: the lowest row on which the
    residual is nonzero must be hit by some column of the filling with the
    matching sign, so only those columns are branched on.  Independent of
    the LP machinery.  Returns ``None`` when no filling fits the budget.
    """
    if len(model.columns) > max_columns:
        raise UniverseTooLarge(f"oracle limited to {max_columns} columns")
    zvec = {i: int(v) for i, v in model.vector(z).items()}
    if not zvec:
        return 0
    touching: dict[int, list[tuple[int, int]]] = {}
    for j, col in enumerate(model.B):
        for i, b in col:
            touching.setdefault(i, []).append((j, b))
    width = max((sum(abs(b) for _, b in col) for col in model.B), default=0)
    if width == 0:
        return None

    failed: dict[frozenset, int] = {}  # residual -> largest budget known to fail

    def search(res: dict[int, int], left: int) -> bool:
        if not res:
            return True
        if left == 0:
            return False
        if sum(abs(v) for v in res.values()) > left * width:
            return False
        key = frozenset(res.items())
        if failed.get(key, -1) >= left:
            return False
        r = min(res)
        target = 1 if res[r] > 0 else -1
        for j, b in touching.get(r, ()):
            s = target * (1 if b > 0 else -1)
            nxt = dict(res)
            for i, bb in model.B[j]:
                v = nxt.get(i, 0) - s * bb
                if v:
                    nxt[i] = v
                else:
                    nxt.pop(i, None)
            if search(nxt, left - 1):
                return True
        failed[key] = left
        return False

    for n in range(budget + 1):
        if search(zvec, n):
            return n
    return None


def dump_certificate(cert: FillingCertificate, path, model: FiniteModel | None = None) -> None:
    with open(path, "w") as fh:
        json.dump(cert.to_dict(model), fh, indent=1)

"""Layered triangulations of torus bundles.

A flip path from a one-vertex torus triangulation ``t`` to ``A t`` is turned
into a closed triangulation of the mapping torus of ``A`` as follows.  Every
sheet starts with a prism block: the product of the current torus
triangulation with an interval, cut into six tetrahedra by the staircase rule.
Each flip then adds one flat tetrahedron whose bottom faces are the two
triangles being flipped and whose top faces are the two new triangles.  The
final torus is glued back to the bottom of the first prism by ``A^-1``.

Tetrahedra carry integer vertex coordinates ``(x, y, height)`` in the
universal cover of the torus; all face gluings are found by matching faces up
to translation in ``Z^2``.  Nothing is trusted: :func:`check` recomputes the
face involution, orientability, Euler characteristic and vertex links from
the gluing table alone.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

from .mcg import (T0, FareyTriangle, Periodic, Sl2Matrix, act, canonical_slope, classify,
                  flip, flip_distance_fast, flip_path_between)
from .snf import cokernel, invariant_factors, rank

Point = tuple[int, int, int]
Perm = tuple[int, int, int, int]

PRISM_SIZE = 6


class TriangulationError(ValueError):
    """A structural check failed; ``invariant`` names which one."""

    def __init__(self, invariant: str, message: str):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


# -- flip paths -----------------------------------------------------------------

@dataclass(frozen=True)
class FlipPath:
    start: FareyTriangle
    moves: tuple[int, ...]
    # number of moves in each sheet; a plain path is a single sheet
    sheets: tuple[int, ...] = ()

    def __post_init__(self):
        moves = tuple(self.moves)
        object.__setattr__(self, "moves", moves)
        sheets = tuple(self.sheets) or (len(moves),)
        if sum(sheets) != len(moves) or any(s < 0 for s in sheets):
            raise ValueError(f"sheet lengths {sheets} do not add up to {len(moves)} moves")
        object.__setattr__(self, "sheets", sheets)
        for k in moves:
            if k not in (0, 1, 2):
                raise ValueError(f"flip index {k} not in 0..2")

    def __len__(self) -> int:
        return len(self.moves)

    def states(self) -> list[FareyTriangle]:
        out = [self.start]
        for k in self.moves:
            out.append(flip(out[-1], k))
        return out

    @property
    def end(self) -> FareyTriangle:
        return self.states()[-1]

    def realizes(self, A: Sl2Matrix) -> bool:
        return self.end == act(A, self.start)


def _require_nonperiodic(A: Sl2Matrix) -> None:
    kind = classify(A)
    if isinstance(kind, Periodic):
        raise ValueError(f"monodromy {A} is {kind}")


def flip_path(A: Sl2Matrix, start: FareyTriangle = T0) -> FlipPath:
    """Geodesic in the flip tree from ``start`` to ``A start``."""
    _require_nonperiodic(A)
    path = FlipPath(start, tuple(flip_path_between(start, act(A, start))))
    assert len(path) == flip_distance_fast(start, act(A, start))
    return path


def cyclic_cover_path(path: FlipPath, A: Sl2Matrix, i: int) -> FlipPath:
    """Concatenate ``path, A path, ..., A^(i-1) path``; realizes ``A^i``."""
    if i < 1:
        raise ValueError("cover degree must be at least 1")
    if not path.realizes(A):
        raise ValueError("path does not realize A")
    if i == 1:
        return path
    states = path.states()
    flipped = [s.slopes[k] for s, k in zip(states, path.moves)]
    moves = []
    state = path.start
    power = Sl2Matrix.identity()
    for _ in range(i):
        for slope in flipped:
            k = state.index(power.apply(slope))
            moves.append(k)
            state = flip(state, k)
        power = A @ power
    return FlipPath(path.start, tuple(moves), path.sheets * i)


# -- geometry of the torus triangulations --------------------------------------

def _basis(t: FareyTriangle) -> tuple[tuple[int, int], tuple[int, int]]:
    """Vectors ``u, v`` with ``{u, v, u + v}`` the slopes of ``t``."""
    s = t.slopes
    for a, b, c in ((0, 1, 2), (0, 2, 1), (1, 2, 0)):
        u, v = s[a], s[b]
        if canonical_slope((u[0] + v[0], u[1] + v[1])) == s[c]:
            return u, v
        if canonical_slope((u[0] - v[0], u[1] - v[1])) == s[c]:
            return u, (-v[0], -v[1])
    raise AssertionError(f"{t} is not a Farey triangle")


def _positive(e: tuple[int, int]) -> bool:
    return e[0] > 0 or (e[0] == 0 and e[1] > 0)


def _prism_tets(t: FareyTriangle, h: int) -> list[tuple[Point, ...]]:
    """Six tetrahedra filling ``t x [h, h+1]``.

    Each edge is oriented along its canonical slope; this is acyclic on every
    triangle, so ordering the three corners source-first gives the staircase
    subdivision and neighbouring prisms agree on every side square.
    """
    u, v = _basis(t)
    w = (u[0] + v[0], u[1] + v[1])
    out = []
    for tri in (((0, 0), u, w), ((0, 0), v, w)):
        def outdeg(p):
            return sum(_positive((q[0] - p[0], q[1] - p[1])) for q in tri if q != p)
        p0, p1, p2 = sorted(tri, key=outdeg, reverse=True)
        lo = [(*p, h) for p in (p0, p1, p2)]
        hi = [(*p, h + 1) for p in (p0, p1, p2)]
        out += [(lo[0], lo[1], lo[2], hi[2]),
                (lo[0], lo[1], hi[1], hi[2]),
                (lo[0], hi[0], hi[1], hi[2])]
    return out


def _flip_tet(t: FareyTriangle, k: int, h: int) -> tuple[Point, ...]:
    """Tetrahedron ``(0, w, u, v)`` taking diagonal ``w = u + v`` to ``u - v``."""
    w0 = t.slopes[k]
    x, y = (s for j, s in enumerate(t.slopes) if j != k)
    if canonical_slope((x[0] + y[0], x[1] + y[1])) == w0:
        u, v = x, y
    else:
        u, v = x, (-y[0], -y[1])
    w = (u[0] + v[0], u[1] + v[1])
    return ((0, 0, h), (*w, h), (*u, h), (*v, h))


def _face(pts: tuple[Point, ...], f: int) -> list[tuple[int, Point]]:
    return [(k, p) for k, p in enumerate(pts) if k != f]


def _normalize(face: list[tuple[int, Point]], M: Sl2Matrix | None = None, height=None):
    pts = []
    for k, (x, y, h) in face:
        if M is not None:
            x, y = M.apply((x, y))
        pts.append((k, x, y, h if height is None else height))
    bx, by = min((x, y) for _, x, y, _ in pts)
    return {(x - bx, y - by, h): k for k, x, y, h in pts}


# -- the triangulation ------------------------------------------------------------

@dataclass
class LayeredTriangulation:
    """Gluing table: ``gluings[t][f] = (t', perm)`` with ``perm`` the images of
    the vertices ``0..3`` of ``t``; face ``f`` goes to face ``perm[f]``."""

    gluings: list[list[tuple[int, Perm]]]
    layers: list[int]

    @property
    def tetrahedra(self) -> int:
        return len(self.gluings)

    def to_dict(self) -> dict:
        rows = [[t, f, t2, perm[f], list(perm)]
                for t, faces in enumerate(self.gluings) for f, (t2, perm) in enumerate(faces)]
        return {"tetrahedra": self.tetrahedra, "gluings": rows, "layers": list(self.layers)}

    @classmethod
    def from_dict(cls, data: dict) -> "LayeredTriangulation":
        n = int(data["tetrahedra"])
        table: list[list] = [[None] * 4 for _ in range(n)]
        for t, f, t2, f2, perm in data["gluings"]:
            perm = tuple(int(p) for p in perm)
            if perm[f] != f2:
                raise TriangulationError("gluing table", f"face {f2} != perm[{f}] = {perm[f]}")
            table[t][f] = (int(t2), perm)
        for t, faces in enumerate(table):
            for f, g in enumerate(faces):
                if g is None:
                    raise TriangulationError("face pairing", f"face {f} of tet {t} unglued")
        layers = list(data.get("layers", [0] * n))
        return cls(table, layers)

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict()) + "\n")

    @classmethod
    def load(cls, path) -> "LayeredTriangulation":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def relabel(self, order: list[int]) -> "LayeredTriangulation":
        """Renumber so that old tetrahedron ``order[j]`` becomes ``j``."""
        new_of = {old: j for j, old in enumerate(order)}
        if sorted(order) != list(range(self.tetrahedra)):
            raise ValueError("order must be a permutation of the tetrahedra")
        table = [[(new_of[t2], perm) for t2, perm in self.gluings[old]] for old in order]
        return LayeredTriangulation(table, [self.layers[old] for old in order])


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}
        self.parity: dict = {}

    def find(self, x):
        if x not in self.parent:
            self.parent[x] = x
            self.parity[x] = 0
            return x, 0
        p = 0
        root = x
        while self.parent[root] != root:
            p ^= self.parity[root]
            root = self.parent[root]
        # path compression, keeping parities relative to the root
        node, q = x, p
        while self.parent[node] != root and node != root:
            nxt, nq = self.parent[node], q ^ self.parity[node]
            self.parent[node], self.parity[node] = root, q
            node, q = nxt, nq
        return root, p

    def union(self, a, b, parity: int = 0) -> bool:
        """Record ``a ~ b`` with relative parity; False on a contradiction."""
        ra, pa = self.find(a)
        rb, pb = self.find(b)
        if ra == rb:
            return (pa ^ pb) == parity
        self.parent[rb] = ra
        self.parity[rb] = pa ^ pb ^ parity
        return True

    def classes(self, items) -> dict:
        return {x: self.find(x)[0] for x in items}


def _sign(perm: Perm) -> int:
    s = 1
    for i in range(4):
        for j in range(i + 1, 4):
            if perm[i] > perm[j]:
                s = -s
    return s


@dataclass(frozen=True)
class CheckReport:
    tetrahedra: int
    vertices: int
    edges: int
    faces: int
    euler: int
    link_euler: tuple[int, ...]

    def __str__(self) -> str:
        return (f"T={self.tetrahedra} V={self.vertices} E={self.edges} F={self.faces} "
                f"chi={self.euler} links={list(self.link_euler)}")


def _cells(tri: LayeredTriangulation):
    n = tri.tetrahedra
    verts = _UnionFind()
    edges = _UnionFind()
    for t in range(n):
        for f in range(4):
            t2, perm = tri.gluings[t][f]
            for v in range(4):
                if v != f:
                    verts.union((t, v), (t2, perm[v]))
            for a in range(4):
                for b in range(a + 1, 4):
                    if f in (a, b):
                        continue
                    pa, pb = perm[a], perm[b]
                    other = (t2, min(pa, pb), max(pa, pb))
                    if not edges.union((t, a, b), other, int(pa > pb)):
                        raise TriangulationError(
                            "edge orientation", f"edge {a}{b} of tet {t} is glued to itself reversed")
    return verts, edges


def check(tri: LayeredTriangulation) -> CheckReport:
    """Verify that ``tri`` is an oriented closed 3-manifold triangulation.

    Raises :class:`TriangulationError` naming the first failed invariant.
    """
    n = tri.tetrahedra
    if n == 0:
        raise TriangulationError("face pairing", "no tetrahedra")
    # face pairing is an involution without fixed faces
    for t in range(n):
        if len(tri.gluings[t]) != 4:
            raise TriangulationError("face pairing", f"tet {t} does not have four faces")
        for f in range(4):
            t2, perm = tri.gluings[t][f]
            if not 0 <= t2 < n or sorted(perm) != [0, 1, 2, 3]:
                raise TriangulationError("face pairing", f"bad target for ({t}, {f})")
            f2 = perm[f]
            if (t2, f2) == (t, f):
                raise TriangulationError("face pairing", f"face {f} of tet {t} glued to itself")
            back_t, back = tri.gluings[t2][f2]
            if back_t != t or any(back[perm[v]] != v for v in range(4)):
                raise TriangulationError("face pairing", f"gluing of ({t}, {f}) is not an involution")
    # orientability: neighbouring tetrahedra induce opposite orientations
    eps: list[int | None] = [None] * n
    for root in range(n):
        if eps[root] is not None:
            continue
        eps[root] = 1
        stack = [root]
        while stack:
            t = stack.pop()
            for t2, perm in tri.gluings[t]:
                want = -eps[t] * _sign(perm)
                if eps[t2] is None:
                    eps[t2] = want
                    stack.append(t2)
                elif eps[t2] != want:
                    raise TriangulationError("orientability", f"tets {t} and {t2} disagree")
    verts, edges = _cells(tri)
    vclass = verts.classes([(t, v) for t in range(n) for v in range(4)])
    eclass = edges.classes([(t, a, b) for t in range(n) for a in range(4) for b in range(a + 1, 4)])
    V, E, F = len(set(vclass.values())), len(set(eclass.values())), 2 * n
    chi = V - E + F - n
    if chi != 0:
        raise TriangulationError("euler characteristic", f"V - E + F - T = {chi}, expected 0")
    # vertex links: the corner of tet t at v is a triangle with corners (t, v, w)
    link = _UnionFind()
    for t in range(n):
        for f in range(4):
            t2, perm = tri.gluings[t][f]
            for v in range(4):
                for w in range(4):
                    if v != w and f not in (v, w):
                        link.union((t, v, w), (t2, perm[v], perm[w]))
    link_v: dict = {}
    corners: dict = {}
    for t in range(n):
        for v in range(4):
            cls = vclass[(t, v)]
            corners[cls] = corners.get(cls, 0) + 1
            for w in range(4):
                if w != v:
                    link_v.setdefault(cls, set()).add(link.find((t, v, w))[0])
    link_chi = []
    for cls in sorted(corners):
        c = corners[cls]
        x = len(link_v[cls]) - 3 * c // 2 + c
        if x != 2:
            raise TriangulationError("vertex link", f"link of a vertex has Euler characteristic {x}")
        link_chi.append(x)
    return CheckReport(n, V, E, F, chi, tuple(link_chi))


def is_valid(tri: LayeredTriangulation) -> bool:
    try:
        check(tri)
    except TriangulationError:
        return False
    return True


# -- construction -------------------------------------------------------------------

class _Builder:
    def __init__(self):
        self.tets: list[tuple[Point, ...]] = []
        self.layers: list[int] = []
        self.table: list[list] = []

    def add(self, pts, layer: int) -> int:
        self.tets.append(tuple(pts))
        self.layers.append(layer)
        self.table.append([None] * 4)
        return len(self.tets) - 1

    def glue(self, a: tuple[int, int], b: tuple[int, int], M: Sl2Matrix | None = None,
             height=None) -> None:
        """Glue face ``a`` to face ``b``; ``M`` and ``height`` move face ``a``
        onto ``b`` first (used for the closing identification)."""
        (t, f), (t2, f2) = a, b
        na = _normalize(_face(self.tets[t], f), M, height)
        nb = _normalize(_face(self.tets[t2], f2))
        if na.keys() != nb.keys():
            raise TriangulationError("gluing", f"faces ({t},{f}) and ({t2},{f2}) do not match")
        perm = [0] * 4
        perm[f] = f2
        for p, k in na.items():
            perm[k] = nb[p]
        perm = tuple(perm)
        inv = [0] * 4
        for k in range(4):
            inv[perm[k]] = k
        if self.table[t][f] is not None or self.table[t2][f2] is not None:
            raise TriangulationError("face pairing", "face glued twice")
        self.table[t][f] = (t2, perm)
        self.table[t2][f2] = (t, tuple(inv))

    def key(self, t: int, f: int, M: Sl2Matrix | None = None, height=None):
        return frozenset(_normalize(_face(self.tets[t], f), M, height))

    def result(self) -> LayeredTriangulation:
        for t, row in enumerate(self.table):
            for f, g in enumerate(row):
                if g is None:
                    raise TriangulationError("face pairing", f"face {f} of tet {t} left open")
        return LayeredTriangulation([list(r) for r in self.table], list(self.layers))


def _match_open(b: _Builder, open_faces: dict, t: int, f: int) -> None:
    k = b.key(t, f)
    if k not in open_faces:
        raise TriangulationError("gluing", f"no exposed face matches ({t}, {f})")
    b.glue(open_faces.pop(k), (t, f))


def layer(path: FlipPath, A: Sl2Matrix) -> LayeredTriangulation:
    """Closed layered triangulation of the mapping torus of ``A``.

    Each sheet of ``path`` contributes one prism block and one tetrahedron
    per flip, so the size is ``sheets * 6 + len(path)``.  The result is
    checked before it is returned.
    """
    if not path.realizes(A):
        raise ValueError("path does not end at A applied to its start")
    b = _Builder()
    state = path.start
    h = 0
    level = 0
    open_faces: dict = {}
    bottom: dict = {}
    moves = iter(path.moves)
    for sheet, count in enumerate(path.sheets):
        block = [b.add(p, level) for p in _prism_tets(state, h)]
        level += 1
        by_key: dict = {}
        for t in block:
            for f in range(4):
                by_key.setdefault(b.key(t, f), []).append((t, f))
        new_open = {}
        for k, faces in by_key.items():
            heights = {p[2] for p in k}
            if heights == {h}:
                (face,) = faces
                if sheet == 0:
                    bottom[k] = face
                else:
                    _match_open(b, open_faces, *face)
            elif heights == {h + 1}:
                (face,) = faces
                new_open[k] = face
            else:
                if len(faces) != 2:
                    raise TriangulationError("gluing", "prism side faces do not pair up")
                b.glue(*faces)
        if open_faces:
            raise TriangulationError("gluing", "exposed faces left below a prism")
        open_faces = new_open
        h += 1
        for _ in range(count):
            k = next(moves)
            t = b.add(_flip_tet(state, k, h), level)
            level += 1
            _match_open(b, open_faces, t, 3)
            _match_open(b, open_faces, t, 2)
            open_faces[b.key(t, 0)] = (t, 0)
            open_faces[b.key(t, 1)] = (t, 1)
            state = flip(state, k)
    inv = A.inverse()
    for t, f in list(open_faces.values()):
        k = b.key(t, f, inv, 0)
        if k not in bottom:
            raise TriangulationError("closure", "top torus does not match the bottom under A^-1")
        b.glue((t, f), bottom.pop(k), inv, 0)
    tri = b.result()
    check(tri)
    return tri


# -- homology ---------------------------------------------------------------------

@dataclass(frozen=True)
class AbelianGroup:
    """``Z^rank`` plus cyclic torsion factors."""

    rank: int
    torsion: tuple[int, ...] = ()

    def __str__(self) -> str:
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) or "0"


def homology_h1(tri: LayeredTriangulation) -> AbelianGroup:
    """First homology from the cellular chain complex (Smith normal form)."""
    check(tri)
    n = tri.tetrahedra
    verts, edges = _cells(tri)
    vroots = sorted({verts.find((t, v))[0] for t in range(n) for v in range(4)})
    vidx = {r: i for i, r in enumerate(vroots)}
    eroots = sorted({edges.find((t, a, b))[0]
                     for t in range(n) for a in range(4) for b in range(a + 1, 4)})
    eidx = {r: i for i, r in enumerate(eroots)}
    d1 = [[0] * len(eroots) for _ in vroots]
    for j, (t, a, b) in enumerate(eroots):
        d1[vidx[verts.find((t, b))[0]]][j] += 1
        d1[vidx[verts.find((t, a))[0]]][j] -= 1
    faces = []
    for t in range(n):
        for f in range(4):
            t2, perm = tri.gluings[t][f]
            if (t, f) < (t2, perm[f]):
                faces.append((t, f))
    d2 = [[0] * len(faces) for _ in eroots]
    for j, (t, f) in enumerate(faces):
        a, b, c = (v for v in range(4) if v != f)
        for sgn, (x, y) in ((1, (b, c)), (-1, (a, c)), (1, (a, b))):
            root, par = edges.find((t, x, y))
            d2[eidx[root]][j] += -sgn if par else sgn
    z1 = len(eroots) - rank(d1)
    inv = invariant_factors(d2)
    return AbelianGroup(z1 - len(inv), tuple(d for d in inv if d > 1))


def expected_h1(A: Sl2Matrix) -> AbelianGroup:
    """``Z + coker(A - I)`` from the closed-form invariant factors of a 2x2
    integer matrix (independent of :mod:`torusfill.snf`)."""
    from math import gcd
    m = (A.a - 1, A.b, A.c, A.d - 1)
    d1 = gcd(gcd(m[0], m[1]), gcd(m[2], m[3]))
    det = abs(m[0] * m[3] - m[1] * m[2])
    if d1 == 0:
        return AbelianGroup(3)
    if det == 0:
        return AbelianGroup(2, (d1,) if d1 > 1 else ())
    d2 = det // d1
    return AbelianGroup(1, tuple(d for d in (d1, d2) if d > 1))


def coker_h1(A: Sl2Matrix) -> AbelianGroup:
    """``Z + coker(A - I)`` through :func:`torusfill.snf.cokernel`."""
    free, tors = cokernel([[A.a - 1, A.b], [A.c, A.d - 1]])
    return AbelianGroup(1 + free, tuple(tors))


# -- tables -------------------------------------------------------------------------

@dataclass(frozen=True)
class DeltaRow:
    i: int
    tetra_count: int
    flip_distance: int


def cover_triangulation(A: Sl2Matrix, i: int) -> LayeredTriangulation:
    """Triangulation of the mapping torus of ``A^i`` lifted from that of ``A``."""
    return layer(cyclic_cover_path(flip_path(A), A, i), A ** i)


def delta_upper_bound_table(A: Sl2Matrix, i_max: int) -> list[DeltaRow]:
    """Sizes of the verified cover triangulations for ``i = 1..i_max``, with
    the flip distance ``d(A^i t0, t0)`` alongside."""
    _require_nonperiodic(A)
    if i_max < 1:
        raise ValueError("i_max must be at least 1")
    rows = []
    for i in range(1, i_max + 1):
        tri = cover_triangulation(A, i)
        rows.append(DeltaRow(i, tri.tetrahedra, flip_distance_fast(T0, act(A ** i, T0))))
    return rows


def write_delta_csv(rows: list[DeltaRow], path, header: dict | None = None) -> None:
    with open(path, "w", newline="") as fh:
        for key, val in (header or {}).items():
            fh.write(f"# {key}: {val}\n")
        wr = csv.writer(fh)
        wr.writerow(["i", "tetra_count", "flip_distance"])
        for r in rows:
            wr.writerow([r.i, r.tetra_count, r.flip_distance])

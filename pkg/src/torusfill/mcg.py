"""Mapping classes of the torus and the flip graph of one-vertex triangulations.

The mapping class group of ``T^2`` is ``SL(2, Z)``.  A one-vertex
triangulation of the torus is determined by the slopes of its three edges,
three primitive vectors that are pairwise unimodular: a Farey triangle.  Two
such triangulations differ by a flip when they share two slopes, so the flip
graph is the trivalent tree dual to the Farey tessellation.
"""
from __future__ import annotations

import csv
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

Slope = tuple[int, int]


@dataclass(frozen=True)
class Sl2Matrix:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"{self} has determinant {self.a * self.d - self.b * self.c}, not 1")

    @classmethod
    def parse(cls, text: str) -> "Sl2Matrix":
        """Parse ``"a,b,c,d"`` (row major)."""
        parts = [int(p) for p in text.replace(" ", "").split(",")]
        if len(parts) != 4:
            raise ValueError(f"expected four comma separated integers, got {text!r}")
        return cls(*parts)

    @classmethod
    def identity(cls) -> "Sl2Matrix":
        return cls(1, 0, 0, 1)

    @property
    def trace(self) -> int:
        return self.a + self.d

    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.a, self.b), (self.c, self.d))

    def __matmul__(self, o: "Sl2Matrix") -> "Sl2Matrix":
        return Sl2Matrix(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                         self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def inverse(self) -> "Sl2Matrix":
        return Sl2Matrix(self.d, -self.b, -self.c, self.a)

    def __pow__(self, n: int) -> "Sl2Matrix":
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        out = Sl2Matrix.identity()
        while n:
            if n & 1:
                out = out @ base
            base = base @ base
            n >>= 1
        return out

    def apply(self, v: Slope) -> Slope:
        return (self.a * v[0] + self.b * v[1], self.c * v[0] + self.d * v[1])

    def __str__(self) -> str:
        return f"{self.a},{self.b},{self.c},{self.d}"


SHEAR = Sl2Matrix(1, 1, 0, 1)


# -- classification -----------------------------------------------------------

@dataclass(frozen=True)
class Periodic:
    order: int

    def __str__(self) -> str:
        return f"periodic of order {self.order}"


@dataclass(frozen=True)
class ReducibleTwist:
    def __str__(self) -> str:
        return "reducible twist"


@dataclass(frozen=True)
class Anosov:
    def __str__(self) -> str:
        return "Anosov"


MappingClassType = Periodic | ReducibleTwist | Anosov


def classify(A: Sl2Matrix) -> MappingClassType:
    """Periodic / reducible (a power of a Dehn twist, up to sign) / Anosov."""
    t = abs(A.trace)
    if A in (Sl2Matrix.identity(), Sl2Matrix(-1, 0, 0, -1)) or t < 2:
        power = A
        for k in range(1, 13):
            if power == Sl2Matrix.identity():
                return Periodic(k)
            power = power @ A
        raise AssertionError(f"{A} should have finite order")
    if t == 2:
        return ReducibleTwist()
    return Anosov()


def fv_positive(A: Sl2Matrix) -> bool:
    """Whether the integral filling volume of ``A`` on the torus is positive."""
    return isinstance(classify(A), Anosov)


# -- Farey triangles ------------------------------------------------------------

def canonical_slope(v: Slope) -> Slope:
    p, q = v
    if (p, q) == (0, 0):
        raise ValueError("zero vector is not a slope")
    g = gcd(p, q)
    p, q = p // g, q // g
    if p < 0 or (p == 0 and q < 0):
        p, q = -p, -q
    return (p, q)


def _det(u: Slope, v: Slope) -> int:
    return u[0] * v[1] - u[1] * v[0]


@dataclass(frozen=True, eq=False)
class FareyTriangle:
    """Three pairwise unimodular slopes.

    Slopes keep their positions (a flip replaces a slope in place, so
    ``flip(flip(t, j), j) == t``); equality and hashing ignore the order.
    """

    slopes: tuple[Slope, Slope, Slope]

    def __post_init__(self):
        s = tuple(canonical_slope(v) for v in self.slopes)
        if len(s) != 3 or len(set(s)) != 3:
            raise ValueError(f"slopes {s} are not distinct")
        for i in range(3):
            for j in range(i + 1, 3):
                if abs(_det(s[i], s[j])) != 1:
                    raise ValueError(f"slopes {s[i]} and {s[j]} are not unimodular")
        object.__setattr__(self, "slopes", s)

    @property
    def key(self) -> tuple[Slope, Slope, Slope]:
        return tuple(sorted(self.slopes))

    def __eq__(self, other) -> bool:
        if not isinstance(other, FareyTriangle):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    @classmethod
    def of(cls, *slopes: Slope) -> "FareyTriangle":
        return cls(tuple(slopes))

    def index(self, slope: Slope) -> int:
        return self.slopes.index(canonical_slope(slope))

    def size(self) -> int:
        return max(abs(p) + abs(q) for p, q in self.slopes)

    def __repr__(self) -> str:
        return "{" + ", ".join(f"({p},{q})" for p, q in self.slopes) + "}"


T0 = FareyTriangle.of((1, 0), (0, 1), (1, 1))
# the other end of the central edge of the Farey dual tree
T0_PRIME = FareyTriangle.of((1, 0), (0, 1), (1, -1))


def act(A: Sl2Matrix, t: FareyTriangle) -> FareyTriangle:
    return FareyTriangle(tuple(A.apply(v) for v in t.slopes))


def flip(t: FareyTriangle, index: int) -> FareyTriangle:
    """Replace slope ``index`` by the other diagonal of the quadrilateral
    formed by the two triangles of ``t``."""
    if index not in (0, 1, 2):
        raise IndexError("flip index must be 0, 1 or 2")
    w = t.slopes[index]
    u, v = (s for k, s in enumerate(t.slopes) if k != index)
    plus = canonical_slope((u[0] + v[0], u[1] + v[1]))
    minus = canonical_slope((u[0] - v[0], u[1] - v[1]))
    slopes = list(t.slopes)
    slopes[index] = minus if plus == w else plus
    return FareyTriangle(tuple(slopes))


def neighbours(t: FareyTriangle) -> list[FareyTriangle]:
    return [flip(t, i) for i in range(3)]


def flip_distance_bfs(t0: FareyTriangle, t1: FareyTriangle, cap: int = 18) -> int | None:
    """Exact flip distance by bidirectional breadth-first search, or ``None``
    if it exceeds ``cap``."""
    if t0 == t1:
        return 0
    dist = ({t0: 0}, {t1: 0})
    frontier = (deque([t0]), deque([t1]))
    depth = [0, 0]
    while frontier[0] and frontier[1] and depth[0] + depth[1] < cap:
        side = 0 if len(frontier[0]) <= len(frontier[1]) else 1
        here, there = dist[side], dist[1 - side]
        depth[side] += 1
        best = None
        for _ in range(len(frontier[side])):
            t = frontier[side].popleft()
            for n in neighbours(t):
                if n in here:
                    continue
                here[n] = depth[side]
                if n in there:
                    cand = depth[side] + there[n]
                    best = cand if best is None else min(best, cand)
                frontier[side].append(n)
        if best is not None:
            return best if best <= cap else None
    return None


def parent(t: FareyTriangle) -> FareyTriangle | None:
    """Neighbour of ``t`` one step closer to the central edge ``T0 -- T0'``;
    ``None`` for the two central triangles."""
    if t in (T0, T0_PRIME):
        return None
    sizes = [abs(p) + abs(q) for p, q in t.slopes]
    return flip(t, sizes.index(max(sizes)))


def _path_to_centre(t: FareyTriangle) -> list[FareyTriangle]:
    path = [t]
    while (p := parent(path[-1])) is not None:
        path.append(p)
    return path


def flip_distance_fast(t0: FareyTriangle, t1: FareyTriangle) -> int:
    """Flip distance through the Farey dual tree.

    Each triangle is walked to the central edge by repeatedly flipping its
    largest slope (one step of the Euclidean algorithm on that slope); the
    distance is read off at the lowest common ancestor.
    """
    p0, p1 = _path_to_centre(t0), _path_to_centre(t1)
    if p0[-1] != p1[-1]:
        return len(p0) + len(p1) - 1
    i, j = len(p0) - 1, len(p1) - 1
    while i > 0 and j > 0 and p0[i - 1] == p1[j - 1]:
        i -= 1
        j -= 1
    return i + j


def flip_path_between(t0: FareyTriangle, t1: FareyTriangle) -> list[int]:
    """Flip indices of the geodesic from ``t0`` to ``t1`` in the dual tree."""
    p0, p1 = _path_to_centre(t0), _path_to_centre(t1)
    if p0[-1] != p1[-1]:
        route = p0 + p1[::-1]
    else:
        i, j = len(p0) - 1, len(p1) - 1
        while i > 0 and j > 0 and p0[i - 1] == p1[j - 1]:
            i -= 1
            j -= 1
        route = p0[:i + 1] + p1[:j][::-1]
    # replay from t0 so that indices refer to the actual slope positions
    moves = []
    state = t0
    for b in route[1:]:
        k = next(k for k in range(3) if flip(state, k) == b)
        moves.append(k)
        state = flip(state, k)
    return moves


@dataclass(frozen=True)
class GrowthRow:
    i: int
    distance: int
    ratio: Fraction

    @property
    def spine_proxy(self) -> int:
        # a flip is one contraction followed by one expansion of a spine edge
        return 2 * self.distance


def spine_growth_table(A: Sl2Matrix, i_max: int, t0: FareyTriangle = T0) -> list[GrowthRow]:
    """Flip distances ``d(A^i t0, t0)`` and ratios ``d / i`` for ``i <= i_max``."""
    kind = classify(A)
    if isinstance(kind, Periodic):
        raise ValueError(f"{A} is {kind}; the distance stays bounded")
    rows = []
    for i in range(1, i_max + 1):
        d = flip_distance_fast(t0, act(A ** i, t0))
        rows.append(GrowthRow(i, d, Fraction(d, i)))
    return rows


def write_growth_csv(rows: list[GrowthRow], path, header: dict | None = None) -> None:
    with open(path, "w", newline="") as fh:
        for key, val in (header or {}).items():
            fh.write(f"# {key}: {val}\n")
        wr = csv.writer(fh)
        wr.writerow(["i", "distance", "ratio_num", "ratio_den", "spine_proxy"])
        for r in rows:
            wr.writerow([r.i, r.distance, r.ratio.numerator, r.ratio.denominator, r.spine_proxy])

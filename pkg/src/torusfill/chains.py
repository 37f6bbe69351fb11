"""Straight singular chains on flat tori ``T^m = R^m / Z^m``.

A straight simplex is the image in the torus of an affine simplex in ``R^m``.
Two vertex tuples that differ by one integer translation give the same
singular simplex, so every simplex is stored through its canonical lift:
the unique translate whose first vertex lies in ``[0, 1)^m``.  Vertex order
is significant and degenerate simplices are allowed.

All coordinates are :class:`fractions.Fraction`; nothing here touches floats.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

Point = tuple[Fraction, ...]


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point coordinates are not accepted")
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return Fraction(int(x[0]), int(x[1]))
    return Fraction(x)


def _as_point(p) -> Point:
    if isinstance(p, (int, Fraction)):
        return (_as_fraction(p),)
    return tuple(_as_fraction(x) for x in p)


@dataclass(frozen=True, order=True)
class StraightSimplex:
    """A straight simplex on ``T^m`` kept in canonical form.

    Build instances with :func:`canonicalize`; the constructor trusts its input.
    """

    vertices: tuple[Point, ...]

    @property
    def ambient_dim(self) -> int:
        return len(self.vertices[0])

    @property
    def degree(self) -> int:
        return len(self.vertices) - 1

    def faces(self) -> Iterator[tuple[int, "StraightSimplex"]]:
        """Yield ``(sign, face)`` for the alternating face sum."""
        for i in range(len(self.vertices)):
            yield (-1) ** i, canonicalize(self.vertices[:i] + self.vertices[i + 1:])

    def spread(self) -> tuple[Fraction, ...]:
        """Per-coordinate extent ``max - min`` of the vertices."""
        return tuple(max(c) - min(c) for c in zip(*self.vertices))

    def __repr__(self) -> str:
        def fmt(p):
            s = ",".join(str(x) for x in p)
            return s if len(p) == 1 else f"({s})"

        return "[" + ", ".join(fmt(p) for p in self.vertices) + "]"


def canonicalize(vertices: Iterable) -> StraightSimplex:
    """Return the simplex spanned by ``vertices``, translated so the first
    vertex lies in ``[0, 1)^m``.

    Points may be sequences of numbers or, on the circle, bare numbers.
    """
    pts = [_as_point(p) for p in vertices]
    if not pts:
        raise ValueError("a simplex needs at least one vertex")
    m = len(pts[0])
    if m == 0 or any(len(p) != m for p in pts):
        raise ValueError("all vertices must have the same positive dimension")
    shift = [math.floor(x) for x in pts[0]]
    if any(shift):
        pts = [tuple(x - s for x, s in zip(p, shift)) for p in pts]
    return StraightSimplex(tuple(pts))


class Chain:
    """Finite integral (or rational) combination of straight simplices.

    Chains are immutable; the arithmetic operators return new chains.  Zero
    coefficients are never stored.  ``ambient_dim`` and ``degree`` must be
    given explicitly so that the zero chain still knows where it lives.
    """

    __slots__ = ("ambient_dim", "degree", "_terms", "_hash")

    def __init__(self, ambient_dim: int, degree: int,
                 terms: Mapping[StraightSimplex, int | Fraction] | None = None):
        self.ambient_dim = ambient_dim
        self.degree = degree
        clean = {}
        for s, c in (terms or {}).items():
            if s.ambient_dim != ambient_dim or s.degree != degree:
                raise ValueError(
                    f"simplex {s!r} does not live in C_{degree}(T^{ambient_dim})")
            if c:
                clean[s] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def from_terms(cls, ambient_dim: int, degree: int,
                   pairs: Iterable[tuple[int | Fraction, Sequence]]) -> "Chain":
        """Build a chain from ``(coeff, vertex_tuple)`` pairs, canonicalizing
        and combining repeated simplices."""
        acc: dict[StraightSimplex, int | Fraction] = {}
        for coeff, verts in pairs:
            s = canonicalize(verts)
            acc[s] = acc.get(s, 0) + coeff
        return cls(ambient_dim, degree, acc)

    @classmethod
    def zero(cls, ambient_dim: int, degree: int) -> "Chain":
        return cls(ambient_dim, degree)

    @classmethod
    def simplex(cls, vertices: Sequence, coeff: int | Fraction = 1) -> "Chain":
        s = canonicalize(vertices)
        return cls(s.ambient_dim, s.degree, {s: coeff})

    @property
    def terms(self) -> dict[StraightSimplex, int | Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def support(self) -> list[StraightSimplex]:
        return sorted(self._terms)

    def coefficient(self, s: StraightSimplex) -> int | Fraction:
        return self._terms.get(s, 0)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_integral(self) -> bool:
        return all(Fraction(c).denominator == 1 for c in self._terms.values())

    def _check_compatible(self, other: "Chain") -> None:
        if (self.ambient_dim, self.degree) != (other.ambient_dim, other.degree):
            raise ValueError(
                f"cannot combine C_{self.degree}(T^{self.ambient_dim}) "
                f"with C_{other.degree}(T^{other.ambient_dim})")

    def __add__(self, other: "Chain") -> "Chain":
        self._check_compatible(other)
        acc = dict(self._terms)
        for s, c in other._terms.items():
            acc[s] = acc.get(s, 0) + c
        return Chain(self.ambient_dim, self.degree, acc)

    def __neg__(self) -> "Chain":
        return Chain(self.ambient_dim, self.degree, {s: -c for s, c in self._terms.items()})

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def __rmul__(self, n: int | Fraction) -> "Chain":
        return Chain(self.ambient_dim, self.degree, {s: n * c for s, c in self._terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, Chain):
            return NotImplemented
        return (self.ambient_dim == other.ambient_dim and self.degree == other.degree
                and self._terms == other._terms)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ambient_dim, self.degree, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        if not self._terms:
            return f"Chain(0 in C_{self.degree}(T^{self.ambient_dim}))"
        parts = []
        for s in self.support():
            c = self._terms[s]
            parts.append(f"{'+' if c > 0 else '-'} {abs(c) if abs(c) != 1 else ''}{s!r}")
        return " ".join(parts)


def add(a: Chain, b: Chain) -> Chain:
    return a + b


def negate(c: Chain) -> Chain:
    return -c


def scale(n: int | Fraction, c: Chain) -> Chain:
    return n * c


def boundary(c: Chain) -> Chain:
    """Singular boundary, with every face canonicalized before combining."""
    if c.degree < 1:
        raise ValueError("boundary of a 0-chain is not defined here")
    acc: dict[StraightSimplex, int | Fraction] = {}
    for s, coeff in c.items():
        for sign, face in s.faces():
            acc[face] = acc.get(face, 0) + sign * coeff
    return Chain(c.ambient_dim, c.degree - 1, acc)


def l1_norm(c: Chain) -> int | Fraction:
    return sum((abs(v) for _, v in c.items()), 0)


@dataclass(frozen=True)
class AffineTorusMap:
    """The map ``T^m -> T^n`` induced by ``x -> M x + t``.

    ``matrix`` is an ``n x m`` integer matrix, stored as a tuple of rows, and
    ``translation`` a vector of ``n`` rationals.  Integrality of ``matrix`` is
    exactly what makes the map descend to the tori.
    """

    matrix: tuple[tuple[int, ...], ...]
    translation: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.matrix)
        if not rows or not rows[0] or any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("matrix must be a non-empty rectangular array")
        for r in rows:
            for x in r:
                if isinstance(x, bool) or not isinstance(x, int):
                    if isinstance(x, Fraction) and x.denominator == 1:
                        continue
                    raise ValueError("matrix entries of a torus map must be integers")
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        object.__setattr__(self, "matrix", rows)
        t = self.translation
        t = tuple(Fraction(0) for _ in rows) if t is None else _as_point(t)
        if len(t) != len(rows):
            raise ValueError("translation has the wrong length")
        object.__setattr__(self, "translation", t)

    @property
    def domain_dim(self) -> int:
        return len(self.matrix[0])

    @property
    def codomain_dim(self) -> int:
        return len(self.matrix)

    @classmethod
    def identity(cls, m: int) -> "AffineTorusMap":
        return cls(tuple(tuple(int(i == j) for j in range(m)) for i in range(m)))

    def __call__(self, p: Sequence) -> Point:
        return tuple(sum((a * x for a, x in zip(row, p)), Fraction(0)) + t
                     for row, t in zip(self.matrix, self.translation))

    def compose(self, other: "AffineTorusMap") -> "AffineTorusMap":
        """``self o other``."""
        if other.codomain_dim != self.domain_dim:
            raise ValueError("dimension mismatch in composition")
        mat = tuple(tuple(sum(self.matrix[i][k] * other.matrix[k][j]
                              for k in range(self.domain_dim))
                          for j in range(other.domain_dim))
                    for i in range(self.codomain_dim))
        shift = self(other.translation)
        return AffineTorusMap(mat, shift)

    def power(self, n: int) -> "AffineTorusMap":
        if n < 0 or self.domain_dim != self.codomain_dim:
            raise ValueError("only non-negative powers of self-maps")
        result = AffineTorusMap.identity(self.domain_dim)
        base = self
        while n:
            if n & 1:
                result = base.compose(result)
            base = base.compose(base)
            n >>= 1
        return result

    def determinant(self) -> int:
        if self.domain_dim != self.codomain_dim:
            raise ValueError("determinant of a non-square map")
        return _det([[Fraction(x) for x in r] for r in self.matrix])


def pushforward(phi: AffineTorusMap, c: Chain) -> Chain:
    """Push ``c`` forward along ``phi`` vertex-wise on canonical lifts."""
    if c.ambient_dim != phi.domain_dim:
        raise ValueError(
            f"map expects T^{phi.domain_dim}, chain lives on T^{c.ambient_dim}")
    acc: dict[StraightSimplex, int | Fraction] = {}
    for s, coeff in c.items():
        image = canonicalize(phi(v) for v in s.vertices)
        acc[image] = acc.get(image, 0) + coeff
    return Chain(phi.codomain_dim, c.degree, acc)


def _det(rows: list[list[Fraction]]) -> Fraction:
    n = len(rows)
    a = [r[:] for r in rows]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] / a[col][col]
            if f:
                for k in range(col, n):
                    a[r][k] -= f * a[col][k]
    return det


def signed_volume(s: StraightSimplex) -> Fraction:
    """Signed volume of the canonical lift of a top-dimensional simplex."""
    m = s.ambient_dim
    if s.degree != m:
        raise ValueError("signed volume needs degree == ambient dimension")
    v0 = s.vertices[0]
    rows = [[v[i] - v0[i] for i in range(m)] for v in s.vertices[1:]]
    return _det(rows) / math.factorial(m)


def degree(z: Chain) -> Fraction:
    """Class of a top-dimensional chain in ``H_m(T^m) = Z`` via signed volume.

    For a cycle the value is an integer; for a fundamental cycle it is 1.
    """
    if z.degree != z.ambient_dim:
        raise ValueError("degree is defined for m-chains on T^m only")
    return sum((c * signed_volume(s) for s, c in z.items()), Fraction(0))


# -- JSON chain format ------------------------------------------------------

def _encode_point(p: Point) -> list[list[int]]:
    return [[x.numerator, x.denominator] for x in p]


def chain_to_dict(c: Chain) -> dict:
    terms = []
    for s in c.support():
        coeff = c.coefficient(s)
        if isinstance(coeff, Fraction) and coeff.denominator != 1:
            enc = [coeff.numerator, coeff.denominator]
        else:
            enc = int(coeff)
        terms.append({"coeff": enc, "vertices": [_encode_point(v) for v in s.vertices]})
    return {"ambient_dim": c.ambient_dim, "degree": c.degree, "terms": terms}


def chain_from_dict(data: Mapping) -> Chain:
    m, d = int(data["ambient_dim"]), int(data["degree"])
    pairs = []
    for t in data["terms"]:
        coeff = t["coeff"]
        coeff = Fraction(coeff[0], coeff[1]) if isinstance(coeff, list) else int(coeff)
        verts = t["vertices"]
        if len(verts) != d + 1:
            raise ValueError(f"term has {len(verts)} vertices, expected {d + 1}")
        pts = [_as_point(v) for v in verts]
        if any(len(p) != m for p in pts):
            raise ValueError("vertex dimension does not match ambient_dim")
        pairs.append((coeff, pts))
    c = Chain.from_terms(m, d, pairs)
    return Chain(m, d, {s: (int(v) if Fraction(v).denominator == 1 else v) for s, v in c.items()})


def dump_chain(c: Chain, path) -> None:
    with open(path, "w") as fh:
        json.dump(chain_to_dict(c), fh, indent=1)


def load_chain(path) -> Chain:
    with open(path) as fh:
        return chain_from_dict(json.load(fh))

"""Explicit chains and maps behind the vanishing of the integral filling
volume of the Dehn twist on the torus.

Everything here is built from the shear ``f = [[1, 1], [0, 1]]``, the
fundamental cycle ``c`` of ``T^2`` and the projections
``phi_k^i(x, y) = 2^i x + 2^(2k-i) y`` onto the circle.  For ``n = 4^k`` the
chain ``W_k = tau_k - gamma_*(omega_k)`` fills ``f^n_*(c) - c`` with norm at
most ``3 + k (|alpha| + |beta|)``, where ``alpha`` and ``beta`` are fixed
3-chains with ``d alpha = a - c`` and ``d beta = c - b``.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .chains import (AffineTorusMap, Chain, boundary, chain_from_dict, chain_to_dict,
                     degree, l1_norm, pushforward)

HALF = Fraction(1, 2)
PAIR_FORMAT_VERSION = 1


class IdentityError(AssertionError):
    """A chain identity that should hold exactly does not."""


def _t2(*terms) -> Chain:
    return Chain.from_terms(2, len(terms[0][1]) - 1, terms)


def _s1(*terms) -> Chain:
    return Chain.from_terms(1, len(terms[0][1]) - 1,
                            [(c, [(v,) for v in vs]) for c, vs in terms])


def make_c() -> Chain:
    """The fundamental cycle ``[(0,0),(1,0),(1,1)] - [(0,0),(0,1),(1,1)]``."""
    return _t2((1, [(0, 0), (1, 0), (1, 1)]),
               (-1, [(0, 0), (0, 1), (1, 1)]))


def make_a() -> Chain:
    """``c`` refined by cutting the square along ``y = 1/2``."""
    return _t2((1, [(0, 0), (1, 0), (1, HALF)]),
               (-1, [(0, 0), (0, HALF), (1, HALF)]),
               (1, [(0, HALF), (1, HALF), (1, 1)]),
               (-1, [(0, HALF), (0, 1), (1, 1)]))


def make_b() -> Chain:
    """``c`` refined by cutting the square along ``x = 1/2``."""
    return _t2((1, [(0, 0), (HALF, 0), (HALF, 1)]),
               (-1, [(0, 0), (0, 1), (HALF, 1)]),
               (1, [(HALF, 0), (1, 0), (1, 1)]),
               (-1, [(HALF, 0), (HALF, 1), (1, 1)]))


def _check_k(k: int) -> None:
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")


def make_tau(k: int) -> Chain:
    """The prism chain with ``d tau_k + b_k = f^(4^k)_*(c) - c``."""
    _check_k(k)
    n = 4 ** k
    return _t2((1, [(0, 0), (1, 0), (n + 1, 0), (n + 1, 1)]),
               (-1, [(0, 0), (n, 0), (n + 1, 0), (n + 1, 1)]),
               (1, [(0, 0), (n, 0), (n, 1), (n + 1, 1)]))


def make_bk(k: int) -> Chain:
    _check_k(k)
    n = 4 ** k
    return _t2((1, [(0, 0), (1, 0), (n + 1, 0)]),
               (-1, [(0, 0), (n, 0), (n + 1, 0)]))


def make_s(k: int, i: int) -> Chain:
    """``[0, 2^i, 2^(2k-i) + 2^i] - [0, 2^(2k-i), 2^(2k-i) + 2^i]`` on the circle.

    The two terms coincide, and the chain vanishes, exactly at ``i = k``.
    """
    _check_k(k)
    if not 0 <= i <= 2 * k:
        raise ValueError(f"index i={i} outside 0..{2 * k}")
    p, q = 2 ** i, 2 ** (2 * k - i)
    return _s1((1, [0, p, q + p]), (-1, [0, q, q + p]))


def make_phi(k: int, i: int) -> AffineTorusMap:
    _check_k(k)
    if not 0 <= i <= 2 * k:
        raise ValueError(f"index i={i} outside 0..{2 * k}")
    return AffineTorusMap(((2 ** i, 2 ** (2 * k - i)),))


def gamma() -> AffineTorusMap:
    """The circle ``t -> (t, 0)`` inside the torus."""
    return AffineTorusMap(((1,), (0,)))


def dehn_twist(power: int = 1) -> AffineTorusMap:
    return AffineTorusMap(((1, power), (0, 1)))


# -- the filling pair -------------------------------------------------------

@dataclass(frozen=True)
class FillingPair:
    """3-chains with ``d alpha = a - c`` and ``d beta = c - b``.

    The identities are re-checked on construction.
    """

    alpha: Chain
    beta: Chain
    provenance: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if boundary(self.alpha) != make_a() - make_c():
            raise IdentityError("boundary(alpha) != a - c")
        if boundary(self.beta) != make_c() - make_b():
            raise IdentityError("boundary(beta) != c - b")

    @property
    def norm(self) -> int:
        return l1_norm(self.alpha) + l1_norm(self.beta)

    def to_dict(self) -> dict:
        return {"alpha": chain_to_dict(self.alpha), "beta": chain_to_dict(self.beta),
                "provenance": dict(self.provenance)}

    @classmethod
    def from_dict(cls, data: dict) -> "FillingPair":
        return cls(chain_from_dict(data["alpha"]), chain_from_dict(data["beta"]),
                   dict(data.get("provenance", {})))

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=1) + "\n")

    @classmethod
    def load(cls, path) -> "FillingPair":
        return cls.from_dict(json.loads(Path(path).read_text()))


def default_pair_path():
    return resources.files("torusfill") / "data" / "filling_pair.json"


def load_filling_pair(path=None) -> FillingPair:
    """Load the cached pair shipped with the package (or from ``path``)."""
    if path is None:
        return FillingPair.from_dict(json.loads(default_pair_path().read_text()))
    return FillingPair.load(path)


def solve_alpha_beta(q: int = 2, D: int = 2, *, max_D: int = 4, max_q: int = 4,
                     **solver_opts) -> FillingPair:
    """Compute minimal-norm integral fillings of ``a - c`` and ``c - b``.

    Starts from the finite model with grid ``1/q`` and spread ``D``; if either
    target is not a boundary there, enlarges ``D`` and then ``q``.
    """
    from .filling import ModelInfeasible, build_model, fill_int

    a, b, c = make_a(), make_b(), make_c()
    tried = []
    for qq in range(q, max_q + 1, q):
        for dd in range(D, max_D + 1):
            model = build_model(2, 2, qq, dd, **{k: v for k, v in solver_opts.items()
                                                 if k == "max_universe"})
            try:
                alpha = fill_int(model, a - c, **{k: v for k, v in solver_opts.items()
                                                  if k == "node_cap"})
                beta = fill_int(model, c - b, **{k: v for k, v in solver_opts.items()
                                                 if k == "node_cap"})
            except ModelInfeasible:
                tried.append((qq, dd))
                continue
            from . import __version__
            prov = {"q": qq, "D": dd, "solver_version": __version__,
                    "alpha_value": str(alpha.value), "beta_value": str(beta.value),
                    "alpha_lp_value": str(alpha.lp_value), "beta_lp_value": str(beta.lp_value)}
            return FillingPair(alpha.witness, beta.witness, prov)
    raise ValueError(f"a - c or c - b is not a boundary in any model tried: {tried}")


# -- Step 3 -----------------------------------------------------------------

def make_omega(k: int, pair: FillingPair) -> Chain:
    """``sum_{i<k} (phi_k^i)_* alpha + (phi_k^(i+1))_* beta``.

    The beta term is pushed forward by ``phi_k^(i+1)``: that is the index
    pairing under which the boundary telescopes to ``-s_k^0``.
    """
    _check_k(k)
    omega = Chain.zero(1, 3)
    for i in range(k):
        omega = omega + pushforward(make_phi(k, i), pair.alpha) \
            + pushforward(make_phi(k, i + 1), pair.beta)
    return omega


def make_omega_literal(k: int, pair: FillingPair) -> Chain:
    """The same sum with both terms pushed forward by ``phi_k^i``.

    Kept only to show that this pairing does not fill ``-s_k^0``.
    """
    _check_k(k)
    omega = Chain.zero(1, 3)
    for i in range(k):
        phi = make_phi(k, i)
        omega = omega + pushforward(phi, pair.alpha) + pushforward(phi, pair.beta)
    return omega


def make_filling_W(k: int, pair: FillingPair) -> Chain:
    """``W_k = tau_k - gamma_*(omega_k)``, a filling of ``f^(4^k)_*(c) - c``."""
    return make_tau(k) - pushforward(gamma(), make_omega(k, pair))


def twisted_difference(k: int) -> Chain:
    """``f^(4^k)_*(c) - c``."""
    c = make_c()
    return pushforward(dehn_twist(4 ** k), c) - c


@dataclass(frozen=True)
class FvBound:
    k: int
    n: int
    filling: Chain
    bound: Fraction

    @property
    def norm(self) -> int:
        return l1_norm(self.filling)


def fv_upper_bounds(k_max: int, pair: FillingPair, twist: AffineTorusMap | None = None
                    ) -> list[FvBound]:
    """Certified upper bounds ``|W_k| / 4^k`` on the integral filling volume.

    ``twist`` defaults to the Dehn twist; passing the identity gives the
    trivial zero filling at every ``k``.
    """
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    twist = dehn_twist() if twist is None else twist
    c = make_c()
    identity = twist == AffineTorusMap.identity(2)
    out = []
    for k in range(1, k_max + 1):
        n = 4 ** k
        target = pushforward(twist.power(n), c) - c
        w = Chain.zero(2, 3) if identity else make_filling_W(k, pair)
        if boundary(w) != target:
            raise IdentityError(f"W_{k} does not fill f^{n}_*(c) - c")
        out.append(FvBound(k, n, w, Fraction(l1_norm(w), n)))
    return out


def isv_upper_bound(z: Chain, w: Chain, f: AffineTorusMap | None = None) -> int:
    """Bound ``(m + 1)|z| + |w|`` on the integral simplicial volume of the
    mapping torus of ``f``, given ``d w = f_*(z) - z``.

    When ``f`` is omitted the map is read off from ``w``: ``z + d w`` must
    itself be a fundamental cycle (it is ``f_*(z)``).
    """
    m = z.ambient_dim
    if z.degree != m or degree(z) != 1:
        raise ValueError("z is not a fundamental cycle")
    if w.ambient_dim != m or w.degree != m + 1:
        raise ValueError("w must be an (m+1)-chain on the same torus")
    if f is not None:
        if boundary(w) != pushforward(f, z) - z:
            raise IdentityError("boundary(w) != f_*(z) - z")
    elif degree(z + boundary(w)) != 1:
        raise IdentityError("z + boundary(w) is not a fundamental cycle")
    return (m + 1) * l1_norm(z) + l1_norm(w)


def write_fv_csv(bounds: list[FvBound], path, header: dict | None = None) -> None:
    with open(path, "w", newline="") as fh:
        for key, val in (header or {}).items():
            fh.write(f"# {key}: {val}\n")
        wr = csv.writer(fh)
        wr.writerow(["k", "n", "norm_Wk", "bound_num", "bound_den"])
        for b in bounds:
            wr.writerow([b.k, b.n, b.norm, b.bound.numerator, b.bound.denominator])

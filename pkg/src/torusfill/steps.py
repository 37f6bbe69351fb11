"""The exact identities behind the Dehn twist filling, as a checkable list.

The chains that enter the identities live in a :class:`ChainStore`, so a
single stored chain can be corrupted on purpose and the failure traced back
to the step that uses it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from types import SimpleNamespace

from . import constructions as C
from .chains import Chain, boundary, degree, l1_norm, pushforward

STEP1 = "step 1"
STEP2 = "step 2"
STEP3 = "step 3"
CONSTANTS = "constants"


@dataclass
class ChainStore:
    """Named chains, computed on demand and optionally overridden."""

    alpha: Chain
    beta: Chain
    overrides: dict = field(default_factory=dict)

    @classmethod
    def default(cls, pair: C.FillingPair | None = None) -> "ChainStore":
        pair = pair or C.load_filling_pair()
        return cls(pair.alpha, pair.beta)

    def get(self, name: str, *args: int) -> Chain:
        key = (name, *args)
        if key in self.overrides:
            return self.overrides[key]
        if name in ("alpha", "beta"):
            return getattr(self, name)
        builders = {"c": C.make_c, "a": C.make_a, "b": C.make_b, "tau": C.make_tau,
                    "bk": C.make_bk, "s": C.make_s}
        if name not in builders:
            raise KeyError(f"unknown chain {name!r}")
        return builders[name](*args)

    def tampered(self, name: str, *args: int) -> "ChainStore":
        """Copy with the first coefficient of one stored chain negated."""
        chain = self.get(name, *args)
        if not chain:
            raise ValueError(f"{name}{args} is zero; nothing to tamper with")
        first = chain.support()[0]
        bad = chain - 2 * Chain.from_terms(chain.ambient_dim, chain.degree,
                                           [(chain.coefficient(first), first.vertices)])
        return ChainStore(self.alpha, self.beta, {**self.overrides, (name, *args): bad})


@dataclass(frozen=True)
class IdentityResult:
    step: str
    name: str
    k: int | None
    ok: bool

    def __str__(self) -> str:
        at = "" if self.k is None else f" [k={self.k}]"
        return f"{'PASS' if self.ok else 'FAIL'}  {self.step}: {self.name}{at}"


def _constants(store: ChainStore) -> list[IdentityResult]:
    c, a, b = store.get("c"), store.get("a"), store.get("b")
    out = [
        IdentityResult(CONSTANTS, "|c| = 2", None, l1_norm(c) == 2),
        IdentityResult(CONSTANTS, "|a| = |b| = 4", None, l1_norm(a) == 4 and l1_norm(b) == 4),
        IdentityResult(CONSTANTS, "deg c = deg a = deg b = 1", None,
                       all(z.degree == 2 and not boundary(z) and degree(z) == 1
                           for z in (c, a, b))),
    ]
    return out


def _step1(store: ChainStore, k: int) -> list[IdentityResult]:
    n = 4 ** k
    c, tau = store.get("c"), store.get("tau", k)
    twisted = pushforward(C.dehn_twist(n), c)
    return [
        IdentityResult(STEP1, "d tau_k + b_k = f^n_* c - c", k,
                       boundary(tau) + store.get("bk", k) == twisted - c),
        IdentityResult(STEP1, "|tau_k| = 3", k, l1_norm(tau) == 3),
        IdentityResult(STEP1, "deg f^k_* c = 1", k,
                       degree(pushforward(C.dehn_twist(k), c)) == 1),
    ]


def _step2(store: ChainStore, k: int) -> list[IdentityResult]:
    c, a, b = store.get("c"), store.get("a"), store.get("b")
    s = [store.get("s", k, i) for i in range(2 * k + 1)]
    phi = [C.make_phi(k, i) for i in range(2 * k + 1)]
    return [
        IdentityResult(STEP2, "phi^i_* c = s^i for 0 <= i <= 2k", k,
                       all(pushforward(phi[i], c) == s[i] for i in range(2 * k + 1))),
        IdentityResult(STEP2, "phi^i_* a = phi^(i+1)_* b for 0 <= i < 2k", k,
                       all(pushforward(phi[i], a) == pushforward(phi[i + 1], b)
                           for i in range(2 * k))),
        IdentityResult(STEP2, "s^k = 0 and s^2k = -s^0", k, not s[k] and s[2 * k] == -s[0]),
        IdentityResult(STEP2, "gamma_* s^0 = b_k", k,
                       pushforward(C.gamma(), s[0]) == store.get("bk", k)),
    ]


def _step3(store: ChainStore, k: int) -> list[IdentityResult]:
    c, a, b = store.get("c"), store.get("a"), store.get("b")
    alpha, beta = store.get("alpha"), store.get("beta")
    pair = SimpleNamespace(alpha=alpha, beta=beta)
    omega = C.make_omega(k, pair)
    w = store.get("tau", k) - pushforward(C.gamma(), omega)
    n = 4 ** k
    return [
        IdentityResult(STEP3, "d alpha = a - c and d beta = c - b", k,
                       boundary(alpha) == a - c and boundary(beta) == c - b),
        IdentityResult(STEP3, "d omega_k = -s^0", k, boundary(omega) == -store.get("s", k, 0)),
        IdentityResult(STEP3, "d W_k = f^n_* c - c", k,
                       boundary(w) == pushforward(C.dehn_twist(n), c) - c),
        IdentityResult(STEP3, "|W_k| <= 3 + k(|alpha| + |beta|)", k,
                       l1_norm(w) <= 3 + k * (l1_norm(alpha) + l1_norm(beta))),
    ]


def verify_steps(k_max: int, store: ChainStore | None = None) -> list[IdentityResult]:
    """Evaluate every identity for ``k = 1..k_max``."""
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    store = store or ChainStore.default()
    out = _constants(store)
    for k in range(1, k_max + 1):
        out += _step1(store, k) + _step2(store, k) + _step3(store, k)
    return out


def failed_steps(results: list[IdentityResult]) -> list[str]:
    return sorted({r.step for r in results if not r.ok})

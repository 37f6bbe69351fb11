"""
Filling a Dehn twist difference
===============================

Builds the chain W_k whose boundary is f^n(c) - c for the shear f and
n = 4^k, and watches its norm grow much slower than n.
"""
from fractions import Fraction

from torusfill.chains import boundary, l1_norm, pushforward
from torusfill.constructions import dehn_twist, load_filling_pair, make_c, make_filling_W

###############################################################################
# The fundamental cycle
# ---------------------
# Two straight triangles on the unit square.

c = make_c()
print(c)
print("norm of c:", l1_norm(c))

###############################################################################
# The stored pair alpha, beta
# ---------------------------
# Integral 3-chains with boundaries a - c and c - b, found once by the
# integer solver and shipped with the package.

pair = load_filling_pair()
print("|alpha| + |beta| =", pair.norm)

###############################################################################
# W_k for k = 1..4
# ----------------

for k in range(1, 5):
    n = 4 ** k
    w = make_filling_W(k, pair)
    assert boundary(w) == pushforward(dehn_twist(n), c) - c
    print(f"k={k}  n={n:4d}  |W_k|={l1_norm(w):3d}  ratio={Fraction(l1_norm(w), n)}")

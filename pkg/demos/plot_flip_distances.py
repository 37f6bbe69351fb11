"""
Flip distances in the Farey tree
================================

Compares how far a shear and an Anosov map move the base triangle,
using the tree walk and a plain breadth-first search.
"""
from torusfill.mcg import (SHEAR, T0, Sl2Matrix, act, classify, flip_distance_bfs,
                           flip_distance_fast, spine_growth_table)

CAT = Sl2Matrix(2, 1, 1, 1)

###############################################################################
# Classification
# --------------

for A in (SHEAR, CAT, Sl2Matrix(0, -1, 1, 0)):
    print(A, "->", classify(A))

###############################################################################
# Distances along powers
# ----------------------
# Both grow linearly; the slope is the interesting number.

for A in (SHEAR, CAT):
    rows = spine_growth_table(A, 12)
    print(A, [r.distance for r in rows])

###############################################################################
# Cross-check with BFS
# --------------------

t = act(CAT ** 5, T0)
print("fast:", flip_distance_fast(T0, t), " bfs:", flip_distance_bfs(T0, t, cap=18))

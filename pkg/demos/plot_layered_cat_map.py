"""
Triangulating the cat map torus bundle
======================================

Lays tetrahedra along a flip path, closes up with the monodromy and checks
the result against a homology computed from the matrix alone.
"""
from torusfill.layered import (check, cover_triangulation, delta_upper_bound_table,
                               expected_h1, flip_path, homology_h1)
from torusfill.mcg import Sl2Matrix

A = Sl2Matrix(2, 1, 1, 1)

###############################################################################
# One period
# ----------

print("flip path:", flip_path(A))
tri = cover_triangulation(A, 1)
print(check(tri))
print("H1 =", homology_h1(tri))

###############################################################################
# Cyclic covers
# -------------
# The i-fold cover reuses the same path i times, so the count is linear in i.

for row in delta_upper_bound_table(A, 6):
    tri = cover_triangulation(A, row.i)
    print(f"i={row.i}  tets={row.tetra_count:3d}  d={row.flip_distance:2d}  "
          f"H1={homology_h1(tri)}  expected={expected_h1(A ** row.i)}")

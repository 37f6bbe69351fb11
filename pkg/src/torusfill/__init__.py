"""Exact filling norms on tori, torus mapping classes and layered
triangulations of torus bundles."""

__version__ = "0.1.0"

from .chains import (AffineTorusMap, Chain, StraightSimplex, add, boundary, canonicalize,
                     degree, l1_norm, negate, pushforward, scale)
from .constructions import (FillingPair, FvBound, fv_upper_bounds, isv_upper_bound,
                            load_filling_pair, make_a, make_b, make_bk, make_c, make_filling_W,
                            make_omega, make_phi, make_s, make_tau, solve_alpha_beta)
from .filling import (FiniteModel, FillingCertificate, build_model, fill_int, fill_real,
                      oracle_fill_int, verify_certificate)
from .layered import (FlipPath, LayeredTriangulation, cyclic_cover_path,
                      delta_upper_bound_table, flip_path, homology_h1, layer)
from .mcg import (FareyTriangle, Sl2Matrix, act, classify, flip, flip_distance_bfs,
                  flip_distance_fast, fv_positive, spine_growth_table)

__all__ = [
    "AffineTorusMap", "Chain", "StraightSimplex", "add", "boundary", "canonicalize", "degree",
    "l1_norm", "negate", "pushforward", "scale",
    "FillingPair", "FvBound", "fv_upper_bounds", "isv_upper_bound", "load_filling_pair",
    "make_a", "make_b", "make_bk", "make_c", "make_filling_W", "make_omega", "make_phi",
    "make_s", "make_tau", "solve_alpha_beta",
    "FiniteModel", "FillingCertificate", "build_model", "fill_int", "fill_real",
    "oracle_fill_int", "verify_certificate",
    "FlipPath", "LayeredTriangulation", "cyclic_cover_path", "delta_upper_bound_table",
    "flip_path", "homology_h1", "layer",
    "FareyTriangle", "Sl2Matrix", "act", "classify", "flip", "flip_distance_bfs",
    "flip_distance_fast", "fv_positive", "spine_growth_table",
]

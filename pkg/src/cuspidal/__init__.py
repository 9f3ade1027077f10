"""Exact computations for the quiver Q_n with xy = yx = 0 and cuspidal sl(n+1) weight windows."""

from .cohomology import (Cocycle, check_cocycle, coboundary, h1_dimension, log_cocycle, self_extension_nontrivial,
                         solve_coboundary)
from .decompose import Decomposition, DecompositionError, decompose
from .pathalg import hilbert_check, koszul_check, path_algebra_layer
from .quiver import (QuiverRep, build, direct_sum, from_json, glue, hom_space, is_isomorphic, polymerize,
                     socle_filtration, to_json)
from .strings import (BandDescriptor, GradedPolygon, GradedString, enumerate_bands, enumerate_strings,
                      parse_descriptor, predicted_socle)
from .weights import ExponentVector, build_forms, build_functions, check_cuspidal, de_rham_report

__all__ = [
    "BandDescriptor", "Cocycle", "Decomposition", "DecompositionError", "ExponentVector", "GradedPolygon",
    "GradedString", "QuiverRep", "build", "build_forms", "build_functions", "check_cocycle", "check_cuspidal",
    "coboundary", "de_rham_report", "decompose", "direct_sum", "enumerate_bands", "enumerate_strings",
    "from_json", "glue", "h1_dimension", "hilbert_check", "hom_space", "is_isomorphic", "koszul_check",
    "log_cocycle", "parse_descriptor", "path_algebra_layer", "polymerize", "predicted_socle",
    "self_extension_nontrivial", "socle_filtration", "solve_coboundary", "to_json",
]

"""Halving of cube-like polytope groups and regular-hypertope verification.

Permutation-group kernels, string C-group constructions, the halving
operation, coset geometries and their verification.
"""
from .caps import DEFAULT_CAPS, Caps
from .cgroup import (CGroup, OrderFormula, check_intersection_condition, diagram_of, direct_product, dual,
                     face_vector, intersection_witness, parabolic)
from .constructions import (DanzerPoset, build_from_symbol, coxeter_polytope, danzer_face_formula, danzer_poset,
                            delta_two_k, poset_flag_count, toroid, two_k)
from .coxeter import CoxeterClass, CoxeterDiagram, classify_diagram, coxeter_order, diagram_name
from .errors import (CapExceeded, DiagramMismatch, HypertopeError, NotAFlag, NotString, NotSubgroup,
                     OrderMismatch, RelatorValidationFailed, SymbolError)
from .geometry import (IncidenceSystem, VerificationReport, chamber_transitive, is_geometry, is_residually_connected,
                       is_thin, locally_spherical_report, residue, tits_coset_geometry, verify_regular_hypertope)
from .halving import (HalvingResult, conjugation_symmetry, extended_schlafli, facet_bipartiteness, halve,
                      map_face_vector, rank3_genus)
from .permcore import Permutation, PermGroup, Presentation, coset_action, todd_coxeter
from .verdict import FAIL, PASS, SKIPPED, Verdict

__all__ = [
    "CGroup", "CapExceeded", "Caps", "CoxeterClass", "CoxeterDiagram", "DEFAULT_CAPS", "DanzerPoset",
    "DiagramMismatch", "FAIL", "HalvingResult", "HypertopeError", "IncidenceSystem", "NotAFlag", "NotString",
    "NotSubgroup", "OrderFormula", "OrderMismatch", "PASS", "PermGroup", "Permutation", "Presentation",
    "RelatorValidationFailed", "SKIPPED", "SymbolError", "Verdict", "VerificationReport", "build_from_symbol",
    "chamber_transitive", "check_intersection_condition", "classify_diagram", "conjugation_symmetry",
    "coset_action", "coxeter_order", "coxeter_polytope", "danzer_face_formula", "danzer_poset", "delta_two_k",
    "diagram_name", "diagram_of", "direct_product", "dual", "extended_schlafli", "face_vector",
    "facet_bipartiteness", "halve", "intersection_witness", "is_geometry", "is_residually_connected", "is_thin",
    "locally_spherical_report", "map_face_vector", "parabolic", "poset_flag_count", "rank3_genus", "residue",
    "tits_coset_geometry", "todd_coxeter", "toroid", "two_k", "verify_regular_hypertope",
]

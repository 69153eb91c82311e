"""Finite-geometry toolkit for (r,s)-sets: field arithmetic, point sets,
constructions from the Desarguesian partial ovoid, exhaustive verification,
bounds and the coding-theory view."""

from .bounds import BoundResult, bound_4general, bound_5general, bound_n_minus2
from .codes import CheckMatrix, export_check_matrix, min_distance
from .constructions import (ConstructionSpec, build, desarguesian_ovoid, extended_projected_set,
                            hyperplane_section, pg13_set, projected_set)
from .field import FieldContext, FieldElement, make_context
from .geometry import BudgetExceeded, Flat, PointSet, ProjectivePoint, rank
from .verify import (VerificationReport, completeness_check, find_disjoint_hyperplane,
                     hyperplane_spectrum, is_k_general, is_rs_set, is_transitive,
                     seven_point_lemma, solid_cubic_lemma)

__all__ = [
    "BoundResult", "BudgetExceeded", "CheckMatrix", "ConstructionSpec", "FieldContext",
    "FieldElement", "Flat", "PointSet", "ProjectivePoint", "VerificationReport",
    "bound_4general", "bound_5general", "bound_n_minus2", "build", "completeness_check",
    "desarguesian_ovoid", "export_check_matrix", "extended_projected_set",
    "find_disjoint_hyperplane", "hyperplane_section", "hyperplane_spectrum", "is_k_general",
    "is_rs_set", "is_transitive", "make_context", "min_distance", "pg13_set", "projected_set",
    "rank", "seven_point_lemma", "solid_cubic_lemma",
]

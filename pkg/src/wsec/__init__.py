"""Coset-coded secret sharing over striped storage codes, with a verifier.

The package builds outer coset codes that hide individual files (or groups
of files) from an eavesdropper who reads a bounded number of storage nodes,
pairs them with striped maximum-distance-separable inner codes, and decides
weak security exactly from matrix ranks, cross-checked by an enumeration
oracle on small instances.
"""

from .coset import (CONSTRUCT1, CONSTRUCT2, CUSTOM, DEFAULT_MAX_FIELD, IDENTITY,
                    CosetCode, construct1, construct2, construct_identity,
                    format_coset, format_vector, parse_coset, parse_vector)
from .errors import FormatError, SingularMatrixError, WsecError
from .fields import (FElem, FieldTower, embed, find_primitive, format_elem,
                     format_tower, make_tower, parse_elem, parse_tower,
                     prime_power)
from .linalg import (FMatrix, cauchy, format_matrix, null_space, parse_matrix,
                     solve, take_rows, take_thick_cols, vandermonde, vstack)
from .report import ReportRow, SecuritySurvey, format_table, render_figures, survey
from .security import (DEFAULT_ORACLE_CAP, DEFAULT_SAMPLE_BUDGET,
                       EquivalenceReport, SecurityReport, adversary_matrix,
                       equivalence_check, equivalence_matrices, format_report,
                       group_rows, is_weakly_secure, leakage, max_g, mi_oracle)
from .storage import (EavesdropView, StorageCode, StorageCodeSpec,
                      StructureReport, bounds_from_params, capacity_bounds,
                      eavesdrop_view, format_storage, make_striped_mds,
                      parse_storage, reconstruct, storage_encode,
                      verify_structure)

__version__ = "0.1.0"

__all__ = [
    "CONSTRUCT1", "CONSTRUCT2", "CUSTOM", "DEFAULT_MAX_FIELD",
    "DEFAULT_ORACLE_CAP", "DEFAULT_SAMPLE_BUDGET", "CosetCode",
    "EavesdropView", "EquivalenceReport", "FElem", "FieldTower", "FMatrix",
    "FormatError", "IDENTITY", "ReportRow", "SecurityReport",
    "SecuritySurvey", "SingularMatrixError", "StorageCode", "StorageCodeSpec",
    "StructureReport", "WsecError", "adversary_matrix", "bounds_from_params",
    "capacity_bounds", "cauchy", "construct1", "construct2",
    "construct_identity", "eavesdrop_view", "embed", "equivalence_check",
    "equivalence_matrices", "find_primitive", "format_coset", "format_elem",
    "format_matrix", "format_report", "format_storage", "format_table",
    "format_tower", "format_vector", "group_rows", "is_weakly_secure",
    "leakage", "make_striped_mds", "make_tower", "max_g", "mi_oracle",
    "null_space", "parse_coset", "parse_elem", "parse_matrix",
    "parse_storage", "parse_tower", "parse_vector", "prime_power",
    "reconstruct", "render_figures", "solve", "storage_encode", "survey",
    "take_rows", "take_thick_cols", "vandermonde", "verify_structure",
    "vstack",
]

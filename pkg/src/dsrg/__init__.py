"""Search, verification and classification of directed strongly regular
graphs built from circulant blocks."""

from .border import (BorderPattern, Stage1Constraints, SumConstraints,
                     default_border, h_compact, stage1_constraints,
                     sum_constraints)
from .circulant import (CirculantBlock, CompactMatrix, CycPoly,
                        block_from_poly, compact_mat_add, compact_mat_mul,
                        compactify, eval_at_one, expand, poly_add,
                        poly_from_block, poly_mul)
from .core import (AdjacencyMatrix, DsrgParams, VerificationReport,
                   Violation, complement, complement_params,
                   enumerate_small_dsrg, reverse, verify_matrix_equations,
                   verify_path_counts)
from .errors import DsrgError
from .iso import IsoClass, automorphism_count, classify, isomorphism
from .search import (SearchConfig, Stage1Solution, Stage2Solution,
                     branch_count, lift_masks, stage1_enumerate, stage2_lift)
from .skeleton import (FloorColor, FloorStructure, SkeletonRigging,
                       certificate, extract_skeleton_rigging,
                       expand_skeleton_rigging, find_floor_structure)

__all__ = [name for name in dir() if not name.startswith("_")]

"""Geometric construction and certification of a self-similar genus-2 Cantor set in R^3."""
from .certify import run_full_verification
from .chain import (
    Chain,
    ChainParams,
    ChainParamsError,
    build_chain,
    kbound_satisfied,
    smallest_admissible_m,
    solve_k_for_m,
    verify_chain,
)
from .fourway import build_fourway, closed_form_min_distance, max_thickness, min_core_distance, verify_fourway
from .geometry import (
    Beam,
    DoubleTorus,
    GeometryError,
    PolyLoop,
    Segment,
    Similarity,
    SquareTorusFrame,
    apply_similarity,
    beam_distance,
    compose,
    contains_point,
    contains_solid,
    make_canonical_double_torus,
    segment_distance,
)
from .linking import (
    canonical_filling_disk,
    crossing_linking_number,
    disk_piercings,
    gauss_linking_number,
    is_hopf_pair,
)
from .mesh import export_obj
from .report import VerificationReport
from .scene import SceneFormatError, read_scene, write_scene
from .sequence import (
    PowerMapParams,
    component,
    escape_radius_model,
    expand_level,
    membership,
    similarity_dimension,
)

__version__ = "0.1.0"

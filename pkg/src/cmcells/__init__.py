"""Exact and numerical invariants of rational Cherednik algebras at t = 0
for small complex reflection groups: parameter maps, Euler families,
Gaudin-type commuting operators, cellular characters and cell partitions."""

import os as _os

# CM_CELLS_THREADS caps the BLAS worker pools; it must land in the
# environment before numpy loads a backend, hence before any submodule.
_threads = _os.environ.get("CM_CELLS_THREADS")
if _threads:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                 "MKL_NUM_THREADS", "NUMEXPR_NUM_THREADS"):
        _os.environ.setdefault(_var, _threads)

from .cyclotomic_numerics import (
    QQ,
    Cyclotomic,
    CyclotomicOrderError,
    UniPoly,
    zeta,
    as_scalar,
    canonical_scalar,
    conj_scalar,
    cyclo_dot,
    embed_complex,
    parse_scalar,
    format_scalar,
    elementary_symmetric,
    poly_discriminant,
    poly_resultant,
)
from .reflection_groups import (
    ReflectionGroup,
    Reflection,
    HyperplaneOrbit,
    ParamC,
    ParamK,
    build_cyclic,
    build_weyl_b2,
    build_dihedral,
    group_from_config,
    kappa,
    kappa_inverse,
    param_c,
    param_k,
    param_c_zero,
    regular_vector,
    degrees,
    mat_mul,
    mat_vec,
    mat_inv,
    mat_det,
    identity_matrix,
    pair,
    det_one_minus_tw,
    series_inverse,
    molien_series,
)
from .characters import (
    ClassFunction,
    Representation,
    GradedSeries,
    conjugacy_classes,
    class_of_element,
    irr_characters,
    irr_representations,
    character_by_name,
    representation_by_name,
    fake_degrees,
    b_invariant,
    center_hilbert_identity,
)
from .dunkl_verma import (
    VermaSlice,
    OperatorOnSlice,
    BracketReport,
    regular_representation,
    dunkl_act,
    check_bracket,
    euler_on_verma,
    c_from_trace,
    c_from_k_formula,
)
from .euler_families import (
    EXACT,
    EULER_COARSE,
    FamilyBlock,
    FamilyPartition,
    EssentialHyperplane,
    euler_partition,
    cm_families,
    essential_hyperplanes,
)
from .gaudin_cells import (
    NumericAmbiguityError,
    PathTrackingError,
    GaudinPoint,
    GaudinOperatorSet,
    PathSpec,
    EigenPath,
    CellBlock,
    CellPartition,
    CellularCharacter,
    MinpolyReport,
    gaudin_point,
    gaudin_matrices,
    track_spectrum,
    left_cells,
    right_cells,
    two_sided_candidate,
    cellular_characters,
    euler_minpoly_check,
)

__version__ = "0.1.0"

__all__ = [
    "QQ",
    "Cyclotomic",
    "CyclotomicOrderError",
    "UniPoly",
    "zeta",
    "as_scalar",
    "canonical_scalar",
    "conj_scalar",
    "cyclo_dot",
    "embed_complex",
    "parse_scalar",
    "format_scalar",
    "elementary_symmetric",
    "poly_discriminant",
    "poly_resultant",
    "ReflectionGroup",
    "Reflection",
    "HyperplaneOrbit",
    "ParamC",
    "ParamK",
    "build_cyclic",
    "build_weyl_b2",
    "build_dihedral",
    "group_from_config",
    "kappa",
    "kappa_inverse",
    "param_c",
    "param_k",
    "param_c_zero",
    "regular_vector",
    "degrees",
    "mat_mul",
    "mat_vec",
    "mat_inv",
    "mat_det",
    "identity_matrix",
    "pair",
    "det_one_minus_tw",
    "series_inverse",
    "molien_series",
    "ClassFunction",
    "Representation",
    "GradedSeries",
    "conjugacy_classes",
    "class_of_element",
    "irr_characters",
    "irr_representations",
    "character_by_name",
    "representation_by_name",
    "fake_degrees",
    "b_invariant",
    "center_hilbert_identity",
    "VermaSlice",
    "OperatorOnSlice",
    "BracketReport",
    "regular_representation",
    "dunkl_act",
    "check_bracket",
    "euler_on_verma",
    "c_from_trace",
    "c_from_k_formula",
    "EXACT",
    "EULER_COARSE",
    "FamilyBlock",
    "FamilyPartition",
    "EssentialHyperplane",
    "euler_partition",
    "cm_families",
    "essential_hyperplanes",
    "NumericAmbiguityError",
    "PathTrackingError",
    "GaudinPoint",
    "GaudinOperatorSet",
    "PathSpec",
    "EigenPath",
    "CellBlock",
    "CellPartition",
    "CellularCharacter",
    "MinpolyReport",
    "gaudin_point",
    "gaudin_matrices",
    "track_spectrum",
    "left_cells",
    "right_cells",
    "two_sided_candidate",
    "cellular_characters",
    "euler_minpoly_check",
    "__version__",
]

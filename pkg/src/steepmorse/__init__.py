"""Chain complex reduction by steepness matchings, with exact homology."""

from .core import (
    GF,
    QQ,
    ZZ,
    ChainComplex,
    RingSpec,
    SparseMatrix,
    ZLoc,
    find_violation,
    is_unit,
    matrix_density,
    validate_complex,
)
from .errors import (
    ComplexError,
    FormatError,
    InvalidMatching,
    MatchingCycle,
    NonUnitWeight,
    NonzeroComposite,
    ResidualTooLarge,
    RingError,
    ShapeMismatch,
    SharedVertex,
    SteepMorseError,
)
from .matching import (
    IndexPartition,
    Matching,
    index_partition,
    is_morse_matching,
    steepness_matching,
    validate_morse_matching,
)
from .ordering import (
    ReorderSchedule,
    column_sort_key,
    extend_matching_to_order,
    order_columns,
    order_rows,
    relabel_matching,
    row_sort_key,
)
from .reduction import ReductionResult, reduce_fully, reduce_once, transform_row
from .torsion import (
    DegreeHomology,
    HomologyResult,
    homology,
    homology_over_field,
    integer_homology,
    p_local_homology,
)
from .oracle import homology_via_snf, smith_normal_form
from .estimators import HomologyEstimator, MorseReducer

__version__ = "0.1.0"

__all__ = [
    "GF",
    "QQ",
    "ZZ",
    "ChainComplex",
    "RingSpec",
    "SparseMatrix",
    "ZLoc",
    "find_violation",
    "is_unit",
    "matrix_density",
    "validate_complex",
    "ComplexError",
    "FormatError",
    "InvalidMatching",
    "MatchingCycle",
    "NonUnitWeight",
    "NonzeroComposite",
    "ResidualTooLarge",
    "RingError",
    "ShapeMismatch",
    "SharedVertex",
    "SteepMorseError",
    "IndexPartition",
    "Matching",
    "index_partition",
    "is_morse_matching",
    "steepness_matching",
    "validate_morse_matching",
    "ReorderSchedule",
    "column_sort_key",
    "extend_matching_to_order",
    "order_columns",
    "order_rows",
    "relabel_matching",
    "row_sort_key",
    "DegreeHomology",
    "HomologyResult",
    "homology",
    "homology_over_field",
    "integer_homology",
    "p_local_homology",
    "ReductionResult",
    "reduce_fully",
    "reduce_once",
    "transform_row",
    "homology_via_snf",
    "smith_normal_form",
    "HomologyEstimator",
    "MorseReducer",
]

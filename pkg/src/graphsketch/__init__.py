"""Random-projection sketches of directed graphs.

Vertices receive pseudo-random unit codes derived from a seeded codebook;
a graph becomes the ``d x d`` matrix ``P A P^T``.  Edge queries, path
counts, unions, shared-edge counts and distances are then answered from the
sketch alone, with noise controlled by ``d``.
"""

from .baseline import (
    CompressedSparseRow,
    CoordinateList,
    DictionaryOfKeys,
    ExactGraph,
    compose_graphs,
    convert,
    count_paths,
    degree_stats,
    edge_intersection_count,
    exact_compose,
    exact_query,
    generate_graph,
    shared_vertex_pair_count,
    symmetric_difference_count,
)
from .codebook import CodebookSpec, code_matrix, codes_for, derive_code, dot
from .exceptions import (
    BadMagicError,
    ChecksumError,
    DimensionMismatchError,
    DuplicateLabelError,
    EdgeListParseError,
    GraphSketchError,
    IncompatibleCodebookError,
    InfeasibleGraphError,
    InvalidSpecError,
    MalformedMatrixError,
    SketchFormatError,
    TruncatedFileError,
    UnsupportedVersionError,
)
from .sketch import (
    QueryResult,
    Sketch,
    build_sketch,
    empty_sketch,
    frobenius_norm_sq,
    inner_product,
    recommend_dimension,
)
from .storage import (
    load_sketch,
    read_edge_list,
    read_label_set,
    read_report,
    save_sketch,
    write_edge_list,
    write_report,
)

__version__ = "0.1.0"

__all__ = [
    "BadMagicError",
    "ChecksumError",
    "CodebookSpec",
    "CompressedSparseRow",
    "CoordinateList",
    "DictionaryOfKeys",
    "DimensionMismatchError",
    "DuplicateLabelError",
    "EdgeListParseError",
    "ExactGraph",
    "GraphSketchError",
    "IncompatibleCodebookError",
    "InfeasibleGraphError",
    "InvalidSpecError",
    "MalformedMatrixError",
    "QueryResult",
    "Sketch",
    "SketchFormatError",
    "TruncatedFileError",
    "UnsupportedVersionError",
    "build_sketch",
    "code_matrix",
    "codes_for",
    "compose_graphs",
    "convert",
    "count_paths",
    "degree_stats",
    "derive_code",
    "dot",
    "edge_intersection_count",
    "empty_sketch",
    "exact_compose",
    "exact_query",
    "frobenius_norm_sq",
    "generate_graph",
    "inner_product",
    "load_sketch",
    "read_edge_list",
    "read_label_set",
    "read_report",
    "recommend_dimension",
    "save_sketch",
    "shared_vertex_pair_count",
    "symmetric_difference_count",
    "write_edge_list",
    "write_report",
]

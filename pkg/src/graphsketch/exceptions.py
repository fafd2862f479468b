"""Exception hierarchy shared by every graphsketch module."""


class GraphSketchError(Exception):
    """Base class for all errors raised by graphsketch."""


class InvalidSpecError(GraphSketchError, ValueError):
    """A codebook spec has an out-of-range field."""


class DuplicateLabelError(GraphSketchError, ValueError):
    pass


class DimensionMismatchError(GraphSketchError, ValueError):
    pass


class IncompatibleCodebookError(GraphSketchError, ValueError):
    """Two sketches (or a sketch and a spec) use different codebooks."""


class MalformedMatrixError(GraphSketchError, ValueError):
    """A sparse-format container violates its structural invariants."""


class InfeasibleGraphError(GraphSketchError, ValueError):
    """Requested graph parameters cannot be satisfied, e.g. too many edges under a degree cap."""


class SketchFormatError(GraphSketchError, ValueError):
    """Base class for sketch-file decoding failures."""


class BadMagicError(SketchFormatError):
    pass


class UnsupportedVersionError(SketchFormatError):
    pass


class ChecksumError(SketchFormatError):
    pass


class TruncatedFileError(SketchFormatError):
    pass


class EdgeListParseError(GraphSketchError, ValueError):
    """A line of an edge-list or label-set file could not be tokenized."""

    def __init__(self, message, line_number):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number

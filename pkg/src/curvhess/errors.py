"""Exception types raised across the library."""


class CurvhessError(Exception):
    """Base class for all library errors."""


class InvalidIndex(CurvhessError):
    """A face or constraint references a vertex index that does not exist."""


class NonManifoldEdge(CurvhessError):
    """An edge is shared by more than two faces, or is traversed twice in
    the same direction (inconsistent orientation)."""


class DegenerateFace(CurvhessError):
    """A face has (numerically) zero area."""


class ParseError(CurvhessError):
    """A mesh or data file could not be parsed."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class UnsupportedElement(CurvhessError):
    """The file contains an element kind the loader does not handle
    (polylines, binary PLY, ...)."""


class IoError(CurvhessError):
    """Reading or writing a file failed."""


class InvalidName(CurvhessError):
    """A field column name is empty or duplicated."""


class DimensionMismatch(CurvhessError):
    """A vector does not match the operator or mesh dimension."""


class ConstraintError(CurvhessError):
    """Constraint list is malformed (duplicate or out-of-range vertices)."""


class InsufficientConstraints(ConstraintError):
    """Too few constraints to pin the null space of the energy; the reduced
    system is singular."""


class SolveFailure(CurvhessError):
    """A linear solve produced no usable solution."""


class NoConvergence(CurvhessError):
    """Iterative eigensolver exhausted its iteration budget."""


class ProjectionDiverged(CurvhessError):
    """Closest-point projection onto a smooth surface did not converge."""

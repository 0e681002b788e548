"""Exception hierarchy shared by every module."""


class QPerceptronError(Exception):
    """Base class for all package errors."""


class CapacityError(QPerceptronError):
    """A request exceeds the supported simulation size."""


class StructuralError(QPerceptronError, ValueError):
    """Malformed gate, register or circuit composition."""


class EncodingError(QPerceptronError, ValueError):
    """A value cannot be represented in the chosen fixed-point format."""


class DatasetError(QPerceptronError, ValueError):
    """Malformed or inconsistent training data."""


class NoSolutionError(QPerceptronError, ValueError):
    """An operation that needs at least one marked item got none."""


class BudgetError(QPerceptronError, RuntimeError):
    """A bounded search ran out of its query budget."""


class InvariantViolation(QPerceptronError, AssertionError):
    """An internal consistency check failed (e.g. dirty scratch qubits)."""

"""
Exception types raised by the library layer
"""
from typing import List, Optional


class InvalidGraphError(ValueError):
    """A graph violates the structural rules of a metric graph"""

    def __init__(self, violations: List["object"]):
        self.violations = list(violations)
        summary = "; ".join(str(v) for v in self.violations) or "invalid graph"
        super().__init__(summary)


class GraphFormatError(ValueError):
    """A graph text file could not be parsed"""

    def __init__(self, message: str, line_number: Optional[int] = None, line: Optional[str] = None):
        self.line_number = line_number
        self.line = line
        if line_number is not None:
            message = f"line {line_number}: {message}"
            if line is not None:
                message = f"{message} ({line.strip()!r})"
        super().__init__(message)


class ParameterError(ValueError):
    """A numerical parameter is outside its admissible range"""


class SolverInvariantError(RuntimeError):
    """A descent step broke monotonicity or the Gagliardo-Nirenberg lower bound"""

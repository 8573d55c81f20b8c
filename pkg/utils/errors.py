"""
Error types for the ELP toolkit
Every library failure derives from ElpError so the CLI can map it to exit status 2
"""

from typing import Optional


class ElpError(Exception):
    """Base class for all toolkit errors"""


class ProgramSyntaxError(ElpError):
    """Program or query text does not conform to the grammar"""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class QuerySyntaxError(ProgramSyntaxError):
    """Query text does not conform to the query grammar"""


class GroundingError(ElpError):
    """A variable occurs but the program has no constant to replace it with"""


class CapacityError(ElpError):
    """A desk-scale enumeration cap was exceeded"""

    def __init__(self, what: str, size: int, cap: int):
        self.what = what
        self.size = size
        self.cap = cap
        super().__init__(f"{what}: size {size} exceeds configured cap {cap}")


class EpistemicLiteralError(ElpError):
    """An epistemic literal reached code that only accepts plain programs"""


class PreconditionError(ElpError):
    """An operation was called outside its documented precondition"""


class InvalidGuessError(ElpError):
    """A guess is not a subset of EP(Π) or is not valid for the program"""

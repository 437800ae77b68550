"""Exception types raised by the cmreg toolkit."""


class CmregError(Exception):
    """Base class for all cmreg errors."""


class UnsupportedRing(CmregError):
    """Ring parameters outside what the packed term encoding supports."""


class RingMismatch(CmregError):
    """Operands built over different rings."""


class AmbientMismatch(CmregError):
    """Vector does not live in the expected free module."""


class NonHomogeneousRelation(CmregError):
    """A relation column mixes two distinct graded degrees."""

    def __init__(self, column: int, degrees: tuple[int, int]):
        self.column = column
        self.degrees = degrees
        super().__init__(
            f"relation column {column} is not homogeneous: "
            f"saw degrees {degrees[0]} and {degrees[1]}"
        )


class DegreeLimitExceeded(CmregError):
    """A Groebner computation ran past the configured degree cap."""

    def __init__(self, degree: int, cap: int):
        self.degree = degree
        self.cap = cap
        super().__init__(f"degree {degree} exceeds cap {cap}; instance too large")


class WindowExceeded(CmregError):
    """Brute-force graded dimension requested outside the allowed window."""


class ZeroModule(CmregError):
    """Operation undefined on the zero module."""


class ZeroElement(CmregError):
    """Operation undefined for the zero ring element."""


class NotFilterRegular(CmregError):
    """Element failed its filter-regularity certificate."""


class NotAComplex(CmregError):
    """Consecutive maps do not compose to zero."""


class RetriesExhausted(CmregError):
    """Random search for a filter-regular element gave up."""


class CorpusParseError(CmregError):
    """Syntax error in a corpus or witness file."""

    def __init__(self, line: int, col: int, msg: str):
        self.line = line
        self.col = col
        super().__init__(f"line {line}, col {col}: {msg}")

"""Exception types shared across the engine.

Errors that callers are expected to catch and render (CLI diagnostics,
HTTP status mapping) live here; internal assertion failures use plain
AssertionError.
"""


class QpcalcError(Exception):
    """Base class for all engine errors."""


class NotComposable(QpcalcError):
    """Path composition p*q attempted with s(p) != t(q)."""


class NotACycle(QpcalcError):
    """A cyclic operation was applied to a non-cycle path."""


class TruncationMismatch(QpcalcError):
    """Arithmetic between series of different truncation orders."""


class QuiverMismatch(QpcalcError):
    """Arithmetic between series living on different quivers."""


class SingularLinearPart(QpcalcError):
    """Substitution whose length-1 part is not invertible."""


class LoopAtVertex(QpcalcError):
    """Operation forbidden at a vertex carrying a loop (condition c1)."""


class TwoCycleAtVertex(QpcalcError):
    """Mutation at a vertex lying on a 2-cycle (condition c2)."""


class VertexSetMismatch(QpcalcError):
    """Direct sum of QPs with different vertex sets."""


class ArrowNameClash(QpcalcError):
    """Direct sum of QPs with overlapping arrow names."""


class CharacteristicObstruction(QpcalcError):
    """Reduction requires dividing by an integer that vanishes in F_p."""


class InsufficientTruncation(QpcalcError):
    """Requested order exceeds the accuracy watermark of the input."""


class NotARightEquivalence(QpcalcError):
    """Substitution does not carry W to a cyclic equivalent of W'."""

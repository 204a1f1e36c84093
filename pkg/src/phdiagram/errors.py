"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class PHDError(Exception):
    """Base class for every error raised by phdiagram."""


class DegenerateComparisonError(PHDError):
    """A vertex was compared with itself."""


class NotPseudoharmonicError(PHDError):
    """The field has an interior local extremum."""


class InvalidFieldError(PHDError):
    """The field's level structure violates the tree/regularity assumptions."""


class MisuseError(PHDError):
    """An operation was called outside its precondition."""


class NoCriticalValuesError(PHDError):
    """Rank standardization was asked to rank an empty value list."""


class NotEmbeddableError(PHDError):
    """A diagram has no planar embedding with its Cr-cycle as outer face."""


class EmbeddingError(PHDError):
    """Straight-line placement of a diagram produced crossing edges."""


class RealizationError(PHDError):
    """A field could not be constructed for a diagram."""


class SearchBoundsError(PHDError):
    """Exhaustive search or oracle refused because of size guards."""


class FormatError(PHDError):
    """An input file is not well-formed Field or Diagram JSON."""

"""Exception hierarchy for the opforest package.

Every failure mode raised by the library derives from OPFError so callers can
catch one type at an API boundary. The leaf classes map one-to-one onto the
documented error vocabulary of the public operations.
"""

from __future__ import annotations


class OPFError(Exception):
    """Base class for all opforest errors."""


class ParameterError(OPFError):
    """An argument value is outside its documented range."""


class HeapMisuseError(OPFError):
    """Structural misuse of the heap: duplicate insert, update of an absent id."""


class RejectedUpdateError(OPFError):
    """decrease_key called with a key that is not strictly smaller."""


class EmptyHeapError(OPFError):
    """pop_min called on an empty heap."""


class ShapeError(OPFError):
    """Vector or matrix dimensions do not agree."""


class DomainError(OPFError):
    """Input lies outside a distance's domain, or a strict-mode guard fired."""


class DegenerateTrainingError(OPFError):
    """Training data cannot produce a classifier (fewer than two classes)."""


class ParseError(OPFError):
    """Malformed input file or serialized payload; message carries the location."""


class VersionError(OPFError):
    """Serialized model declares an unsupported format version."""


class MissingClassError(OPFError):
    """Some class label in [1, max] never appears in the data."""


class SplitError(OPFError):
    """A split specification yields an empty or impossible partition."""


class ConversionError(OPFError):
    """The conversion target cannot represent the input values."""


class EmptyPlanError(OPFError):
    """A benchmark plan resolved to zero loadable datasets."""


class EmptySummaryError(OPFError):
    """Summarizing records that cover zero completed cells."""


class DegenerateTestError(OPFError):
    """Statistical test input is degenerate (e.g. all paired differences zero)."""

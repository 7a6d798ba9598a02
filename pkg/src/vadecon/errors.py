"""Exception hierarchy.

Every error carries an ``exit_code`` so the command line front end can map
failures onto its documented exit statuses without a lookup table.
"""


class VadEconError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 3


class ValidationError(VadEconError, ValueError):
    """Input violates a documented contract (bad value, bad config)."""

    exit_code = 2


class FormatError(ValidationError):
    """A file does not have the expected layout (header, columns)."""


class DataError(VadEconError, ValueError):
    """Input data is well-formed but unusable for the requested operation."""

    exit_code = 3


class EmptyInputError(DataError):
    """An input collection (lexicon, corpus, series) has no usable rows."""


class IngestionError(DataError):
    """A manifest row cannot be turned into a document."""


class UnscorableDocumentError(DataError):
    """A document has no tokens that can enter the weighted average."""


class InsufficientDataError(DataError):
    """Too few observations for the requested statistic."""


class NumericalError(VadEconError, ArithmeticError):
    """A computation is numerically degenerate."""

    exit_code = 4


class SingularDesignError(NumericalError):
    """Regression design matrix lacks full column rank."""


class DegenerateError(NumericalError):
    """Zero variance or another degenerate configuration."""

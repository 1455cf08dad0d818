"""Exception hierarchy shared across the toolkit."""


class ToolkitError(Exception):
    """Base class for all errors raised by this package."""


class CorpusError(ToolkitError):
    """Corpus files missing, malformed, or violating corpus invariants."""


class ScoreFileError(ToolkitError):
    """Score file missing, malformed, or containing duplicate keys."""


class TripleFileError(ToolkitError):
    """Triple file missing or malformed."""


class AlignmentError(ToolkitError):
    """Two keyed collections do not share the axes the operation requires."""


class UndefinedCorrelationError(ToolkitError):
    """Correlation is mathematically undefined (constant or too-short input)."""


class SplitError(ToolkitError):
    """Split plan request is infeasible or malformed."""


class SelectionError(ToolkitError):
    """Selection or binning request is infeasible."""


class ReportError(ToolkitError):
    """Report input failed to parse or is empty."""

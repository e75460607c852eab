"""Exception hierarchy. Every error raised by the library derives from PanelbreaksError."""


class PanelbreaksError(Exception):
    """Base class for all panelbreaks errors."""


# panel construction / slicing
class RaggedPanel(PanelbreaksError):
    """Rows of unequal length were supplied for a rectangular panel."""


class ShapeMismatch(PanelbreaksError):
    """Metadata (series ids, time index) does not match the value matrix shape."""


class NonFinite(PanelbreaksError):
    """NaN or infinity present where only finite values are allowed."""


class EmptyPanel(PanelbreaksError):
    """Panel with no series or fewer than two time points."""


class BadTimeIndex(PanelbreaksError):
    """Time index is not strictly increasing."""


class IndexOutOfRange(PanelbreaksError):
    """Interval or series index outside the panel's coordinates."""


# preprocessing
class MisalignedSeries(PanelbreaksError):
    """Two series expected to share a time index do not."""


class ZeroGames(PanelbreaksError):
    """Zero games in a season where a per-game rate is requested."""


class DegenerateSeason(PanelbreaksError):
    """Season peer set too small or with zero spread for standardization."""


class InsufficientData(PanelbreaksError):
    """Too few observations for the requested operation."""


class DegenerateSeries(PanelbreaksError):
    """Series with zero spread under the requested transform or estimator."""


# statistics
class UnsortedInput(PanelbreaksError):
    """Input required to be sorted in descending order is not."""


class BadM(PanelbreaksError):
    """Series count m outside 1..n."""


class ConfigError(PanelbreaksError):
    """Parameter outside its documented domain."""


class FingerprintMismatch(PanelbreaksError):
    """Detection result was produced from a different panel."""


class ScaleTooCoarse(PanelbreaksError):
    """Wavelet scale needs a longer series than was provided."""


class RankDeficient(PanelbreaksError):
    """Requested more factors than the panel's covariance supports."""


class InstanceTooLarge(PanelbreaksError):
    """Problem size exceeds the brute-force oracle's guideline."""


# ingestion
class ParseError(PanelbreaksError):
    """Malformed cell in an input file; message names row and column."""

    def __init__(self, row: int, column: str, reason: str):
        self.row = row
        self.column = column
        self.reason = reason
        super().__init__(f"row {row}, column {column!r}: {reason}")


class UnknownFranchise(PanelbreaksError):
    """Franchise id absent from the franchise lookup table (strict mode)."""


class MissingYears(PanelbreaksError):
    """A year in the requested range has no data."""


class MissingFranchiseYear(PanelbreaksError):
    """A required franchise has no row for a year in the requested range."""


class FranchiseTooShort(PanelbreaksError):
    """Franchise has too few seasons for a team panel."""


# result documents
class MalformedResult(PanelbreaksError):
    """Result document missing required structure."""

"""
Exception tree for the pandemic growth estimator.

Fatal conditions raise one of these; non-fatal ones (ill-conditioning,
max-iteration exits, underdetermined systems) are flags on result objects
and are logged by the component that detects them.
"""

from datetime import date
from typing import Optional


class PandemicGrowthError(Exception):
    """Base class for every error raised by the toolkit"""


class ConfigurationError(PandemicGrowthError):
    """Invalid, unknown or inconsistent configuration"""


class IngestionError(PandemicGrowthError):
    """Input data does not satisfy the documented CSV contract"""


class HeaderMismatch(IngestionError):
    """A required column is missing from the header row"""

    def __init__(self, missing):
        self.missing = sorted(missing)
        super().__init__(f"Header is missing required columns: {', '.join(self.missing)}")


class MissingRegion(IngestionError):
    """A registry region has no rows at all"""

    def __init__(self, codes):
        self.codes = list(codes)
        super().__init__(f"Regions absent from input: {', '.join(self.codes)}")


class GapInSeries(IngestionError):
    """A region is missing one or more days inside the covered date range"""

    def __init__(self, region: str, missing_day: date, missing_count: int = 1):
        self.region = region
        self.missing_day = missing_day
        self.missing_count = missing_count
        super().__init__(
            f"Region {region} has {missing_count} missing day(s), first at {missing_day.isoformat()}"
        )


class NegativeTotal(IngestionError):
    """A cumulative total is negative"""

    def __init__(self, line: int, column: str, value: float):
        self.line = line
        self.column = column
        self.value = value
        super().__init__(f"Line {line}: negative {column} ({value})")


class UnparseableRow(IngestionError):
    """A row could not be parsed"""

    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"Line {line}: {reason}")


class OutOfRange(PandemicGrowthError):
    """An index (region, day, lag) is outside its declared range"""


class InsufficientHistory(PandemicGrowthError):
    """Not enough past days to build the requested window"""

    def __init__(self, message: str, minimum_day: Optional[int] = None):
        self.minimum_day = minimum_day
        if minimum_day is not None:
            message = f"{message} (first valid day is k={minimum_day})"
        super().__init__(message)


class DimensionMismatch(PandemicGrowthError):
    """Array shapes disagree with the declared (R, N_tau) dimensions"""


class HorizonTooLong(PandemicGrowthError):
    """Forecast horizon exceeds the lag depth of the stacked state"""


class Divergence(PandemicGrowthError):
    """Network training produced a non-finite loss"""

    def __init__(self, epoch: int, loss_curve):
        self.epoch = epoch
        self.loss_curve = list(loss_curve)
        super().__init__(f"Training diverged at epoch {epoch}: loss is not finite")


class EmptyReport(PandemicGrowthError):
    """A summary was requested for a report without records"""


class NonConvergence(PandemicGrowthError):
    """The polynomial root finder did not reach its tolerance"""

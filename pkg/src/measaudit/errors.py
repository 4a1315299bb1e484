"""Exception hierarchy shared by every module.

All errors derive from :class:`AuditError` so the CLI can map any of them to
exit status 1 while keeping the originating module in the message.
"""


class AuditError(Exception):
    module = "measaudit"

    def __str__(self):
        return f"[{self.module}] {super().__str__()}"


# ingest
class IngestError(AuditError):
    module = "ingest"


class EmptyInput(IngestError):
    pass


class RaggedRow(IngestError):
    def __init__(self, row_index, expected, got):
        self.row_index = row_index
        super().__init__(f"row {row_index}: expected {expected} fields, got {got}")


class DuplicateColumnName(IngestError):
    pass


class EncodingError(IngestError):
    pass


class AllRowsDropped(IngestError):
    pass


class NoNumericColumns(IngestError):
    pass


class InvalidFormat(IngestError):
    pass


# split
class SplitError(AuditError):
    module = "split"


class InvalidSplit(SplitError):
    pass


class EmptyTrain(SplitError):
    pass


class EmptyTest(SplitError):
    pass


# modeling / metrics shared
class DimensionMismatch(AuditError):
    module = "modeling"


class TooFewRows(AuditError):
    module = "modeling"


class RankDeficient(AuditError):
    module = "modeling"


class UnknownColumn(AuditError):
    module = "modeling"


class InvalidRealization(AuditError):
    module = "modeling"


class MetricsError(AuditError):
    module = "metrics"


class DomainError(MetricsError):
    pass


class NonPositiveSigma(MetricsError):
    pass


class NegativeNoiseLevel(MetricsError):
    pass


class EmptyMetricInput(MetricsError, EmptyInput):
    pass


# stability
class StabilityError(AuditError):
    module = "stability"


class TooFewPoints(StabilityError):
    pass


class FewerThanTwoRealizations(StabilityError):
    pass


# synth
class InvalidSpec(AuditError):
    module = "synth"


# config
class ConfigError(AuditError):
    module = "config"


class UnknownKey(ConfigError):
    pass


class MissingRequired(ConfigError):
    pass


class InvalidValue(ConfigError):
    pass


# report
class ReportError(AuditError):
    module = "report"

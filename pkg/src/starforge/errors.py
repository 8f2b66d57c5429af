"""Exception types shared across the pipeline."""


class StarforgeError(Exception):
    """Base class for all errors raised by this package."""


class MalformedJson(StarforgeError):
    """A line in a JSON-lines file could not be parsed."""


class EmptySelection(StarforgeError):
    """A filter matched no businesses."""


class UnknownBusiness(StarforgeError):
    """A business id is not present in the corpus."""


class DegenerateInput(StarforgeError):
    """A fit was attempted on unusable data (for example zero rows)."""


class DimensionMismatch(StarforgeError):
    """Feature count of the input does not match the trained model."""


class LengthMismatch(StarforgeError):
    """Paired sequences differ in length."""


class EmptyInput(StarforgeError):
    """An aggregate was requested over zero elements."""


class TooFewBusinesses(StarforgeError):
    """Not enough rows to build the requested fold plan."""


class IoFailure(StarforgeError):
    """An output file could not be written or an artifact is unreadable."""

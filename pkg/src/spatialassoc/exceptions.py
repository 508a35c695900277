class DegenerateError(ValueError):
    """Raised when the data make a statistic numerically undefined.

    Examples are coincident locations only, a constant variable, a perfect
    sample correlation or a nonpositive effective variance.  It subclasses
    :class:`ValueError` so callers that only care about bad input can catch
    both at once.
    """


class DataFormatError(ValueError):
    """Raised when an input file cannot be parsed."""

"""Exception types shared across the package.

The CLI maps each class to a distinct exit code; library callers can catch
them individually.
"""


class ParameterError(ValueError):
    """Invalid argument: bad group label, out-of-range index, missing flag."""


class UnsupportedTypeError(ParameterError):
    """Coxeter matrix outside the exact rings this engine supports."""


class FormatError(ValueError):
    """Malformed on-disk data (layer file line, CSV row)."""


class IntegrityError(RuntimeError):
    """Stored data is inconsistent: missing layer file, count mismatch."""


class ResourceLimitError(RuntimeError):
    """A configured node/memory/disk budget would be (or was) exceeded."""


class InternalError(RuntimeError):
    """A 'cannot happen' invariant was violated; indicates a bug."""

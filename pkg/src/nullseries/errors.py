"""Exception types shared across the package."""


class NullSeriesError(Exception):
    """Base class for all package errors."""


class AliasingError(NullSeriesError, ValueError):
    """Evaluation grid too coarse for the requested partial sum."""


class ResourceError(NullSeriesError):
    """A degree or size cap would be exceeded."""

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class NumericError(NullSeriesError):
    """A numerical procedure failed to reach its tolerance."""

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class CertificateError(NullSeriesError):
    """A certified bound does not hold."""

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate

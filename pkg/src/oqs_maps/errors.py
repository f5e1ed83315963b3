"""Exception types. All derive from ``ValueError`` so callers can catch broadly."""


class OQSError(ValueError):
    pass


class DimensionError(OQSError):
    pass


class NotHermitianError(OQSError):
    pass


class NotPSDError(OQSError):
    pass


class InvalidStateError(OQSError):
    pass


class DecompositionError(OQSError):
    pass


class NotCPError(OQSError):
    pass


class DegenerateSpectrumError(OQSError):
    pass


class ConfigError(OQSError):
    pass

"""Exception taxonomy shared by the engine, CLI and service.

The CLI maps these onto exit codes: DataError -> 3, ProviderError -> 4.
"""


class PresetLabError(Exception):
    """Base class for all engine errors."""


class DataError(PresetLabError):
    """Invalid schema, bank, preset or request data."""


class SchemaFormatError(DataError):
    """Schema file is malformed or violates schema invariants."""


class BankFormatError(DataError):
    """Bank file is malformed or a record fails validation."""


class ValidationError(DataError):
    """A preset value violates its parameter spec."""


class UnknownPresetError(DataError):
    """A preset id was not found in the generation."""


class UnknownSessionError(DataError):
    """A session id was not found in the service store."""


class ProviderError(PresetLabError):
    """An embedding provider failed or does not support the request."""


class TextNotSupportedError(ProviderError):
    """Provider cannot embed text queries."""


class NotEmbeddedError(ProviderError):
    """A key has no precomputed vector in a file provider."""

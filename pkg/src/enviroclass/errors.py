"""Exception hierarchy. Every error carries a short category used in CLI output."""


class EnviroclassError(Exception):
    category = "error"


class SchemaError(EnviroclassError):
    category = "schema"


class DomainError(EnviroclassError, ValueError):
    category = "domain"


class NoOverlapError(EnviroclassError):
    category = "no-overlap"


class ConsistencyError(EnviroclassError):
    category = "consistency"


class ModelFormatError(EnviroclassError):
    category = "model"


class ConfigError(EnviroclassError):
    category = "config"

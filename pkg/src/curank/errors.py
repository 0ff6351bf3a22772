"""Exception types raised across the package."""


class CuError(Exception):
    """Base class for domain errors."""


class MalformedPayload(CuError, ValueError):
    pass


class NotNormalizable(CuError, ValueError):
    pass


class EmptyNormalizedFamily(CuError, ValueError):
    pass


class NotCompactlyDominated(CuError, ValueError):
    pass


class ChainNotIncreasing(CuError, ValueError):
    pass


class NotFull(CuError, ValueError):
    pass


class NormalizationRequired(CuError, ValueError):
    pass


class ModelContractError(CuError, TypeError):
    """A model lacks a capability an operation needs."""


class UnknownPropertyName(CuError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown property"


class ParseError(CuError, ValueError):
    pass


class ValidationError(CuError, ValueError):
    def __init__(self, path: str, message: str) -> None:
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message

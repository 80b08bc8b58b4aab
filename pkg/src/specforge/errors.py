"""Domain error types shared across the package."""


class SpecForgeError(Exception):
    """Base class for all domain errors raised by specforge."""


class SchemaError(SpecForgeError):
    """A file does not match its declared schema or version."""


class CatalogError(SpecForgeError):
    """A catalog set violates referential integrity or cannot be loaded."""


class RuleError(SpecForgeError):
    """A rule program is syntactically or referentially invalid."""


class SessionError(SpecForgeError):
    """A selection session was driven outside its state contract."""

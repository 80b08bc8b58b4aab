"""specforge: drawing modules, position designations, table documents and
electronic nomenclature catalogs for specification work."""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    CatalogError,
    RuleError,
    SchemaError,
    SessionError,
    SpecForgeError,
)

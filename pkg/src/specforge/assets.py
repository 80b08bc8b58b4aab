"""Access to the data files shipped with the package."""

from __future__ import annotations

from pathlib import Path

from .table.kind import TableKind, load_table_kind

DATA_DIR = Path(__file__).parent / "data"
KINDS_DIR = DATA_DIR / "kinds"
SAMPLE_CATALOG_DIR = DATA_DIR / "sample_catalog"
UNITS_FILE = DATA_DIR / "units.csv"
BUILTIN_MENUS_FILE = DATA_DIR / "builtins.txt"


def shipped_kind(name: str) -> TableKind:
    return load_table_kind(KINDS_DIR / f"{name}.json")


def shipped_kind_names() -> list[str]:
    return sorted(p.stem for p in KINDS_DIR.glob("*.json"))

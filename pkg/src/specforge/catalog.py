"""Electronic nomenclature catalogs: data tables, metatable, registry.

A catalog set is one directory: ``meta.csv`` describes table structures
(russian name or designation, units, data type per column), ``registry.csv``
binds every data table to its structure, title, source catalog and
classification, ``tables/*.csv`` hold the data with universally named
columns (MARKA, X_1, X_2, ...), ``rules/*.rule`` hold generation programs
and ``menus.txt`` the external menus.  The set is immutable after load and
safe to share between readers.

Cells may embed a direct menu - a list of admissible variants separated by
``|`` - resolved when the designer has already settled on a product.

Table names carry their work profile as the prefix before the first
underscore (``mt_pipes`` belongs to profile ``mt``); per-profile statistics
group by that prefix.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

from .errors import CatalogError
from .rules import RuleProgram, parse_menus, parse_rules, validate_program
from .rules import load_shipped_builtins

PIPE_KEYWORD = "труба"
WELL_KEYWORD = "колодец"

KIP_FLAGS = ("primary", "secondary")
INTERVAL_KEYS = ("T", "P", "DN", "OD", "THR")


@dataclass(frozen=True)
class DirectMenu:
    variants: tuple[str, ...]

    def __str__(self) -> str:
        return "|".join(self.variants)


CellValue = object  # str | DirectMenu


@dataclass
class DataTable:
    name: str
    columns: list[str]
    rows: list[list[CellValue]]


@dataclass(frozen=True)
class MetaColumn:
    name: str
    units: str
    dtype: str  # "number" | "text"


@dataclass(frozen=True)
class KipClass:
    flag: str  # "primary" | "secondary"
    letters: str  # measured quantities: F flow, P pressure, T temperature...


@dataclass(frozen=True)
class GroupClass:
    path: str  # hierarchical product group, e.g. "Оборудование/Насос"


@dataclass(frozen=True)
class IntervalClass:
    intervals: dict[str, tuple[float, float]]


@dataclass(frozen=True)
class RegistryEntry:
    table: str
    structure: str
    title: str
    source: str
    classification: KipClass | GroupClass | IntervalClass | None


@dataclass
class CatalogSet:
    directory: Path
    tables: dict[str, DataTable]
    meta: dict[str, dict[str, MetaColumn]]
    registry: dict[str, RegistryEntry]
    rules: dict[str, RuleProgram]
    menus: dict[str, list[str]]


def _parse_cell(raw: str) -> CellValue:
    if "|" in raw:
        variants = tuple(v for v in raw.split("|") if v)
        if len(variants) >= 2:
            return DirectMenu(variants)
    return raw


def _parse_classification(kind: str, args: str, table: str):
    if kind == "none" or kind == "":
        return None
    if kind == "kip":
        flag, _, letters = args.partition(":")
        if flag not in KIP_FLAGS:
            raise CatalogError(
                f"table {table!r}: kip flag must be primary or secondary"
            )
        return KipClass(flag=flag, letters=letters)
    if kind == "group":
        if not args:
            raise CatalogError(f"table {table!r}: empty group path")
        return GroupClass(path=args)
    if kind == "intervals":
        intervals: dict[str, tuple[float, float]] = {}
        for chunk in args.split(";"):
            if not chunk:
                continue
            key, _, span = chunk.partition("=")
            if key not in INTERVAL_KEYS:
                raise CatalogError(
                    f"table {table!r}: unknown interval key {key!r}"
                )
            lo, sep, hi = span.partition("..")
            if not sep:
                raise CatalogError(
                    f"table {table!r}: interval {chunk!r} must be min..max"
                )
            intervals[key] = (float(lo), float(hi))
        return IntervalClass(intervals=intervals)
    raise CatalogError(f"table {table!r}: unknown classification kind {kind!r}")


def load_catalog_set(directory: str | Path) -> CatalogSet:
    """Load and cross-validate a whole catalog set from a directory."""
    directory = Path(directory)
    meta_path = directory / "meta.csv"
    registry_path = directory / "registry.csv"
    tables_dir = directory / "tables"
    rules_dir = directory / "rules"
    menus_path = directory / "menus.txt"
    for required in (meta_path, registry_path, tables_dir, menus_path):
        if not required.exists():
            raise CatalogError(f"catalog set is missing {required.name}")

    meta: dict[str, dict[str, MetaColumn]] = {}
    with open(meta_path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["structure", "column", "name", "units", "type"]:
            raise CatalogError("meta.csv: unexpected header")
        for row in reader:
            if row["type"] not in ("number", "text"):
                raise CatalogError(
                    f"meta.csv: structure {row['structure']!r} column "
                    f"{row['column']!r}: type must be number or text"
                )
            meta.setdefault(row["structure"], {})[row["column"]] = MetaColumn(
                name=row["name"], units=row["units"], dtype=row["type"]
            )

    registry: dict[str, RegistryEntry] = {}
    with open(registry_path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        expected = ["table", "structure", "title", "source", "class_kind", "class_args"]
        if reader.fieldnames != expected:
            raise CatalogError("registry.csv: unexpected header")
        for row in reader:
            name = row["table"]
            if row["structure"] not in meta:
                raise CatalogError(
                    f"table {name!r}: structure {row['structure']!r} is not in "
                    "the metatable"
                )
            registry[name] = RegistryEntry(
                table=name,
                structure=row["structure"],
                title=row["title"],
                source=row["source"],
                classification=_parse_classification(
                    row["class_kind"], row["class_args"], name
                ),
            )

    tables: dict[str, DataTable] = {}
    for path in sorted(tables_dir.glob("*.csv")):
        name = path.stem
        if name not in registry:
            raise CatalogError(f"table {name!r} has no registry entry")
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            try:
                columns = next(reader)
            except StopIteration:
                raise CatalogError(f"table {name!r}: empty file")
            rows = [[_parse_cell(cell) for cell in row] for row in reader]
        if not rows:
            raise CatalogError(f"table {name!r}: a data table needs >= 1 row")
        described = meta[registry[name].structure]
        for column in columns:
            if column not in described:
                raise CatalogError(
                    f"table {name!r}: column {column!r} is not described by "
                    f"structure {registry[name].structure!r}"
                )
        for i, row in enumerate(rows):
            if len(row) != len(columns):
                raise CatalogError(f"table {name!r}: row {i + 1} has wrong arity")
        tables[name] = DataTable(name=name, columns=columns, rows=rows)

    for name in registry:
        if name not in tables:
            raise CatalogError(f"registry names missing table {name!r}")

    menus = parse_menus(menus_path.read_text(encoding="utf-8"))
    builtin_names = set(load_shipped_builtins())

    rules: dict[str, RuleProgram] = {}
    for name, table in tables.items():
        rule_path = rules_dir / f"{name}.rule"
        if not rule_path.exists():
            raise CatalogError(
                f"table {name!r}: no rule file and no explicit skip marker"
            )
        program = parse_rules(rule_path.read_text(encoding="utf-8"))
        validate_program(program, name, table.columns, set(menus), builtin_names)
        rules[name] = program

    return CatalogSet(
        directory=directory,
        tables=tables,
        meta=meta,
        registry=registry,
        rules=rules,
        menus=menus,
    )


# --- filtering -------------------------------------------------------------------

@dataclass
class FilterCriteria:
    object_type: str | None = None  # "pipe" | "well" | None
    group_keyword: str | None = None
    kip_flag: str | None = None
    kip_letter: str | None = None
    intervals: dict[str, float] = field(default_factory=dict)


def filter_tables(catalog_set: CatalogSet,
                  criteria: FilterCriteria) -> list[RegistryEntry]:
    """Conjunctive narrowing of the registry by classification."""
    out: list[RegistryEntry] = []
    for entry in catalog_set.registry.values():
        cls = entry.classification
        if criteria.object_type == "pipe":
            if not (isinstance(cls, GroupClass)
                    and PIPE_KEYWORD in cls.path.casefold()):
                continue
        elif criteria.object_type == "well":
            if not (isinstance(cls, GroupClass)
                    and WELL_KEYWORD in cls.path.casefold()):
                continue
        if criteria.group_keyword is not None:
            if not (isinstance(cls, GroupClass)
                    and criteria.group_keyword.casefold() in cls.path.casefold()):
                continue
        if criteria.kip_flag is not None:
            if not (isinstance(cls, KipClass) and cls.flag == criteria.kip_flag):
                continue
        if criteria.kip_letter is not None:
            if not (isinstance(cls, KipClass)
                    and criteria.kip_letter in cls.letters):
                continue
        ok = True
        for key, value in criteria.intervals.items():
            if not (
                isinstance(cls, IntervalClass)
                and key in cls.intervals
                and cls.intervals[key][0] <= value <= cls.intervals[key][1]
            ):
                ok = False
                break
        if ok:
            out.append(entry)
    return out


# --- row queries -----------------------------------------------------------------

def query_rows(table: DataTable,
               predicates: dict[str, dict]) -> list[tuple[int, dict[str, CellValue]]]:
    """Rows satisfying all predicates, original order preserved.

    Predicates per column: {"equals": v} | {"contains": v} |
    {"min": x, "max": y} (either bound optional).  Direct-menu cells match
    when any variant matches.
    """
    for column in predicates:
        if column not in table.columns:
            raise CatalogError(
                f"table {table.name!r} has no column {column!r}"
            )
    out: list[tuple[int, dict[str, CellValue]]] = []
    for i, row in enumerate(table.rows):
        values = dict(zip(table.columns, row))
        if all(
            _cell_matches(values[col], spec) for col, spec in predicates.items()
        ):
            out.append((i, values))
    return out


def _variants(cell: CellValue) -> tuple[str, ...]:
    if isinstance(cell, DirectMenu):
        return cell.variants
    return (str(cell),)


def _cell_matches(cell: CellValue, spec: dict) -> bool:
    variants = _variants(cell)
    if "equals" in spec:
        if not any(v == str(spec["equals"]) for v in variants):
            return False
    if "contains" in spec:
        needle = str(spec["contains"]).casefold()
        if not any(needle in v.casefold() for v in variants):
            return False
    if "min" in spec or "max" in spec:
        lo = float(spec.get("min", float("-inf")))
        hi = float(spec.get("max", float("inf")))

        def in_range(v: str) -> bool:
            try:
                x = float(v.replace(",", "."))
            except ValueError:
                return False
            return lo <= x <= hi

        if not any(in_range(v) for v in variants):
            return False
    return True


# --- statistics --------------------------------------------------------------------

@dataclass
class ProfileStats:
    table_count: int
    property_names: int
    properties_in_mm: int
    properties_unnamed: int
    rows_total: int
    rows_min: int
    rows_max: int


def profile_of(table_name: str) -> str:
    return table_name.split("_", 1)[0]


def catalog_stats(catalog_set: CatalogSet) -> dict[str, ProfileStats]:
    """Structural counts per work profile, mirroring the registry."""
    profiles: dict[str, list[str]] = {}
    for name in catalog_set.tables:
        profiles.setdefault(profile_of(name), []).append(name)
    out: dict[str, ProfileStats] = {}
    for profile in sorted(profiles):
        names = profiles[profile]
        structures = {catalog_set.registry[n].structure for n in names}
        columns = [
            col
            for s in sorted(structures)
            for col in catalog_set.meta[s].values()
        ]
        row_counts = [len(catalog_set.tables[n].rows) for n in names]
        out[profile] = ProfileStats(
            table_count=len(names),
            property_names=len({c.name for c in columns if c.name}),
            properties_in_mm=sum(1 for c in columns if c.units == "мм"),
            properties_unnamed=sum(1 for c in columns if not c.name),
            rows_total=sum(row_counts),
            rows_min=min(row_counts),
            rows_max=max(row_counts),
        )
    return out

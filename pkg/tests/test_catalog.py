import csv
import shutil

import pytest

from specforge.assets import SAMPLE_CATALOG_DIR
from specforge.catalog import (
    DirectMenu,
    FilterCriteria,
    catalog_stats,
    filter_tables,
    load_catalog_set,
    query_rows,
)
from specforge.errors import CatalogError


@pytest.fixture(scope="module")
def catalog():
    return load_catalog_set(SAMPLE_CATALOG_DIR)


# --- loading ---------------------------------------------------------------

def test_sample_set_loads(catalog):
    assert set(catalog.tables) == {
        "mt_pipe_steel", "mt_valve_small", "mt_valve_large",
        "kip_manometers", "kip_disk250", "ovk_duct_steel",
    }
    assert len(catalog.registry) == 6
    assert "MATERIALS" in catalog.menus


def test_direct_menu_cells_parsed(catalog):
    table = catalog.tables["kip_manometers"]
    row = table.rows[0]
    cell = dict(zip(table.columns, row))["X_3"]
    assert isinstance(cell, DirectMenu)
    assert cell.variants == ("радиальный", "осевой")


def test_unknown_structure_rejected(tmp_path):
    target = tmp_path / "cat"
    shutil.copytree(SAMPLE_CATALOG_DIR, target)
    registry = (target / "registry.csv").read_text(encoding="utf-8")
    (target / "registry.csv").write_text(
        registry.replace("mt.pipe,", "mt.nope,"), encoding="utf-8"
    )
    with pytest.raises(CatalogError) as err:
        load_catalog_set(target)
    assert "mt.nope" in str(err.value)


def test_empty_directory_rejected(tmp_path):
    with pytest.raises(CatalogError):
        load_catalog_set(tmp_path)


def test_missing_rule_file_rejected(tmp_path):
    target = tmp_path / "cat"
    shutil.copytree(SAMPLE_CATALOG_DIR, target)
    (target / "rules" / "mt_pipe_steel.rule").unlink()
    with pytest.raises(CatalogError) as err:
        load_catalog_set(target)
    assert "mt_pipe_steel" in str(err.value)


def test_skip_marker_accepted(tmp_path):
    target = tmp_path / "cat"
    shutil.copytree(SAMPLE_CATALOG_DIR, target)
    (target / "rules" / "mt_pipe_steel.rule").write_text("!skip\n", encoding="utf-8")
    loaded = load_catalog_set(target)
    assert loaded.rules["mt_pipe_steel"].skip


def test_table_without_registry_entry_rejected(tmp_path):
    target = tmp_path / "cat"
    shutil.copytree(SAMPLE_CATALOG_DIR, target)
    (target / "tables" / "mt_orphan.csv").write_text(
        "MARKA\nx\n", encoding="utf-8"
    )
    with pytest.raises(CatalogError) as err:
        load_catalog_set(target)
    assert "mt_orphan" in str(err.value)


def test_undescribed_column_rejected(tmp_path):
    target = tmp_path / "cat"
    shutil.copytree(SAMPLE_CATALOG_DIR, target)
    path = target / "tables" / "kip_disk250.csv"
    path.write_text("MARKA,X_9\nДИСК-250,x\n", encoding="utf-8")
    with pytest.raises(CatalogError) as err:
        load_catalog_set(target)
    assert "X_9" in str(err.value)


# --- filtering --------------------------------------------------------------

def test_filter_object_type_pipe(catalog):
    entries = filter_tables(catalog, FilterCriteria(object_type="pipe"))
    assert [e.table for e in entries] == ["mt_pipe_steel"]


def test_filter_kip_letter(catalog):
    entries = filter_tables(catalog, FilterCriteria(kip_letter="P"))
    assert [e.table for e in entries] == ["kip_manometers"]
    entries = filter_tables(catalog, FilterCriteria(kip_letter="T"))
    assert [e.table for e in entries] == ["kip_disk250"]


def test_filter_kip_flag(catalog):
    entries = filter_tables(catalog, FilterCriteria(kip_flag="primary"))
    assert [e.table for e in entries] == ["kip_manometers"]


def test_filter_interval(catalog):
    entries = filter_tables(catalog, FilterCriteria(intervals={"DN": 50}))
    assert [e.table for e in entries] == ["mt_valve_large"]
    entries = filter_tables(catalog, FilterCriteria(intervals={"DN": 30}))
    assert [e.table for e in entries] == ["mt_valve_small", "mt_valve_large"]


def test_filter_group_keyword(catalog):
    entries = filter_tables(catalog, FilterCriteria(group_keyword="Воздуховод"))
    assert [e.table for e in entries] == ["ovk_duct_steel"]


def test_filter_conjunction_monotone(catalog):
    base = filter_tables(catalog, FilterCriteria())
    narrowed = filter_tables(
        catalog, FilterCriteria(object_type="pipe", intervals={"DN": 50})
    )
    assert len(base) == 6
    assert set(e.table for e in narrowed) <= set(e.table for e in base)
    assert narrowed == []  # pipe table carries no intervals


# --- row queries ---------------------------------------------------------------

def test_query_equals(catalog):
    table = catalog.tables["mt_valve_small"]
    rows = query_rows(table, {"MARKA": {"equals": "15кч18п9"}})
    assert len(rows) == 1
    assert rows[0][0] == 2


def test_query_numeric_range(catalog):
    table = catalog.tables["mt_pipe_steel"]
    rows = query_rows(table, {"X_1": {"min": 40, "max": 60}})
    assert [r[1]["MARKA"] for r in rows] == ["40", "50"]


def test_query_contains_direct_menu(catalog):
    table = catalog.tables["kip_manometers"]
    rows = query_rows(table, {"X_3": {"contains": "осевой"}})
    assert [r[0] for r in rows] == [0]


def test_query_unknown_column(catalog):
    with pytest.raises(CatalogError):
        query_rows(catalog.tables["mt_pipe_steel"], {"X_9": {"equals": "x"}})


def test_query_preserves_order(catalog):
    table = catalog.tables["mt_pipe_steel"]
    rows = query_rows(table, {"X_1": {"min": 0}})
    assert [r[0] for r in rows] == list(range(6))


# --- statistics -----------------------------------------------------------------

def test_stats_hand_tallied(catalog):
    stats = catalog_stats(catalog)
    assert set(stats) == {"mt", "kip", "ovk"}

    mt = stats["mt"]
    assert mt.table_count == 3
    assert mt.property_names == 5
    assert mt.properties_in_mm == 4
    assert mt.properties_unnamed == 1
    assert (mt.rows_total, mt.rows_min, mt.rows_max) == (11, 2, 6)

    kip = stats["kip"]
    assert kip.table_count == 2
    assert kip.property_names == 5
    assert kip.properties_in_mm == 0
    assert kip.properties_unnamed == 0
    assert (kip.rows_total, kip.rows_min, kip.rows_max) == (3, 1, 2)

    ovk = stats["ovk"]
    assert ovk.table_count == 1
    assert ovk.property_names == 3
    assert ovk.properties_in_mm == 2
    assert ovk.properties_unnamed == 0
    assert (ovk.rows_total, ovk.rows_min, ovk.rows_max) == (2, 2, 2)


def test_stats_totals_match_file_line_counts(catalog):
    # independent cross-check: count data lines straight from the CSV files
    stats = catalog_stats(catalog)
    by_profile: dict[str, int] = {}
    for path in (SAMPLE_CATALOG_DIR / "tables").glob("*.csv"):
        with open(path, encoding="utf-8", newline="") as fh:
            n = sum(1 for _ in csv.reader(fh)) - 1
        profile = path.stem.split("_", 1)[0]
        by_profile[profile] = by_profile.get(profile, 0) + n
    assert {p: s.rows_total for p, s in stats.items()} == by_profile

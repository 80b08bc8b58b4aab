"""Acceptance suite: one test per acceptance criterion, at stated tolerances.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one line per
criterion.
"""

import copy
import random
import time
from collections import Counter

import pytest

from specforge import collation
from specforge.assets import SAMPLE_CATALOG_DIR, shipped_kind
from specforge.catalog import catalog_stats, load_catalog_set
from specforge.drawing import Document, save_document
from specforge.model import DuplicateScope, ObjectType, PoType, SpecProps
from specforge.pipeline import autofill, product_rows
from specforge.po import check_duplicate, check_duplicates_files, make_po
from specforge.rules import MenuPrompt, convert_units, run_script, start_session
from specforge.table import GoodsBuffer, Leaf, Split, TableKind, new_table

from collation_oracle import oracle_sort
from designation_gen import corpus, random_designation


def _report(name):
    print(f"[PASS] {name}", flush=True)


# -------------------------------------------------------------------------

def test_criterion_collation_suite():
    started = time.perf_counter()

    # the five ordering rules on their canonical examples
    assert collation.compare("2", "10") < 0
    assert collation.compare("5", "IV") < 0
    assert collation.compare("Б1", "B1") < 0
    assert collation.compare("A", "a") < 0
    assert collation.compare("A1", "A1") == 0

    rng = random.Random(2024)
    pool = corpus(seed=11, size=2500)
    for _ in range(10_000):
        a, b, c = (rng.choice(pool) for _ in range(3))
        cab = collation.compare(a, b)
        assert cab == -collation.compare(b, a), (a, b)
        lo, mid, hi = sorted([a, b, c], key=collation.sort_key)
        assert collation.compare(lo, mid) <= 0
        assert collation.compare(mid, hi) <= 0
        assert collation.compare(lo, hi) <= 0

    big = corpus(seed=12, size=10_000)
    assert collation.sort_designations(big) == oracle_sort(big)

    elapsed = time.perf_counter() - started
    assert elapsed < 5.0, f"collation suite took {elapsed:.2f}s"
    _report(f"collation: 10^4 triples antisymmetric/transitive, "
            f"sort == key-tuple oracle on 10^4 corpus ({elapsed:.2f}s)")


def test_criterion_tokenizer_losslessness():
    rng = random.Random(77)
    failures = 0
    for _ in range(10_000):
        designation = random_designation(rng)
        if collation.tokenize(designation).reassemble() != designation.strip():
            failures += 1
    assert failures == 0
    _report("tokenizer: reassembly equality on 10^4 generated strings, 0 failures")


def test_criterion_flange_joint_composite():
    table = new_table(shipped_kind("assembly_sheet"))
    idx = table.new_record_from_template("flange_joint")
    counts = table.arbitrary_part_counts(idx)
    assert counts == {"flange": 1, "gasket": 1, "fastener": 3}
    assert sum(counts.values()) == 5

    lay = table.layout()
    record_h = lay.record_tops[idx + 1] - lay.record_tops[idx]
    fastener_rows = {c.path[2] for c in lay.cells if c.path[:2] == (idx, 1)}
    assert fastener_rows == {0, 1, 2}
    flange_cells = [c for c in lay.cells if c.path[:2] == (idx, 0)]
    gasket_cells = [c for c in lay.cells if c.path[:2] == (idx, 2)]
    assert all(abs(c.h - record_h) < 1e-6 for c in flange_cells)
    assert all(abs(c.h - record_h) < 1e-6 for c in gasket_cells)
    _report("flange joint: 5 product rows as 1+1+3, fastener block spans "
            "3 sub-rows beside single-row neighbours")


FIG_ROWS = [
    ("1", "1", "Трубопровод пневмотранспорта", "", "", "Централизованно"),
    ("2", "(A1-30-45)", "Накопительный бункер", "", "9", ""),
    ("3", "3", "Ручная завалка", "", "9", ""),
    ("4", "4(C102-8)", "Литьевая машина", "\"Engel\"", "9", ""),
    ("5", "(A5,10)", "Аспиратор (фильтр)", "", "1", ""),
    ("6", "5B8-3/8-12", "Ввод коммуникаций", "", "1", ""),
    ("7", "7", "Участок по первичной обработке фитингов", "", "9",
     "У каждой машины"),
]


def test_criterion_goods_buffer_transfer():
    source = new_table(shipped_kind("explication"))
    for nomer, poz, name, char, qty, note in FIG_ROWS:
        source.append_record({
            "nomer": nomer, "pozicija": poz, "naimenovanie": name,
            "harakteristika": char, "kolichestvo": qty, "primechanie": note,
        })
    source.mark_range(1, 7)
    buffer = GoodsBuffer()
    source.to_buffer(buffer)
    target = new_table(shipped_kind("specification"))
    target.from_buffer(buffer)

    assert len(target.data_indices()) == 7
    for i, (_, poz, name, _, qty, note) in enumerate(FIG_ROWS, start=1):
        fields = target.record_fields(i)
        assert fields.get("naimenovanie", "") == name
        assert fields.get("primechanie", "") == note
        assert fields.get("kolichestvo", "") == qty
        assert fields.get("marka_poz", "") == poz  # Позиция -> Поз
        assert "harakteristika" not in fields
        assert "nomer" not in fields
    _report("goods buffer: 7 rows moved between kinds, same-named fields verbatim")


def _exhaustive_kinds():
    yield shipped_kind("specification")
    yield shipped_kind("assembly_sheet")
    yield TableKind(
        name="nested",
        block=Split(axis="horizontal", parts=[
            Leaf("a", 20.0, "A"),
            Split(axis="vertical", parts=[
                Leaf("b", 30.0, "B"),
                Split(axis="horizontal",
                      parts=[Leaf("c", 10.0, "C"), Leaf("d", 20.0, "D")]),
            ]),
        ]),
    )


def test_criterion_table_engine_invariants():
    # undo involution for every mutating operation
    def fresh():
        table = new_table(shipped_kind("specification"))
        for n in range(3):
            table.append_record({
                "marka_poz": str(n + 1), "naimenovanie": f"Изделие {n}",
                "kolichestvo": "1",
            })
        return table

    buffer = GoodsBuffer(rows=[{"naimenovanie": "Из буфера"}])
    mutators = [
        ("append_record", lambda t: t.append_record({"naimenovanie": "x"})),
        ("set_cell_text", lambda t: t.set_cell_text((1, 2), "другое")),
        ("delete", lambda t: (t.mark_rows([2]), t.delete_rows())),
        ("clear", lambda t: (t.mark_rows([1]), t.clear_rows())),
        ("copy", lambda t: (t.mark_rows([1]), t.copy_rows(3))),
        ("move", lambda t: (t.mark_rows([3]), t.move_rows(1))),
        ("from_buffer", lambda t: t.from_buffer(buffer)),
        ("merge_identical", lambda t: t.merge_identical("kolichestvo")),
        ("order_rows", lambda t: t.order_rows(["marka_poz"])),
        ("extract_common_names", lambda t: t.extract_common_names("naimenovanie")),
        ("add_section", lambda t: t.add_section("Раздел", 1)),
    ]
    for name, op in mutators:
        table = fresh()
        snapshot = copy.deepcopy(table.records)
        op(table)
        table.undo()
        assert table.records == snapshot, f"undo not an involution after {name}"

    # merge_identical: quantity sums and idempotence
    table = new_table(shipped_kind("specification"))
    for qty in ("2", "3"):
        table.append_record({"naimenovanie": "Болт М10", "kolichestvo": qty})
    table.merge_identical("kolichestvo")
    assert [table.record_fields(i)["kolichestvo"]
            for i in table.data_indices()] == ["5"]
    once = copy.deepcopy(table.records)
    table.merge_identical("kolichestvo")
    assert table.records == once

    # paginate preserves the record sequence exactly
    table = new_table(shipped_kind("specification"))
    rng = random.Random(5)
    for n in range(17):
        table.append_record({
            "naimenovanie": "\n".join(f"строка {k}"
                                      for k in range(rng.randrange(1, 3))),
        })
    for head_mode in ("repeat-header", "graph-numbers", "none"):
        chunks = table.paginate(60.0, head_mode=head_mode)
        flattened = [i for c in chunks for i in c.record_indices]
        assert flattened == table.data_indices()

    # cell_at / layout mutual consistency, exhaustive over small tables
    checked = 0
    for kind in _exhaustive_kinds():
        for n_records in range(0, 5):
            table = new_table(kind)
            for n in range(n_records):
                if kind.templates and n % 2 == 0:
                    table.new_record_from_template(next(iter(kind.templates)))
                else:
                    fields = kind.field_ids()
                    table.append_record({
                        fields[n % len(fields)]: "строка\nвторая" * (n % 2 + 1),
                    })
            lay = table.layout()
            for rect in lay.cells:
                for fx, fy in ((0.5, 0.5), (0.05, 0.05), (0.95, 0.95)):
                    point = (rect.x + rect.w * fx, rect.y + rect.h * fy)
                    assert table.cell_at(point) == rect.path, (kind.name, rect)
                    checked += 1
    assert checked > 500
    _report("table engine: undo involution, merge sum+idempotence, "
            f"paginate order, cell_at==layout on {checked} sampled points")


def test_criterion_rule_engine_determinism():
    catalog = load_catalog_set(SAMPLE_CATALOG_DIR)
    rng = random.Random(123)
    tables = sorted(catalog.tables)
    pairs = 0
    while pairs < 100:
        table = rng.choice(tables)
        row = rng.randrange(len(catalog.tables[table].rows))
        session = start_session(catalog, table, row)
        answers = []
        while not session.done:
            prompt = session.next_prompt()
            if isinstance(prompt, MenuPrompt):
                value = rng.randrange(len(prompt.options))
            elif prompt.kind == "number":
                value = rng.randrange(1, 500)
            else:
                value = f"код-{rng.randrange(10_000)}"
            answers.append(value)
            session.answer(value)
        first = session.finish().to_json().encode("utf-8")
        replay = run_script(catalog, table, row, answers).to_json().encode("utf-8")
        assert first == replay, (table, row, answers)
        pairs += 1

    assert convert_units(2, "м") == 2000
    assert isinstance(convert_units(2, "м"), int)
    _report("rule engine: 100 random (row, answer-script) pairs replay "
            "byte-identical; 2 м == 2000 mm exactly")


def _random_mixed_document(rng: random.Random) -> Document:
    doc = Document()
    n = rng.randrange(1, 8)
    for k in range(n):
        objecttype = rng.choice(
            [ObjectType.NONE, ObjectType.PIPE, ObjectType.WELL]
        )
        make_po(
            doc, [f"П{k + 1}"], PoType.ONE_PRODUCT, objecttype,
            [SpecProps(naimenovanie=f"Изделие {k} #{rng.randrange(10**6)}",
                       kolichestvo=str(rng.randrange(1, 9)))],
            (float(k), 0.0),
        )
    return doc


def _row_key(row: dict) -> tuple:
    keep = ("marka_poz", "naimenovanie", "kolichestvo", "primechanie")
    return tuple(row.get(f, "") for f in keep)


def test_criterion_routing_partition():
    rng = random.Random(31)
    spec_kind = shipped_kind("specification")
    well_kind = shipped_kind("well_table")
    for _ in range(30):
        doc = _random_mixed_document(rng)
        everything = Counter(_row_key(r) for _, r in product_rows(doc))
        spec_table = autofill(doc, spec_kind)
        well_table = autofill(doc, well_kind)
        got = Counter(
            _row_key(spec_table.record_fields(i))
            for i in spec_table.data_indices()
        )
        got.update(
            _row_key(well_table.record_fields(i))
            for i in well_table.data_indices()
        )
        assert got == everything
    _report("routing: specification rows ⊎ well-table rows == all product rows "
            "(multiset equality over 30 random documents)")


def test_criterion_duplicate_control():
    rng = random.Random(9)
    from specforge.model import ElementKind, StubPayload

    for _ in range(60):
        doc = Document()
        for k in range(rng.randrange(1, 6)):
            designation = f"Д{rng.randrange(4)}"
            kind = rng.choice([
                ElementKind.PO_MODULE,
                ElementKind.AXONO_SCHEME_STUB,
                ElementKind.VK_PROFILE_STUB,
            ])
            if kind == ElementKind.PO_MODULE:
                make_po(doc, [designation], PoType.ONE_PRODUCT, ObjectType.NONE,
                        [SpecProps()], (0, 0))
            else:
                doc.add_element(kind, "0", (0, 0),
                                StubPayload(designations=[designation]))
        narrow_bools = [rng.random() < 0.5 for _ in range(3)]
        wide_bools = [a or rng.random() < 0.5 for a in narrow_bools]
        narrow = DuplicateScope(*narrow_bools)
        wide = DuplicateScope(*wide_bools)
        candidate = f"Д{rng.randrange(4)}"
        if not check_duplicate(doc, narrow, candidate).unique:
            assert not check_duplicate(doc, wide, candidate).unique

    _report("duplicate control: scope-monotone over 60 random scope pairs")


def test_criterion_cross_file_duplicate(tmp_path):
    planted = "НВ12-3"
    paths = []
    for n in range(3):
        doc = Document()
        make_po(doc, [f"Ф{n}"], PoType.ONE_PRODUCT, ObjectType.NONE,
                [SpecProps()], (0, 0))
        if n != 1:
            make_po(doc, [planted], PoType.ONE_PRODUCT, ObjectType.NONE,
                    [SpecProps()], (5, 5))
        path = tmp_path / f"drawing{n}.json"
        save_document(doc, path)
        paths.append(path)
    report = check_duplicates_files(paths, DuplicateScope())
    assert list(report) == [planted]
    assert {loc.file for loc in report[planted]} == {
        str(paths[0]), str(paths[2]),
    }
    _report("duplicate control: planted duplicate found across 3 files")


def test_criterion_catalog_stats_hand_tallied():
    stats = catalog_stats(load_catalog_set(SAMPLE_CATALOG_DIR))
    expected = {
        "mt": (3, 5, 4, 1, 11, 2, 6),
        "kip": (2, 5, 0, 0, 3, 1, 2),
        "ovk": (1, 3, 2, 0, 2, 2, 2),
    }
    got = {
        p: (s.table_count, s.property_names, s.properties_in_mm,
            s.properties_unnamed, s.rows_total, s.rows_min, s.rows_max)
        for p, s in stats.items()
    }
    assert got == expected
    _report("catalog stats: shipped fixture equals hand-tallied counts exactly")

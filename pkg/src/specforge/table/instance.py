"""Table instances: a record array over a kind's block structure.

Record 0 is the header.  Data records mirror the kind's block tree, with a
concrete part count for every arbitrary division.  Section records are
full-width title rows; ordering and merging respect section boundaries.

All mutating operations journal a snapshot first, so a single undo restores
the exact previous state (journal depth 32 by default).
"""

from __future__ import annotations

import copy
import json
import re
from dataclasses import dataclass, field
from decimal import Decimal
from pathlib import Path
from typing import Iterator, Mapping, Union

from .. import collation
from ..errors import SchemaError, SpecForgeError
from .kind import (
    KIND_SCHEMA,
    Cell,
    CellStyle,
    Leaf,
    Split,
    TableKind,
    kind_from_dict,
    kind_to_dict,
)
from . import layout as _layout
from .layout import TableLayout, locate_cell

Content = Union[Cell, list]

# Fields holding position designations sort via designation collation.
DESIGNATION_FIELDS = ("marka_poz", "pozicija", "oboznachenie")

# Same-named matching for cross-kind transfer treats these as one field:
# explication "Позиция" values land in the specification "Поз." column.
TRANSFER_EQUIV = {"pozicija": "marka_poz", "marka_poz": "pozicija"}

_QTY_RE = re.compile(r"^\s*(\d+(?:[.,]\d+)?)(.*)$", re.S)


@dataclass
class DataRecord:
    content: Content


@dataclass
class SectionRecord:
    title: str


Record = Union[DataRecord, SectionRecord]


@dataclass
class GoodsBuffer:
    """Cross-table row clipboard keyed by canonical field ids."""

    rows: list[dict[str, str]] = field(default_factory=list)

    def clear(self) -> None:
        self.rows.clear()

    def to_dict(self) -> dict:
        return {"rows": [dict(r) for r in self.rows]}

    @classmethod
    def from_dict(cls, data: dict) -> "GoodsBuffer":
        return cls(rows=[dict(r) for r in data.get("rows", [])])


@dataclass
class PageChunk:
    record_indices: list[int]
    x_offset_mm: float
    head_mode: str


def build_content(block, counts: Mapping[str, int] | None = None,
                  font_mm: float = 2.5) -> Content:
    if isinstance(block, Leaf):
        return Cell(lines=[], style=CellStyle(font_height_mm=font_mm))
    if block.arbitrary:
        n = counts.get(block.name, 1) if counts and block.name else 1
        return [build_content(block.prototype, counts, font_mm) for _ in range(n)]
    return [build_content(child, counts, font_mm) for child in block.parts]


def _header_content(block, font_mm: float) -> Content:
    if isinstance(block, Leaf):
        lines = [block.title] if block.title else []
        return Cell(lines=lines, style=CellStyle(font_height_mm=font_mm))
    if block.arbitrary:
        return [_header_content(block.prototype, font_mm)]
    return [_header_content(child, font_mm) for child in block.parts]


def check_content(block, content, where: str = "record") -> None:
    if isinstance(block, Leaf):
        if not isinstance(content, Cell):
            raise SchemaError(f"{where}: expected a cell for field {block.field_id!r}")
        return
    if not isinstance(content, list):
        raise SchemaError(f"{where}: expected part list")
    if block.arbitrary:
        if len(content) < 1:
            raise SchemaError(f"{where}: arbitrary block must keep at least one part")
        for i, part in enumerate(content):
            check_content(block.prototype, part, f"{where}[{i}]")
    else:
        if len(content) != len(block.parts):
            raise SchemaError(
                f"{where}: expected {len(block.parts)} parts, got {len(content)}"
            )
        for i, (child, part) in enumerate(zip(block.parts, content)):
            check_content(child, part, f"{where}[{i}]")


def iter_field_cells(block, content, path: tuple[int, ...] = ()
                     ) -> Iterator[tuple[str, Cell, tuple[int, ...]]]:
    if isinstance(block, Leaf):
        yield block.field_id, content, path
        return
    children = (
        [(block.prototype, part) for part in content]
        if block.arbitrary
        else list(zip(block.parts, content))
    )
    for i, (child, part) in enumerate(children):
        yield from iter_field_cells(child, part, path + (i,))


def _named_content_lists(block, content) -> dict[str, list]:
    """Content part-lists of named arbitrary blocks (top-level only)."""
    out: dict[str, list] = {}
    if isinstance(block, Leaf):
        return out
    if block.arbitrary:
        if block.name:
            out[block.name] = content
        return out
    for child, part in zip(block.parts, content):
        out.update(_named_content_lists(child, part))
    return out


class TableInstance:
    """A table document: kind + records + marks + undo journal."""

    def __init__(self, kind: TableKind, records: list[Record] | None = None,
                 journal_depth: int = 32):
        self.kind = kind
        if records is None:
            records = [DataRecord(_header_content(kind.block, kind.options.header_font_mm))]
        for i, rec in enumerate(records):
            if isinstance(rec, DataRecord):
                check_content(kind.block, rec.content, f"record {i}")
        self.records: list[Record] = records
        self.marks: set[int] = set()
        self.journal_depth = journal_depth
        self._journal: list[tuple[list[Record], set[int]]] = []

    # --- bookkeeping ---------------------------------------------------

    def _remember(self) -> None:
        self._journal.append((copy.deepcopy(self.records), set(self.marks)))
        if len(self._journal) > self.journal_depth:
            self._journal.pop(0)

    def undo(self) -> "TableInstance":
        if not self._journal:
            raise SpecForgeError("nothing to undo")
        self.records, self.marks = self._journal.pop()
        return self

    def data_indices(self) -> list[int]:
        return [
            i for i, r in enumerate(self.records)
            if i > 0 and isinstance(r, DataRecord)
        ]

    def _check_data_index(self, index: int) -> DataRecord:
        if index < 1 or index >= len(self.records):
            raise SpecForgeError(f"record index {index} out of range")
        rec = self.records[index]
        if not isinstance(rec, DataRecord):
            raise SpecForgeError(f"record {index} is a section row")
        return rec

    def structurally_equal(self, other: "TableInstance") -> bool:
        return self.records == other.records

    # --- geometry --------------------------------------------------------

    def layout(self) -> TableLayout:
        return _layout.compute_layout(self.kind, self.records)

    def cell_at(self, point: tuple[float, float]) -> tuple[int, ...]:
        return locate_cell(self.kind, self.records, point)

    def cell(self, path: tuple[int, ...]) -> Cell:
        rec = self.records[path[0]]
        if isinstance(rec, SectionRecord):
            raise SpecForgeError("section rows carry no cells")
        node: Content = rec.content
        for idx in path[1:]:
            node = node[idx]
        if not isinstance(node, Cell):
            raise SpecForgeError(f"path {path} does not address a cell")
        return node

    def set_cell_text(self, path: tuple[int, ...], text: str) -> None:
        self._remember()
        self.cell(path).set_text(text)

    # --- record construction ----------------------------------------------

    def append_record(self, fields: Mapping[str, str] | None = None) -> int:
        self._remember()
        rec = DataRecord(build_content(self.kind.block, None,
                                       self.kind.options.data_font_mm))
        if fields:
            _fill_record(self.kind, rec, fields)
        self.records.append(rec)
        return len(self.records) - 1

    def new_record_from_template(self, template_name: str) -> int:
        """Append a record whose arbitrary blocks follow a composite template."""
        counts = self.kind.templates.get(template_name)
        if counts is None:
            raise SpecForgeError(f"unknown template {template_name!r}")
        self._remember()
        rec = DataRecord(build_content(self.kind.block, counts,
                                       self.kind.options.data_font_mm))
        self.records.append(rec)
        return len(self.records) - 1

    def insert_part_at(self, point: tuple[float, float]) -> None:
        """Insert into the nearest enclosing arbitrary block at the point.

        The new part takes the pointed position.  When the pointed block is
        bound by a composite template, the whole product group is inserted
        at once across all sibling blocks of that template.
        """
        path = self.cell_at(point)
        if len(path) < 2 or path[0] == 0:
            raise SpecForgeError("no arbitrary division at this point")
        rec = self._check_data_index(path[0])

        block = self.kind.block
        content: Content = rec.content
        nearest: tuple[Split, list, int] | None = None
        for idx in path[1:]:
            if isinstance(block, Leaf):
                break
            if block.arbitrary:
                nearest = (block, content, idx)
                child_block = block.prototype
            else:
                child_block = block.parts[idx]
            content = content[idx]
            block = child_block
        if nearest is None:
            raise SpecForgeError("no arbitrary division at this point")

        arb, part_list, part_idx = nearest
        template = None
        if arb.name:
            for counts in self.kind.templates.values():
                if arb.name in counts:
                    template = counts
                    break
        self._remember()
        font = self.kind.options.data_font_mm
        if template is None:
            part_list.insert(part_idx, build_content(arb.prototype, None, font))
            return
        named = _named_content_lists(self.kind.block, rec.content)
        joint = part_idx // template[arb.name]
        for name, count in template.items():
            target = named[name]
            proto = _find_named_block(self.kind.block, name).prototype
            at = min(joint * count, len(target))
            for k in range(count):
                target.insert(at + k, build_content(proto, None, font))

    def arbitrary_part_counts(self, index: int) -> dict[str, int]:
        rec = self._check_data_index(index)
        named = _named_content_lists(self.kind.block, rec.content)
        return {name: len(parts) for name, parts in named.items()}

    # --- marks -----------------------------------------------------------

    def mark_rows(self, indices: list[int]) -> None:
        for i in indices:
            self._check_data_index(i)
        self.marks.update(indices)

    def mark_range(self, start: int, end: int) -> None:
        self.mark_rows(list(range(start, end + 1)))

    def unmark(self) -> None:
        self.marks.clear()

    def _marked(self) -> list[int]:
        if not self.marks:
            raise SpecForgeError("no rows are marked")
        return sorted(self.marks)

    # --- row operations ----------------------------------------------------

    def copy_rows(self, to_index: int) -> None:
        marked = self._marked()
        self._check_insert_index(to_index)
        self._remember()
        copies = [copy.deepcopy(self.records[i]) for i in marked]
        self.records[to_index:to_index] = copies
        self.marks = {
            i + len(copies) if i >= to_index else i for i in self.marks
        }

    def move_rows(self, to_index: int) -> None:
        marked = self._marked()
        self._check_insert_index(to_index)
        self._remember()
        moved = [self.records[i] for i in marked]
        before = sum(1 for i in marked if i < to_index)
        for i in reversed(marked):
            del self.records[i]
        at = to_index - before
        self.records[at:at] = moved
        self.marks = set(range(at, at + len(moved)))

    def delete_rows(self) -> None:
        marked = self._marked()
        self._remember()
        for i in reversed(marked):
            del self.records[i]
        self.marks.clear()

    def clear_rows(self) -> None:
        marked = self._marked()
        self._remember()
        for i in marked:
            rec = self.records[i]
            if isinstance(rec, DataRecord):
                for _, cell, _ in iter_field_cells(self.kind.block, rec.content):
                    cell.lines = []

    def _check_insert_index(self, index: int) -> None:
        if index < 1 or index > len(self.records):
            raise SpecForgeError(f"insert position {index} out of range")

    # --- goods buffer -----------------------------------------------------

    def to_buffer(self, buffer: GoodsBuffer) -> None:
        marked = self._marked()
        for i in marked:
            rec = self.records[i]
            if isinstance(rec, DataRecord):
                buffer.rows.append(self.record_fields(i))

    def from_buffer(self, buffer: GoodsBuffer) -> None:
        if not buffer.rows:
            raise SpecForgeError("goods buffer is empty")
        self._remember()
        for row in buffer.rows:
            rec = DataRecord(build_content(self.kind.block, None,
                                           self.kind.options.data_font_mm))
            _fill_record(self.kind, rec, row)
            self.records.append(rec)

    def record_fields(self, index: int) -> dict[str, str]:
        """Non-empty cell texts of one record, keyed by canonical field id."""
        rec = self._check_data_index(index)
        out: dict[str, str] = {}
        for field_id, cell, _ in iter_field_cells(self.kind.block, rec.content):
            text = cell.text()
            if not text:
                continue
            if field_id in out:
                out[field_id] += "\n" + text
            else:
                out[field_id] = text
        return out

    def apply_row_op(self, action: str, args: dict | None = None,
                     buffer: GoodsBuffer | None = None) -> None:
        """Dispatch a named row operation (the row menu surface)."""
        args = args or {}
        if action == "mark":
            self.mark_rows([int(i) for i in args["rows"]])
        elif action == "mark_range":
            self.mark_range(int(args["start"]), int(args["end"]))
        elif action == "unmark":
            self.unmark()
        elif action == "copy":
            self.copy_rows(int(args["to"]))
        elif action == "move":
            self.move_rows(int(args["to"]))
        elif action == "delete":
            self.delete_rows()
        elif action == "clear":
            self.clear_rows()
        elif action == "to_buffer":
            if buffer is None:
                raise SpecForgeError("no goods buffer supplied")
            self.to_buffer(buffer)
        elif action == "from_buffer":
            if buffer is None:
                raise SpecForgeError("no goods buffer supplied")
            self.from_buffer(buffer)
        elif action == "undo":
            self.undo()
        else:
            raise SpecForgeError(f"unknown row operation {action!r}")

    # --- sections ---------------------------------------------------------

    def add_section(self, title: str, at_record_index: int) -> None:
        """Insert a section row at a position counted over data rows."""
        n_data = len(self.records) - 1
        if at_record_index < 0 or at_record_index > n_data:
            raise SpecForgeError(f"section position {at_record_index} out of range")
        self._remember()
        at = 1 + at_record_index
        self.records.insert(at, SectionRecord(title))
        self.marks = {i + 1 if i >= at else i for i in self.marks}

    def sections(self) -> list[tuple[int, str]]:
        return [
            (i, r.title)
            for i, r in enumerate(self.records)
            if isinstance(r, SectionRecord)
        ]

    def _section_spans(self) -> list[tuple[int, int]]:
        """Half-open index ranges of consecutive data records."""
        spans: list[tuple[int, int]] = []
        start = None
        for i in range(1, len(self.records) + 1):
            is_data = i < len(self.records) and isinstance(self.records[i], DataRecord)
            if is_data and start is None:
                start = i
            elif not is_data and start is not None:
                spans.append((start, i))
                start = None
        return spans

    # --- content operations -------------------------------------------------

    def merge_identical(self, quantity_field: str) -> None:
        """Collapse runs of records equal everywhere but the quantity.

        Quantities must start with a numeric token and share the remainder
        text; the merged record carries the numeric sum.  Records whose
        quantity is non-numeric never merge.
        """
        if quantity_field not in self.kind.field_ids():
            raise SpecForgeError(f"unknown field {quantity_field!r}")
        self._remember()
        new_records: list[Record] = [self.records[0]]
        i = 1
        while i < len(self.records):
            rec = self.records[i]
            if not isinstance(rec, DataRecord):
                new_records.append(rec)
                i += 1
                continue
            qty = _quantity_of(self.kind, rec, quantity_field)
            j = i + 1
            total = qty[0] if qty else None
            while qty and j < len(self.records):
                nxt = self.records[j]
                nqty = _quantity_of(self.kind, nxt, quantity_field)
                if (
                    nqty
                    and nqty[1] == qty[1]
                    and _equal_except(self.kind, rec, nxt, quantity_field)
                ):
                    total += nqty[0]
                    j += 1
                else:
                    break
            if j > i + 1:
                merged = copy.deepcopy(rec)
                _set_quantity(self.kind, merged, quantity_field,
                              _format_decimal(total) + qty[1])
                new_records.append(merged)
            else:
                new_records.append(rec)
            i = j
        self.records = new_records
        self.marks.clear()

    def order_rows(self, key_fields: list[str]) -> None:
        """Stable per-section sort by the given field sequence."""
        known = set(self.kind.field_ids())
        for f in key_fields:
            if f not in known:
                raise SpecForgeError(f"unknown field {f!r}")
        self._remember()

        def cmp_records(a: DataRecord, b: DataRecord) -> int:
            fa = _fields_of(self.kind, a)
            fb = _fields_of(self.kind, b)
            for f in key_fields:
                c = _field_cmp(f, fa.get(f, ""), fb.get(f, ""))
                if c:
                    return c
            return 0

        from functools import cmp_to_key

        for start, end in self._section_spans():
            chunk = self.records[start:end]
            chunk.sort(key=cmp_to_key(cmp_records))
            self.records[start:end] = chunk
        self.marks.clear()

    def extract_common_names(self, name_field: str, min_group: int = 2) -> None:
        """Pull shared whole-word name prefixes into group header rows."""
        if name_field not in self.kind.field_ids():
            raise SpecForgeError(f"unknown field {name_field!r}")
        self._remember()
        out: list[Record] = list(self.records)
        for start, end in sorted(self._section_spans(), reverse=True):
            rows = out[start:end]
            rebuilt: list[Record] = []
            i = 0
            while i < len(rows):
                words_i = _fields_of(self.kind, rows[i]).get(name_field, "").split()
                lcp = list(words_i)
                j = i + 1
                while j < len(rows) and lcp:
                    words_j = _fields_of(self.kind, rows[j]).get(name_field, "").split()
                    candidate = _word_prefix(lcp, words_j)
                    if candidate:
                        lcp = candidate
                        j += 1
                    else:
                        break
                if j - i >= min_group and lcp:
                    header = DataRecord(build_content(
                        self.kind.block, None, self.kind.options.data_font_mm))
                    _fill_record(self.kind, header, {name_field: " ".join(lcp)},
                                 use_equiv=False)
                    rebuilt.append(header)
                    for rec in rows[i:j]:
                        stripped = copy.deepcopy(rec)
                        words = _fields_of(self.kind, stripped).get(name_field, "").split()
                        _set_field(self.kind, stripped, name_field,
                                   " ".join(words[len(lcp):]))
                        rebuilt.append(stripped)
                else:
                    rebuilt.extend(rows[i:j])
                i = j
            out[start:end] = rebuilt
        self.records = out
        self.marks.clear()

    # --- pagination ---------------------------------------------------------

    def paginate(self, max_height_mm: float, direction: str = "right",
                 head_mode: str = "repeat-header") -> list[PageChunk]:
        """Split data rows into column chunks of bounded height."""
        if direction not in ("left", "right"):
            raise SpecForgeError(f"unknown direction {direction!r}")
        if head_mode not in ("repeat-header", "graph-numbers", "none"):
            raise SpecForgeError(f"unknown head mode {head_mode!r}")
        lh = self.kind.options.line_height_mm
        head_h = 0.0
        if head_mode == "repeat-header":
            head_h = _record_height(self.kind, self.records[0])
            if self.kind.options.graph_number_row:
                head_h += lh
        elif head_mode == "graph-numbers":
            head_h = lh
        body = [
            (i, _record_height(self.kind, self.records[i]))
            for i in range(1, len(self.records))
        ]
        if body and max_height_mm < head_h + body[0][1]:
            raise SpecForgeError("page height too small for the header and one row")
        chunks: list[PageChunk] = []
        current: list[int] = []
        used = head_h
        for idx, h in body:
            if current and used + h > max_height_mm + 1e-9:
                chunks.append(PageChunk(current, 0.0, head_mode))
                current = []
                used = head_h
            current.append(idx)
            used += h
        if current or not chunks:
            chunks.append(PageChunk(current, 0.0, head_mode))
        width = self.kind.width()
        for n, chunk in enumerate(chunks):
            chunk.x_offset_mm = n * width if direction == "right" else -n * width
        return chunks

    # --- editable region ------------------------------------------------------

    def extract_editable_region(self, point: tuple[float, float]) -> "EditableRegion":
        """Largest flat rectangular region around the point.

        The region spans contiguous leaf columns in which every data record
        has exactly one cell, so the special (non-hierarchical) table editor
        can work on it and write it back.
        """
        path = self.cell_at(point)
        if path[0] == 0 or len(path) < 2:
            raise SpecForgeError("point is outside the data area")
        if not isinstance(self.records[path[0]], DataRecord):
            raise SpecForgeError("point is outside the data area")
        lay = self.layout()
        data_idx = self.data_indices()
        per_record: dict[int, list] = {i: [] for i in data_idx}
        for rect in lay.cells:
            if rect.path[0] in per_record and len(rect.path) > 1:
                per_record[rect.path[0]].append(rect)

        def interval(rect) -> tuple[float, float]:
            return (round(rect.x, 6), round(rect.x + rect.w, 6))

        candidates: set[tuple[float, float]] = set()
        for rects in per_record.values():
            candidates.update(interval(r) for r in rects)

        flat: list[tuple[float, float]] = []
        fields: dict[tuple[float, float], str] = {}
        for iv in sorted(candidates):
            ok = True
            for rects in per_record.values():
                touching = [
                    r for r in rects
                    if r.x < iv[1] - 1e-6 and r.x + r.w > iv[0] + 1e-6
                ]
                if len(touching) != 1 or interval(touching[0]) != iv:
                    ok = False
                    break
            if ok and per_record:
                any_rect = next(
                    r for r in per_record[data_idx[0]] if interval(r) == iv
                )
                fields[iv] = _field_of_path(self.kind.block, any_rect.path[1:])
                flat.append(iv)

        pointed_rect = next(r for r in lay.cells if r.path == path)
        pointed_iv = interval(pointed_rect)
        if pointed_iv not in flat:
            raise SpecForgeError("pointed column is not flat across records")
        run = [pointed_iv]
        pos = flat.index(pointed_iv)
        k = pos - 1
        while k >= 0 and abs(flat[k][1] - run[0][0]) < 1e-6:
            run.insert(0, flat[k])
            k -= 1
        k = pos + 1
        while k < len(flat) and abs(flat[k][0] - run[-1][1]) < 1e-6:
            run.append(flat[k])
            k += 1

        columns = [fields[iv] for iv in run]
        paths: list[list[tuple[int, ...]]] = []
        rows: list[list[str]] = []
        for i in data_idx:
            row_paths: list[tuple[int, ...]] = []
            row_texts: list[str] = []
            for iv in run:
                rect = next(r for r in per_record[i] if interval(r) == iv)
                row_paths.append(rect.path)
                row_texts.append(self.cell(rect.path).text())
            paths.append(row_paths)
            rows.append(row_texts)
        return EditableRegion(self, columns, data_idx, paths, rows)


@dataclass
class EditableRegion:
    """Flat records x columns view plus the handle to write it back."""

    table: TableInstance
    fields: list[str]
    record_indices: list[int]
    paths: list[list[tuple[int, ...]]]
    rows: list[list[str]]

    def to_grid(self) -> list[list[str]]:
        return [list(self.fields)] + [list(r) for r in self.rows]

    def write_back(self, rows: list[list[str]] | None = None) -> None:
        rows = self.rows if rows is None else rows
        if len(rows) != len(self.paths) or any(
            len(r) != len(self.fields) for r in rows
        ):
            raise SpecForgeError("grid shape does not match the extracted region")
        self.table._remember()
        for row_paths, row_texts in zip(self.paths, rows):
            for path, text in zip(row_paths, row_texts):
                self.table.cell(path).set_text(text)


# --- helpers -----------------------------------------------------------------

def _find_named_block(block, name: str) -> Split:
    if isinstance(block, Leaf):
        raise SpecForgeError(f"no arbitrary block named {name!r}")
    if isinstance(block, Split) and block.arbitrary and block.name == name:
        return block
    children = [block.prototype] if block.arbitrary else block.parts
    for child in children:
        try:
            return _find_named_block(child, name)
        except SpecForgeError:
            continue
    raise SpecForgeError(f"no arbitrary block named {name!r}")


def _field_of_path(block, part_path: tuple[int, ...]) -> str:
    for idx in part_path:
        if isinstance(block, Leaf):
            break
        block = block.prototype if block.arbitrary else block.parts[idx]
    if not isinstance(block, Leaf):
        raise SpecForgeError("path does not address a leaf")
    return block.field_id


def _fields_of(kind: TableKind, rec: DataRecord) -> dict[str, str]:
    out: dict[str, str] = {}
    for field_id, cell, _ in iter_field_cells(kind.block, rec.content):
        text = cell.text()
        if not text:
            continue
        if field_id in out:
            out[field_id] += "\n" + text
        else:
            out[field_id] = text
    return out


def _fill_record(kind: TableKind, rec: DataRecord, fields: Mapping[str, str],
                 use_equiv: bool = True) -> None:
    filled: set[str] = set()
    for field_id, cell, _ in iter_field_cells(kind.block, rec.content):
        if field_id in filled:
            continue
        value = fields.get(field_id)
        if value is None and use_equiv:
            twin = TRANSFER_EQUIV.get(field_id)
            if twin is not None:
                value = fields.get(twin)
        if value is not None:
            cell.set_text(value)
            filled.add(field_id)


def _set_field(kind: TableKind, rec: DataRecord, field_id: str, text: str) -> None:
    for fid, cell, _ in iter_field_cells(kind.block, rec.content):
        if fid == field_id:
            cell.set_text(text)
            return
    raise SpecForgeError(f"unknown field {field_id!r}")


def _record_height(kind: TableKind, rec: Record) -> float:
    lh = kind.options.line_height_mm
    if isinstance(rec, SectionRecord):
        return max(1, rec.title.count("\n") + 1) * lh
    return _layout.content_height(kind.block, rec.content, lh)


def _quantity_cells(kind: TableKind, rec: DataRecord, field_id: str) -> list[Cell]:
    return [
        cell for fid, cell, _ in iter_field_cells(kind.block, rec.content)
        if fid == field_id
    ]


def _quantity_of(kind: TableKind, rec: Record, field_id: str):
    """(value, remainder) when the record has one numeric quantity cell."""
    if not isinstance(rec, DataRecord):
        return None
    cells = _quantity_cells(kind, rec, field_id)
    if len(cells) != 1:
        return None
    m = _QTY_RE.match(cells[0].text())
    if not m:
        return None
    return Decimal(m.group(1).replace(",", ".")), m.group(2)


def _set_quantity(kind: TableKind, rec: DataRecord, field_id: str, text: str) -> None:
    cells = _quantity_cells(kind, rec, field_id)
    cells[0].set_text(text)


def _equal_except(kind: TableKind, a: Record, b: Record, skip_field: str) -> bool:
    if not (isinstance(a, DataRecord) and isinstance(b, DataRecord)):
        return False
    ca, cb = copy.deepcopy(a), copy.deepcopy(b)
    for rec in (ca, cb):
        for fid, cell, _ in iter_field_cells(kind.block, rec.content):
            if fid == skip_field:
                cell.lines = []
    return ca == cb


def _format_decimal(value: Decimal) -> str:
    s = format(value, "f")
    if "." in s:
        s = s.rstrip("0").rstrip(".")
    return s


def _word_prefix(a: list[str], b: list[str]) -> list[str]:
    out: list[str] = []
    for wa, wb in zip(a, b):
        if wa == wb:
            out.append(wa)
        else:
            break
    return out


def _field_cmp(field_id: str, a: str, b: str) -> int:
    if field_id in DESIGNATION_FIELDS:
        a, b = a.strip(), b.strip()
        if not a or not b:
            return (b == "") - (a == "")
        return collation.compare(a, b)
    fa, fb = a.casefold(), b.casefold()
    return (fa > fb) - (fa < fb)


def new_table(kind: TableKind) -> TableInstance:
    return TableInstance(kind)


# --- persistence ---------------------------------------------------------------

def _content_to_dict(node: Content) -> dict:
    if isinstance(node, Cell):
        return {
            "cell": {
                "lines": list(node.lines),
                "font_mm": node.style.font_height_mm,
                "border": node.style.border,
                "color": node.style.color,
            }
        }
    return {"parts": [_content_to_dict(p) for p in node]}


def _content_from_dict(data: dict) -> Content:
    if "cell" in data:
        c = data["cell"]
        return Cell(
            lines=list(c.get("lines", [])),
            style=CellStyle(
                font_height_mm=float(c.get("font_mm", 2.5)),
                border=c.get("border", "thin"),
                color=c.get("color", "black"),
            ),
        )
    if "parts" in data:
        return [_content_from_dict(p) for p in data["parts"]]
    raise SchemaError("record node must hold 'cell' or 'parts'")


def record_to_dict(rec: Record) -> dict:
    if isinstance(rec, SectionRecord):
        return {"type": "section", "title": rec.title}
    return {"type": "data", "content": _content_to_dict(rec.content)}


def record_from_dict(data: dict) -> Record:
    kind = data.get("type")
    if kind == "section":
        return SectionRecord(title=data.get("title", ""))
    if kind == "data":
        return DataRecord(content=_content_from_dict(data["content"]))
    raise SchemaError(f"unknown record type {kind!r}")


def instance_to_dict(table: TableInstance) -> dict:
    out = kind_to_dict(table.kind)
    out["records"] = [record_to_dict(r) for r in table.records]
    return out


def instance_from_dict(data: dict) -> TableInstance:
    kind = kind_from_dict(data)
    records = [record_from_dict(r) for r in data.get("records", [])]
    if not records:
        return TableInstance(kind)
    return TableInstance(kind, records)


def save_prototype(table: TableInstance, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(instance_to_dict(table), ensure_ascii=False, indent=2) + "\n",
        encoding="utf-8",
    )


def load_prototype(path: str | Path) -> TableInstance:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: {exc}") from exc
    if data.get("schema") != KIND_SCHEMA:
        raise SchemaError(f"{path}: expected schema {KIND_SCHEMA!r}")
    return instance_from_dict(data)

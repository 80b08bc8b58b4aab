"""Table structure: a named kind built by recursive block subdivision.

A table kind is defined in an external JSON file.  Its root block is split
step by step, vertically and horizontally, into a fixed or an arbitrary
number of parts, down to indivisible cells.  Every division carries
visibility flags for the header area and the data area, which is how one
header serves tables with and without sections.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

from ..errors import SchemaError

KIND_SCHEMA = "specforge-kind/1"

LINE_TYPES = ("main", "thin", "dashed", "none")

HORIZONTAL = "horizontal"
VERTICAL = "vertical"


@dataclass
class CellStyle:
    font_height_mm: float = 2.5
    border: str = "thin"
    color: str = "black"

    def __post_init__(self):
        if self.border not in LINE_TYPES:
            raise SchemaError(f"unknown line type {self.border!r}")


@dataclass
class Cell:
    """A table cell: text lines plus style."""

    lines: list[str] = field(default_factory=list)
    style: CellStyle = field(default_factory=CellStyle)

    def text(self) -> str:
        return "\n".join(self.lines)

    def set_text(self, text: str) -> None:
        self.lines = text.split("\n") if text else []


@dataclass
class Leaf:
    """An indivisible block bound to a canonical field id."""

    field_id: str
    width_mm: float
    title: str = ""


@dataclass
class Split:
    """A block divided into parts along one axis.

    ``parts`` set: fixed division.  ``prototype`` set: division into an
    arbitrary number of parts (vertical axis only); instances hold one or
    more parts all shaped like the prototype.
    """

    axis: str
    parts: list["Block"] | None = None
    prototype: "Block" | None = None
    in_header: bool = True
    in_data: bool = True
    name: str | None = None

    @property
    def arbitrary(self) -> bool:
        return self.prototype is not None


Block = Union[Leaf, Split]


def block_width(block: Block) -> float:
    """Derived width; raises on width mismatches between vertical parts."""
    if isinstance(block, Leaf):
        return block.width_mm
    if block.arbitrary:
        return block_width(block.prototype)
    widths = [block_width(p) for p in block.parts]
    if block.axis == HORIZONTAL:
        return sum(widths)
    first = widths[0]
    for w in widths[1:]:
        if abs(w - first) > 1e-6:
            raise SchemaError(
                f"vertical parts must share one width, got {first} and {w}"
            )
    return first


def iter_leaves(block: Block):
    if isinstance(block, Leaf):
        yield block
        return
    children = [block.prototype] if block.arbitrary else block.parts
    for child in children:
        yield from iter_leaves(child)


def _named_arbitraries(block: Block, under_arbitrary: bool = False):
    if isinstance(block, Leaf):
        return
    if block.arbitrary:
        if block.name:
            yield block, under_arbitrary
        yield from _named_arbitraries(block.prototype, True)
    else:
        for child in block.parts:
            yield from _named_arbitraries(child, under_arbitrary)


@dataclass
class KindOptions:
    category: str = "generic"
    line_height_mm: float = 8.0
    graph_number_row: bool = False
    graph_number_start: int = 1
    header_repeat: bool = True
    header_font_mm: float = 2.5
    data_font_mm: float = 2.5


@dataclass
class TableKind:
    name: str
    block: Block
    aliases: dict[str, str] = field(default_factory=dict)
    options: KindOptions = field(default_factory=KindOptions)
    # template name -> {arbitrary block name -> number of parts}
    templates: dict[str, dict[str, int]] = field(default_factory=dict)

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        _check_arbitrary_axes(self.block)
        block_width(self.block)
        seen: set[str] = set()
        for leaf in iter_leaves(self.block):
            if leaf.field_id in seen:
                raise SchemaError(f"duplicate field id {leaf.field_id!r}")
            seen.add(leaf.field_id)
        named = {blk.name: nested for blk, nested in _named_arbitraries(self.block)}
        for tpl_name, counts in self.templates.items():
            for block_name, count in counts.items():
                if block_name not in named:
                    raise SchemaError(
                        f"template {tpl_name!r} names unknown block {block_name!r}"
                    )
                if named[block_name]:
                    raise SchemaError(
                        f"template {tpl_name!r}: block {block_name!r} is nested "
                        "inside another arbitrary division"
                    )
                if count < 1:
                    raise SchemaError(f"template {tpl_name!r}: count must be >= 1")
        for field_id, title in self.aliases.items():
            if field_id not in seen:
                raise SchemaError(f"alias for unknown field {field_id!r}")

    def field_ids(self) -> list[str]:
        return [leaf.field_id for leaf in iter_leaves(self.block)]

    def title_of(self, field_id: str) -> str:
        if field_id in self.aliases:
            return self.aliases[field_id]
        for leaf in iter_leaves(self.block):
            if leaf.field_id == field_id:
                return leaf.title
        raise SchemaError(f"unknown field {field_id!r}")

    def width(self) -> float:
        return block_width(self.block)


def _check_arbitrary_axes(block: Block) -> None:
    if isinstance(block, Leaf):
        return
    if block.arbitrary:
        if block.axis != VERTICAL:
            raise SchemaError("arbitrary division is allowed on the vertical axis only")
        _check_arbitrary_axes(block.prototype)
    else:
        if not block.parts:
            raise SchemaError("fixed division must have at least one part")
        for child in block.parts:
            _check_arbitrary_axes(child)


# --- JSON form ---------------------------------------------------------------

def block_to_dict(block: Block) -> dict:
    if isinstance(block, Leaf):
        return {
            "type": "leaf",
            "field": block.field_id,
            "width": block.width_mm,
            "title": block.title,
        }
    out = {
        "type": "split",
        "axis": block.axis,
        "in_header": block.in_header,
        "in_data": block.in_data,
    }
    if block.name:
        out["name"] = block.name
    if block.arbitrary:
        out["arbitrary"] = True
        out["prototype"] = block_to_dict(block.prototype)
    else:
        out["parts"] = [block_to_dict(p) for p in block.parts]
    return out


def block_from_dict(data: dict) -> Block:
    try:
        kind = data["type"]
        if kind == "leaf":
            return Leaf(
                field_id=data["field"],
                width_mm=float(data["width"]),
                title=data.get("title", ""),
            )
        if kind == "split":
            if data.get("arbitrary"):
                return Split(
                    axis=data["axis"],
                    prototype=block_from_dict(data["prototype"]),
                    in_header=bool(data.get("in_header", True)),
                    in_data=bool(data.get("in_data", True)),
                    name=data.get("name"),
                )
            return Split(
                axis=data["axis"],
                parts=[block_from_dict(p) for p in data["parts"]],
                in_header=bool(data.get("in_header", True)),
                in_data=bool(data.get("in_data", True)),
                name=data.get("name"),
            )
    except KeyError as exc:
        raise SchemaError(f"block is missing key {exc}") from exc
    raise SchemaError(f"unknown block type {kind!r}")


def kind_to_dict(kind: TableKind) -> dict:
    return {
        "schema": KIND_SCHEMA,
        "name": kind.name,
        "aliases": dict(kind.aliases),
        "options": {
            "category": kind.options.category,
            "line_height_mm": kind.options.line_height_mm,
            "graph_number_row": kind.options.graph_number_row,
            "graph_number_start": kind.options.graph_number_start,
            "header_repeat": kind.options.header_repeat,
            "header_font_mm": kind.options.header_font_mm,
            "data_font_mm": kind.options.data_font_mm,
        },
        "templates": {k: dict(v) for k, v in kind.templates.items()},
        "block": block_to_dict(kind.block),
    }


def kind_from_dict(data: dict) -> TableKind:
    if data.get("schema") != KIND_SCHEMA:
        raise SchemaError(
            f"expected schema {KIND_SCHEMA!r}, got {data.get('schema')!r}"
        )
    opts = data.get("options", {})
    return TableKind(
        name=data.get("name", ""),
        block=block_from_dict(data["block"]),
        aliases=dict(data.get("aliases", {})),
        options=KindOptions(
            category=opts.get("category", "generic"),
            line_height_mm=float(opts.get("line_height_mm", 8.0)),
            graph_number_row=bool(opts.get("graph_number_row", False)),
            graph_number_start=int(opts.get("graph_number_start", 1)),
            header_repeat=bool(opts.get("header_repeat", True)),
            header_font_mm=float(opts.get("header_font_mm", 2.5)),
            data_font_mm=float(opts.get("data_font_mm", 2.5)),
        ),
        templates={
            k: {bk: int(bv) for bk, bv in v.items()}
            for k, v in data.get("templates", {}).items()
        },
    )


def load_table_kind(path: str | Path) -> TableKind:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: {exc}") from exc
    return kind_from_dict(data)


def save_table_kind(kind: TableKind, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(kind_to_dict(kind), ensure_ascii=False, indent=2) + "\n",
        encoding="utf-8",
    )

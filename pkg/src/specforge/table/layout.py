"""Geometry of a table instance.

There is no flat row grid: records are trees, so identifying the cell
under a point takes a recursive walk with height aggregation at every
level.  Heights aggregate as sum along the vertical axis and max along the
horizontal one; when a vertical stack comes out shorter than the record
height forced by a taller sibling, the last part absorbs the slack.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .kind import HORIZONTAL, Leaf, TableKind, block_width

_EPS = 1e-6


@dataclass(frozen=True)
class CellRect:
    """Rectangle of one leaf cell; path = (record index, part indices...)."""

    path: tuple[int, ...]
    x: float
    y: float
    w: float
    h: float


@dataclass(frozen=True)
class Segment:
    x1: float
    y1: float
    x2: float
    y2: float


@dataclass(frozen=True)
class NumberCell:
    x: float
    y: float
    w: float
    h: float
    text: str


@dataclass
class TableLayout:
    width: float
    height: float
    column_xs: list[float]
    record_tops: list[float]  # one per record, plus the total height
    cells: list[CellRect]
    boundaries: list[Segment]
    number_cells: list[NumberCell] = field(default_factory=list)
    number_strip: tuple[float, float] | None = None  # (top, height)


def leaf_spans(block, x: float = 0.0):
    """Yield (x1, x2) for every structure leaf."""
    if isinstance(block, Leaf):
        yield (x, x + block.width_mm)
        return
    if block.arbitrary:
        yield from leaf_spans(block.prototype, x)
        return
    if block.axis == HORIZONTAL:
        cursor = x
        for child in block.parts:
            yield from leaf_spans(child, cursor)
            cursor += block_width(child)
    else:
        for child in block.parts:
            yield from leaf_spans(child, x)


def column_boundaries(block) -> list[float]:
    xs: set[float] = set()
    for x1, x2 in leaf_spans(block):
        xs.add(round(x1, 6))
        xs.add(round(x2, 6))
    return sorted(xs)


def column_intervals(block) -> list[tuple[float, float]]:
    xs = column_boundaries(block)
    return list(zip(xs, xs[1:]))


def content_height(block, content, line_height: float) -> float:
    """Natural height of a block's content subtree."""
    if isinstance(block, Leaf):
        return max(1, len(content.lines)) * line_height
    if block.arbitrary:
        return sum(content_height(block.prototype, part, line_height) for part in content)
    heights = [
        content_height(child, part, line_height)
        for child, part in zip(block.parts, content)
    ]
    if block.axis == HORIZONTAL:
        return max(heights)
    return sum(heights)


def _vertical_heights(naturals: list[float], total: float) -> list[float]:
    heights = list(naturals)
    slack = total - sum(naturals)
    if heights and slack > _EPS:
        heights[-1] += slack
    return heights


def _allocate(
    block,
    content,
    x: float,
    y: float,
    w: float,
    h: float,
    path: tuple[int, ...],
    in_header: bool,
    line_height: float,
    cells: list[CellRect],
    segments: list[Segment],
) -> None:
    if isinstance(block, Leaf):
        cells.append(CellRect(path, x, y, w, h))
        return
    visible = block.in_header if in_header else block.in_data
    if block.arbitrary or block.axis != HORIZONTAL:
        children = (
            [(block.prototype, part) for part in content]
            if block.arbitrary
            else list(zip(block.parts, content))
        )
        naturals = [content_height(b, c, line_height) for b, c in children]
        heights = _vertical_heights(naturals, h)
        cy = y
        for i, ((child, part), ch) in enumerate(zip(children, heights)):
            if visible and i > 0:
                segments.append(Segment(x, cy, x + w, cy))
            _allocate(
                child, part, x, cy, w, ch, path + (i,), in_header,
                line_height, cells, segments,
            )
            cy += ch
    else:
        cursor = x
        for i, (child, part) in enumerate(zip(block.parts, content)):
            cw = block_width(child)
            if visible and i > 0:
                segments.append(Segment(cursor, y, cursor, y + h))
            _allocate(
                child, part, cursor, y, cw, h, path + (i,), in_header,
                line_height, cells, segments,
            )
            cursor += cw
    return


def _coalesce(segments: list[Segment]) -> list[Segment]:
    verticals: dict[float, list[tuple[float, float]]] = {}
    horizontals: dict[float, list[tuple[float, float]]] = {}
    for s in segments:
        if abs(s.x1 - s.x2) < _EPS:
            verticals.setdefault(round(s.x1, 6), []).append(
                (min(s.y1, s.y2), max(s.y1, s.y2))
            )
        else:
            horizontals.setdefault(round(s.y1, 6), []).append(
                (min(s.x1, s.x2), max(s.x1, s.x2))
            )
    out: list[Segment] = []
    for y in sorted(horizontals):
        for a, b in _merge_intervals(horizontals[y]):
            out.append(Segment(a, y, b, y))
    for x in sorted(verticals):
        for a, b in _merge_intervals(verticals[x]):
            out.append(Segment(x, a, x, b))
    return out


def _merge_intervals(intervals: list[tuple[float, float]]) -> list[tuple[float, float]]:
    merged: list[list[float]] = []
    for a, b in sorted(intervals):
        if merged and a <= merged[-1][1] + _EPS:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    return [(a, b) for a, b in merged]


def compute_layout(kind: TableKind, records) -> TableLayout:
    """Lay out header, optional column-number strip, and data records."""
    from .instance import SectionRecord  # local import: records live upstairs

    width = kind.width()
    lh = kind.options.line_height_mm
    cells: list[CellRect] = []
    segments: list[Segment] = []
    number_cells: list[NumberCell] = []
    number_strip = None
    tops: list[float] = []
    row_breaks: list[float] = [0.0]
    y = 0.0
    for idx, record in enumerate(records):
        tops.append(y)
        if isinstance(record, SectionRecord):
            h = max(1, record.title.count("\n") + 1) * lh
            cells.append(CellRect((idx,), 0.0, y, width, h))
        else:
            h = content_height(kind.block, record.content, lh)
            _allocate(
                kind.block, record.content, 0.0, y, width, h, (idx,),
                idx == 0, lh, cells, segments,
            )
        y += h
        row_breaks.append(y)
        if idx == 0 and kind.options.graph_number_row:
            number_strip = (y, lh)
            number = kind.options.graph_number_start
            for x1, x2 in column_intervals(kind.block):
                number_cells.append(NumberCell(x1, y, x2 - x1, lh, str(number)))
                if x1 > _EPS:
                    segments.append(Segment(x1, y, x1, y + lh))
                number += 1
            y += lh
            row_breaks.append(y)
    height = y
    tops.append(height)

    for brk in row_breaks:
        segments.append(Segment(0.0, brk, width, brk))
    segments.append(Segment(0.0, 0.0, 0.0, height))
    segments.append(Segment(width, 0.0, width, height))

    return TableLayout(
        width=width,
        height=height,
        column_xs=column_boundaries(kind.block),
        record_tops=tops,
        cells=cells,
        boundaries=_coalesce(segments),
        number_cells=number_cells,
        number_strip=number_strip,
    )


def locate_cell(kind: TableKind, records, point: tuple[float, float]) -> tuple[int, ...]:
    """Find the leaf cell containing a point by recursive descent.

    Rectangles are half-open: the right and bottom edges belong to the
    next cell.  Points outside the table, or inside the column-number
    strip, are errors.
    """
    from .instance import SectionRecord

    x, y = point
    width = kind.width()
    lh = kind.options.line_height_mm
    if not (0 <= x < width):
        raise ValueError("point outside table bounds")
    cursor = 0.0
    for idx, record in enumerate(records):
        if isinstance(record, SectionRecord):
            h = max(1, record.title.count("\n") + 1) * lh
        else:
            h = content_height(kind.block, record.content, lh)
        if y < cursor + h:
            if y < cursor:
                break
            if isinstance(record, SectionRecord):
                return (idx,)
            return (idx,) + _descend(
                kind.block, record.content, x - 0.0, y - cursor, width, h, lh
            )
        cursor += h
        if idx == 0 and kind.options.graph_number_row:
            if y < cursor + lh:
                raise ValueError("point is inside the column-number strip")
            cursor += lh
    raise ValueError("point outside table bounds")


def _descend(block, content, x, y, w, h, lh) -> tuple[int, ...]:
    if isinstance(block, Leaf):
        return ()
    if block.arbitrary or block.axis != HORIZONTAL:
        children = (
            [(block.prototype, part) for part in content]
            if block.arbitrary
            else list(zip(block.parts, content))
        )
        naturals = [content_height(b, c, lh) for b, c in children]
        heights = _vertical_heights(naturals, h)
        cy = 0.0
        for i, ((child, part), ch) in enumerate(zip(children, heights)):
            if y < cy + ch or i == len(children) - 1:
                return (i,) + _descend(child, part, x, y - cy, w, ch, lh)
            cy += ch
    else:
        cursor = 0.0
        for i, (child, part) in enumerate(zip(block.parts, content)):
            cw = block_width(child)
            if x < cursor + cw or i == len(block.parts) - 1:
                return (i,) + _descend(child, part, x - cursor, y, cw, h, lh)
            cursor += cw
    raise AssertionError("unreachable")

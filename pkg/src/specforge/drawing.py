"""Documents and their elements; regeneration of module geometry.

The parametric representation is primary: display lists are stored in
files for inspection but always recomputed on load, with a warning logged
on mismatch.  Coordinates are millimeters; element anchors are kept at
three fractional digits for a stable round-trip.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from .errors import SchemaError, SpecForgeError
from .model import (
    DisplayList,
    Element,
    ElementKind,
    LinePayload,
    LinePrimitive,
    ObjectType,
    Payload,
    PoPayload,
    PoType,
    SpecProps,
    StubPayload,
    TablePayload,
    TextPayload,
    TextPrimitive,
)
from .table.instance import instance_from_dict, instance_to_dict

log = logging.getLogger(__name__)

DOC_SCHEMA = "specforge-doc/1"
PROTO_SCHEMA = "specforge-proto/1"

# Vertical pitch between consecutive text lines, in font heights.
LINE_PITCH = 1.6


@dataclass
class Document:
    """A drawing: an ordered list of elements with unique ids."""

    elements: list[Element] = field(default_factory=list)
    id_counter: int = 1
    source_path: Path | None = None

    def add_element(self, kind: ElementKind, layer: str,
                    position: tuple[float, float], payload: Payload) -> Element:
        element = Element(self.id_counter, layer, kind, position, payload)
        self.id_counter += 1
        self.elements.append(element)
        return element

    def element(self, element_id: int) -> Element:
        for el in self.elements:
            if el.id == element_id:
                return el
        raise SpecForgeError(f"no element with id {element_id}")

    def delete_element(self, element_id: int) -> None:
        el = self.element(element_id)
        self.elements.remove(el)

    def translate_element(self, element_id: int, dx: float, dy: float) -> None:
        el = self.element(element_id)
        el.position = (round(el.position[0] + dx, 3), round(el.position[1] + dy, 3))

    def structurally_equal(self, other: "Document") -> bool:
        if len(self.elements) != len(other.elements):
            return False
        return all(
            _element_to_dict(a) == _element_to_dict(b)
            for a, b in zip(self.elements, other.elements)
        )


def regenerate(element: Element) -> DisplayList:
    """Recompute the visible geometry of a module from its parameters."""
    if not element.is_module:
        raise SpecForgeError(f"element {element.id} is not a module")
    x, y = element.position
    layer = element.layer
    prims = []
    if element.kind == ElementKind.PO_MODULE:
        p: PoPayload = element.payload
        for i, line in enumerate(p.lines):
            prims.append(TextPrimitive(
                (x, y - i * p.font_height_mm * LINE_PITCH),
                line, layer, p.font_height_mm,
            ))
    elif element.kind == ElementKind.TABLE_MODULE:
        table = element.payload.instance
        lay = table.layout()
        for seg in lay.boundaries:
            prims.append(LinePrimitive(
                (x + seg.x1, y - seg.y1), (x + seg.x2, y - seg.y2), layer, "thin",
            ))
        for rect in lay.cells:
            rec = table.records[rect.path[0]]
            if len(rect.path) == 1:  # section row
                lines = [rec.title] if rec.title else []
                font = table.kind.options.data_font_mm
            else:
                cell = table.cell(rect.path)
                lines = cell.lines
                font = cell.style.font_height_mm
            lh = table.kind.options.line_height_mm
            for k, line in enumerate(lines):
                if line:
                    prims.append(TextPrimitive(
                        (x + rect.x + 1.0, y - (rect.y + (k + 0.7) * lh)),
                        line, layer, font,
                    ))
        for ncell in lay.number_cells:
            prims.append(TextPrimitive(
                (x + ncell.x + 1.0,
                 y - (ncell.y + 0.7 * table.kind.options.line_height_mm)),
                ncell.text, layer, table.kind.options.data_font_mm,
            ))
    else:  # designation-bearing stubs
        p: StubPayload = element.payload
        for i, designation in enumerate(p.designations):
            prims.append(TextPrimitive(
                (x, y - i * 2.5 * LINE_PITCH), designation, layer, 2.5,
            ))
    return DisplayList(prims)


# --- element operations -------------------------------------------------------

class PrototypeLibrary:
    """Directory of named element prototypes, one JSON file per name."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def _path(self, name: str) -> Path:
        return self.directory / f"{name}.json"

    def store(self, doc: Document, element_id: int, name: str) -> None:
        el = doc.element(element_id)
        data = {
            "schema": PROTO_SCHEMA,
            "kind": el.kind.value,
            "layer": el.layer,
            "payload": _payload_to_dict(el),
        }
        self._path(name).write_text(
            json.dumps(data, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
        )

    def instantiate(self, doc: Document, name: str,
                    position: tuple[float, float]) -> Element:
        path = self._path(name)
        if not path.exists():
            raise SpecForgeError(f"no library prototype named {name!r}")
        data = json.loads(path.read_text(encoding="utf-8"))
        if data.get("schema") != PROTO_SCHEMA:
            raise SchemaError(f"{path}: expected schema {PROTO_SCHEMA!r}")
        kind = ElementKind(data["kind"])
        payload = _payload_from_dict(kind, data["payload"])
        return doc.add_element(kind, data.get("layer", "0"), position, payload)


def stretch_table_element(doc: Document, element_id: int, factor: float) -> None:
    """Scale a table module's column widths; other kinds do not stretch."""
    el = doc.element(element_id)
    if el.kind != ElementKind.TABLE_MODULE:
        raise SpecForgeError(f"element {element_id} cannot be stretched")
    if factor <= 0:
        raise SpecForgeError("stretch factor must be positive")
    import copy

    from .table.kind import Leaf

    table = el.payload.instance
    table.kind = copy.deepcopy(table.kind)

    def scale(block):
        if isinstance(block, Leaf):
            block.width_mm *= factor
            return
        children = [block.prototype] if block.arbitrary else block.parts
        for child in children:
            scale(child)

    scale(table.kind.block)


def element_ops(doc: Document, element_id: int | None, action: str,
                library: PrototypeLibrary | None = None, **kwargs):
    """Uniform element operation surface: delete, translate, stretch,
    library I/O."""
    if action == "delete":
        doc.delete_element(element_id)
    elif action == "translate":
        doc.translate_element(element_id, kwargs["dx"], kwargs["dy"])
    elif action == "stretch":
        stretch_table_element(doc, element_id, kwargs["factor"])
    elif action == "to_library":
        if library is None:
            raise SpecForgeError("no prototype library configured")
        library.store(doc, element_id, kwargs["name"])
    elif action == "from_library":
        if library is None:
            raise SpecForgeError("no prototype library configured")
        return library.instantiate(doc, kwargs["name"], kwargs["position"])
    else:
        raise SpecForgeError(f"unknown element operation {action!r}")
    return None


# --- persistence ----------------------------------------------------------------

def _payload_to_dict(el: Element) -> dict:
    p = el.payload
    if el.kind == ElementKind.LINE:
        return {
            "end": [p.end[0], p.end[1]],
            "line_type": p.line_type,
            "color": p.color,
        }
    if el.kind == ElementKind.TEXT:
        return {"lines": list(p.lines), "font_height_mm": p.font_height_mm}
    if el.kind == ElementKind.PO_MODULE:
        return {
            "lines": list(p.lines),
            "potype": p.potype.value,
            "objecttype": p.objecttype.value,
            "props": [row.to_dict() for row in p.props],
            "font_height_mm": p.font_height_mm,
        }
    if el.kind == ElementKind.TABLE_MODULE:
        return {"table": instance_to_dict(p.instance)}
    return {"designations": list(p.designations)}


def _payload_from_dict(kind: ElementKind, data: dict) -> Payload:
    if kind == ElementKind.LINE:
        end = data["end"]
        return LinePayload(
            end=(float(end[0]), float(end[1])),
            line_type=data.get("line_type", "main"),
            color=data.get("color", "black"),
        )
    if kind == ElementKind.TEXT:
        return TextPayload(
            lines=list(data["lines"]),
            font_height_mm=float(data.get("font_height_mm", 2.5)),
        )
    if kind == ElementKind.PO_MODULE:
        return PoPayload(
            lines=list(data["lines"]),
            potype=PoType(data["potype"]),
            objecttype=ObjectType(data.get("objecttype", "none")),
            props=[SpecProps.from_dict(row) for row in data.get("props", [])],
            font_height_mm=float(data.get("font_height_mm", 2.5)),
        )
    if kind == ElementKind.TABLE_MODULE:
        return TablePayload(instance=instance_from_dict(data["table"]))
    return StubPayload(designations=list(data["designations"]))


def _display_to_dicts(display: DisplayList) -> list[dict]:
    out = []
    for p in display.primitives:
        if isinstance(p, LinePrimitive):
            out.append({
                "t": "line", "p1": list(p.p1), "p2": list(p.p2),
                "layer": p.layer, "line_type": p.line_type, "color": p.color,
            })
        else:
            out.append({
                "t": "text", "p": list(p.position), "text": p.text,
                "layer": p.layer, "font_height_mm": p.font_height_mm,
                "color": p.color,
            })
    return out


def _element_to_dict(el: Element) -> dict:
    out = {
        "id": el.id,
        "layer": el.layer,
        "kind": el.kind.value,
        "position": [el.position[0], el.position[1]],
        "payload": _payload_to_dict(el),
    }
    if el.is_module:
        out["display"] = _display_to_dicts(regenerate(el))
    return out


def _element_from_dict(data: dict, index: int) -> Element:
    try:
        kind = ElementKind(data["kind"])
        position = (float(data["position"][0]), float(data["position"][1]))
        element = Element(
            id=int(data["id"]),
            layer=data.get("layer", "0"),
            kind=kind,
            position=position,
            payload=_payload_from_dict(kind, data.get("payload", {})),
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise SchemaError(f"element #{index}: {exc}") from exc
    if element.is_module and "display" in data:
        stored = data["display"]
        recomputed = _display_to_dicts(regenerate(element))
        if stored != recomputed:
            log.warning(
                "element %s: stored display list differs from the parameters; "
                "using the regenerated geometry", element.id,
            )
    return element


def document_to_dict(doc: Document) -> dict:
    return {
        "schema": DOC_SCHEMA,
        "elements": [_element_to_dict(el) for el in doc.elements],
    }


def document_from_dict(data: dict, source_path: Path | None = None) -> Document:
    if data.get("schema") != DOC_SCHEMA:
        raise SchemaError(
            f"expected schema {DOC_SCHEMA!r}, got {data.get('schema')!r}"
        )
    elements = [
        _element_from_dict(raw, i) for i, raw in enumerate(data.get("elements", []))
    ]
    ids = [el.id for el in elements]
    if len(ids) != len(set(ids)):
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        raise SchemaError(f"duplicate element id(s): {dupes}")
    counter = max(ids, default=0) + 1
    return Document(elements=elements, id_counter=counter, source_path=source_path)


def load_document(path: str | Path) -> Document:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise SpecForgeError(f"{path}: no such file")
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}:{exc.lineno}: {exc.msg}") from exc
    return document_from_dict(data, source_path=path)


def save_document(doc: Document, path: str | Path) -> None:
    path = Path(path)
    path.write_text(
        json.dumps(document_to_dict(doc), ensure_ascii=False, indent=2) + "\n",
        encoding="utf-8",
    )

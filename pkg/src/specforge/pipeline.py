"""Automatic filling of table documents from position designations.

Product rows are gathered from the PO modules of a drawing, routed by the
object type (well-typed products go to well tables only, everything else
to specifications and order specifications), mapped onto the kind's
columns by canonical field id, merged and ordered.
"""

from __future__ import annotations

from .drawing import Document
from .errors import SpecForgeError
from .model import (
    DuplicateScope,
    ElementKind,
    ObjectType,
    SPEC_FIELD_IDS,
    TablePayload,
)
from .rules import GeneratedFields
from .table import TableInstance, TableKind, new_table
from .table.instance import DESIGNATION_FIELDS, TRANSFER_EQUIV

SPEC_CATEGORIES = ("specification", "order_specification")


def product_rows(doc: Document, scope: DuplicateScope | None = None
                 ) -> list[tuple[ObjectType, dict[str, str]]]:
    """All product rows of the drawing's PO modules, with object types.

    A product's designation fills the marka_poz/pozicija properties when
    they are absent.  Stubs carry designations only and contribute no rows.
    """
    scope = scope or DuplicateScope()
    rows: list[tuple[ObjectType, dict[str, str]]] = []
    for el in doc.elements:
        if el.kind != ElementKind.PO_MODULE or not scope.include_po_modules:
            continue
        payload = el.payload
        designations = payload.designations()
        for i, props in enumerate(payload.props):
            row = props.to_dict()
            designation = designations[i if len(designations) > 1 else 0]
            row.setdefault("marka_poz", designation)
            row.setdefault("pozicija", designation)
            rows.append((payload.objecttype, row))
    return rows


def _routed(rows, category: str):
    if category == "well_table":
        return [r for t, r in rows if t == ObjectType.WELL]
    if category in SPEC_CATEGORIES:
        return [r for t, r in rows if t != ObjectType.WELL]
    return [r for _, r in rows]


def autofill(doc: Document, kind: TableKind,
             scope: DuplicateScope | None = None) -> TableInstance:
    """Collect, route, fill, merge and order a table from the drawing."""
    kind_fields = set(kind.field_ids())
    mappable = kind_fields & (set(SPEC_FIELD_IDS)
                              | {TRANSFER_EQUIV.get(f) for f in SPEC_FIELD_IDS})
    if not mappable:
        raise SpecForgeError(
            f"kind {kind.name!r} has no fields mappable from specifying properties"
        )
    table = new_table(kind)
    for row in _routed(product_rows(doc, scope), kind.options.category):
        table.append_record(row)
    if "kolichestvo" in kind_fields:
        table.merge_identical("kolichestvo")
    designation_field = next(
        (f for f in DESIGNATION_FIELDS if f in kind_fields), None
    )
    if designation_field is not None:
        table.order_rows([designation_field])
    table._journal.clear()
    return table


def group_specify(doc: Document, po_ids: list[int],
                  generated: list[GeneratedFields]) -> None:
    """Write generated fields onto a group of POs (a kit), one per PO."""
    if not po_ids:
        raise SpecForgeError("no PO modules selected")
    if len(po_ids) != len(generated):
        raise SpecForgeError(
            f"{len(po_ids)} PO module(s) but {len(generated)} generated row(s)"
        )
    targets = []
    for element_id in po_ids:
        el = doc.element(element_id)
        if el.kind != ElementKind.PO_MODULE:
            raise SpecForgeError(f"element {element_id} is not a PO module")
        targets.append(el)
    for el, fields in zip(targets, generated):
        edits = {
            key: value for key, value in fields.fields.items()
            if key in SPEC_FIELD_IDS
        }
        for props in el.payload.props:
            for key, value in edits.items():
                props.set_field(key, value)


def attach_table_module(doc: Document, table: TableInstance,
                        position: tuple[float, float],
                        layer: str = "tables") -> int:
    """Place a table instance into the drawing as a table module element."""
    element = doc.add_element(
        ElementKind.TABLE_MODULE, layer, position, TablePayload(instance=table)
    )
    return element.id

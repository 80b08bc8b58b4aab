"""Position designation modules and duplicate control.

A PO module ties specifying properties to arbitrary drawing fragments
without linking to them geometrically.  Duplicate control runs within a
configurable scope (PO modules, axonometric-scheme stubs, external-network
profile stubs) and across groups of document files on disk.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from . import collation
from .drawing import Document, load_document
from .errors import SpecForgeError
from .model import (
    DuplicateScope,
    Element,
    ElementKind,
    ObjectType,
    PoPayload,
    PoType,
    SpecProps,
    designations_of,
)


@dataclass(frozen=True)
class Location:
    element_id: int
    designation: str
    position: tuple[float, float]


@dataclass(frozen=True)
class DuplicateVerdict:
    candidate: str
    locations: tuple[Location, ...]

    @property
    def unique(self) -> bool:
        return not self.locations


@dataclass(frozen=True)
class DesignationEntry:
    designation: str
    element_id: int
    position: tuple[float, float]


def make_po(doc: Document, lines: list[str], potype: PoType,
            objecttype: ObjectType, props: list[SpecProps],
            position: tuple[float, float], layer: str = "0") -> Element:
    payload = PoPayload(lines=list(lines), potype=potype,
                        objecttype=objecttype, props=list(props))
    return doc.add_element(ElementKind.PO_MODULE, layer, position, payload)


def text_to_po(doc: Document, text_element_id: int, props: list[SpecProps],
               potype: PoType, objecttype: ObjectType,
               scope: DuplicateScope | None = None,
               confirm: Callable[[DuplicateVerdict], bool] | None = None) -> int:
    """Convert a plain text element into a PO module in place.

    The visible lines stay as they are; the invisible properties are
    attached.  With a scope given, duplicate control runs for every new
    designation; ``confirm`` may veto the conversion on a repeat.
    """
    el = doc.element(text_element_id)
    if el.kind != ElementKind.TEXT:
        raise SpecForgeError(f"element {text_element_id} is not a plain text")
    payload = PoPayload(
        lines=list(el.payload.lines), potype=potype, objecttype=objecttype,
        props=list(props), font_height_mm=el.payload.font_height_mm,
    )
    if scope is not None:
        for designation in payload.designations():
            verdict = check_duplicate(doc, scope, designation)
            if not verdict.unique and confirm is not None and not confirm(verdict):
                raise SpecForgeError(
                    f"designation {designation!r} repeats and was rejected"
                )
    el.kind = ElementKind.PO_MODULE
    el.payload = payload
    return el.id


def edit_props_bulk(doc: Document, po_ids: list[int],
                    edits: dict[str, str]) -> None:
    """Overwrite the given fields on every product row of every listed PO."""
    targets: list[Element] = []
    for element_id in po_ids:
        el = doc.element(element_id)
        if el.kind != ElementKind.PO_MODULE:
            raise SpecForgeError(f"element {element_id} is not a PO module")
        targets.append(el)
    for el in targets:
        for row in el.payload.props:
            for field_id, value in edits.items():
                row.set_field(field_id, value)


def list_designations(doc: Document) -> list[DesignationEntry]:
    """All designations in the document, in collation order."""
    entries = [
        DesignationEntry(designation, el.id, el.position)
        for el in doc.elements
        for designation in designations_of(el)
    ]
    return sorted(entries, key=lambda e: collation.sort_key(e.designation))


def check_duplicate(doc: Document, scope: DuplicateScope,
                    candidate: str) -> DuplicateVerdict:
    """Exact-match duplicate check (surrounding whitespace ignored)."""
    needle = candidate.strip()
    locations = [
        Location(el.id, designation, el.position)
        for el in doc.elements
        if scope.admits(el.kind)
        for designation in designations_of(el)
        if designation.strip() == needle
    ]
    return DuplicateVerdict(candidate=needle, locations=tuple(locations))


@dataclass(frozen=True)
class FileLocation:
    file: str
    element_id: int


def check_duplicates_files(paths: list[str | Path],
                           scope: DuplicateScope) -> dict[str, list[FileLocation]]:
    """Designations occurring twice or more across a group of files."""
    occurrences: dict[str, list[FileLocation]] = {}
    for path in paths:
        try:
            doc = load_document(path)
        except SpecForgeError as exc:
            raise SpecForgeError(f"cannot load {path}: {exc}") from exc
        for el in doc.elements:
            if not scope.admits(el.kind):
                continue
            for designation in designations_of(el):
                occurrences.setdefault(designation.strip(), []).append(
                    FileLocation(str(path), el.id)
                )
    report = {
        designation: locs
        for designation, locs in occurrences.items()
        if len(locs) >= 2
    }
    return dict(
        sorted(report.items(), key=lambda kv: collation.sort_key(kv[0]))
    )


def duplicates_report_text(report: dict[str, list[FileLocation]]) -> str:
    lines = [
        f"{designation}\t{loc.file}\t{loc.element_id}"
        for designation, locs in report.items()
        for loc in locs
    ]
    return "\n".join(lines)


def duplicates_report_json(report: dict[str, list[FileLocation]]) -> str:
    data = [
        {
            "designation": designation,
            "locations": [
                {"file": loc.file, "element_id": loc.element_id} for loc in locs
            ],
        }
        for designation, locs in report.items()
    ]
    return json.dumps(data, ensure_ascii=False, indent=2)

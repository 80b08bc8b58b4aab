"""HTTP facade over catalogs, selection sessions, documents and tables.

JSON over HTTP, UTF-8.  One writer per document: operations on a document
are serialized behind a per-document lock.  Sessions expire after an idle
timeout and answer ids are opaque (sequential ids are available for
transcript recording and tests).
"""

from __future__ import annotations

import secrets
import threading
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

from fastapi import Body, FastAPI, HTTPException
from fastapi.responses import JSONResponse

from . import assets, collation
from .catalog import (
    DirectMenu,
    FilterCriteria,
    catalog_stats,
    filter_tables,
    load_catalog_set,
    query_rows,
)
from .drawing import Document, document_from_dict, document_to_dict, save_document
from .errors import SessionError, SpecForgeError
from .model import DuplicateScope, ElementKind, designations_of
from .po import check_duplicate
from .rules import MenuPrompt, start_session
from .table import GoodsBuffer


@dataclass
class _SessionSlot:
    session: Any
    deadline: float


@dataclass
class _State:
    catalog: Any
    idle_timeout: float
    deterministic_ids: bool
    documents: dict[str, Document] = field(default_factory=dict)
    locks: dict[str, threading.Lock] = field(default_factory=dict)
    sessions: dict[str, _SessionSlot] = field(default_factory=dict)
    buffer: GoodsBuffer = field(default_factory=GoodsBuffer)
    counters: dict[str, int] = field(default_factory=dict)

    def new_id(self, prefix: str) -> str:
        if self.deterministic_ids:
            self.counters[prefix] = self.counters.get(prefix, 0) + 1
            return f"{prefix}-{self.counters[prefix]}"
        return f"{prefix}-{secrets.token_urlsafe(12)}"


def _scope_from_params(po: bool, axono: bool, vk: bool) -> DuplicateScope:
    return DuplicateScope(
        include_po_modules=po,
        include_axono_modules=axono,
        include_vk_profile_modules=vk,
    )


def _prompt_dict(prompt) -> dict | None:
    if prompt is None:
        return None
    if isinstance(prompt, MenuPrompt):
        return {"type": "menu", "text": prompt.text, "options": list(prompt.options)}
    return {"type": "input", "kind": prompt.kind, "text": prompt.text}


def _session_view(session_id: str, session) -> dict:
    return {
        "id": session_id,
        "status": "done" if session.done else "awaiting_answer",
        "prompt": _prompt_dict(session.next_prompt()),
        "answers": list(session.answers),
    }


def _cell_json(cell) -> Any:
    if isinstance(cell, DirectMenu):
        return {"variants": list(cell.variants)}
    return cell


def create_app(catalog_dir: str | Path | None = None,
               idle_timeout: float = 3600.0,
               deterministic_ids: bool = False) -> FastAPI:
    catalog = load_catalog_set(catalog_dir or assets.SAMPLE_CATALOG_DIR)
    state = _State(
        catalog=catalog,
        idle_timeout=idle_timeout,
        deterministic_ids=deterministic_ids,
    )
    app = FastAPI(title="specforge", version="0.1.0")
    app.state.engine = state

    @app.exception_handler(SpecForgeError)
    def _domain_error(request, exc: SpecForgeError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    def get_document(doc_id: str) -> Document:
        doc = state.documents.get(doc_id)
        if doc is None:
            raise HTTPException(404, f"no document {doc_id!r}")
        return doc

    def doc_lock(doc_id: str) -> threading.Lock:
        return state.locks.setdefault(doc_id, threading.Lock())

    def get_session(session_id: str):
        slot = state.sessions.get(session_id)
        if slot is None:
            raise HTTPException(404, f"no session {session_id!r}")
        now = time.monotonic()
        if now > slot.deadline:
            del state.sessions[session_id]
            raise HTTPException(410, f"session {session_id!r} expired")
        slot.deadline = now + state.idle_timeout
        return slot.session

    def get_table(doc: Document, element_id: int):
        try:
            el = doc.element(element_id)
        except SpecForgeError:
            raise HTTPException(404, f"no element {element_id}")
        if el.kind != ElementKind.TABLE_MODULE:
            raise HTTPException(404, f"element {element_id} is not a table module")
        return el.payload.instance

    # --- catalogs -------------------------------------------------------

    @app.get("/catalogs")
    def catalogs(object_type: str | None = None, group: str | None = None,
                 kip_flag: str | None = None, kip_letter: str | None = None,
                 interval: str | None = None):
        intervals = {}
        if interval:
            key, _, value = interval.partition(":")
            if not value:
                raise HTTPException(400, "interval must be KEY:VALUE")
            intervals[key] = float(value)
        entries = filter_tables(state.catalog, FilterCriteria(
            object_type=object_type, group_keyword=group,
            kip_flag=kip_flag, kip_letter=kip_letter, intervals=intervals,
        ))
        return {
            "catalogs": [
                {
                    "table": e.table,
                    "structure": e.structure,
                    "title": e.title,
                    "source": e.source,
                    "rows": len(state.catalog.tables[e.table].rows),
                }
                for e in entries
            ]
        }

    @app.get("/catalogs/stats")
    def stats():
        return {p: asdict(s) for p, s in catalog_stats(state.catalog).items()}

    @app.get("/catalogs/{table_name}/rows")
    def rows(table_name: str, equals: str | None = None,
             contains: str | None = None, range_: str | None = None):
        table = state.catalog.tables.get(table_name)
        if table is None:
            raise HTTPException(404, f"no table {table_name!r}")
        predicates: dict[str, dict] = {}
        if equals:
            col, _, value = equals.partition(":")
            predicates.setdefault(col, {})["equals"] = value
        if contains:
            col, _, value = contains.partition(":")
            predicates.setdefault(col, {})["contains"] = value
        if range_:
            col, _, span = range_.partition(":")
            lo, _, hi = span.partition(":")
            spec = predicates.setdefault(col, {})
            if lo:
                spec["min"] = float(lo)
            if hi:
                spec["max"] = float(hi)
        matched = query_rows(table, predicates)
        return {
            "columns": table.columns,
            "rows": [
                {"index": i, "cells": {c: _cell_json(v) for c, v in values.items()}}
                for i, values in matched
            ],
        }

    # --- sessions ----------------------------------------------------------

    @app.post("/sessions")
    def create_session(body: dict = Body(...)):
        try:
            session = start_session(
                state.catalog, body.get("table", ""), int(body.get("row", -1))
            )
        except SessionError as exc:
            raise HTTPException(400, str(exc))
        session_id = state.new_id("s")
        state.sessions[session_id] = _SessionSlot(
            session=session, deadline=time.monotonic() + state.idle_timeout
        )
        return _session_view(session_id, session)

    @app.get("/sessions/{session_id}/prompt")
    def session_prompt(session_id: str):
        return _session_view(session_id, get_session(session_id))

    @app.post("/sessions/{session_id}/answer")
    def session_answer(session_id: str, body: dict = Body(...)):
        session = get_session(session_id)
        if session.done:
            raise HTTPException(409, "session is already done")
        try:
            session.answer(body.get("value"))
        except SessionError as exc:
            raise HTTPException(400, str(exc))
        return _session_view(session_id, session)

    @app.post("/sessions/{session_id}/finish")
    def session_finish(session_id: str):
        session = get_session(session_id)
        if not session.done:
            raise HTTPException(409, "session still awaits answers")
        fields = session.finish()
        return {"fields": fields.fields, "numeric": fields.numeric}

    # --- documents -----------------------------------------------------------

    @app.post("/documents")
    def create_document(body: dict | None = Body(None)):
        if body:
            doc = document_from_dict(body)
        else:
            doc = Document()
        doc_id = state.new_id("doc")
        state.documents[doc_id] = doc
        return {"id": doc_id}

    @app.get("/documents")
    def list_documents():
        return {"documents": sorted(state.documents)}

    @app.get("/documents/{doc_id}")
    def read_document(doc_id: str):
        return document_to_dict(get_document(doc_id))

    @app.delete("/documents/{doc_id}")
    def delete_document(doc_id: str):
        get_document(doc_id)
        del state.documents[doc_id]
        state.locks.pop(doc_id, None)
        return {"ok": True}

    @app.post("/documents/{doc_id}/save")
    def save_document_endpoint(doc_id: str, body: dict = Body(...)):
        doc = get_document(doc_id)
        path = body.get("path")
        if not path:
            raise HTTPException(400, "body must carry a path")
        with doc_lock(doc_id):
            save_document(doc, path)
        return {"ok": True, "path": path}

    @app.post("/documents/{doc_id}/elements")
    def add_element(doc_id: str, body: dict = Body(...)):
        from .drawing import _payload_from_dict  # same serialization as files

        doc = get_document(doc_id)
        with doc_lock(doc_id):
            kind = ElementKind(body["kind"])
            el = doc.add_element(
                kind,
                body.get("layer", "0"),
                tuple(body.get("position", (0.0, 0.0))),
                _payload_from_dict(kind, body.get("payload", {})),
            )
        return {"id": el.id}

    @app.get("/documents/{a}/diff/{b}")
    def diff_documents(a: str, b: str):
        return {"equal": get_document(a).structurally_equal(get_document(b))}

    # --- table operations -------------------------------------------------------

    @app.get("/documents/{doc_id}/tables/{element_id}")
    def table_view(doc_id: str, element_id: int):
        table = get_table(get_document(doc_id), element_id)
        records = []
        for i, rec in enumerate(table.records):
            if hasattr(rec, "title"):
                records.append({"index": i, "section": rec.title})
            else:
                fields = table.record_fields(i) if i else {
                    f: table.kind.title_of(f) for f in table.kind.field_ids()
                }
                records.append({"index": i, "fields": fields})
        return {
            "kind": table.kind.name,
            "field_ids": table.kind.field_ids(),
            "records": records,
            "marks": sorted(table.marks),
        }

    @app.get("/documents/{doc_id}/tables/{element_id}/layout")
    def table_layout(doc_id: str, element_id: int):
        lay = get_table(get_document(doc_id), element_id).layout()
        return {
            "width": lay.width,
            "height": lay.height,
            "column_xs": lay.column_xs,
            "record_tops": lay.record_tops,
            "cells": [
                {"path": list(c.path), "x": c.x, "y": c.y, "w": c.w, "h": c.h}
                for c in lay.cells
            ],
            "boundaries": [[s.x1, s.y1, s.x2, s.y2] for s in lay.boundaries],
        }

    @app.post("/documents/{doc_id}/tables/{element_id}/ops")
    def table_op(doc_id: str, element_id: int, body: dict = Body(...)):
        doc = get_document(doc_id)
        table = get_table(doc, element_id)
        action = body.get("action", "")
        args = body.get("args", {})
        extra: dict[str, Any] = {}
        with doc_lock(doc_id):
            try:
                if action == "insert_part_at":
                    table.insert_part_at(tuple(args["point"]))
                elif action == "new_record_from_template":
                    extra["record"] = table.new_record_from_template(args["template"])
                elif action == "append_record":
                    extra["record"] = table.append_record(args.get("fields"))
                elif action == "set_cell":
                    table.set_cell_text(tuple(args["path"]), args.get("text", ""))
                elif action == "add_section":
                    table.add_section(args.get("title", ""), int(args["at"]))
                elif action == "order":
                    table.order_rows(list(args["fields"]))
                elif action == "merge":
                    table.merge_identical(args["field"])
                elif action == "extract_common_names":
                    table.extract_common_names(
                        args["field"], int(args.get("min_group", 2))
                    )
                elif action == "paginate":
                    chunks = table.paginate(
                        float(args["max_height_mm"]),
                        args.get("direction", "right"),
                        args.get("head_mode", "repeat-header"),
                    )
                    extra["chunks"] = [
                        {"records": c.record_indices, "x_offset_mm": c.x_offset_mm,
                         "head_mode": c.head_mode}
                        for c in chunks
                    ]
                else:
                    table.apply_row_op(action, args, state.buffer)
            except KeyError as exc:
                raise HTTPException(400, f"missing argument {exc}")
        return {"ok": True, "marks": sorted(table.marks), **extra}

    # --- designation services ------------------------------------------------------

    @app.get("/documents/{doc_id}/duplicates")
    def document_duplicates(doc_id: str, po: bool = True, axono: bool = True,
                            vk: bool = True):
        doc = get_document(doc_id)
        scope = _scope_from_params(po, axono, vk)
        seen: dict[str, int] = {}
        for el in doc.elements:
            if scope.admits(el.kind):
                for d in designations_of(el):
                    seen[d.strip()] = seen.get(d.strip(), 0) + 1
        out = []
        for designation in sorted(
            (d for d, n in seen.items() if n >= 2), key=collation.sort_key
        ):
            verdict = check_duplicate(doc, scope, designation)
            out.append({
                "designation": designation,
                "locations": [
                    {"element_id": loc.element_id,
                     "position": list(loc.position)}
                    for loc in verdict.locations
                ],
            })
        return {"duplicates": out}

    @app.get("/documents/{doc_id}/po-structures")
    def document_structures(doc_id: str):
        doc = get_document(doc_id)
        designations = [
            d for el in doc.elements for d in designations_of(el)
        ]
        return {
            "frequencies": collation.structure_frequencies(designations),
            "hints": [asdict(h) for h in collation.anomaly_hints(designations)],
        }

    return app

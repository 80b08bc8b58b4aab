"""Record API transcripts for the frontend contract tests.

Each scenario runs against a fresh app with deterministic ids and captures
request/response pairs exactly as the web client is expected to issue them.
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi.testclient import TestClient

from specforge.drawing import Document, document_to_dict
from specforge.model import ObjectType, PoType, SpecProps
from specforge.pipeline import attach_table_module, autofill
from specforge.po import make_po
from specforge.service import create_app
from specforge.assets import shipped_kind

OUT_DIR = Path(__file__).parent.parent / "frontend" / "tests" / "fixtures"


def sample_doc_body() -> dict:
    doc = Document()
    make_po(doc, ["K1"], PoType.ONE_PRODUCT, ObjectType.NONE,
            [SpecProps(naimenovanie="Компрессор", kolichestvo="2")], (0, 0))
    make_po(doc, ["K1"], PoType.ONE_PRODUCT, ObjectType.NONE,
            [SpecProps(naimenovanie="Компрессор", kolichestvo="1")], (5, 5))
    table = autofill(doc, shipped_kind("specification"))
    attach_table_module(doc, table, (100.0, 0.0))
    return document_to_dict(doc)


class Recorder:
    def __init__(self):
        self.client = TestClient(create_app(deterministic_ids=True))
        self.entries: list[dict] = []

    def call(self, method: str, path: str, body=None):
        response = self.client.request(method, path, json=body)
        self.entries.append({
            "request": {"method": method, "path": path, "body": body},
            "response": {"status": response.status_code, "body": response.json()},
        })
        return response.json()

    def save(self, name: str):
        out = OUT_DIR / name
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(
            json.dumps({"entries": self.entries}, ensure_ascii=False, indent=2) + "\n",
            encoding="utf-8",
        )
        print(f"wrote {out} ({len(self.entries)} entries)")


def record_catalog():
    r = Recorder()
    r.call("GET", "/catalogs")
    r.call("GET", "/catalogs?object_type=pipe")
    r.call("GET", "/catalogs?kip_letter=P")
    r.call("GET", "/catalogs/kip_manometers/rows")
    r.call("GET", "/catalogs/mt_pipe_steel/rows?range_=X_1:40:60")
    r.save("transcript_catalog.json")


def record_wizard():
    r = Recorder()
    r.call("POST", "/sessions", {"table": "kip_manometers", "row": 0})
    r.call("POST", "/sessions/s-1/answer", {"value": 0})
    r.call("POST", "/sessions/s-1/answer", {"value": 1})
    r.call("POST", "/sessions/s-1/answer", {"value": "405"})
    r.call("POST", "/sessions/s-1/finish")
    r.save("transcript_wizard.json")


def record_editor():
    r = Recorder()
    body = sample_doc_body()
    r.call("POST", "/documents", body)
    r.call("POST", "/documents", body)
    r.call("GET", "/documents/doc-1/tables/3")
    r.call("POST", "/documents/doc-1/tables/3/ops",
           {"action": "mark", "args": {"rows": [1]}})
    r.call("POST", "/documents/doc-1/tables/3/ops", {"action": "delete"})
    r.call("GET", "/documents/doc-1/diff/doc-2")
    r.call("POST", "/documents/doc-1/tables/3/ops", {"action": "undo"})
    r.call("GET", "/documents/doc-1/diff/doc-2")
    r.call("GET", "/documents/doc-1/tables/3")
    r.save("transcript_editor.json")


def record_inspector():
    r = Recorder()
    r.call("POST", "/documents", sample_doc_body())
    r.call("GET", "/documents/doc-1/duplicates")
    r.call("GET", "/documents/doc-1/po-structures")
    r.save("transcript_inspector.json")


if __name__ == "__main__":
    record_catalog()
    record_wizard()
    record_editor()
    record_inspector()

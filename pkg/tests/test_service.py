import time

import pytest
from fastapi.testclient import TestClient

from specforge.drawing import Document, document_to_dict
from specforge.model import ObjectType, PoType, SpecProps
from specforge.pipeline import attach_table_module, autofill
from specforge.po import make_po
from specforge.service import create_app
from specforge.assets import shipped_kind


@pytest.fixture()
def client():
    app = create_app(deterministic_ids=True)
    with TestClient(app) as c:
        yield c


def sample_doc_body():
    doc = Document()
    make_po(doc, ["K1"], PoType.ONE_PRODUCT, ObjectType.NONE,
            [SpecProps(naimenovanie="Компрессор", kolichestvo="2")], (0, 0))
    make_po(doc, ["K1"], PoType.ONE_PRODUCT, ObjectType.NONE,
            [SpecProps(naimenovanie="Компрессор", kolichestvo="1")], (5, 5))
    table = autofill(doc, shipped_kind("specification"))
    attach_table_module(doc, table, (100.0, 0.0))
    return document_to_dict(doc)


# --- catalogs -----------------------------------------------------------

def test_list_catalogs(client):
    data = client.get("/catalogs").json()
    assert len(data["catalogs"]) == 6


def test_filter_catalogs(client):
    data = client.get("/catalogs", params={"object_type": "pipe"}).json()
    assert [c["table"] for c in data["catalogs"]] == ["mt_pipe_steel"]


def test_catalog_rows_with_direct_menu(client):
    data = client.get("/catalogs/kip_manometers/rows").json()
    assert data["rows"][0]["cells"]["X_3"] == {
        "variants": ["радиальный", "осевой"]
    }


def test_catalog_rows_filtered(client):
    data = client.get(
        "/catalogs/mt_pipe_steel/rows", params={"range_": "X_1:40:60"}
    ).json()
    assert [r["cells"]["MARKA"] for r in data["rows"]] == ["40", "50"]


def test_unknown_catalog_404(client):
    assert client.get("/catalogs/nope/rows").status_code == 404


# --- sessions -------------------------------------------------------------

def test_session_no_prompts_immediately_done(client):
    data = client.post(
        "/sessions", json={"table": "mt_valve_small", "row": 2}
    ).json()
    assert data["status"] == "done"
    assert data["prompt"] is None
    fields = client.post(f"/sessions/{data['id']}/finish").json()
    assert fields["fields"]["naimenovanie"] == "Вентиль 15кч18п9 Ду50"


def test_session_direct_menu_flow(client):
    created = client.post(
        "/sessions", json={"table": "kip_manometers", "row": 0}
    ).json()
    assert created["status"] == "awaiting_answer"
    assert created["prompt"]["type"] == "menu"
    assert len(created["prompt"]["options"]) == 5
    session_id = created["id"]
    step = client.post(f"/sessions/{session_id}/answer", json={"value": 0}).json()
    assert step["prompt"]["options"] == ["радиальный", "осевой"]
    step = client.post(f"/sessions/{session_id}/answer", json={"value": 1}).json()
    assert step["prompt"]["type"] == "input"
    step = client.post(
        f"/sessions/{session_id}/answer", json={"value": "405"}
    ).json()
    assert step["status"] == "done"
    fields = client.post(f"/sessions/{session_id}/finish").json()
    assert fields["fields"]["kod_oborud"] == "405"


def test_answer_done_session_409(client):
    data = client.post(
        "/sessions", json={"table": "mt_valve_small", "row": 0}
    ).json()
    r = client.post(f"/sessions/{data['id']}/answer", json={"value": 0})
    assert r.status_code == 409


def test_finish_unfinished_409(client):
    data = client.post(
        "/sessions", json={"table": "kip_manometers", "row": 0}
    ).json()
    assert client.post(f"/sessions/{data['id']}/finish").status_code == 409


def test_invalid_answer_400(client):
    data = client.post(
        "/sessions", json={"table": "kip_manometers", "row": 0}
    ).json()
    r = client.post(f"/sessions/{data['id']}/answer", json={"value": 99})
    assert r.status_code == 400


def test_unknown_session_404(client):
    assert client.get("/sessions/zzz/prompt").status_code == 404


def test_expired_session_410():
    app = create_app(deterministic_ids=True, idle_timeout=0.01)
    with TestClient(app) as client:
        data = client.post(
            "/sessions", json={"table": "kip_manometers", "row": 0}
        ).json()
        time.sleep(0.05)
        assert client.get(f"/sessions/{data['id']}/prompt").status_code == 410


# --- documents -------------------------------------------------------------

def test_document_crud(client):
    created = client.post("/documents", json=sample_doc_body()).json()
    doc_id = created["id"]
    listing = client.get("/documents").json()
    assert doc_id in listing["documents"]
    body = client.get(f"/documents/{doc_id}").json()
    assert body["schema"] == "specforge-doc/1"
    assert client.delete(f"/documents/{doc_id}").json() == {"ok": True}
    assert client.get(f"/documents/{doc_id}").status_code == 404


def test_document_save_reflects_ops(client, tmp_path):
    doc_id = client.post("/documents", json=sample_doc_body()).json()["id"]
    table_el = 3
    client.post(
        f"/documents/{doc_id}/tables/{table_el}/ops",
        json={"action": "append_record",
              "args": {"fields": {"naimenovanie": "Новая"}}},
    )
    path = tmp_path / "saved.json"
    client.post(f"/documents/{doc_id}/save", json={"path": str(path)})
    from specforge.drawing import load_document
    saved = load_document(path)
    table = saved.element(table_el).payload.instance
    names = [table.record_fields(i).get("naimenovanie")
             for i in table.data_indices()]
    assert "Новая" in names


def test_ops_delete_undo_roundtrip(client):
    body = sample_doc_body()
    a = client.post("/documents", json=body).json()["id"]
    b = client.post("/documents", json=body).json()["id"]
    table_el = 3
    client.post(
        f"/documents/{a}/tables/{table_el}/ops",
        json={"action": "mark", "args": {"rows": [1]}},
    )
    client.post(
        f"/documents/{a}/tables/{table_el}/ops", json={"action": "delete"}
    )
    assert not client.get(f"/documents/{a}/diff/{b}").json()["equal"]
    client.post(
        f"/documents/{a}/tables/{table_el}/ops", json={"action": "undo"}
    )
    assert client.get(f"/documents/{a}/diff/{b}").json()["equal"]


def test_table_view_and_layout(client):
    doc_id = client.post("/documents", json=sample_doc_body()).json()["id"]
    view = client.get(f"/documents/{doc_id}/tables/3").json()
    assert view["kind"] == "specification"
    assert view["records"][0]["fields"]["naimenovanie"] == "Наименование"
    layout = client.get(f"/documents/{doc_id}/tables/3/layout").json()
    assert layout["width"] == 185.0
    assert layout["cells"]


def test_ops_on_non_table_404(client):
    doc_id = client.post("/documents", json=sample_doc_body()).json()["id"]
    r = client.post(
        f"/documents/{doc_id}/tables/1/ops", json={"action": "delete"}
    )
    assert r.status_code == 404


def test_bad_op_400(client):
    doc_id = client.post("/documents", json=sample_doc_body()).json()["id"]
    r = client.post(
        f"/documents/{doc_id}/tables/3/ops", json={"action": "explode"}
    )
    assert r.status_code == 400


# --- designation endpoints ----------------------------------------------------

def test_duplicates_endpoint(client):
    doc_id = client.post("/documents", json=sample_doc_body()).json()["id"]
    data = client.get(f"/documents/{doc_id}/duplicates").json()
    assert [d["designation"] for d in data["duplicates"]] == ["K1"]
    assert len(data["duplicates"][0]["locations"]) == 2


def test_duplicates_all_false_scope_empty(client):
    doc_id = client.post("/documents", json=sample_doc_body()).json()["id"]
    data = client.get(
        f"/documents/{doc_id}/duplicates",
        params={"po": "false", "axono": "false", "vk": "false"},
    ).json()
    assert data["duplicates"] == []


def test_po_structures_endpoint(client):
    doc_id = client.post("/documents", json=sample_doc_body()).json()["id"]
    data = client.get(f"/documents/{doc_id}/po-structures").json()
    assert data["frequencies"] == {"LN": 2}
    assert data["hints"] == []


# --- determinism -----------------------------------------------------------------

def test_identical_request_sequences_identical_bodies():
    def transcript():
        app = create_app(deterministic_ids=True)
        out = []
        with TestClient(app) as client:
            out.append(client.get("/catalogs").json())
            out.append(client.post(
                "/sessions", json={"table": "kip_manometers", "row": 0}
            ).json())
            out.append(client.post(
                "/sessions/s-1/answer", json={"value": 0}
            ).json())
            out.append(client.post("/documents", json=sample_doc_body()).json())
            out.append(client.get("/documents/doc-1").json())
            out.append(client.get("/documents/doc-1/po-structures").json())
        return out

    assert transcript() == transcript()


def test_openapi_shipped(client):
    spec = client.get("/openapi.json").json()
    assert "/sessions" in spec["paths"]
    assert "/documents/{doc_id}/tables/{element_id}/ops" in spec["paths"]

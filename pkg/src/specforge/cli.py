"""Command-line surface: catalogs, designations, tables, autofill, sessions.

Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict
from pathlib import Path

from . import assets, collation, po
from .catalog import FilterCriteria, catalog_stats, filter_tables, load_catalog_set
from .drawing import load_document
from .errors import SpecForgeError
from .model import DuplicateScope
from .pipeline import autofill
from .rules import run_script
from .table import GoodsBuffer, load_prototype, load_table_kind, new_table, save_prototype

ENV_CATALOG_DIR = "SPECFORGE_CATALOG_DIR"


def _catalog_dir(value: str | None) -> Path:
    if value:
        return Path(value)
    env = os.environ.get(ENV_CATALOG_DIR)
    if env:
        return Path(env)
    return assets.SAMPLE_CATALOG_DIR


def _emit_json(data) -> None:
    print(json.dumps(data, ensure_ascii=False, sort_keys=True, indent=2))


def _parse_scope(spec: str | None) -> DuplicateScope:
    if spec is None:
        return DuplicateScope()
    parts = {p.strip() for p in spec.split(",") if p.strip()}
    unknown = parts - {"po", "axono", "vk"}
    if unknown:
        raise SpecForgeError(f"unknown scope part(s): {sorted(unknown)}")
    return DuplicateScope(
        include_po_modules="po" in parts,
        include_axono_modules="axono" in parts,
        include_vk_profile_modules="vk" in parts,
    )


def _read_designations(path: str) -> list[str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise SpecForgeError(f"{path}: no such file")
    return [line for line in text.splitlines() if line.strip()]


# --- subcommand handlers -----------------------------------------------------

def _cmd_catalog(args) -> int:
    directory = _catalog_dir(args.catalog)
    catalog = load_catalog_set(directory)
    if args.catalog_cmd == "validate":
        if args.format == "json":
            _emit_json({"ok": True, "tables": sorted(catalog.tables)})
        else:
            print(f"OK: {len(catalog.tables)} tables, "
                  f"{len(catalog.meta)} structures, {len(catalog.menus)} menus")
    elif args.catalog_cmd == "stats":
        stats = {p: asdict(s) for p, s in catalog_stats(catalog).items()}
        if args.format == "json":
            _emit_json(stats)
        else:
            for profile, row in stats.items():
                print(f"[{profile}] tables={row['table_count']} "
                      f"names={row['property_names']} "
                      f"mm={row['properties_in_mm']} "
                      f"unnamed={row['properties_unnamed']} "
                      f"rows={row['rows_total']}/{row['rows_min']}"
                      f"/{row['rows_max']}")
    else:  # filter
        intervals = {}
        for chunk in args.interval or []:
            key, _, value = chunk.partition("=")
            if not value:
                raise SpecForgeError(f"interval must be KEY=VALUE, got {chunk!r}")
            intervals[key] = float(value)
        criteria = FilterCriteria(
            object_type=args.object_type,
            group_keyword=args.group,
            kip_flag=args.kip_flag,
            kip_letter=args.kip_letter,
            intervals=intervals,
        )
        entries = filter_tables(catalog, criteria)
        if args.format == "json":
            _emit_json({"tables": [e.table for e in entries]})
        else:
            for e in entries:
                print(f"{e.table}\t{e.title}")
    return 0


def _cmd_po(args) -> int:
    if args.po_cmd == "dedupe":
        scope = _parse_scope(args.scope)
        report = po.check_duplicates_files(args.files, scope)
        if args.format == "json":
            print(po.duplicates_report_json(report))
        else:
            text = po.duplicates_report_text(report)
            if text:
                print(text)
        return 0
    designations = _read_designations(args.file)
    if args.po_cmd == "sort":
        ordered = collation.sort_designations(designations)
        if args.format == "json":
            _emit_json({"designations": ordered})
        else:
            for d in ordered:
                print(d)
    elif args.po_cmd == "structures":
        freqs = collation.structure_frequencies(designations)
        if args.format == "json":
            _emit_json({"frequencies": freqs})
        else:
            for signature, count in freqs.items():
                print(f"{signature}\t{count}")
    else:  # lint
        hints = collation.anomaly_hints(designations)
        if args.format == "json":
            _emit_json({"hints": [asdict(h) for h in hints]})
        else:
            for h in hints:
                print(f"{h.designation}\t{h.kind}\t{h.evidence}")
    return 0


def _cmd_table(args) -> int:
    if args.table_cmd == "new":
        kind = load_table_kind(args.kind)
        save_prototype(new_table(kind), args.out)
        print(f"created {args.out}")
        return 0
    table = load_prototype(args.file)
    if args.table_cmd == "op":
        buffer = GoodsBuffer()
        if args.buffer and Path(args.buffer).exists():
            buffer = GoodsBuffer.from_dict(
                json.loads(Path(args.buffer).read_text(encoding="utf-8"))
            )
        op_args = {}
        if args.rows:
            table.mark_rows([int(r) for r in args.rows.split(",")])
        if args.to is not None:
            op_args["to"] = args.to
        table.apply_row_op(args.action, op_args, buffer)
        if args.buffer:
            Path(args.buffer).write_text(
                json.dumps(buffer.to_dict(), ensure_ascii=False, indent=2),
                encoding="utf-8",
            )
        out = args.out or args.file
        save_prototype(table, out)
        print(f"applied {args.action}, saved {out}")
    elif args.table_cmd == "paginate":
        chunks = table.paginate(args.max_height, args.direction, args.head_mode)
        data = [
            {"records": c.record_indices, "x_offset_mm": c.x_offset_mm,
             "head_mode": c.head_mode}
            for c in chunks
        ]
        if args.format == "json":
            _emit_json({"chunks": data})
        else:
            for n, c in enumerate(data):
                print(f"chunk {n}: {len(c['records'])} rows at x={c['x_offset_mm']}")
    else:  # render
        lay = table.layout()
        if args.format == "json":
            _emit_json({
                "width": lay.width,
                "height": lay.height,
                "cells": [
                    {"path": list(c.path), "x": c.x, "y": c.y,
                     "w": c.w, "h": c.h}
                    for c in lay.cells
                ],
                "boundaries": [
                    [s.x1, s.y1, s.x2, s.y2] for s in lay.boundaries
                ],
            })
        else:
            for i, rec in enumerate(table.records):
                if hasattr(rec, "title"):
                    print(f"== {rec.title} ==")
                else:
                    fields = (
                        table.record_fields(i) if i else
                        {f: table.kind.title_of(f) for f in table.kind.field_ids()}
                    )
                    print(" | ".join(
                        fields.get(f, "") for f in table.kind.field_ids()
                    ))
    return 0


def _cmd_spec(args) -> int:
    doc = load_document(args.doc)
    kind = load_table_kind(args.kind)
    table = autofill(doc, kind, _parse_scope(args.scope))
    save_prototype(table, args.out)
    rows = len(table.data_indices())
    print(f"filled {rows} row(s) into {args.out}")
    return 0


def _cmd_session(args) -> int:
    catalog = load_catalog_set(_catalog_dir(args.catalog))
    answers = json.loads(Path(args.answers).read_text(encoding="utf-8"))
    if not isinstance(answers, list):
        raise SpecForgeError("the answer script must be a JSON array")
    fields = run_script(catalog, args.table, args.row, answers)
    print(fields.to_json())
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(catalog_dir=_catalog_dir(args.catalog))
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specforge",
        description="Tabular design documents, position designations and "
                    "nomenclature catalogs",
    )
    parser.add_argument("--format", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    catalog_dir_opt = argparse.ArgumentParser(add_help=False)
    catalog_dir_opt.add_argument("--catalog", help="catalog set directory")

    p_catalog = sub.add_parser("catalog", help="catalog set operations")
    sub_catalog = p_catalog.add_subparsers(dest="catalog_cmd", required=True)
    sub_catalog.add_parser("validate", parents=[catalog_dir_opt])
    sub_catalog.add_parser("stats", parents=[catalog_dir_opt])
    p_filter = sub_catalog.add_parser("filter", parents=[catalog_dir_opt])
    p_filter.add_argument("--object-type", choices=("pipe", "well"))
    p_filter.add_argument("--group")
    p_filter.add_argument("--kip-flag", choices=("primary", "secondary"))
    p_filter.add_argument("--kip-letter")
    p_filter.add_argument("--interval", action="append", metavar="KEY=VALUE")

    p_po = sub.add_parser("po", help="position designation tools")
    sub_po = p_po.add_subparsers(dest="po_cmd", required=True)
    for name in ("sort", "structures", "lint"):
        p = sub_po.add_parser(name)
        p.add_argument("file", help="newline-separated designations, UTF-8")
    p_dedupe = sub_po.add_parser("dedupe")
    p_dedupe.add_argument("files", nargs="+")
    p_dedupe.add_argument("--scope", help="comma list of po,axono,vk")

    p_table = sub.add_parser("table", help="table document operations")
    sub_table = p_table.add_subparsers(dest="table_cmd", required=True)
    p_new = sub_table.add_parser("new")
    p_new.add_argument("--kind", required=True)
    p_new.add_argument("--out", required=True)
    p_op = sub_table.add_parser("op")
    p_op.add_argument("--file", required=True)
    p_op.add_argument("--action", required=True)
    p_op.add_argument("--rows", help="comma list of record indices to mark")
    p_op.add_argument("--to", type=int)
    p_op.add_argument("--buffer", help="goods buffer JSON file")
    p_op.add_argument("--out")
    p_pag = sub_table.add_parser("paginate")
    p_pag.add_argument("--file", required=True)
    p_pag.add_argument("--max-height", type=float, required=True)
    p_pag.add_argument("--direction", choices=("left", "right"), default="right")
    p_pag.add_argument(
        "--head-mode", choices=("repeat-header", "graph-numbers", "none"),
        default="repeat-header",
    )
    p_render = sub_table.add_parser("render")
    p_render.add_argument("--file", required=True)

    p_spec = sub.add_parser("spec", help="specification generation")
    sub_spec = p_spec.add_subparsers(dest="spec_cmd", required=True)
    p_autofill = sub_spec.add_parser("autofill")
    p_autofill.add_argument("--doc", required=True)
    p_autofill.add_argument("--kind", required=True)
    p_autofill.add_argument("--out", required=True)
    p_autofill.add_argument("--scope")

    p_session = sub.add_parser("session", help="headless selection sessions")
    sub_session = p_session.add_subparsers(dest="session_cmd", required=True)
    p_run = sub_session.add_parser("run")
    p_run.add_argument("--catalog")
    p_run.add_argument("--table", required=True)
    p_run.add_argument("--row", type=int, required=True)
    p_run.add_argument("--answers", required=True, help="JSON array of answers")

    p_serve = sub.add_parser("serve", help="HTTP facade")
    p_serve.add_argument("--catalog")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)

    return parser


_HANDLERS = {
    "catalog": _cmd_catalog,
    "po": _cmd_po,
    "table": _cmd_table,
    "spec": _cmd_spec,
    "session": _cmd_session,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except SpecForgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Rule programs and interactive selection sessions.

Once a designer has settled on a catalog row, every cell gets a concrete
value (direct in-cell menus are resolved first), and the specification
fields are generated by concatenating string fragments according to the
table's rule file.  A fragment is a constant, a data-table column value,
an external-menu or builtin-menu pick, a typed-in number or string, or a
temporary variable holding something entered, picked or generated earlier
for another field.

Rule file grammar (one target per line, ``#`` starts a comment)::

    <target-id> = fragment ( fragment )*
    fragment    = const("...") | col(NAME) | menu(NAME) | builtin(NAME)
                | input(number|string, "prompt" [, "unit"])
                | setvar(NAME, fragment) | var(NAME)

``!skip`` on its own marks a table that generates nothing.
"""

from __future__ import annotations

import csv
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Union

from . import assets
from .errors import RuleError, SessionError, SpecForgeError

# Known generation targets: the specification field set plus special keys
# consumed by the drawing core (the set is open, any identifier parses).
SPECIAL_KEYS = ("pipe_outer_diameter", "material", "length")


# --- fragments ------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    text: str


@dataclass(frozen=True)
class Col:
    column: str


@dataclass(frozen=True)
class Menu:
    name: str


@dataclass(frozen=True)
class Builtin:
    name: str


@dataclass(frozen=True)
class Input:
    kind: str  # "number" | "string"
    prompt: str
    unit: str | None = None


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class SetVar:
    name: str
    inner: "Fragment"


Fragment = Union[Const, Col, Menu, Builtin, Input, Var, SetVar]


@dataclass
class RuleProgram:
    targets: dict[str, list[Fragment]] = field(default_factory=dict)
    skip: bool = False


# --- parser ------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""\s*(?:
        (?P<string>"(?:[^"\\]|\\.)*")
      | (?P<ident>[A-Za-z_][A-Za-z0-9_\-./]*)
      | (?P<punct>[=(),])
    )""",
    re.X,
)


def _tokenize_line(line: str, lineno: int) -> list[tuple[str, str]]:
    tokens: list[tuple[str, str]] = []
    pos = 0
    while pos < len(line):
        rest = line[pos:]
        if rest.lstrip().startswith("#"):
            break
        if not rest.strip():
            break
        m = _TOKEN_RE.match(line, pos)
        if not m:
            raise RuleError(f"line {lineno}: cannot read {rest.strip()[:20]!r}")
        pos = m.end()
        if m.lastgroup == "string":
            raw = m.group("string")[1:-1]
            text = raw.replace('\\"', '"').replace("\\\\", "\\")
            tokens.append(("string", text))
        elif m.lastgroup == "ident":
            tokens.append(("ident", m.group("ident")))
        else:
            tokens.append(("punct", m.group("punct")))
    return tokens


class _Cursor:
    def __init__(self, tokens: list[tuple[str, str]], lineno: int):
        self.tokens = tokens
        self.lineno = lineno
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, kind: str, value: str | None = None) -> str:
        tok = self.peek()
        if tok is None or tok[0] != kind or (value is not None and tok[1] != value):
            want = value or kind
            raise RuleError(f"line {self.lineno}: expected {want!r}")
        self.pos += 1
        return tok[1]


def _parse_fragment(cur: _Cursor) -> Fragment:
    name = cur.take("ident").lower()
    cur.take("punct", "(")
    if name == "const":
        text = cur.take("string")
        cur.take("punct", ")")
        return Const(text)
    if name in ("col", "menu", "builtin", "var"):
        arg = cur.take("ident")
        cur.take("punct", ")")
        return {"col": Col, "menu": Menu, "builtin": Builtin, "var": Var}[name](arg)
    if name == "input":
        kind = cur.take("ident")
        if kind not in ("number", "string"):
            raise RuleError(f"line {cur.lineno}: input kind must be number or string")
        cur.take("punct", ",")
        prompt = cur.take("string")
        unit = None
        if cur.peek() == ("punct", ","):
            cur.take("punct", ",")
            unit = cur.take("string")
        cur.take("punct", ")")
        return Input(kind, prompt, unit)
    if name == "setvar":
        var_name = cur.take("ident")
        cur.take("punct", ",")
        inner = _parse_fragment(cur)
        if isinstance(inner, SetVar):
            raise RuleError(f"line {cur.lineno}: setvar cannot nest setvar")
        cur.take("punct", ")")
        return SetVar(var_name, inner)
    raise RuleError(f"line {cur.lineno}: unknown fragment {name!r}")


def parse_rules(text: str) -> RuleProgram:
    program = RuleProgram()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line == "!skip":
            program.skip = True
            continue
        tokens = _tokenize_line(raw, lineno)
        if not tokens:
            continue
        cur = _Cursor(tokens, lineno)
        target = cur.take("ident")
        cur.take("punct", "=")
        fragments: list[Fragment] = []
        while cur.peek() is not None:
            fragments.append(_parse_fragment(cur))
        if not fragments:
            raise RuleError(f"line {lineno}: target {target!r} has no fragments")
        if target in program.targets:
            raise RuleError(f"line {lineno}: target {target!r} defined twice")
        program.targets[target] = fragments
    return program


def validate_program(program: RuleProgram, table_name: str, columns: list[str],
                     menu_names: set[str], builtin_names: set[str]) -> None:
    """Attach-time checks: references resolve, vars set before use."""
    if program.skip:
        return
    if not program.targets:
        raise RuleError(f"table {table_name!r}: rule file defines no targets")
    bound: set[str] = set()

    def walk(target: str, frag: Fragment) -> None:
        if isinstance(frag, Col) and frag.column not in columns:
            raise RuleError(
                f"table {table_name!r}, target {target!r}: unknown column "
                f"{frag.column!r}"
            )
        if isinstance(frag, Menu) and frag.name not in menu_names:
            raise RuleError(
                f"table {table_name!r}, target {target!r}: unknown menu "
                f"{frag.name!r}"
            )
        if isinstance(frag, Builtin) and frag.name not in builtin_names:
            raise RuleError(
                f"table {table_name!r}, target {target!r}: unknown builtin "
                f"{frag.name!r}"
            )
        if isinstance(frag, Var) and frag.name not in bound:
            raise RuleError(
                f"table {table_name!r}, target {target!r}: var {frag.name!r} "
                "used before setvar"
            )
        if isinstance(frag, SetVar):
            walk(target, frag.inner)
            bound.add(frag.name)

    for target, fragments in program.targets.items():
        for frag in fragments:
            walk(target, frag)


# --- external menus ------------------------------------------------------------

def parse_menus(text: str) -> dict[str, list[str]]:
    menus: dict[str, list[str]] = {}
    current: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = re.fullmatch(r"\[MENU\s+(.+)\]", line)
        if m:
            current = m.group(1).strip()
            if current in menus:
                raise RuleError(f"line {lineno}: menu {current!r} defined twice")
            menus[current] = []
            continue
        if current is None:
            raise RuleError(f"line {lineno}: option outside of a [MENU] section")
        menus[current].append(line)
    for name, options in menus.items():
        if not options:
            raise RuleError(f"menu {name!r} has no options")
    return menus


# --- builtin decision trees -------------------------------------------------------

@dataclass(frozen=True)
class BuiltinOption:
    label: str
    node: str | None = None
    value: str | None = None


@dataclass
class BuiltinNode:
    node_id: str
    prompt: str
    options: list[BuiltinOption] = field(default_factory=list)


@dataclass
class BuiltinMenu:
    name: str
    nodes: dict[str, BuiltinNode]
    root: str = "root"


def parse_builtins(text: str) -> dict[str, BuiltinMenu]:
    builtins: dict[str, BuiltinMenu] = {}
    menu: BuiltinMenu | None = None
    node: BuiltinNode | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = re.fullmatch(r"\[BUILTIN\s+(.+)\]", line)
        if m:
            menu = BuiltinMenu(name=m.group(1).strip(), nodes={})
            builtins[menu.name] = menu
            node = None
            continue
        m = re.fullmatch(r"\[NODE\s+([\w-]+)\]\s*(.*)", line)
        if m:
            if menu is None:
                raise RuleError(f"line {lineno}: node outside of a [BUILTIN] section")
            node = BuiltinNode(node_id=m.group(1), prompt=m.group(2))
            if menu.nodes == {}:
                menu.root = node.node_id
            menu.nodes[node.node_id] = node
            continue
        m = re.fullmatch(r"(.+?)\s*->\s*(node|value):(.+)", line)
        if m:
            if node is None:
                raise RuleError(f"line {lineno}: option outside of a [NODE] section")
            label, kind, arg = m.group(1), m.group(2), m.group(3).strip()
            node.options.append(
                BuiltinOption(label=label, node=arg if kind == "node" else None,
                              value=arg if kind == "value" else None)
            )
            continue
        raise RuleError(f"line {lineno}: cannot read {line!r}")
    for menu in builtins.values():
        for node in menu.nodes.values():
            if not node.options:
                raise RuleError(f"builtin {menu.name!r}: node {node.node_id!r} empty")
            for opt in node.options:
                if opt.node is not None and opt.node not in menu.nodes:
                    raise RuleError(
                        f"builtin {menu.name!r}: option leads to unknown node "
                        f"{opt.node!r}"
                    )
    return builtins


def load_shipped_builtins() -> dict[str, BuiltinMenu]:
    return parse_builtins(assets.BUILTIN_MENUS_FILE.read_text(encoding="utf-8"))


# --- unit conversion ------------------------------------------------------------------

@dataclass(frozen=True)
class UnitDef:
    quantity: str
    factor: Fraction
    core_unit: str


def load_unit_table(path: str | Path | None = None) -> dict[str, UnitDef]:
    path = Path(path) if path else assets.UNITS_FILE
    table: dict[str, UnitDef] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            table[row["unit"]] = UnitDef(
                quantity=row["quantity"],
                factor=Fraction(row["factor"]),
                core_unit=row["core_unit"],
            )
    return table


_UNIT_TABLE: dict[str, UnitDef] | None = None


def _unit_table() -> dict[str, UnitDef]:
    global _UNIT_TABLE
    if _UNIT_TABLE is None:
        _UNIT_TABLE = load_unit_table()
    return _UNIT_TABLE


def convert_units(value: float | int | str, unit: str,
                  table: dict[str, UnitDef] | None = None) -> int | float:
    """Convert a value to core units (lengths to mm) with exact factors."""
    table = table or _unit_table()
    if unit not in table:
        raise SpecForgeError(f"unknown unit {unit!r}")
    if isinstance(value, str):
        value = value.strip().replace(",", ".")
    result = Fraction(str(value)) * table[unit].factor
    if result.denominator == 1:
        return int(result)
    return float(result)


def _parse_number(text: str) -> float | int | None:
    t = text.strip().replace(",", ".")
    if not t:
        return None
    try:
        f = float(t)
    except ValueError:
        return None
    return int(f) if f.is_integer() and "." not in t and "e" not in t.lower() else f


# --- prompts and sessions ----------------------------------------------------------------

@dataclass(frozen=True)
class MenuPrompt:
    options: tuple[str, ...]
    text: str = ""


@dataclass(frozen=True)
class InputPrompt:
    kind: str
    text: str


Prompt = Union[MenuPrompt, InputPrompt]


@dataclass
class GeneratedFields:
    fields: dict[str, str]
    numeric: dict[str, int | float]

    def to_json(self) -> str:
        return json.dumps(
            {"fields": self.fields, "numeric": self.numeric},
            ensure_ascii=False, sort_keys=True, indent=2,
        )


@dataclass
class _Value:
    text: str
    unit: str | None = None


class SelectionSession:
    """State machine turning one catalog row plus answers into fields.

    Deterministic: the same row and the same answer sequence always yield
    the same generated fields.  Direct in-cell menus of the chosen row are
    resolved first, then rule fragments prompt in program order.
    """

    def __init__(self, catalog_set, table_name: str, row_index: int,
                 builtins: dict[str, BuiltinMenu] | None = None):
        from .catalog import DirectMenu  # one-way import at runtime

        self._direct_menu_type = DirectMenu
        table = catalog_set.tables.get(table_name)
        if table is None:
            raise SessionError(f"unknown table {table_name!r}")
        if not (0 <= row_index < len(table.rows)):
            raise SessionError(f"row {row_index} out of range for {table_name!r}")
        program = catalog_set.rules[table_name]
        if program.skip:
            raise SessionError(f"table {table_name!r} generates no fields")
        self.catalog_set = catalog_set
        self.table = table
        self.table_name = table_name
        self.row_index = row_index
        self.builtins = builtins if builtins is not None else load_shipped_builtins()
        self.program = program
        self.menus = catalog_set.menus

        structure = catalog_set.registry[table_name].structure
        self._meta = catalog_set.meta[structure]
        self.row: dict[str, object] = dict(zip(table.columns, table.rows[row_index]))
        self._pending_direct: list[tuple[str, tuple[str, ...]]] = [
            (col, cell.variants)
            for col, cell in self.row.items()
            if isinstance(cell, DirectMenu)
        ]
        self._targets = list(program.targets.items())
        self._ti = 0
        self._fi = 0
        self._realized: dict[str, list[_Value]] = {t: [] for t in program.targets}
        self._vars: dict[str, _Value] = {}
        self._setvar_name: str | None = None
        self._builtin: tuple[BuiltinMenu, BuiltinNode] | None = None
        self._prompt: Prompt | None = None
        self._prompt_source: object = None
        self.answers: list[object] = []
        self._advance()

    # -- state machine ----------------------------------------------------

    @property
    def done(self) -> bool:
        return self._prompt is None

    def next_prompt(self) -> Prompt | None:
        """Current prompt, or None when the session is done."""
        return self._prompt

    def _advance(self) -> None:
        self._prompt = None
        self._prompt_source = None
        if self._pending_direct:
            col, variants = self._pending_direct[0]
            title = self._meta[col].name or col
            self._prompt = MenuPrompt(options=tuple(variants), text=title)
            self._prompt_source = ("direct", col)
            return
        if self._builtin is not None:
            menu, node = self._builtin
            self._prompt = MenuPrompt(
                options=tuple(o.label for o in node.options), text=node.prompt
            )
            self._prompt_source = ("builtin", node)
            return
        while self._ti < len(self._targets):
            target, fragments = self._targets[self._ti]
            if self._fi >= len(fragments):
                self._ti += 1
                self._fi = 0
                continue
            frag = fragments[self._fi]
            inner = frag.inner if isinstance(frag, SetVar) else frag
            if isinstance(frag, SetVar):
                self._setvar_name = frag.name
            if isinstance(inner, Const):
                self._emit(target, _Value(inner.text))
            elif isinstance(inner, Col):
                cell = self.row[inner.column]
                units = self._meta[inner.column].units or None
                self._emit(target, _Value(str(cell), units))
            elif isinstance(inner, Var):
                value = self._vars[inner.name]
                self._emit(target, _Value(value.text, value.unit))
            elif isinstance(inner, Menu):
                options = self.menus[inner.name]
                self._prompt = MenuPrompt(options=tuple(options), text=inner.name)
                self._prompt_source = ("menu", target)
                return
            elif isinstance(inner, Input):
                self._prompt = InputPrompt(kind=inner.kind, text=inner.prompt)
                self._prompt_source = ("input", target, inner)
                return
            elif isinstance(inner, Builtin):
                menu = self.builtins[inner.name]
                node = menu.nodes[menu.root]
                self._builtin = (menu, node)
                self._builtin_target = target
                self._prompt = MenuPrompt(
                    options=tuple(o.label for o in node.options), text=node.prompt
                )
                self._prompt_source = ("builtin", node)
                return
        self._prompt = None

    def _emit(self, target: str, value: _Value) -> None:
        if self._setvar_name is not None:
            self._vars[self._setvar_name] = value
            self._setvar_name = None
        self._realized[target].append(value)
        self._fi += 1

    def answer(self, value) -> "SelectionSession":
        """Apply one answer to the pending prompt and advance."""
        if self._prompt is None:
            raise SessionError("session is already done")
        source = self._prompt_source
        if isinstance(self._prompt, MenuPrompt):
            if not isinstance(value, int) or isinstance(value, bool):
                raise SessionError("menu answers are option indices")
            if not (0 <= value < len(self._prompt.options)):
                raise SessionError(
                    f"option index {value} out of range "
                    f"(0..{len(self._prompt.options) - 1})"
                )
            if source[0] == "direct":
                col = source[1]
                self.row[col] = self._prompt.options[value]
                self._pending_direct.pop(0)
            elif source[0] == "builtin":
                node = source[1]
                opt = node.options[value]
                menu, _ = self._builtin
                if opt.node is not None:
                    self._builtin = (menu, menu.nodes[opt.node])
                else:
                    self._builtin = None
                    self._emit(self._builtin_target, _Value(opt.value))
            else:  # external menu
                target = source[1]
                self._emit(target, _Value(self._prompt.options[value]))
        else:  # input prompt
            _, target, frag = source
            if frag.kind == "number":
                if isinstance(value, bool) or not isinstance(value, (int, float, str)):
                    raise SessionError("a number is required")
                number = _parse_number(str(value))
                if number is None:
                    raise SessionError(f"{value!r} is not a number")
                text = str(number)
            else:
                text = str(value)
            self._emit(target, _Value(text, frag.unit))
        self.answers.append(value)
        self._advance()
        return self

    def finish(self) -> GeneratedFields:
        """Concatenate realized fragments; normalize numeric special keys."""
        if not self.done:
            raise SessionError("session still awaits answers")
        fields: dict[str, str] = {}
        numeric: dict[str, int | float] = {}
        for target, values in self._realized.items():
            text = "".join(v.text for v in values)
            fields[target] = text
            number = _parse_number(text)
            if number is not None:
                unit = next((v.unit for v in values if v.unit), None)
                if unit is not None:
                    try:
                        numeric[target] = convert_units(number, unit)
                    except SpecForgeError:
                        numeric[target] = number
                else:
                    numeric[target] = number
        return GeneratedFields(fields=fields, numeric=numeric)


def start_session(catalog_set, table_name: str, row_index: int,
                  builtins: dict[str, BuiltinMenu] | None = None) -> SelectionSession:
    return SelectionSession(catalog_set, table_name, row_index, builtins)


def run_script(catalog_set, table_name: str, row_index: int,
               answers: list) -> GeneratedFields:
    """Drive a whole session from a prerecorded answer list."""
    session = start_session(catalog_set, table_name, row_index)
    for value in answers:
        if session.done:
            raise SessionError("more answers than prompts")
        session.answer(value)
    if not session.done:
        raise SessionError("script ended before the session was done")
    return session.finish()

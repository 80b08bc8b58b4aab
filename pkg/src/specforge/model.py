"""Drawing element model: kinds, payloads, specifying properties.

A drawing element of module kind pairs an invisible parametric
representation with visible geometry that is regenerated from it.  Plain
graphics (lines, texts) carry no parameters beyond their payload.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields as dc_fields
from enum import Enum
from typing import Union

from .errors import SchemaError
from .table.instance import TableInstance


class ElementKind(str, Enum):
    LINE = "line"
    TEXT = "text"
    PO_MODULE = "po_module"
    TABLE_MODULE = "table_module"
    AXONO_SCHEME_STUB = "axono_scheme_stub"
    VK_PROFILE_STUB = "vk_profile_stub"


MODULE_KINDS = (
    ElementKind.PO_MODULE,
    ElementKind.TABLE_MODULE,
    ElementKind.AXONO_SCHEME_STUB,
    ElementKind.VK_PROFILE_STUB,
)

STUB_KINDS = (ElementKind.AXONO_SCHEME_STUB, ElementKind.VK_PROFILE_STUB)


class PoType(str, Enum):
    """How the visible multiline text maps to products.

    ONE_PRODUCT: the whole text is one designation, one property row.
    PRODUCT_PER_LINE: every line is a designation with its own row.
    """

    ONE_PRODUCT = "one_product"
    PRODUCT_PER_LINE = "product_per_line"


class ObjectType(str, Enum):
    NONE = "none"
    PIPE = "pipe"
    WELL = "well"


# Union of the specification and order-specification field sets.
SPEC_FIELD_TITLES = {
    "marka_poz": "Марка, Поз.",
    "pozicija": "Позиция",
    "oboznachenie": "Обозначение",
    "naimenovanie": "Наименование",
    "kolichestvo": "Количество",
    "massa_ed": "Масса ед.",
    "primechanie": "Примечание",
    "tip_marka": "Тип, марка",
    "naim_teh": "Наименование и техническая характеристика",
    "ed_izm": "ЕдИзм",
    "kod_oborud": "Код оборудования",
    "zavod": "Завод-изготовитель",
}

SPEC_FIELD_IDS = tuple(SPEC_FIELD_TITLES)


@dataclass
class SpecProps:
    """The twelve invisible specifying properties of one product."""

    marka_poz: str | None = None
    pozicija: str | None = None
    oboznachenie: str | None = None
    naimenovanie: str | None = None
    kolichestvo: str | None = None
    massa_ed: str | None = None
    primechanie: str | None = None
    tip_marka: str | None = None
    naim_teh: str | None = None
    ed_izm: str | None = None
    kod_oborud: str | None = None
    zavod: str | None = None

    def __post_init__(self):
        if self.kolichestvo is not None:
            try:
                value = float(self.kolichestvo.replace(",", "."))
            except ValueError:
                return
            if value < 0:
                raise SchemaError("kolichestvo must be >= 0 when numeric")

    def to_dict(self) -> dict[str, str]:
        return {
            f.name: getattr(self, f.name)
            for f in dc_fields(self)
            if getattr(self, f.name) is not None
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SpecProps":
        unknown = set(data) - set(SPEC_FIELD_IDS)
        if unknown:
            raise SchemaError(f"unknown specifying field(s): {sorted(unknown)}")
        return cls(**data)

    def set_field(self, field_id: str, value: str | None) -> None:
        if field_id not in SPEC_FIELD_IDS:
            raise SchemaError(f"unknown specifying field {field_id!r}")
        setattr(self, field_id, value)
        self.__post_init__()


@dataclass
class DuplicateScope:
    """Which designation-bearing modules take part in duplicate control."""

    include_po_modules: bool = True
    include_axono_modules: bool = True
    include_vk_profile_modules: bool = True

    def admits(self, kind: ElementKind) -> bool:
        if kind == ElementKind.PO_MODULE:
            return self.include_po_modules
        if kind == ElementKind.AXONO_SCHEME_STUB:
            return self.include_axono_modules
        if kind == ElementKind.VK_PROFILE_STUB:
            return self.include_vk_profile_modules
        return False


# --- payloads ------------------------------------------------------------

@dataclass
class LinePayload:
    end: tuple[float, float]
    line_type: str = "main"
    color: str = "black"


@dataclass
class TextPayload:
    lines: list[str]
    font_height_mm: float = 2.5


@dataclass
class PoPayload:
    lines: list[str]
    potype: PoType
    objecttype: ObjectType
    props: list[SpecProps]
    font_height_mm: float = 2.5

    def __post_init__(self):
        if not self.lines:
            raise SchemaError("a position designation needs at least one line")
        expected = 1 if self.potype == PoType.ONE_PRODUCT else len(self.lines)
        if len(self.props) != expected:
            raise SchemaError(
                f"potype {self.potype.value} over {len(self.lines)} line(s) "
                f"requires {expected} property row(s), got {len(self.props)}"
            )

    def designations(self) -> list[str]:
        if self.potype == PoType.ONE_PRODUCT:
            return ["\n".join(self.lines)]
        return list(self.lines)


@dataclass
class TablePayload:
    instance: TableInstance


@dataclass
class StubPayload:
    designations: list[str]


Payload = Union[LinePayload, TextPayload, PoPayload, TablePayload, StubPayload]

_PAYLOAD_TYPES = {
    ElementKind.LINE: LinePayload,
    ElementKind.TEXT: TextPayload,
    ElementKind.PO_MODULE: PoPayload,
    ElementKind.TABLE_MODULE: TablePayload,
    ElementKind.AXONO_SCHEME_STUB: StubPayload,
    ElementKind.VK_PROFILE_STUB: StubPayload,
}


@dataclass
class Element:
    id: int
    layer: str
    kind: ElementKind
    position: tuple[float, float]
    payload: Payload

    def __post_init__(self):
        self.position = (round(self.position[0], 3), round(self.position[1], 3))
        expected = _PAYLOAD_TYPES[self.kind]
        if not isinstance(self.payload, expected):
            raise SchemaError(
                f"element {self.id}: kind {self.kind.value} expects "
                f"{expected.__name__} payload"
            )

    @property
    def is_module(self) -> bool:
        return self.kind in MODULE_KINDS


def designations_of(element: Element) -> list[str]:
    if element.kind == ElementKind.PO_MODULE:
        return element.payload.designations()
    if element.kind in STUB_KINDS:
        return list(element.payload.designations)
    return []


# --- display list -----------------------------------------------------------

@dataclass(frozen=True)
class LinePrimitive:
    p1: tuple[float, float]
    p2: tuple[float, float]
    layer: str
    line_type: str = "main"
    color: str = "black"


@dataclass(frozen=True)
class TextPrimitive:
    position: tuple[float, float]
    text: str
    layer: str
    font_height_mm: float = 2.5
    color: str = "black"


Primitive = Union[LinePrimitive, TextPrimitive]


@dataclass
class DisplayList:
    primitives: list[Primitive] = field(default_factory=list)

    def translated(self, dx: float, dy: float) -> "DisplayList":
        out: list[Primitive] = []
        for p in self.primitives:
            if isinstance(p, LinePrimitive):
                out.append(
                    LinePrimitive(
                        (p.p1[0] + dx, p.p1[1] + dy),
                        (p.p2[0] + dx, p.p2[1] + dy),
                        p.layer, p.line_type, p.color,
                    )
                )
            else:
                out.append(
                    TextPrimitive(
                        (p.position[0] + dx, p.position[1] + dy),
                        p.text, p.layer, p.font_height_mm, p.color,
                    )
                )
        return DisplayList(out)

"""Table module: recursive block-subdivision documents with a record array."""

from .kind import (  # noqa: F401
    Cell,
    CellStyle,
    Leaf,
    Split,
    TableKind,
    KindOptions,
    block_width,
    iter_leaves,
    kind_from_dict,
    kind_to_dict,
    load_table_kind,
    save_table_kind,
)
from .layout import CellRect, Segment, TableLayout  # noqa: F401
from .instance import (  # noqa: F401
    DataRecord,
    EditableRegion,
    GoodsBuffer,
    PageChunk,
    SectionRecord,
    TableInstance,
    load_prototype,
    new_table,
    save_prototype,
)

"""Shared constructors for table tests."""

from specforge.table import Leaf, Split, TableKind
from specforge.table.kind import KindOptions


def flat_kind(n_cols=2, width=20.0, category="generic", line_height=8.0,
              fields=None, titles=None, name="flat"):
    fields = fields or [f"f{i}" for i in range(n_cols)]
    titles = titles or [f.upper() for f in fields]
    return TableKind(
        name=name,
        block=Split(
            axis="horizontal",
            parts=[Leaf(f, width, t) for f, t in zip(fields, titles)],
        ),
        options=KindOptions(category=category, line_height_mm=line_height),
    )

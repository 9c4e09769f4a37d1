"""Provide utilities for writing result tables."""
import logging
import math
import os
from typing import Any, Iterable, List, Sequence, Tuple

from scfdma.__version__ import __version__


def format_value(value: Any) -> str:
    """Render one cell: floats with 12 significant digits, infinities as inf."""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
        return f"{value:.12g}"
    return str(value)


def write_csv_item(fh: Any, header: List, data: Sequence, sep: str = ",") -> None:
    """Write out a single row of a result table.

    Args:
        fh: File handle of the table.
        header: List of column names.
        data: Cells for the row.
        sep: Separator [,].
    """
    if len(header) != len(data):
        raise ValueError("Header and data are not the same length.")
    try:
        fh.write(sep.join(format_value(d) for d in data) + "\n")
    except IOError:
        logging.warning("Can't write data for {}".format(data))


def write_comment(fh: Any, key: str, value: Any = None) -> None:
    """Write a ``# key: value`` line, or ``# key`` when there is no value."""
    if value is None:
        fh.write(f"# {key}\n")
    else:
        fh.write(f"# {key}: {format_value(value)}\n")


def write_table(
    path: str,
    schema: str,
    metadata: Iterable[Tuple[str, Any]],
    header: List[str],
    rows: Iterable[Sequence],
    trailer: Iterable[Tuple[str, Any]] = (),
) -> None:
    """Write a CSV with ``#`` comment lines before the header and after the rows.

    Args:
        path: Output file; parent directories are created.
        schema: Schema id such as ``psd/1``.
        metadata: (key, value) pairs echoed above the header.
        header: Column names.
        rows: Data rows.
        trailer: (key, value) pairs echoed after the rows.
    """
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w", newline="") as fh:
        write_comment(fh, "scfdma-model", __version__)
        write_comment(fh, "schema", schema)
        for key, value in metadata:
            write_comment(fh, key, value)
        fh.write(",".join(header) + "\n")
        for row in rows:
            write_csv_item(fh, header, row)
        for key, value in trailer:
            write_comment(fh, key, value)
    logging.info(f"Wrote {schema} table to {path}")

"""Parsing and cleaning of delimited sensor tables.

The default :class:`TableFormat` is the UCI Air Quality dialect: ``;`` between
fields, ``,`` as the radix mark, two empty trailing columns, and ``-200`` as
the missing-value code.
"""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AllRowsDropped,
    DuplicateColumnName,
    EmptyInput,
    EncodingError,
    InvalidFormat,
    NoNumericColumns,
    RaggedRow,
)

_UNNAMED = re.compile(r"^Unnamed")
_NUMBER = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


@dataclass(frozen=True)
class TableFormat:
    field_separator: str = ";"
    decimal_separator: str = ","
    drop_unnamed_trailing: bool = True
    sentinel_missing: float = -200.0

    def __post_init__(self):
        if len(self.field_separator) != 1 or len(self.decimal_separator) != 1:
            raise InvalidFormat("separators must be single characters")
        if self.field_separator == self.decimal_separator:
            raise InvalidFormat("field and decimal separators must differ")
        if not math.isfinite(self.sentinel_missing):
            raise InvalidFormat("sentinel_missing must be finite")


UCI_AIR_QUALITY = TableFormat()
STANDARD_CSV = TableFormat(field_separator=",", decimal_separator=".")


@dataclass
class RawTable:
    """Parsed table before cleaning.

    ``numeric`` maps column name to a float array with NaN marking missing
    cells; ``metadata`` holds the remaining columns as raw text.  ``columns``
    keeps the original header order across both.
    """

    columns: list[str]
    numeric: dict[str, np.ndarray]
    metadata: dict[str, list[str]]
    n_rows: int


@dataclass
class Dataset:
    column_names: list[str]
    values: np.ndarray  # (n_rows, n_cols), row order = time order
    metadata: dict[str, list[str]] = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2 or self.values.shape[1] != len(self.column_names):
            raise ValueError("values must be (n_rows, len(column_names))")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("Dataset values must be finite")

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_cols(self) -> int:
        return self.values.shape[1]

    def column(self, name: str) -> np.ndarray:
        return self.values[:, self.column_names.index(name)]

    def select(self, names) -> np.ndarray:
        idx = [self.column_names.index(n) for n in names]
        return self.values[:, idx]

    def take(self, start: int, stop: int) -> "Dataset":
        return Dataset(
            list(self.column_names),
            self.values[start:stop].copy(),
            {k: v[start:stop] for k, v in self.metadata.items()},
        )


def _parse_number(text: str, decimal: str) -> float:
    text = text.strip()
    if decimal != ".":
        if "." in text:
            return math.nan
        text = text.replace(decimal, ".")
    if not _NUMBER.match(text):
        return math.nan
    return float(text)


def parse_table(source, fmt: TableFormat = UCI_AIR_QUALITY) -> RawTable:
    """Parse ``source`` (bytes, text, or a binary file object) into a RawTable."""
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise EncodingError(f"undecodable byte at offset {exc.start}") from None
    reader = csv.reader(io.StringIO(source, newline=""), delimiter=fmt.field_separator)
    records = [r for r in reader if r]
    if not records:
        raise EmptyInput("no header row")
    header = [h.strip() for h in records[0]]
    body = records[1:]
    for i, rec in enumerate(body, start=1):
        if len(rec) != len(header):
            raise RaggedRow(i, len(header), len(rec))

    keep = [
        j for j, name in enumerate(header)
        if not (fmt.drop_unnamed_trailing and (name == "" or _UNNAMED.match(name)))
    ]
    names = [header[j] for j in keep]
    seen = set()
    for name in names:
        if name in seen:
            raise DuplicateColumnName(f"column {name!r} appears more than once")
        seen.add(name)

    numeric: dict[str, np.ndarray] = {}
    metadata: dict[str, list[str]] = {}
    for j, name in zip(keep, names):
        cells = [rec[j] for rec in body]
        parsed = np.array([_parse_number(c, fmt.decimal_separator) for c in cells], dtype=float)
        # a column with no parseable cell at all is a label column (Date, Time)
        if np.any(~np.isnan(parsed)) or not any(c.strip() for c in cells):
            numeric[name] = parsed
        else:
            metadata[name] = [c.strip() for c in cells]
    return RawTable(names, numeric, metadata, len(body))


def clean(raw: RawTable, fmt: TableFormat = UCI_AIR_QUALITY) -> Dataset:
    """Replace sentinel cells with missing, then drop every incomplete row."""
    names = [c for c in raw.columns if c in raw.numeric]
    if not names:
        raise NoNumericColumns("table has no numeric columns")
    values = np.column_stack([raw.numeric[c] for c in names]) if raw.n_rows else np.empty((0, len(names)))
    values = np.where(values == fmt.sentinel_missing, np.nan, values)
    complete = np.all(np.isfinite(values), axis=1)
    for cells in raw.metadata.values():
        complete &= np.array([c != "" for c in cells], dtype=bool)
    if not np.any(complete):
        raise AllRowsDropped(f"none of {raw.n_rows} rows is complete")
    meta = {k: [v for v, ok in zip(cells, complete) if ok] for k, cells in raw.metadata.items()}
    return Dataset(names, values[complete], meta)


def load_dataset(path, fmt: TableFormat = UCI_AIR_QUALITY) -> tuple[Dataset, bytes]:
    """Read, parse, and clean a file; also return its raw bytes for hashing."""
    with open(path, "rb") as fh:
        data = fh.read()
    return clean(parse_table(data, fmt), fmt), data


def write_csv(dataset: Dataset, sink) -> None:
    """Write ``dataset`` in the standard ``,``/``.`` dialect."""
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(list(dataset.metadata) + dataset.column_names)
    meta_cols = list(dataset.metadata.values())
    for i, row in enumerate(dataset.values):
        writer.writerow([m[i] for m in meta_cols] + [repr(float(v)) for v in row])

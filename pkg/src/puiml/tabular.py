"""Typed tabular cohorts: schema, CSV ingestion, label encoding and fold-safe scaling."""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

log = logging.getLogger(__name__)

ROLES = ("intrinsic", "extrinsic", "outcome")
TARGETS = ("UI", "STRESS_UI", "FREQ_UI", "INT_UI")


class SchemaError(ValueError):
    pass


class DataError(ValueError):
    """Raised when a cell, row or column does not conform to the schema."""

    def __init__(self, message: str, row: int | None = None, column: str | None = None):
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.row = row
        self.column = column


class LeakageError(ValueError):
    """An outcome column was requested as a feature."""


@dataclass(frozen=True)
class Categorical:
    levels: tuple[str, ...]

    def __post_init__(self):
        if len(self.levels) < 1:
            raise SchemaError("categorical column needs at least one level")
        if len(set(self.levels)) != len(self.levels):
            raise SchemaError(f"duplicate levels: {self.levels}")


@dataclass(frozen=True)
class Continuous:
    unit: str = ""
    low: float | None = None
    high: float | None = None


FeatureKind = Categorical | Continuous


@dataclass(frozen=True)
class Column:
    name: str
    kind: FeatureKind
    role: str
    description: str = ""

    def __post_init__(self):
        if self.role not in ROLES:
            raise SchemaError(f"{self.name}: unknown role {self.role!r}")

    @property
    def categorical(self) -> bool:
        return isinstance(self.kind, Categorical)


@dataclass(frozen=True)
class Schema:
    columns: tuple[Column, ...]

    def __post_init__(self):
        names = [c.name for c in self.columns]
        dup = {n for n in names if names.count(n) > 1}
        if dup:
            raise SchemaError(f"duplicate column names: {sorted(dup)}")

    def __getitem__(self, name: str) -> Column:
        for c in self.columns:
            if c.name == name:
                return c
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(c.name == name for c in self.columns)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)

    def by_role(self, role: str) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns if c.role == role)

    def to_json(self) -> dict:
        cols = []
        for c in self.columns:
            entry = {"name": c.name, "role": c.role}
            if c.description:
                entry["description"] = c.description
            if c.categorical:
                entry["kind"] = "categorical"
                entry["levels"] = list(c.kind.levels)
            else:
                entry["kind"] = "continuous"
                entry["unit"] = c.kind.unit
                if c.kind.low is not None:
                    entry["low"] = c.kind.low
                if c.kind.high is not None:
                    entry["high"] = c.kind.high
            cols.append(entry)
        return {"columns": cols}

    @classmethod
    def from_json(cls, data: Mapping) -> "Schema":
        cols = []
        for entry in data["columns"]:
            kind_name = entry.get("kind")
            if kind_name == "categorical":
                kind: FeatureKind = Categorical(tuple(str(v) for v in entry["levels"]))
            elif kind_name == "continuous":
                kind = Continuous(entry.get("unit", ""), entry.get("low"), entry.get("high"))
            else:
                raise SchemaError(f"{entry.get('name')}: unknown kind {kind_name!r}")
            cols.append(Column(entry["name"], kind, entry["role"], entry.get("description", "")))
        return cls(tuple(cols))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "Schema":
        return cls.from_json(json.loads(Path(path).read_text(encoding="utf-8")))


@dataclass(frozen=True, eq=False)
class Dataset:
    """Column-oriented table. Categorical columns hold level indices, continuous hold floats."""

    schema: Schema
    data: Mapping[str, np.ndarray]

    def __post_init__(self):
        lengths = {len(v) for v in self.data.values()}
        if len(lengths) > 1:
            raise DataError(f"inconsistent column lengths {sorted(lengths)}")
        frozen = {}
        for col in self.schema.columns:
            if col.name not in self.data:
                raise DataError("missing from dataset", column=col.name)
            arr = np.array(self.data[col.name], dtype=np.int64 if col.categorical else np.float64)
            arr.setflags(write=False)
            frozen[col.name] = arr
        object.__setattr__(self, "data", frozen)
        validate(self)

    @property
    def n_rows(self) -> int:
        return len(next(iter(self.data.values()))) if self.data else 0

    def __len__(self) -> int:
        return self.n_rows

    def __getitem__(self, name: str) -> np.ndarray:
        return self.data[name]

    def labels(self, target: str) -> np.ndarray:
        col = self.schema[target]
        if col.role != "outcome" or not col.categorical:
            raise SchemaError(f"{target} is not a categorical outcome")
        return self.data[target]


def validate(dataset: Dataset) -> None:
    """Check every cell against its column's levels or range."""
    for col in dataset.schema.columns:
        values = dataset.data[col.name]
        if col.categorical:
            bad = np.flatnonzero((values < 0) | (values >= len(col.kind.levels)))
        else:
            mask = ~np.isfinite(values)
            if col.kind.low is not None:
                mask |= values < col.kind.low
            if col.kind.high is not None:
                mask |= values > col.kind.high
            bad = np.flatnonzero(mask)
        if bad.size:
            raise DataError(f"invalid value {values[bad[0]]!r}", row=int(bad[0]) + 1, column=col.name)


def _parse_cell(col: Column, raw: str, row: int):
    text = raw.strip()
    if text == "":
        raise DataError("missing value", row=row, column=col.name)
    if col.categorical:
        levels = col.kind.levels
        if text in levels:
            return levels.index(text)
        try:
            code = int(text)
        except ValueError:
            raise DataError(f"{text!r} is not a declared level", row=row, column=col.name) from None
        if not 0 <= code < len(levels):
            raise DataError(f"code {code} outside levels 0..{len(levels) - 1}", row=row, column=col.name)
        return code
    try:
        value = float(text)
    except ValueError:
        raise DataError(f"cannot parse {text!r} as a number", row=row, column=col.name) from None
    if not np.isfinite(value):
        raise DataError(f"non-finite value {text!r}", row=row, column=col.name)
    return value


def load_csv(path: str | Path, schema: Schema) -> Dataset:
    """Read a comma-separated file whose header names the schema columns (any order).

    Rows are numbered from 1 (the first line after the header) in error messages.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DataError("empty file: no header row") from None
        unknown = [h for h in header if h not in schema]
        if unknown:
            raise DataError(f"unknown column(s) {unknown}")
        missing = [n for n in schema.names if n not in header]
        if missing:
            raise DataError(f"column(s) absent from header: {missing}")
        cols = {name: [] for name in header}
        for i, record in enumerate(reader, start=1):
            if not record:
                continue
            if len(record) != len(header):
                raise DataError(f"expected {len(header)} cells, got {len(record)}", row=i)
            for name, raw in zip(header, record):
                cols[name].append(_parse_cell(schema[name], raw, i))
    return Dataset(schema, {n: np.asarray(v) for n, v in cols.items()})


def write_csv(dataset: Dataset, path: str | Path) -> None:
    """Write categorical cells as integer codes, continuous cells with full precision."""
    schema = dataset.schema
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(schema.names)
        for i in range(dataset.n_rows):
            writer.writerow(
                [int(dataset[c.name][i]) if c.categorical else repr(float(dataset[c.name][i]))
                 for c in schema.columns]
            )


def encode_categorical(dataset: Dataset, column: str) -> tuple[np.ndarray, dict[str, int]]:
    col = dataset.schema[column]
    if not col.categorical:
        raise SchemaError(f"{column} is not categorical")
    mapping = {level: i for i, level in enumerate(col.kind.levels)}
    return dataset[column].copy(), mapping


def decode_categorical(codes: Iterable[int], mapping: Mapping[str, int]) -> list[str]:
    inverse = {v: k for k, v in mapping.items()}
    return [inverse[int(c)] for c in codes]


@dataclass(frozen=True)
class ColumnInfo:
    name: str
    encoding: str  # "label" or "continuous"


@dataclass(frozen=True, eq=False)
class FeatureMatrix:
    values: np.ndarray
    columns: tuple[ColumnInfo, ...]
    rows: np.ndarray  # dataset row ids, used for leakage audits

    def __post_init__(self):
        if self.values.ndim != 2 or self.values.shape[1] != len(self.columns):
            raise ValueError("values shape does not match column provenance")
        if len(self.rows) != self.values.shape[0]:
            raise ValueError("row ids do not match values")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def take(self, idx: np.ndarray) -> "FeatureMatrix":
        return FeatureMatrix(self.values[idx], self.columns, self.rows[idx])

    def with_values(self, values: np.ndarray) -> "FeatureMatrix":
        return FeatureMatrix(values, self.columns, self.rows)


def project_group(dataset: Dataset, members: Sequence[str] | "object") -> FeatureMatrix:
    """Build the encoded, not yet scaled, feature matrix for a group of columns.

    `members` is either a sequence of names or anything with a `members` attribute.
    """
    names = list(getattr(members, "members", members))
    schema = dataset.schema
    cols, infos = [], []
    for name in names:
        if name not in schema:
            raise SchemaError(f"unknown column {name!r}")
        col = schema[name]
        if col.role == "outcome":
            raise LeakageError(f"outcome column {name} cannot be used as a feature")
        cols.append(dataset[name].astype(np.float64))
        infos.append(ColumnInfo(name, "label" if col.categorical else "continuous"))
    values = np.column_stack(cols) if cols else np.empty((dataset.n_rows, 0))
    return FeatureMatrix(values, tuple(infos), np.arange(dataset.n_rows))


@dataclass(frozen=True, eq=False)
class ScalerParams:
    columns: tuple[str, ...]
    scaled: np.ndarray  # bool mask of columns that get z-scored
    mean: np.ndarray
    std: np.ndarray
    n_rows: int
    fitted_rows: np.ndarray
    constant: tuple[str, ...] = ()


def fit_scaler(matrix: FeatureMatrix) -> ScalerParams:
    """Fit mean and sample SD (n-1) for every continuous column of the training rows."""
    values = matrix.values
    scaled = np.array([c.encoding == "continuous" for c in matrix.columns], dtype=bool)
    if scaled.any() and values.shape[0] < 2:
        raise ValueError("need at least 2 training rows to fit a scaler")
    mean = np.zeros(values.shape[1])
    std = np.ones(values.shape[1])
    constant = []
    for j in np.flatnonzero(scaled):
        col = values[:, j]
        mean[j] = col.mean()
        std[j] = col.std(ddof=1)
        if std[j] == 0:
            constant.append(matrix.columns[j].name)
    if constant:
        log.warning("constant continuous column(s) on training rows, centred only: %s", constant)
    return ScalerParams(matrix.names, scaled, mean, std, values.shape[0], matrix.rows.copy(), tuple(constant))


def apply_scaler(params: ScalerParams, matrix: FeatureMatrix) -> FeatureMatrix:
    if matrix.names != params.columns:
        raise ValueError(f"column mismatch: fitted on {params.columns}, got {matrix.names}")
    out = matrix.values.copy()
    for j in np.flatnonzero(params.scaled):
        out[:, j] = out[:, j] - params.mean[j]
        if params.std[j] > 0:
            out[:, j] /= params.std[j]
    return matrix.with_values(out)


@dataclass(frozen=True, eq=False)
class MinMaxParams:
    columns: tuple[str, ...]
    low: np.ndarray
    high: np.ndarray
    fitted_rows: np.ndarray


def fit_minmax(matrix: FeatureMatrix) -> MinMaxParams:
    """Per-column training range, used to feed non-negative inputs to Complement NB."""
    if matrix.values.shape[0] == 0:
        raise ValueError("cannot fit min-max scaling on zero rows")
    return MinMaxParams(matrix.names, matrix.values.min(axis=0), matrix.values.max(axis=0), matrix.rows.copy())


def apply_minmax(params: MinMaxParams, matrix: FeatureMatrix) -> FeatureMatrix:
    if matrix.names != params.columns:
        raise ValueError(f"column mismatch: fitted on {params.columns}, got {matrix.names}")
    span = params.high - params.low
    safe = np.where(span > 0, span, 1.0)
    out = np.clip((matrix.values - params.low) / safe, 0.0, 1.0)
    return matrix.with_values(out)


"""Observed DMU dataset: loading, validation, and subsetting.

The canonical interchange is CSV with header
``id,x:<name>[unit],...,y:<name>[unit],...``; a JSON mirror with the
same content is accepted and produced as well.  Values are stored as
immutable numpy arrays so datasets can be shared freely across
concurrent assessments.
"""

from __future__ import annotations

import csv
import json
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class DatasetError(Exception):
    """Raised when a dataset cannot be parsed or fails validation."""

    def __init__(self, message, violations=None):
        super().__init__(message)
        self.violations = list(violations or [])


@dataclass(frozen=True, eq=False)
class DmuRecord:
    """One decision-making unit: nonnegative input and output levels."""

    id: str
    inputs: np.ndarray
    outputs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "inputs", np.asarray(self.inputs, dtype=float))
        object.__setattr__(self, "outputs", np.asarray(self.outputs, dtype=float))

    def __eq__(self, other):
        return (
            isinstance(other, DmuRecord)
            and self.id == other.id
            and np.array_equal(self.inputs, other.inputs)
            and np.array_equal(self.outputs, other.outputs)
        )


@dataclass(frozen=True)
class Dataset:
    """Ordered DMU records plus index labels ("name[unit]" strings)."""

    dmus: tuple[DmuRecord, ...]
    input_names: tuple[str, ...]
    output_names: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "dmus", tuple(self.dmus))
        object.__setattr__(self, "input_names", tuple(self.input_names))
        object.__setattr__(self, "output_names", tuple(self.output_names))

    @property
    def n(self) -> int:
        return len(self.dmus)

    @property
    def m(self) -> int:
        return len(self.input_names)

    @property
    def s(self) -> int:
        return len(self.output_names)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(d.id for d in self.dmus)

    @property
    def X(self) -> np.ndarray:
        """Input matrix, one row per DMU, shape (n, m)."""
        return np.array([d.inputs for d in self.dmus], dtype=float)

    @property
    def Y(self) -> np.ndarray:
        """Output matrix, one row per DMU, shape (n, s)."""
        return np.array([d.outputs for d in self.dmus], dtype=float)

    def index_of(self, dmu_id: str) -> int:
        for k, d in enumerate(self.dmus):
            if d.id == dmu_id:
                return k
        raise DatasetError(f"unknown DMU id {dmu_id!r}")

    def dmu(self, dmu_id: str) -> DmuRecord:
        return self.dmus[self.index_of(dmu_id)]


def validate(dataset: Dataset) -> list[str]:
    """Return every invariant violation; an empty list means valid."""
    violations = []
    n, m, s = dataset.n, dataset.m, dataset.s
    if m == 0 or s == 0:
        violations.append("dataset needs at least one input and one output index")
    if n <= m + s:
        violations.append(f"n must exceed m+s ({n} <= {m}+{s})")

    seen = set()
    for d in dataset.dmus:
        if d.id in seen:
            violations.append(f"duplicate id {d.id!r}")
        seen.add(d.id)
        if d.inputs.shape != (m,) or d.outputs.shape != (s,):
            violations.append(f"DMU {d.id!r}: vector lengths do not match dataset (m={m}, s={s})")
            continue
        for label, vec in (("input", d.inputs), ("output", d.outputs)):
            if not np.all(np.isfinite(vec)):
                violations.append(f"DMU {d.id!r}: non-finite {label} value")
            elif np.any(vec < 0):
                violations.append(f"DMU {d.id!r}: negative {label} value")

    if n and not any("lengths" in v for v in violations):
        X, Y = dataset.X, dataset.Y
        for i in range(m):
            if np.all(X[:, i] <= 0):
                violations.append(f"zero index column: input {dataset.input_names[i]!r}")
        for r in range(s):
            if np.all(Y[:, r] <= 0):
                violations.append(f"zero index column: output {dataset.output_names[r]!r}")
    return violations


def _require_valid(dataset: Dataset) -> Dataset:
    violations = validate(dataset)
    if violations:
        raise DatasetError("dataset validation failed: " + "; ".join(violations), violations)
    return dataset


_HEADER_RE = re.compile(r"^(x|y):(.+)$")


def _split_header(cells: list[str]) -> tuple[list[str], list[str]]:
    if not cells or cells[0].strip() != "id":
        raise DatasetError("first CSV column must be 'id'")
    input_names, output_names = [], []
    for cell in cells[1:]:
        match = _HEADER_RE.match(cell.strip())
        if not match:
            raise DatasetError(f"malformed column header {cell!r} (expected x:<name>[unit] or y:<name>[unit])")
        kind, name = match.groups()
        if kind == "x":
            if output_names:
                raise DatasetError("input columns must precede output columns")
            input_names.append(name)
        else:
            output_names.append(name)
    return input_names, output_names


def loads_csv(text: str) -> Dataset:
    rows = list(csv.reader(text.splitlines()))
    rows = [r for r in rows if any(cell.strip() for cell in r)]
    if not rows:
        raise DatasetError("empty CSV")
    input_names, output_names = _split_header(rows[0])
    m, s = len(input_names), len(output_names)
    dmus = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 1 + m + s:
            raise DatasetError(f"row {lineno}: expected {1 + m + s} cells, got {len(row)}")
        try:
            values = [float(cell) for cell in row[1:]]
        except ValueError as exc:
            raise DatasetError(f"row {lineno}: {exc}") from exc
        dmus.append(DmuRecord(row[0].strip(), values[:m], values[m:]))
    return _require_valid(Dataset(tuple(dmus), tuple(input_names), tuple(output_names)))


def loads_json(text: str) -> Dataset:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DatasetError(f"malformed JSON: {exc}") from exc
    try:
        dmus = tuple(
            DmuRecord(str(d["id"]), d["inputs"], d["outputs"]) for d in payload["dmus"]
        )
        ds = Dataset(dmus, tuple(payload["input_names"]), tuple(payload["output_names"]))
    except (KeyError, TypeError) as exc:
        raise DatasetError(f"JSON dataset missing field: {exc}") from exc
    return _require_valid(ds)


def load_csv(path) -> Dataset:
    return loads_csv(Path(path).read_text(encoding="utf-8"))


def load_json(path) -> Dataset:
    return loads_json(Path(path).read_text(encoding="utf-8"))


def load_any(path) -> Dataset:
    """Dispatch on extension: .json uses the JSON mirror, anything else CSV."""
    if str(path).lower().endswith(".json"):
        return load_json(path)
    return load_csv(path)


def dumps_csv(dataset: Dataset) -> str:
    header = ["id"] + [f"x:{n}" for n in dataset.input_names] + [f"y:{n}" for n in dataset.output_names]
    lines = [",".join(header)]
    for d in dataset.dmus:
        cells = [d.id] + [repr(float(v)) for v in d.inputs] + [repr(float(v)) for v in d.outputs]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def write_csv(dataset: Dataset, path) -> None:
    Path(path).write_text(dumps_csv(dataset), encoding="utf-8")


def to_jsonable(dataset: Dataset) -> dict:
    return {
        "input_names": list(dataset.input_names),
        "output_names": list(dataset.output_names),
        "dmus": [
            {"id": d.id, "inputs": [float(v) for v in d.inputs], "outputs": [float(v) for v in d.outputs]}
            for d in dataset.dmus
        ],
    }


def write_json(dataset: Dataset, path) -> None:
    Path(path).write_text(json.dumps(to_jsonable(dataset), indent=2), encoding="utf-8")


def exclude_dmus(dataset: Dataset, ids) -> Dataset:
    """New dataset without the listed DMUs; original order preserved."""
    ids = set(ids)
    known = set(dataset.ids)
    unknown = ids - known
    if unknown:
        raise DatasetError(f"unknown DMU ids: {sorted(unknown)}")
    remaining = tuple(d for d in dataset.dmus if d.id not in ids)
    reduced = Dataset(remaining, dataset.input_names, dataset.output_names)
    if len(remaining) <= dataset.m + dataset.s:
        raise DatasetError(
            f"excluding {sorted(ids)} leaves n={len(remaining)} <= m+s={dataset.m + dataset.s}"
        )
    return _require_valid(reduced)

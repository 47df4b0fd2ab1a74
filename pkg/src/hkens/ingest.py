"""CSV loading, missing-value imputation and run configuration."""
from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .core import Dataset
from .errors import ConfigError, DataError

MISSING = ("", "?")


@dataclass(frozen=True, eq=False)
class RawTable:
    """Parsed feature cells (NaN marks a missing cell) plus the held-out label column."""

    values: np.ndarray
    header: Optional[list] = None
    labels: Optional[list] = None
    name: str = "table"

    @property
    def n_cols(self) -> int:
        return self.values.shape[1]

    @property
    def missing(self) -> np.ndarray:
        return np.isnan(self.values)


def _sniff_delimiter(first_line: str) -> str:
    return "\t" if "\t" in first_line and "," not in first_line else ","


def _parse_cell(cell: str, row: int, col: int) -> float:
    cell = cell.strip()
    if cell in MISSING:
        return math.nan
    try:
        value = float(cell)
    except ValueError:
        raise DataError(f"non-numeric cell {cell!r} at row {row}, column {col}") from None
    if not math.isfinite(value):
        raise DataError(f"non-finite cell {cell!r} at row {row}, column {col}")
    return value


def _label_index(label_column, header, n_cols: int) -> Optional[int]:
    if label_column is None:
        return None
    if isinstance(label_column, str) and not label_column.lstrip("-").isdigit():
        if header is None or label_column not in header:
            raise DataError(f"label column {label_column!r} not found in header")
        return header.index(label_column)
    idx = int(label_column)
    if idx < 0:
        idx += n_cols
    if not 0 <= idx < n_cols:
        raise DataError(f"label column index {label_column} out of range for {n_cols} columns")
    return idx


def load_csv(path, label_column: Union[int, str, None] = None, has_header: bool = True) -> RawTable:
    """Read comma- or tab-delimited numeric text.

    Empty cells and ``?`` are missing. Rows are numbered from 1 in error
    messages, counting the header; columns are numbered from 0.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from None
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise DataError(f"{path} is empty")
    rows = list(csv.reader(lines, delimiter=_sniff_delimiter(lines[0])))
    header = [h.strip() for h in rows[0]] if has_header else None
    body = rows[1:] if has_header else rows
    offset = 2 if has_header else 1
    if not body:
        raise DataError(f"{path} has no data rows")
    n_cols = len(header) if header is not None else len(body[0])
    li = _label_index(label_column, header, n_cols)

    values, labels = [], []
    for r, row in enumerate(body):
        if len(row) != n_cols:
            raise DataError(f"row {r + offset} has {len(row)} cells, expected {n_cols}")
        feats = []
        for c, cell in enumerate(row):
            if c == li:
                labels.append(cell.strip())
            else:
                feats.append(_parse_cell(cell, r + offset, c))
        values.append(feats)
    if header is not None and li is not None:
        header = header[:li] + header[li + 1:]
    arr = np.array(values, dtype=np.float64).reshape(len(values), n_cols - (li is not None))
    return RawTable(arr, header, labels if li is not None else None, path.stem)


def impute_missing(raw: RawTable, standardize: bool = False) -> Dataset:
    """Replace missing cells with zero; optionally z-score each column afterwards."""
    X = np.where(np.isnan(raw.values), 0.0, raw.values)
    if standardize:
        sd = X.std(axis=0)
        X = (X - X.mean(axis=0)) / np.where(sd > 0, sd, 1.0)
    labels = None if raw.labels is None else np.asarray(raw.labels)
    return Dataset(X, labels, raw.name)


def load_dataset(path, label_column=None, has_header: bool = True, standardize: bool = False) -> Dataset:
    return impute_missing(load_csv(path, label_column, has_header), standardize)


def write_csv(path, X, header=None, labels=None, label_name: str = "label") -> None:
    """Write values with ``repr`` precision so a reload is bit-exact."""
    X = np.asarray(X, dtype=np.float64)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if header is not None:
            w.writerow(list(header) + ([label_name] if labels is not None else []))
        for i, row in enumerate(X):
            cells = ["?" if np.isnan(v) else repr(float(v)) for v in row]
            if labels is not None:
                cells.append(str(labels[i]))
            w.writerow(cells)


@dataclass(frozen=True)
class PipelineConfig:
    """Run parameters. ``None`` fields are resolved against the dataset by :meth:`resolve`."""

    k: int = 2
    d: Optional[int] = None
    threshold: Optional[int] = None
    ensemble_size: int = 5
    seed: int = 0
    k0: Optional[int] = None
    alpha: float = 0.5
    beta: Optional[float] = None
    consensus: str = "min-sse"
    split_rule: str = "sse"
    merge_spread: float = 5.0
    max_iters: int = 100
    tol: float = 1e-6
    standardize: bool = False

    def validate(self, n: Optional[int] = None, D: Optional[int] = None) -> "PipelineConfig":
        problems = []
        if self.k < 2:
            problems.append(f"k must be >= 2 (got {self.k})")
        if self.d is not None and (self.d < 1 or (D is not None and self.d > D)):
            problems.append(f"d must lie in 1..D (got {self.d}, D={D})")
        if self.threshold is not None and self.threshold < 2:
            problems.append(f"threshold must be >= 2 (got {self.threshold})")
        if not 1 <= self.ensemble_size <= self.k + 9:
            problems.append(f"ensemble_size must lie in 1..k+9 (got {self.ensemble_size})")
        if self.k0 is not None and (self.k0 < self.k or (n is not None and self.k0 > n)):
            problems.append(f"k0 must lie in k..N (got {self.k0})")
        if n is not None and self.k > n:
            problems.append(f"k={self.k} exceeds N={n}")
        for name in ("alpha", "beta"):
            v = getattr(self, name)
            if v is not None and not 0.0 < v < 1.0:
                problems.append(f"{name} must lie in (0, 1) (got {v})")
        if self.consensus not in ("min-sse", "co-association"):
            problems.append(f"unknown consensus mode {self.consensus!r}")
        if self.split_rule not in ("sse", "size"):
            problems.append(f"unknown split rule {self.split_rule!r}")
        if self.merge_spread < 1.0:
            problems.append(f"merge_spread must be >= 1 (got {self.merge_spread})")
        if self.max_iters < 1 or self.tol < 0:
            problems.append("max_iters must be >= 1 and tol >= 0")
        if problems:
            raise ConfigError("; ".join(problems))
        return self

    def resolve(self, dataset: Dataset) -> "PipelineConfig":
        """Fill dataset-dependent defaults and validate against N and D."""
        from .orclus import coupled_beta, default_k0

        self.validate(dataset.n, dataset.dim)
        n, D = dataset.n, dataset.dim
        d = self.d if self.d is not None else max(1, math.ceil(D / 2))
        k0 = self.k0 if self.k0 is not None else default_k0(self.k, n)
        beta = self.beta if self.beta is not None else coupled_beta(D, d, k0, self.k, self.alpha)
        threshold = self.threshold if self.threshold is not None else max(2, math.ceil(n / self.k))
        return replace(self, d=d, k0=k0, beta=beta, threshold=threshold).validate(n, D)

    def as_dict(self) -> dict:
        return asdict(self)


_ALIASES = {"T": "threshold", "L": "ensemble_size", "ensemble-size": "ensemble_size",
            "merge-spread": "merge_spread", "split-rule": "split_rule", "max-iters": "max_iters"}


def _coerce(name: str, text: str):
    kinds = {f.name: f.type for f in fields(PipelineConfig)}
    kind = kinds[name]
    if text.lower() in ("none", "null", ""):
        return None
    if "bool" in kind:
        return text.lower() in ("1", "true", "yes", "on")
    if "int" in kind:
        return int(text)
    if "float" in kind:
        return float(text)
    return text


def parse_config_text(text: str) -> dict:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    known = {f.name for f in fields(PipelineConfig)}
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        sep = "=" if "=" in line else ":"
        if sep not in line:
            raise ConfigError(f"config line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split(sep, 1))
        key = _ALIASES.get(key, key)
        if key not in known:
            raise ConfigError(f"config line {lineno}: unknown key {key!r}")
        try:
            out[key] = _coerce(key, value)
        except ValueError:
            raise ConfigError(f"config line {lineno}: bad value {value!r} for {key}") from None
    return out


def load_config(path=None, **overrides) -> PipelineConfig:
    """Config from an optional file, with non-None keyword overrides applied on top."""
    values = {}
    if path is not None:
        try:
            values.update(parse_config_text(Path(path).read_text()))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return PipelineConfig(**values).validate()
    except TypeError as exc:
        raise ConfigError(str(exc)) from None

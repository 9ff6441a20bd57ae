"""Reference datasets: CSV ingestion, column type inference, suitability scoring.

A dataset is immutable after ingestion. Column kinds are inferred by majority
parse over non-empty cells: numeric if >= 80% of cells parse as numbers,
temporal if >= 80% parse as dates, else categorical (ties: numeric > temporal).
"""
from __future__ import annotations

import csv
import hashlib
import io
import re
from dataclasses import dataclass, field
from datetime import date

from .errors import DuplicateColumnError, EmptyInputError, EmptyTermsError, RaggedRowError
from .values import is_missing, parse_date, parse_number

KIND_NUMERIC = "numeric"
KIND_CATEGORICAL = "categorical"
KIND_TEMPORAL = "temporal"

_MAJORITY = 0.8

STOPWORDS = {"a", "an", "the", "of", "for", "in", "on", "is", "are", "with"}


@dataclass(frozen=True)
class Column:
    name: str
    kind: str


def fold_name(name: str) -> str:
    """Case-insensitive, underscore/space-insensitive attribute key."""
    return re.sub(r"[_\s]+", " ", name.strip()).lower()


def _tokens(text: str) -> set[str]:
    parts = re.split(r"[^a-z0-9]+", text.lower())
    return {p for p in parts if p and p not in STOPWORDS}


@dataclass(frozen=True)
class Dataset:
    id: str
    name: str
    columns: tuple[Column, ...]
    rows: tuple[tuple[str, ...], ...]
    # per-column parsed caches, aligned with rows
    _numbers: tuple[tuple[float | None, ...], ...] = field(repr=False, default=())
    _dates: tuple[tuple[date | None, ...], ...] = field(repr=False, default=())

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def column_index(self, name: str) -> int | None:
        for i, col in enumerate(self.columns):
            if col.name == name:
                return i
        return None

    def resolve_attribute(self, name: str) -> Column | None:
        """Resolve a claim-side attribute name against the schema.

        Exact match after case/underscore folding wins; otherwise a unique
        column whose token set contains or is contained in the name's tokens.
        """
        folded = fold_name(name)
        for col in self.columns:
            if fold_name(col.name) == folded:
                return col
        name_tokens = _tokens(name)
        if not name_tokens:
            return None
        candidates = []
        for col in self.columns:
            col_tokens = _tokens(col.name)
            if col_tokens and (col_tokens <= name_tokens or name_tokens <= col_tokens):
                candidates.append(col)
        if len(candidates) == 1:
            return candidates[0]
        return None

    def temporal_columns(self) -> list[Column]:
        return [c for c in self.columns if c.kind == KIND_TEMPORAL]

    def cell(self, row: int, col: int) -> str:
        return self.rows[row][col]

    def number_at(self, row: int, col: int) -> float | None:
        return self._numbers[col][row]

    def date_at(self, row: int, col: int) -> date | None:
        return self._dates[col][row]

    def is_missing_at(self, row: int, col: int) -> bool:
        return is_missing(self.rows[row][col])

    def structurally_equal(self, other: "Dataset") -> bool:
        return (self.name, self.columns, self.rows) == (other.name, other.columns, other.rows)


def _infer_kind(cells: list[str]) -> str:
    present = [c for c in cells if not is_missing(c)]
    if not present:
        return KIND_CATEGORICAL
    n = len(present)
    n_num = sum(1 for c in present if parse_number(c) is not None)
    if n_num / n >= _MAJORITY:
        return KIND_NUMERIC
    n_date = sum(1 for c in present if parse_date(c) is not None)
    if n_date / n >= _MAJORITY:
        return KIND_TEMPORAL
    return KIND_CATEGORICAL


def ingest_csv(data: bytes | str, name: str, dataset_id: str | None = None) -> Dataset:
    """Ingest an RFC-4180 CSV with a header row into an immutable Dataset.

    The default id is a content hash, so identical bytes yield structurally
    equal datasets; callers that need fresh ids (the service) pass their own.
    """
    if isinstance(data, bytes):
        text = data.decode("utf-8-sig")
    else:
        text = data
    if not text.strip():
        raise EmptyInputError("no CSV content")
    reader = csv.reader(io.StringIO(text))
    table = list(reader)
    if not table:
        raise EmptyInputError("no CSV content")
    header = [h.strip() for h in table[0]]
    seen = set()
    for h in header:
        if h in seen:
            raise DuplicateColumnError(h)
        seen.add(h)
    rows = []
    for lineno, raw in enumerate(table[1:], start=2):
        if not raw:
            continue  # blank trailing line
        if len(raw) != len(header):
            raise RaggedRowError(lineno, len(header), len(raw))
        rows.append(tuple(cell.strip() for cell in raw))

    kinds = []
    for j in range(len(header)):
        kinds.append(_infer_kind([r[j] for r in rows]))
    columns = tuple(Column(h, k) for h, k in zip(header, kinds))

    numbers = []
    dates = []
    for j in range(len(header)):
        numbers.append(tuple(parse_number(r[j]) if not is_missing(r[j]) else None for r in rows))
        dates.append(tuple(parse_date(r[j]) if not is_missing(r[j]) else None for r in rows))

    if dataset_id is None:
        digest = hashlib.sha1(text.encode("utf-8")).hexdigest()[:12]
        dataset_id = f"ds-{digest}"
    return Dataset(
        id=dataset_id,
        name=name,
        columns=columns,
        rows=tuple(rows),
        _numbers=tuple(numbers),
        _dates=tuple(dates),
    )


def schema(dataset: Dataset) -> list[tuple[str, str]]:
    """One (name, kind) entry per column, in column order."""
    return [(c.name, c.kind) for c in dataset.columns]


def suitability_score(claim_terms: list[str], dataset: Dataset) -> float:
    """Jaccard similarity between claim-term tokens and column-name tokens."""
    if not claim_terms:
        raise EmptyTermsError("claim_terms must be non-empty")
    term_tokens: set[str] = set()
    for term in claim_terms:
        term_tokens |= _tokens(term)
    column_tokens: set[str] = set()
    for col in dataset.columns:
        column_tokens |= _tokens(col.name)
    union = term_tokens | column_tokens
    if not union:
        return 0.0
    return len(term_tokens & column_tokens) / len(union)

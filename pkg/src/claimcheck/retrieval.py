"""Compile a fact spec into data operations over a dataset.

The result is an EvidenceSlice: matched row indices, extracted measure
vectors (missing values dropped and counted), and the ordered trace of
applied filter predicates that later renders as editable chips.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date

from .dataset import Dataset
from .errors import NoMatchingRowsError, TypeMismatchError, UnknownAttributeError
from .factspec import (
    AssociationFact,
    CategorizationFact,
    DifferenceFact,
    FactSpec,
    FilterPredicate,
    OutlierFact,
    TrendFact,
)


@dataclass(frozen=True)
class EvidenceSlice:
    subspace_rows: tuple[int, ...]
    focus_rows: tuple[int, ...]
    # measure name -> ((row index, value), ...) over subspace rows, missing dropped
    measures: dict[str, tuple[tuple[int, float], ...]]
    dropped: dict[str, int]
    trace: tuple[FilterPredicate, ...]
    identifier_column: str | None
    # Difference needs its two focus groups separately
    focus_groups: dict[str, tuple[int, ...]] = field(default_factory=dict)
    # Trend: (row, date) over subspace rows, ascending
    temporal: tuple[tuple[int, date], ...] = ()
    temporal_column: str | None = None


def evaluate_predicate(row: int, predicate: FilterPredicate, dataset: Dataset) -> bool:
    """Typed comparison of one row against one predicate; missing never satisfies."""
    col = dataset.resolve_attribute(predicate.attribute)
    if col is None:
        raise UnknownAttributeError(predicate.attribute)
    j = dataset.column_index(col.name)
    if dataset.is_missing_at(row, j):
        return False
    if col.kind == "numeric":
        cell = dataset.number_at(row, j)
        lit = predicate.literal.as_number()
        if cell is None or lit is None:
            return False
        return _compare(cell, lit, predicate.op)
    if col.kind == "temporal":
        cell = dataset.date_at(row, j)
        lit = predicate.literal.as_date()
        if cell is None or lit is None:
            return False
        return _compare(cell, lit, predicate.op)
    # categorical: equality only
    if predicate.op not in ("=", "!="):
        raise TypeMismatchError(predicate.attribute, predicate.op)
    cell_text = dataset.cell(row, j).strip().lower()
    lit_text = predicate.literal.text.strip().lower()
    return (cell_text == lit_text) if predicate.op == "=" else (cell_text != lit_text)


def _compare(left, right, op: str) -> bool:
    if op == "=":
        return left == right
    if op == "!=":
        return left != right
    if op == ">":
        return left > right
    if op == ">=":
        return left >= right
    if op == "<":
        return left < right
    return left <= right


def _filter_rows(rows, predicates, dataset) -> list[int]:
    out = list(rows)
    for pred in predicates:
        out = [i for i in out if evaluate_predicate(i, pred, dataset)]
    return out


def _column_values(dataset: Dataset, attribute: str, rows) -> tuple[list[tuple[int, float]], int]:
    col = dataset.resolve_attribute(attribute)
    if col is None:
        raise UnknownAttributeError(attribute)
    j = dataset.column_index(col.name)
    pairs = []
    dropped = 0
    for i in rows:
        v = dataset.number_at(i, j)
        if v is None:
            dropped += 1
        else:
            pairs.append((i, v))
    return pairs, dropped


def _identifier_column(dataset: Dataset, identifier_key: str | None, focus_preds) -> str | None:
    # prefer the focus attribute (it names entities), then a key-name match,
    # then the first categorical column
    for pred in focus_preds:
        col = dataset.resolve_attribute(pred.attribute)
        if col is not None and col.kind == "categorical":
            return col.name
    if identifier_key:
        singular = identifier_key.rstrip("s")
        for cand in (identifier_key, singular):
            col = dataset.resolve_attribute(cand)
            if col is not None:
                return col.name
    for col in dataset.columns:
        if col.kind == "categorical":
            return col.name
    return None


def spec_focus_predicates(spec: FactSpec) -> tuple[FilterPredicate, ...]:
    focus = getattr(spec, "focus", None)
    if isinstance(focus, FilterPredicate):
        return (focus,)
    if focus:
        return tuple(focus)
    return ()


def retrieve(dataset: Dataset, spec: FactSpec) -> EvidenceSlice:
    """Apply subspace then focus filters (conjunction) and extract measures."""
    subspace_preds = tuple(getattr(spec, "subspace", None) or ())
    focus_preds = spec_focus_predicates(spec)

    all_rows = range(dataset.n_rows)
    subspace_rows = _filter_rows(all_rows, subspace_preds, dataset)
    if not subspace_rows and not isinstance(spec, CategorizationFact):
        raise NoMatchingRowsError("subspace filters match no rows")

    trace = list(subspace_preds)
    focus_groups = {}
    if isinstance(spec, DifferenceFact):
        focus_x_rows = _filter_rows(subspace_rows, [spec.focus_x], dataset)
        focus_y_rows = _filter_rows(subspace_rows, [spec.focus_y], dataset)
        focus_groups = {"focus_x": tuple(focus_x_rows), "focus_y": tuple(focus_y_rows)}
        focus_rows = sorted(set(focus_x_rows) | set(focus_y_rows))
        trace += [spec.focus_x, spec.focus_y]
    else:
        focus_rows = _filter_rows(subspace_rows, focus_preds, dataset)
        trace += list(focus_preds)

    measures: dict[str, tuple[tuple[int, float], ...]] = {}
    dropped: dict[str, int] = {}
    if isinstance(spec, AssociationFact):
        names = [spec.measure_x, spec.measure_y]
    elif isinstance(spec, OutlierFact) and spec.measure_y is not None:
        names = [spec.measure, spec.measure_y]
    elif isinstance(spec, CategorizationFact):
        names = []
    else:
        names = [spec.measure]
    for name in names:
        pairs, n_dropped = _column_values(dataset, name, subspace_rows)
        measures[name] = tuple(pairs)
        dropped[name] = n_dropped

    temporal_pairs: tuple[tuple[int, date], ...] = ()
    temporal_column = None
    if isinstance(spec, TrendFact):
        date_cols = {p.attribute for p in subspace_preds if p.op in (">=", "<=")}
        candidates = [dataset.resolve_attribute(a) for a in date_cols]
        candidates = [c for c in candidates if c is not None and c.kind == "temporal"]
        if not candidates:
            candidates = dataset.temporal_columns()
        if not candidates:
            raise UnknownAttributeError("date")
        temporal_column = candidates[0].name
        j = dataset.column_index(temporal_column)
        dated = [
            (i, dataset.date_at(i, j))
            for i in subspace_rows
            if dataset.date_at(i, j) is not None
        ]
        temporal_pairs = tuple(sorted(dated, key=lambda pair: (pair[1], pair[0])))

    return EvidenceSlice(
        subspace_rows=tuple(subspace_rows),
        focus_rows=tuple(focus_rows),
        measures=measures,
        dropped=dropped,
        trace=tuple(trace),
        identifier_column=_identifier_column(
            dataset, getattr(spec, "identifier_key", None), focus_preds or
            ((spec.focus_x, spec.focus_y) if isinstance(spec, DifferenceFact) else ())
        ),
        focus_groups=focus_groups,
        temporal=temporal_pairs,
        temporal_column=temporal_column,
    )

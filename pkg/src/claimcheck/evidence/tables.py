"""Renderer-agnostic table layouts, one per fact subtype (T1-T13).

Every summary-row value is taken verbatim from the verification result's
statistics so the two never drift apart; sorting and filter widgets mirror
the evidence slice.
"""
from __future__ import annotations

from ..dataset import Dataset
from ..errors import UnsupportedVerdictError
from ..factspec import (
    AssociationFact,
    CategorizationFact,
    DifferenceFact,
    DistributionFact,
    ExtremeFact,
    FactSpec,
    OutlierFact,
    ProportionFact,
    RankFact,
    TrendFact,
    ValueFact,
)
from ..retrieval import EvidenceSlice
from ..veracity import UNVERIFIABLE, VerificationResult
from .common import chip_list, histogram_bins, row_id

TABLE_KINDS = {
    "value_mean": "T1", "value_median": "T2", "value_sum": "T3",
    "proportion": "T4", "trend": "T5", "extreme": "T6", "rank": "T7",
    "association": "T8", "difference": "T9", "categorization": "T10",
    "distribution": "T11", "outlier_1d": "T12", "outlier_2d": "T13",
}

ROW_CAP = 500


def _cell(dataset: Dataset, i: int, column: str):
    j = dataset.column_index(column)
    if dataset.is_missing_at(i, j):
        return None
    kind = dataset.columns[j].kind
    if kind == "numeric":
        v = dataset.number_at(i, j)
        return v if v is not None else dataset.cell(i, j)
    if kind == "temporal":
        d = dataset.date_at(i, j)
        return d.isoformat() if d is not None else dataset.cell(i, j)
    return dataset.cell(i, j)


def _label_column(dataset: Dataset, slice_: EvidenceSlice) -> str | None:
    return slice_.identifier_column


def _columns_for(dataset: Dataset, slice_: EvidenceSlice, measures: list[str],
                 extra: list[str] = ()) -> list[str]:
    out = []
    label = _label_column(dataset, slice_)
    if label:
        out.append(label)
    for name in list(extra) + measures:
        col = dataset.resolve_attribute(name)
        if col and col.name not in out:
            out.append(col.name)
    for pred in slice_.trace:
        col = dataset.resolve_attribute(pred.attribute)
        if col and col.name not in out:
            out.append(col.name)
    return out


def _column_descriptors(dataset: Dataset, slice_: EvidenceSlice, names: list[str],
                        sorted_by: str | None, ascending: bool) -> list[dict]:
    descriptors = []
    for name in names:
        col = dataset.resolve_attribute(name)
        widgets = [
            _chip(p) for p in slice_.trace
            if col and dataset.resolve_attribute(p.attribute)
            and dataset.resolve_attribute(p.attribute).name == col.name
        ]
        descriptors.append({
            "name": name,
            "sort": ("asc" if ascending else "desc") if sorted_by == name else None,
            "widgets": widgets,
        })
    return descriptors


def _chip(pred) -> dict:
    value = pred.literal.as_number() if not pred.literal.quoted else pred.literal.text
    if value is None:
        value = pred.literal.text
    return {
        "attribute": pred.attribute,
        "op": pred.op,
        "value": value,
        "label": pred.chip(),
    }


def _body(dataset: Dataset, rows, columns) -> tuple[list[dict], dict | None]:
    truncated = None
    if len(rows) > ROW_CAP:
        truncated = {"total_rows": len(rows)}
        rows = rows[:ROW_CAP]
    body = [
        {"id": row_id(i), "cells": [_cell(dataset, i, c) for c in columns]}
        for i in rows
    ]
    return body, truncated


def _base(kind, columns_desc, body, summary, highlights, index_column, slice_, truncated):
    return {
        "kind": kind,
        "columns": columns_desc,
        "rows": body,
        "sticky_summary_rows": summary,
        "highlight_row_ids": highlights,
        "index_column": index_column,
        "widgets": chip_list(slice_),
        "truncated": truncated,
    }


def _sorted_measure_rows(slice_: EvidenceSlice, measure: str, descending: bool = True):
    pairs = list(slice_.measures[measure])
    return sorted(pairs, key=lambda p: (-p[1], p[0]) if descending else (p[1], p[0]))


def build_table(dataset: Dataset, slice_: EvidenceSlice, spec: FactSpec,
                result: VerificationResult) -> dict:
    """Dispatch to the subtype's layout; unverifiable results have no table."""
    if result.verdict == UNVERIFIABLE:
        raise UnsupportedVerdictError("no evidence table for an unverifiable claim")
    subtype = spec.subtype
    kind = TABLE_KINDS[subtype]
    stats = result.statistics

    if isinstance(spec, ValueFact):
        columns = _columns_for(dataset, slice_, [spec.measure])
        body, truncated = _body(dataset, list(slice_.subspace_rows), columns)
        stat = {"value_mean": "mean", "value_median": "median", "value_sum": "sum"}[subtype]
        summary = [{
            "label": f"{stat} of {spec.measure}",
            "value": stats[stat],
            "highlighted": True,
        }]
        highlights = []
        if subtype == "value_median":
            highlights = _median_source_rows(slice_, spec.measure)
        return _base(kind, _column_descriptors(dataset, slice_, columns, None, False),
                     body, summary, highlights, False, slice_, truncated)

    if isinstance(spec, ProportionFact):
        columns = _columns_for(dataset, slice_, [spec.measure])
        body, truncated = _body(dataset, list(slice_.subspace_rows), columns)
        summary = [
            {"label": "focus sum", "value": stats["focus_sum"], "highlighted": True},
            {"label": "reference sum", "value": stats["subspace_sum"], "highlighted": True},
            {"label": "proportion (%)", "value": stats["proportion_pct"], "highlighted": True},
        ]
        highlights = [row_id(i) for i in slice_.focus_rows]
        return _base(kind, _column_descriptors(dataset, slice_, columns, None, False),
                     body, summary, highlights, False, slice_, truncated)

    if isinstance(spec, TrendFact):
        columns = _columns_for(dataset, slice_, [spec.measure], extra=[slice_.temporal_column])
        ordered = [i for i, _ in slice_.temporal]
        body, truncated = _body(dataset, ordered, columns)
        return _base(kind, _column_descriptors(dataset, slice_, columns, slice_.temporal_column, True),
                     body, [], [], False, slice_, truncated)

    if isinstance(spec, (ExtremeFact, RankFact)):
        columns = _columns_for(dataset, slice_, [spec.measure])
        ordered = [i for i, _ in _sorted_measure_rows(slice_, spec.measure)]
        body, truncated = _body(dataset, ordered, columns)
        highlights = [row_id(i) for i in slice_.focus_rows]
        return _base(kind, _column_descriptors(dataset, slice_, columns, spec.measure, False),
                     body, [], highlights, True, slice_, truncated)

    if isinstance(spec, AssociationFact):
        columns = _columns_for(dataset, slice_, [spec.measure_x, spec.measure_y])
        ordered = [i for i, _ in _sorted_measure_rows(slice_, spec.measure_x)]
        body, truncated = _body(dataset, ordered, columns)
        return _base(kind, _column_descriptors(dataset, slice_, columns, spec.measure_x, False),
                     body, [], [], False, slice_, truncated)

    if isinstance(spec, DifferenceFact):
        label = _label_column(dataset, slice_) or spec.focus_x.attribute
        rows_x = slice_.focus_groups["focus_x"]
        rows_y = slice_.focus_groups["focus_y"]
        body = [
            {"id": row_id(rows_x[0]),
             "cells": [spec.focus_x.literal.text, stats["value_x"]]},
            {"id": row_id(rows_y[0]),
             "cells": [spec.focus_y.literal.text, stats["value_y"]]},
            {"id": "diff", "cells": ["difference", stats["difference"]]},
        ]
        descriptors = [
            {"name": label, "sort": None,
             "widgets": [_chip(spec.focus_x), _chip(spec.focus_y)]},
            {"name": spec.measure, "sort": None, "widgets": []},
        ]
        return _base(kind, descriptors, body, [], ["diff"], False, slice_, None)

    if isinstance(spec, CategorizationFact):
        columns = _columns_for(dataset, slice_, [])
        body, truncated = _body(dataset, list(slice_.subspace_rows), columns)
        summary = [
            {"label": key.removeprefix("count:"), "value": value, "highlighted": False}
            for key, value in stats.items() if key.startswith("count:")
        ]
        summary.append({"label": "intersection", "value": stats["intersection"], "highlighted": True})
        return _base(kind, _column_descriptors(dataset, slice_, columns, None, False),
                     body, summary, [], False, slice_, truncated)

    if isinstance(spec, DistributionFact):
        values = [v for _, v in slice_.measures[spec.measure]]
        bins = histogram_bins(values)
        body = [
            {"id": f"b{k}", "cells": [f"[{b['bin_start']}, {b['bin_end']}{')' if k < len(bins) - 1 else ']'}",
                                      b["count"]]}
            for k, b in enumerate(bins)
        ]
        descriptors = [
            {"name": f"{spec.measure} range", "sort": None, "widgets": []},
            {"name": "count", "sort": None, "widgets": []},
        ]
        return _base(kind, descriptors, body, [], [], False, slice_, None)

    if isinstance(spec, OutlierFact):
        measures = [spec.measure] + ([spec.measure_y] if spec.measure_y else [])
        columns = _columns_for(dataset, slice_, measures)
        ordered = [i for i, _ in _sorted_measure_rows(slice_, spec.measure)]
        body, truncated = _body(dataset, ordered, columns)
        highlights = [row_id(i) for i in slice_.focus_rows]
        return _base(kind, _column_descriptors(dataset, slice_, columns, spec.measure, False),
                     body, [], highlights, True, slice_, truncated)

    raise UnsupportedVerdictError(f"no table layout for {type(spec).__name__}")


def _median_source_rows(slice_: EvidenceSlice, measure: str) -> list[str]:
    pairs = sorted(slice_.measures[measure], key=lambda p: (p[1], p[0]))
    n = len(pairs)
    if n == 0:
        return []
    if n % 2:
        return [row_id(pairs[n // 2][0])]
    return [row_id(pairs[n // 2 - 1][0]), row_id(pairs[n // 2][0])]

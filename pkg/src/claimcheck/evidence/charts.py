"""Renderer-agnostic chart specs, one kind per fact subtype (V1-V13).

Annotation values come straight from the verification result's statistics;
a claimed-value auxiliary line is added whenever the claim disagrees with
the computed value, to ease visual comparison.
"""
from __future__ import annotations

from ..dataset import Dataset
from ..errors import NoTemporalColumnError, UnsupportedVerdictError
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
from ..retrieval import EvidenceSlice, retrieve
from ..veracity import INACCURATE, UNVERIFIABLE, VerificationResult
from .common import chip_list, histogram_bins, row_id

CHART_KINDS = {
    "value_mean": "strip+meanline",
    "value_median": "sortedbar+medianhighlight",
    "value_sum": "stackedbar",
    "proportion": "sunburst",
    "trend": "line",
    "extreme": "sortedbar+highlight(extreme)",
    "rank": "sortedbar+highlight(rank)",
    "association": "scatter",
    "difference": "comparisonbars+diffline",
    "categorization": "venn",
    "distribution": "histogram",
    "outlier_1d": "strip+outlierhighlight",
    "outlier_2d": "scatter+outlierhighlight",
}


def _label(dataset: Dataset, slice_: EvidenceSlice, i: int) -> str:
    col = slice_.identifier_column
    if col is None:
        return row_id(i)
    j = dataset.column_index(col)
    return dataset.cell(i, j) if not dataset.is_missing_at(i, j) else row_id(i)


def _points(dataset, slice_, measure, descending=None):
    pairs = list(slice_.measures[measure])
    if descending is not None:
        pairs.sort(key=lambda p: (-p[1], p[0]) if descending else (p[1], p[0]))
    return [
        {"id": row_id(i), "label": _label(dataset, slice_, i), "value": v}
        for i, v in pairs
    ]


def _claimed_line(result: VerificationResult) -> list[dict]:
    claimed = result.claimed
    if (result.verdict == INACCURATE and claimed is not None
            and isinstance(claimed.value, (int, float))):
        return [{
            "type": "refline", "orient": "y",
            "value": float(claimed.value), "label": f"claimed = {claimed.text}",
            "role": "claimed",
        }]
    return []


def _spec_dict(kind, data, encodings, annotations, slice_):
    return {
        "kind": kind,
        "data": data,
        "encodings": encodings,
        "annotations": annotations,
        "widgets": chip_list(slice_),
    }


def build_chart(dataset: Dataset, slice_: EvidenceSlice, spec: FactSpec,
                result: VerificationResult) -> dict:
    if result.verdict == UNVERIFIABLE:
        raise UnsupportedVerdictError("no evidence chart for an unverifiable claim")
    kind = CHART_KINDS[spec.subtype]
    stats = result.statistics

    if isinstance(spec, ValueFact):
        if spec.aggregation == "average":
            data = _points(dataset, slice_, spec.measure)
            annotations = [{"type": "refline", "orient": "y",
                            "value": stats["mean"], "label": f"mean = {stats['mean']}"}]
            annotations += _claimed_line(result)
            return _spec_dict(kind, data, {
                "y": {"field": spec.measure, "type": "quantitative"}, "sort": None,
            }, annotations, slice_)
        if spec.aggregation == "median":
            data = _points(dataset, slice_, spec.measure, descending=True)
            median_ids = _median_ids(slice_, spec.measure)
            annotations = [{"type": "refline", "orient": "y",
                            "value": stats["median"], "label": f"median = {stats['median']}"}]
            annotations += [{"type": "highlight", "target": t, "label": "median"} for t in median_ids]
            annotations += _claimed_line(result)
            return _spec_dict(kind, data, {
                "x": {"field": slice_.identifier_column or "row", "type": "nominal"},
                "y": {"field": spec.measure, "type": "quantitative"}, "sort": "desc",
            }, annotations, slice_)
        data = _points(dataset, slice_, spec.measure)
        annotations = [{"type": "refline", "orient": "y",
                        "value": stats["sum"], "label": f"sum = {stats['sum']}"}]
        annotations += _claimed_line(result)
        return _spec_dict(kind, data, {
            "y": {"field": spec.measure, "type": "quantitative"}, "stack": True, "sort": None,
        }, annotations, slice_)

    if isinstance(spec, ProportionFact):
        focus = set(slice_.focus_rows)
        inner = [
            {"id": "focus", "label": "focus", "value": stats["focus_sum"], "ring": 0},
            {"id": "rest", "label": "rest",
             "value": stats["subspace_sum"] - stats["focus_sum"], "ring": 0},
        ]
        outer = [
            {"id": row_id(i), "label": _label(dataset, slice_, i), "value": v, "ring": 1,
             "in_focus": i in focus}
            for i, v in slice_.measures[spec.measure]
        ]
        annotations = [{"type": "label", "text": f"{stats['proportion_pct']}%",
                        "value": stats["proportion_pct"]}]
        annotations += _claimed_line(result)
        return _spec_dict(kind, inner + outer, {
            "theta": {"field": spec.measure, "type": "quantitative"},
        }, annotations, slice_)

    if isinstance(spec, TrendFact):
        by_row = dict(slice_.measures[spec.measure])
        data = [
            {"id": row_id(i), "date": day.isoformat(), "value": by_row[i]}
            for i, day in slice_.temporal if i in by_row
        ]
        annotations = [
            {"type": "highlight", "target": data[0]["id"], "label": f"start = {stats['first']}"},
            {"type": "highlight", "target": data[-1]["id"], "label": f"end = {stats['last']}"},
        ]
        return _spec_dict(kind, data, {
            "x": {"field": slice_.temporal_column, "type": "temporal"},
            "y": {"field": spec.measure, "type": "quantitative"}, "sort": "asc",
        }, annotations, slice_)

    if isinstance(spec, (ExtremeFact, RankFact)):
        data = _points(dataset, slice_, spec.measure, descending=True)
        target = row_id(slice_.focus_rows[0])
        if isinstance(spec, ExtremeFact):
            label = f"{spec.value} = {stats[spec.value]}" if spec.value in stats else str(spec.value)
        else:
            label = f"rank {int(stats['rank'])}"
        annotations = [{"type": "highlight", "target": target, "label": label}]
        return _spec_dict(kind, data, {
            "x": {"field": slice_.identifier_column or "row", "type": "nominal"},
            "y": {"field": spec.measure, "type": "quantitative"}, "sort": "desc",
        }, annotations, slice_)

    if isinstance(spec, AssociationFact):
        x_by_row = dict(slice_.measures[spec.measure_x])
        y_by_row = dict(slice_.measures[spec.measure_y])
        data = [
            {"id": row_id(i), "label": _label(dataset, slice_, i),
             "x": x_by_row[i], "y": y_by_row[i]}
            for i in slice_.subspace_rows if i in x_by_row and i in y_by_row
        ]
        annotations = [{"type": "label", "text": f"r = {stats['pearson_r']}",
                        "value": stats["pearson_r"]}]
        return _spec_dict(kind, data, {
            "x": {"field": spec.measure_x, "type": "quantitative"},
            "y": {"field": spec.measure_y, "type": "quantitative"},
        }, annotations, slice_)

    if isinstance(spec, DifferenceFact):
        data = [
            {"id": "x", "label": spec.focus_x.literal.text, "value": stats["value_x"]},
            {"id": "y", "label": spec.focus_y.literal.text, "value": stats["value_y"]},
        ]
        annotations = [{"type": "diffline", "from": "x", "to": "y",
                        "value": stats["difference"],
                        "label": f"difference = {stats['difference']}"}]
        annotations += _claimed_line(result)
        return _spec_dict(kind, data, {
            "x": {"field": spec.focus_x.attribute, "type": "nominal"},
            "y": {"field": spec.measure, "type": "quantitative"},
        }, annotations, slice_)

    if isinstance(spec, CategorizationFact):
        counts = [(key.removeprefix("count:"), value)
                  for key, value in stats.items() if key.startswith("count:")]
        data = [
            {"id": f"set{k}", "label": label, "count": value}
            for k, (label, value) in enumerate(counts)
        ]
        data.append({"id": "overlap", "label": "intersection", "count": stats["intersection"]})
        annotations = [{"type": "label", "text": f"intersection = {int(stats['intersection'])}",
                        "value": stats["intersection"]}]
        if len(counts) > 2:
            annotations.append({
                "type": "note",
                "text": "more than two conditions; rendered as a count matrix",
            })
        return _spec_dict(kind, data, {"size": {"field": "count", "type": "quantitative"}},
                          annotations, slice_)

    if isinstance(spec, DistributionFact):
        values = [v for _, v in slice_.measures[spec.measure]]
        data = [dict(b, id=f"b{k}") for k, b in enumerate(histogram_bins(values))]
        annotations = [{"type": "label", "text": f"g1 = {stats['skewness_g1']}",
                        "value": stats["skewness_g1"]}]
        return _spec_dict(kind, data, {
            "x": {"field": spec.measure, "type": "quantitative", "bin": True},
            "y": {"field": "count", "type": "quantitative"},
        }, annotations, slice_)

    if isinstance(spec, OutlierFact) and spec.measure_y is None:
        data = _points(dataset, slice_, spec.measure)
        target = row_id(slice_.focus_rows[0])
        annotations = [
            {"type": "highlight", "target": target, "label": f"focus = {stats['focus_value']}"},
            {"type": "refline", "orient": "y", "value": stats["lower_fence"],
             "label": f"lower fence = {stats['lower_fence']}"},
            {"type": "refline", "orient": "y", "value": stats["upper_fence"],
             "label": f"upper fence = {stats['upper_fence']}"},
        ]
        return _spec_dict(kind, data, {
            "y": {"field": spec.measure, "type": "quantitative"},
        }, annotations, slice_)

    if isinstance(spec, OutlierFact):
        x_by_row = dict(slice_.measures[spec.measure])
        y_by_row = dict(slice_.measures[spec.measure_y])
        data = [
            {"id": row_id(i), "label": _label(dataset, slice_, i),
             "x": x_by_row[i], "y": y_by_row[i]}
            for i in slice_.subspace_rows if i in x_by_row and i in y_by_row
        ]
        target = row_id(slice_.focus_rows[0])
        annotations = [
            {"type": "highlight", "target": target,
             "label": f"d2 = {stats['mahalanobis_d2']}", "value": stats["mahalanobis_d2"]},
        ]
        return _spec_dict(kind, data, {
            "x": {"field": spec.measure, "type": "quantitative"},
            "y": {"field": spec.measure_y, "type": "quantitative"},
        }, annotations, slice_)

    raise UnsupportedVerdictError(f"no chart for {type(spec).__name__}")


def _median_ids(slice_: EvidenceSlice, measure: str) -> list[str]:
    pairs = sorted(slice_.measures[measure], key=lambda p: (p[1], p[0]))
    n = len(pairs)
    if n == 0:
        return []
    if n % 2:
        return [row_id(pairs[n // 2][0])]
    return [row_id(pairs[n // 2 - 1][0]), row_id(pairs[n // 2][0])]


def build_context_overlay(dataset: Dataset, spec: FactSpec) -> dict:
    """Full-extent line chart with the claim window shaded; trend specs only."""
    if not isinstance(spec, TrendFact):
        raise UnsupportedVerdictError("context overlay applies to trend claims")
    if not dataset.temporal_columns():
        raise NoTemporalColumnError(dataset.name)
    window = [p for p in spec.subspace if p.op in (">=", "<=")]
    others = tuple(p for p in spec.subspace if p.op not in (">=", "<="))
    full = TrendFact(measure=spec.measure, value=spec.value, subspace=others)
    slice_ = retrieve(dataset, full)
    by_row = dict(slice_.measures[spec.measure])
    data = [
        {"id": row_id(i), "date": day.isoformat(), "value": by_row[i]}
        for i, day in slice_.temporal if i in by_row
    ]
    start = next((p.literal for p in window if p.op == ">="), None)
    end = next((p.literal for p in window if p.op == "<="), None)
    annotations = [{
        "type": "region",
        "axis": "x",
        "start": start.as_date().isoformat() if start and start.as_date() else (data[0]["date"] if data else None),
        "end": end.as_date().isoformat() if end and end.as_date() else (data[-1]["date"] if data else None),
        "label": "claim window",
    }]
    return _spec_dict("line", data, {
        "x": {"field": slice_.temporal_column, "type": "temporal"},
        "y": {"field": spec.measure, "type": "quantitative"}, "sort": "asc",
    }, annotations, slice_)

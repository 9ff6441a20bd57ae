"""Shared helpers for evidence builders."""
from __future__ import annotations

import math

from ..retrieval import EvidenceSlice


def row_id(i: int) -> str:
    return f"r{i}"


def chip_list(slice_: EvidenceSlice) -> list[dict]:
    """The slice trace as editable chips, order preserved."""
    chips = []
    for pred in slice_.trace:
        value = pred.literal.text if pred.literal.quoted else pred.literal.as_number()
        if value is None:
            value = pred.literal.text
        chips.append({
            "attribute": pred.attribute,
            "op": pred.op,
            "value": value,
            "label": pred.chip(),
        })
    return chips


def histogram_bins(values: list[float]) -> list[dict]:
    """Sturges' rule bins over [min, max]; right-open except the last."""
    n = len(values)
    if n == 0:
        return []
    lo, hi = min(values), max(values)
    k = max(1, math.ceil(math.log2(n)) + 1) if n > 1 else 1
    if lo == hi:
        return [{"bin_start": lo, "bin_end": hi, "count": n}]
    width = (hi - lo) / k
    bins = [{"bin_start": lo + i * width, "bin_end": lo + (i + 1) * width, "count": 0}
            for i in range(k)]
    bins[-1]["bin_end"] = hi
    for v in values:
        idx = min(int((v - lo) / width), k - 1)
        bins[idx]["count"] += 1
    return bins

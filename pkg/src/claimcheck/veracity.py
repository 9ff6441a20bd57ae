"""Verdict rules: compute actual values from an evidence slice and compare
them to the claimed ones, one rule per fact type.

All statistics are computed in pure Python. Numeric claims match by rounding
the computed value to the claimed literal's decimal places (half-up), never
by epsilon bands. Every failure mode is data: the result is Unverifiable,
not an exception.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal

from .dataset import Dataset
from .errors import (
    ClaimCheckError,
    NoMatchingRowsError,
    TypeMismatchError,
    UnknownAttributeError,
)
from .factspec import (
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
    validate_spec,
)
from .retrieval import EvidenceSlice, evaluate_predicate, retrieve
from .values import decimal_places, ordinal

ACCURATE = "accurate"
INACCURATE = "inaccurate"
UNVERIFIABLE = "unverifiable"


@dataclass(frozen=True)
class Thresholds:
    """Engine constants; the statistics come from the verdict rules, the
    cutoffs are configuration."""
    association_r: float = 0.2
    skewness_g1: float = 0.1
    iqr_k: float = 1.5
    chi2_2df_975: float = 7.378  # Mahalanobis d^2 cutoff for bivariate outliers


DEFAULT_THRESHOLDS = Thresholds()


@dataclass(frozen=True)
class Claimed:
    text: str
    value: float | int | str | None


@dataclass(frozen=True)
class VerificationResult:
    verdict: str
    claimed: Claimed | None
    actual: float | int | str | bool | None
    statistics: dict[str, float]
    explanation: str
    rectification: str | None = None
    diagnostics: tuple[str, ...] = field(default_factory=tuple)

    @property
    def is_accurate(self) -> bool:
        return self.verdict == ACCURATE


def _unverifiable(reason: str, claimed: Claimed | None = None) -> VerificationResult:
    return VerificationResult(
        verdict=UNVERIFIABLE, claimed=claimed, actual=None, statistics={},
        explanation=reason, diagnostics=(reason,),
    )


# ---------------------------------------------------------------------------
# numeric helpers

def round_half_up(value: float, places: int) -> float:
    q = Decimal(10) ** -places
    return float(Decimal(repr(float(value))).quantize(q, rounding=ROUND_HALF_UP))


def format_rounded(value: float, places: int) -> str:
    q = Decimal(10) ** -places
    d = Decimal(repr(float(value))).quantize(q, rounding=ROUND_HALF_UP)
    if d == 0:
        return "0"
    text = format(d, "f")
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    return text


def _matches_claimed(actual: float, claimed_text: str, claimed_value: float) -> bool:
    places = decimal_places(claimed_text)
    q = Decimal(10) ** -places
    return (
        Decimal(repr(float(actual))).quantize(q, rounding=ROUND_HALF_UP)
        == Decimal(repr(float(claimed_value))).quantize(q, rounding=ROUND_HALF_UP)
    )


def mean(values) -> float:
    return math.fsum(values) / len(values)


def median(values) -> float:
    ordered = sorted(values)
    n = len(ordered)
    mid = n // 2
    if n % 2:
        return float(ordered[mid])
    return (ordered[mid - 1] + ordered[mid]) / 2.0


def pearson(xs, ys) -> float | None:
    n = len(xs)
    mx, my = mean(xs), mean(ys)
    sxy = math.fsum((x - mx) * (y - my) for x, y in zip(xs, ys))
    sxx = math.fsum((x - mx) ** 2 for x in xs)
    syy = math.fsum((y - my) ** 2 for y in ys)
    if sxx <= 0 or syy <= 0:
        return None
    return sxy / math.sqrt(sxx * syy)


def skewness(values) -> float | None:
    """Population skewness g1 = m3 / m2^(3/2) with central moments."""
    n = len(values)
    mu = mean(values)
    m2 = math.fsum((x - mu) ** 2 for x in values) / n
    if m2 <= 0:
        return None
    m3 = math.fsum((x - mu) ** 3 for x in values) / n
    return m3 / m2 ** 1.5


def quartiles(values) -> tuple[float, float]:
    """Q1/Q3 by linear interpolation at position p = q * (n - 1)."""
    ordered = sorted(values)
    n = len(ordered)

    def at(q: float) -> float:
        pos = q * (n - 1)
        lo = math.floor(pos)
        hi = math.ceil(pos)
        if lo == hi:
            return float(ordered[lo])
        frac = pos - lo
        return ordered[lo] * (1 - frac) + ordered[hi] * frac

    return at(0.25), at(0.75)


def mahalanobis_sq(points, focus) -> float | None:
    """Squared Mahalanobis distance of the focus point from the sample cloud
    (sample covariance, n-1); None when the covariance matrix is singular."""
    n = len(points)
    mx = mean([p[0] for p in points])
    my = mean([p[1] for p in points])
    sxx = math.fsum((x - mx) ** 2 for x, _ in points) / (n - 1)
    syy = math.fsum((y - my) ** 2 for _, y in points) / (n - 1)
    sxy = math.fsum((x - mx) * (y - my) for x, y in points) / (n - 1)
    det = sxx * syy - sxy * sxy
    if sxx <= 0 or syy <= 0 or det <= 1e-9 * sxx * syy:
        return None
    dx = focus[0] - mx
    dy = focus[1] - my
    return (syy * dx * dx - 2 * sxy * dx * dy + sxx * dy * dy) / det


# ---------------------------------------------------------------------------
# per-type rules

def _values(slice_: EvidenceSlice, measure: str) -> list[float]:
    return [v for _, v in slice_.measures[measure]]


def _focus_values(slice_: EvidenceSlice, measure: str) -> list[float]:
    focus = set(slice_.focus_rows)
    return [v for i, v in slice_.measures[measure] if i in focus]


_AGG_FN = {"average": mean, "median": median, "sum": lambda vs: math.fsum(vs)}
_AGG_STAT = {"average": "mean", "median": "median", "sum": "sum"}


def verify_value(slice_: EvidenceSlice, spec: ValueFact) -> VerificationResult:
    claimed = Claimed(spec.value.text, spec.value.as_number())
    values = _values(slice_, spec.measure)
    if not values:
        return _unverifiable(f"no values of {spec.measure} in the subspace", claimed)
    actual = _AGG_FN[spec.aggregation](values)
    stat = _AGG_STAT[spec.aggregation]
    ok = _matches_claimed(actual, claimed.text, claimed.value)
    places = decimal_places(claimed.text)
    return VerificationResult(
        verdict=ACCURATE if ok else INACCURATE,
        claimed=claimed,
        actual=actual,
        statistics={stat: actual},
        explanation=(
            f"The {stat} of {spec.measure} is {format_rounded(actual, places)}"
            f"{'' if ok else f', not {claimed.text}'}."
        ),
        rectification=None if ok else format_rounded(actual, places),
    )


def verify_proportion(slice_: EvidenceSlice, spec: ProportionFact) -> VerificationResult:
    claimed = Claimed(spec.value.text, spec.value.as_number())
    subspace_sum = math.fsum(_values(slice_, spec.measure))
    focus_sum = math.fsum(_focus_values(slice_, spec.measure))
    if subspace_sum == 0:
        return _unverifiable(f"the subspace sum of {spec.measure} is zero", claimed)
    actual = 100.0 * focus_sum / subspace_sum
    ok = _matches_claimed(actual, claimed.text, claimed.value)
    places = decimal_places(claimed.text)
    return VerificationResult(
        verdict=ACCURATE if ok else INACCURATE,
        claimed=claimed,
        actual=actual,
        statistics={
            "focus_sum": focus_sum,
            "subspace_sum": subspace_sum,
            "proportion_pct": actual,
        },
        explanation=(
            f"The focus accounts for {format_rounded(actual, places)}% of the total "
            f"{spec.measure}{'' if ok else f', not {claimed.text}'}."
        ),
        rectification=None if ok else format_rounded(actual, places) + "%",
    )


def verify_trend(slice_: EvidenceSlice, spec: TrendFact) -> VerificationResult:
    claimed = Claimed(spec.value, spec.value)
    by_row = dict(slice_.measures[spec.measure])
    series = [(day, by_row[i]) for i, day in slice_.temporal if i in by_row]
    if len(series) < 2:
        return _unverifiable("fewer than two dated values in the window", claimed)
    first, last = series[0][1], series[-1][1]
    if last > first:
        actual = "increase"
    elif last < first:
        actual = "decrease"
    else:
        actual = "flat"
    ok = actual == spec.value
    explanation = (
        f"{spec.measure} moved from {first} to {last} over the window"
        + (" (flat)." if actual == "flat" else f", an {actual}." if actual == "increase" else f", a {actual}.")
    )
    return VerificationResult(
        verdict=ACCURATE if ok else INACCURATE,
        claimed=claimed,
        actual=actual,
        statistics={"first": first, "last": last},
        explanation=explanation,
        rectification=None if ok or actual == "flat" else actual,
    )


def verify_extreme(slice_: EvidenceSlice, spec: ExtremeFact) -> VerificationResult:
    claimed = Claimed(spec.value, spec.value)
    if len(slice_.focus_rows) != 1:
        return _unverifiable(
            "the focus matches no single entity" if not slice_.focus_rows
            else "the focus matches multiple rows", claimed,
        )
    focus_vals = _focus_values(slice_, spec.measure)
    values = _values(slice_, spec.measure)
    if not focus_vals or not values:
        return _unverifiable(f"no values of {spec.measure} for the focus", claimed)
    focus_value = focus_vals[0]
    extreme = max(values) if spec.value == "max" else min(values)
    ok = focus_value == extreme  # ties count in the focus entity's favor
    if focus_value == max(values):
        actual = "max"
    elif focus_value == min(values):
        actual = "min"
    else:
        actual = "neither"
    return VerificationResult(
        verdict=ACCURATE if ok else INACCURATE,
        claimed=claimed,
        actual=actual,
        statistics={"focus_value": focus_value, spec.value: extreme},
        explanation=(
            f"The focus value {focus_value} {'equals' if ok else 'differs from'} "
            f"the subspace {spec.value} {extreme}."
        ),
        rectification=None if ok or actual == "neither" else actual,
    )


def verify_rank(slice_: EvidenceSlice, spec: RankFact, ascending: bool = False) -> VerificationResult:
    claimed = Claimed(str(spec.value), spec.value)
    if len(slice_.focus_rows) != 1:
        return _unverifiable(
            "the focus matches no single entity" if not slice_.focus_rows
            else "the focus matches multiple rows", claimed,
        )
    focus_vals = _focus_values(slice_, spec.measure)
    if not focus_vals:
        return _unverifiable(f"no value of {spec.measure} for the focus", claimed)
    focus_value = focus_vals[0]
    values = _values(slice_, spec.measure)
    # competition ranking: ties share the smaller rank, next rank skips
    if ascending:
        rank = 1 + sum(1 for v in values if v < focus_value)
    else:
        rank = 1 + sum(1 for v in values if v > focus_value)
    ok = rank == spec.value
    return VerificationResult(
        verdict=ACCURATE if ok else INACCURATE,
        claimed=claimed,
        actual=rank,
        statistics={"rank": float(rank), "focus_value": focus_value},
        explanation=(
            f"The focus ranks {ordinal(rank)} by {spec.measure}"
            f"{'' if ok else f', not {ordinal(spec.value)}'}."
        ),
        rectification=None if ok else ordinal(rank),
    )


def verify_association(
    slice_: EvidenceSlice, spec: AssociationFact, thresholds: Thresholds = DEFAULT_THRESHOLDS
) -> VerificationResult:
    claimed = Claimed(spec.value, spec.value)
    x_by_row = dict(slice_.measures[spec.measure_x])
    y_by_row = dict(slice_.measures[spec.measure_y])
    rows = [i for i in slice_.subspace_rows if i in x_by_row and i in y_by_row]
    if len(rows) < 3:
        return _unverifiable("fewer than three paired points", claimed)
    r = pearson([x_by_row[i] for i in rows], [y_by_row[i] for i in rows])
    if r is None:
        return _unverifiable("degenerate variance in a measure", claimed)
    if r >= thresholds.association_r:
        actual = "positive"
    elif r <= -thresholds.association_r:
        actual = "negative"
    else:
        actual = "none"
    ok = actual == spec.value
    return VerificationResult(
        verdict=ACCURATE if ok else INACCURATE,
        claimed=claimed,
        actual=actual,
        statistics={"pearson_r": r},
        explanation=(
            f"Pearson r = {format_rounded(r, 3)} indicates "
            f"{'no pronounced correlation' if actual == 'none' else f'a {actual} correlation'}."
        ),
        rectification=None if ok or actual == "none" else actual,
    )


def verify_difference(slice_: EvidenceSlice, spec: DifferenceFact) -> VerificationResult:
    claimed = Claimed(spec.value.text, spec.value.as_number())
    rows_x = slice_.focus_groups.get("focus_x", ())
    rows_y = slice_.focus_groups.get("focus_y", ())
    if len(rows_x) != 1 or len(rows_y) != 1:
        return _unverifiable("each compared entity must match exactly one row", claimed)
    by_row = dict(slice_.measures[spec.measure])
    if rows_x[0] not in by_row or rows_y[0] not in by_row:
        return _unverifiable(f"missing {spec.measure} value for a compared entity", claimed)
    value_x, value_y = by_row[rows_x[0]], by_row[rows_y[0]]
    actual = value_x - value_y
    ok = _matches_claimed(actual, claimed.text, claimed.value)
    places = decimal_places(claimed.text)
    reversed_note = "" if actual >= 0 or ok else " (the direction is reversed)"
    return VerificationResult(
        verdict=ACCURATE if ok else INACCURATE,
        claimed=claimed,
        actual=actual,
        statistics={"value_x": value_x, "value_y": value_y, "difference": actual},
        explanation=(
            f"The difference in {spec.measure} is {format_rounded(actual, places)}"
            f"{'' if ok else f', not {claimed.text}'}{reversed_note}."
        ),
        rectification=None if ok else format_rounded(actual, places),
    )


def verify_categorization(slice_: EvidenceSlice, spec: CategorizationFact, dataset: Dataset) -> VerificationResult:
    claimed = Claimed(str(spec.value), spec.value)
    actual = len(slice_.subspace_rows)
    statistics: dict[str, float] = {"intersection": float(actual)}
    for pred in spec.subspace:
        count = sum(
            1 for i in range(dataset.n_rows) if evaluate_predicate(i, pred, dataset)
        )
        statistics[f"count:{pred.chip()}"] = float(count)
    ok = actual == spec.value
    return VerificationResult(
        verdict=ACCURATE if ok else INACCURATE,
        claimed=claimed,
        actual=actual,
        statistics=statistics,
        explanation=(
            f"{actual} rows satisfy all conditions"
            f"{'' if ok else f', not {spec.value}'}."
        ),
        rectification=None if ok else str(actual),
    )


def verify_distribution(
    slice_: EvidenceSlice, spec: DistributionFact, thresholds: Thresholds = DEFAULT_THRESHOLDS
) -> VerificationResult:
    claimed = Claimed(spec.value, spec.value)
    values = _values(slice_, spec.measure)
    if len(values) < 3:
        return _unverifiable("fewer than three values", claimed)
    g1 = skewness(values)
    if g1 is None:
        return _unverifiable("degenerate variance", claimed)
    if g1 >= thresholds.skewness_g1:
        actual = "right-skew distribution"
    elif g1 <= -thresholds.skewness_g1:
        actual = "left-skew distribution"
    else:
        actual = "no pronounced skew"
    claimed_dir = "right-skew distribution" if "right-skew" in spec.value else "left-skew distribution"
    ok = actual == claimed_dir
    return VerificationResult(
        verdict=ACCURATE if ok else INACCURATE,
        claimed=claimed,
        actual=actual,
        statistics={"skewness_g1": g1},
        explanation=f"Skewness g1 = {format_rounded(g1, 3)} shows {actual}.",
        rectification=None if ok or actual == "no pronounced skew" else actual,
    )


def verify_outlier_1d(
    slice_: EvidenceSlice, spec: OutlierFact, thresholds: Thresholds = DEFAULT_THRESHOLDS
) -> VerificationResult:
    claimed = Claimed("outlier", "outlier")
    if len(slice_.focus_rows) != 1:
        return _unverifiable(
            "the focus matches no single entity" if not slice_.focus_rows
            else "the focus matches multiple rows", claimed,
        )
    values = _values(slice_, spec.measure)
    focus_vals = _focus_values(slice_, spec.measure)
    if not focus_vals:
        return _unverifiable(f"no value of {spec.measure} for the focus", claimed)
    if len(values) < 4:
        return _unverifiable("fewer than four values for quartiles", claimed)
    q1, q3 = quartiles(values)
    iqr = q3 - q1
    lower = q1 - thresholds.iqr_k * iqr
    upper = q3 + thresholds.iqr_k * iqr
    focus_value = focus_vals[0]
    flagged = focus_value < lower or focus_value > upper
    return VerificationResult(
        verdict=ACCURATE if flagged else INACCURATE,
        claimed=claimed,
        actual=flagged,
        statistics={
            "q1": q1, "q3": q3, "iqr": iqr,
            "lower_fence": lower, "upper_fence": upper,
            "focus_value": focus_value,
        },
        explanation=(
            f"The focus value {focus_value} {'falls outside' if flagged else 'sits within'} "
            f"the fences [{format_rounded(lower, 3)}, {format_rounded(upper, 3)}]."
        ),
    )


def verify_outlier_2d(
    slice_: EvidenceSlice, spec: OutlierFact, thresholds: Thresholds = DEFAULT_THRESHOLDS
) -> VerificationResult:
    claimed = Claimed("outlier", "outlier")
    if len(slice_.focus_rows) != 1:
        return _unverifiable(
            "the focus matches no single entity" if not slice_.focus_rows
            else "the focus matches multiple rows", claimed,
        )
    x_by_row = dict(slice_.measures[spec.measure])
    y_by_row = dict(slice_.measures[spec.measure_y])
    rows = [i for i in slice_.subspace_rows if i in x_by_row and i in y_by_row]
    focus_row = slice_.focus_rows[0]
    if focus_row not in x_by_row or focus_row not in y_by_row:
        return _unverifiable("missing measure values for the focus", claimed)
    if len(rows) < 5:
        return _unverifiable("fewer than five paired points", claimed)
    points = [(x_by_row[i], y_by_row[i]) for i in rows]
    d2 = mahalanobis_sq(points, (x_by_row[focus_row], y_by_row[focus_row]))
    if d2 is None:
        return _unverifiable("singular covariance matrix", claimed)
    flagged = d2 > thresholds.chi2_2df_975
    return VerificationResult(
        verdict=ACCURATE if flagged else INACCURATE,
        claimed=claimed,
        actual=flagged,
        statistics={"mahalanobis_d2": d2},
        explanation=(
            f"Mahalanobis d^2 = {format_rounded(d2, 3)} is "
            f"{'beyond' if flagged else 'within'} the cutoff {thresholds.chi2_2df_975}."
        ),
    )


# ---------------------------------------------------------------------------
# dispatcher

def verify(
    dataset: Dataset,
    spec: FactSpec,
    thresholds: Thresholds = DEFAULT_THRESHOLDS,
    rank_ascending: bool = False,
) -> VerificationResult:
    """Route a spec to its rule; every retrieval failure becomes Unverifiable."""
    issues = validate_spec(spec, dataset)
    if issues:
        detail = "; ".join(f"{i.code}: {i.detail}" for i in issues)
        return _unverifiable(detail)
    try:
        slice_ = retrieve(dataset, spec)
    except (NoMatchingRowsError, UnknownAttributeError, TypeMismatchError) as exc:
        return _unverifiable(str(exc))

    if isinstance(spec, ValueFact):
        return verify_value(slice_, spec)
    if isinstance(spec, ProportionFact):
        return verify_proportion(slice_, spec)
    if isinstance(spec, TrendFact):
        return verify_trend(slice_, spec)
    if isinstance(spec, ExtremeFact):
        return verify_extreme(slice_, spec)
    if isinstance(spec, RankFact):
        return verify_rank(slice_, spec, ascending=rank_ascending)
    if isinstance(spec, AssociationFact):
        return verify_association(slice_, spec, thresholds)
    if isinstance(spec, DifferenceFact):
        return verify_difference(slice_, spec)
    if isinstance(spec, CategorizationFact):
        return verify_categorization(slice_, spec, dataset)
    if isinstance(spec, DistributionFact):
        return verify_distribution(slice_, spec, thresholds)
    if isinstance(spec, OutlierFact):
        if spec.measure_y is not None:
            return verify_outlier_2d(slice_, spec, thresholds)
        return verify_outlier_1d(slice_, spec, thresholds)
    raise ClaimCheckError(f"no rule for {type(spec).__name__}")


# ---------------------------------------------------------------------------
# rectification

_NUMBER_WORD_BY_VALUE = {
    0: "zero", 1: "one", 2: "two", 3: "three", 4: "four", 5: "five",
    6: "six", 7: "seven", 8: "eight", 9: "nine", 10: "ten",
    11: "eleven", 12: "twelve", 13: "thirteen", 14: "fourteen", 15: "fifteen",
    16: "sixteen", 17: "seventeen", 18: "eighteen", 19: "nineteen", 20: "twenty",
}


def _claimed_token_candidates(result: VerificationResult) -> list[str]:
    claimed = result.claimed
    if claimed is None:
        return []
    candidates = [claimed.text]
    if isinstance(claimed.value, int):
        candidates.append(ordinal(claimed.value))
        word = _NUMBER_WORD_BY_VALUE.get(claimed.value)
        if word:
            candidates.append(word)
    # longest first, so "4" cannot clobber the inside of "4th"
    return sorted(candidates, key=len, reverse=True)


def rectify(claim_text: str, result: VerificationResult) -> str:
    """Substitute the computed value for the claimed literal in the claim text.

    A no-op when the result carries no rectification or the claimed literal
    cannot be located (the caller can compare for equality to detect that).
    """
    if result.verdict != INACCURATE or result.rectification is None:
        return claim_text
    for token in _claimed_token_candidates(result):
        idx = claim_text.find(token)
        if idx >= 0:
            return claim_text[:idx] + result.rectification + claim_text[idx + len(token):]
    return claim_text

"""Template-based corpora: generate (claim, truth spec, intended verdict)
triples from a dataset, and score parser backends with complete/partial
spec matching.

Generation draws every slot from the dataset, computes the true value with
the verdict engine, and re-verifies each entry at generation time, so a
corpus is sound by construction. Inaccurate entries are accurate ones with
the claimed value perturbed until re-verification flips.
"""
from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass

from .dataset import Dataset, fold_name
from .errors import CannotPerturbError, ClaimCheckError, UnsupportedTypeError
from .factspec import (
    AssociationFact,
    CategorizationFact,
    DifferenceFact,
    DistributionFact,
    ExtremeFact,
    FACT_TYPES,
    FactSpec,
    FilterPredicate,
    Literal,
    OutlierFact,
    ProportionFact,
    RankFact,
    TrendFact,
    ValueFact,
    parse_spec_json,
    serialize_spec,
)
from .grammar import TemplateGrammar, default_grammar, parse_filter_phrases
from .parsing import filter_literal
from .values import decimal_places, ordinal
from .veracity import (
    ACCURATE,
    DEFAULT_THRESHOLDS,
    INACCURATE,
    Thresholds,
    format_rounded,
    verify,
)

CORPUS_FORMAT = "claimcheck-corpus-v1"

_SUBTYPE_CYCLES = {
    "value": ("value_mean", "value_median", "value_sum"),
    "outlier": ("outlier_1d", "outlier_2d"),
}

_ATTEMPTS = 300


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    fact_type: str
    subtype: str
    claim_text: str
    truth_spec: FactSpec
    intended_verdict: str
    seed: int


@dataclass(frozen=True)
class MatchResult:
    complete: bool
    partial: float
    mismatched_fields: tuple[str, ...]


# ---------------------------------------------------------------------------
# spec matching

def _canon_literal(lit: Literal):
    n = lit.as_number()
    if n is not None:
        return ("num", float(n))
    d = lit.as_date()
    if d is not None:
        return ("date", d.isoformat())
    return ("text", lit.text.strip().lower())


def _canon_pred(pred: FilterPredicate):
    return (fold_name(pred.attribute), pred.op, _canon_literal(pred.literal))


def _canon_value(field: str, value):
    if isinstance(value, Literal):
        return _canon_literal(value)
    if isinstance(value, str) and field in ("measure", "measure_x", "measure_y", "identifier_key"):
        return fold_name(value)
    return value


def _fields_of(spec: FactSpec) -> dict:
    if isinstance(spec, ValueFact):
        return {"measure": spec.measure, "value": spec.value, "aggregation": spec.aggregation,
                "subspace": spec.subspace, "identifier_key": spec.identifier_key}
    if isinstance(spec, ProportionFact):
        return {"measure": spec.measure, "value": spec.value, "focus": spec.focus,
                "subspace": spec.subspace, "identifier_key": spec.identifier_key}
    if isinstance(spec, TrendFact):
        return {"measure": spec.measure, "value": spec.value, "subspace": spec.subspace}
    if isinstance(spec, ExtremeFact):
        return {"measure": spec.measure, "value": spec.value, "focus": spec.focus,
                "subspace": spec.subspace, "identifier_key": spec.identifier_key}
    if isinstance(spec, RankFact):
        return {"measure": spec.measure, "value": spec.value, "focus": spec.focus,
                "subspace": spec.subspace, "identifier_key": spec.identifier_key}
    if isinstance(spec, AssociationFact):
        return {"measure_x": spec.measure_x, "measure_y": spec.measure_y, "value": spec.value,
                "identifier_key": spec.identifier_key, "subspace": spec.subspace or ()}
    if isinstance(spec, DifferenceFact):
        return {"measure": spec.measure, "value": spec.value, "focus_x": spec.focus_x,
                "focus_y": spec.focus_y, "subspace": spec.subspace}
    if isinstance(spec, CategorizationFact):
        return {"value": spec.value, "subspace": spec.subspace,
                "identifier_key": spec.identifier_key}
    if isinstance(spec, DistributionFact):
        return {"measure": spec.measure, "value": spec.value,
                "identifier_key": spec.identifier_key, "subspace": spec.subspace or ()}
    if isinstance(spec, OutlierFact):
        fields = {"measure": spec.measure, "focus": spec.focus, "subspace": spec.subspace,
                  "identifier_key": spec.identifier_key}
        if spec.measure_y is not None:
            fields["measure_y"] = spec.measure_y
        return fields
    raise ClaimCheckError(f"not a FactSpec: {spec!r}")


def match_specs(predicted: FactSpec | None, truth: FactSpec) -> MatchResult:
    """Complete/partial field agreement; filter lists compare as sets, with
    fractional credit for partially recovered subspaces."""
    truth_fields = _fields_of(truth)
    if predicted is None or type(predicted) is not type(truth) \
            or getattr(predicted, "subtype", None) != getattr(truth, "subtype", None):
        return MatchResult(False, 0.0, tuple(truth_fields))
    predicted_fields = _fields_of(predicted)

    credit = 0.0
    mismatched = []
    for name, truth_value in truth_fields.items():
        predicted_value = predicted_fields.get(name)
        if isinstance(truth_value, tuple) and all(isinstance(p, FilterPredicate) for p in truth_value):
            truth_set = {_canon_pred(p) for p in truth_value}
            pred_set = {_canon_pred(p) for p in (predicted_value or ())}
            if truth_set == pred_set:
                credit += 1.0
            else:
                mismatched.append(name)
                if truth_set:
                    credit += len(truth_set & pred_set) / len(truth_set)
        elif isinstance(truth_value, FilterPredicate):
            if isinstance(predicted_value, FilterPredicate) \
                    and _canon_pred(predicted_value) == _canon_pred(truth_value):
                credit += 1.0
            else:
                mismatched.append(name)
        else:
            if _canon_value(name, predicted_value) == _canon_value(name, truth_value):
                credit += 1.0
            else:
                mismatched.append(name)

    partial = credit / len(truth_fields)
    complete = not mismatched
    return MatchResult(complete, 1.0 if complete else partial, tuple(mismatched))


# ---------------------------------------------------------------------------
# generation

_RENDERABLE_ATTR = re.compile(r"^[A-Za-z][A-Za-z0-9_'/\- ]*$")
_RENDERABLE_VALUE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9_'./\- ]*$")
_FORBIDDEN_IN_VALUE = (" and ", " while ", " whereas ", ";", ",")


def _numeric_columns(dataset: Dataset) -> list[str]:
    return [
        c.name for c in dataset.columns
        if c.kind == "numeric" and _RENDERABLE_ATTR.match(c.name)
    ]


def _categorical_columns(dataset: Dataset) -> list[str]:
    return [
        c.name for c in dataset.columns
        if c.kind == "categorical" and _RENDERABLE_ATTR.match(c.name)
    ]


def _renderable_value(text: str) -> bool:
    if not _RENDERABLE_VALUE.match(text):
        return False
    low = f" {text.lower()} "
    return not any(tok in low or tok in text for tok in _FORBIDDEN_IN_VALUE)


def _distinct_values(dataset: Dataset, column: str) -> list[str]:
    j = dataset.column_index(column)
    seen = []
    for i in range(dataset.n_rows):
        if dataset.is_missing_at(i, j):
            continue
        cell = dataset.cell(i, j)
        if cell not in seen and _renderable_value(cell):
            seen.append(cell)
    return seen


def _entity_candidates(dataset: Dataset) -> list[tuple[str, str]]:
    """(column, value) pairs that resolve to exactly one row of one column."""
    from .parsing import resolve_term

    out = []
    for column in _categorical_columns(dataset):
        j = dataset.column_index(column)
        counts: dict[str, int] = {}
        for i in range(dataset.n_rows):
            if not dataset.is_missing_at(i, j):
                key = dataset.cell(i, j).strip().lower()
                counts[key] = counts.get(key, 0) + 1
        for value in _distinct_values(dataset, column):
            if counts.get(value.strip().lower()) != 1:
                continue
            if len(resolve_term(dataset, value)) == 1:
                out.append((column, value))
    return out


_OP_PHRASES = {
    "=": "{attr} is {value}",
    "!=": "{attr} is not {value}",
    ">": "{attr} is over {value}",
    ">=": "{attr} is at least {value}",
    "<": "{attr} is under {value}",
    "<=": "{attr} is at most {value}",
}


def _render_filters(preds) -> str:
    phrases = []
    for pred in preds:
        phrases.append(_OP_PHRASES[pred.op].format(attr=pred.attribute, value=pred.literal.text))
    return " and ".join(phrases)


def _sample_predicate(rng: random.Random, dataset: Dataset) -> FilterPredicate | None:
    if rng.random() < 0.5:
        columns = _categorical_columns(dataset)
        if not columns:
            return None
        column = rng.choice(columns)
        values = _distinct_values(dataset, column)
        if not values:
            return None
        pred = FilterPredicate(column, "=", Literal.of_text(rng.choice(values)))
    else:
        columns = _numeric_columns(dataset)
        if not columns:
            return None
        column = rng.choice(columns)
        j = dataset.column_index(column)
        values = sorted(
            {dataset.number_at(i, j) for i in range(dataset.n_rows)
             if dataset.number_at(i, j) is not None}
        )
        if len(values) < 3:
            return None
        cut = rng.choice(values[1:-1])
        op = rng.choice([">", ">=", "<", "<="])
        pred = FilterPredicate(column, op, Literal.of_number(cut))
    # the rendered phrase must parse back to the same predicate
    raws = parse_filter_phrases(_render_filters([pred]))
    if len(raws) != 1 or raws[0].attribute is None:
        return None
    back = FilterPredicate(raws[0].attribute, raws[0].op, filter_literal(raws[0].literal_text))
    if _canon_pred(back) != _canon_pred(pred):
        return None
    return pred


def _sample_subspace(rng: random.Random, dataset: Dataset) -> tuple[FilterPredicate, ...]:
    if rng.random() < 0.45:
        return ()
    preds = []
    for _ in range(rng.choice([1, 1, 2])):
        pred = _sample_predicate(rng, dataset)
        if pred is not None and all(_canon_pred(pred) != _canon_pred(p) for p in preds):
            preds.append(pred)
    return tuple(preds)


class _Generator:
    def __init__(self, dataset: Dataset, grammar: TemplateGrammar, rng: random.Random,
                 thresholds: Thresholds):
        self.dataset = dataset
        self.grammar = grammar
        self.rng = rng
        self.thresholds = thresholds
        self.entities = _entity_candidates(dataset)

    def pick_template(self, subtype: str, with_subspace: bool):
        options = [
            t for t in self.grammar.generatable(subtype)
            if ("SUBSPACE" in dict(t.slots)) == with_subspace
        ]
        if not options:
            options = self.grammar.generatable(subtype)
            if not options:
                raise UnsupportedTypeError(subtype, "no generatable template")
        return self.rng.choice(options)

    def verified(self, spec: FactSpec) -> tuple[str, object]:
        result = verify(self.dataset, spec, self.thresholds)
        return result.verdict, result.actual

    def make_accurate(self, subtype: str):
        """Returns (spec, slots, template) verdict-checked accurate, or None."""
        rng, dataset = self.rng, self.dataset
        subspace = _sample_subspace(rng, dataset)
        template = self.pick_template(subtype, with_subspace=bool(subspace))
        slot_kinds = dict(template.slots)
        if "SUBSPACE" in slot_kinds and not subspace:
            return None
        if "SUBSPACE" not in slot_kinds:
            subspace = ()
        slots = {"IDKEY": dataset.name}
        if subspace:
            slots["SUBSPACE"] = _render_filters(subspace)

        numeric = _numeric_columns(dataset)
        if not numeric:
            raise UnsupportedTypeError(subtype, "no numeric measure column")

        if subtype.startswith("value_"):
            measure = rng.choice(numeric)
            agg = {"value_mean": "average", "value_median": "median", "value_sum": "sum"}[subtype]
            probe = ValueFact(measure, Literal.of_number(0), agg, subspace, dataset.name)
            verdict, actual = self.verified(probe)
            if actual is None:
                return None
            places = rng.choice([0, 1, 2])
            claimed = format_rounded(actual, places)
            spec = ValueFact(measure, Literal(claimed, quoted=False), agg, subspace, dataset.name)
            slots.update(MEASURE=measure, VALUE=claimed)
            return spec, slots, template

        if subtype == "proportion":
            measure = rng.choice(numeric)
            focus_pred = _sample_predicate(rng, dataset)
            if focus_pred is None:
                return None
            probe = ProportionFact(measure, Literal.of_text("0%"), (focus_pred,), subspace, dataset.name)
            verdict, actual = self.verified(probe)
            if actual is None:
                return None
            claimed = format_rounded(actual, rng.choice([0, 1])) + "%"
            spec = ProportionFact(measure, Literal.of_text(claimed), (focus_pred,), subspace, dataset.name)
            slots.update(MEASURE=measure, VALUE=claimed, FOCUS=_render_filters([focus_pred]))
            return spec, slots, template

        if subtype == "trend":
            temporal = dataset.temporal_columns()
            if len(temporal) != 1:
                raise UnsupportedTypeError(subtype, "needs exactly one temporal column")
            date_col = temporal[0].name
            j = dataset.column_index(date_col)
            days = sorted({dataset.date_at(i, j) for i in range(dataset.n_rows)
                           if dataset.date_at(i, j) is not None})
            if len(days) < 2:
                return None
            a, b = sorted(rng.sample(range(len(days)), 2))
            start, end = days[a].isoformat(), days[b].isoformat()
            measure = rng.choice(numeric)
            window = (
                FilterPredicate(date_col, ">=", Literal.of_text(start)),
                FilterPredicate(date_col, "<=", Literal.of_text(end)),
            )
            probe = TrendFact(measure, "increase", window + subspace)
            verdict, actual = self.verified(probe)
            if actual not in ("increase", "decrease"):
                return None
            spec = TrendFact(measure, actual, window + subspace)
            article = "an" if actual == "increase" else "a"
            slots.update(MEASURE=measure, VALUE=f"{article} {actual}", START=start, END=end)
            return spec, slots, template

        if subtype in ("extreme", "rank", "outlier_1d", "outlier_2d", "difference"):
            return self._entity_subtype(subtype, template, slots, subspace, numeric)

        if subtype == "association":
            if len(numeric) < 2:
                raise UnsupportedTypeError(subtype, "needs two numeric measures")
            mx, my = rng.sample(numeric, 2)
            probe = AssociationFact(mx, my, "positive", dataset.name,
                                    subspace if subspace else None)
            verdict, actual = self.verified(probe)
            if actual not in ("positive", "negative"):
                return None
            spec = AssociationFact(mx, my, actual, dataset.name, subspace if subspace else None)
            slots.update(MEASURE_X=mx, MEASURE_Y=my, VALUE=actual)
            return spec, slots, template

        if subtype == "categorization":
            if not subspace:
                return None
            probe = CategorizationFact(0, subspace, dataset.name)
            verdict, actual = self.verified(probe)
            spec = CategorizationFact(int(actual), subspace, dataset.name)
            slots.update(VALUE=str(int(actual)))
            return spec, slots, template

        if subtype == "distribution":
            measure = rng.choice(numeric)
            probe = DistributionFact(measure, "right-skew distribution", dataset.name,
                                     subspace if subspace else None)
            verdict, actual = self.verified(probe)
            if actual not in ("right-skew distribution", "left-skew distribution"):
                return None
            spec = DistributionFact(measure, actual, dataset.name, subspace if subspace else None)
            slots.update(MEASURE=measure, VALUE=actual.split("-")[0])
            return spec, slots, template

        raise UnsupportedTypeError(subtype, "unknown subtype")

    def _entity_subtype(self, subtype, template, slots, subspace, numeric):
        rng, dataset = self.rng, self.dataset
        measure = rng.choice(numeric)
        entities = [e for e in self.entities]
        rng.shuffle(entities)

        if subtype == "difference":
            pool = entities[:12]
            for (cx, vx) in pool:
                for (cy, vy) in pool:
                    if (cx, vx) == (cy, vy):
                        continue
                    fx = FilterPredicate(cx, "=", Literal.of_text(vx))
                    fy = FilterPredicate(cy, "=", Literal.of_text(vy))
                    probe = DifferenceFact(measure, Literal.of_number(0), fx, fy, subspace)
                    verdict, actual = self.verified(probe)
                    if actual is None:
                        continue
                    claimed = format_rounded(actual, rng.choice([0, 1]))
                    spec = DifferenceFact(measure, Literal(claimed, quoted=False), fx, fy, subspace)
                    slots.update(MEASURE=measure, VALUE=claimed, FOCUS_X=vx, FOCUS_Y=vy)
                    return spec, slots, template
            return None

        for column, value in entities:
            focus = FilterPredicate(column, "=", Literal.of_text(value))
            if subtype == "extreme":
                probe = ExtremeFact(measure, "max", (focus,), subspace, dataset.name)
                verdict, actual = self.verified(probe)
                if actual not in ("max", "min"):
                    continue
                spec = ExtremeFact(measure, actual, (focus,), subspace, dataset.name)
                word = rng.choice(("highest", "largest") if actual == "max" else ("lowest", "smallest"))
                slots.update(MEASURE=measure, VALUE=word, FOCUSENT=value)
                return spec, slots, template
            if subtype == "rank":
                probe = RankFact(measure, 1, (focus,), subspace, dataset.name)
                verdict, actual = self.verified(probe)
                if actual is None:
                    continue
                spec = RankFact(measure, int(actual), (focus,), subspace, dataset.name)
                slots.update(MEASURE=measure, VALUE=ordinal(int(actual)), FOCUSENT=value)
                return spec, slots, template
            if subtype == "outlier_1d":
                probe = OutlierFact(measure, focus, subspace, dataset.name)
                verdict, actual = self.verified(probe)
                if actual is not True:
                    continue
                slots.update(MEASURE=measure, FOCUSENT=value)
                return probe, slots, template
            if subtype == "outlier_2d":
                others = [m for m in numeric if m != measure]
                if not others:
                    raise UnsupportedTypeError(subtype, "needs two numeric measures")
                measure_y = rng.choice(others)
                probe = OutlierFact(measure, focus, subspace, dataset.name, measure_y=measure_y)
                verdict, actual = self.verified(probe)
                if actual is not True:
                    continue
                slots.update(MEASURE=measure, MEASURE_Y=measure_y, FOCUSENT=value)
                return probe, slots, template
        return None


def perturb_spec(spec: FactSpec, dataset: Dataset, seed: int,
                 thresholds: Thresholds = DEFAULT_THRESHOLDS) -> FactSpec:
    """Replace the claimed value so re-verification yields Inaccurate.

    Numeric claims shift by 10-50 percent and re-round; ranks and counts move
    by a small step; directions, extremes, and skews flip; outlier claims move
    the focus to a non-flagged entity.
    """
    rng = random.Random(seed)

    def flipped(build):
        for _ in range(60):
            candidate = build()
            if candidate is None:
                continue
            if verify(dataset, candidate, thresholds).verdict == INACCURATE:
                return candidate
        raise CannotPerturbError(f"cannot falsify {type(spec).__name__}")

    if isinstance(spec, (ValueFact, DifferenceFact)):
        places = decimal_places(spec.value.text)
        base = spec.value.as_number() or 1.0

        def build():
            shift = 1.0 + rng.uniform(0.1, 0.5) * rng.choice([-1, 1])
            new = base * shift if base != 0 else rng.uniform(0.5, 5.0)
            text = format_rounded(new, places)
            if text == spec.value.text:
                return None
            lit = Literal(text, quoted=False)
            if isinstance(spec, ValueFact):
                return ValueFact(spec.measure, lit, spec.aggregation, spec.subspace, spec.identifier_key)
            return DifferenceFact(spec.measure, lit, spec.focus_x, spec.focus_y, spec.subspace)

        return flipped(build)

    if isinstance(spec, ProportionFact):
        places = decimal_places(spec.value.text)
        base = spec.value.as_number() or 0.0

        def build():
            shift = rng.uniform(0.1, 0.5) * rng.choice([-1, 1]) * max(base, 10.0)
            new = min(100.0, max(0.0, base + shift))
            text = format_rounded(new, places) + "%"
            if text == spec.value.text:
                return None
            return ProportionFact(spec.measure, Literal.of_text(text), spec.focus,
                                  spec.subspace, spec.identifier_key)

        return flipped(build)

    if isinstance(spec, RankFact):
        def build():
            step = rng.choice([-3, -2, -1, 1, 2, 3])
            new = max(1, spec.value + step)
            if new == spec.value:
                return None
            return RankFact(spec.measure, new, spec.focus, spec.subspace, spec.identifier_key)

        return flipped(build)

    if isinstance(spec, CategorizationFact):
        def build():
            step = rng.choice([-3, -2, -1, 1, 2, 3])
            new = max(0, spec.value + step)
            if new == spec.value:
                return None
            return CategorizationFact(new, spec.subspace, spec.identifier_key)

        return flipped(build)

    if isinstance(spec, TrendFact):
        other = "decrease" if spec.value == "increase" else "increase"
        return flipped(lambda: TrendFact(spec.measure, other, spec.subspace))

    if isinstance(spec, ExtremeFact):
        other = "min" if spec.value == "max" else "max"
        return flipped(lambda: ExtremeFact(spec.measure, other, spec.focus,
                                           spec.subspace, spec.identifier_key))

    if isinstance(spec, AssociationFact):
        other = "negative" if spec.value == "positive" else "positive"
        return flipped(lambda: AssociationFact(spec.measure_x, spec.measure_y, other,
                                               spec.identifier_key, spec.subspace))

    if isinstance(spec, DistributionFact):
        other = ("left-skew distribution" if spec.value.startswith("right")
                 else "right-skew distribution")
        return flipped(lambda: DistributionFact(spec.measure, other,
                                                spec.identifier_key, spec.subspace))

    if isinstance(spec, OutlierFact):
        candidates = _entity_candidates(dataset)
        rng.shuffle(candidates)
        for column, value in candidates:
            focus = FilterPredicate(column, "=", Literal.of_text(value))
            candidate = OutlierFact(spec.measure, focus, spec.subspace,
                                    spec.identifier_key, measure_y=spec.measure_y)
            if verify(dataset, candidate, thresholds).verdict == INACCURATE:
                return candidate
        raise CannotPerturbError("no non-outlier focus available")

    raise CannotPerturbError(f"no perturbation for {type(spec).__name__}")


def _mmx_word_fix(spec: FactSpec, slots: dict) -> dict:
    # flipped extreme claims must also flip the rendered word
    if isinstance(spec, ExtremeFact):
        word = "highest" if spec.value == "max" else "lowest"
        slots = dict(slots, VALUE=word)
    return slots


def _slots_for(spec: FactSpec, slots: dict) -> dict:
    """Refresh rendered slots whose value is the claimed literal."""
    slots = dict(slots)
    if isinstance(spec, (ValueFact, DifferenceFact)):
        slots["VALUE"] = spec.value.text
    elif isinstance(spec, ProportionFact):
        slots["VALUE"] = spec.value.text
    elif isinstance(spec, RankFact):
        slots["VALUE"] = ordinal(spec.value)
    elif isinstance(spec, CategorizationFact):
        slots["VALUE"] = str(spec.value)
    elif isinstance(spec, TrendFact):
        slots["VALUE"] = ("an " if spec.value == "increase" else "a ") + spec.value
    elif isinstance(spec, AssociationFact):
        slots["VALUE"] = spec.value
    elif isinstance(spec, DistributionFact):
        slots["VALUE"] = spec.value.split("-")[0]
    elif isinstance(spec, OutlierFact):
        focus_value = spec.focus.literal.text
        slots["FOCUSENT"] = focus_value
    return _mmx_word_fix(spec, slots)


def generate_corpus(
    dataset: Dataset,
    per_type: int,
    seed: int,
    grammar: TemplateGrammar | None = None,
    thresholds: Thresholds = DEFAULT_THRESHOLDS,
) -> list[CorpusEntry]:
    """per_type entries for each of the 10 fact types, alternating accurate
    and perturbed-inaccurate (odd counts lean accurate), deterministic under
    the seed. Every entry re-verifies to its intended verdict."""
    from .parsing import TemplateBackend

    grammar = grammar or default_grammar()
    backend = TemplateBackend(grammar=grammar)
    rng = random.Random(seed)
    gen = _Generator(dataset, grammar, rng, thresholds)
    entries = []
    for fact_type in FACT_TYPES:
        cycle = _SUBTYPE_CYCLES.get(fact_type, (fact_type,))
        for k in range(per_type):
            subtype = cycle[k % len(cycle)]
            intended = ACCURATE if k % 2 == 0 else INACCURATE
            entry = None
            for _ in range(_ATTEMPTS):
                made = gen.make_accurate(subtype)
                if made is None:
                    continue
                spec, slots, template = made
                if verify(dataset, spec, thresholds).verdict != ACCURATE:
                    continue
                if intended == INACCURATE:
                    try:
                        spec = perturb_spec(spec, dataset, rng.randrange(1 << 30), thresholds)
                    except CannotPerturbError:
                        continue
                    slots = _slots_for(spec, slots)
                text = grammar.render(template, slots)
                try:  # grammar closure guard: the rendered claim must parse back
                    parsed = backend.to_spec(text, dataset)
                except Exception:
                    continue
                if not match_specs(parsed, spec).complete:
                    continue
                if verify(dataset, spec, thresholds).verdict != intended:
                    continue
                entry = CorpusEntry(
                    id=f"{subtype}-{k:03d}",
                    fact_type=fact_type,
                    subtype=subtype,
                    claim_text=text,
                    truth_spec=spec,
                    intended_verdict=intended,
                    seed=seed,
                )
                break
            if entry is None:
                raise UnsupportedTypeError(fact_type, f"no viable {subtype} entry after {_ATTEMPTS} tries")
            entries.append(entry)
    return entries


# ---------------------------------------------------------------------------
# corpus file I/O (JSON lines with a header record)

def write_corpus(entries: list[CorpusEntry], path: str, dataset_name: str,
                 per_type: int, seed: int) -> None:
    header = {
        "format": CORPUS_FORMAT,
        "dataset": dataset_name,
        "per_type": per_type,
        "seed": seed,
        "subtypes": sorted({e.subtype for e in entries}),
        "entries": len(entries),
    }
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(header, sort_keys=True) + "\n")
        for e in entries:
            fh.write(json.dumps({
                "id": e.id,
                "fact_type": e.fact_type,
                "subtype": e.subtype,
                "claim_text": e.claim_text,
                "spec": serialize_spec(e.truth_spec),
                "intended_verdict": e.intended_verdict,
                "seed": e.seed,
            }, sort_keys=True) + "\n")


def read_corpus(path: str) -> tuple[dict, list[CorpusEntry]]:
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ClaimCheckError("empty corpus file")
    header = json.loads(lines[0])
    if header.get("format") != CORPUS_FORMAT:
        raise ClaimCheckError(f"not a {CORPUS_FORMAT} file")
    entries = []
    for line in lines[1:]:
        if not line.strip():
            continue
        raw = json.loads(line)
        entries.append(CorpusEntry(
            id=raw["id"],
            fact_type=raw["fact_type"],
            subtype=raw["subtype"],
            claim_text=raw["claim_text"],
            truth_spec=parse_spec_json(raw["spec"]),
            intended_verdict=raw["intended_verdict"],
            seed=int(raw.get("seed", 0)),
        ))
    return header, entries


# ---------------------------------------------------------------------------
# parser evaluation

def eval_parser(backend, entries: list[CorpusEntry], dataset: Dataset) -> dict:
    """Per-type classification accuracy and complete/partial match rates,
    with per-entry diagnostics for anything short of a complete match."""
    per_type: dict[str, dict] = {}
    diagnostics = []
    for entry in entries:
        bucket = per_type.setdefault(entry.fact_type, {
            "n": 0, "classified": 0, "complete": 0, "partial_sum": 0.0,
        })
        bucket["n"] += 1
        try:
            predicted_type = backend.classify_fact_type(entry.claim_text)
        except ClaimCheckError:
            predicted_type = None
        if predicted_type == entry.fact_type:
            bucket["classified"] += 1
        try:
            predicted = backend.to_spec(entry.claim_text, dataset)
        except ClaimCheckError:
            predicted = None
        match = match_specs(predicted, entry.truth_spec)
        bucket["complete"] += int(match.complete)
        bucket["partial_sum"] += match.partial
        if not match.complete or predicted_type != entry.fact_type:
            diagnostics.append({
                "id": entry.id,
                "predicted_type": predicted_type,
                "mismatched_fields": list(match.mismatched_fields),
            })

    table = {}
    for fact_type, b in sorted(per_type.items()):
        table[fact_type] = {
            "n": b["n"],
            "classification_accuracy": b["classified"] / b["n"],
            "complete_rate": b["complete"] / b["n"],
            "partial_mean": b["partial_sum"] / b["n"],
        }
    total = sum(b["n"] for b in per_type.values())
    overall = {
        "n": total,
        "classification_accuracy": sum(b["classified"] for b in per_type.values()) / total,
        "complete_rate": sum(b["complete"] for b in per_type.values()) / total,
        "partial_mean": sum(b["partial_sum"] for b in per_type.values()) / total,
    }
    return {"per_type": table, "overall": overall, "diagnostics": diagnostics}

"""Claim detection and transformation into fact specifications.

Two backends honor the same contract: a deterministic one driven by the
template grammar, and an HTTP client for an external language model. The
deterministic backend only claims competence on grammar-shaped text; anything
else raises NoTemplateMatchError and ends up unverifiable downstream.
"""
from __future__ import annotations

import json
import os
import re
import threading
import time
from dataclasses import dataclass, field

import httpx

from .dataset import Dataset
from .errors import (
    LiteralParseError,
    LLMBackendError,
    NoTemplateMatchError,
    SpecParseError,
    UnresolvedAttributeError,
)
from .factspec import (
    AssociationFact,
    CategorizationFact,
    DifferenceFact,
    DistributionFact,
    ExtremeFact,
    FactSpec,
    FilterPredicate,
    Literal,
    OutlierFact,
    ProportionFact,
    RankFact,
    TrendFact,
    ValueFact,
    parse_spec_json,
)
from .grammar import RawFilter, Template, TemplateGrammar, default_grammar, parse_filter_phrases
from .values import parse_count, parse_date, parse_number, parse_ordinal, parse_quantity

SINGLE = "single"
COMPOUND = "compound"

_MMX_MAP = {
    "highest": "max", "largest": "max", "greatest": "max",
    "lowest": "min", "smallest": "min", "fewest": "min",
}


@dataclass
class Diagnostic:
    stage: str
    message: str


@dataclass
class ClaimRecord:
    """Carrier for one detected claim flowing through the pipeline."""
    id: str
    text: str
    char_span: tuple[int, int]
    spec: FactSpec | None = None
    fact_type: str | None = None
    verdict: str | None = None
    diagnostics: list[Diagnostic] = field(default_factory=list)


def split_sentences(document: str) -> list[tuple[int, int]]:
    """Sentence spans split on ./!/? followed by whitespace, ignoring quoted spans."""
    spans = []
    start = 0
    in_quote = False
    n = len(document)
    i = 0
    while i < n:
        ch = document[i]
        if ch == '"':
            in_quote = not in_quote
        elif ch in ".!?" and not in_quote:
            nxt = document[i + 1] if i + 1 < n else " "
            if nxt.isspace():
                segment = document[start:i + 1]
                if segment.strip():
                    lead = len(segment) - len(segment.lstrip())
                    spans.append((start + lead, i + 1))
                start = i + 1
        i += 1
    tail = document[start:]
    if tail.strip():
        lead = len(tail) - len(tail.lstrip())
        spans.append((start + lead, n))
    return spans


def filter_literal(surface: str) -> Literal:
    """Canonical literal for a filter phrase value: dates stay textual,
    numerics normalize ('300 million' -> 300000000), everything else is text."""
    if parse_date(surface) is not None:
        return Literal.of_text(surface)
    quantity = parse_quantity(surface)
    if quantity is not None:
        return Literal.of_number(quantity)
    return Literal.of_text(surface)


def resolve_term(dataset: Dataset, term: str) -> list[tuple[str, Literal]]:
    """Columns whose values contain the bare term, with the matching literal."""
    hits = []
    low = term.strip().lower()
    num = parse_number(term)
    day = parse_date(term)
    for j, col in enumerate(dataset.columns):
        if col.kind == "categorical":
            if any(
                not dataset.is_missing_at(i, j) and dataset.cell(i, j).strip().lower() == low
                for i in range(dataset.n_rows)
            ):
                hits.append((col.name, Literal.of_text(term)))
        elif col.kind == "numeric" and num is not None:
            if any(dataset.number_at(i, j) == num for i in range(dataset.n_rows)):
                hits.append((col.name, Literal.of_number(num)))
        elif col.kind == "temporal" and day is not None:
            if any(dataset.date_at(i, j) == day for i in range(dataset.n_rows)):
                hits.append((col.name, Literal.of_text(term)))
    return hits


_BOUNDARY_RE = re.compile(r";\s*|\s+(?:and|while|whereas)\s+|,\s+")
_MAX_SPLIT_DEPTH = 4


class TemplateBackend:
    """Deterministic parser over the shared template grammar.

    The coreference/ellipsis hooks default to identity; a substitution map
    {surface term -> replacement} may be installed for document-scoped
    resolution without guessing any further algorithm.
    """

    name = "template"

    def __init__(
        self,
        grammar: TemplateGrammar | None = None,
        coreference_map: dict[str, str] | None = None,
        ellipsis_suffix: str | None = None,
    ):
        self.grammar = grammar or default_grammar()
        self.coreference_map = dict(coreference_map or {})
        self.ellipsis_suffix = ellipsis_suffix

    # -- S1: claim detection ------------------------------------------------

    def detect_claims(self, document: str) -> list[ClaimRecord]:
        records = []
        for k, (start, end) in enumerate(split_sentences(document)):
            sentence = document[start:end]
            kept, _ = self._segments(sentence)
            if kept:
                records.append(ClaimRecord(id=f"c{k}", text=sentence, char_span=(start, end)))
        return records

    # -- S2/S3: compound classification and decomposition --------------------

    def classify_compound(self, sentence: str) -> str:
        kept, _ = self._segments(sentence)
        return COMPOUND if len(kept) >= 2 else SINGLE

    def decompose(self, sentence: str) -> tuple[list[str], list[Diagnostic]]:
        kept, dropped = self._segments(sentence)
        if not kept:
            return [], [Diagnostic("decompose", f"no template match: {sentence.strip()!r}")]
        facts = [frag for _, frag in kept]
        diagnostics = [
            Diagnostic("decompose", f"fragment has no template match: {frag.strip()!r}")
            for frag in dropped
        ]
        return facts, diagnostics

    def decompose_with_offsets(self, sentence: str) -> list[tuple[int, str]]:
        kept, _ = self._segments(sentence)
        return kept

    def _segments(self, text: str, depth: int = 0) -> tuple[list[tuple[int, str]], list[str]]:
        """Best reading of a sentence: matched fragments with offsets, plus
        dropped non-matching fragments. A split into two or more matching
        fragments beats a whole-sentence match (compound beats accidental
        swallow); otherwise the whole match wins."""
        whole = self.grammar.matches(text)
        best: tuple[list[tuple[int, str]], list[str]] | None = None
        if depth < _MAX_SPLIT_DEPTH:
            for m in _BOUNDARY_RE.finditer(text):
                left, right = text[:m.start()], text[m.end():]
                if not left.strip() or not right.strip():
                    continue
                kl, dl = self._segments(left, depth + 1)
                kr, dr = self._segments(right, depth + 1)
                kr = [(off + m.end(), frag) for off, frag in kr]
                cand = (kl + kr, dl + dr)
                if best is None or len(cand[0]) > len(best[0]):
                    best = cand
        if best and len(best[0]) >= 2:
            return best
        if whole:
            return [(0, text)], []
        if best and best[0]:
            return best
        return [], [text]

    # -- S4/S5: hooks ---------------------------------------------------------

    def resolve_coreference(self, fact: str) -> str:
        out = fact
        for term, replacement in self.coreference_map.items():
            out = re.sub(rf"\b{re.escape(term)}\b", replacement, out)
        return out

    def resolve_ellipsis(self, fact: str) -> str:
        return fact

    # -- S6: fact type classification -----------------------------------------

    def classify_fact_type(self, fact: str) -> str:
        hit = self.grammar.match(fact)
        if hit is None:
            raise NoTemplateMatchError(fact.strip())
        return hit[0].fact_type

    def classify_subtype(self, fact: str) -> str:
        hit = self.grammar.match(fact)
        if hit is None:
            raise NoTemplateMatchError(fact.strip())
        return hit[0].subtype

    # -- S7: spec transformation -----------------------------------------------

    def to_spec(self, fact: str, dataset: Dataset) -> FactSpec:
        hit = self.grammar.match(fact)
        if hit is None:
            raise NoTemplateMatchError(fact.strip())
        template, slots = hit
        return _bind_spec(template, slots, dataset)


# ---------------------------------------------------------------------------
# slot binding

def _require_attr(slots: dict, name: str, dataset: Dataset) -> str:
    surface = slots.get(name)
    if surface is None:
        raise UnresolvedAttributeError(name.lower())
    if dataset.resolve_attribute(surface) is None:
        raise UnresolvedAttributeError(surface)
    return surface


def _term_predicate(dataset: Dataset, term: str, op: str = "=") -> FilterPredicate:
    hits = resolve_term(dataset, term)
    if len(hits) != 1:
        raise UnresolvedAttributeError(term)
    column, literal = hits[0]
    return FilterPredicate(column, op, literal)


def _raw_to_predicate(raw: RawFilter, dataset: Dataset) -> FilterPredicate:
    if raw.attribute is None:
        return _term_predicate(dataset, raw.literal_text, raw.op)
    if dataset.resolve_attribute(raw.attribute) is None:
        raise UnresolvedAttributeError(raw.attribute)
    return FilterPredicate(raw.attribute, raw.op, filter_literal(raw.literal_text))


def _filters(slots: dict, name: str, dataset: Dataset) -> tuple[FilterPredicate, ...]:
    if name not in slots:
        return ()
    raws = parse_filter_phrases(slots[name])
    return tuple(_raw_to_predicate(raw, dataset) for raw in raws)


def _term_filters(slots: dict, dataset: Dataset) -> tuple[FilterPredicate, ...]:
    preds = []
    for name in ("TERM1", "TERM2"):
        if name in slots:
            preds.append(_term_predicate(dataset, slots[name]))
    return tuple(preds)


def _number_literal(slots: dict, name: str) -> Literal:
    surface = slots[name]
    value = parse_quantity(surface)
    if value is None:
        raise LiteralParseError(name.lower())
    return Literal.of_number(value)


def _direction(surface: str) -> str:
    return re.sub(r"^(?:an|a)\s+", "", surface.strip().lower())


def _bind_spec(template: Template, slots: dict[str, str], dataset: Dataset) -> FactSpec:
    subtype = template.subtype
    subspace = _filters(slots, "SUBSPACE", dataset) + _term_filters(slots, dataset)
    idkey = slots.get("IDKEY") or slots.get("IDKEYSING") or ""

    if subtype.startswith("value_"):
        agg = {"value_mean": "average", "value_median": "median", "value_sum": "sum"}[subtype]
        return ValueFact(
            measure=_require_attr(slots, "MEASURE", dataset),
            value=_number_literal(slots, "VALUE"),
            aggregation=agg,
            subspace=subspace,
            identifier_key=idkey,
        )

    if subtype == "proportion":
        if "FOCUS" in slots:
            focus = _filters(slots, "FOCUS", dataset)
            sub = subspace
        else:  # entity-style focus with a leading bare term in the subspace
            focus = (_term_predicate(dataset, slots["FOCUSENT"]),)
            sub = _term_filters(slots, dataset) + _filters(slots, "SUBSPACE", dataset)
        return ProportionFact(
            measure=_require_attr(slots, "MEASURE", dataset),
            value=Literal.of_text(slots["VALUE"]),
            focus=focus,
            subspace=sub,
            identifier_key=idkey,
        )

    if subtype == "trend":
        measure = _require_attr(slots, "MEASURE", dataset)
        temporal = dataset.temporal_columns()
        window = ()
        if "START" in slots or "END" in slots:
            if len(temporal) != 1:
                raise UnresolvedAttributeError("date")
            date_col = temporal[0].name
            window = tuple(
                FilterPredicate(date_col, op, Literal.of_text(slots[name]))
                for name, op in (("START", ">="), ("END", "<="))
                if name in slots
            )
        return TrendFact(
            measure=measure,
            value=_direction(slots["VALUE"]) if "VALUE" in slots else "decrease",
            subspace=window + subspace,
        )

    if subtype == "extreme":
        return ExtremeFact(
            measure=_require_attr(slots, "MEASURE", dataset),
            value=_MMX_MAP[slots["VALUE"].lower()],
            focus=(_term_predicate(dataset, slots["FOCUSENT"]),),
            subspace=subspace,
            identifier_key=idkey,
        )

    if subtype == "rank":
        rank = parse_ordinal(slots["VALUE"])
        if rank is None or rank < 1:
            raise LiteralParseError("value")
        return RankFact(
            measure=_require_attr(slots, "MEASURE", dataset),
            value=rank,
            focus=(_term_predicate(dataset, slots["FOCUSENT"]),),
            subspace=subspace,
            identifier_key=idkey,
        )

    if subtype == "association":
        return AssociationFact(
            measure_x=_require_attr(slots, "MEASURE_X", dataset),
            measure_y=_require_attr(slots, "MEASURE_Y", dataset),
            value=slots["VALUE"].lower(),
            identifier_key=idkey,
            subspace=subspace if "SUBSPACE" in slots else None,
        )

    if subtype == "difference":
        return DifferenceFact(
            measure=_require_attr(slots, "MEASURE", dataset),
            value=_number_literal(slots, "VALUE"),
            focus_x=_term_predicate(dataset, slots["FOCUS_X"]),
            focus_y=_term_predicate(dataset, slots["FOCUS_Y"]),
            subspace=subspace,
        )

    if subtype == "categorization":
        count = parse_count(slots["VALUE"])
        if count is None:
            raise LiteralParseError("value")
        return CategorizationFact(value=count, subspace=subspace, identifier_key=idkey)

    if subtype == "distribution":
        return DistributionFact(
            measure=_require_attr(slots, "MEASURE", dataset),
            value=f"{slots['VALUE'].lower()}-skew distribution",
            identifier_key=idkey,
            subspace=subspace if "SUBSPACE" in slots else None,
        )

    if subtype in ("outlier_1d", "outlier_2d"):
        measure_y = None
        if subtype == "outlier_2d":
            measure_y = _require_attr(slots, "MEASURE_Y", dataset)
        return OutlierFact(
            measure=_require_attr(slots, "MEASURE", dataset),
            focus=_term_predicate(dataset, slots["FOCUSENT"]),
            subspace=subspace,
            identifier_key=idkey,
            measure_y=measure_y,
        )

    raise NoTemplateMatchError(subtype)


# ---------------------------------------------------------------------------
# external LLM backend

class LLMBackend:
    """HTTP client for a language-model parser honoring the same contract.

    Each operation POSTs {"op": ..., ...inputs} and expects {"result": ...};
    to_spec results are canonical spec texts, parsed and validated before use.
    Requests are serialized per endpoint with 3 bounded retries.
    """

    name = "llm"

    ENDPOINT_VAR = "CLAIMCHECK_LLM_ENDPOINT"
    API_KEY_VAR = "CLAIMCHECK_LLM_API_KEY"

    def __init__(self, endpoint: str, api_key: str | None = None, transport=None, retries: int = 3):
        self.endpoint = endpoint
        self.api_key = api_key
        self.retries = retries
        self._lock = threading.Lock()
        self._client = httpx.Client(transport=transport, timeout=30.0)

    @classmethod
    def from_env(cls) -> "LLMBackend | None":
        endpoint = os.environ.get(cls.ENDPOINT_VAR)
        if not endpoint:
            return None
        return cls(endpoint, api_key=os.environ.get(cls.API_KEY_VAR))

    def _call(self, op: str, payload: dict):
        body = {"op": op, **payload}
        headers = {"content-type": "application/json"}
        if self.api_key:
            headers["authorization"] = f"Bearer {self.api_key}"
        last_error = None
        with self._lock:
            for attempt in range(self.retries):
                try:
                    response = self._client.post(self.endpoint, json=body, headers=headers)
                    response.raise_for_status()
                    return response.json()["result"]
                except (httpx.HTTPError, KeyError, json.JSONDecodeError) as exc:
                    last_error = exc
                    if attempt < self.retries - 1:
                        time.sleep(0.2 * 2 ** attempt)
        raise LLMBackendError(f"{op} failed after {self.retries} attempts: {last_error}")

    def detect_claims(self, document: str) -> list[ClaimRecord]:
        result = self._call("detect", {"document": document})
        records = []
        for k, item in enumerate(result):
            records.append(ClaimRecord(
                id=f"c{k}",
                text=item["text"],
                char_span=(int(item["start"]), int(item["end"])),
            ))
        return records

    def classify_compound(self, sentence: str) -> str:
        result = self._call("classify_compound", {"sentence": sentence})
        return COMPOUND if str(result).lower() == COMPOUND else SINGLE

    def decompose(self, sentence: str) -> tuple[list[str], list[Diagnostic]]:
        result = self._call("decompose", {"sentence": sentence})
        return [str(f) for f in result], []

    def resolve_coreference(self, fact: str) -> str:
        return str(self._call("resolve_coreference", {"fact": fact}))

    def resolve_ellipsis(self, fact: str) -> str:
        return str(self._call("resolve_ellipsis", {"fact": fact}))

    def classify_fact_type(self, fact: str) -> str:
        result = str(self._call("classify_fact_type", {"fact": fact}))
        if result not in {
            "value", "proportion", "trend", "extreme", "rank",
            "association", "difference", "categorization", "distribution", "outlier",
        }:
            raise LLMBackendError(f"unknown fact type {result!r}")
        return result

    def to_spec(self, fact: str, dataset: Dataset) -> FactSpec:
        result = self._call("to_spec", {
            "fact": fact,
            "attributes": [c.name for c in dataset.columns],
        })
        try:
            return parse_spec_json(str(result))
        except SpecParseError as exc:
            raise LLMBackendError(f"malformed spec from model: {exc}") from exc

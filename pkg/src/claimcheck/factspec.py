"""Typed data-fact specifications and their canonical text format.

The canonical format is JSON-like but renders filter predicates as
comparison pairs inside braces: equality as {"genre"="horror"} and ordering
as {"IMDb_score">7}. Top-level keys use ':' and a fixed per-type key order.
Whitespace outside string literals is not significant.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import date
from typing import Union

from .dataset import Dataset
from .errors import BadLiteralError, SpecParseError, UnknownShapeError
from .values import format_number, parse_date, parse_number, parse_quantity

ORDER_OPS = (">", ">=", "<", "<=")
ALL_OPS = ("=", "!=") + ORDER_OPS

AGGREGATIONS = ("average", "median", "sum")

FACT_TYPES = (
    "value", "proportion", "trend", "extreme", "rank",
    "association", "difference", "categorization", "distribution", "outlier",
)

SUBTYPES = (
    "value_mean", "value_median", "value_sum", "proportion", "trend",
    "extreme", "rank", "association", "difference", "categorization",
    "distribution", "outlier_1d", "outlier_2d",
)


@dataclass(frozen=True)
class Literal:
    """A predicate or claim literal, keeping its lexical form for round-trips."""
    text: str
    quoted: bool

    @classmethod
    def of_number(cls, value: float) -> "Literal":
        return cls(format_number(value), quoted=False)

    @classmethod
    def of_text(cls, value: str) -> "Literal":
        return cls(value, quoted=True)

    def as_number(self) -> float | None:
        return parse_quantity(self.text)

    def as_date(self) -> date | None:
        return parse_date(self.text)


@dataclass(frozen=True)
class FilterPredicate:
    attribute: str
    op: str
    literal: Literal

    def __post_init__(self):
        if self.op not in ALL_OPS:
            raise ValueError(f"unknown operator {self.op!r}")
        if self.op in ORDER_OPS and self.literal.as_number() is None and self.literal.as_date() is None:
            raise ValueError(
                f"ordering op {self.op!r} requires a numeric or temporal literal, got {self.literal.text!r}"
            )

    def chip(self) -> str:
        return f"{self.attribute} {self.op} {self.literal.text}"


Predicates = tuple[FilterPredicate, ...]


@dataclass(frozen=True)
class ValueFact:
    measure: str
    value: Literal
    aggregation: str
    subspace: Predicates
    identifier_key: str

    fact_type = "value"

    @property
    def subtype(self) -> str:
        return {"average": "value_mean", "median": "value_median", "sum": "value_sum"}[self.aggregation]


@dataclass(frozen=True)
class ProportionFact:
    measure: str
    value: Literal  # percent text, e.g. "34.8%"
    focus: Predicates
    subspace: Predicates
    identifier_key: str

    fact_type = "proportion"
    subtype = "proportion"


@dataclass(frozen=True)
class TrendFact:
    measure: str
    value: str  # increase | decrease
    subspace: Predicates

    fact_type = "trend"
    subtype = "trend"


@dataclass(frozen=True)
class ExtremeFact:
    measure: str
    value: str  # max | min
    focus: Predicates
    subspace: Predicates
    identifier_key: str

    fact_type = "extreme"
    subtype = "extreme"


@dataclass(frozen=True)
class RankFact:
    measure: str
    value: int
    focus: Predicates
    subspace: Predicates
    identifier_key: str

    fact_type = "rank"
    subtype = "rank"


@dataclass(frozen=True)
class AssociationFact:
    measure_x: str
    measure_y: str
    value: str  # positive | negative
    identifier_key: str
    subspace: Predicates | None = None

    fact_type = "association"
    subtype = "association"


@dataclass(frozen=True)
class DifferenceFact:
    measure: str
    value: Literal
    focus_x: FilterPredicate
    focus_y: FilterPredicate
    subspace: Predicates

    fact_type = "difference"
    subtype = "difference"


@dataclass(frozen=True)
class CategorizationFact:
    value: int
    subspace: Predicates
    identifier_key: str

    fact_type = "categorization"
    subtype = "categorization"


@dataclass(frozen=True)
class DistributionFact:
    measure: str
    value: str  # "right-skew distribution" | "left-skew distribution"
    identifier_key: str
    subspace: Predicates | None = None

    fact_type = "distribution"
    subtype = "distribution"


@dataclass(frozen=True)
class OutlierFact:
    measure: str
    focus: FilterPredicate
    subspace: Predicates
    identifier_key: str
    measure_y: str | None = None  # present <=> bivariate

    fact_type = "outlier"

    @property
    def subtype(self) -> str:
        return "outlier_2d" if self.measure_y is not None else "outlier_1d"


FactSpec = Union[
    ValueFact, ProportionFact, TrendFact, ExtremeFact, RankFact,
    AssociationFact, DifferenceFact, CategorizationFact, DistributionFact, OutlierFact,
]


# ---------------------------------------------------------------------------
# tokenizer

_NUM_TOKEN_RE = re.compile(r"-?\d+(?:\.\d+)?")


def _tokenize(text: str) -> list[tuple[str, str]]:
    """Yield (kind, lexeme) tokens; kind in {punct, op, string, number}."""
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "{}[]:,":
            tokens.append(("punct", ch))
            i += 1
        elif ch == '"':
            j = i + 1
            out = []
            while j < n:
                c = text[j]
                if c == "\\" and j + 1 < n:
                    out.append(text[j + 1])
                    j += 2
                    continue
                if c == '"':
                    break
                out.append(c)
                j += 1
            else:
                raise SpecParseError(f"unterminated string at offset {i}")
            tokens.append(("string", "".join(out)))
            i = j + 1
        elif ch in "<>!=":
            if text[i:i + 2] in (">=", "<=", "!="):
                tokens.append(("op", text[i:i + 2]))
                i += 2
            elif ch in "<>=":
                tokens.append(("op", ch))
                i += 1
            else:
                raise SpecParseError(f"stray {ch!r} at offset {i}")
        else:
            m = _NUM_TOKEN_RE.match(text, i)
            if not m:
                raise SpecParseError(f"unexpected character {ch!r} at offset {i}")
            tokens.append(("number", m.group()))
            i = m.end()
    return tokens


def _escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def normalize_spec_text(text: str) -> str:
    """Strip whitespace outside strings; the comparison form for round-trips."""
    out = []
    for kind, lexeme in _tokenize(text):
        if kind == "string":
            out.append(f'"{_escape(lexeme)}"')
        else:
            out.append(lexeme)
    return "".join(out)


# ---------------------------------------------------------------------------
# parse

class _Parser:
    def __init__(self, tokens: list[tuple[str, str]]):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else ("eof", "")

    def take(self, kind: str | None = None, lexeme: str | None = None):
        tok = self.peek()
        if kind is not None and tok[0] != kind:
            raise SpecParseError(f"expected {kind}, got {tok}")
        if lexeme is not None and tok[1] != lexeme:
            raise SpecParseError(f"expected {lexeme!r}, got {tok}")
        self.pos += 1
        return tok

    def parse_object(self):
        """Either a top-level pair object or a single {"attr" op literal} predicate."""
        self.take("punct", "{")
        if self.peek() == ("punct", "}"):
            self.take()
            return []
        pairs = []
        while True:
            key = self.take("string")[1]
            kind, lexeme = self.peek()
            if kind == "op":
                self.take()
                lit = self.parse_literal()
                try:
                    pairs.append((key, FilterPredicate(key, lexeme, lit)))
                except ValueError as exc:
                    raise BadLiteralError(key, str(exc)) from exc
            elif (kind, lexeme) == ("punct", ":"):
                self.take()
                pairs.append((key, self.parse_value()))
            else:
                raise SpecParseError(f"expected ':' or comparison after key {key!r}")
            if self.peek() == ("punct", ","):
                self.take()
                continue
            self.take("punct", "}")
            return pairs

    def parse_literal(self) -> Literal:
        kind, lexeme = self.peek()
        if kind == "string":
            self.take()
            return Literal(lexeme, quoted=True)
        if kind == "number":
            self.take()
            return Literal(lexeme, quoted=False)
        raise SpecParseError(f"expected literal, got {(kind, lexeme)}")

    def parse_value(self):
        kind, lexeme = self.peek()
        if kind == "string":
            self.take()
            return Literal(lexeme, quoted=True)
        if kind == "number":
            self.take()
            return Literal(lexeme, quoted=False)
        if (kind, lexeme) == ("punct", "["):
            self.take()
            items = []
            if self.peek() == ("punct", "]"):
                self.take()
                return items
            while True:
                items.append(self.parse_value())
                if self.peek() == ("punct", ","):
                    self.take()
                    continue
                self.take("punct", "]")
                return items
        if (kind, lexeme) == ("punct", "{"):
            return self.parse_object()
        raise SpecParseError(f"unexpected token {(kind, lexeme)}")


def _as_predicate(node, field: str) -> FilterPredicate:
    if isinstance(node, list) and len(node) == 1:
        node = node[0]
    if isinstance(node, list) and len(node) == 1 and isinstance(node[0], tuple):
        node = node[0]
    if isinstance(node, tuple) and len(node) == 2 and isinstance(node[1], FilterPredicate):
        return node[1]
    if isinstance(node, FilterPredicate):
        return node
    raise BadLiteralError(field, "expected a filter predicate")


def _as_predicate_list(node, field: str) -> Predicates:
    if not isinstance(node, list):
        raise BadLiteralError(field, "expected a list of filter predicates")
    preds = []
    for item in node:
        preds.append(_as_predicate(item, field))
    return tuple(preds)


def _as_text(node, field: str) -> str:
    if isinstance(node, Literal) and node.quoted:
        return node.text
    raise BadLiteralError(field, "expected a string")


def _as_int(node, field: str) -> int:
    if isinstance(node, Literal):
        n = parse_number(node.text)
        if n is not None and float(n).is_integer():
            return int(n)
    raise BadLiteralError(field, "expected an integer")


def parse_spec_json(text: str) -> FactSpec:
    """Parse a canonical spec text; the fact type is chosen by key fingerprint."""
    pairs = _Parser(_tokenize(text)).parse_object()
    if not isinstance(pairs, list) or any(not isinstance(p, tuple) for p in pairs):
        raise UnknownShapeError([])
    fields = {}
    for key, node in pairs:
        if key in fields:
            raise SpecParseError(f"duplicate key {key!r}")
        fields[key] = node
    keys = set(fields)

    def need(required, optional=()):
        if not set(required) <= keys or not keys <= set(required) | set(optional):
            raise UnknownShapeError(keys)

    if "measure_x" in keys:
        need(("measure_x", "measure_y", "value", "identifier_key"), optional=("subspace",))
        value = _as_text(fields["value"], "value")
        if value not in ("positive", "negative"):
            raise BadLiteralError("value", "expected 'positive' or 'negative'")
        subspace = _as_predicate_list(fields["subspace"], "subspace") if "subspace" in keys else None
        return AssociationFact(
            measure_x=_as_text(fields["measure_x"], "measure_x"),
            measure_y=_as_text(fields["measure_y"], "measure_y"),
            value=value,
            identifier_key=_as_text(fields["identifier_key"], "identifier_key"),
            subspace=subspace,
        )

    if "focus_x" in keys:
        need(("measure", "value", "focus_x", "focus_y", "subspace"))
        value = fields["value"]
        if not isinstance(value, Literal) or value.as_number() is None:
            raise BadLiteralError("value", "expected a number")
        return DifferenceFact(
            measure=_as_text(fields["measure"], "measure"),
            value=value,
            focus_x=_as_predicate(fields["focus_x"], "focus_x"),
            focus_y=_as_predicate(fields["focus_y"], "focus_y"),
            subspace=_as_predicate_list(fields["subspace"], "subspace"),
        )

    if "aggregation" in keys:
        need(("measure", "value", "aggregation", "subspace", "identifier_key"))
        agg = _as_text(fields["aggregation"], "aggregation")
        if agg not in AGGREGATIONS:
            raise BadLiteralError("aggregation", f"expected one of {AGGREGATIONS}")
        value = fields["value"]
        if not isinstance(value, Literal) or value.as_number() is None:
            raise BadLiteralError("value", "expected a number")
        return ValueFact(
            measure=_as_text(fields["measure"], "measure"),
            value=value,
            aggregation=agg,
            subspace=_as_predicate_list(fields["subspace"], "subspace"),
            identifier_key=_as_text(fields["identifier_key"], "identifier_key"),
        )

    if "measure" in keys and "value" not in keys:
        need(("measure", "focus", "subspace", "identifier_key"), optional=("measure_y",))
        measure_y = _as_text(fields["measure_y"], "measure_y") if "measure_y" in keys else None
        return OutlierFact(
            measure=_as_text(fields["measure"], "measure"),
            focus=_as_predicate(fields["focus"], "focus"),
            subspace=_as_predicate_list(fields["subspace"], "subspace"),
            identifier_key=_as_text(fields["identifier_key"], "identifier_key"),
            measure_y=measure_y,
        )

    if "measure" not in keys and "value" in keys:
        need(("value", "subspace", "identifier_key"))
        count = _as_int(fields["value"], "value")
        if count < 0:
            raise BadLiteralError("value", "count must be >= 0")
        return CategorizationFact(
            value=count,
            subspace=_as_predicate_list(fields["subspace"], "subspace"),
            identifier_key=_as_text(fields["identifier_key"], "identifier_key"),
        )

    if "identifier_key" not in keys and {"measure", "value", "subspace"} <= keys:
        need(("measure", "value", "subspace"))
        value = _as_text(fields["value"], "value")
        if value not in ("increase", "decrease"):
            raise BadLiteralError("value", "expected 'increase' or 'decrease'")
        return TrendFact(
            measure=_as_text(fields["measure"], "measure"),
            value=value,
            subspace=_as_predicate_list(fields["subspace"], "subspace"),
        )

    if "focus" not in keys and {"measure", "value", "identifier_key"} <= keys:
        need(("measure", "value", "identifier_key"), optional=("subspace",))
        value = _as_text(fields["value"], "value")
        if "right-skew" not in value and "left-skew" not in value:
            raise BadLiteralError("value", "expected a left/right skew phrase")
        subspace = _as_predicate_list(fields["subspace"], "subspace") if "subspace" in keys else None
        return DistributionFact(
            measure=_as_text(fields["measure"], "measure"),
            value=value,
            identifier_key=_as_text(fields["identifier_key"], "identifier_key"),
            subspace=subspace,
        )

    if {"measure", "value", "focus", "subspace", "identifier_key"} <= keys:
        need(("measure", "value", "focus", "subspace", "identifier_key"))
        common = dict(
            measure=_as_text(fields["measure"], "measure"),
            focus=_as_predicate_list(fields["focus"], "focus"),
            subspace=_as_predicate_list(fields["subspace"], "subspace"),
            identifier_key=_as_text(fields["identifier_key"], "identifier_key"),
        )
        value = fields["value"]
        if isinstance(value, Literal) and value.quoted and value.text.endswith("%"):
            pct = parse_number(value.text[:-1])
            if pct is None or not 0 <= pct <= 100:
                raise BadLiteralError("value", "percentage must lie in [0, 100]")
            return ProportionFact(value=value, **common)
        if isinstance(value, Literal) and value.quoted and value.text in ("max", "min"):
            return ExtremeFact(value=value.text, **common)
        if isinstance(value, Literal):
            n = parse_number(value.text)
            if n is not None and float(n).is_integer():
                if int(n) < 1:
                    raise BadLiteralError("value", "rank must be >= 1")
                return RankFact(value=int(n), **common)
        raise BadLiteralError("value", "expected a percentage, 'max'/'min', or a rank")

    raise UnknownShapeError(keys)


# ---------------------------------------------------------------------------
# serialize

def _emit_literal(lit: Literal) -> str:
    return f'"{_escape(lit.text)}"' if lit.quoted else lit.text


def _emit_pred(pred: FilterPredicate) -> str:
    return '{"%s"%s%s}' % (_escape(pred.attribute), pred.op, _emit_literal(pred.literal))


def _emit_pred_list(preds: Predicates) -> str:
    return "[" + ",".join(_emit_pred(p) for p in preds) + "]"


def serialize_spec(spec: FactSpec) -> str:
    """Canonical compact text with the per-type key order, byte-stable."""
    s = lambda v: f'"{_escape(v)}"'
    if isinstance(spec, ValueFact):
        body = (
            f'"measure":{s(spec.measure)},"value":{_emit_literal(spec.value)},'
            f'"aggregation":{s(spec.aggregation)},"subspace":{_emit_pred_list(spec.subspace)},'
            f'"identifier_key":{s(spec.identifier_key)}'
        )
    elif isinstance(spec, ProportionFact):
        body = (
            f'"measure":{s(spec.measure)},"value":{_emit_literal(spec.value)},'
            f'"focus":{_emit_pred_list(spec.focus)},"subspace":{_emit_pred_list(spec.subspace)},'
            f'"identifier_key":{s(spec.identifier_key)}'
        )
    elif isinstance(spec, TrendFact):
        body = f'"measure":{s(spec.measure)},"value":{s(spec.value)},"subspace":{_emit_pred_list(spec.subspace)}'
    elif isinstance(spec, ExtremeFact):
        body = (
            f'"measure":{s(spec.measure)},"value":{s(spec.value)},'
            f'"focus":{_emit_pred_list(spec.focus)},"subspace":{_emit_pred_list(spec.subspace)},'
            f'"identifier_key":{s(spec.identifier_key)}'
        )
    elif isinstance(spec, RankFact):
        body = (
            f'"measure":{s(spec.measure)},"value":{spec.value},'
            f'"focus":{_emit_pred_list(spec.focus)},"subspace":{_emit_pred_list(spec.subspace)},'
            f'"identifier_key":{s(spec.identifier_key)}'
        )
    elif isinstance(spec, AssociationFact):
        body = (
            f'"measure_x":{s(spec.measure_x)},"measure_y":{s(spec.measure_y)},'
            f'"value":{s(spec.value)},"identifier_key":{s(spec.identifier_key)}'
        )
        if spec.subspace is not None:
            body += f',"subspace":{_emit_pred_list(spec.subspace)}'
    elif isinstance(spec, DifferenceFact):
        body = (
            f'"measure":{s(spec.measure)},"value":{_emit_literal(spec.value)},'
            f'"focus_x":{_emit_pred(spec.focus_x)},"focus_y":{_emit_pred(spec.focus_y)},'
            f'"subspace":{_emit_pred_list(spec.subspace)}'
        )
    elif isinstance(spec, CategorizationFact):
        body = (
            f'"value":{spec.value},"subspace":{_emit_pred_list(spec.subspace)},'
            f'"identifier_key":{s(spec.identifier_key)}'
        )
    elif isinstance(spec, DistributionFact):
        body = f'"measure":{s(spec.measure)},"value":{s(spec.value)},"identifier_key":{s(spec.identifier_key)}'
        if spec.subspace is not None:
            body += f',"subspace":{_emit_pred_list(spec.subspace)}'
    elif isinstance(spec, OutlierFact):
        body = f'"measure":{s(spec.measure)}'
        if spec.measure_y is not None:
            body += f',"measure_y":{s(spec.measure_y)}'
        body += (
            f',"focus":{_emit_pred(spec.focus)},"subspace":{_emit_pred_list(spec.subspace)},'
            f'"identifier_key":{s(spec.identifier_key)}'
        )
    else:
        raise TypeError(f"not a FactSpec: {spec!r}")
    return "{" + body + "}"


# ---------------------------------------------------------------------------
# validation against a dataset

@dataclass(frozen=True)
class Issue:
    code: str  # UnknownAttribute | TypeMismatch
    detail: str


def spec_measures(spec: FactSpec) -> list[str]:
    if isinstance(spec, AssociationFact):
        return [spec.measure_x, spec.measure_y]
    if isinstance(spec, OutlierFact) and spec.measure_y is not None:
        return [spec.measure, spec.measure_y]
    if isinstance(spec, CategorizationFact):
        return []
    return [spec.measure]


def spec_predicates(spec: FactSpec) -> list[FilterPredicate]:
    preds: list[FilterPredicate] = []
    subspace = getattr(spec, "subspace", None)
    if subspace:
        preds.extend(subspace)
    focus = getattr(spec, "focus", None)
    if isinstance(focus, FilterPredicate):
        preds.append(focus)
    elif focus:
        preds.extend(focus)
    if isinstance(spec, DifferenceFact):
        preds.extend([spec.focus_x, spec.focus_y])
    return preds


def validate_spec(spec: FactSpec, dataset: Dataset) -> list[Issue]:
    """Issues preventing evaluation; an empty list means the spec is resolvable."""
    issues = []
    for measure in spec_measures(spec):
        if dataset.resolve_attribute(measure) is None:
            issues.append(Issue("UnknownAttribute", measure))
    for pred in spec_predicates(spec):
        col = dataset.resolve_attribute(pred.attribute)
        if col is None:
            issues.append(Issue("UnknownAttribute", pred.attribute))
        elif pred.op in ORDER_OPS and col.kind == "categorical":
            issues.append(Issue("TypeMismatch", f"{pred.attribute} {pred.op}"))
    return issues

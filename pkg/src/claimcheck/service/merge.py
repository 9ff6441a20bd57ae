"""Merge an edited spec fragment (chip overrides) into an existing spec."""
from __future__ import annotations

import dataclasses

from ..errors import SpecParseError
from ..factspec import (
    CategorizationFact,
    DifferenceFact,
    FactSpec,
    FilterPredicate,
    Literal,
    OutlierFact,
    ProportionFact,
    RankFact,
    ValueFact,
    parse_spec_json,
)
from ..values import format_number


class FragmentError(ValueError):
    pass


def chip_to_predicate(chip: dict) -> FilterPredicate:
    value = chip["value"]
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        literal = Literal.of_number(float(value))
    elif chip.get("quoted") is False:
        literal = Literal(str(value), quoted=False)
    else:
        literal = Literal.of_text(str(value))
    try:
        return FilterPredicate(chip["attribute"], chip.get("op", "="), literal)
    except ValueError as exc:
        raise FragmentError(str(exc)) from exc


def _convert_value(spec: FactSpec, raw):
    if isinstance(spec, (ValueFact, DifferenceFact)):
        try:
            return Literal(format_number(float(raw)), quoted=False)
        except (TypeError, ValueError) as exc:
            raise FragmentError(f"value must be numeric: {raw!r}") from exc
    if isinstance(spec, ProportionFact):
        text = str(raw)
        if not text.endswith("%"):
            text += "%"
        return Literal.of_text(text)
    if isinstance(spec, (RankFact, CategorizationFact)):
        try:
            return int(raw)
        except (TypeError, ValueError) as exc:
            raise FragmentError(f"value must be an integer: {raw!r}") from exc
    return str(raw)


def merge_spec_fragment(spec: FactSpec | None, fragment: dict) -> FactSpec:
    """Apply the fields present in the fragment onto the spec; `spec_text`
    replaces the whole spec. Raises FragmentError for fields that do not
    belong to the claim's fact type."""
    if fragment.get("spec_text"):
        try:
            return parse_spec_json(fragment["spec_text"])
        except SpecParseError as exc:
            raise FragmentError(str(exc)) from exc
    if spec is None:
        raise FragmentError("claim has no spec; send spec_text to supply one")

    kwargs = {}
    for key, raw in fragment.items():
        if key == "spec_text" or raw is None:
            continue
        if key in ("subspace",) or (key == "focus" and isinstance(raw, list)):
            kwargs[key] = tuple(chip_to_predicate(chip) for chip in raw)
        elif key in ("focus_x", "focus_y") or (key == "focus" and isinstance(spec, OutlierFact)):
            kwargs[key] = chip_to_predicate(raw)
        elif key == "value":
            kwargs[key] = _convert_value(spec, raw)
        else:
            kwargs[key] = raw
    try:
        merged = dataclasses.replace(spec, **kwargs)
    except (TypeError, ValueError) as exc:
        raise FragmentError(str(exc)) from exc
    # round-trip through the canonical form to enforce arm invariants
    try:
        from ..factspec import serialize_spec

        return parse_spec_json(serialize_spec(merged))
    except SpecParseError as exc:
        raise FragmentError(str(exc)) from exc

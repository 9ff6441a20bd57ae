"""End-to-end claim checking: detect, decompose, parse, verify.

Shared by the HTTP service and the CLI so both produce identical results for
the same inputs.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .dataset import Dataset
from .errors import ClaimCheckError
from .factspec import FactSpec, serialize_spec
from .veracity import (
    Thresholds,
    DEFAULT_THRESHOLDS,
    UNVERIFIABLE,
    VerificationResult,
    verify,
)


@dataclass
class CheckedClaim:
    id: str
    text: str
    char_span: tuple[int, int]
    fact_type: str | None
    subtype: str | None
    spec: FactSpec | None
    result: VerificationResult
    diagnostics: list[str] = field(default_factory=list)

    @property
    def spec_text(self) -> str | None:
        return serialize_spec(self.spec) if self.spec is not None else None


def _unverifiable(reason: str) -> VerificationResult:
    return VerificationResult(
        verdict=UNVERIFIABLE, claimed=None, actual=None, statistics={},
        explanation=reason, diagnostics=(reason,),
    )


def check_fact(fact: str, dataset: Dataset, backend,
               thresholds: Thresholds = DEFAULT_THRESHOLDS):
    """(fact_type, spec, result, diagnostics) for one fact string; parse
    failures degrade to an unverifiable result, never an exception."""
    diagnostics: list[str] = []
    fact = backend.resolve_ellipsis(backend.resolve_coreference(fact))
    fact_type = None
    spec = None
    try:
        fact_type = backend.classify_fact_type(fact)
        spec = backend.to_spec(fact, dataset)
        result = verify(dataset, spec, thresholds)
    except ClaimCheckError as exc:
        reason = f"{type(exc).__name__}: {exc}"
        diagnostics.append(reason)
        result = _unverifiable(reason)
    return fact_type, spec, result, diagnostics


def check_document(document: str, dataset: Dataset, backend,
                   thresholds: Thresholds = DEFAULT_THRESHOLDS) -> list[CheckedClaim]:
    claims: list[CheckedClaim] = []
    counter = 0
    for record in backend.detect_claims(document):
        sent_start = record.char_span[0]
        if hasattr(backend, "decompose_with_offsets"):
            fragments = backend.decompose_with_offsets(record.text)
        else:
            facts, _ = backend.decompose(record.text)
            fragments = [(max(record.text.find(f), 0), f) for f in facts]
        for offset, fact in fragments:
            fact_type, spec, result, diagnostics = check_fact(fact, dataset, backend, thresholds)
            claims.append(CheckedClaim(
                id=f"c{counter}",
                text=fact,
                char_span=(sent_start + offset, sent_start + offset + len(fact)),
                fact_type=fact_type,
                subtype=spec.subtype if spec is not None else None,
                spec=spec,
                result=result,
                diagnostics=diagnostics,
            ))
            counter += 1
    return claims

"""Fact-checking engine for data claims backed by tabular reference datasets."""

from .dataset import Column, Dataset, ingest_csv, schema, suitability_score
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
    normalize_spec_text,
    parse_spec_json,
    serialize_spec,
    validate_spec,
)
from .grammar import TemplateGrammar, default_grammar
from .parsing import ClaimRecord, LLMBackend, TemplateBackend
from .retrieval import EvidenceSlice, evaluate_predicate, retrieve
from .veracity import (
    ACCURATE,
    INACCURATE,
    UNVERIFIABLE,
    Thresholds,
    VerificationResult,
    rectify,
    verify,
)

__version__ = "0.1.0"

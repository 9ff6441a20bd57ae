"""Evidence bundle assembly and schema validation (format `evidence-v1`)."""
from __future__ import annotations

import json
from importlib import resources

import jsonschema

from ..dataset import Dataset
from ..factspec import FactSpec, TrendFact
from ..retrieval import retrieve
from ..veracity import DEFAULT_THRESHOLDS, Thresholds, VerificationResult, verify
from .charts import build_chart, build_context_overlay
from .tables import build_table

EVIDENCE_VERSION = "evidence-v1"


def build_bundle(dataset: Dataset, spec: FactSpec,
                 result: VerificationResult | None = None,
                 thresholds: Thresholds = DEFAULT_THRESHOLDS) -> dict:
    """Table, chart, and (for trends) the full-extent context overlay, all
    derived from one slice snapshot."""
    if result is None:
        result = verify(dataset, spec, thresholds)
    slice_ = retrieve(dataset, spec)
    bundle = {
        "version": EVIDENCE_VERSION,
        "fact_subtype": spec.subtype,
        "verdict": result.verdict,
        "table": build_table(dataset, slice_, spec, result),
        "chart": build_chart(dataset, slice_, spec, result),
        "context": build_context_overlay(dataset, spec) if isinstance(spec, TrendFact) else None,
    }
    return bundle


def bundle_json(bundle: dict) -> str:
    return json.dumps(bundle, sort_keys=False, separators=(",", ":"))


def _load_schema(name: str) -> dict:
    text = resources.files("claimcheck.evidence.schemas").joinpath(name).read_text("utf-8")
    return json.loads(text)


def validate_table(table: dict) -> None:
    jsonschema.validate(table, _load_schema("table_layout.schema.json"))


def validate_chart(chart: dict) -> None:
    jsonschema.validate(chart, _load_schema("chart_spec.schema.json"))


def validate_bundle(bundle: dict) -> None:
    jsonschema.validate(bundle, _load_schema("evidence_bundle.schema.json"))

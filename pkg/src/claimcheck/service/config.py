"""Service configuration: data directory, verdict thresholds, model endpoint.

Loaded from a JSON file; the model endpoint and key may instead come from the
CLAIMCHECK_LLM_ENDPOINT / CLAIMCHECK_LLM_API_KEY environment variables, which
take precedence so credentials stay out of config files.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

from ..veracity import Thresholds


@dataclass
class ServiceConfig:
    data_dir: str = "./claimcheck-data"
    association_threshold: float = 0.2
    skewness_threshold: float = 0.1
    iqr_k: float = 1.5
    chi2_cutoff: float = 7.378
    llm_endpoint: str | None = None
    llm_api_key: str | None = None

    def thresholds(self) -> Thresholds:
        return Thresholds(
            association_r=self.association_threshold,
            skewness_g1=self.skewness_threshold,
            iqr_k=self.iqr_k,
            chi2_2df_975=self.chi2_cutoff,
        )

    def resolved_llm(self) -> tuple[str | None, str | None]:
        endpoint = os.environ.get("CLAIMCHECK_LLM_ENDPOINT") or self.llm_endpoint
        api_key = os.environ.get("CLAIMCHECK_LLM_API_KEY") or self.llm_api_key
        return endpoint, api_key


def load_config(path: str | None = None) -> ServiceConfig:
    if path is None:
        return ServiceConfig()
    raw = json.loads(Path(path).read_text("utf-8"))
    known = {f for f in ServiceConfig.__dataclass_fields__}
    unknown = set(raw) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return ServiceConfig(**raw)

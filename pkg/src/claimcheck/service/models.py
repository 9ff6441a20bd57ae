"""Pydantic request/response models for the HTTP API."""
from __future__ import annotations

from typing import Any, Literal, Optional, Union

from pydantic import BaseModel, Field


class ColumnInfo(BaseModel):
    name: str
    kind: Literal["numeric", "categorical", "temporal"]


class DatasetCreated(BaseModel):
    dataset_id: str
    name: str
    schema_: list[ColumnInfo] = Field(alias="schema")

    model_config = {"populate_by_name": True}


class DatasetList(BaseModel):
    datasets: list[DatasetCreated]


class SessionCreate(BaseModel):
    text: str
    dataset_id: str
    parser: Literal["template", "llm"] = "template"


class ClaimedView(BaseModel):
    text: str
    value: Union[float, int, str, None] = None


class ChipIn(BaseModel):
    attribute: str
    op: Literal["=", "!=", ">", ">=", "<", "<="] = "="
    value: Union[float, int, str]
    quoted: Optional[bool] = None


class ChipView(BaseModel):
    attribute: str
    op: str
    value: Union[float, int, str]
    label: str


class ClaimView(BaseModel):
    id: str
    session_id: str
    text: str
    char_span: tuple[int, int]
    fact_type: Optional[str] = None
    subtype: Optional[str] = None
    spec_text: Optional[str] = None
    spec_source: Literal["model", "human"] = "model"
    dataset_id: Optional[str] = None
    verdict: str
    claimed: Optional[ClaimedView] = None
    actual: Union[float, int, str, bool, None] = None
    statistics: dict[str, float] = {}
    explanation: str = ""
    rectification: Optional[str] = None
    diagnostics: list[str] = []
    chips: dict[str, Any] = {}


class SessionView(BaseModel):
    session_id: str
    revision: int
    dataset_id: str
    parser: str
    text: str
    claims: list[ClaimView]


class ClaimsList(BaseModel):
    revision: int
    claims: list[ClaimView]


class SpecPatch(BaseModel):
    spec_text: Optional[str] = None
    measure: Optional[str] = None
    measure_x: Optional[str] = None
    measure_y: Optional[str] = None
    value: Union[float, int, str, None] = None
    aggregation: Optional[Literal["average", "median", "sum"]] = None
    identifier_key: Optional[str] = None
    subspace: Optional[list[ChipIn]] = None
    focus: Union[list[ChipIn], ChipIn, None] = None
    focus_x: Optional[ChipIn] = None
    focus_y: Optional[ChipIn] = None


class PatchedClaim(BaseModel):
    revision: int
    claim: ClaimView
    verdict_flipped: bool
    text_revision: Optional[str] = None


class RectifyResponse(BaseModel):
    revision: int
    revised_text: str
    claim: ClaimView


class RectifyAllResponse(BaseModel):
    revision: int
    applied: int
    revised_document: str


class DatasetBind(BaseModel):
    dataset_id: str


class SuitabilityResponse(BaseModel):
    revision: int
    claim_id: str
    dataset_id: str
    score: float


class ErrorDetail(BaseModel):
    type: str
    detail: str

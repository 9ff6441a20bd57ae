"""HTTP API orchestrating the full fact-checking flow: dataset upload,
session verification, evidence bundles, chip overrides, quick rectify, and
claim-local dataset binding.

Reads serve from immutable session snapshots; mutations to one session are
serialized behind a per-session lock and persisted atomically before the
response is produced, so a restart reproduces every read byte for byte.
"""
from __future__ import annotations

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.middleware.cors import CORSMiddleware

from .. import __version__
from ..dataset import schema as dataset_schema
from ..errors import IngestError
from ..evidence import build_bundle
from ..factspec import FactSpec, FilterPredicate, parse_spec_json, serialize_spec
from ..parsing import LLMBackend, TemplateBackend
from ..pipeline import check_document, check_fact
from ..veracity import (
    INACCURATE,
    UNVERIFIABLE,
    Claimed,
    VerificationResult,
    rectify,
    verify,
)
from .config import ServiceConfig
from .merge import FragmentError, merge_spec_fragment
from .models import (
    ClaimsList,
    DatasetBind,
    DatasetCreated,
    DatasetList,
    PatchedClaim,
    RectifyAllResponse,
    RectifyResponse,
    SessionCreate,
    SessionView,
    SpecPatch,
    SuitabilityResponse,
)
from .store import NotFound, Workspace


def _pred_chip(pred: FilterPredicate) -> dict:
    value = pred.literal.text if pred.literal.quoted else pred.literal.as_number()
    if value is None:
        value = pred.literal.text
    return {"attribute": pred.attribute, "op": pred.op, "value": value, "label": pred.chip()}


def _spec_chips(spec: FactSpec | None) -> dict:
    if spec is None:
        return {}
    chips: dict = {}
    subspace = getattr(spec, "subspace", None)
    if subspace is not None:
        chips["subspace"] = [_pred_chip(p) for p in subspace]
    focus = getattr(spec, "focus", None)
    if isinstance(focus, FilterPredicate):
        chips["focus"] = [_pred_chip(focus)]
    elif focus is not None:
        chips["focus"] = [_pred_chip(p) for p in focus]
    if hasattr(spec, "focus_x"):
        chips["focus"] = [_pred_chip(spec.focus_x), _pred_chip(spec.focus_y)]
    return chips


def _result_to_fields(result: VerificationResult) -> dict:
    claimed = None
    if result.claimed is not None:
        claimed = {"text": result.claimed.text, "value": result.claimed.value}
    return {
        "verdict": result.verdict,
        "claimed": claimed,
        "actual": result.actual,
        "statistics": dict(result.statistics),
        "explanation": result.explanation,
        "rectification": result.rectification,
    }


def _result_from_claim(claim: dict) -> VerificationResult:
    claimed = claim.get("claimed")
    return VerificationResult(
        verdict=claim["verdict"],
        claimed=Claimed(claimed["text"], claimed.get("value")) if claimed else None,
        actual=claim.get("actual"),
        statistics=dict(claim.get("statistics") or {}),
        explanation=claim.get("explanation") or "",
        rectification=claim.get("rectification"),
        diagnostics=tuple(claim.get("diagnostics") or ()),
    )


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    workspace = Workspace(config.data_dir)
    thresholds = config.thresholds()
    template_backend = TemplateBackend()

    app = FastAPI(title="claimcheck", version=__version__)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"],
    )
    app.state.workspace = workspace
    app.state.config = config

    def pick_backend(parser: str):
        if parser == "template":
            return template_backend
        endpoint, api_key = config.resolved_llm()
        if not endpoint:
            raise HTTPException(
                status_code=503,
                detail="llm parser is not configured; set CLAIMCHECK_LLM_ENDPOINT",
            )
        return LLMBackend(endpoint, api_key=api_key)

    def get_dataset_or_404(dataset_id: str):
        try:
            return workspace.get_dataset(dataset_id)
        except NotFound:
            raise HTTPException(status_code=404, detail=f"unknown dataset {dataset_id!r}")

    def get_session_or_404(session_id: str) -> dict:
        try:
            return workspace.get_session(session_id)
        except NotFound:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")

    def find_claim(claim_id: str) -> tuple[dict, dict]:
        session_id = claim_id.split(".", 1)[0]
        session = get_session_or_404(session_id)
        for claim in session["claims"]:
            if claim["id"] == claim_id:
                return session, claim
        raise HTTPException(status_code=404, detail=f"unknown claim {claim_id!r}")

    def claim_dataset(session: dict, claim: dict):
        return get_dataset_or_404(claim.get("dataset_id") or session["dataset_id"])

    def view(session: dict, claim: dict) -> dict:
        spec = parse_spec_json(claim["spec"]) if claim.get("spec") else None
        return {
            "id": claim["id"],
            "session_id": session["id"],
            "text": claim["text"],
            "char_span": tuple(claim["char_span"]),
            "fact_type": claim.get("fact_type"),
            "subtype": claim.get("subtype"),
            "spec_text": claim.get("spec"),
            "spec_source": claim.get("spec_source", "model"),
            "dataset_id": claim.get("dataset_id"),
            "claimed": claim.get("claimed"),
            "actual": claim.get("actual"),
            "statistics": claim.get("statistics") or {},
            "explanation": claim.get("explanation") or "",
            "rectification": claim.get("rectification"),
            "verdict": claim["verdict"],
            "diagnostics": claim.get("diagnostics") or [],
            "chips": _spec_chips(spec),
        }

    def session_view(session: dict) -> dict:
        return {
            "session_id": session["id"],
            "revision": session["revision"],
            "dataset_id": session["dataset_id"],
            "parser": session["parser"],
            "text": session["text"],
            "claims": [view(session, c) for c in session["claims"]],
        }

    # --- datasets -------------------------------------------------------------

    @app.post("/datasets", response_model=DatasetCreated, status_code=201)
    async def upload_dataset(request: Request, name: str = Query(default="dataset")):
        body = await request.body()
        try:
            dataset = workspace.add_dataset(body, name)
        except IngestError as exc:
            raise HTTPException(
                status_code=400,
                detail={"type": type(exc).__name__, "detail": str(exc)},
            )
        return {
            "dataset_id": dataset.id,
            "name": dataset.name,
            "schema": [{"name": n, "kind": k} for n, k in dataset_schema(dataset)],
        }

    @app.get("/datasets", response_model=DatasetList)
    def list_datasets():
        return {
            "datasets": [
                {"dataset_id": d["id"], "name": d["name"], "schema": d["schema"]}
                for d in workspace.list_datasets()
            ]
        }

    # --- sessions ----------------------------------------------------------------

    @app.post("/sessions", response_model=SessionView, status_code=201)
    def create_session(body: SessionCreate):
        if not body.text.strip():
            raise HTTPException(status_code=422, detail="text must be non-empty")
        dataset = get_dataset_or_404(body.dataset_id)
        backend = pick_backend(body.parser)
        checked = check_document(body.text, dataset, backend, thresholds)
        session = workspace.new_session({
            "revision": 0,
            "text": body.text,
            "dataset_id": body.dataset_id,
            "parser": body.parser,
            "claims": [],
        })
        claims = []
        for c in checked:
            claims.append({
                "id": f"{session['id']}.{c.id}",
                "text": c.text,
                "char_span": list(c.char_span),
                "fact_type": c.fact_type,
                "subtype": c.subtype,
                "spec": c.spec_text,
                "spec_source": "model",
                "dataset_id": None,
                **_result_to_fields(c.result),
                "diagnostics": list(c.diagnostics),
            })
        session["claims"] = claims
        workspace.save_session(session)
        return session_view(session)

    @app.get("/sessions/{session_id}", response_model=SessionView)
    def get_session(session_id: str):
        return session_view(get_session_or_404(session_id))

    @app.get("/sessions/{session_id}/claims", response_model=ClaimsList)
    def list_claims(session_id: str):
        session = get_session_or_404(session_id)
        return {
            "revision": session["revision"],
            "claims": [view(session, c) for c in session["claims"]],
        }

    # --- evidence -------------------------------------------------------------------

    @app.get("/claims/{claim_id}/evidence")
    def claim_evidence(claim_id: str, form: str = Query(default="both")):
        if form not in ("table", "chart", "both"):
            raise HTTPException(status_code=422, detail="form must be table, chart, or both")
        session, claim = find_claim(claim_id)
        if claim["verdict"] == UNVERIFIABLE or not claim.get("spec"):
            raise HTTPException(status_code=409, detail="claim is unverifiable; no evidence bundle")
        dataset = claim_dataset(session, claim)
        spec = parse_spec_json(claim["spec"])
        result = _result_from_claim(claim)
        bundle = build_bundle(dataset, spec, result, thresholds)
        payload = {
            "revision": session["revision"],
            "claim_id": claim_id,
            "version": bundle["version"],
            "fact_subtype": bundle["fact_subtype"],
            "verdict": bundle["verdict"],
        }
        if form in ("table", "both"):
            payload["table"] = bundle["table"]
        if form in ("chart", "both"):
            payload["chart"] = bundle["chart"]
            payload["context"] = bundle["context"]
        return payload

    # --- chip override ------------------------------------------------------------------

    @app.patch("/claims/{claim_id}/spec", response_model=PatchedClaim)
    def patch_spec(claim_id: str, patch: SpecPatch):
        session, claim = find_claim(claim_id)
        with workspace.session_lock(session["id"]):
            dataset = claim_dataset(session, claim)
            spec = parse_spec_json(claim["spec"]) if claim.get("spec") else None
            fragment = patch.model_dump(exclude_unset=True)
            try:
                merged = merge_spec_fragment(spec, fragment)
            except FragmentError as exc:
                raise HTTPException(status_code=422, detail=str(exc))
            old_verdict = claim["verdict"]
            result = verify(dataset, merged, thresholds)
            claim["spec"] = serialize_spec(merged)
            claim["spec_source"] = "human"
            claim["fact_type"] = merged.fact_type
            claim["subtype"] = merged.subtype
            claim.update(_result_to_fields(result))
            session["revision"] += 1
            workspace.save_session(session)
            flipped = result.verdict != old_verdict
            text_revision = None
            if flipped:
                text_revision = rectify(claim["text"], result)
            return {
                "revision": session["revision"],
                "claim": view(session, claim),
                "verdict_flipped": flipped,
                "text_revision": text_revision,
            }

    # --- quick rectify ---------------------------------------------------------------------

    def _apply_rectify(session: dict, claim: dict) -> str | None:
        """Rewrite the claim text in place; returns the revised claim text or
        None when the claim is not rectifiable."""
        if claim["verdict"] != INACCURATE or not claim.get("rectification"):
            return None
        result = _result_from_claim(claim)
        revised = rectify(claim["text"], result)
        if revised == claim["text"]:
            return None
        start, end = claim["char_span"]
        document = session["text"]
        session["text"] = document[:start] + revised + document[end:]
        delta = len(revised) - (end - start)
        claim["text"] = revised
        claim["char_span"] = [start, end + delta]
        for other in session["claims"]:
            if other["id"] != claim["id"] and other["char_span"][0] >= end:
                other["char_span"] = [other["char_span"][0] + delta,
                                      other["char_span"][1] + delta]
        # the rewritten claim should now verify as accurate
        dataset = claim_dataset(session, claim)
        backend = TemplateBackend()
        fact_type, spec, result, diagnostics = check_fact(claim["text"], dataset, backend)
        claim["fact_type"] = fact_type
        claim["subtype"] = spec.subtype if spec else None
        claim["spec"] = serialize_spec(spec) if spec else None
        claim.update(_result_to_fields(result))
        claim["diagnostics"] = list(diagnostics)
        return revised

    @app.post("/claims/{claim_id}/rectify", response_model=RectifyResponse)
    def rectify_claim(claim_id: str):
        session, claim = find_claim(claim_id)
        with workspace.session_lock(session["id"]):
            revised = _apply_rectify(session, claim)
            if revised is None:
                raise HTTPException(
                    status_code=409,
                    detail="claim is not rectifiable (accurate, unverifiable, or no literal found)",
                )
            session["revision"] += 1
            workspace.save_session(session)
            return {
                "revision": session["revision"],
                "revised_text": revised,
                "claim": view(session, claim),
            }

    @app.post("/sessions/{session_id}/rectify-all", response_model=RectifyAllResponse)
    def rectify_all(session_id: str):
        session = get_session_or_404(session_id)
        with workspace.session_lock(session_id):
            applied = 0
            for claim in session["claims"]:
                if _apply_rectify(session, claim) is not None:
                    applied += 1
            if applied:
                session["revision"] += 1
                workspace.save_session(session)
            return {
                "revision": session["revision"],
                "applied": applied,
                "revised_document": session["text"],
            }

    # --- claim-local dataset binding --------------------------------------------------------

    @app.post("/claims/{claim_id}/dataset", response_model=PatchedClaim)
    def bind_dataset(claim_id: str, body: DatasetBind):
        session, claim = find_claim(claim_id)
        dataset = get_dataset_or_404(body.dataset_id)
        with workspace.session_lock(session["id"]):
            old_verdict = claim["verdict"]
            claim["dataset_id"] = body.dataset_id
            if claim.get("spec_source") == "human" and claim.get("spec"):
                result = verify(dataset, parse_spec_json(claim["spec"]), thresholds)
                claim.update(_result_to_fields(result))
            else:
                backend = pick_backend(session["parser"])
                fact_type, spec, result, diagnostics = check_fact(
                    claim["text"], dataset, backend, thresholds)
                claim["fact_type"] = fact_type
                claim["subtype"] = spec.subtype if spec else None
                claim["spec"] = serialize_spec(spec) if spec else None
                claim.update(_result_to_fields(result))
                claim["diagnostics"] = list(diagnostics)
            session["revision"] += 1
            workspace.save_session(session)
            return {
                "revision": session["revision"],
                "claim": view(session, claim),
                "verdict_flipped": claim["verdict"] != old_verdict,
                "text_revision": None,
            }

    @app.get("/claims/{claim_id}/suitability", response_model=SuitabilityResponse)
    def claim_suitability(claim_id: str, dataset_id: str = Query(...)):
        from ..dataset import suitability_score

        session, claim = find_claim(claim_id)
        dataset = get_dataset_or_404(dataset_id)
        terms = [t for t in claim["text"].replace(".", " ").split() if t]
        score = suitability_score(terms, dataset)
        return {
            "revision": session["revision"],
            "claim_id": claim_id,
            "dataset_id": dataset_id,
            "score": score,
        }

    return app

#!/usr/bin/env python3
"""Record real service responses into fixtures/api_fixtures.json.

The frontend tests replay these recordings through a fake fetch, so the UI is
tested against the service's actual wire shapes without running Python.
"""
import json
import sys
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from claimcheck.service import ServiceConfig, create_app

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"

DOC = (
    "Among all players, Alex Doe is ranked 4th in points. "
    "Sam Roe has the highest rebounds among all players. "
    "The average assists across all players is 5.1. "
    "The average rating across all whiskies is 91.3."
)


def record():
    with tempfile.TemporaryDirectory() as tmp:
        app = create_app(ServiceConfig(data_dir=tmp))
        with TestClient(app) as client:
            players = client.post(
                "/datasets?name=players", content=(FIXTURES / "players.csv").read_bytes()
            ).json()
            whiskies = client.post(
                "/datasets?name=whiskies", content=(FIXTURES / "whiskies.csv").read_bytes()
            ).json()
            session = client.post("/sessions", json={
                "text": DOC, "dataset_id": players["dataset_id"],
            }).json()
            claims = session["claims"]
            evidence_both = client.get(f"/claims/{claims[0]['id']}/evidence?form=both").json()
            patch_request = {"subspace": [{"attribute": "position", "op": "=", "value": "C"}]}
            patch_response = client.patch(
                f"/claims/{claims[1]['id']}/spec", json=patch_request
            ).json()
            rectify_response = client.post(f"/claims/{claims[0]['id']}/rectify").json()
            suitability = client.get(
                f"/claims/{claims[3]['id']}/suitability",
                params={"dataset_id": whiskies["dataset_id"]},
            ).json()
            bind_response = client.post(f"/claims/{claims[3]['id']}/dataset", json={
                "dataset_id": whiskies["dataset_id"],
            }).json()
            claims_after = client.get(f"/sessions/{session['session_id']}/claims").json()
    return {
        "document": DOC,
        "datasets": {"players": players, "whiskies": whiskies},
        "session": session,
        "evidence_both": evidence_both,
        "patch_request": patch_request,
        "patch_response": patch_response,
        "rectify_response": rectify_response,
        "suitability": suitability,
        "bind_response": bind_response,
        "claims_after": claims_after,
    }


def main():
    out = FIXTURES / "api_fixtures.json"
    out.write_text(json.dumps(record(), indent=1) + "\n")
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

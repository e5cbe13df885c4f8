"""Record service responses for the workbench contract tests.

Builds the GENAPP fixture workspace, drives the real service in-process,
and freezes selected responses under frontend/tests/recorded/. The
frontend's vitest suite replays these files, so every value the UI shows
is checked against a response the actual service produced.

Usage: python scripts/record_ui_fixtures.py
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi.testclient import TestClient

from inckg.fixture import genapp_records, records_to_lines
from inckg.service import create_app
from inckg.workspace import Workspace

OUT_DIR = Path(__file__).resolve().parent.parent / "frontend" / "tests" / "recorded"


def dump(name: str, payload) -> None:
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    path = OUT_DIR / f"{name}.json"
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")
    print(f"wrote {path}")


def main() -> None:
    empty_client = TestClient(create_app(Workspace.create()))
    dump("empty_applications", empty_client.get("/api/applications").json())

    ws = Workspace.create()
    ws.ingest_lines(records_to_lines(genapp_records()))
    client = TestClient(create_app(ws))

    dump("applications", client.get("/api/applications").json())
    dump("policy_nodes_search",
         client.get("/api/nodes", params={
             "q": "SSP", "application": "App-PolicyManagement"}).json())

    client.post("/api/increments", json={"name": "lgcf", "seeds": ["txn:LGCF"]})
    dump("lgcf_increment",
         client.post("/api/increments/lgcf/expand").json())
    dump("lgcf_interfaces",
         client.get("/api/increments/lgcf/interfaces",
                    params={"interface_type": "inside_out",
                            "application": "App-CustomerManagement"}).json())
    dump("lgcf_boundary", client.get("/api/increments/lgcf/boundary").json())
    dump("lgcf_retire", client.get("/api/increments/lgcf/retire").json())

    client.post("/api/increments", json={"name": "ssp3", "seeds": ["txn:SSP3"]})
    client.post("/api/increments/ssp3/expand")
    dump("ssp3_increment", client.get("/api/increments/ssp3").json())
    dump("ssp3_impact",
         client.get("/api/increments/ssp3/impact",
                    params={"node": "prog:LGICVS01"}).json())
    dump("ssp3_boundary", client.get("/api/increments/ssp3/boundary").json())

    # Staleness sequence: fetch, ingest something new, fetch again.
    before = client.get("/api/increments/ssp3").json()
    ingest = client.post(
        "/api/ingest",
        content='{"rec": "node", "id": "prog:NEWPROG", "kind": "Program", '
                '"name": "NEWPROG", "attrs": {}}').json()
    after = client.get("/api/increments/ssp3").json()
    dump("stale_sequence", {"before": before, "ingest": ingest, "after": after})


if __name__ == "__main__":
    main()

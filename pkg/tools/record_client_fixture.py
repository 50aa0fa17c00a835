"""Record real HTTP exchanges from the navigation service into a JSON fixture.

The browser client's tests replay these request/response pairs through a fake
fetch, so the client is exercised against the actual wire contract (paths,
bodies, status codes, payload shapes) rather than a hand-written imitation.
"""

from __future__ import annotations

import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from fastapi.testclient import TestClient  # noqa: E402

from sonuml.catalogue import builtin_proposed  # noqa: E402
from sonuml.service import create_app  # noqa: E402
from sonuml.uml import parse_diagram  # noqa: E402

MOVES = [
    ("into", 0), ("next_sibling", 0), ("into", 0), ("next_sibling", 0),
    ("out", 0), ("next_sibling", 0), ("into", 0), ("into", 0),
    ("next_sibling", 0), ("next_sibling", 0), ("out", 0), ("out", 0),
    ("out", 0), ("next_sibling", 0), ("next_sibling", 0), ("into", 0),
    ("prev_sibling", 0), ("where_am_i", 0), ("repeat_cue", 0), ("out", 0),
]


def main():
    root = pathlib.Path(__file__).resolve().parent.parent
    model = parse_diagram((root / "fixtures" / "library.uml").read_text())
    client = TestClient(create_app(model, builtin_proposed()))
    exchanges = []

    def record(method, path, body=None):
        if method == "POST":
            response = client.post(path, json=body)
        else:
            response = client.get(path)
        exchanges.append(
            {
                "request": {"method": method, "path": path, "body": body},
                "response": {"status": response.status_code, "json": response.json()},
            }
        )
        return response.json()

    created = record("POST", "/sessions", {"audience": "expert"})
    sid = created["session"]
    record("GET", f"/sessions/{sid}")
    for move, index in MOVES:
        record("POST", f"/sessions/{sid}/move", {"move": move, "index": index})

    novice = record("POST", "/sessions", {"audience": "novice"})
    nid = novice["session"]
    record("POST", f"/sessions/{nid}/move", {"move": "follow_relationship", "index": 0})
    record("POST", f"/sessions/{nid}/move", {"move": "into", "index": 0})

    out = root / "frontend" / "tests" / "fixtures" / "recorded-session.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps({"exchanges": exchanges}, indent=2))
    print(f"wrote {out} ({len(exchanges)} exchanges)")


if __name__ == "__main__":
    main()

"""Regenerate the recorded service responses under tests/fixtures/.

Run from the repository root with the Python package installed:

    python frontend/scripts/gen_fixtures.py
"""

from pathlib import Path

from fastapi.testclient import TestClient

from vga.service import create_app

ROOT = Path(__file__).resolve().parents[2]
FIXTURES = ROOT / "frontend" / "tests" / "fixtures"


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    client = TestClient(create_app())
    csv_text = (ROOT / "tests" / "data" / "table1.csv").read_text(encoding="utf-8")

    did = client.post("/datasets", json={"csv": csv_text}).json()["dataset_id"]
    (FIXTURES / "dataset.json").write_bytes(client.get(f"/datasets/{did}").content)

    created = client.post("/sessions", json={"dataset_id": did, "dmu": "K"})
    sid = created.json()["session_id"]
    (FIXTURES / "session.json").write_bytes(created.content)

    # geometry before any trial: the scale frame shows the phase-2 anchor
    for frame in ("pte", "ste"):
        (FIXTURES / f"geometry_{frame}.json").write_bytes(
            client.get(f"/sessions/{sid}/geometry", params={"frame": frame}).content
        )

    (FIXTURES / "what_if_1.json").write_bytes(
        client.post(f"/sessions/{sid}/what-if", json={"kappa": 1.0}).content
    )
    rejected = client.post(f"/sessions/{sid}/what-if", json={"kappa": 2.0})
    assert rejected.status_code == 422
    (FIXTURES / "what_if_2_rejected.json").write_bytes(rejected.content)

    excluded = client.post(f"/sessions/{sid}/exclude", json={"ids": ["D"]})
    assert excluded.status_code == 201
    (FIXTURES / "exclude_D.json").write_bytes(excluded.content)

    (FIXTURES / "finalize_1.json").write_bytes(
        client.post(f"/sessions/{sid}/finalize", json={"kappa": 1.0}).content
    )
    (FIXTURES / "sbm_K.json").write_bytes(client.get(f"/datasets/{did}/sbm/K").content)
    print(f"wrote fixtures to {FIXTURES}")


if __name__ == "__main__":
    main()

"""Record service fixtures for the client tests.

Runs the session service in-process and captures (1) twenty mid-game
discrete states at the human's turn, with the authoritative legal-move
lists, and (2) the full request/response script of a human-challenger
session on the 9/10 cycle pair against the cycle duplicator.

Usage: python frontend/scripts/record_fixtures.py
"""

import json
from pathlib import Path

from fastapi.testclient import TestClient

from ef_lab.service import create_app

OUT = Path(__file__).resolve().parent.parent / "fixtures"


def record_states(client):
    states = []

    def grab(sid):
        payload = client.get(f"/games/{sid}").json()
        human = "C" if payload["engine"]["side"] == "D" else "D"
        if payload["status"] == "in-progress" and payload["to_move"] == human and payload["moves"]:
            states.append(payload)

    # human challenger vs several duplicator engines on varied graph pairs
    setups = [
        {"g1": "cycle:9", "g2": "cycle:10", "n": 2, "engine_strategy": "cycle-duplicator"},
        {"g1": "cycle:17", "g2": "cycle:18", "n": 3, "engine_strategy": "cycle-duplicator"},
        {"g1": "cycle:5", "g2": "cycle:6", "n": 2, "engine_strategy": "solver-optimal"},
        {"g1": "random:6:0.5:3", "g2": "random:6:0.5:4", "n": 3, "engine_strategy": "random"},
        {"g1": "cycle:4", "g2": "complete:4", "n": 2, "engine_strategy": "random"},
        {"g1": "cycle:20", "g2": "cycle:23", "n": 3, "engine_strategy": "cycle-duplicator"},
        {"g1": "random:7:0.3:1", "g2": "random:7:0.7:2", "n": 3, "engine_strategy": "random"},
    ]
    for setup in setups:
        body = {"kind": "discrete", "engine_side": "D", **setup}
        sid = client.post("/games", json=body).json()["id"]
        for mv in [(1, 0), (2, 1), (1, 2)]:
            state = client.get(f"/games/{sid}").json()
            if state["status"] != "in-progress":
                break
            if list(mv) in state["legal_moves"]:
                client.post(f"/games/{sid}/moves", json={"graph": mv[0], "v": mv[1]})
                client.post(f"/games/{sid}/engine-move")
                grab(sid)

    # human duplicator answering engine challengers: pending states
    for setup in [
        {"g1": "cycle:9", "g2": "cycle:10", "n": 2, "engine_strategy": "random"},
        {"g1": "cycle:6", "g2": "cycle:7", "n": 2, "engine_strategy": "solver-optimal"},
        {"g1": "random:5:0.4:9", "g2": "random:5:0.6:2", "n": 2, "engine_strategy": "random"},
        {"g1": "empty:4", "g2": "complete:4", "n": 2, "engine_strategy": "random"},
        {"g1": "cycle:12", "g2": "cycle:11", "n": 2, "engine_strategy": "random"},
    ]:
        body = {"kind": "discrete", "engine_side": "C", "engine_seed": 5, **setup}
        sid = client.post("/games", json=body).json()["id"]
        for _ in range(2):
            state = client.get(f"/games/{sid}").json()
            if state["status"] != "in-progress":
                break
            client.post(f"/games/{sid}/engine-move")
            grab(sid)
            state = client.get(f"/games/{sid}").json()
            if state["status"] != "in-progress" or not state["legal_moves"]:
                break
            move = state["legal_moves"][len(state["moves"]) % len(state["legal_moves"])]
            client.post(f"/games/{sid}/moves", json={"graph": move[0], "v": move[1]})
    return states


def record_script(client):
    script = []

    def call(method, path, body=None):
        if method == "GET":
            res = client.get(path)
        else:
            res = client.post(path, json=body) if body is not None else client.post(path)
        entry = {"method": method, "path": path, "status": res.status_code, "response": res.json()}
        if body is not None:
            entry["body"] = body
        script.append(entry)
        return res.json()

    create_body = {
        "kind": "discrete",
        "g1": "cycle:9",
        "g2": "cycle:10",
        "n": 2,
        "engine_side": "D",
        "engine_strategy": "cycle-duplicator",
    }
    created = call("POST", "/games", create_body)
    sid = created["id"]
    # the recorded path keeps the real session id so the client replays verbatim
    call("POST", f"/games/{sid}/moves", {"graph": 1, "v": 4})
    call("POST", f"/games/{sid}/engine-move")
    call("POST", f"/games/{sid}/moves", {"graph": 2, "v": 5})
    call("POST", f"/games/{sid}/engine-move")
    final = call("GET", f"/games/{sid}")
    assert final["status"] == "finished" and final["winner"] == "D", final
    call("GET", f"/games/{sid}/replay")
    return script


def main():
    client = TestClient(create_app())
    states = record_states(client)
    assert len(states) >= 20, f"only captured {len(states)} states"
    states = states[:20]
    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / "legal_moves_states.json").write_text(json.dumps(states, indent=1))
    script = record_script(client)
    (OUT / "scripted_session.json").write_text(json.dumps(script, indent=1))
    print(f"wrote {len(states)} states and a {len(script)}-step session script to {OUT}")


if __name__ == "__main__":
    main()

import json

import numpy as np
import pytest
from fastapi.testclient import TestClient

from conftest import CASCADE_FILE
from test_cli import NFP_FILE

from sfgkit.cli import main
from sfgkit.graph import parse_graph_data
from sfgkit.service import app
from sfgkit.shannon import compute_transfer, transfer_to_json

client = TestClient(app)


def test_health():
    r = client.get("/health")
    assert r.status_code == 200
    body = r.json()
    assert body["status"] == "ok"
    assert body["name"] == "sfgkit"


def test_transfer_basic():
    r = client.post("/api/transfer", json={"graph": CASCADE_FILE})
    assert r.status_code == 200
    terms = {
        (tuple(t["symbols"]), t["denominator_side"]): t["numerator"]
        for t in r.json()["terms"]
    }
    assert terms[(("V",), "B")] == [8.0, 2.0]
    assert terms[((), "A")] == [2.0, 3.0, 1.0]


def test_transfer_matches_cli_byte_for_byte(cascade_file, capsys):
    assert main(["compute", cascade_file]) == 0
    cli_out = capsys.readouterr().out.strip()
    r = client.post("/api/transfer", json={"graph": CASCADE_FILE})
    assert r.text == cli_out
    tf = compute_transfer(parse_graph_data(CASCADE_FILE))
    assert r.text == transfer_to_json(tf)


def test_transfer_substitution_and_monic():
    r = client.post("/api/transfer", json={
        "graph": CASCADE_FILE,
        "substitutions": {"V": {"num": [1], "den": [3, 1]}},
        "monic": True,
    })
    assert r.status_code == 200
    terms = {
        (tuple(t["symbols"]), t["denominator_side"]): t["numerator"]
        for t in r.json()["terms"]
    }
    assert np.allclose(terms[((), "A")], [6, 11, 6, 1])
    assert np.allclose(terms[((), "B")], [8, 2])


def test_transfer_substitution_string_form():
    r = client.post("/api/transfer", json={
        "graph": CASCADE_FILE,
        "substitutions": {"V": "[1]/[3,1]"},
    })
    assert r.status_code == 200


def test_transfer_malformed_graph_is_400():
    r = client.post("/api/transfer", json={"graph": {"nodes": "wrong"}})
    assert r.status_code == 400
    assert r.json()["error"]["kind"] == "GraphFormatError"


def test_transfer_missing_graph_is_400():
    r = client.post("/api/transfer", json={})
    assert r.status_code == 400


def test_transfer_bad_body_is_400():
    r = client.post("/api/transfer", content=b"{nope",
                    headers={"content-type": "application/json"})
    assert r.status_code == 400


def test_transfer_no_forward_path_is_typed_200():
    r = client.post("/api/transfer", json={"graph": NFP_FILE})
    assert r.status_code == 200
    assert r.json()["error"]["kind"] == "NoForwardPath"


def test_analyze_with_graph():
    r = client.post("/api/analyze", json={
        "graph": CASCADE_FILE,
        "substitutions": {"V": {"num": [1], "den": [3, 1]}},
        "grid": {"wmin": 0.1, "wmax": 10, "points": 25},
        "routh": True,
        "roots": True,
        "reduce": 1,
    })
    assert r.status_code == 200
    body = r.json()
    assert len(body["response"]) == 25
    assert body["routh"]["verdict"] == "stable"
    poles = [complex(re, im) for re, im in body["roots"]["poles"]]
    assert any(abs(p + 1) < 1e-8 for p in poles)
    assert len(body["reduced"]["den"]) == 2
    p0 = body["response"][0]
    w = p0["omega"]
    g = (8 + 2j * w) / ((1j * w) ** 3 + 6 * (1j * w) ** 2 + 11j * w + 6)
    assert np.isclose(p0["re"], g.real) and np.isclose(p0["im"], g.imag)


def test_analyze_with_inline_tf():
    r = client.post("/api/analyze", json={
        "tf": {"num": [8, 2], "den": [2, 3, 1]},
        "grid": {"points": 12},
    })
    assert r.status_code == 200
    assert len(r.json()["response"]) == 12


def test_analyze_symbols_left_is_400():
    r = client.post("/api/analyze", json={"graph": CASCADE_FILE})
    assert r.status_code == 400


def test_analyze_bad_reduce_is_400():
    r = client.post("/api/analyze", json={
        "tf": {"num": [8, 2], "den": [2, 3, 1]},
        "reduce": 7,
    })
    assert r.status_code == 400


def test_analyze_pole_on_grid_is_typed_200():
    r = client.post("/api/analyze", json={
        "tf": {"num": [1], "den": [1, 0, 1]},
        "grid": {"wmin": 1.0, "wmax": 2.0, "points": 3},
    })
    assert r.status_code == 200
    assert r.json()["error"]["kind"] == "EvaluationAtPole"

import time

import pytest
from fastapi.testclient import TestClient

from kara.service import create_app


@pytest.fixture
def client(corpus_dir):
    return TestClient(create_app(corpus_dir=corpus_dir))


def start_maze_session(client) -> tuple[str, dict]:
    response = client.post("/api/visualize", json={"corpus": "maze", "seed": 0})
    assert response.status_code == 200, response.text
    body = response.json()
    return body["sessionId"], body["scene"]


MAZE_EDIT = {"op": "setGridValue", "grid": "maze", "row": 2, "col": 3, "value": "empty"}


def fills_of(scene: dict) -> set[tuple]:
    return {(f["grid"], f["element"], f["row"], f["col"]) for f in scene["gridFills"]}


def test_visualize_edit_abduce_sequence(client):
    session_id, scene = start_maze_session(client)
    assert len(scene["gridFills"]) == 25
    assert ("maze", "wall", 2, 3) in fills_of(scene)

    edited = client.post(f"/api/session/{session_id}/edit", json=MAZE_EDIT)
    assert edited.status_code == 200
    new_scene = edited.json()["scene"]
    assert ("maze", "empty", 2, 3) in fills_of(new_scene)
    assert ("maze", "wall", 2, 3) not in fills_of(new_scene)

    abduced = client.post(f"/api/session/{session_id}/abduce", json={})
    assert abduced.status_code == 200
    body = abduced.json()
    assert body["result"] == "ok"
    assert "empty(3,2)" in body["atoms"]
    assert "wall(3,2)" not in body["atoms"]


def test_abduced_diff_is_exactly_the_edit(client):
    from kara.parser import parse_interpretation

    session_id, _ = start_maze_session(client)
    original = client.get(f"/api/session/{session_id}/scene").json()["interpretation"]
    client.post(f"/api/session/{session_id}/edit", json=MAZE_EDIT)
    body = client.post(f"/api/session/{session_id}/abduce", json={}).json()
    before = set(parse_interpretation(original).literals)
    after = set(parse_interpretation(body["interpretation"]).literals)
    removed = {str(a) for a in before - after}
    added = {str(a) for a in after - before}
    # Unconstrained atoms follow the session's input, so the recovered
    # interpretation differs in exactly the edited pair.
    assert removed == {"wall(3,2)"}
    assert added == {"empty(3,2)"}


def test_scene_roundtrip_via_get(client):
    session_id, scene = start_maze_session(client)
    fetched = client.get(f"/api/session/{session_id}/scene")
    assert fetched.status_code == 200
    assert fetched.json()["scene"] == scene


def test_scene_includes_layout(client):
    _, scene = start_maze_session(client)
    assert scene["layout"]["coords"]["maze"] == [0.0, 0.0, 0]
    assert len(scene["layout"]["cells"]) == 25


def test_svg_endpoint(client):
    session_id, _ = start_maze_session(client)
    response = client.get(f"/api/session/{session_id}/svg")
    assert response.status_code == 200
    assert response.headers["content-type"].startswith("image/svg+xml")
    assert response.text.startswith('<?xml version="1.0"')


def test_unknown_session_is_404(client):
    assert client.get("/api/session/nope/scene").status_code == 404
    assert client.post("/api/session/nope/edit", json=MAZE_EDIT).status_code == 404
    assert client.post("/api/session/nope/abduce", json={}).status_code == 404


def test_expired_session_is_404(corpus_dir):
    client = TestClient(create_app(corpus_dir=corpus_dir, session_ttl=0.05))
    session_id, _ = start_maze_session(client)
    time.sleep(0.1)
    assert client.get(f"/api/session/{session_id}/scene").status_code == 404


def test_affordance_violation_is_422(client):
    session_id, _ = start_maze_session(client)
    response = client.post(f"/api/session/{session_id}/edit",
                           json={"op": "deleteElement", "id": "maze"})
    assert response.status_code == 422


def test_malformed_edit_is_400(client):
    session_id, _ = start_maze_session(client)
    assert client.post(f"/api/session/{session_id}/edit", json={"op": "paint"}).status_code == 400
    assert client.post(f"/api/session/{session_id}/edit",
                       json={"op": "setGridValue"}).status_code == 400


def test_malformed_visualize_body_is_400(client):
    response = client.post("/api/visualize", json={"seed": "not-a-number"})
    assert response.status_code == 400
    assert client.post("/api/visualize", json={}).status_code == 400
    assert client.post("/api/visualize", json={"program": "p(X) :- not q(X)."}).status_code == 400


def test_unknown_corpus_entry_is_404(client):
    assert client.post("/api/visualize", json={"corpus": "labyrinth"}).status_code == 404


def test_corpus_listing(client):
    names = {entry["name"] for entry in client.get("/api/corpus").json()}
    assert {"maze", "shelves", "sorting", "graphcoloring"} <= names


def test_inline_program_session(client):
    response = client.post("/api/visualize", json={
        "program": "visrect(f(X),10,10) :- item(X).",
        "interpretation": "item(a). item(b).",
    })
    assert response.status_code == 200
    assert len(response.json()["scene"]["elements"]) == 2


def test_unsat_abduction_preserves_session(client):
    # Creating an element no rule can derive makes the abduction unsatisfiable.
    response = client.post("/api/visualize", json={
        "program": "visrect(a,5,5). viscreatable(ghost).",
        "interpretation": "",
    })
    session_id = response.json()["sessionId"]
    created = client.post(f"/api/session/{session_id}/edit", json={
        "op": "createElement", "id": "ghost", "kind": "rect", "geometry": ["7", "7"],
    })
    assert created.status_code == 200
    abduced = client.post(f"/api/session/{session_id}/abduce", json={})
    assert abduced.status_code == 200
    assert abduced.json()["result"] == "unsat"
    # The session survives an unsatisfiable attempt.
    assert client.get(f"/api/session/{session_id}/scene").status_code == 200


def test_abduce_with_domain_override(client):
    response = client.post("/api/visualize", json={
        "program": "visrect(box,10,10) :- foo(X).",
        "interpretation": "foo(t1).",
    })
    session_id = response.json()["sessionId"]
    # The automatic domain cannot see t1 (it only occurs in a dropped body
    # variable), so the box is underivable without the override.
    assert client.post(f"/api/session/{session_id}/abduce", json={}).json()["result"] == "unsat"
    abduced = client.post(f"/api/session/{session_id}/abduce",
                          json={"domainTerms": ["t1"]})
    assert abduced.json()["result"] == "ok"
    assert abduced.json()["atoms"] == ["foo(t1)"]


def test_replayability_across_restarts(corpus_dir):
    def run_once():
        client = TestClient(create_app(corpus_dir=corpus_dir))
        session_id, scene = start_maze_session(client)
        edited = client.post(f"/api/session/{session_id}/edit", json=MAZE_EDIT).json()["scene"]
        abduced = client.post(f"/api/session/{session_id}/abduce", json={}).json()
        svg = client.get(f"/api/session/{session_id}/svg").text
        return scene, edited, abduced, svg

    assert run_once() == run_once()


def test_session_busy_returns_409(corpus_dir):
    app = create_app(corpus_dir=corpus_dir)
    client = TestClient(app)
    session_id, _ = start_maze_session(client)
    session = app.state.sessions[session_id]
    assert session.lock.acquire(blocking=False)
    try:
        edit = client.post(f"/api/session/{session_id}/edit", json=MAZE_EDIT)
        abduced = client.post(f"/api/session/{session_id}/abduce", json={})
        assert edit.status_code == 409
        assert abduced.status_code == 409
    finally:
        session.lock.release()
    assert client.post(f"/api/session/{session_id}/edit", json=MAZE_EDIT).status_code == 200

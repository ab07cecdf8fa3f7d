"""Tests for the HTTP review service."""

import threading
import time

import pytest
from fastapi.testclient import TestClient

from layerlink.data import DatasetSpec
from layerlink.experiment import RunConfig
from layerlink.protocol import ProtocolConfig
from layerlink.review import MaskedAttribute, ReviewSession, ReviewTask, SessionClosed
from layerlink.server import ServeState, create_app


def masked_task(pair_id):
    return ReviewTask(
        pair_id=pair_id,
        attributes={
            "first_name": MaskedAttribute(kind="agree", freq="rare"),
            "last_name": MaskedAttribute(
                kind="partial", display_a="***A", display_b="***O"
            ),
            "yob": MaskedAttribute(kind="disagree"),
        },
    )


@pytest.fixture()
def live_batch():
    """A session with one two-task batch held open by a worker thread."""
    session = ReviewSession("test-run")
    tasks = [masked_task(7), masked_task(9)]
    labels = {}

    def work():
        try:
            labels.update(session.review(tasks))
        except SessionClosed:
            pass  # teardown closes a half-labeled batch

    worker = threading.Thread(target=work, daemon=True)
    worker.start()
    deadline = time.monotonic() + 5
    while session.pending_count < 2:
        assert time.monotonic() < deadline
        time.sleep(0.001)
    yield session, tasks, labels, worker
    session.close()
    worker.join(timeout=5)


def test_session_endpoint_idle():
    client = TestClient(create_app(ReviewSession("idle-run")))
    payload = client.get("/api/session").json()
    assert payload == {
        "run_id": "idle-run",
        "pending_count": 0,
        "budget_remaining": None,
    }
    assert client.get("/api/tasks/next").status_code == 204


def test_task_payload_and_label_flow(live_batch):
    session, tasks, labels, worker = live_batch
    session.set_context(budget_remaining=5)
    client = TestClient(create_app(session))

    info = client.get("/api/session").json()
    assert info["pending_count"] == 2
    assert info["budget_remaining"] == 5

    response = client.get("/api/tasks/next")
    assert response.status_code == 200
    assert response.json() == tasks[0].to_json()
    payload = response.json()
    assert payload["attributes"]["first_name"] == {"kind": "agree", "freq": "rare"}
    assert payload["attributes"]["last_name"] == {
        "kind": "partial",
        "a": "***A",
        "b": "***O",
    }
    assert payload["attributes"]["yob"] == {"kind": "disagree"}

    assert client.post("/api/tasks/7/label", json={"label": "match"}).json() == {
        "ok": True,
        "pair_id": 7,
    }
    # Second task surfaces once the first is labeled.
    assert client.get("/api/tasks/next").json()["pair_id"] == 9
    assert (
        client.post("/api/tasks/9/label", json={"label": "nonmatch"}).status_code
        == 200
    )
    worker.join(timeout=5)
    assert not worker.is_alive()
    assert labels == {7: True, 9: False}
    assert client.get("/api/tasks/next").status_code == 204


def test_label_conflicts_map_to_409(live_batch):
    session, _, _, worker = live_batch
    client = TestClient(create_app(session))

    assert client.post("/api/tasks/999/label", json={"label": "match"}).status_code == 409
    assert client.post("/api/tasks/7/label", json={"label": "match"}).status_code == 200
    assert client.post("/api/tasks/7/label", json={"label": "match"}).status_code == 409
    assert client.post("/api/tasks/9/label", json={"label": "nonmatch"}).status_code == 200
    worker.join(timeout=5)

    session.close()
    assert client.post("/api/tasks/9/label", json={"label": "match"}).status_code == 409


def test_label_body_is_validated(live_batch):
    session, _, _, _ = live_batch
    client = TestClient(create_app(session))
    assert client.post("/api/tasks/7/label", json={"label": "yes"}).status_code == 422


def test_served_protocol_run_end_to_end(tmp_path):
    config = RunConfig(
        seed=5,
        generate=DatasetSpec(size=250, overlap=0.3, seed=7),
        protocol=ProtocolConfig(
            warmup_iterations=2,
            warmup_batch_size=25,
            clerical_batches_per_iteration=2,
            clerical_budget=8,
            main_iterations=2,
            main_batch_size=40,
        ),
    )
    state = ServeState(config, tmp_path)
    client = TestClient(create_app(state.session))
    state.start()

    labeled = 0
    deadline = time.monotonic() + 60
    while time.monotonic() < deadline:
        response = client.get("/api/tasks/next")
        if response.status_code == 204:
            if not state.thread.is_alive():
                break
            time.sleep(0.002)
            continue
        task = response.json()
        label = "match" if labeled % 2 == 0 else "nonmatch"
        result = client.post(f"/api/tasks/{task['pair_id']}/label", json={"label": label})
        assert result.status_code == 200
        labeled += 1
    state.thread.join(timeout=10)
    assert not state.thread.is_alive()
    assert state.error is None
    assert labeled == config.protocol.clerical_budget
    for name in ("metrics.csv", "ledger.jsonl", "models.json", "privacy.json", "run.json"):
        assert (tmp_path / name).exists(), name
    info = client.get("/api/session").json()
    assert info["pending_count"] == 0
    # Context reflects the start of the final batch, before its labels landed.
    assert info["budget_remaining"] == config.protocol.clerical_batch_size

"""Echo-mode adapter driving a real orchestrator loop over loopback HTTP."""

import json
import socket
import threading
import time

import pytest
import uvicorn

from cnloop.author import AuthorConfig, HttpAuthor
from cnloop.orchestrator import Orchestrator, Strategy, StrategyKind
from cnloop.records import ReviewDecision, Status, TargetLabel
from cnloop.store import CorpusStore

from cnloop_adapter.config import AdapterConfig
from cnloop_adapter.server import create_app


def _free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


@pytest.fixture
def adapter_url():
    port = _free_port()
    app = create_app(AdapterConfig(), echo=True)
    server = uvicorn.Server(
        uvicorn.Config(app, host="127.0.0.1", port=port, log_level="error")
    )
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.time() + 10
    while not server.started:
        if time.time() > deadline:
            raise RuntimeError("adapter server did not start")
        time.sleep(0.05)
    yield f"http://127.0.0.1:{port}"
    server.should_exit = True
    thread.join(timeout=5)


def _seed_lines(n):
    targets = ["JEWS", "WOMEN", "MUSLIMS", "MIGRANTS", "POC", "LGBT+", "DISABLED"]
    return [
        json.dumps(
            {
                "hs_original": f"seed claim {i}",
                "cn_original": f"seed answer {i}",
                "target": targets[i % len(targets)],
            }
        )
        for i in range(n)
    ]


def test_orchestrator_integration_loop_quota_10(adapter_url):
    store = CorpusStore()
    store.import_pairs(_seed_lines(7), "V1")
    store.freeze("V1")
    author = HttpAuthor(AuthorConfig(base_url=adapter_url, timeout_seconds=10))
    orchestrator = Orchestrator(store, author=author)
    orchestrator.start_loop("V2", Strategy(StrategyKind.LAB), quota=10,
                            chunk_admit_limit=5, base="V1")
    accepted = 0
    while accepted < 10:
        record = orchestrator.next_for_review("integration-reviewer")
        if record is None:
            orchestrator.request_generation("V2", n_chunks=4)
            continue
        orchestrator.submit_review(
            ReviewDecision(
                pair_id=record.id,
                verdict=Status.UNTOUCHED,
                annotator="integration-reviewer",
                target=TargetLabel.WOMEN,
            )
        )
        accepted += 1
    name, report = orchestrator.close_loop("V2")
    author.close()
    assert store.get_version(name).frozen
    assert report.accepted == 10
    assert report.units is not None

import pytest

from cnloop.author import AuthorError
from cnloop.orchestrator import (
    LeaseError,
    Orchestrator,
    OrchestratorError,
    PoolEntry,
    Strategy,
    StrategyKind,
)
from cnloop.records import MAIN_TARGETS, ReviewDecision, Status, TargetLabel
from cnloop.store import CorpusStore, QuotaNotMetError
from cnloop.tokens import END_CN, END_HS, OPEN_CN, OPEN_HS
from conftest import seed_lines


class StubAuthor:
    """Echoes the condition back inside one or more grammar-valid pairs."""

    def __init__(self, pairs_per_chunk=3, fail=False):
        self.pairs_per_chunk = pairs_per_chunk
        self.fail = fail
        self.calls = []
        self.counter = 0

    def generate(self, condition, n_chunks=1, max_tokens=None):
        self.calls.append(condition)
        if self.fail:
            raise AuthorError("connection refused")
        chunks = []
        for _ in range(n_chunks):
            lines = []
            for _ in range(self.pairs_per_chunk):
                self.counter += 1
                if condition.startswith("<|startofhs:"):
                    tag = condition.split("|>")[0] + "|>"
                    prefix = condition[len(tag):].strip()
                    hs = f"{prefix} claim {self.counter}".strip()
                    lines.append(
                        f"{tag} {hs} {END_HS} {OPEN_CN} answer {self.counter} {END_CN}"
                    )
                else:
                    body = condition[len(OPEN_HS):].strip()
                    if body.endswith(END_HS):
                        body = body[: -len(END_HS)].strip()
                    hs = f"{body} claim {self.counter}".strip()
                    lines.append(
                        f"{OPEN_HS} {hs} {END_HS} {OPEN_CN} answer {self.counter} {END_CN}"
                    )
            chunks.append("\n".join(lines))
        return chunks


def _frozen_seed_store():
    store = CorpusStore()
    store.import_pairs(seed_lines(14), "V1")
    store.freeze("V1")
    return store


def test_start_loop_exports_base_chain():
    store = _frozen_seed_store()
    orch = Orchestrator(store, author=StubAuthor())
    orch.start_loop("V2", Strategy(StrategyKind.PLAIN), quota=5, base="V1")
    version = store.get_version("V2")
    assert version.predecessors == ["V1"]
    export = orch.training_export("V2")
    assert export.count("\n") == 14


def test_start_loop_requires_frozen_base():
    store = CorpusStore()
    store.import_pairs(seed_lines(4), "V1")  # not frozen
    orch = Orchestrator(store)
    with pytest.raises(OrchestratorError):
        orch.start_loop("V2", Strategy(StrategyKind.PLAIN), quota=5, base="V1")


def test_parallel_loops_share_frozen_base():
    store = _frozen_seed_store()
    orch = Orchestrator(store, author=StubAuthor())
    for name in ("V2_SBF", "V2_LAB", "V2_ARG", "V2_MIX"):
        pool = [PoolEntry(text=f"pool statement {t.value}", target=t) for t in MAIN_TARGETS]
        kind = StrategyKind(name.split("_")[1])
        strategy = Strategy(kind, pool=pool)
        orch.start_loop(name, strategy, quota=5, base="V1")
    assert set(orch.loop_names()) == {"V2_SBF", "V2_LAB", "V2_ARG", "V2_MIX"}
    for name in orch.loop_names():
        assert store.get_version(name).predecessors == ["V1"]


def test_plain_condition_is_bare_open_tag():
    store = _frozen_seed_store()
    author = StubAuthor()
    orch = Orchestrator(store, author=author)
    orch.start_loop("V2", Strategy(StrategyKind.PLAIN), quota=5, base="V1")
    orch.request_generation("V2", n_chunks=2)
    assert author.calls == [OPEN_HS, OPEN_HS]


def test_lab_conditions_cycle_main_targets():
    store = _frozen_seed_store()
    author = StubAuthor()
    orch = Orchestrator(store, author=author)
    orch.start_loop("V2", Strategy(StrategyKind.LAB), quota=5, base="V1")
    orch.request_generation("V2", n_chunks=14)
    for window_start in (0, 7):
        window = author.calls[window_start : window_start + 7]
        labels = {c.split(": ")[1].split("|>")[0] for c in window}
        assert labels == {t.value for t in MAIN_TARGETS}


def test_sbf_condition_appends_statement():
    store = _frozen_seed_store()
    author = StubAuthor()
    orch = Orchestrator(store, author=author)
    pool = [PoolEntry(text=f"implied {t.value.lower()}", target=t) for t in MAIN_TARGETS]
    orch.start_loop("V2", Strategy(StrategyKind.SBF, pool=pool), quota=5, base="V1")
    orch.request_generation("V2", n_chunks=3)
    assert author.calls[0].startswith(OPEN_HS + " implied ")
    targets = [c.split()[-1] for c in author.calls]
    assert len(set(targets)) == 3  # round-robin over targets


def test_arg_condition_is_full_gold_hs():
    store = _frozen_seed_store()
    author = StubAuthor()
    orch = Orchestrator(store, author=author)
    pool = [PoolEntry(text="a gold hate speech", target=TargetLabel.POC)]
    orch.start_loop("V2", Strategy(StrategyKind.ARG, pool=pool), quota=5, base="V1")
    orch.request_generation("V2", n_chunks=1)
    assert author.calls[0] == f"{OPEN_HS} a gold hate speech {END_HS}"


def test_mix_condition_combines_label_and_statement():
    store = _frozen_seed_store()
    author = StubAuthor()
    orch = Orchestrator(store, author=author)
    pool = [PoolEntry(text=f"stmt {t.value.lower()}", target=t) for t in MAIN_TARGETS]
    orch.start_loop("V2", Strategy(StrategyKind.MIX, pool=pool), quota=5, base="V1")
    orch.request_generation("V2", n_chunks=1)
    call = author.calls[0]
    assert call.startswith("<|startofhs: ")
    assert "stmt" in call


def test_strategy_invariants():
    with pytest.raises(OrchestratorError):
        Strategy(StrategyKind.SBF).validate()
    with pytest.raises(OrchestratorError):
        Strategy(StrategyKind.ARG).validate()
    with pytest.raises(OrchestratorError):
        Strategy(StrategyKind.MIX, pool=[PoolEntry(text="unlabeled")]).validate()
    Strategy(StrategyKind.PLAIN).validate()


def test_admit_limit_caps_pending_records():
    store = _frozen_seed_store()
    orch = Orchestrator(store, author=StubAuthor(pairs_per_chunk=9))
    orch.start_loop("V2", Strategy(StrategyKind.PLAIN), quota=5,
                    chunk_admit_limit=5, base="V1")
    chunks = orch.request_generation("V2", n_chunks=1)
    assert chunks[0].parsed_count == 9
    assert chunks[0].admitted_count == 5
    assert len(store.pending_ids("V2")) == 5


def test_failed_author_marks_chunk_failed():
    store = _frozen_seed_store()
    orch = Orchestrator(store, author=StubAuthor(fail=True))
    orch.start_loop("V2", Strategy(StrategyKind.PLAIN), quota=5, base="V1")
    chunks = orch.request_generation("V2", n_chunks=2)
    assert all(c.failed for c in chunks)
    assert store.pending_ids("V2") == []
    assert any("author error" in d for c in chunks for d in c.diagnostics)


def test_duplicate_candidates_auto_discarded():
    class RepeatAuthor:
        def generate(self, condition, n_chunks=1, max_tokens=None):
            pair = f"{OPEN_HS} same claim {END_HS} {OPEN_CN} same answer {END_CN}"
            return ["\n".join([pair, pair])]

    store = _frozen_seed_store()
    orch = Orchestrator(store, author=RepeatAuthor())
    orch.start_loop("V2", Strategy(StrategyKind.PLAIN), quota=5, base="V1")
    chunks = orch.request_generation("V2", n_chunks=1)
    records = store.records_of("V2")
    assert len(records) == 2
    assert records[0].status is Status.PENDING
    assert records[1].status is Status.DISCARDED
    assert any("duplicates" in d for d in chunks[0].diagnostics)


def test_concurrent_annotators_get_disjoint_records():
    import threading

    store = _frozen_seed_store()
    orch = Orchestrator(store, author=StubAuthor(pairs_per_chunk=8))
    orch.start_loop("V2", Strategy(StrategyKind.PLAIN), quota=5, base="V1")
    orch.request_generation("V2", n_chunks=2)
    leased = []
    lock = threading.Lock()

    def worker(name):
        for _ in range(4):
            record = orch.next_for_review(name)
            if record is not None:
                with lock:
                    leased.append(record.id)

    threads = [threading.Thread(target=worker, args=(f"rev{i}",)) for i in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(leased) == len(set(leased))


def test_lease_exclusivity_and_expiry():
    store = _frozen_seed_store()
    now = [1000.0]
    orch = Orchestrator(store, author=StubAuthor(), lease_seconds=60,
                        clock=lambda: now[0])
    orch.start_loop("V2", Strategy(StrategyKind.PLAIN), quota=5, base="V1")
    orch.request_generation("V2", n_chunks=1)
    rec_a = orch.next_for_review("alice")
    rec_b = orch.next_for_review("bob")
    assert rec_a.id != rec_b.id  # disjoint leases
    # bob cannot submit against alice's lease
    with pytest.raises(LeaseError):
        orch.submit_review(
            ReviewDecision(pair_id=rec_a.id, verdict=Status.DISCARDED, annotator="bob")
        )
    # expired lease returns the record to the queue
    now[0] += 61
    rec_c = orch.next_for_review("carol")
    assert rec_c.id == rec_a.id
    # alice's submission is now stale
    with pytest.raises(LeaseError):
        orch.submit_review(
            ReviewDecision(pair_id=rec_a.id, verdict=Status.DISCARDED, annotator="alice")
        )


def test_submit_review_applies_verdicts():
    store = _frozen_seed_store()
    orch = Orchestrator(store, author=StubAuthor())
    orch.start_loop("V2", Strategy(StrategyKind.PLAIN), quota=5, base="V1")
    orch.request_generation("V2", n_chunks=1)
    rec = orch.next_for_review("alice")
    updated = orch.submit_review(
        ReviewDecision(
            pair_id=rec.id, verdict=Status.UNTOUCHED, annotator="alice",
            target=TargetLabel.MIGRANTS,
        )
    )
    assert updated.status is Status.UNTOUCHED
    assert updated.target is TargetLabel.MIGRANTS


def test_modified_without_edits_rejected():
    store = _frozen_seed_store()
    orch = Orchestrator(store, author=StubAuthor())
    orch.start_loop("V2", Strategy(StrategyKind.PLAIN), quota=5, base="V1")
    orch.request_generation("V2", n_chunks=1)
    rec = orch.next_for_review("alice")
    with pytest.raises(Exception) as err:
        orch.submit_review(
            ReviewDecision(
                pair_id=rec.id, verdict=Status.MODIFIED, annotator="alice",
                hs_edited=rec.hs_original, target=TargetLabel.JEWS,
            )
        )
    assert "cn_edited" in str(err.value)


def _review_n(orch, name, n, verdict=Status.UNTOUCHED):
    accepted = 0
    while accepted < n:
        rec = orch.next_for_review("alice")
        if rec is None:
            orch.request_generation(name, n_chunks=2)
            continue
        orch.submit_review(
            ReviewDecision(
                pair_id=rec.id, verdict=verdict, annotator="alice",
                target=TargetLabel.MUSLIMS,
            )
        )
        accepted += 1


def test_close_loop_freezes_discards_pending_and_reports():
    store = _frozen_seed_store()
    orch = Orchestrator(store, author=StubAuthor(pairs_per_chunk=4))
    orch.start_loop("V2", Strategy(StrategyKind.PLAIN), quota=3, base="V1")
    orch.request_generation("V2", n_chunks=2)  # 8 pending
    _review_n(orch, "V2", 3)
    with_pending = len(store.pending_ids("V2"))
    assert with_pending == 5
    name, report = orch.close_loop("V2")
    assert store.get_version("V2").frozen
    assert report.accepted == 3
    assert report.discarded == 5  # auto-discarded at close
    assert store.pending_ids("V2") == []


def test_close_loop_requires_exact_quota():
    store = _frozen_seed_store()
    orch = Orchestrator(store, author=StubAuthor())
    orch.start_loop("V2", Strategy(StrategyKind.PLAIN), quota=3, base="V1")
    orch.request_generation("V2", n_chunks=1)
    _review_n(orch, "V2", 2)
    with pytest.raises(QuotaNotMetError):
        orch.close_loop("V2")


def test_report_equals_fresh_recomputation():
    import json

    from cnloop.metrics.report import loop_report, report_to_dict

    store = _frozen_seed_store()
    orch = Orchestrator(store, author=StubAuthor(pairs_per_chunk=4))
    orch.start_loop("V2", Strategy(StrategyKind.PLAIN), quota=4, base="V1")
    _review_n(orch, "V2", 4)
    _, report = orch.close_loop("V2")
    recomputed = loop_report(store.snapshot("V2"), [store.snapshot("V1")])
    assert json.dumps(report_to_dict(report), sort_keys=True) == json.dumps(
        report_to_dict(recomputed), sort_keys=True
    )


def test_loop_state_survives_reload(tmp_path):
    root = tmp_path / "store"
    store = CorpusStore(root)
    store.import_pairs(seed_lines(7), "V1")
    store.freeze("V1")
    orch = Orchestrator(store, author=StubAuthor())
    orch.start_loop("V2", Strategy(StrategyKind.LAB), quota=3, base="V1")
    orch.request_generation("V2", n_chunks=3)

    store2 = CorpusStore(root)
    orch2 = Orchestrator(store2, author=StubAuthor())
    state = orch2.get_loop("V2")
    assert state.cycle_index == 3
    assert state.chunk_seq == 3
    assert state.open


def test_dashboard_progress():
    store = _frozen_seed_store()
    orch = Orchestrator(store, author=StubAuthor())
    orch.start_loop("V2", Strategy(StrategyKind.PLAIN), quota=3, base="V1")
    orch.request_generation("V2", n_chunks=1)
    _review_n(orch, "V2", 2)
    dash = orch.dashboard("V2")
    assert dash["accepted"] == 2
    assert dash["quota"] == 3
    assert dash["hter_all"] == 0.0

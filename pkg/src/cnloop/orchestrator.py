"""Loop orchestration: conditioning strategies, generation, review leases,
quota enforcement, freezing and report generation.

The orchestrator is the single writer in front of the store; the lease table
is the only mutable shared structure and every mutation happens under one
lock.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional, Set, Tuple, Union

from .author import AuthorError
from .metrics.report import LoopReport, loop_report, report_to_dict
from .metrics.tokenizer import tokenize
from .parsing import parse_generation
from .records import (
    MAIN_TARGETS,
    PairRecord,
    ReviewDecision,
    Status,
    TargetLabel,
)
from .store import CorpusStore, GenerationChunk, QuotaNotMetError
from .tokens import END_HS, OPEN_HS, ExportFormat, labeled_open_tag

SYSTEM_ANNOTATOR = "system:loop-close"
DEDUPE_ANNOTATOR = "system:dedupe"
DEFAULT_LEASE_SECONDS = 30 * 60


class OrchestratorError(Exception):
    pass


class LeaseError(OrchestratorError):
    pass


class StrategyKind(str, Enum):
    PLAIN = "PLAIN"
    SBF = "SBF"
    LAB = "LAB"
    ARG = "ARG"
    MIX = "MIX"


@dataclass(frozen=True)
class PoolEntry:
    text: str
    target: Optional[TargetLabel] = None


def load_condition_pool(path: Union[str, Path]) -> List[Tuple[Optional[str], str]]:
    """Newline-delimited pool file; lines are ``text`` or ``label<TAB>text``."""
    entries: List[Tuple[Optional[str], str]] = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line:
            continue
        if "\t" in line:
            label, text = line.split("\t", 1)
            entries.append((label.strip(), text.strip()))
        else:
            entries.append((None, line))
    return entries


def default_sbf_mapping() -> Dict[str, TargetLabel]:
    """The shipped external-label -> target mapping for SBF-style pools."""
    raw = json.loads(
        resources.files("cnloop.data").joinpath("sbf_label_mapping.json").read_text("utf-8")
    )
    return {k.lower(): TargetLabel.parse(v) for k, v in raw.items()}


def _resolve_label(
    label: Optional[str], mapping: Optional[Dict[str, TargetLabel]]
) -> Optional[TargetLabel]:
    if label is None:
        return None
    try:
        return TargetLabel.parse(label)
    except ValueError:
        pass
    if mapping is not None and label.lower() in mapping:
        return mapping[label.lower()]
    raise OrchestratorError(f"condition pool label {label!r} has no target mapping")


@dataclass
class Strategy:
    """How author prompts are built for a loop."""

    kind: StrategyKind
    pool: List[PoolEntry] = field(default_factory=list)
    per_target_quota: Optional[Dict[TargetLabel, int]] = None

    @property
    def export_format(self) -> ExportFormat:
        return (
            ExportFormat.LABELED
            if self.kind in (StrategyKind.LAB, StrategyKind.MIX)
            else ExportFormat.PLAIN
        )

    def validate(self) -> None:
        if self.kind in (StrategyKind.SBF, StrategyKind.MIX):
            if not self.pool:
                raise OrchestratorError(f"{self.kind.value} requires a condition pool")
            if all(e.target is None for e in self.pool):
                raise OrchestratorError(
                    f"{self.kind.value} requires labeled condition-pool entries"
                )
        if self.kind is StrategyKind.ARG and not self.pool:
            raise OrchestratorError("ARG requires a condition pool of gold hate speeches")

    @classmethod
    def build(
        cls,
        kind: Union[str, StrategyKind],
        pool_path: Union[str, Path, None] = None,
        label_mapping: Union[str, Path, Dict[str, str], None] = None,
        per_target_quota: Optional[Dict[TargetLabel, int]] = None,
    ) -> "Strategy":
        """Load and resolve a strategy from files.

        SBF/MIX fall back to the shipped SBF mapping when no mapping is
        given; pool labels that already use canonical target spellings need
        no mapping at all.
        """
        kind = StrategyKind(kind.upper() if isinstance(kind, str) else kind)
        mapping: Optional[Dict[str, TargetLabel]] = None
        if isinstance(label_mapping, (str, Path)):
            raw = json.loads(Path(label_mapping).read_text(encoding="utf-8"))
            mapping = {k.lower(): TargetLabel.parse(v) for k, v in raw.items()}
        elif isinstance(label_mapping, dict):
            mapping = {k.lower(): TargetLabel.parse(v) for k, v in label_mapping.items()}
        elif kind in (StrategyKind.SBF, StrategyKind.MIX):
            mapping = default_sbf_mapping()
        pool: List[PoolEntry] = []
        if pool_path is not None:
            for label, text in load_condition_pool(pool_path):
                pool.append(PoolEntry(text=text, target=_resolve_label(label, mapping)))
        strategy = cls(kind=kind, pool=pool, per_target_quota=per_target_quota)
        strategy.validate()
        return strategy

    def to_json_dict(self) -> Dict:
        return {
            "kind": self.kind.value,
            "pool": [
                {"text": e.text, "target": e.target.value if e.target else None}
                for e in self.pool
            ],
            "per_target_quota": (
                {t.value: q for t, q in self.per_target_quota.items()}
                if self.per_target_quota
                else None
            ),
        }

    @classmethod
    def from_json_dict(cls, data: Dict) -> "Strategy":
        return cls(
            kind=StrategyKind(data["kind"]),
            pool=[
                PoolEntry(
                    text=e["text"],
                    target=TargetLabel.parse(e["target"]) if e.get("target") else None,
                )
                for e in data.get("pool", [])
            ],
            per_target_quota=(
                {TargetLabel.parse(k): int(v) for k, v in data["per_target_quota"].items()}
                if data.get("per_target_quota")
                else None
            ),
        )


@dataclass
class LoopState:
    name: str
    strategy: Strategy
    quota: int
    chunk_admit_limit: Optional[int]
    base: Optional[str]
    open: bool = True
    chunk_seq: int = 0
    cycle_index: int = 0
    pool_cursors: Dict[str, int] = field(default_factory=dict)

    def to_json_dict(self) -> Dict:
        return {
            "name": self.name,
            "strategy": self.strategy.to_json_dict(),
            "quota": self.quota,
            "chunk_admit_limit": self.chunk_admit_limit,
            "base": self.base,
            "open": self.open,
            "chunk_seq": self.chunk_seq,
            "cycle_index": self.cycle_index,
            "pool_cursors": dict(self.pool_cursors),
        }

    @classmethod
    def from_json_dict(cls, data: Dict) -> "LoopState":
        return cls(
            name=data["name"],
            strategy=Strategy.from_json_dict(data["strategy"]),
            quota=int(data["quota"]),
            chunk_admit_limit=data.get("chunk_admit_limit"),
            base=data.get("base"),
            open=bool(data.get("open", True)),
            chunk_seq=int(data.get("chunk_seq", 0)),
            cycle_index=int(data.get("cycle_index", 0)),
            pool_cursors={k: int(v) for k, v in data.get("pool_cursors", {}).items()},
        )


@dataclass
class Lease:
    record_id: str
    annotator: str
    expires_at: float


class Orchestrator:
    """Runs loops end to end against a store and an author."""

    def __init__(
        self,
        store: CorpusStore,
        author=None,
        lease_seconds: float = DEFAULT_LEASE_SECONDS,
        clock=time.time,
    ):
        self.store = store
        self.author = author
        self.lease_seconds = lease_seconds
        self.clock = clock
        self._lock = threading.RLock()
        self._loops: Dict[str, LoopState] = {}
        self._leases: Dict[str, Lease] = {}
        self._seen_pairs: Dict[str, Set[Tuple[Tuple[str, ...], Tuple[str, ...]]]] = {}
        if store.root is not None:
            path = store.root / "loops.json"
            if path.exists():
                data = json.loads(path.read_text(encoding="utf-8"))
                for entry in data.get("loops", []):
                    state = LoopState.from_json_dict(entry)
                    self._loops[state.name] = state
                    self._rebuild_seen(state.name)

    # --------------------------------------------------------- persistence

    def _persist_loops(self) -> None:
        if self.store.root is None:
            return
        path = self.store.root / "loops.json"
        data = {"loops": [s.to_json_dict() for s in self._loops.values()]}
        path.write_text(json.dumps(data, ensure_ascii=False, indent=2), encoding="utf-8")

    def _rebuild_seen(self, name: str) -> None:
        seen: Set[Tuple[Tuple[str, ...], Tuple[str, ...]]] = set()
        if self.store.has_version(name):
            for rec in self.store.records_of(name):
                seen.add(self._pair_key(rec.hs_original, rec.cn_original))
        self._seen_pairs[name] = seen

    @staticmethod
    def _pair_key(hs: str, cn: str) -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
        return tuple(tokenize(hs)), tuple(tokenize(cn))

    # --------------------------------------------------------------- loops

    def get_loop(self, name: str) -> LoopState:
        try:
            return self._loops[name]
        except KeyError:
            raise OrchestratorError(f"unknown loop: {name}") from None

    def loop_names(self) -> List[str]:
        return list(self._loops)

    def start_loop(
        self,
        name: str,
        strategy: Strategy,
        quota: int = 500,
        chunk_admit_limit: Optional[int] = None,
        base: Optional[str] = None,
    ) -> LoopState:
        """Open a loop building on a frozen base version.

        Writes the training export for the author (all versions up to the
        base, in the strategy's format). Parallel loops may share a frozen
        base; starting on an unfrozen version is an error.
        """
        with self._lock:
            strategy.validate()
            if quota <= 0:
                raise OrchestratorError("quota must be positive")
            if name in self._loops or self.store.has_version(name):
                raise OrchestratorError(f"loop/version already exists: {name}")
            if base is None:
                frozen = [
                    v for v in self.store.version_names()
                    if self.store.get_version(v).frozen
                ]
                if not frozen:
                    raise OrchestratorError("no frozen base version to build on")
                base = frozen[-1]
            base_version = self.store.get_version(base)
            if not base_version.frozen:
                raise OrchestratorError(
                    f"base version {base} is not frozen (open prior loop)"
                )
            export_text = self.store.export_training(base, strategy.export_format)
            self.store.create_version(
                name, predecessors=self.store.version_chain(base), quota=quota
            )
            if self.store.root is not None:
                exports = self.store.root / "exports"
                exports.mkdir(exist_ok=True)
                (exports / f"{name}.train.txt").write_text(export_text, encoding="utf-8")
            state = LoopState(
                name=name,
                strategy=strategy,
                quota=quota,
                chunk_admit_limit=chunk_admit_limit,
                base=base,
            )
            self._loops[name] = state
            self._seen_pairs[name] = set()
            self._persist_loops()
            return state

    def training_export(self, name: str) -> str:
        loop = self.get_loop(name)
        return self.store.export_training(loop.base, loop.strategy.export_format)

    # --------------------------------------------------------- conditions

    def _target_accepted_counts(self, name: str) -> Dict[TargetLabel, int]:
        counts: Dict[TargetLabel, int] = {}
        for rec in self.store.records_of(name):
            if rec.accepted and rec.target is not None:
                counts[rec.target] = counts.get(rec.target, 0) + 1
        return counts

    def _cycle_targets(self, loop: LoopState) -> List[TargetLabel]:
        if loop.strategy.kind is StrategyKind.SBF:
            present = {e.target for e in loop.strategy.pool if e.target is not None}
            order = [t for t in MAIN_TARGETS if t in present]
            order += [t for t in (TargetLabel.OTHER,) if t in present]
        else:
            order = list(MAIN_TARGETS)
        quota = loop.strategy.per_target_quota
        if quota:
            counts = self._target_accepted_counts(loop.name)
            remaining = [t for t in order if counts.get(t, 0) < quota.get(t, loop.quota)]
            if remaining:
                order = remaining
        return order

    def _next_pool_entry(self, loop: LoopState, target: Optional[TargetLabel]) -> Optional[PoolEntry]:
        if target is None:
            entries = loop.strategy.pool
            key = ""
        else:
            entries = [e for e in loop.strategy.pool if e.target is target]
            key = target.value
        if not entries:
            return None
        cursor = loop.pool_cursors.get(key, 0)
        entry = entries[cursor % len(entries)]
        loop.pool_cursors[key] = cursor + 1
        return entry

    def _next_condition(self, loop: LoopState) -> Tuple[str, Optional[TargetLabel]]:
        kind = loop.strategy.kind
        if kind is StrategyKind.PLAIN:
            return OPEN_HS, None
        if kind is StrategyKind.ARG:
            entry = self._next_pool_entry(loop, None)
            return f"{OPEN_HS} {entry.text} {END_HS}", entry.target
        targets = self._cycle_targets(loop)
        target = targets[loop.cycle_index % len(targets)]
        loop.cycle_index += 1
        if kind is StrategyKind.LAB:
            return labeled_open_tag(target), target
        if kind is StrategyKind.SBF:
            entry = self._next_pool_entry(loop, target)
            return f"{OPEN_HS} {entry.text}", target
        # MIX: labeled tag plus pooled statement when one exists for the target
        entry = self._next_pool_entry(loop, target)
        if entry is None:
            return labeled_open_tag(target), target
        return f"{labeled_open_tag(target)} {entry.text}", target

    # --------------------------------------------------------- generation

    def request_generation(
        self, name: str, n_chunks: int, max_tokens: Optional[int] = None
    ) -> List[GenerationChunk]:
        """Request chunks from the author, parse them, and admit the first
        ``chunk_admit_limit`` parsed pairs per chunk as PENDING records.

        Author failures mark the chunk failed and the loop continues.
        Candidates identical after tokenization to a pair already stored in
        this loop are admitted and immediately auto-discarded.
        """
        with self._lock:
            loop = self.get_loop(name)
            if not loop.open:
                raise OrchestratorError(f"loop {name} is closed")
            if self.author is None:
                raise OrchestratorError("no author configured")
            chunks: List[GenerationChunk] = []
            for _ in range(n_chunks):
                condition, condition_target = self._next_condition(loop)
                chunk_id = f"{name}-c{loop.chunk_seq:05d}"
                loop.chunk_seq += 1
                chunk = GenerationChunk(
                    id=chunk_id,
                    version=name,
                    strategy=loop.strategy.kind.value,
                    condition=condition,
                    condition_target=condition_target,
                )
                try:
                    raw_chunks = self.author.generate(
                        condition, n_chunks=1, max_tokens=max_tokens
                    )
                except AuthorError as exc:
                    chunk.failed = True
                    chunk.diagnostics.append(f"author error: {exc}")
                    self.store.add_chunk(chunk)
                    chunks.append(chunk)
                    continue
                chunk.raw_text = "\n".join(raw_chunks)
                parsed = parse_generation(chunk.raw_text, loop.strategy.export_format)
                chunk.parsed_count = len(parsed.candidates)
                chunk.diagnostics.extend(
                    f"offset {d.offset}: {d.reason}" for d in parsed.diagnostics
                )
                limit = loop.chunk_admit_limit
                admitted = parsed.candidates if limit is None else parsed.candidates[:limit]
                chunk.admitted_count = len(admitted)
                duplicates: Set[int] = set()
                seen = self._seen_pairs.setdefault(name, set())
                for index, cand in enumerate(admitted):
                    key = self._pair_key(cand.hs, cand.cn)
                    if key in seen:
                        duplicates.add(index)
                        chunk.diagnostics.append(
                            f"pair {index} duplicates an earlier pair of this loop; auto-discarded"
                        )
                    seen.add(key)
                    if (
                        cand.label is not None
                        and condition_target is not None
                        and cand.label is not condition_target
                    ):
                        chunk.diagnostics.append(
                            f"pair {index} labeled {cand.label.value} under "
                            f"condition {condition_target.value}"
                        )
                self.store.add_chunk(chunk)
                for index, cand in enumerate(admitted):
                    record = PairRecord(
                        id=f"{chunk_id}-p{index:03d}",
                        version=name,
                        hs_original=cand.hs,
                        cn_original=cand.cn,
                        status=Status.PENDING,
                        strategy=loop.strategy.kind.value,
                        chunk_id=chunk_id,
                        chunk_index=index,
                    )
                    self.store.admit_record(record)
                    if index in duplicates:
                        self.store.append_decision(
                            ReviewDecision(
                                pair_id=record.id,
                                verdict=Status.DISCARDED,
                                annotator=DEDUPE_ANNOTATOR,
                            )
                        )
                chunks.append(chunk)
            self._persist_loops()
            return chunks

    # ------------------------------------------------------------- review

    def _purge_expired_leases(self) -> None:
        now = self.clock()
        expired = [rid for rid, lease in self._leases.items() if lease.expires_at <= now]
        for rid in expired:
            del self._leases[rid]

    def next_for_review(self, annotator: str) -> Optional[PairRecord]:
        """Lease the oldest pending record to ``annotator``; None when the
        queue is empty. Expired leases return records to the queue."""
        if not annotator:
            raise LeaseError("annotator id required")
        with self._lock:
            self._purge_expired_leases()
            for loop in self._loops.values():
                if not loop.open or not self.store.has_version(loop.name):
                    continue
                for rec in self.store.records_of(loop.name):
                    if rec.status is not Status.PENDING or rec.id in self._leases:
                        continue
                    self._leases[rec.id] = Lease(
                        record_id=rec.id,
                        annotator=annotator,
                        expires_at=self.clock() + self.lease_seconds,
                    )
                    return rec
            return None

    def submit_review(self, decision: ReviewDecision) -> PairRecord:
        """Apply a verdict submitted against an active lease."""
        with self._lock:
            decision.validate()
            self._purge_expired_leases()
            lease = self._leases.get(decision.pair_id)
            if lease is None:
                raise LeaseError(f"no active lease for record {decision.pair_id}")
            if lease.annotator != decision.annotator:
                raise LeaseError(
                    f"record {decision.pair_id} is leased to {lease.annotator}"
                )
            record = self.store.append_decision(decision)
            del self._leases[decision.pair_id]
            return record

    # -------------------------------------------------------------- close

    def close_loop(self, name: str) -> Tuple[str, LoopReport]:
        """Freeze the loop's version once the quota is met.

        Remaining PENDING records are auto-discarded before freezing; the
        metric report is computed on the frozen snapshot and persisted.
        """
        with self._lock:
            loop = self.get_loop(name)
            if not loop.open:
                raise OrchestratorError(f"loop {name} is already closed")
            accepted = self.store.accepted_count(name)
            if accepted != loop.quota:
                raise QuotaNotMetError(
                    f"loop {name}: {accepted} accepted pairs, quota is {loop.quota}"
                )
            for rid in self.store.pending_ids(name):
                self._leases.pop(rid, None)
                self.store.append_decision(
                    ReviewDecision(
                        pair_id=rid,
                        verdict=Status.DISCARDED,
                        annotator=SYSTEM_ANNOTATOR,
                    )
                )
            self.store.freeze(name)
            report = self.build_report(name)
            if self.store.root is not None:
                reports = self.store.root / "reports"
                reports.mkdir(exist_ok=True)
                (reports / f"{name}.json").write_text(
                    json.dumps(report_to_dict(report), ensure_ascii=False, indent=2),
                    encoding="utf-8",
                )
            loop.open = False
            self._persist_loops()
            return name, report

    # ------------------------------------------------------------ reports

    def build_report(self, name: str, six_cat_drop: Optional[TargetLabel] = None) -> LoopReport:
        """Compute the metric report for a frozen version."""
        version = self.store.get_version(name)
        if not version.frozen:
            raise OrchestratorError(f"version {name} is not frozen")
        history = [self.store.snapshot(p) for p in version.predecessors]
        if six_cat_drop is None:
            return loop_report(self.store.snapshot(name), history)
        return loop_report(self.store.snapshot(name), history, six_cat_drop)

    def report_dict(self, name: str) -> Dict:
        """Persisted report when available, otherwise a fresh computation."""
        if self.store.root is not None:
            path = self.store.root / "reports" / f"{name}.json"
            if path.exists():
                return json.loads(path.read_text(encoding="utf-8"))
        return report_to_dict(self.build_report(name))

    def dashboard(self, name: str) -> Dict:
        """Live progress numbers for an open or closed loop."""
        from .metrics.imbalance import imbalance_degree
        from .metrics.report import HterScope, hter_aggregate
        from .metrics.tokenizer import UnitSelector

        loop = self.get_loop(name)
        view = self.store.snapshot(name)
        records = view.records
        administered = [r for r in records if r.administered]
        untouched = sum(1 for r in administered if r.status is Status.UNTOUCHED)
        modified = sum(1 for r in administered if r.status is Status.MODIFIED)
        discarded = len(administered) - untouched - modified
        accepted = untouched + modified
        out: Dict = {
            "loop": name,
            "open": loop.open,
            "strategy": loop.strategy.kind.value,
            "quota": loop.quota,
            "accepted": accepted,
            "pending": sum(1 for r in records if r.status is Status.PENDING),
            "administered": len(administered),
            "untouched": untouched,
            "modified": modified,
            "discarded": discarded,
            "untouched_pct": 100.0 * untouched / len(administered) if administered else None,
            "modified_pct": 100.0 * modified / len(administered) if administered else None,
            "discarded_pct": 100.0 * discarded / len(administered) if administered else None,
            "hter_all": None,
            "imbalance_degree": None,
        }
        if accepted:
            out["hter_all"] = hter_aggregate(view, HterScope.ALL, UnitSelector.PAIR).micro
            counts = {}
            for r in records:
                if r.accepted and r.target is not None:
                    counts[r.target] = counts.get(r.target, 0) + 1
            main = [counts.get(t, 0) for t in MAIN_TARGETS]
            if sum(main) > 0:
                out["imbalance_degree"] = imbalance_degree(main)
        return out

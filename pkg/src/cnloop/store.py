"""Versioned, append-only storage of pair records and loop snapshots.

All writes go through a single JSONL event log (one event per imported
record, admitted candidate, decision, chunk and freeze); the in-memory
snapshot is derived state, so rebuilding a store from its log yields an
identical snapshot. Writes are serialized behind one lock; readers see the
latest committed state.
"""

from __future__ import annotations

import json
import threading
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Union

from .metrics.view import VersionView
from .records import (
    DatasetVersion,
    PairRecord,
    RecordInvariantError,
    ReviewDecision,
    Status,
    TargetLabel,
)
from .tokens import ExportFormat, format_pair


class StoreError(Exception):
    pass


class UnknownVersionError(StoreError):
    pass


class VersionExistsError(StoreError):
    pass


class FrozenVersionError(StoreError):
    pass


class QuotaNotMetError(StoreError):
    pass


class DuplicateDecisionError(StoreError):
    """A record already carries a verdict; one verdict per record."""


class ImportFileError(StoreError):
    """A pair file line failed to parse or violated a record invariant."""

    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


@dataclass
class GenerationChunk:
    """Raw author output plus parse/admission bookkeeping."""

    id: str
    version: str
    strategy: str
    condition: str
    raw_text: str = ""
    condition_target: Optional[TargetLabel] = None
    parsed_count: int = 0
    admitted_count: int = 0
    failed: bool = False
    diagnostics: List[str] = field(default_factory=list)

    def to_json_dict(self) -> Dict[str, Any]:
        out = asdict(self)
        out["condition_target"] = (
            self.condition_target.value if self.condition_target else None
        )
        return out

    @classmethod
    def from_json_dict(cls, data: Dict[str, Any]) -> "GenerationChunk":
        data = dict(data)
        if data.get("condition_target"):
            data["condition_target"] = TargetLabel.parse(data["condition_target"])
        else:
            data["condition_target"] = None
        return cls(**data)


class CorpusStore:
    """Event-sourced pair store.

    With ``root`` set, events are appended to ``<root>/events.jsonl`` and an
    existing log is replayed on open; without it the store is in-memory.
    """

    def __init__(self, root: Union[str, Path, None] = None):
        self._lock = threading.RLock()
        self._records: Dict[str, PairRecord] = {}
        self._versions: Dict[str, DatasetVersion] = {}
        self._chunks: Dict[str, GenerationChunk] = {}
        self._root: Optional[Path] = Path(root) if root is not None else None
        self._log_path: Optional[Path] = None
        if self._root is not None:
            self._root.mkdir(parents=True, exist_ok=True)
            self._log_path = self._root / "events.jsonl"
            if self._log_path.exists():
                with self._log_path.open("r", encoding="utf-8") as fh:
                    for line in fh:
                        line = line.strip()
                        if line:
                            self._apply(json.loads(line))

    # ------------------------------------------------------------------ io

    @property
    def root(self) -> Optional[Path]:
        return self._root

    def _emit(self, event: str, data: Dict[str, Any]) -> None:
        """Apply an event and append it to the log. Caller holds the lock."""
        payload = {"event": event, "data": data}
        self._apply(payload)
        if self._log_path is not None:
            with self._log_path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(payload, ensure_ascii=False) + "\n")

    def _apply(self, payload: Dict[str, Any]) -> None:
        event = payload["event"]
        data = payload["data"]
        if event == "version_created":
            self._versions[data["name"]] = DatasetVersion(
                name=data["name"],
                quota=int(data["quota"]),
                predecessors=list(data["predecessors"]),
            )
        elif event in ("record_imported", "record_admitted"):
            rec = PairRecord.from_json_dict(data)
            self._records[rec.id] = rec
            self._versions[rec.version].pair_ids.append(rec.id)
        elif event == "chunk_added":
            chunk = GenerationChunk.from_json_dict(data)
            self._chunks[chunk.id] = chunk
        elif event == "decision":
            decision = ReviewDecision.from_json_dict(data)
            rec = self._records[decision.pair_id]
            updated = replace(
                rec,
                status=decision.verdict,
                hs_edited=decision.hs_edited,
                cn_edited=decision.cn_edited,
                target=decision.target,
                annotator=decision.annotator,
            )
            updated.validate()
            self._records[decision.pair_id] = updated
        elif event == "frozen":
            self._versions[data["name"]].frozen = True
        else:
            raise StoreError(f"unknown event type: {event}")

    # ------------------------------------------------------------- queries

    def get_version(self, name: str) -> DatasetVersion:
        try:
            return self._versions[name]
        except KeyError:
            raise UnknownVersionError(f"unknown version: {name}") from None

    def has_version(self, name: str) -> bool:
        return name in self._versions

    def version_names(self) -> List[str]:
        return list(self._versions)

    def get_record(self, record_id: str) -> PairRecord:
        try:
            return self._records[record_id]
        except KeyError:
            raise StoreError(f"unknown record: {record_id}") from None

    def get_chunk(self, chunk_id: str) -> GenerationChunk:
        try:
            return self._chunks[chunk_id]
        except KeyError:
            raise StoreError(f"unknown chunk: {chunk_id}") from None

    def version_chain(self, name: str) -> List[str]:
        """Lineage from the seed version up to and including ``name``."""
        version = self.get_version(name)
        return [*version.predecessors, version.name]

    def records_of(self, name: str) -> List[PairRecord]:
        version = self.get_version(name)
        return [self._records[rid] for rid in version.pair_ids]

    def snapshot(self, name: str) -> VersionView:
        """Point-in-time immutable view for the metrics engine."""
        with self._lock:
            version = self.get_version(name)
            records = [replace(self._records[rid]) for rid in version.pair_ids]
            condition_targets = {
                c.id: c.condition_target
                for c in self._chunks.values()
                if c.version == name
            }
        return VersionView(
            name=name, records=records, condition_targets=condition_targets
        )

    def accepted_count(self, name: str) -> int:
        return sum(1 for r in self.records_of(name) if r.accepted)

    def pending_ids(self, name: str) -> List[str]:
        return [r.id for r in self.records_of(name) if r.status is Status.PENDING]

    def dump_state(self) -> Dict[str, Any]:
        """Canonical serializable snapshot of the whole store."""
        with self._lock:
            return {
                "versions": {
                    name: v.to_json_dict() for name, v in self._versions.items()
                },
                "records": [
                    self._records[rid].to_json_dict()
                    for v in self._versions.values()
                    for rid in v.pair_ids
                ],
                "chunks": [c.to_json_dict() for c in self._chunks.values()],
            }

    # ------------------------------------------------------------- writes

    def import_pairs(
        self,
        source: Union[str, Path, Iterable[str]],
        version_name: str,
        quota: Optional[int] = None,
    ) -> DatasetVersion:
        """Create a new unfrozen version from a pair JSONL stream.

        ``source`` is a file path or an iterable of lines. Records default
        to UNTOUCHED status and SEED strategy; a line's ``version`` field is
        replaced by ``version_name``. The whole import is rejected on the
        first malformed line or invariant violation. ``quota`` defaults to
        the number of accepted records imported.
        """
        if isinstance(source, (str, Path)):
            with Path(source).open("r", encoding="utf-8") as fh:
                lines = fh.readlines()
        else:
            lines = list(source)

        with self._lock:
            if version_name in self._versions:
                raise VersionExistsError(f"version already exists: {version_name}")
            records: List[PairRecord] = []
            seen_ids = set()
            for number, line in enumerate(lines, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    data = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise ImportFileError(number, f"malformed JSON: {exc.msg}") from None
                if not isinstance(data, dict):
                    raise ImportFileError(number, "expected a JSON object")
                data["version"] = version_name
                data.setdefault("id", f"{version_name}-{number:06d}")
                try:
                    rec = PairRecord.from_json_dict(data)
                except RecordInvariantError as exc:
                    raise ImportFileError(number, f"{exc.field_name}: {exc}") from None
                except (ValueError, TypeError) as exc:
                    raise ImportFileError(number, str(exc)) from None
                if rec.id in seen_ids or rec.id in self._records:
                    raise ImportFileError(number, f"id: duplicate record id {rec.id!r}")
                seen_ids.add(rec.id)
                records.append(rec)

            accepted = sum(1 for r in records if r.accepted)
            self._emit(
                "version_created",
                {
                    "name": version_name,
                    "quota": accepted if quota is None else quota,
                    "predecessors": [],
                },
            )
            for rec in records:
                self._emit("record_imported", rec.to_json_dict())
            return self.get_version(version_name)

    def create_version(
        self, name: str, predecessors: List[str], quota: int
    ) -> DatasetVersion:
        with self._lock:
            if name in self._versions:
                raise VersionExistsError(f"version already exists: {name}")
            for pred in predecessors:
                self.get_version(pred)
            self._emit(
                "version_created",
                {"name": name, "quota": quota, "predecessors": list(predecessors)},
            )
            return self.get_version(name)

    def add_chunk(self, chunk: GenerationChunk) -> None:
        with self._lock:
            version = self.get_version(chunk.version)
            if version.frozen:
                raise FrozenVersionError(f"version {version.name} is frozen")
            self._emit("chunk_added", chunk.to_json_dict())

    def admit_record(self, record: PairRecord) -> PairRecord:
        """Add a PENDING candidate produced by generation."""
        with self._lock:
            version = self.get_version(record.version)
            if version.frozen:
                raise FrozenVersionError(f"version {version.name} is frozen")
            if record.status is not Status.PENDING:
                raise StoreError("admitted records must be PENDING")
            if record.id in self._records:
                raise StoreError(f"duplicate record id: {record.id}")
            record.validate()
            self._emit("record_admitted", record.to_json_dict())
            return self._records[record.id]

    def append_decision(self, decision: ReviewDecision) -> PairRecord:
        """Apply a reviewer verdict to a PENDING record."""
        with self._lock:
            decision.validate()
            record = self.get_record(decision.pair_id)
            if record.status is not Status.PENDING:
                raise DuplicateDecisionError(
                    f"record {record.id} already reviewed ({record.status.value})"
                )
            version = self.get_version(record.version)
            if version.frozen:
                raise FrozenVersionError(f"version {version.name} is frozen")
            if decision.verdict is Status.MODIFIED and (
                decision.hs_edited,
                decision.cn_edited,
            ) == (record.hs_original, record.cn_original):
                raise RecordInvariantError(
                    "cn_edited", "MODIFIED verdict must change the pair"
                )
            self._emit("decision", decision.to_json_dict())
            return self._records[decision.pair_id]

    def freeze(self, name: str) -> DatasetVersion:
        """Freeze a version once its accepted-pair count equals its quota."""
        with self._lock:
            version = self.get_version(name)
            if version.frozen:
                raise FrozenVersionError(f"version {name} is already frozen")
            pending = self.pending_ids(name)
            if pending:
                raise StoreError(
                    f"version {name} still has {len(pending)} pending records"
                )
            accepted = self.accepted_count(name)
            if accepted != version.quota:
                raise QuotaNotMetError(
                    f"version {name}: {accepted} accepted pairs, quota is {version.quota}"
                )
            self._emit("frozen", {"name": name})
            return self.get_version(name)

    # ------------------------------------------------------------- export

    def export_training(self, upto_version: str, fmt: ExportFormat) -> str:
        """Training text of all versions up to ``upto_version``, one pair
        per line, final texts. Every version in the chain must be frozen."""
        chain = self.version_chain(upto_version)
        lines: List[str] = []
        for name in chain:
            version = self.get_version(name)
            if not version.frozen:
                raise FrozenVersionError(
                    f"version {name} must be frozen before export"
                )
            for rid in version.pair_ids:
                rec = self._records[rid]
                if not rec.accepted:
                    continue
                lines.append(
                    format_pair(rec.hs_final, rec.cn_final, fmt, rec.target)
                )
        return "".join(line + "\n" for line in lines)

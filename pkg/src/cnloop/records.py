"""Domain types shared by the store, the orchestrator and the metrics engine."""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from enum import Enum
from typing import Any, Dict, List, Optional


class TargetLabel(str, Enum):
    """Hate target of a pair. OTHER collects everything outside the 7 main classes."""

    DISABLED = "DISABLED"
    JEWS = "JEWS"
    LGBT_PLUS = "LGBT+"
    MIGRANTS = "MIGRANTS"
    MUSLIMS = "MUSLIMS"
    POC = "POC"
    WOMEN = "WOMEN"
    OTHER = "OTHER"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def parse(cls, text: str) -> "TargetLabel":
        try:
            return cls(text)
        except ValueError:
            raise ValueError(f"unknown target label: {text!r}") from None


#: The 7 main target classes (every label except OTHER), in canonical order.
MAIN_TARGETS: tuple = tuple(t for t in TargetLabel if t is not TargetLabel.OTHER)


class Status(str, Enum):
    PENDING = "PENDING"
    UNTOUCHED = "UNTOUCHED"
    MODIFIED = "MODIFIED"
    DISCARDED = "DISCARDED"


ACCEPTED_STATUSES = (Status.UNTOUCHED, Status.MODIFIED)

#: Strategy tag used for seed pairs, which never went through generation.
SEED_STRATEGY = "SEED"


class RecordInvariantError(ValueError):
    """A pair record violates an invariant. Carries the offending field name."""

    def __init__(self, field_name: str, message: str):
        super().__init__(message)
        self.field_name = field_name


@dataclass
class PairRecord:
    """One HS/CN candidate with its review state.

    Texts are stored raw; any normalization happens only inside metric
    tokenization.
    """

    id: str
    version: str
    hs_original: str
    cn_original: str
    hs_edited: Optional[str] = None
    cn_edited: Optional[str] = None
    status: Status = Status.PENDING
    target: Optional[TargetLabel] = None
    annotator: Optional[str] = None
    strategy: str = SEED_STRATEGY
    chunk_id: Optional[str] = None
    chunk_index: Optional[int] = None

    @property
    def accepted(self) -> bool:
        return self.status in ACCEPTED_STATUSES

    @property
    def administered(self) -> bool:
        return self.status is not Status.PENDING

    @property
    def hs_final(self) -> str:
        return self.hs_edited if self.hs_edited is not None else self.hs_original

    @property
    def cn_final(self) -> str:
        return self.cn_edited if self.cn_edited is not None else self.cn_original

    def validate(self) -> None:
        if self.status is Status.MODIFIED:
            if self.hs_edited is None:
                raise RecordInvariantError("hs_edited", "MODIFIED record requires hs_edited")
            if self.cn_edited is None:
                raise RecordInvariantError("cn_edited", "MODIFIED record requires cn_edited")
            if (self.hs_edited, self.cn_edited) == (self.hs_original, self.cn_original):
                raise RecordInvariantError(
                    "cn_edited", "MODIFIED record must differ from the original pair"
                )
        else:
            if self.hs_edited is not None or self.cn_edited is not None:
                raise RecordInvariantError(
                    "hs_edited", f"edited fields are only allowed on MODIFIED records (status={self.status.value})"
                )
        if self.status in ACCEPTED_STATUSES and self.target is None:
            raise RecordInvariantError("target", "accepted records require a target label")
        if self.chunk_index is not None and self.chunk_index < 0:
            raise RecordInvariantError("chunk_index", "chunk_index must be >= 0")

    def to_json_dict(self) -> Dict[str, Any]:
        """Serialize with absent optionals omitted (the pair JSONL schema)."""
        out: Dict[str, Any] = {
            "id": self.id,
            "version": self.version,
            "hs_original": self.hs_original,
            "cn_original": self.cn_original,
            "status": self.status.value,
            "strategy": self.strategy,
        }
        if self.hs_edited is not None:
            out["hs_edited"] = self.hs_edited
        if self.cn_edited is not None:
            out["cn_edited"] = self.cn_edited
        if self.target is not None:
            out["target"] = self.target.value
        if self.annotator is not None:
            out["annotator"] = self.annotator
        if self.chunk_id is not None:
            out["chunk_id"] = self.chunk_id
        if self.chunk_index is not None:
            out["chunk_index"] = self.chunk_index
        return out

    @classmethod
    def from_json_dict(cls, data: Dict[str, Any]) -> "PairRecord":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise RecordInvariantError(sorted(unknown)[0], f"unknown field: {sorted(unknown)[0]}")
        for name in ("id", "version", "hs_original", "cn_original"):
            if name not in data:
                raise RecordInvariantError(name, f"missing required field: {name}")
        rec = cls(
            id=str(data["id"]),
            version=str(data["version"]),
            hs_original=str(data["hs_original"]),
            cn_original=str(data["cn_original"]),
            hs_edited=data.get("hs_edited"),
            cn_edited=data.get("cn_edited"),
            status=Status(data.get("status", Status.UNTOUCHED.value)),
            target=TargetLabel.parse(data["target"]) if data.get("target") is not None else None,
            annotator=data.get("annotator"),
            strategy=data.get("strategy", SEED_STRATEGY),
            chunk_id=data.get("chunk_id"),
            chunk_index=data.get("chunk_index"),
        )
        rec.validate()
        return rec


@dataclass
class ReviewDecision:
    """An annotator's verdict on one pending record."""

    pair_id: str
    verdict: Status
    annotator: str
    hs_edited: Optional[str] = None
    cn_edited: Optional[str] = None
    target: Optional[TargetLabel] = None
    elapsed_seconds: float = 0.0

    def validate(self) -> None:
        if self.verdict not in (Status.UNTOUCHED, Status.MODIFIED, Status.DISCARDED):
            raise RecordInvariantError("verdict", f"invalid verdict: {self.verdict}")
        if self.verdict is Status.MODIFIED:
            if self.hs_edited is None or self.cn_edited is None:
                raise RecordInvariantError(
                    "cn_edited", "MODIFIED verdict requires both hs_edited and cn_edited"
                )
        else:
            if self.hs_edited is not None or self.cn_edited is not None:
                raise RecordInvariantError(
                    "hs_edited", f"edited fields not allowed with verdict {self.verdict.value}"
                )
        if self.verdict in ACCEPTED_STATUSES and self.target is None:
            raise RecordInvariantError("target", "accepted verdicts require a target label")
        if self.verdict is Status.DISCARDED and self.target is not None:
            raise RecordInvariantError("target", "DISCARDED verdicts carry no target label")

    def to_json_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "pair_id": self.pair_id,
            "verdict": self.verdict.value,
            "annotator": self.annotator,
            "elapsed_seconds": self.elapsed_seconds,
        }
        if self.hs_edited is not None:
            out["hs_edited"] = self.hs_edited
        if self.cn_edited is not None:
            out["cn_edited"] = self.cn_edited
        if self.target is not None:
            out["target"] = self.target.value
        return out

    @classmethod
    def from_json_dict(cls, data: Dict[str, Any]) -> "ReviewDecision":
        return cls(
            pair_id=str(data["pair_id"]),
            verdict=Status(data["verdict"]),
            annotator=str(data["annotator"]),
            hs_edited=data.get("hs_edited"),
            cn_edited=data.get("cn_edited"),
            target=TargetLabel.parse(data["target"]) if data.get("target") is not None else None,
            elapsed_seconds=float(data.get("elapsed_seconds", 0.0)),
        )


@dataclass
class DatasetVersion:
    """An ordered loop snapshot over pair records.

    ``predecessors`` is the full ordered chain back to the seed version, so a
    version's training lineage is ``predecessors + [name]``.
    """

    name: str
    quota: int
    predecessors: List[str] = field(default_factory=list)
    pair_ids: List[str] = field(default_factory=list)
    frozen: bool = False

    def to_json_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "quota": self.quota,
            "predecessors": list(self.predecessors),
            "pair_ids": list(self.pair_ids),
            "frozen": self.frozen,
        }

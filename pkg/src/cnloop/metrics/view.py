"""Immutable per-version snapshot consumed by the metric functions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional

from ..records import PairRecord, Status, TargetLabel


@dataclass
class VersionView:
    """Records of one version plus the per-chunk condition targets.

    The condition target is the hate target a chunk's generation was
    conditioned on (when the strategy implies one); it attributes discarded
    pairs, which carry no reviewer label, to a target for per-target
    denominators.
    """

    name: str
    records: List[PairRecord]
    condition_targets: Dict[str, Optional[TargetLabel]] = field(default_factory=dict)

    def accepted(self) -> List[PairRecord]:
        return [r for r in self.records if r.accepted]

    def administered(self) -> List[PairRecord]:
        return [r for r in self.records if r.administered]

    def modified(self) -> List[PairRecord]:
        return [r for r in self.records if r.status is Status.MODIFIED]

    def attributed_target(self, record: PairRecord) -> Optional[TargetLabel]:
        """Reviewer label when present, otherwise the chunk's condition target."""
        if record.target is not None:
            return record.target
        if record.chunk_id is not None:
            return self.condition_targets.get(record.chunk_id)
        return None

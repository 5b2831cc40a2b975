import json
import sys
from pathlib import Path
from typing import List, Optional

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cnloop.records import MAIN_TARGETS, PairRecord, Status, TargetLabel
from cnloop.metrics.view import VersionView


def seed_lines(n: int, targets=None) -> List[str]:
    """n seed records cycling over targets, with varied texts."""
    targets = targets or [t.value for t in MAIN_TARGETS]
    lines = []
    for i in range(n):
        target = targets[i % len(targets)]
        lines.append(
            json.dumps(
                {
                    "hs_original": f"hateful claim number {i} about {target.lower()}",
                    "cn_original": f"factual answer number {i} defending {target.lower()} with care",
                    "target": target,
                    "status": "UNTOUCHED",
                    "strategy": "SEED",
                }
            )
        )
    return lines


def make_record(
    rid: str,
    version: str = "V2",
    hs: str = "hs text",
    cn: str = "cn text",
    status: Status = Status.UNTOUCHED,
    target: Optional[TargetLabel] = TargetLabel.MUSLIMS,
    hs_edited: Optional[str] = None,
    cn_edited: Optional[str] = None,
    chunk_id: Optional[str] = None,
) -> PairRecord:
    rec = PairRecord(
        id=rid,
        version=version,
        hs_original=hs,
        cn_original=cn,
        hs_edited=hs_edited,
        cn_edited=cn_edited,
        status=status,
        target=target,
        chunk_id=chunk_id,
    )
    rec.validate()
    return rec


def make_view(records, name: str = "V2", condition_targets=None) -> VersionView:
    return VersionView(
        name=name, records=list(records), condition_targets=condition_targets or {}
    )


@pytest.fixture
def tmp_store_dir(tmp_path):
    return tmp_path / "store"

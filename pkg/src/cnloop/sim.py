"""Hermetic mock author and scripted reviewer for deterministic loop runs.

The mock author draws from closed per-target word pools so vocabulary
expansion buckets are analytically predictable; novel-word injection,
repetition bias and malformed chunks are all seed-driven knobs. The scripted
reviewer applies a fixed verdict/edit-operation distribution. With fixed
seeds an entire simulation, including every report, is byte-identical
across runs.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from .metrics.report import LoopReport
from .metrics.tokenizer import tokenize
from .orchestrator import Orchestrator, Strategy, StrategyKind
from .records import MAIN_TARGETS, ReviewDecision, Status, TargetLabel
from .store import CorpusStore
from .tokens import END_CN, END_HS, OPEN_CN, OPEN_HS, labeled_open_tag

_LABEL_RE = re.compile(r"<\|startofhs:\s*([^|<>]*?)\s*\|>")

#: Closed word pools per target. Kept deliberately mild and schematic; the
#: mock only has to exercise the pipeline, not to imitate real hate speech.
DEFAULT_TEMPLATE_POOLS: Dict[str, Dict[str, List[str]]] = {
    "DISABLED": {
        "nouns": ["disabled", "wheelchair", "accessibility", "ableism"],
        "hs": ["the disabled are a burden on everyone", "disabled people slow us down"],
        "cn": [
            "disabled people contribute to society in countless ways",
            "accessibility helps everyone not just the disabled",
        ],
    },
    "JEWS": {
        "nouns": ["jewish", "synagogue", "tradition", "antisemitism"],
        "hs": ["jewish people control everything", "jews cannot be trusted"],
        "cn": [
            "these conspiracy claims about jewish people are centuries old lies",
            "jewish communities enrich our shared culture",
        ],
    },
    "LGBT+": {
        "nouns": ["gay", "queer", "pride", "orientation"],
        "hs": ["gay people threaten our families", "being queer is a fashion"],
        "cn": [
            "love and orientation harm no family",
            "queer people have always existed in every society",
        ],
    },
    "MIGRANTS": {
        "nouns": ["migrants", "refugees", "border", "asylum"],
        "hs": ["migrants steal our jobs", "refugees bring only trouble"],
        "cn": [
            "migrants create jobs and pay taxes like everyone else",
            "refugees flee wars they did not start",
        ],
    },
    "MUSLIMS": {
        "nouns": ["muslim", "mosque", "faith", "islam"],
        "hs": ["muslims refuse to integrate", "islam is incompatible with us"],
        "cn": [
            "most muslims share the same daily worries as their neighbours",
            "faith and citizenship coexist peacefully for millions",
        ],
    },
    "POC": {
        "nouns": ["black", "community", "heritage", "racism"],
        "hs": ["black people are more violent", "they do not belong here"],
        "cn": [
            "crime follows poverty not skin colour",
            "our heritage is shared and diverse",
        ],
    },
    "WOMEN": {
        "nouns": ["women", "mothers", "equality", "sexism"],
        "hs": ["women belong in the kitchen", "women are too emotional to lead"],
        "cn": [
            "women lead companies countries and families every day",
            "equality benefits men and women alike",
        ],
    },
    "OTHER": {
        "nouns": ["people", "group", "minority", "stereotype"],
        "hs": ["that group ruins everything", "those people are all the same"],
        "cn": [
            "no group is all the same and stereotypes mislead",
            "judging people as a block is always wrong",
        ],
    },
}


@dataclass
class MockAuthorConfig:
    seed: int = 0
    template_pools: Dict[str, Dict[str, List[str]]] = field(
        default_factory=lambda: DEFAULT_TEMPLATE_POOLS
    )
    novel_word_rate: float = 0.1
    malformed_rate: float = 0.0
    repetition_bias: float = 0.2
    pairs_per_chunk: Tuple[int, int] = (3, 8)

    def __post_init__(self):
        for name, rate in (
            ("novel_word_rate", self.novel_word_rate),
            ("malformed_rate", self.malformed_rate),
            ("repetition_bias", self.repetition_bias),
        ):
            if not 0.0 <= rate <= 1.0:
                raise ValueError(f"{name} must be in [0, 1]")

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "MockAuthorConfig":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        if "pairs_per_chunk" in data:
            data["pairs_per_chunk"] = tuple(data["pairs_per_chunk"])
        return cls(**data)


class MockAuthor:
    """In-process author honoring the wire-protocol generate() contract."""

    def __init__(self, config: Optional[MockAuthorConfig] = None):
        self.config = config or MockAuthorConfig()
        self._rng = random.Random(self.config.seed)
        self._novel_counter = 0

    def _parse_condition(self, condition: str) -> Tuple[Optional[TargetLabel], str, bool]:
        """(label, trailing statement text, labeled?) of a condition."""
        match = _LABEL_RE.match(condition)
        if match:
            try:
                label = TargetLabel.parse(match.group(1))
            except ValueError:
                label = None
            return label, condition[match.end() :].strip(), True
        if condition.startswith(OPEN_HS):
            rest = condition[len(OPEN_HS) :].strip()
            if rest.endswith(END_HS):
                rest = rest[: -len(END_HS)].strip()
            return None, rest, False
        return None, condition.strip(), False

    def _infer_target(self, statement: str) -> Optional[str]:
        words = set(tokenize(statement))
        best_name = None
        best_score = 0
        for name, pools in self.config.template_pools.items():
            vocab = set()
            for texts in pools.values():
                for t in texts:
                    vocab.update(tokenize(t))
            score = len(words & vocab)
            if score > best_score:
                best_score = score
                best_name = name
        return best_name

    def _novel_word(self) -> str:
        self._novel_counter += 1
        return f"nw{self._novel_counter:04d}"

    def _make_pair(self, target_name: str, statement: str = "") -> Tuple[str, str]:
        pools = self.config.template_pools[target_name]
        rng = self._rng
        if statement:
            hs = f"{statement} {rng.choice(pools['nouns'])}"
        else:
            hs = f"{rng.choice(pools['hs'])} {rng.choice(pools['nouns'])}"
        cn = f"{rng.choice(pools['cn'])} {rng.choice(pools['nouns'])}"
        if rng.random() < self.config.novel_word_rate:
            cn = f"{cn} {self._novel_word()}"
        if rng.random() < self.config.repetition_bias:
            tokens = cn.split()
            phrase = " ".join(tokens[: min(3, len(tokens))])
            cn = f"{cn} {phrase}"
        return hs, cn

    def generate(
        self, condition: str, n_chunks: int = 1, max_tokens: Optional[int] = None
    ) -> List[str]:
        """Chunks following the pair grammar, except with probability
        ``malformed_rate`` a closing token is dropped."""
        label, statement, labeled = self._parse_condition(condition)
        rng = self._rng
        chunks: List[str] = []
        for _ in range(n_chunks):
            if label is not None:
                target_name = label.value
            elif statement:
                target_name = self._infer_target(statement) or rng.choice(
                    [t.value for t in MAIN_TARGETS]
                )
            else:
                target_name = rng.choice(list(self.config.template_pools))
            count = rng.randint(*self.config.pairs_per_chunk)
            lines: List[str] = []
            for i in range(count):
                hs, cn = self._make_pair(target_name, statement if i == 0 else "")
                open_tag = (
                    labeled_open_tag(TargetLabel.parse(target_name))
                    if labeled
                    else OPEN_HS
                )
                line = f"{open_tag} {hs} {END_HS} {OPEN_CN} {cn} {END_CN}"
                if rng.random() < self.config.malformed_rate:
                    # drop one closing token so the fragment cannot parse
                    victim = rng.choice([END_HS, END_CN])
                    line = line.replace(victim, "", 1)
                lines.append(line)
            chunks.append("\n".join(lines))
        return chunks


@dataclass
class ScriptedReviewerConfig:
    seed: int = 0
    accept_untouched: float = 0.15
    accept_modified: float = 0.5
    edit_weights: Dict[str, float] = field(
        default_factory=lambda: {"substitute": 4, "insert": 3, "delete": 2, "shift": 1}
    )
    edits_per_pair: Tuple[int, int] = (1, 3)
    #: "condition" uses the chunk's condition target when present; the
    #: fallback (and the policy "match") scores the pair against the author
    #: pools; "uniform" draws a main target at random.
    label_policy: str = "condition"
    label_pools: Dict[str, Dict[str, List[str]]] = field(
        default_factory=lambda: DEFAULT_TEMPLATE_POOLS
    )
    reviewer_words: List[str] = field(
        default_factory=lambda: [
            "actually",
            "evidence",
            "research",
            "kindness",
            "respect",
            "facts",
        ]
    )
    reviewer_novel_rate: float = 0.2

    def __post_init__(self):
        if self.accept_untouched + self.accept_modified > 1.0 + 1e-12:
            raise ValueError("acceptance probabilities must sum to at most 1")

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "ScriptedReviewerConfig":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        if "edits_per_pair" in data:
            data["edits_per_pair"] = tuple(data["edits_per_pair"])
        return cls(**data)


class ScriptedReviewer:
    """Deterministic reviewer drawing verdicts and edits from a seeded RNG."""

    def __init__(self, config: Optional[ScriptedReviewerConfig] = None):
        self.config = config or ScriptedReviewerConfig()
        self._rng = random.Random(self.config.seed)
        self._novel_counter = 0

    def _pick_label(self, hs: str, cn: str, condition_target) -> TargetLabel:
        cfg = self.config
        if cfg.label_policy == "condition" and condition_target is not None:
            return condition_target
        if cfg.label_policy in ("condition", "match"):
            words = set(tokenize(hs)) | set(tokenize(cn))
            best, best_score = None, 0
            for name, pools in cfg.label_pools.items():
                vocab = set()
                for texts in pools.values():
                    for t in texts:
                        vocab.update(tokenize(t))
                score = len(words & vocab)
                if score > best_score:
                    best, best_score = name, score
            if best is not None:
                return TargetLabel.parse(best)
        return self._rng.choice(list(MAIN_TARGETS))

    def _edit_tokens(self, tokens: List[str]) -> List[str]:
        rng = self._rng
        cfg = self.config
        ops = list(cfg.edit_weights)
        weights = [cfg.edit_weights[o] for o in ops]
        out = list(tokens)
        for _ in range(rng.randint(*cfg.edits_per_pair)):
            op = rng.choices(ops, weights=weights)[0]
            if op == "substitute" and out:
                out[rng.randrange(len(out))] = self._edit_word()
            elif op == "insert":
                out.insert(rng.randint(0, len(out)), self._edit_word())
            elif op == "delete" and len(out) > 2:
                del out[rng.randrange(len(out))]
            elif op == "shift" and len(out) > 3:
                i = rng.randrange(len(out) - 1)
                length = rng.randint(1, min(3, len(out) - i))
                block = out[i : i + length]
                rest = out[:i] + out[i + length :]
                j = rng.randint(0, len(rest))
                out = rest[:j] + block + rest[j:]
        return out

    def _edit_word(self) -> str:
        rng = self._rng
        if rng.random() < self.config.reviewer_novel_rate:
            self._novel_counter += 1
            return f"rw{self._novel_counter:04d}"
        return rng.choice(self.config.reviewer_words)

    def review(self, record, condition_target=None) -> ReviewDecision:
        rng = self._rng
        cfg = self.config
        roll = rng.random()
        elapsed = round(rng.uniform(5.0, 120.0), 1)
        if roll < cfg.accept_untouched:
            return ReviewDecision(
                pair_id=record.id,
                verdict=Status.UNTOUCHED,
                annotator=f"sim-reviewer-{cfg.seed}",
                target=self._pick_label(record.hs_original, record.cn_original, condition_target),
                elapsed_seconds=elapsed,
            )
        if roll < cfg.accept_untouched + cfg.accept_modified:
            hs_tokens = record.hs_original.split()
            cn_tokens = self._edit_tokens(record.cn_original.split())
            if rng.random() < 0.3:
                hs_tokens = self._edit_tokens(hs_tokens)
            hs_edited = " ".join(hs_tokens)
            cn_edited = " ".join(cn_tokens)
            if (hs_edited, cn_edited) == (record.hs_original, record.cn_original):
                cn_edited = cn_edited + " " + self._edit_word()
            return ReviewDecision(
                pair_id=record.id,
                verdict=Status.MODIFIED,
                annotator=f"sim-reviewer-{cfg.seed}",
                hs_edited=hs_edited,
                cn_edited=cn_edited,
                target=self._pick_label(record.hs_original, record.cn_original, condition_target),
                elapsed_seconds=elapsed,
            )
        return ReviewDecision(
            pair_id=record.id,
            verdict=Status.DISCARDED,
            annotator=f"sim-reviewer-{cfg.seed}",
            elapsed_seconds=elapsed,
        )


class QuotaStallError(Exception):
    """A loop could not reach its quota within the round budget."""

    def __init__(self, loop_name: str, accepted: int, quota: int, rounds: int):
        super().__init__(
            f"loop {loop_name} stalled at {accepted}/{quota} accepted after {rounds} rounds"
        )
        self.loop_name = loop_name
        self.accepted = accepted
        self.quota = quota


def make_seed_pairs(
    pools: Dict[str, Dict[str, List[str]]], per_target: int = 4
) -> List[str]:
    """Deterministic seed JSONL lines built from the template pools."""
    lines = []
    for name, pool in pools.items():
        if name == "OTHER":
            continue
        for i in range(per_target):
            hs = pool["hs"][i % len(pool["hs"])]
            cn = pool["cn"][i % len(pool["cn"])]
            noun = pool["nouns"][i % len(pool["nouns"])]
            lines.append(
                json.dumps(
                    {
                        "hs_original": f"{hs} {noun}",
                        "cn_original": f"{cn} {noun}",
                        "target": name,
                        "status": "UNTOUCHED",
                        "strategy": "SEED",
                    },
                    ensure_ascii=False,
                )
            )
    return lines


def run_simulation(
    loops: int,
    author_config: Optional[MockAuthorConfig] = None,
    reviewer_config: Optional[ScriptedReviewerConfig] = None,
    quota: int = 50,
    chunk_admit_limit: Optional[int] = 5,
    strategy_kind: StrategyKind = StrategyKind.LAB,
    seed_per_target: int = 4,
    store_root: Union[str, Path, None] = None,
    max_rounds: int = 200,
    chunks_per_round: int = 10,
) -> List[LoopReport]:
    """Run ``loops`` full generate-review-close iterations on a fresh store.

    Deterministic under fixed seeds. Raises :class:`QuotaStallError` when a
    loop makes no progress towards its quota.
    """
    author_config = author_config or MockAuthorConfig()
    reviewer_config = reviewer_config or ScriptedReviewerConfig()
    store = CorpusStore(store_root)
    author = MockAuthor(author_config)
    reviewer = ScriptedReviewer(reviewer_config)
    orchestrator = Orchestrator(store, author=author)

    seed_lines = make_seed_pairs(author_config.template_pools, seed_per_target)
    store.import_pairs(seed_lines, "V1")
    store.freeze("V1")

    reports: List[LoopReport] = []
    base = "V1"
    for i in range(loops):
        name = f"V{i + 2}"
        strategy = Strategy(kind=strategy_kind)
        orchestrator.start_loop(
            name, strategy, quota=quota, chunk_admit_limit=chunk_admit_limit, base=base
        )
        annotator = f"sim-reviewer-{reviewer_config.seed}"
        rounds = 0
        while store.accepted_count(name) < quota:
            rounds += 1
            if rounds > max_rounds:
                raise QuotaStallError(name, store.accepted_count(name), quota, rounds - 1)
            orchestrator.request_generation(name, n_chunks=chunks_per_round)
            while store.accepted_count(name) < quota:
                record = orchestrator.next_for_review(annotator)
                if record is None:
                    break
                chunk = store.get_chunk(record.chunk_id) if record.chunk_id else None
                condition_target = chunk.condition_target if chunk else None
                decision = reviewer.review(record, condition_target)
                orchestrator.submit_review(decision)
        _, report = orchestrator.close_loop(name)
        reports.append(report)
        base = name
    return reports

"""cnloop: human-in-the-loop counter-narrative corpus workbench."""

from .author import AuthorConfig, AuthorError, HttpAuthor
from .metrics import (
    BalanceMode,
    HterScope,
    LoopReport,
    UnitSelector,
    VersionView,
    acceptance_rates,
    distribution_balance,
    hter_aggregate,
    imbalance_degree,
    length_stats,
    loop_report,
    novelty,
    repetition_rate,
    report_to_dict,
    ter,
    tokenize,
    vocabulary_expansion,
)
from .orchestrator import Orchestrator, Strategy, StrategyKind
from .parsing import parse_generation
from .records import (
    MAIN_TARGETS,
    DatasetVersion,
    PairRecord,
    ReviewDecision,
    Status,
    TargetLabel,
)
from .sim import (
    MockAuthor,
    MockAuthorConfig,
    QuotaStallError,
    ScriptedReviewer,
    ScriptedReviewerConfig,
    run_simulation,
)
from .store import CorpusStore, GenerationChunk
from .tokens import ExportFormat

__version__ = "0.1.0"

__all__ = [
    "AuthorConfig",
    "AuthorError",
    "BalanceMode",
    "CorpusStore",
    "DatasetVersion",
    "ExportFormat",
    "GenerationChunk",
    "HterScope",
    "HttpAuthor",
    "LoopReport",
    "MAIN_TARGETS",
    "MockAuthor",
    "MockAuthorConfig",
    "Orchestrator",
    "PairRecord",
    "QuotaStallError",
    "ReviewDecision",
    "ScriptedReviewer",
    "ScriptedReviewerConfig",
    "Status",
    "Strategy",
    "StrategyKind",
    "TargetLabel",
    "UnitSelector",
    "VersionView",
    "acceptance_rates",
    "distribution_balance",
    "hter_aggregate",
    "imbalance_degree",
    "length_stats",
    "loop_report",
    "novelty",
    "parse_generation",
    "repetition_rate",
    "report_to_dict",
    "run_simulation",
    "ter",
    "tokenize",
    "vocabulary_expansion",
]

"""Matplotlib figures for the report path, written as PNG files."""

from __future__ import annotations

from pathlib import Path
from typing import Dict, List, Sequence, Union

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .metrics.report import LoopReport  # noqa: E402
from .metrics.tokenizer import UnitSelector  # noqa: E402
from .records import MAIN_TARGETS  # noqa: E402


def _versions(reports: Sequence[LoopReport]) -> List[str]:
    return [r.version for r in reports]


def acceptance_figure(reports: Sequence[LoopReport], path: Path) -> None:
    versions = _versions(reports)
    x = range(len(versions))
    width = 0.27
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar([i - width for i in x], [r.acceptance.untouched_pct for r in reports],
           width, label="untouched")
    ax.bar(list(x), [r.acceptance.modified_pct for r in reports], width, label="modified")
    ax.bar([i + width for i in x], [r.acceptance.discarded_pct for r in reports],
           width, label="discarded")
    ax.set_xticks(list(x))
    ax.set_xticklabels(versions)
    ax.set_ylabel("% of administered pairs")
    ax.set_title("Reviewer verdicts per loop")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def hter_figure(reports: Sequence[LoopReport], path: Path) -> None:
    versions = _versions(reports)
    unit = UnitSelector.PAIR
    all_vals = [r.units[unit].hter_all.micro for r in reports]
    mod_vals = [r.units[unit].hter_modified.micro for r in reports]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(versions, all_vals, marker="o", label="HTER (all)")
    ax.plot(versions, mod_vals, marker="s", label="HTER (modified)")
    ax.axhline(0.4, color="grey", linestyle="--", linewidth=1, label="0.4 threshold")
    ax.set_ylabel("HTER")
    ax.set_title("Post-editing effort per loop")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def quality_figure(reports: Sequence[LoopReport], path: Path) -> None:
    versions = _versions(reports)
    unit = UnitSelector.PAIR
    novelty = [r.units[unit].novelty_cumulative.micro for r in reports]
    rr = [r.units[unit].repetition_rate.micro for r in reports]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    ax1.plot(versions, novelty, marker="o")
    ax1.set_title("Cumulative novelty")
    ax2.plot(versions, rr, marker="o", color="tab:red")
    ax2.set_title("Repetition rate")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def balance_figure(reports: Sequence[LoopReport], path: Path) -> None:
    versions = _versions(reports)
    ids = [r.imbalance for r in reports]
    rmse = [r.balance.perc_7.rmse if r.balance.perc_7 else None for r in reports]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    ax1.plot(versions, ids, marker="o")
    ax1.set_title("Imbalance degree (7 main targets)")
    ax2.plot(versions, rmse, marker="o", color="tab:green")
    ax2.set_title("RMSE (perc.fr.) 7 cat.")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def target_distribution_figure(reports: Sequence[LoopReport], path: Path) -> None:
    versions = _versions(reports)
    fig, ax = plt.subplots(figsize=(8, 4.5))
    bottom = [0.0] * len(reports)
    for target in MAIN_TARGETS:
        values = [float(r.target_counts.get(target, 0)) for r in reports]
        ax.bar(versions, values, bottom=bottom, label=target.value)
        bottom = [b + v for b, v in zip(bottom, values)]
    ax.set_ylabel("accepted pairs")
    ax.set_title("Target distribution per loop")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def vocabulary_figure(reports: Sequence[LoopReport], path: Path) -> None:
    versions = _versions(reports)
    buckets = (
        "author_novel",
        "author_same_target",
        "author_other_target",
        "reviewer_novel",
        "reviewer_not_novel",
    )
    fig, ax = plt.subplots(figsize=(8, 4.5))
    for bucket in buckets:
        values = [
            r.vocabulary.macro_avg.get(bucket)
            if r.vocabulary is not None and r.vocabulary.macro_avg is not None
            else None
            for r in reports
        ]
        ax.plot(versions, values, marker="o", label=bucket.replace("_", " "))
    ax.set_ylabel("% of words (macro avg)")
    ax.set_title("Vocabulary expansion per loop")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def render_figures(
    reports: Sequence[LoopReport], outdir: Union[str, Path]
) -> Dict[str, Path]:
    """Render the full figure set; returns name -> file path."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    figures = {
        "acceptance": acceptance_figure,
        "hter": hter_figure,
        "quality": quality_figure,
        "balance": balance_figure,
        "target_distribution": target_distribution_figure,
        "vocabulary": vocabulary_figure,
    }
    out: Dict[str, Path] = {}
    for name, render in figures.items():
        path = outdir / f"{name}.png"
        render(reports, path)
        out[name] = path
    return out

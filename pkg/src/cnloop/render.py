"""Report rendering: canonical JSON, aligned text table and CSV.

The table mirrors the comparison-table row labels, one column per version;
undefined values render as NaN.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from .metrics.report import LoopReport, report_to_dict
from .metrics.tokenizer import UnitSelector

Getter = Callable[[Dict[str, Any]], Optional[float]]


def _g(*path: str) -> Getter:
    def get(d: Dict[str, Any]) -> Optional[float]:
        cur: Any = d
        for key in path:
            if cur is None:
                return None
            cur = cur.get(key)
        return cur

    return get


def _unit_rows(unit: str) -> List[Tuple[str, Getter]]:
    u = unit.lower()
    return [
        ("HTER (all)", _g("units", u, "hter_all", "micro")),
        ("HTER macro avg (all)", _g("units", u, "hter_all", "macro_avg")),
        ("HTER macro std (all)", _g("units", u, "hter_all", "macro_std")),
        ("HTER (mod.)", _g("units", u, "hter_modified", "micro")),
        ("HTER macro avg (mod.)", _g("units", u, "hter_modified", "macro_avg")),
        ("HTER macro std (mod.)", _g("units", u, "hter_modified", "macro_std")),
        ("Nov. cumulative", _g("units", u, "novelty_cumulative", "micro")),
        ("Nov. cumulative macro avg", _g("units", u, "novelty_cumulative", "macro_avg")),
        ("Nov. cumulative macro std", _g("units", u, "novelty_cumulative", "macro_std")),
        ("Nov. V(i) - V(i+1)", _g("units", u, "novelty_vs_previous", "micro")),
        ("Nov. V(i) - V(i+1) macro avg", _g("units", u, "novelty_vs_previous", "macro_avg")),
        ("Nov. V(i) - V(i+1) macro std", _g("units", u, "novelty_vs_previous", "macro_std")),
        ("Nov. V(1) - V(i)", _g("units", u, "novelty_vs_first", "micro")),
        ("Nov. V(1) - V(i) macro avg", _g("units", u, "novelty_vs_first", "macro_avg")),
        ("Nov. V(1) - V(i) macro std", _g("units", u, "novelty_vs_first", "macro_std")),
        ("RR", _g("units", u, "repetition_rate", "micro")),
        ("RR macro avg", _g("units", u, "repetition_rate", "macro_avg")),
        ("RR macro std", _g("units", u, "repetition_rate", "macro_std")),
    ]


def table_rows(unit: UnitSelector = UnitSelector.PAIR) -> List[Tuple[str, Getter]]:
    """Row labels and value getters for the aligned table.

    The PAIR unit carries the full comparison-table row set; HS/CN carry
    their per-unit slice only.
    """
    if unit is not UnitSelector.PAIR:
        return _unit_rows(unit.value)
    rows: List[Tuple[str, Getter]] = [
        ("Imbalance degree", _g("imbalance_degree")),
        ("RMSE (abs.fr.) 7 cat.", _g("balance", "abs_7", "rmse")),
        ("RMSE (perc.fr.) 7 cat.", _g("balance", "perc_7", "rmse")),
        ("RMSE (abs.fr.) 6 cat.", _g("balance", "abs_6", "rmse")),
        ("RMSE (perc.fr.) 6 cat.", _g("balance", "perc_6", "rmse")),
        ("MSE (abs.fr.) 7 cat.", _g("balance", "abs_7", "mse")),
        ("MSE (perc.fr.) 7 cat.", _g("balance", "perc_7", "mse")),
        ("MSE (abs.fr.) 6 cat.", _g("balance", "abs_6", "mse")),
        ("MSE (perc.fr.) 6 cat.", _g("balance", "perc_6", "mse")),
        ("Accept.rate (untouched)", _g("acceptance", "untouched_pct")),
        ("Accept.rate (modified)", _g("acceptance", "modified_pct")),
        ("Percentage of discarded pairs", _g("acceptance", "discarded_pct")),
        ("Accept.rate (untouched) macro avg", _g("acceptance", "untouched_macro_avg")),
        ("Accept.rate (untouched) macro std", _g("acceptance", "untouched_macro_std")),
        ("Accept.rate (mod.) macro avg", _g("acceptance", "modified_macro_avg")),
        ("Accept.rate (mod.) macro std", _g("acceptance", "modified_macro_std")),
        ("Avg length CN_or annotated", _g("lengths", "cn_or_annotated")),
        ("Avg length CN_ed annotated", _g("lengths", "cn_ed_annotated")),
        ("Avg length CN_or untouched", _g("lengths", "cn_or_untouched")),
        ("Avg length CN_or discarded", _g("lengths", "cn_or_discarded")),
        ("Avg length HS_or untouched", _g("lengths", "hs_or_untouched")),
    ]
    rows.extend(_unit_rows("pair"))
    rows.extend(
        [
            ("Vocab. author novel", _g("vocabulary", "macro_avg", "author_novel")),
            ("Vocab. author novel (std)", _g("vocabulary", "macro_std", "author_novel")),
            ("Vocab. author same target", _g("vocabulary", "macro_avg", "author_same_target")),
            ("Vocab. author same target (std)", _g("vocabulary", "macro_std", "author_same_target")),
            ("Vocab. author other target", _g("vocabulary", "macro_avg", "author_other_target")),
            ("Vocab. author other target (std)", _g("vocabulary", "macro_std", "author_other_target")),
            ("Vocab. human novel", _g("vocabulary", "macro_avg", "reviewer_novel")),
            ("Vocab. human novel (std)", _g("vocabulary", "macro_std", "reviewer_novel")),
            ("Vocab. human not novel", _g("vocabulary", "macro_avg", "reviewer_not_novel")),
            ("Vocab. human not novel (std)", _g("vocabulary", "macro_std", "reviewer_not_novel")),
        ]
    )
    return rows


def _fmt(value: Optional[float]) -> str:
    if value is None:
        return "NaN"
    return f"{value:.3f}"


def reports_to_table(
    reports: Sequence[LoopReport], unit: UnitSelector = UnitSelector.PAIR
) -> str:
    """Aligned-column text table, one column per report."""
    dicts = [report_to_dict(r) for r in reports]
    rows = table_rows(unit)
    headers = [""] + [d["version"] for d in dicts]
    body = [[label] + [_fmt(get(d)) for d in dicts] for label, get in rows]
    widths = [max(len(line[i]) for line in [headers] + body) for i in range(len(headers))]
    out_lines = []
    for line in [headers] + body:
        cells = [line[0].ljust(widths[0])] + [
            c.rjust(widths[i + 1]) for i, c in enumerate(line[1:])
        ]
        out_lines.append("  ".join(cells).rstrip())
    return "\n".join(out_lines) + "\n"


def reports_to_csv(
    reports: Sequence[LoopReport], unit: UnitSelector = UnitSelector.PAIR
) -> str:
    """Delimited form of the same table."""
    dicts = [report_to_dict(r) for r in reports]
    rows = table_rows(unit)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["metric"] + [d["version"] for d in dicts])
    for label, get in rows:
        writer.writerow([label] + [_fmt(get(d)) for d in dicts])
    return buf.getvalue()


def reports_to_json(reports: Sequence[LoopReport]) -> str:
    """Canonical JSON: a list of report objects with fixed field order."""
    return json.dumps([report_to_dict(r) for r in reports], ensure_ascii=False, indent=2)

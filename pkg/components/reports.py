"""
Report Components
Tabular (pandas) and JSON renderings of engine results
"""

from typing import Any, Dict, Iterable, List, Optional, Sequence

import pandas as pd

from components.analysis import CoincidenceReport
from components.as_engine import Interpretation
from components.epistemic import BoundReport, Guess, Scenario, WorldView
from utils.helpers import format_atom_set, format_bool, format_family, set_key, sorted_atoms, truncate_text


def atom_list(m: Iterable[Any]) -> List[str]:
    return [str(a) for a in sorted_atoms(m)]


def sorted_answer_sets(sets: Iterable[Interpretation]) -> List[Interpretation]:
    return sorted(sets, key=set_key)


def render(df: pd.DataFrame) -> str:
    """Plain-text table"""
    if df.empty:
        return "(empty)"
    return df.to_string(index=False)


# ==================== ANSWER SETS ====================

def answer_sets_lines(sets: Iterable[Interpretation]) -> List[str]:
    return [format_atom_set(m) for m in sorted_answer_sets(sets)]


def answer_sets_payload(sets: Iterable[Interpretation]) -> List[List[str]]:
    return [atom_list(m) for m in sorted_answer_sets(sets)]


def answer_sets_frame(sets: Iterable[Interpretation]) -> pd.DataFrame:
    rows = [
        {"#": i, "size": len(m), "answer set": format_atom_set(m)}
        for i, m in enumerate(sorted_answer_sets(sets), 1)
    ]
    return pd.DataFrame(rows, columns=["#", "size", "answer set"])


# ==================== SCENARIOS AND WORLD VIEWS ====================

def guess_payload(g: Guess) -> List[str]:
    return [str(el) for el in g.sorted_literals()]


def scenarios_payload(scenarios: Sequence[Scenario], maximal: Sequence[Scenario]) -> List[Dict[str, Any]]:
    return [
        {
            "positive": [str(el) for el in sorted(s.positive)],
            "negative": [f"not {el}" for el in sorted(s.negative)],
            "maximal": s in maximal,
        }
        for s in scenarios
    ]


def scenarios_lines(scenarios: Sequence[Scenario], maximal: Sequence[Scenario]) -> List[str]:
    return [f"S{i}{'*' if s in maximal else ''}: {s}" for i, s in enumerate(scenarios, 1)]


def world_views_payload(views: Sequence[WorldView], view_atoms: Optional[Iterable[Any]] = None) -> Dict[str, Any]:
    payload: Dict[str, Any] = {
        "world_views": [
            {
                "index": wv.index,
                "guess": guess_payload(wv.guess),
                "answer_sets": answer_sets_payload(wv.answer_sets),
            }
            for wv in views
        ]
    }
    if view_atoms is not None:
        payload["view_atoms"] = atom_list(view_atoms)
    return payload


def world_views_frame(views: Sequence[WorldView]) -> pd.DataFrame:
    rows = [
        {
            "view": wv.index,
            "guess": str(wv.guess),
            "answer sets": len(wv.answer_sets),
            "family": truncate_text(format_family(wv.answer_sets), 100),
        }
        for wv in views
    ]
    return pd.DataFrame(rows, columns=["view", "guess", "answer sets", "family"])


# ==================== ANALYSIS ====================

def cycles_frame(report: CoincidenceReport) -> pd.DataFrame:
    cycles = report.cycles.cycles if report.cycles else []
    rows = []
    for c in cycles:
        handles = report.cycles.handles.get(c, []) if report.cycles else []
        rows.append({
            "cycle": "[" + ", ".join(str(a) for a in c.atoms) + "]",
            "parity": c.parity.value,
            "handles": "; ".join(
                f"{h.kind.value}: {', '.join(str(l) for l in h.literals) or 'fact'}" for h in handles
            ),
        })
    return pd.DataFrame(rows, columns=["cycle", "parity", "handles"])


def coincidence_payload(report: CoincidenceReport) -> Dict[str, Any]:
    cycles = report.cycles
    return {
        "call_consistent": report.call_consistent,
        "condition1": report.condition1,
        "condition2": report.condition2,
        "witnesses": list(report.witnesses),
        "truncated": bool(cycles and cycles.truncated),
        "cycles": [
            {
                "atoms": [str(a) for a in c.atoms],
                "parity": c.parity.value,
                "handles": [
                    {"kind": h.kind.value, "rule": str(h.rule), "literals": [str(l) for l in h.literals]}
                    for h in cycles.handles.get(c, [])
                ],
            }
            for c in (cycles.cycles if cycles else [])
        ],
    }


def coincidence_lines(report: CoincidenceReport) -> List[str]:
    lines = [
        f"call_consistent: {format_bool(report.call_consistent)}",
        f"condition1: {format_bool(report.condition1)}",
        f"condition2: {format_bool(report.condition2)}",
    ]
    frame = cycles_frame(report)
    if not frame.empty:
        lines.append(render(frame))
    lines.extend(report.witnesses)
    return lines


# ==================== BOUND ====================

def bound_payload(report: BoundReport) -> Dict[str, Any]:
    payload = {
        "n_hat": report.n_hat,
        "bound": report.bound,
        "n_heads": report.n_heads,
        "n_epistemic_atoms": report.n_epistemic_atoms,
        "bound_by_heads": report.bound_by_heads,
        "bound_by_epistemic_atoms": report.bound_by_epistemic_atoms,
    }
    if report.scenario_count is not None:
        payload["scenarios"] = report.scenario_count
    if report.simplified_answer_sets is not None:
        payload["simplified_answer_sets"] = report.simplified_answer_sets
    return payload


def bound_frame(report: BoundReport) -> pd.DataFrame:
    payload = bound_payload(report)
    df = pd.DataFrame({"quantity": list(payload), "value": list(payload.values())})
    df["value"] = df["value"].map(lambda v: f"{v:.4g}" if isinstance(v, float) else str(v))
    return df

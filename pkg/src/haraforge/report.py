"""Human-readable outputs: the grouped safety-goal table, ASIL histograms,
and markdown rendering of tables and diff reports."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .diffing import DiffReport, classify_refinement
from .model import AsilLevel, HaraDocument, SafetyGoal


@dataclass(frozen=True)
class GoalGroup:
    label: str
    goals: tuple[SafetyGoal, ...]


@dataclass(frozen=True)
class GoalTable:
    title: str
    revision: int
    groups: tuple[GoalGroup, ...]
    warnings: tuple[str, ...] = ()


def safety_goal_table(doc: HaraDocument) -> GoalTable:
    """Group goals by mode applicability: all modes, the non-automated modes,
    the automated-mode set, then a trailing group for anything else.

    Group membership is computed from the applicability sets, never from
    hardcoded mode names, so the table generalizes beyond any one item.
    """
    all_modes = frozenset(doc.item.mode_ids())
    manual_modes = frozenset(doc.item.manual_mode_ids())
    automated_modes = frozenset(doc.item.automated_mode_ids())

    buckets: dict[str, list[SafetyGoal]] = {"all": [], "manual": [], "automated": [], "other": []}
    warnings = []
    for goal in doc.goals:
        modes = frozenset(goal.modes)
        if modes and modes == all_modes:
            buckets["all"].append(goal)
        elif modes and modes == manual_modes:
            buckets["manual"].append(goal)
        elif modes and modes == automated_modes:
            buckets["automated"].append(goal)
        else:
            buckets["other"].append(goal)
            warnings.append(f"goal {goal.id} matches no applicability group")

    def label(mode_ids: frozenset[str]) -> str:
        names = [m.name for m in doc.item.modes if m.id in mode_ids]
        return ", ".join(names)

    groups = []
    if buckets["all"]:
        groups.append(GoalGroup("All operating modes", tuple(buckets["all"])))
    if buckets["manual"]:
        groups.append(GoalGroup(label(manual_modes), tuple(buckets["manual"])))
    if buckets["automated"]:
        groups.append(GoalGroup(label(automated_modes), tuple(buckets["automated"])))
    if buckets["other"]:
        groups.append(GoalGroup("Other", tuple(buckets["other"])))
    return GoalTable(doc.title, doc.revision, tuple(groups), tuple(warnings))


def asil_histogram(doc: HaraDocument) -> dict[AsilLevel, int]:
    """Entry count per ASIL; every level is present, counts sum to |entries|."""
    counts = {level: 0 for level in AsilLevel}
    for entry in doc.entries:
        counts[entry.asil] += 1
    return counts


def render_histogram(counts: dict[AsilLevel, int]) -> str:
    lines = ["| ASIL | Entries |", "| --- | --- |"]
    for level in AsilLevel:
        lines.append(f"| {level.name} | {counts.get(level, 0)} |")
    return "\n".join(lines) + "\n"


def _cell(text: str) -> str:
    return text.replace("|", "\\|")


def _render_goal_table(table: GoalTable) -> str:
    lines = [f"# {table.title} (revision {table.revision})", ""]
    for warning in table.warnings:
        lines.append(f"> warning: {warning}")
    if table.warnings:
        lines.append("")
    for group in table.groups:
        lines.append(f"## {group.label}")
        lines.append("")
        lines.append("| ID | Safety goal | ASIL |")
        lines.append("| --- | --- | --- |")
        for goal in group.goals:
            stated = goal.asil.name if goal.asil is not None else "-"
            lines.append(f"| {goal.id} | {_cell(goal.text)} | {stated} |")
        lines.append("")
    while lines and lines[-1] == "":
        lines.pop()
    return "\n".join(lines) + "\n"


def _fmt(value: object) -> str:
    if value is None:
        return "-"
    if isinstance(value, AsilLevel):
        return value.name
    if isinstance(value, tuple):
        return "[" + ", ".join(str(v) for v in value) + "]"
    if hasattr(value, "name") and not isinstance(value, str):
        return value.name  # rating class enums
    return str(value)


def _render_diff(report: DiffReport) -> str:
    lines = [f"# {report.title}: revision {report.base_revision} to {report.next_revision}", ""]
    if report.base_mismatch:
        lines.append(
            f"> warning: revision {report.next_revision} is not based on revision {report.base_revision}"
        )
        lines.append("")
    if report.added:
        lines.append("## Added entries")
        lines.append("")
        for entry in report.added:
            lines.append(f"- {entry.id} (ASIL {entry.asil.name}, goal {entry.goal_id})")
        lines.append("")
    if report.removed:
        lines.append("## Removed entries")
        lines.append("")
        for entry in report.removed:
            lines.append(f"- {entry.id} (ASIL {entry.asil.name}, goal {entry.goal_id})")
        lines.append("")
    if report.modified:
        lines.append("## Modified entries")
        lines.append("")
        for change in report.modified:
            deltas = "; ".join(f"{c.field} {_fmt(c.old)} -> {_fmt(c.new)}" for c in change.changes)
            lines.append(f"- {change.id}: {deltas}")
        lines.append("")
    if report.splits:
        lines.append("## Splits")
        lines.append("")
        for split in report.splits:
            lines.append(f"- {split.parent_stem} -> {', '.join(str(i) for i in split.new_ids)}")
        lines.append("")
    if report.goals_added or report.goals_removed or report.goals_modified:
        lines.append("## Safety goals")
        lines.append("")
        for goal in report.goals_added:
            lines.append(f"- added {goal.id}: {goal.text}")
        for goal in report.goals_removed:
            lines.append(f"- removed {goal.id}: {goal.text}")
        for change in report.goals_modified:
            deltas = "; ".join(f"{c.field} {_fmt(c.old)} -> {_fmt(c.new)}" for c in change.changes)
            lines.append(f"- modified {change.id}: {deltas}")
        lines.append("")
    if report.functions_added or report.functions_removed:
        lines.append("## Function set")
        lines.append("")
        for fn in report.functions_added:
            lines.append(f"- added {fn}")
        for fn in report.functions_removed:
            lines.append(f"- removed {fn}")
        lines.append("")
    if report.modes_added or report.modes_removed:
        lines.append("## Mode set")
        lines.append("")
        for mode in report.modes_added:
            lines.append(f"- added {mode}")
        for mode in report.modes_removed:
            lines.append(f"- removed {mode}")
        lines.append("")
    if report.reused_stems:
        lines.append("## Id stability")
        lines.append("")
        for stem in report.reused_stems:
            lines.append(f"- stem {stem} reuses a discarded id")
        lines.append("")
    lines.append(f"Classification: {classify_refinement(report).value}")
    return "\n".join(lines) + "\n"


def render_markdown(value: Union[GoalTable, DiffReport]) -> str:
    """Deterministic markdown for a goal table or a diff report."""
    if isinstance(value, GoalTable):
        return _render_goal_table(value)
    if isinstance(value, DiffReport):
        return _render_diff(value)
    raise TypeError(f"cannot render {type(value).__name__}")

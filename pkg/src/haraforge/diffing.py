"""Semantic diff between document revisions and refinement classification.

Identity is the entry id: ids are the traceability anchor across revisions,
so no textual similarity matching is attempted. A suffixed id added next to
an existing stem is reported as a split of that stem.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Collection, Iterable

from .model import EntryId, HaraDocument, HazardEntry, RevisionHistory, SafetyGoal
from .validator import Finding


class RefinementClass(str, Enum):
    NONE = "none"
    ITEM_REFINEMENT = "item-refinement"
    SAFETY_REFINEMENT = "safety-refinement"
    INVALID = "invalid"


@dataclass(frozen=True)
class FieldChange:
    field: str
    old: object
    new: object


@dataclass(frozen=True)
class EntryChange:
    id: EntryId
    changes: tuple[FieldChange, ...]

    def change(self, field_name: str) -> FieldChange | None:
        for change in self.changes:
            if change.field == field_name:
                return change
        return None


@dataclass(frozen=True)
class GoalChange:
    id: str
    changes: tuple[FieldChange, ...]

    def change(self, field_name: str) -> FieldChange | None:
        for change in self.changes:
            if change.field == field_name:
                return change
        return None


@dataclass(frozen=True)
class Split:
    parent_stem: int
    new_ids: tuple[EntryId, ...]


@dataclass(frozen=True)
class DiffReport:
    title: str
    base_revision: int
    next_revision: int
    added: tuple[HazardEntry, ...] = ()
    removed: tuple[HazardEntry, ...] = ()
    modified: tuple[EntryChange, ...] = ()
    goals_added: tuple[SafetyGoal, ...] = ()
    goals_removed: tuple[SafetyGoal, ...] = ()
    goals_modified: tuple[GoalChange, ...] = ()
    splits: tuple[Split, ...] = ()
    functions_added: tuple[str, ...] = ()
    functions_removed: tuple[str, ...] = ()
    modes_added: tuple[str, ...] = ()
    modes_removed: tuple[str, ...] = ()
    base_mismatch: bool = False
    reused_stems: tuple[int, ...] = ()

    @property
    def is_empty(self) -> bool:
        """True when nothing changed (the base-mismatch flag is advisory)."""
        return not (
            self.added
            or self.removed
            or self.modified
            or self.goals_added
            or self.goals_removed
            or self.goals_modified
            or self.splits
            or self.functions_added
            or self.functions_removed
            or self.modes_added
            or self.modes_removed
        )


_ENTRY_FIELDS: tuple[tuple[str, object], ...] = (
    ("mode", lambda e: e.mode_id),
    ("function", lambda e: e.malfunction.function_id),
    ("guideword", lambda e: e.malfunction.guideword_id),
    ("malfunction", lambda e: e.malfunction.description),
    ("scenario", lambda e: e.scenario_id),
    ("consequence", lambda e: e.consequence),
    ("severity", lambda e: e.severity.level),
    ("severity_rationale", lambda e: e.severity.rationale),
    ("exposure", lambda e: e.exposure.level),
    ("exposure_rationale", lambda e: e.exposure.rationale),
    ("controllability", lambda e: e.controllability.level),
    ("controllability_rationale", lambda e: e.controllability.rationale),
    ("asil", lambda e: e.asil),
    ("goal", lambda e: e.goal_id),
)

_GOAL_FIELDS: tuple[tuple[str, object], ...] = (
    ("text", lambda g: g.text),
    ("modes", lambda g: g.modes),
    ("asil", lambda g: g.asil),
)


def _field_changes(old, new, fields) -> tuple[FieldChange, ...]:
    return tuple(
        FieldChange(name, get(old), get(new)) for name, get in fields if get(old) != get(new)
    )


def diff(
    base: HaraDocument,
    next: HaraDocument,
    *,
    discarded_stems: Collection[int] = (),
) -> DiffReport:
    """Compare two revisions entry-by-entry and goal-by-goal.

    ``discarded_stems`` is optional revision-history context: stems known to
    have been discarded before ``base``. Added entries reusing one of them
    mark the report as violating id stability (see ``classify_refinement``).
    """
    base_entries = {str(e.id): e for e in base.entries}
    next_entries = {str(e.id): e for e in next.entries}

    added = tuple(
        next_entries[key] for key in sorted(next_entries.keys() - base_entries.keys(),
                                            key=lambda k: next_entries[k].id.sort_key())
    )
    removed = tuple(
        base_entries[key] for key in sorted(base_entries.keys() - next_entries.keys(),
                                            key=lambda k: base_entries[k].id.sort_key())
    )
    modified = []
    for key in sorted(base_entries.keys() & next_entries.keys(),
                      key=lambda k: base_entries[k].id.sort_key()):
        changes = _field_changes(base_entries[key], next_entries[key], _ENTRY_FIELDS)
        if changes:
            modified.append(EntryChange(base_entries[key].id, changes))

    base_goals = base.goal_map()
    next_goals = next.goal_map()
    goals_added = tuple(next_goals[k] for k in sorted(next_goals.keys() - base_goals.keys()))
    goals_removed = tuple(base_goals[k] for k in sorted(base_goals.keys() - next_goals.keys()))
    goals_modified = []
    for key in sorted(base_goals.keys() & next_goals.keys()):
        changes = _field_changes(base_goals[key], next_goals[key], _GOAL_FIELDS)
        if changes:
            goals_modified.append(GoalChange(key, changes))

    base_stems = {e.id.stem for e in base.entries}
    splits: dict[int, list[EntryId]] = {}
    for entry in added:
        if entry.id.suffix is not None and entry.id.stem in base_stems:
            splits.setdefault(entry.id.stem, []).append(entry.id)

    base_functions = {f.id for f in base.item.functions}
    next_functions = {f.id for f in next.item.functions}
    base_modes = {m.id for m in base.item.modes}
    next_modes = {m.id for m in next.item.modes}

    reused = sorted({e.id.stem for e in added} & set(discarded_stems))

    return DiffReport(
        title=next.title,
        base_revision=base.revision,
        next_revision=next.revision,
        added=added,
        removed=removed,
        modified=tuple(modified),
        goals_added=goals_added,
        goals_removed=goals_removed,
        goals_modified=tuple(goals_modified),
        splits=tuple(Split(stem, tuple(sorted(ids))) for stem, ids in sorted(splits.items())),
        functions_added=tuple(sorted(next_functions - base_functions)),
        functions_removed=tuple(sorted(base_functions - next_functions)),
        modes_added=tuple(sorted(next_modes - base_modes)),
        modes_removed=tuple(sorted(base_modes - next_modes)),
        base_mismatch=next.based_on != base.revision,
        reused_stems=tuple(reused),
    )


def classify_refinement(report: DiffReport) -> RefinementClass:
    """Decide which refinement loop a diff report represents.

    Function- or mode-set changes mean the functional range moved: an item
    refinement. Otherwise the iteration only reshaped scenarios and goals: a
    safety refinement. Reuse of a discarded stem makes the report invalid.
    """
    if report.reused_stems:
        return RefinementClass.INVALID
    if report.is_empty:
        return RefinementClass.NONE
    if report.functions_added or report.functions_removed or report.modes_added or report.modes_removed:
        return RefinementClass.ITEM_REFINEMENT
    return RefinementClass.SAFETY_REFINEMENT


def check_id_stability(history: RevisionHistory) -> list[Finding]:
    """R8 findings: stems that disappear in one revision and return later."""
    findings: list[Finding] = []
    revisions = history.revisions
    present = revisions[0].entry_stems()
    discarded: set[int] = set()
    for revision in revisions[1:]:
        stems = revision.entry_stems()
        discarded |= present - stems
        for stem in sorted(stems & discarded):
            findings.append(
                Finding(
                    "R8",
                    f"revision {revision.revision}",
                    f"entry stem {stem} was discarded in an earlier revision and is reused here",
                )
            )
            discarded.discard(stem)
        present = stems
    return findings

"""Rule engine producing consistency findings over a document.

Ten rules cover identity, reference, derivation, aggregation, rationale,
coverage, and revision-discipline obligations. The checked constructors
already reject most ill-formed states for parsed documents; the validator
re-checks everything so that programmatically built documents get the same
scrutiny.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .asil import aggregate_goal_asil, determine_asil
from .generator import coverage_report
from .model import HaraDocument, ModelError, RevisionHistory, RevisionKind

_SEVERITIES = ("error", "warning")


@dataclass(frozen=True)
class Finding:
    rule: str
    location: str
    message: str
    severity: str = "error"

    def __post_init__(self) -> None:
        if self.rule not in RULE_EXPLANATIONS:
            raise ValueError(f"unknown rule id {self.rule!r}")
        if self.severity not in _SEVERITIES:
            raise ValueError(f"unknown severity {self.severity!r}")

    def sort_key(self) -> tuple[int, str, str]:
        return (int(self.rule[1:]), self.location, self.message)


RULE_EXPLANATIONS: dict[str, str] = {
    "R1": (
        "Entry ids and safety-goal ids must be unique within a document. Ids are the "
        "traceability anchor across revisions; a duplicated id makes every cross-reference, "
        "diff, and review comment ambiguous."
    ),
    "R2": (
        "Every reference must resolve against the item definition and the document: entries "
        "and waivers may only name declared modes, functions, guide words, scenarios, and "
        "goals, and an entry's operating mode must be one in which its function is applicable. "
        "A hazard assessed for a mode where the function cannot act describes nothing."
    ),
    "R3": (
        "The stated ASIL of an entry must equal the level derived from its severity, exposure, "
        "and controllability classes via the risk graph. The rating columns are the argument; "
        "the ASIL column is their conclusion and may not be overridden silently."
    ),
    "R4": (
        "Every hazardous scenario must be linked to exactly one safety goal. An unlinked entry "
        "would carry a risk rating that obligates nobody to anything."
    ),
    "R5": (
        "A safety goal that states an ASIL must state the maximum over the stated ASILs of its "
        "linked entries. Scenarios sharing a goal are controlled by the same requirement, so "
        "the requirement inherits their worst rating."
    ),
    "R6": (
        "A nonzero severity, exposure, or controllability class requires a rationale. Class 0 "
        "claims the parameter is irrelevant and needs no argument; every higher class is an "
        "expert judgment that must be recorded to be reviewable."
    ),
    "R7": (
        "Every combination of a function, a guide word, and an applicable operating mode must "
        "be covered by an entry or an explicit waiver. Completeness of a hazard list is an "
        "expert judgment, so gaps are warnings: they block release reporting, not parsing."
    ),
    "R8": (
        "An entry stem that was discarded in an earlier revision must not be reintroduced with "
        "a new meaning. Discarded ids stay vacant so that references into historic revisions "
        "remain unambiguous; new scenarios get fresh stems or suffixed ids."
    ),
    "R9": (
        "A safety goal with no linked hazardous scenario has no derivable ASIL and no "
        "justification in the analysis; either link the motivating scenarios or drop the goal."
    ),
    "R10": (
        "A revision marked as a safety refinement must keep the item's function set unchanged. "
        "Safety refinement sharpens hazardous scenarios and goals; anything that extends or "
        "narrows the functional range is an item refinement and must be declared as one."
    ),
}


def explain_rule(rule_id: str) -> str:
    """One-paragraph rationale for a rule id (R1..R10)."""
    try:
        return RULE_EXPLANATIONS[rule_id]
    except KeyError:
        raise ValueError(f"unknown rule id {rule_id!r}") from None


def validate(doc: HaraDocument, history: Optional[RevisionHistory] = None) -> list[Finding]:
    """Run all rules over the document, ordered by (rule, location, message).

    R8 and R10 need revision context and only run when ``history`` is given;
    the document must then be one of the history's revisions.
    """
    if history is not None:
        match = history.by_revision(doc.revision)
        if match is None or match != doc:
            raise ModelError("document is not part of the supplied history")

    findings: list[Finding] = []
    findings += _rule_r1(doc)
    findings += _rule_r2(doc)
    findings += _rule_r3(doc)
    findings += _rule_r4(doc)
    findings += _rule_r5(doc)
    findings += _rule_r6(doc)
    findings += _rule_r7(doc)
    findings += _rule_r9(doc)
    if history is not None:
        # Imported here: the diff module renders its stability findings with
        # this module's Finding type.
        from .diffing import check_id_stability

        findings += check_id_stability(history)
        findings += _rule_r10(doc, history)
    return sorted(findings, key=Finding.sort_key)


def _rule_r1(doc: HaraDocument) -> list[Finding]:
    findings = []
    seen: set[str] = set()
    for entry in doc.entries:
        key = str(entry.id)
        if key in seen:
            findings.append(Finding("R1", f"entry {key}", f"duplicate entry id {key}"))
        seen.add(key)
    seen_goals: set[str] = set()
    for goal in doc.goals:
        if goal.id in seen_goals:
            findings.append(Finding("R1", f"goal {goal.id}", f"duplicate goal id {goal.id}"))
        seen_goals.add(goal.id)
    return findings


def _rule_r2(doc: HaraDocument) -> list[Finding]:
    findings = []
    modes = set(doc.item.mode_ids())
    functions = doc.item.function_map()
    guidewords = doc.item.guideword_map()
    scenarios = doc.item.scenario_map()
    goal_ids = {g.id for g in doc.goals}

    for entry in doc.entries:
        where = f"entry {entry.id}"
        fn = functions.get(entry.malfunction.function_id)
        if fn is None:
            findings.append(Finding("R2", where, f"unknown function {entry.malfunction.function_id!r}"))
        if entry.malfunction.guideword_id not in guidewords:
            findings.append(Finding("R2", where, f"unknown guide word {entry.malfunction.guideword_id!r}"))
        if entry.mode_id not in modes:
            findings.append(Finding("R2", where, f"unknown mode {entry.mode_id!r}"))
        elif fn is not None and entry.mode_id not in fn.modes:
            findings.append(
                Finding("R2", where, f"mode {entry.mode_id!r} is not applicable to function {fn.id!r}")
            )
        if entry.scenario_id not in scenarios:
            findings.append(Finding("R2", where, f"unknown scenario {entry.scenario_id!r}"))
        if entry.goal_id and entry.goal_id not in goal_ids:
            findings.append(Finding("R2", where, f"unknown safety goal {entry.goal_id!r}"))
    for waiver in doc.waivers:
        where = f"waiver {waiver.function_id}/{waiver.guideword_id}/{waiver.mode_id}"
        if waiver.function_id not in functions:
            findings.append(Finding("R2", where, f"unknown function {waiver.function_id!r}"))
        if waiver.guideword_id not in guidewords:
            findings.append(Finding("R2", where, f"unknown guide word {waiver.guideword_id!r}"))
        if waiver.mode_id not in modes:
            findings.append(Finding("R2", where, f"unknown mode {waiver.mode_id!r}"))
    for goal in doc.goals:
        for mode_id in goal.modes:
            if mode_id not in modes:
                findings.append(Finding("R2", f"goal {goal.id}", f"unknown mode {mode_id!r}"))
    return findings


def _rule_r3(doc: HaraDocument) -> list[Finding]:
    findings = []
    for entry in doc.entries:
        derived = determine_asil(entry.severity.level, entry.exposure.level, entry.controllability.level)
        if entry.asil is not derived:
            findings.append(
                Finding(
                    "R3",
                    f"entry {entry.id}",
                    f"stated ASIL {entry.asil.name} does not match derived {derived.name} "
                    f"(S{int(entry.severity.level)} E{int(entry.exposure.level)} C{int(entry.controllability.level)})",
                )
            )
    return findings


def _rule_r4(doc: HaraDocument) -> list[Finding]:
    return [
        Finding("R4", f"entry {entry.id}", "entry is not linked to a safety goal")
        for entry in doc.entries
        if not entry.goal_id
    ]


def _rule_r5(doc: HaraDocument) -> list[Finding]:
    findings = []
    for goal in doc.goals:
        if goal.asil is None:
            continue
        linked = doc.entries_for_goal(goal.id)
        if not linked:
            continue
        aggregate = aggregate_goal_asil(linked)
        if aggregate is not goal.asil:
            findings.append(
                Finding(
                    "R5",
                    f"goal {goal.id}",
                    f"stated ASIL {goal.asil.name} does not match aggregate {aggregate.name} "
                    f"over {len(linked)} linked entries",
                )
            )
    return findings


def _rule_r6(doc: HaraDocument) -> list[Finding]:
    findings = []
    for entry in doc.entries:
        for label, rating in (
            ("severity", entry.severity),
            ("exposure", entry.exposure),
            ("controllability", entry.controllability),
        ):
            if int(rating.level) > 0 and not rating.rationale:
                findings.append(
                    Finding(
                        "R6",
                        f"entry {entry.id}",
                        f"{label} class {rating.level.name} has no rationale",
                    )
                )
    return findings


def _rule_r7(doc: HaraDocument) -> list[Finding]:
    return [
        Finding(
            "R7",
            str(gap.triple),
            f"no entry and no waiver for function {gap.triple.function_id!r}, "
            f"guide word {gap.triple.guideword_id!r}, mode {gap.triple.mode_id!r}",
            severity="warning",
        )
        for gap in coverage_report(doc)
    ]


def _rule_r9(doc: HaraDocument) -> list[Finding]:
    linked = {entry.goal_id for entry in doc.entries}
    return [
        Finding("R9", f"goal {goal.id}", "goal has no linked hazardous scenario", severity="warning")
        for goal in doc.goals
        if goal.id not in linked
    ]


def _rule_r10(doc: HaraDocument, history: RevisionHistory) -> list[Finding]:
    if doc.kind is not RevisionKind.SAFETY_REFINEMENT or doc.based_on is None:
        return []
    base = history.by_revision(doc.based_on)
    if base is None:
        return []
    base_functions = {f.id for f in base.item.functions}
    next_functions = {f.id for f in doc.item.functions}
    if base_functions == next_functions:
        return []
    added = sorted(next_functions - base_functions)
    removed = sorted(base_functions - next_functions)
    detail = []
    if added:
        detail.append(f"adds {', '.join(added)}")
    if removed:
        detail.append(f"removes {', '.join(removed)}")
    return [
        Finding(
            "R10",
            f"revision {doc.revision}",
            f"safety refinement changes the function set ({'; '.join(detail)})",
        )
    ]

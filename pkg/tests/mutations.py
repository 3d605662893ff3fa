"""Single-field mutations of the clean corpus, one per validator rule.

Each mutation returns (document, history-or-None) engineered so that running
the validator yields exactly one finding, of exactly the targeted rule.
Rules enforced by the checked constructors (R1, R2, R4, R6) use the
unchecked construction path; the rest go through normal constructors.
"""

from __future__ import annotations

from dataclasses import replace

from haraforge import (
    AsilLevel,
    ControllabilityClass,
    ExposureClass,
    FunctionDef,
    HaraDocument,
    HazardEntry,
    Malfunction,
    Rating,
    RevisionHistory,
    RevisionKind,
    SafetyGoal,
    SeverityClass,
    Waiver,
    evolve_unchecked,
    parse_entry_id,
    unchecked,
)


def _entry(doc: HaraDocument, id_text: str) -> HazardEntry:
    return next(e for e in doc.entries if str(e.id) == id_text)


def _swap_entry(doc: HaraDocument, id_text: str, new_entry: HazardEntry, *, checked: bool) -> HaraDocument:
    entries = tuple(new_entry if str(e.id) == id_text else e for e in doc.entries)
    if checked:
        return replace(doc, entries=entries)
    return evolve_unchecked(doc, entries=entries)


def mutate_r1(rev2: HaraDocument) -> tuple[HaraDocument, None]:
    """Duplicate one entry id."""
    dup = _entry(rev2, "12")
    return evolve_unchecked(rev2, entries=rev2.entries + (dup,)), None


def mutate_r2(rev2: HaraDocument) -> tuple[HaraDocument, None]:
    """Move entry 13 into a mode its function is not applicable in.

    Entry 12 still covers the shared triple, so coverage stays complete.
    """
    entry = evolve_unchecked(_entry(rev2, "13"), mode_id="manual")
    return _swap_entry(rev2, "13", entry, checked=False), None


def mutate_r3(rev2: HaraDocument) -> tuple[HaraDocument, None]:
    """Flip the stated ASIL of an entry whose goal states no ASIL."""
    entry = replace(_entry(rev2, "3"), asil=AsilLevel.A)
    return _swap_entry(rev2, "3", entry, checked=True), None


def mutate_r4(rev2: HaraDocument) -> tuple[HaraDocument, None]:
    """Clear the goal link of entry 13 (SG13 stays linked through entry 12)."""
    entry = evolve_unchecked(_entry(rev2, "13"), goal_id="")
    return _swap_entry(rev2, "13", entry, checked=False), None


def mutate_r5(rev2: HaraDocument) -> tuple[HaraDocument, None]:
    """State an ASIL on SG12 that contradicts its entry aggregate."""
    goals = tuple(replace(g, asil=AsilLevel.D) if g.id == "SG12" else g for g in rev2.goals)
    return replace(rev2, goals=goals), None


def mutate_r6(rev2: HaraDocument) -> tuple[HaraDocument, None]:
    """Blank the rationale of a nonzero severity class."""
    old = _entry(rev2, "5")
    rating = unchecked(Rating, level=old.severity.level, rationale="")
    entry = evolve_unchecked(old, severity=rating)
    return _swap_entry(rev2, "5", entry, checked=False), None


def mutate_r7(rev2: HaraDocument) -> tuple[HaraDocument, None]:
    """Drop one waiver, opening exactly one coverage gap."""
    return replace(rev2, waivers=rev2.waivers[1:]), None


def dropped_waiver(rev2: HaraDocument) -> Waiver:
    return rev2.waivers[0]


def mutate_r8(rev1: HaraDocument, rev2: HaraDocument) -> tuple[HaraDocument, RevisionHistory]:
    """Append a third revision reusing stem 29, discarded after revision 1.

    Reuse-after-discard is unobservable within two revisions, so this is the
    minimal corpus-derived history that can exhibit it.
    """
    reintroduced = HazardEntry(
        id=parse_entry_id("29"),
        mode_id="coupled",
        malfunction=Malfunction("environment_monitoring", "unintended", "A phantom obstacle is reported"),
        scenario_id="driver_takeover",
        consequence="The vehicle halts without need while the driver approaches for a takeover.",
        severity=Rating(SeverityClass.S2, "An unannounced halt can surprise the approaching driver"),
        exposure=Rating(ExposureClass.E2, "Takeovers occur at the start and end of work segments"),
        controllability=Rating(ControllabilityClass.C2, "The driver sees the halted vehicle and adapts"),
        asil=AsilLevel.QM,
        goal_id="SG14",
    )
    rev3 = replace(
        rev2,
        revision=3,
        kind=RevisionKind.SAFETY_REFINEMENT,
        based_on=2,
        entries=rev2.entries + (reintroduced,),
    )
    return rev3, RevisionHistory((rev1, rev2, rev3))


def mutate_r9(rev2: HaraDocument) -> tuple[HaraDocument, None]:
    """Add a goal no entry links to."""
    orphan = SafetyGoal("SG18", "Radio link integrity must be ensured.", ("safe_halt", "follow", "coupled"))
    return replace(rev2, goals=rev2.goals + (orphan,)), None


def mutate_r10(rev1: HaraDocument, rev2: HaraDocument) -> tuple[HaraDocument, RevisionHistory]:
    """Grow the item's function set while keeping the safety-refinement kind.

    The new function's candidate triples are waived so that R10 is the only
    finding.
    """
    extra = FunctionDef("radio_communication", "Radio communication", ("manual",))
    item2 = replace(rev2.item, functions=rev2.item.functions + (extra,))
    waivers = rev2.waivers + tuple(
        Waiver(
            "radio_communication",
            gw.id,
            "manual",
            "Added by the mutation fixture; waived to keep completeness accounting closed.",
        )
        for gw in item2.guidewords
    )
    mutated = replace(rev2, item=item2, waivers=waivers)
    return mutated, RevisionHistory((rev1, mutated))


def all_mutations(rev1: HaraDocument, rev2: HaraDocument):
    """(rule id, mutated document, history or None) for every rule."""
    r8_doc, r8_history = mutate_r8(rev1, rev2)
    r10_doc, r10_history = mutate_r10(rev1, rev2)
    return [
        ("R1", *mutate_r1(rev2)),
        ("R2", *mutate_r2(rev2)),
        ("R3", *mutate_r3(rev2)),
        ("R4", *mutate_r4(rev2)),
        ("R5", *mutate_r5(rev2)),
        ("R6", *mutate_r6(rev2)),
        ("R7", *mutate_r7(rev2)),
        ("R8", r8_doc, r8_history),
        ("R9", *mutate_r9(rev2)),
        ("R10", r10_doc, r10_history),
    ]

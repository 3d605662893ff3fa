"""Systematic enumeration of malfunction candidates and coverage checking.

Candidates are the cartesian product of functions, guide words, and the
modes each function is applicable in. A document is combinatorially
complete when every candidate triple is either assessed by an entry or
waived with a recorded rationale.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import GuideWord, HaraDocument, ItemDefinition, Malfunction

#: Deviation keywords applied when an item does not define its own set.
DEFAULT_GUIDE_WORDS: tuple[GuideWord, ...] = (
    GuideWord("loss", "Function is not provided when demanded"),
    GuideWord("unintended", "Function acts without demand"),
    GuideWord("more", "Function output beyond the specified magnitude"),
    GuideWord("less", "Function output below the specified magnitude"),
    GuideWord("reverse", "Function acts in the wrong direction"),
    GuideWord("early", "Function acts before the demanded point"),
    GuideWord("late", "Function acts after the demanded point"),
    GuideWord("stuck", "Function output frozen at the last value"),
)


class GenerationError(ValueError):
    """Raised when an item offers nothing to enumerate."""


@dataclass(frozen=True)
class CandidateTriple:
    """A (function, guide word, mode) combination to be assessed or waived."""

    function_id: str
    guideword_id: str
    mode_id: str

    def key(self) -> tuple[str, str, str]:
        return (self.function_id, self.guideword_id, self.mode_id)

    def __str__(self) -> str:
        return f"{self.function_id}/{self.guideword_id}/{self.mode_id}"


@dataclass(frozen=True)
class CoverageFinding:
    """A candidate triple with neither an entry nor a waiver."""

    triple: CandidateTriple
    reason: str = field(default="no-entry-no-waiver")


def enumerate_malfunctions(item: ItemDefinition) -> list[Malfunction]:
    """One candidate malfunction per function and guide word.

    Output is ordered by (function id, guide word id) and the description
    is templated from the guide word interpretation and the function
    description.
    """
    if not item.functions:
        raise GenerationError(f"item {item.name!r} defines no functions; nothing to enumerate")
    if not item.guidewords:
        raise GenerationError(f"item {item.name!r} defines no guide words; nothing to enumerate")
    candidates = []
    for fn in sorted(item.functions, key=lambda f: f.id):
        for gw in sorted(item.guidewords, key=lambda g: g.id):
            candidates.append(Malfunction(fn.id, gw.id, f"{gw.interpretation} of {fn.description}"))
    return candidates


def enumerate_candidates(item: ItemDefinition) -> list[CandidateTriple]:
    """One triple per function, guide word, and applicable mode.

    Ordered by (function id, guide word id, mode id); the count equals the
    sum over functions of applicable-mode count times guide-word count.
    """
    if not item.functions:
        raise GenerationError(f"item {item.name!r} defines no functions; nothing to enumerate")
    if not item.guidewords:
        raise GenerationError(f"item {item.name!r} defines no guide words; nothing to enumerate")
    if not item.modes:
        raise GenerationError(f"item {item.name!r} defines no operating modes; nothing to enumerate")
    triples = []
    for fn in sorted(item.functions, key=lambda f: f.id):
        for gw in sorted(item.guidewords, key=lambda g: g.id):
            for mode_id in sorted(fn.modes):
                triples.append(CandidateTriple(fn.id, gw.id, mode_id))
    return triples


def coverage_report(doc: HaraDocument) -> list[CoverageFinding]:
    """Candidate triples of the document's item not covered by an entry or waiver.

    An empty report means the document is combinatorially complete. Items
    without functions or guide words yield no candidates and are therefore
    trivially complete.
    """
    if not doc.item.functions or not doc.item.guidewords or not doc.item.modes:
        return []
    covered = {e.triple for e in doc.entries} | {w.triple for w in doc.waivers}
    return [
        CoverageFinding(triple)
        for triple in enumerate_candidates(doc.item)
        if triple.key() not in covered
    ]

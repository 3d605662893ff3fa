"""Immutable domain model for hazard analysis and risk assessment documents.

Every other module builds on the value types defined here. Construction is
checking: a value that violates its invariants cannot be built through the
normal constructors (see :func:`unchecked` for the deliberate escape hatch
used by validation tooling).
"""

from __future__ import annotations

import re
from dataclasses import MISSING, dataclass, fields, replace
from enum import Enum, IntEnum
from functools import total_ordering
from typing import Iterable, Optional, Union


class ModelError(ValueError):
    """Raised when a domain value would violate its invariants."""


_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_-]*\Z")
_ENTRY_ID_RE = re.compile(r"([0-9]+)([a-z]*)\Z")
_GOAL_ID_RE = re.compile(r"SG([0-9]{2})\Z")


def _check_ident(value: str, what: str) -> None:
    if not isinstance(value, str) or not _IDENT_RE.match(value):
        raise ModelError(f"{what} must be an identifier, got {value!r}")


def _check_text(value: str, what: str, *, allow_empty: bool = True) -> None:
    if not isinstance(value, str):
        raise ModelError(f"{what} must be a string, got {type(value).__name__}")
    if "\n" in value or "\r" in value:
        # The text formats have no newline escape, so multi-line free text
        # would not survive serialization.
        raise ModelError(f"{what} must not contain line breaks")
    if not allow_empty and not value:
        raise ModelError(f"{what} must not be empty")


class AsilLevel(IntEnum):
    """Safety integrity rating, totally ordered QM < A < B < C < D."""

    QM = 0
    A = 1
    B = 2
    C = 3
    D = 4

    @property
    def label(self) -> str:
        """Human form: ``QM`` or ``ASIL A`` .. ``ASIL D``."""
        return "QM" if self is AsilLevel.QM else f"ASIL {self.name}"


class SeverityClass(IntEnum):
    S0 = 0
    S1 = 1
    S2 = 2
    S3 = 3


class ExposureClass(IntEnum):
    E0 = 0
    E1 = 1
    E2 = 2
    E3 = 3
    E4 = 4


class ControllabilityClass(IntEnum):
    C0 = 0
    C1 = 1
    C2 = 2
    C3 = 3


RatingClass = Union[SeverityClass, ExposureClass, ControllabilityClass]


class RevisionKind(str, Enum):
    INITIAL = "initial"
    ITEM_REFINEMENT = "item-refinement"
    SAFETY_REFINEMENT = "safety-refinement"


def compare_asil(a: AsilLevel, b: AsilLevel) -> int:
    """Return -1, 0 or 1 under the QM < A < B < C < D order."""
    return (a > b) - (a < b)


@total_ordering
@dataclass(frozen=True)
class EntryId:
    """Identifier of a hazard table row: positive stem, optional suffix letter.

    Suffixed ids mark rows that were split off an existing row during
    refinement, so ``37`` sorts directly before ``37a``.
    """

    stem: int
    suffix: Optional[str] = None

    def __post_init__(self) -> None:
        if not isinstance(self.stem, int) or isinstance(self.stem, bool) or self.stem < 1:
            raise ModelError(f"entry id stem must be a positive integer, got {self.stem!r}")
        if self.suffix is not None and not re.fullmatch(r"[a-z]", self.suffix):
            raise ModelError(f"entry id suffix must be a single letter a-z, got {self.suffix!r}")

    def sort_key(self) -> tuple[int, str]:
        return (self.stem, self.suffix or "")

    def __lt__(self, other: "EntryId") -> bool:
        if not isinstance(other, EntryId):
            return NotImplemented
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return f"{self.stem}{self.suffix or ''}"


def parse_entry_id(text: str) -> EntryId:
    """Parse the canonical text form of an entry id (``37``, ``37a``)."""
    if not text:
        raise ModelError("entry id must not be empty")
    m = _ENTRY_ID_RE.match(text)
    if not m:
        raise ModelError(f"malformed entry id {text!r}: digits must precede an optional suffix letter")
    stem_text, suffix = m.group(1), m.group(2)
    if stem_text.startswith("0"):
        raise ModelError(f"entry id {text!r} has leading zeros")
    if len(suffix) > 1:
        raise ModelError(f"entry id {text!r} has a multi-letter suffix")
    return EntryId(int(stem_text), suffix or None)


def compare_entry_ids(a: EntryId, b: EntryId) -> int:
    """Return -1, 0 or 1: stems compare first, no suffix sorts before 'a'."""
    return (a.sort_key() > b.sort_key()) - (a.sort_key() < b.sort_key())


@dataclass(frozen=True)
class Rating:
    """A risk-parameter class together with the argument for choosing it."""

    level: RatingClass
    rationale: str = ""

    def __post_init__(self) -> None:
        if not isinstance(self.level, (SeverityClass, ExposureClass, ControllabilityClass)):
            raise ModelError(f"rating level must be an S/E/C class, got {self.level!r}")
        _check_text(self.rationale, "rating rationale")
        if int(self.level) > 0 and not self.rationale:
            # A nonzero class is a claim and has to be argued; class 0 needs none.
            raise ModelError(f"rating {self.level.name} requires a rationale")


@dataclass(frozen=True)
class OperatingMode:
    id: str
    name: str
    automated: bool = False

    def __post_init__(self) -> None:
        _check_ident(self.id, "mode id")
        _check_text(self.name, "mode name", allow_empty=False)


@dataclass(frozen=True)
class FunctionDef:
    """A function of the item, applicable in a subset of the operating modes."""

    id: str
    description: str
    modes: tuple[str, ...]

    def __post_init__(self) -> None:
        _check_ident(self.id, "function id")
        _check_text(self.description, "function description", allow_empty=False)
        if not self.modes:
            raise ModelError(f"function {self.id!r} must list at least one applicable mode")
        if len(set(self.modes)) != len(self.modes):
            raise ModelError(f"function {self.id!r} lists a mode twice")


@dataclass(frozen=True)
class GuideWord:
    """A deviation keyword used to derive malfunctions systematically."""

    id: str
    interpretation: str

    def __post_init__(self) -> None:
        _check_ident(self.id, "guide word id")
        _check_text(self.interpretation, "guide word interpretation", allow_empty=False)


@dataclass(frozen=True)
class Malfunction:
    """A deviation of one function, named by function and guide word."""

    function_id: str
    guideword_id: str
    description: str = ""

    def __post_init__(self) -> None:
        _check_ident(self.function_id, "malfunction function id")
        _check_ident(self.guideword_id, "malfunction guide word id")
        _check_text(self.description, "malfunction description")


@dataclass(frozen=True)
class OperationalScenario:
    """A driving/operating context in which hazards are assessed."""

    id: str
    description: str
    default_exposure: ExposureClass = ExposureClass.E0
    exposure_rationale: str = ""

    def __post_init__(self) -> None:
        _check_ident(self.id, "scenario id")
        _check_text(self.description, "scenario description", allow_empty=False)
        if not isinstance(self.default_exposure, ExposureClass):
            raise ModelError("scenario default exposure must be an ExposureClass")
        _check_text(self.exposure_rationale, "scenario exposure rationale")


@dataclass(frozen=True)
class HazardEntry:
    """One row of the hazard table: a rated hazardous scenario."""

    id: EntryId
    mode_id: str
    malfunction: Malfunction
    scenario_id: str
    consequence: str
    severity: Rating
    exposure: Rating
    controllability: Rating
    asil: AsilLevel
    goal_id: str

    def __post_init__(self) -> None:
        if not isinstance(self.id, EntryId):
            raise ModelError("entry id must be an EntryId")
        _check_ident(self.mode_id, "entry mode id")
        _check_ident(self.scenario_id, "entry scenario id")
        _check_text(self.consequence, "entry consequence", allow_empty=False)
        if not isinstance(self.severity.level, SeverityClass):
            raise ModelError(f"entry {self.id}: severity rating must carry an S class")
        if not isinstance(self.exposure.level, ExposureClass):
            raise ModelError(f"entry {self.id}: exposure rating must carry an E class")
        if not isinstance(self.controllability.level, ControllabilityClass):
            raise ModelError(f"entry {self.id}: controllability rating must carry a C class")
        if not isinstance(self.asil, AsilLevel):
            raise ModelError(f"entry {self.id}: stated ASIL must be an AsilLevel")
        if not self.goal_id or not _GOAL_ID_RE.match(self.goal_id):
            raise ModelError(f"entry {self.id}: exactly one safety-goal id of the form SGnn is required")

    @property
    def triple(self) -> tuple[str, str, str]:
        """(function id, guide word id, mode id) — the coverage key."""
        return (self.malfunction.function_id, self.malfunction.guideword_id, self.mode_id)


@dataclass(frozen=True)
class Waiver:
    """Recorded expert judgment that a candidate triple needs no entry."""

    function_id: str
    guideword_id: str
    mode_id: str
    rationale: str

    def __post_init__(self) -> None:
        _check_ident(self.function_id, "waiver function id")
        _check_ident(self.guideword_id, "waiver guide word id")
        _check_ident(self.mode_id, "waiver mode id")
        _check_text(self.rationale, "waiver rationale", allow_empty=False)

    @property
    def triple(self) -> tuple[str, str, str]:
        return (self.function_id, self.guideword_id, self.mode_id)


@dataclass(frozen=True)
class SafetyGoal:
    """Top-level safety requirement; carries the worst rating of its scenarios."""

    id: str
    text: str
    modes: tuple[str, ...] = ()
    asil: Optional[AsilLevel] = None

    def __post_init__(self) -> None:
        m = _GOAL_ID_RE.match(self.id) if isinstance(self.id, str) else None
        if not m or m.group(1) == "00":
            raise ModelError(f"safety-goal id must match SG01..SG99, got {self.id!r}")
        _check_text(self.text, "safety-goal text", allow_empty=False)
        if len(set(self.modes)) != len(self.modes):
            raise ModelError(f"goal {self.id}: duplicate mode in applicability set")
        if self.asil is not None and not isinstance(self.asil, AsilLevel):
            raise ModelError(f"goal {self.id}: stated ASIL must be an AsilLevel")

    @property
    def number(self) -> int:
        return int(self.id[2:])


@dataclass(frozen=True)
class ElementNode:
    id: str
    primary: bool = False

    def __post_init__(self) -> None:
        _check_ident(self.id, "element id")


@dataclass(frozen=True)
class Parameter:
    """Named numeric property of the item; metadata only, nothing is computed."""

    name: str
    value: Union[int, float]
    unit: str

    def __post_init__(self) -> None:
        _check_ident(self.name, "parameter name")
        if isinstance(self.value, bool) or not isinstance(self.value, (int, float)):
            raise ModelError(f"parameter {self.name!r} value must be numeric")
        _check_text(self.unit, "parameter unit", allow_empty=False)


@dataclass(frozen=True)
class ItemDefinition:
    """The system under analysis: elements, modes, functions, and catalogs."""

    name: str
    elements: tuple[ElementNode, ...]
    connections: tuple[tuple[str, str], ...]
    modes: tuple[OperatingMode, ...]
    functions: tuple[FunctionDef, ...] = ()
    guidewords: tuple[GuideWord, ...] = ()
    scenarios: tuple[OperationalScenario, ...] = ()
    params: tuple[Parameter, ...] = ()

    def __post_init__(self) -> None:
        _check_text(self.name, "item name", allow_empty=False)
        _check_unique((e.id for e in self.elements), "element id")
        _check_unique((m.id for m in self.modes), "mode id")
        # CSV import resolves modes by display name, so names must be unique too.
        _check_unique((m.name for m in self.modes), "mode name")
        _check_unique((f.id for f in self.functions), "function id")
        _check_unique((g.id for g in self.guidewords), "guide word id")
        _check_unique((s.id for s in self.scenarios), "scenario id")
        _check_unique((p.name for p in self.params), "parameter name")

        element_ids = {e.id for e in self.elements}
        primaries = [e.id for e in self.elements if e.primary]
        if len(primaries) != 1:
            raise ModelError(f"item {self.name!r} must flag exactly one primary element, got {primaries}")
        for a, b in self.connections:
            for end in (a, b):
                if end not in element_ids:
                    raise ModelError(f"connection references unknown element {end!r}")
        self._check_connectivity(primaries[0], element_ids)

        mode_ids = [m.id for m in self.modes]
        normalized = []
        for fn in self.functions:
            unknown = [m for m in fn.modes if m not in mode_ids]
            if unknown:
                raise ModelError(f"function {fn.id!r} references unknown mode {unknown[0]!r}")
            ordered = tuple(m for m in mode_ids if m in fn.modes)
            normalized.append(fn if ordered == fn.modes else replace(fn, modes=ordered))
        object.__setattr__(self, "functions", tuple(normalized))

    def _check_connectivity(self, start: str, element_ids: set[str]) -> None:
        adjacent: dict[str, set[str]] = {e: set() for e in element_ids}
        for a, b in self.connections:
            adjacent[a].add(b)
            adjacent[b].add(a)
        seen = {start}
        frontier = [start]
        while frontier:
            node = frontier.pop()
            for nxt in adjacent[node]:
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        missing = element_ids - seen
        if missing:
            raise ModelError(f"elements not connected to the item under analysis: {sorted(missing)}")

    @property
    def primary_element_id(self) -> str:
        return next(e.id for e in self.elements if e.primary)

    def mode_map(self) -> dict[str, OperatingMode]:
        return {m.id: m for m in self.modes}

    def function_map(self) -> dict[str, FunctionDef]:
        return {f.id: f for f in self.functions}

    def guideword_map(self) -> dict[str, GuideWord]:
        return {g.id: g for g in self.guidewords}

    def scenario_map(self) -> dict[str, OperationalScenario]:
        return {s.id: s for s in self.scenarios}

    def element_map(self) -> dict[str, ElementNode]:
        return {e.id: e for e in self.elements}

    def mode_ids(self) -> tuple[str, ...]:
        return tuple(m.id for m in self.modes)

    def automated_mode_ids(self) -> tuple[str, ...]:
        return tuple(m.id for m in self.modes if m.automated)

    def manual_mode_ids(self) -> tuple[str, ...]:
        return tuple(m.id for m in self.modes if not m.automated)


def _check_unique(values: Iterable[str], what: str) -> None:
    seen = set()
    for value in values:
        if value in seen:
            raise ModelError(f"duplicate {what}: {value!r}")
        seen.add(value)


@dataclass(frozen=True)
class HaraDocument:
    """One revision of a hazard analysis, bound to its item definition.

    Construction rejects dangling references and ill-formed revision
    metadata; consistency questions that are expert judgments (stated vs.
    derived ASIL, coverage, goal aggregation) are left to the validator.
    Entries, goals, and waivers are normalized to canonical order.
    """

    title: str
    revision: int
    kind: RevisionKind
    based_on: Optional[int]
    item: ItemDefinition
    entries: tuple[HazardEntry, ...] = ()
    waivers: tuple[Waiver, ...] = ()
    goals: tuple[SafetyGoal, ...] = ()

    def __post_init__(self) -> None:
        _check_text(self.title, "document title", allow_empty=False)
        if not isinstance(self.revision, int) or isinstance(self.revision, bool) or self.revision < 1:
            raise ModelError(f"revision must be a positive integer, got {self.revision!r}")
        if not isinstance(self.kind, RevisionKind):
            raise ModelError(f"unknown revision kind {self.kind!r}")
        if (self.kind is RevisionKind.INITIAL) != (self.based_on is None):
            raise ModelError("a revision is 'initial' exactly when it has no based-on revision")
        if self.based_on is not None and not (1 <= self.based_on < self.revision):
            raise ModelError(f"based-on revision {self.based_on!r} must precede revision {self.revision}")

        _check_unique((str(e.id) for e in self.entries), "entry id")
        _check_unique((g.id for g in self.goals), "goal id")

        mode_ids = set(self.item.mode_ids())
        functions = self.item.function_map()
        guidewords = self.item.guideword_map()
        scenarios = self.item.scenario_map()
        goal_ids = {g.id for g in self.goals}

        for entry in self.entries:
            fn = functions.get(entry.malfunction.function_id)
            if fn is None:
                raise ModelError(f"entry {entry.id}: unknown function {entry.malfunction.function_id!r}")
            if entry.malfunction.guideword_id not in guidewords:
                raise ModelError(f"entry {entry.id}: unknown guide word {entry.malfunction.guideword_id!r}")
            if entry.mode_id not in mode_ids:
                raise ModelError(f"entry {entry.id}: unknown mode {entry.mode_id!r}")
            if entry.mode_id not in fn.modes:
                raise ModelError(f"entry {entry.id}: mode {entry.mode_id!r} is not applicable to function {fn.id!r}")
            if entry.scenario_id not in scenarios:
                raise ModelError(f"entry {entry.id}: unknown scenario {entry.scenario_id!r}")
            if entry.goal_id not in goal_ids:
                raise ModelError(f"entry {entry.id}: unknown safety goal {entry.goal_id!r}")
        for waiver in self.waivers:
            if waiver.function_id not in functions:
                raise ModelError(f"waiver references unknown function {waiver.function_id!r}")
            if waiver.guideword_id not in guidewords:
                raise ModelError(f"waiver references unknown guide word {waiver.guideword_id!r}")
            if waiver.mode_id not in mode_ids:
                raise ModelError(f"waiver references unknown mode {waiver.mode_id!r}")

        mode_order = self.item.mode_ids()
        goals = []
        for goal in self.goals:
            unknown = [m for m in goal.modes if m not in mode_ids]
            if unknown:
                raise ModelError(f"goal {goal.id}: unknown mode {unknown[0]!r}")
            ordered = tuple(m for m in mode_order if m in goal.modes)
            goals.append(goal if ordered == goal.modes else replace(goal, modes=ordered))

        object.__setattr__(self, "entries", tuple(sorted(self.entries, key=lambda e: e.id.sort_key())))
        object.__setattr__(self, "goals", tuple(sorted(goals, key=lambda g: g.id)))
        object.__setattr__(self, "waivers", tuple(sorted(self.waivers, key=lambda w: w.triple)))

    def goal_map(self) -> dict[str, SafetyGoal]:
        return {g.id: g for g in self.goals}

    def entries_for_goal(self, goal_id: str) -> tuple[HazardEntry, ...]:
        return tuple(e for e in self.entries if e.goal_id == goal_id)

    def entry_stems(self) -> set[int]:
        return {e.id.stem for e in self.entries}


@dataclass(frozen=True)
class RevisionHistory:
    """Ordered chain of revisions of one document."""

    revisions: tuple[HaraDocument, ...]

    def __post_init__(self) -> None:
        if not self.revisions:
            raise ModelError("a revision history must contain at least one revision")
        first = self.revisions[0]
        if first.based_on is not None:
            raise ModelError("the first revision of a history must be the initial one")
        for prev, cur in zip(self.revisions, self.revisions[1:]):
            if cur.title != first.title:
                raise ModelError(f"revision {cur.revision} changes the document title")
            if cur.revision <= prev.revision:
                raise ModelError("revision numbers must be strictly increasing")
            if cur.based_on != prev.revision:
                raise ModelError(
                    f"revision {cur.revision} is based on {cur.based_on}, expected {prev.revision}"
                )

    @property
    def latest(self) -> HaraDocument:
        return self.revisions[-1]

    def by_revision(self, number: int) -> Optional[HaraDocument]:
        for rev in self.revisions:
            if rev.revision == number:
                return rev
        return None


def unchecked(cls, **field_values):
    """Construct a model value while skipping invariant checks.

    Validation tooling needs to represent documents the checked constructors
    reject (duplicate ids, dangling references, missing rationales). The
    resulting object is only suitable for inspection, never for serialization.
    """
    obj = object.__new__(cls)
    for f in fields(cls):
        if f.name in field_values:
            value = field_values.pop(f.name)
        elif f.default is not MISSING:
            value = f.default
        elif f.default_factory is not MISSING:  # type: ignore[misc]
            value = f.default_factory()  # type: ignore[misc]
        else:
            raise TypeError(f"missing field {f.name!r} for {cls.__name__}")
        object.__setattr__(obj, f.name, value)
    if field_values:
        raise TypeError(f"unknown fields for {cls.__name__}: {sorted(field_values)}")
    return obj


def evolve_unchecked(value, **changes):
    """Copy a model value with some fields replaced, skipping checks."""
    current = {f.name: getattr(value, f.name) for f in fields(value)}
    current.update(changes)
    return unchecked(type(value), **current)

"""Risk-graph ASIL determination, goal aggregation, and element inheritance."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .model import (
    AsilLevel,
    ControllabilityClass,
    ExposureClass,
    HazardEntry,
    ItemDefinition,
    ModelError,
    SeverityClass,
)

_QM = AsilLevel.QM
_A = AsilLevel.A
_B = AsilLevel.B
_C = AsilLevel.C
_D = AsilLevel.D

# The full risk graph for nonzero classes, keyed (S, E, C). This table is
# the authoritative encoding; determine_asil uses the equivalent sum rule,
# and the test suite asserts exhaustive agreement between the two.
RISK_GRAPH: Mapping[tuple[int, int, int], AsilLevel] = {
    (1, 1, 1): _QM, (1, 1, 2): _QM, (1, 1, 3): _QM,
    (1, 2, 1): _QM, (1, 2, 2): _QM, (1, 2, 3): _QM,
    (1, 3, 1): _QM, (1, 3, 2): _QM, (1, 3, 3): _A,
    (1, 4, 1): _QM, (1, 4, 2): _A,  (1, 4, 3): _B,
    (2, 1, 1): _QM, (2, 1, 2): _QM, (2, 1, 3): _QM,
    (2, 2, 1): _QM, (2, 2, 2): _QM, (2, 2, 3): _A,
    (2, 3, 1): _QM, (2, 3, 2): _A,  (2, 3, 3): _B,
    (2, 4, 1): _A,  (2, 4, 2): _B,  (2, 4, 3): _C,
    (3, 1, 1): _QM, (3, 1, 2): _QM, (3, 1, 3): _A,
    (3, 2, 1): _QM, (3, 2, 2): _A,  (3, 2, 3): _B,
    (3, 3, 1): _A,  (3, 3, 2): _B,  (3, 3, 3): _C,
    (3, 4, 1): _B,  (3, 4, 2): _C,  (3, 4, 3): _D,
}

_BY_SUM = {10: _D, 9: _C, 8: _B, 7: _A}


def determine_asil(
    severity: SeverityClass,
    exposure: ExposureClass,
    controllability: ControllabilityClass,
) -> AsilLevel:
    """Map an S/E/C combination to its integrity level.

    Any class of 0 yields QM by definition of the scales. For nonzero
    classes the risk graph collapses to the class sum: 10 is D, 9 is C,
    8 is B, 7 is A, and anything lower is QM.
    """
    s, e, c = int(severity), int(exposure), int(controllability)
    if s == 0 or e == 0 or c == 0:
        return _QM
    return _BY_SUM.get(s + e + c, _QM)


def check_entry_consistency(entry: HazardEntry) -> bool:
    """True when the entry's stated ASIL matches its S/E/C derivation."""
    derived = determine_asil(entry.severity.level, entry.exposure.level, entry.controllability.level)
    return entry.asil is derived


def aggregate_goal_asil(entries: Iterable[HazardEntry]) -> AsilLevel:
    """Worst-case ASIL over the hazardous scenarios linked to one goal."""
    entries = tuple(entries)
    if not entries:
        raise ModelError("cannot aggregate an ASIL over zero linked scenarios")
    goal_ids = {e.goal_id for e in entries}
    if len(goal_ids) > 1:
        raise ModelError(f"entries reference different goals: {sorted(goal_ids)}")
    return max(e.asil for e in entries)


@dataclass(frozen=True)
class GoalAllocation:
    """Assignment of a safety goal to the elements that implement it."""

    goal_id: str
    element_ids: frozenset[str]

    def __post_init__(self) -> None:
        if not self.element_ids:
            raise ModelError(f"allocation of goal {self.goal_id!r} must name at least one element")


def propagate_to_elements(
    item: ItemDefinition,
    goal_levels: Mapping[str, AsilLevel],
    allocations: Iterable[GoalAllocation],
) -> dict[str, AsilLevel]:
    """Inherit goal ASILs onto allocated elements of the item.

    Each allocated element receives the maximum level over the goals
    allocated to it; inheritance is one hop along allocations, never
    transitive across the element graph. Unallocated elements are absent
    from the result.
    """
    known_elements = item.element_map()
    inherited: dict[str, AsilLevel] = {}
    for allocation in allocations:
        if allocation.goal_id not in goal_levels:
            raise ModelError(f"allocation references goal {allocation.goal_id!r} without a level")
        level = goal_levels[allocation.goal_id]
        for element_id in allocation.element_ids:
            if element_id not in known_elements:
                raise ModelError(f"allocation references unknown element {element_id!r}")
            current = inherited.get(element_id)
            if current is None or level > current:
                inherited[element_id] = level
    return inherited

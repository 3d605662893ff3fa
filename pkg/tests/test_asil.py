"""Risk graph, aggregation, and inheritance.

The oracle below is a hand transcription of the standard risk graph,
written out row by row and kept independent of the implementation's
encoding: determine_asil must agree with it on every one of the 80 class
combinations.
"""

from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from haraforge import (
    RISK_GRAPH,
    AsilLevel,
    ControllabilityClass,
    EntryId,
    ExposureClass,
    GoalAllocation,
    HazardEntry,
    Malfunction,
    ModelError,
    Rating,
    SeverityClass,
    aggregate_goal_asil,
    check_entry_consistency,
    determine_asil,
    propagate_to_elements,
)

QM, A, B, C, D = AsilLevel.QM, AsilLevel.A, AsilLevel.B, AsilLevel.C, AsilLevel.D

# (S, E) -> levels for C1, C2, C3. Transcribed by hand from the risk graph;
# any class of 0 maps to QM and is handled below.
ORACLE_ROWS = {
    (1, 1): (QM, QM, QM),
    (1, 2): (QM, QM, QM),
    (1, 3): (QM, QM, A),
    (1, 4): (QM, A, B),
    (2, 1): (QM, QM, QM),
    (2, 2): (QM, QM, A),
    (2, 3): (QM, A, B),
    (2, 4): (A, B, C),
    (3, 1): (QM, QM, A),
    (3, 2): (QM, A, B),
    (3, 3): (A, B, C),
    (3, 4): (B, C, D),
}


def oracle(s: int, e: int, c: int) -> AsilLevel:
    if s == 0 or e == 0 or c == 0:
        return QM
    return ORACLE_ROWS[(s, e)][c - 1]


def all_combinations():
    return product(range(4), range(5), range(4))


class TestRiskGraph:
    def test_oracle_has_36_nonzero_rows(self):
        assert len(ORACLE_ROWS) * 3 == 36

    def test_full_agreement_with_oracle(self):
        for s, e, c in all_combinations():
            expected = oracle(s, e, c)
            got = determine_asil(SeverityClass(s), ExposureClass(e), ControllabilityClass(c))
            assert got is expected, f"S{s} E{e} C{c}: {got} != {expected}"

    def test_table_encoding_matches_closed_form(self):
        assert len(RISK_GRAPH) == 36
        for (s, e, c), level in RISK_GRAPH.items():
            assert determine_asil(SeverityClass(s), ExposureClass(e), ControllabilityClass(c)) is level

    def test_spec_examples(self):
        assert determine_asil(SeverityClass.S0, ExposureClass.E4, ControllabilityClass.C3) is QM
        assert determine_asil(SeverityClass.S3, ExposureClass.E4, ControllabilityClass.C3) is D
        assert determine_asil(SeverityClass.S3, ExposureClass.E2, ControllabilityClass.C2) is A
        assert determine_asil(SeverityClass.S2, ExposureClass.E3, ControllabilityClass.C3) is B

    def test_monotone_in_every_argument(self):
        for s, e, c in all_combinations():
            here = oracle(s, e, c)
            if s < 3:
                assert determine_asil(SeverityClass(s + 1), ExposureClass(e), ControllabilityClass(c)) >= here
            if e < 4:
                assert determine_asil(SeverityClass(s), ExposureClass(e + 1), ControllabilityClass(c)) >= here
            if c < 3:
                assert determine_asil(SeverityClass(s), ExposureClass(e), ControllabilityClass(c + 1)) >= here

    def test_qm_iff_zero_class_or_low_sum(self):
        for s, e, c in all_combinations():
            got = determine_asil(SeverityClass(s), ExposureClass(e), ControllabilityClass(c))
            expect_qm = (s == 0 or e == 0 or c == 0) or (s + e + c <= 6)
            assert (got is QM) == expect_qm


def make_entry(stem: int, asil: AsilLevel, goal_id: str = "SG01", s: int = 1, e: int = 1, c: int = 1) -> HazardEntry:
    def rating(cls, value):
        return Rating(cls(value), "argued" if value else "")

    return HazardEntry(
        id=EntryId(stem),
        mode_id="m0",
        malfunction=Malfunction("f0", "g0", "deviation"),
        scenario_id="s0",
        consequence="something goes wrong",
        severity=rating(SeverityClass, s),
        exposure=rating(ExposureClass, e),
        controllability=rating(ControllabilityClass, c),
        asil=asil,
        goal_id=goal_id,
    )


class TestAggregation:
    def test_singleton(self):
        assert aggregate_goal_asil([make_entry(1, QM)]) is QM

    def test_max_under_order(self):
        entries = [make_entry(1, A), make_entry(2, D), make_entry(3, B)]
        assert aggregate_goal_asil(entries) is D

    def test_empty_is_an_error(self):
        with pytest.raises(ModelError):
            aggregate_goal_asil([])

    def test_mixed_goals_rejected(self):
        with pytest.raises(ModelError):
            aggregate_goal_asil([make_entry(1, A, "SG01"), make_entry(2, B, "SG02")])

    @given(
        st.lists(st.sampled_from(list(AsilLevel)), min_size=1, max_size=5),
        st.lists(st.sampled_from(list(AsilLevel)), min_size=1, max_size=5),
    )
    def test_union_property(self, left, right):
        a = [make_entry(i + 1, level) for i, level in enumerate(left)]
        b = [make_entry(i + 100, level) for i, level in enumerate(right)]
        assert aggregate_goal_asil(a + b) == max(aggregate_goal_asil(a), aggregate_goal_asil(b))


class TestPropagation:
    def test_single_goal_two_elements(self, corpus_item):
        result = propagate_to_elements(
            corpus_item,
            {"SG03": D},
            [GoalAllocation("SG03", frozenset({"brakes", "steering"}))],
        )
        assert result == {"brakes": D, "steering": D}

    def test_max_over_allocated_goals(self, corpus_item):
        result = propagate_to_elements(
            corpus_item,
            {"SG12": B, "SG03": D},
            [
                GoalAllocation("SG12", frozenset({"afa_logic"})),
                GoalAllocation("SG03", frozenset({"afa_logic"})),
            ],
        )
        assert result == {"afa_logic": D}

    def test_empty_allocations(self, corpus_item):
        assert propagate_to_elements(corpus_item, {"SG03": D}, []) == {}

    def test_unknown_element_rejected(self, corpus_item):
        with pytest.raises(ModelError):
            propagate_to_elements(corpus_item, {"SG03": D}, [GoalAllocation("SG03", frozenset({"ghost"}))])

    def test_unknown_goal_rejected(self, corpus_item):
        with pytest.raises(ModelError):
            propagate_to_elements(corpus_item, {}, [GoalAllocation("SG03", frozenset({"brakes"}))])

    def test_never_below_singleton_level(self, corpus_item):
        goals = {"SG01": A, "SG02": C, "SG03": B}
        allocations = [
            GoalAllocation("SG01", frozenset({"brakes", "drivetrain"})),
            GoalAllocation("SG02", frozenset({"brakes"})),
            GoalAllocation("SG03", frozenset({"drivetrain", "steering"})),
        ]
        result = propagate_to_elements(corpus_item, goals, allocations)
        for allocation in allocations:
            for element_id in allocation.element_ids:
                assert result[element_id] >= goals[allocation.goal_id]

    def test_allocation_requires_elements(self):
        with pytest.raises(ModelError):
            GoalAllocation("SG01", frozenset())


class TestEntryConsistency:
    def test_consistent_zero_class(self):
        entry = make_entry(1, QM, s=0, e=2, c=1)
        assert check_entry_consistency(entry)

    def test_consistent_top(self):
        entry = make_entry(1, D, s=3, e=4, c=3)
        assert check_entry_consistency(entry)

    def test_inconsistent(self):
        entry = make_entry(1, B, s=3, e=4, c=3)
        assert not check_entry_consistency(entry)

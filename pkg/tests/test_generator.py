"""Candidate enumeration and coverage checking against brute-force oracles."""

import random
from dataclasses import replace
from itertools import product

import pytest
from genutil import random_document, random_item

from haraforge import (
    DEFAULT_GUIDE_WORDS,
    ElementNode,
    FunctionDef,
    GenerationError,
    GuideWord,
    HazardEntry,
    ItemDefinition,
    Malfunction,
    OperatingMode,
    Rating,
    SeverityClass,
    ExposureClass,
    ControllabilityClass,
    AsilLevel,
    Waiver,
    coverage_report,
    enumerate_candidates,
    enumerate_malfunctions,
    parse_entry_id,
)


def make_item(n_functions=3, n_guidewords=8, function_modes=None):
    modes = tuple(OperatingMode(f"m{i}", f"Mode {i}", automated=i > 0) for i in range(4))
    if function_modes is None:
        function_modes = [tuple(m.id for m in modes)] * n_functions
    functions = tuple(
        FunctionDef(f"f{i}", f"Function {i}", function_modes[i]) for i in range(n_functions)
    )
    guidewords = tuple(GuideWord(f"g{i}", f"Deviation {i}") for i in range(n_guidewords))
    return ItemDefinition(
        name="Test item",
        elements=(ElementNode("core", primary=True),),
        connections=(),
        modes=modes,
        functions=functions,
        guidewords=guidewords,
    )


class TestEnumerateMalfunctions:
    def test_product_count(self):
        item = make_item(n_functions=3, n_guidewords=8)
        assert len(enumerate_malfunctions(item)) == 24

    def test_single(self):
        item = make_item(n_functions=1, n_guidewords=1)
        result = enumerate_malfunctions(item)
        assert len(result) == 1
        assert result[0].description == "Deviation 0 of Function 0"

    def test_no_functions_is_an_error(self):
        item = make_item(n_functions=0)
        with pytest.raises(GenerationError):
            enumerate_malfunctions(item)

    def test_no_guidewords_is_an_error(self):
        item = make_item(n_guidewords=0)
        with pytest.raises(GenerationError):
            enumerate_malfunctions(item)

    def test_default_guide_words_shape(self):
        assert len(DEFAULT_GUIDE_WORDS) == 8
        assert len({g.id for g in DEFAULT_GUIDE_WORDS}) == 8


class TestEnumerateCandidates:
    def test_sum_over_applicable_modes(self):
        item = make_item(
            n_functions=2,
            n_guidewords=8,
            function_modes=[("m0", "m1", "m2", "m3"), ("m1",)],
        )
        assert len(enumerate_candidates(item)) == 8 * 4 + 8 * 1

    def test_all_modes_single_guideword(self):
        item = make_item(n_functions=1, n_guidewords=1)
        assert len(enumerate_candidates(item)) == 4

    def test_empty_guidewords_error(self):
        with pytest.raises(GenerationError):
            enumerate_candidates(make_item(n_guidewords=0))

    def test_deterministic_and_duplicate_free(self):
        rng = random.Random(7)
        for _ in range(20):
            item = random_item(rng)
            first = enumerate_candidates(item)
            second = enumerate_candidates(item)
            assert first == second
            assert len(set(first)) == len(first)
            assert first == sorted(first, key=lambda t: t.key())

    def test_modes_limited_to_function(self):
        item = make_item(n_functions=2, function_modes=[("m0",), ("m1", "m2")])
        triples = enumerate_candidates(item)
        for triple in triples:
            fn = item.function_map()[triple.function_id]
            assert triple.mode_id in fn.modes


def brute_force_gaps(doc):
    covered = {e.triple for e in doc.entries} | {w.triple for w in doc.waivers}
    return [t for t in enumerate_candidates(doc.item) if t.key() not in covered]


class TestCoverage:
    def test_corpus_complete(self, rev1, rev2):
        assert coverage_report(rev1) == []
        assert coverage_report(rev2) == []

    def test_removing_one_waiver_opens_one_gap(self, rev2):
        victim = rev2.waivers[0]
        doc = replace(rev2, waivers=rev2.waivers[1:])
        findings = coverage_report(doc)
        assert len(findings) == 1
        assert findings[0].triple.key() == victim.triple
        assert findings[0].reason == "no-entry-no-waiver"

    def test_fresh_document_gaps_equal_candidates(self, rev2):
        doc = replace(rev2, entries=(), waivers=())
        assert len(coverage_report(doc)) == len(enumerate_candidates(rev2.item))

    def test_matches_brute_force_on_random_documents(self):
        rng = random.Random(99)
        for _ in range(30):
            doc = random_document(rng, max_entries=12)
            assert [f.triple for f in coverage_report(doc)] == brute_force_gaps(doc)

    def test_adding_entry_or_waiver_never_increases_gaps(self):
        rng = random.Random(5)
        for _ in range(10):
            doc = random_document(rng, max_entries=8)
            before = len(coverage_report(doc))
            fn = rng.choice(doc.item.functions)
            gw = rng.choice(doc.item.guidewords)
            stem = max((e.id.stem for e in doc.entries), default=0) + 1
            entry = HazardEntry(
                id=parse_entry_id(str(stem)),
                mode_id=fn.modes[0],
                malfunction=Malfunction(fn.id, gw.id, ""),
                scenario_id=doc.item.scenarios[0].id,
                consequence="extra scenario",
                severity=Rating(SeverityClass.S1, "why"),
                exposure=Rating(ExposureClass.E1, "why"),
                controllability=Rating(ControllabilityClass.C1, "why"),
                asil=AsilLevel.QM,
                goal_id=doc.goals[0].id,
            )
            with_entry = replace(doc, entries=doc.entries + (entry,))
            assert len(coverage_report(with_entry)) <= before
            waiver = Waiver(fn.id, gw.id, fn.modes[0], "covered elsewhere")
            if not any(w.triple == waiver.triple for w in doc.waivers):
                with_waiver = replace(doc, waivers=doc.waivers + (waiver,))
                assert len(coverage_report(with_waiver)) <= before

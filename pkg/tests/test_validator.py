"""Rule engine: clean corpus, one mutation per rule, explanations."""

from dataclasses import replace

import pytest
from mutations import all_mutations, dropped_waiver

from haraforge import (
    ModelError,
    RevisionHistory,
    explain_rule,
    parse_hara,
    parse_item,
    serialize_document,
    serialize_item,
    validate,
)
from haraforge.validator import RULE_EXPLANATIONS


class TestCleanCorpus:
    def test_no_findings_without_history(self, rev1, rev2):
        assert validate(rev1) == []
        assert validate(rev2) == []

    def test_no_findings_with_history(self, rev2, history):
        assert validate(rev2, history) == []

    def test_clean_after_round_trip(self, corpus):
        item, history = corpus
        reparsed_item = parse_item(serialize_item(item))
        doc = parse_hara(serialize_document(history.latest), reparsed_item)
        assert validate(doc) == []

    def test_deterministic(self, rev2):
        first = validate(rev2)
        second = validate(rev2)
        assert first == second


class TestMutations:
    @pytest.mark.parametrize("rule", [f"R{i}" for i in range(1, 11)])
    def test_each_rule_fires_exactly_once(self, rev1, rev2, rule):
        entry = next(m for m in all_mutations(rev1, rev2) if m[0] == rule)
        _, doc, mutation_history = entry
        findings = validate(doc, mutation_history)
        assert len(findings) == 1, f"{rule}: expected one finding, got {findings}"
        assert findings[0].rule == rule

    def test_r3_names_the_entry(self, rev1, rev2):
        _, doc, _ = next(m for m in all_mutations(rev1, rev2) if m[0] == "R3")
        finding = validate(doc)[0]
        assert finding.location == "entry 3"
        assert finding.severity == "error"

    def test_r7_names_the_triple(self, rev1, rev2):
        _, doc, _ = next(m for m in all_mutations(rev1, rev2) if m[0] == "R7")
        finding = validate(doc)[0]
        waiver = dropped_waiver(rev2)
        for part in waiver.triple:
            assert part in finding.location
        assert finding.severity == "warning"

    def test_r8_names_the_stem(self, rev1, rev2):
        _, doc, mutation_history = next(m for m in all_mutations(rev1, rev2) if m[0] == "R8")
        finding = validate(doc, mutation_history)[0]
        assert "29" in finding.message
        assert finding.location == "revision 3"

    def test_r10_names_the_function(self, rev1, rev2):
        _, doc, mutation_history = next(m for m in all_mutations(rev1, rev2) if m[0] == "R10")
        finding = validate(doc, mutation_history)[0]
        assert "radio_communication" in finding.message
        assert finding.location == "revision 2"

    def test_severities(self, rev1, rev2):
        expected_warning = {"R7", "R9"}
        for rule, doc, mutation_history in all_mutations(rev1, rev2):
            finding = validate(doc, mutation_history)[0]
            assert (finding.severity == "warning") == (rule in expected_warning)


class TestHistoryHandling:
    def test_doc_must_be_in_history(self, rev1, rev2, history):
        outsider = replace(rev2, title="Someone else's analysis")
        with pytest.raises(ModelError):
            validate(outsider, history)
        lonely = RevisionHistory((rev1,))
        with pytest.raises(ModelError):
            validate(rev2, lonely)

    def test_findings_sorted_by_rule_then_location(self, rev1, rev2):
        from haraforge import evolve_unchecked

        mutated_entries = tuple(
            evolve_unchecked(entry, mode_id="manual", scenario_id="ghost")
            if str(entry.id) == "13"
            else entry
            for entry in rev2.entries
        )
        doc = evolve_unchecked(rev2, entries=mutated_entries)
        findings = validate(doc)
        assert [f.rule for f in findings] == ["R2", "R2"]
        assert [f.location for f in findings] == ["entry 13", "entry 13"]
        assert findings == sorted(findings, key=lambda f: f.sort_key())


class TestExplainRule:
    def test_r10_mentions_the_constraint(self):
        text = explain_rule("R10")
        assert "function set" in text
        assert "safety refinement" in text.lower()

    def test_r3_mentions_derivation(self):
        text = explain_rule("R3")
        assert "risk graph" in text

    def test_unknown_rule(self):
        with pytest.raises(ValueError):
            explain_rule("R99")

    def test_catalog_is_complete(self):
        assert sorted(RULE_EXPLANATIONS) == sorted(f"R{i}" for i in range(1, 11))
        for text in RULE_EXPLANATIONS.values():
            assert len(text) > 40

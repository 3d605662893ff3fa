"""Text format: parsing, diagnostics with locations, canonical serialization."""

import random

import pytest
from genutil import random_document

from haraforge import (
    ParseError,
    RevisionKind,
    parse_hara,
    parse_item,
    serialize,
    serialize_document,
    serialize_item,
)

MINIMAL_ITEM = """
item "Tiny"
element core primary
mode normal "Normal operation"
function act "Acting" modes [normal]
guideword loss "Loss of function"
scenario baseline "Everyday use" exposure E2 rationale "most of the time"
"""

MINIMAL_HARA = """
hara "Tiny analysis" revision 1 kind initial
goal SG01 "Acting must stay safe." modes [normal]
"""


def corpus_files(corpus):
    item, history = corpus
    return serialize_item(item), [serialize_document(rev) for rev in history.revisions]


class TestParseItem:
    def test_corpus_item_file(self, corpus):
        item_text, _ = corpus_files(corpus)
        item = parse_item(item_text)
        assert len(item.modes) == 4
        assert len(item.elements) == 5
        params = {p.name: (p.value, p.unit) for p in item.params}
        assert params == {
            "max_speed": (12, "km/h"),
            "follow_distance": (90, "m"),
            "coupled_distance": (10, "m"),
        }

    def test_minimal_item(self):
        item = parse_item(MINIMAL_ITEM)
        assert item.name == "Tiny"
        assert [f.id for f in item.functions] == ["act"]

    def test_undeclared_mode_reference_located(self):
        text = MINIMAL_ITEM + 'function other "Other" modes [ghost]\n'
        with pytest.raises(ParseError) as err:
            parse_item(text)
        diag = next(d for d in err.value.diagnostics if "ghost" in d.message)
        assert diag.location.line == text[: text.index("ghost")].count("\n") + 1

    def test_unterminated_string(self):
        with pytest.raises(ParseError) as err:
            parse_item('item "Tiny\nelement core primary\n')
        assert any("unterminated string" in d.message for d in err.value.diagnostics)
        assert err.value.diagnostics[0].location.line == 1

    def test_unknown_keyword(self):
        with pytest.raises(ParseError) as err:
            parse_item(MINIMAL_ITEM + "frobnicate core\n")
        assert any("unknown keyword 'frobnicate'" in d.message for d in err.value.diagnostics)

    def test_duplicate_id(self):
        with pytest.raises(ParseError) as err:
            parse_item(MINIMAL_ITEM + "element core\n")
        assert any("duplicate element 'core'" in d.message for d in err.value.diagnostics)

    def test_disconnected_element(self):
        with pytest.raises(ParseError) as err:
            parse_item(MINIMAL_ITEM + "element orphan\n")
        assert any("not connected" in d.message for d in err.value.diagnostics)

    def test_unknown_connect_target(self):
        with pytest.raises(ParseError) as err:
            parse_item(MINIMAL_ITEM + "connect core ghost\n")
        assert any("unknown element 'ghost'" in d.message for d in err.value.diagnostics)

    def test_comments_and_crlf(self):
        text = MINIMAL_ITEM.replace("\n", "  # trailing comment\r\n")
        item = parse_item(text)
        assert item == parse_item(MINIMAL_ITEM)
        assert "\r" not in serialize_item(item)

    def test_missing_item_statement(self):
        with pytest.raises(ParseError) as err:
            parse_item("element core primary\n")
        assert any("missing 'item'" in d.message for d in err.value.diagnostics)


class TestParseHara:
    def test_corpus_documents(self, corpus):
        item, history = corpus
        item_text, rev_texts = corpus_files(corpus)
        parsed_item = parse_item(item_text)
        for text, expected in zip(rev_texts, history.revisions):
            doc = parse_hara(text, parsed_item)
            assert doc == expected
        assert {g.id for g in parse_hara(rev_texts[1], parsed_item).goals} == {
            f"SG{i:02d}" for i in range(1, 18)
        }

    def test_goals_only_document(self):
        item = parse_item(MINIMAL_ITEM)
        doc = parse_hara(MINIMAL_HARA, item)
        assert doc.entries == ()
        assert [g.id for g in doc.goals] == ["SG01"]
        assert doc.kind is RevisionKind.INITIAL

    def test_rating_out_of_range(self):
        item = parse_item(MINIMAL_ITEM)
        text = MINIMAL_HARA + (
            'entry 1 mode normal function act guideword loss malfunction "none" scenario baseline '
            'consequence "bad" S4 "too big" E1 "rare" C1 "easy" asil QM goal SG01\n'
        )
        with pytest.raises(ParseError) as err:
            parse_hara(text, item)
        assert any("out of range" in d.message for d in err.value.diagnostics)

    def test_malformed_entry_id(self):
        item = parse_item(MINIMAL_ITEM)
        text = MINIMAL_HARA + (
            'entry 07 mode normal function act guideword loss malfunction "none" scenario baseline '
            'consequence "bad" S1 "a" E1 "b" C1 "c" asil QM goal SG01\n'
        )
        with pytest.raises(ParseError) as err:
            parse_hara(text, item)
        assert any("leading zeros" in d.message for d in err.value.diagnostics)

    def test_malformed_goal_id(self):
        item = parse_item(MINIMAL_ITEM)
        with pytest.raises(ParseError) as err:
            parse_hara('hara "x" revision 1 kind initial\ngoal SG1 "text" modes [normal]\n', item)
        assert any("malformed safety-goal id" in d.message for d in err.value.diagnostics)

    def test_dangling_entry_goal(self):
        item = parse_item(MINIMAL_ITEM)
        text = MINIMAL_HARA + (
            'entry 1 mode normal function act guideword loss malfunction "none" scenario baseline '
            'consequence "bad" S1 "a" E1 "b" C1 "c" asil QM goal SG09\n'
        )
        with pytest.raises(ParseError) as err:
            parse_hara(text, item)
        assert any("undeclared safety goal 'SG09'" in d.message for d in err.value.diagnostics)

    def test_missing_rationale_for_nonzero_class(self):
        item = parse_item(MINIMAL_ITEM)
        text = MINIMAL_HARA + (
            'entry 1 mode normal function act guideword loss malfunction "none" scenario baseline '
            'consequence "bad" S1 "" E1 "b" C1 "c" asil QM goal SG01\n'
        )
        with pytest.raises(ParseError) as err:
            parse_hara(text, item)
        assert any("requires a rationale" in d.message for d in err.value.diagnostics)

    def test_single_line_entries_accepted(self, corpus):
        item, history = corpus
        rev2 = history.revisions[1]
        squashed = " ".join(serialize_document(rev2).split("\n"))
        assert parse_hara(squashed, item) == rev2


class TestSerialization:
    def test_item_fixpoint(self, corpus):
        item_text, rev_texts = corpus_files(corpus)
        assert serialize_item(parse_item(item_text)) == item_text
        item = parse_item(item_text)
        for text in rev_texts:
            assert serialize_document(parse_hara(text, item)) == text

    def test_entries_sorted_on_output(self, corpus):
        item, history = corpus
        rev2 = history.revisions[1]
        text = serialize_document(rev2)
        entry_lines = [line for line in text.splitlines() if line.startswith("entry ")]
        ids = [line.split()[1] for line in entry_lines]
        assert ids == sorted(ids, key=lambda t: (int(t.rstrip("abcdefghijklmnopqrstuvwxyz")), t))
        assert ids.index("37") < ids.index("37a")

    def test_serialize_dispatch(self, corpus):
        item, history = corpus
        assert serialize(item) == serialize_item(item)
        assert serialize(history.latest) == serialize_document(history.latest)
        with pytest.raises(TypeError):
            serialize(42)

    def test_escaping_round_trip(self):
        item = parse_item(MINIMAL_ITEM)
        text = (
            'hara "Quote \\" and backslash \\\\ survive" revision 1 kind initial\n'
            'goal SG01 "Text with \\"both\\" \\\\ kinds." modes [normal]\n'
        )
        doc = parse_hara(text, item)
        assert doc.title == 'Quote " and backslash \\ survive'
        assert parse_hara(serialize_document(doc), item) == doc

    def test_random_round_trips(self):
        rng = random.Random(31)
        for _ in range(40):
            doc = random_document(rng)
            item_text = serialize_item(doc.item)
            reparsed_item = parse_item(item_text)
            assert reparsed_item == doc.item
            assert serialize_item(reparsed_item) == item_text
            doc_text = serialize_document(doc)
            reparsed = parse_hara(doc_text, reparsed_item)
            assert reparsed == doc
            assert serialize_document(reparsed) == doc_text


class TestRobustness:
    def test_every_diagnostic_points_into_input(self):
        bad = 'item "x"\nmode a "A"\nfunction f "F" modes [ghost, ghost]\nconnect a b\n'
        with pytest.raises(ParseError) as err:
            parse_item(bad)
        lines = bad.count("\n") + 1
        for diag in err.value.diagnostics:
            assert 1 <= diag.location.line <= lines
            assert diag.location.column >= 1

    def test_fuzz_never_crashes(self, corpus):
        rng = random.Random(1234)
        item = corpus[0]
        corpus_text = serialize_document(corpus[1].latest)
        for i in range(600):
            if i % 3 == 0:
                raw = bytes(rng.randrange(256) for _ in range(rng.randrange(0, 200)))
                text = raw.decode("latin-1")
            else:
                start = rng.randrange(0, max(1, len(corpus_text) - 100))
                text = corpus_text[start : start + rng.randrange(0, 400)]
            for parser in (lambda t: parse_item(t), lambda t: parse_hara(t, item)):
                try:
                    parser(text)
                except ParseError:
                    pass

"""Parsing and canonical serialization of the ``.item`` and ``.hara`` formats.

The grammar is line-keyword oriented: every statement starts with a keyword
and consumes a fixed clause sequence, so the parser stays small and every
diagnostic points at a concrete token. Parsing is total: any input either
yields a fully resolved model value or raises :class:`ParseError` carrying
located diagnostics, never a partial result.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Union

from .model import (
    AsilLevel,
    ControllabilityClass,
    ElementNode,
    ExposureClass,
    FunctionDef,
    GuideWord,
    HaraDocument,
    HazardEntry,
    ItemDefinition,
    Malfunction,
    ModelError,
    OperatingMode,
    OperationalScenario,
    Parameter,
    Rating,
    RevisionKind,
    SafetyGoal,
    SeverityClass,
    Waiver,
    parse_entry_id,
)

_MAX_DIAGNOSTICS = 100

ITEM_KEYWORDS = frozenset({"item", "element", "connect", "mode", "function", "guideword", "scenario", "param"})
HARA_KEYWORDS = frozenset({"hara", "goal", "entry", "waive"})

_GOAL_REF_RE = re.compile(r"SG[0-9]{2}\Z")
_CLASS_RE = re.compile(r"([SEC])([0-9]+)\Z")
_INT_RE = re.compile(r"[0-9]+\Z")

_CLASS_TYPES = {"S": SeverityClass, "E": ExposureClass, "C": ControllabilityClass}
_CLASS_MAX = {"S": 3, "E": 4, "C": 3}


@dataclass(frozen=True)
class SourceLocation:
    file: str
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


@dataclass(frozen=True)
class ParseDiagnostic:
    location: SourceLocation
    message: str
    severity: str = "error"

    def __post_init__(self) -> None:
        if not self.message:
            raise ValueError("diagnostic message must not be empty")

    def __str__(self) -> str:
        return f"{self.location}: {self.severity}: {self.message}"


class ParseError(Exception):
    """Raised when parsing fails; carries all collected diagnostics."""

    def __init__(self, diagnostics: list[ParseDiagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics[:3]))


# ---------------------------------------------------------------------------
# Lexer


@dataclass(frozen=True)
class _Token:
    kind: str  # word | num | string | punct
    text: str
    line: int
    column: int


class _SyntaxIssue(Exception):
    def __init__(self, diagnostic: ParseDiagnostic):
        self.diagnostic = diagnostic
        super().__init__(diagnostic.message)


def _lex(text: str, filename: str) -> tuple[list[_Token], list[ParseDiagnostic]]:
    tokens: list[_Token] = []
    diagnostics: list[ParseDiagnostic] = []
    line, col = 1, 1
    i, n = 0, len(text)

    def loc(ln: int, cl: int) -> SourceLocation:
        return SourceLocation(filename, ln, cl)

    while i < n and len(diagnostics) < _MAX_DIAGNOSTICS:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
        elif ch in " \t\r\f\v":
            col += 1
            i += 1
        elif ch == "#":
            while i < n and text[i] != "\n":
                i += 1
        elif ch in "[],":
            tokens.append(_Token("punct", ch, line, col))
            col += 1
            i += 1
        elif ch == '"':
            start_line, start_col = line, col
            i += 1
            col += 1
            parts: list[str] = []
            closed = False
            while i < n:
                ch = text[i]
                if ch == '"':
                    closed = True
                    i += 1
                    col += 1
                    break
                if ch == "\n":
                    break
                if ch == "\\":
                    if i + 1 < n and text[i + 1] in ('"', "\\"):
                        parts.append(text[i + 1])
                        i += 2
                        col += 2
                        continue
                    diagnostics.append(
                        ParseDiagnostic(loc(line, col), "invalid escape sequence in string (only \\\" and \\\\ exist)")
                    )
                    i += 1
                    col += 1
                    continue
                parts.append(ch)
                i += 1
                col += 1
            if not closed:
                diagnostics.append(ParseDiagnostic(loc(start_line, start_col), "unterminated string literal"))
            else:
                tokens.append(_Token("string", "".join(parts), start_line, start_col))
        elif ch.isdigit() or (ch == "-" and i + 1 < n and text[i + 1].isdigit()):
            start_col = col
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] in "._"):
                j += 1
            tokens.append(_Token("num", text[i:j], line, start_col))
            col += j - i
            i = j
        elif ch.isalpha() or ch == "_":
            start_col = col
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] in "_-"):
                j += 1
            tokens.append(_Token("word", text[i:j], line, start_col))
            col += j - i
            i = j
        else:
            diagnostics.append(ParseDiagnostic(loc(line, col), f"unexpected character {ch!r}"))
            col += 1
            i += 1
    return tokens, diagnostics


class _Cursor:
    def __init__(self, tokens: list[_Token], filename: str):
        self.tokens = tokens
        self.filename = filename
        self.pos = 0
        if tokens:
            last = tokens[-1]
            self.eof = SourceLocation(filename, last.line, last.column + len(last.text))
        else:
            self.eof = SourceLocation(filename, 1, 1)

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def peek(self) -> Optional[_Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def location(self, token: Optional[_Token]) -> SourceLocation:
        if token is None:
            return self.eof
        return SourceLocation(self.filename, token.line, token.column)

    def take(self, expectation: str) -> _Token:
        token = self.peek()
        if token is None:
            raise _SyntaxIssue(ParseDiagnostic(self.eof, f"unexpected end of input, expected {expectation}"))
        self.pos += 1
        return token

    def expect_keyword(self, keyword: str) -> _Token:
        token = self.take(f"keyword '{keyword}'")
        if token.kind != "word" or token.text != keyword:
            raise _SyntaxIssue(
                ParseDiagnostic(self.location(token), f"expected keyword '{keyword}', got {token.text!r}")
            )
        return token

    def expect_ident(self, what: str) -> _Token:
        token = self.take(what)
        if token.kind != "word":
            raise _SyntaxIssue(ParseDiagnostic(self.location(token), f"expected {what}, got {token.text!r}"))
        return token

    def expect_string(self, what: str) -> _Token:
        token = self.take(what)
        if token.kind != "string":
            raise _SyntaxIssue(ParseDiagnostic(self.location(token), f"expected quoted {what}, got {token.text!r}"))
        return token

    def expect_int(self, what: str) -> tuple[int, _Token]:
        token = self.take(what)
        if token.kind != "num" or not _INT_RE.match(token.text):
            raise _SyntaxIssue(ParseDiagnostic(self.location(token), f"expected integer {what}, got {token.text!r}"))
        return int(token.text), token

    def match_word(self, word: str) -> Optional[_Token]:
        token = self.peek()
        if token is not None and token.kind == "word" and token.text == word:
            self.pos += 1
            return token
        return None

    def expect_class(self, letter: str) -> tuple[int, _Token]:
        token = self.take(f"{letter}-class (e.g. {letter}1)")
        m = _CLASS_RE.match(token.text) if token.kind == "word" else None
        if not m or m.group(1) != letter:
            raise _SyntaxIssue(
                ParseDiagnostic(self.location(token), f"expected {letter}-class such as {letter}1, got {token.text!r}")
            )
        value = int(m.group(2))
        if value > _CLASS_MAX[letter]:
            raise _SyntaxIssue(
                ParseDiagnostic(
                    self.location(token),
                    f"rating class {token.text} out of range ({letter}0..{letter}{_CLASS_MAX[letter]})",
                )
            )
        return value, token

    def expect_mode_list(self) -> list[_Token]:
        opener = self.take("'['")
        if opener.kind != "punct" or opener.text != "[":
            raise _SyntaxIssue(ParseDiagnostic(self.location(opener), f"expected '[', got {opener.text!r}"))
        names: list[_Token] = []
        token = self.peek()
        if token is not None and token.kind == "punct" and token.text == "]":
            self.pos += 1
            return names
        while True:
            names.append(self.expect_ident("mode id"))
            token = self.take("',' or ']'")
            if token.kind == "punct" and token.text == "]":
                return names
            if not (token.kind == "punct" and token.text == ","):
                raise _SyntaxIssue(
                    ParseDiagnostic(self.location(token), f"expected ',' or ']', got {token.text!r}")
                )

    def skip_to_statement(self, keywords: frozenset[str]) -> None:
        while not self.at_end():
            token = self.tokens[self.pos]
            if token.kind == "word" and token.text in keywords:
                return
            self.pos += 1


# ---------------------------------------------------------------------------
# Raw statements (syntax phase)


@dataclass
class _Ref:
    name: str
    loc: SourceLocation


@dataclass
class _RawStatement:
    loc: SourceLocation


@dataclass
class _RawItem(_RawStatement):
    name: str


@dataclass
class _RawElement(_RawStatement):
    id: _Ref
    primary: bool


@dataclass
class _RawConnect(_RawStatement):
    a: _Ref
    b: _Ref


@dataclass
class _RawMode(_RawStatement):
    id: _Ref
    name: str
    automated: bool


@dataclass
class _RawFunction(_RawStatement):
    id: _Ref
    description: str
    modes: list[_Ref]


@dataclass
class _RawGuideword(_RawStatement):
    id: _Ref
    interpretation: str


@dataclass
class _RawScenario(_RawStatement):
    id: _Ref
    description: str
    exposure: int
    rationale: str


@dataclass
class _RawParam(_RawStatement):
    name: _Ref
    value: Union[int, float]
    unit: str


@dataclass
class _RawHeader(_RawStatement):
    title: str
    revision: int
    kind: str
    kind_loc: SourceLocation
    based_on: Optional[int]


@dataclass
class _RawGoal(_RawStatement):
    id: _Ref
    text: str
    modes: list[_Ref]
    asil: Optional[str] = None


@dataclass
class _RawRating(_RawStatement):
    value: int
    rationale: str


@dataclass
class _RawEntry(_RawStatement):
    id_text: str
    mode: _Ref = None  # type: ignore[assignment]
    function: _Ref = None  # type: ignore[assignment]
    guideword: _Ref = None  # type: ignore[assignment]
    malfunction: str = ""
    scenario: _Ref = None  # type: ignore[assignment]
    consequence: str = ""
    severity: _RawRating = None  # type: ignore[assignment]
    exposure: _RawRating = None  # type: ignore[assignment]
    controllability: _RawRating = None  # type: ignore[assignment]
    asil: str = ""
    goal: _Ref = None  # type: ignore[assignment]


@dataclass
class _RawWaive(_RawStatement):
    function: _Ref
    guideword: _Ref
    mode: _Ref
    rationale: str


def _ref(token: _Token, cursor: _Cursor) -> _Ref:
    return _Ref(token.text, cursor.location(token))


def _parse_statements(
    cursor: _Cursor, keywords: frozenset[str], diagnostics: list[ParseDiagnostic]
) -> list[_RawStatement]:
    statements: list[_RawStatement] = []
    while not cursor.at_end() and len(diagnostics) < _MAX_DIAGNOSTICS:
        token = cursor.peek()
        assert token is not None
        if token.kind != "word" or token.text not in keywords:
            diagnostics.append(
                ParseDiagnostic(cursor.location(token), f"unknown keyword {token.text!r}")
            )
            cursor.pos += 1
            cursor.skip_to_statement(keywords)
            continue
        try:
            statements.append(_parse_statement(cursor, token.text))
        except _SyntaxIssue as issue:
            diagnostics.append(issue.diagnostic)
            cursor.skip_to_statement(keywords)
    if len(diagnostics) >= _MAX_DIAGNOSTICS:
        diagnostics.append(ParseDiagnostic(cursor.eof, "too many errors, giving up"))
    return statements


def _parse_statement(cursor: _Cursor, keyword: str) -> _RawStatement:
    start = cursor.location(cursor.peek())
    cursor.pos += 1  # consume the statement keyword
    if keyword == "item":
        return _RawItem(start, cursor.expect_string("item name").text)
    if keyword == "element":
        ident = cursor.expect_ident("element id")
        primary = cursor.match_word("primary") is not None
        return _RawElement(start, _ref(ident, cursor), primary)
    if keyword == "connect":
        a = cursor.expect_ident("element id")
        b = cursor.expect_ident("element id")
        return _RawConnect(start, _ref(a, cursor), _ref(b, cursor))
    if keyword == "mode":
        ident = cursor.expect_ident("mode id")
        name = cursor.expect_string("mode name")
        automated = cursor.match_word("automated") is not None
        return _RawMode(start, _ref(ident, cursor), name.text, automated)
    if keyword == "function":
        ident = cursor.expect_ident("function id")
        description = cursor.expect_string("function description")
        cursor.expect_keyword("modes")
        modes = cursor.expect_mode_list()
        return _RawFunction(start, _ref(ident, cursor), description.text, [_ref(t, cursor) for t in modes])
    if keyword == "guideword":
        ident = cursor.expect_ident("guide word id")
        interpretation = cursor.expect_string("guide word interpretation")
        return _RawGuideword(start, _ref(ident, cursor), interpretation.text)
    if keyword == "scenario":
        ident = cursor.expect_ident("scenario id")
        description = cursor.expect_string("scenario description")
        cursor.expect_keyword("exposure")
        exposure, _tok = cursor.expect_class("E")
        cursor.expect_keyword("rationale")
        rationale = cursor.expect_string("exposure rationale")
        return _RawScenario(start, _ref(ident, cursor), description.text, exposure, rationale.text)
    if keyword == "param":
        name = cursor.expect_ident("parameter name")
        number = cursor.take("number")
        value = _to_number(number, cursor)
        unit = cursor.expect_string("unit")
        return _RawParam(start, _ref(name, cursor), value, unit.text)
    if keyword == "hara":
        title = cursor.expect_string("document title")
        cursor.expect_keyword("revision")
        revision, _tok = cursor.expect_int("revision number")
        cursor.expect_keyword("kind")
        kind = cursor.take("revision kind")
        if kind.kind != "word" or kind.text not in {k.value for k in RevisionKind}:
            raise _SyntaxIssue(
                ParseDiagnostic(
                    cursor.location(kind),
                    f"expected revision kind initial|item-refinement|safety-refinement, got {kind.text!r}",
                )
            )
        based_on = None
        if cursor.match_word("based-on"):
            based_on, _tok = cursor.expect_int("based-on revision")
        return _RawHeader(start, title.text, revision, kind.text, cursor.location(kind), based_on)
    if keyword == "goal":
        ident = cursor.take("safety-goal id")
        if ident.kind != "word" or not _GOAL_REF_RE.match(ident.text):
            raise _SyntaxIssue(
                ParseDiagnostic(cursor.location(ident), f"malformed safety-goal id {ident.text!r} (expected SGnn)")
            )
        text = cursor.expect_string("safety-goal text")
        cursor.expect_keyword("modes")
        modes = cursor.expect_mode_list()
        asil = None
        if cursor.match_word("asil"):
            asil = _expect_asil(cursor)
        return _RawGoal(start, _ref(ident, cursor), text.text, [_ref(t, cursor) for t in modes], asil)
    if keyword == "entry":
        id_token = cursor.take("entry id")
        if id_token.kind not in ("num",):
            raise _SyntaxIssue(
                ParseDiagnostic(cursor.location(id_token), f"malformed entry id {id_token.text!r}")
            )
        raw = _RawEntry(start, id_token.text)
        cursor.expect_keyword("mode")
        raw.mode = _ref(cursor.expect_ident("mode id"), cursor)
        cursor.expect_keyword("function")
        raw.function = _ref(cursor.expect_ident("function id"), cursor)
        cursor.expect_keyword("guideword")
        raw.guideword = _ref(cursor.expect_ident("guide word id"), cursor)
        cursor.expect_keyword("malfunction")
        raw.malfunction = cursor.expect_string("malfunction description").text
        cursor.expect_keyword("scenario")
        raw.scenario = _ref(cursor.expect_ident("scenario id"), cursor)
        cursor.expect_keyword("consequence")
        raw.consequence = cursor.expect_string("consequence").text
        for letter, field_name in (("S", "severity"), ("E", "exposure"), ("C", "controllability")):
            value, class_token = cursor.expect_class(letter)
            rationale = cursor.expect_string(f"{letter}-rationale")
            setattr(raw, field_name, _RawRating(cursor.location(class_token), value, rationale.text))
        cursor.expect_keyword("asil")
        raw.asil = _expect_asil(cursor)
        cursor.expect_keyword("goal")
        goal_token = cursor.take("safety-goal id")
        if goal_token.kind != "word" or not _GOAL_REF_RE.match(goal_token.text):
            raise _SyntaxIssue(
                ParseDiagnostic(
                    cursor.location(goal_token), f"malformed safety-goal id {goal_token.text!r} (expected SGnn)"
                )
            )
        raw.goal = _ref(goal_token, cursor)
        return raw
    if keyword == "waive":
        cursor.expect_keyword("function")
        fn = cursor.expect_ident("function id")
        cursor.expect_keyword("guideword")
        gw = cursor.expect_ident("guide word id")
        cursor.expect_keyword("mode")
        mode = cursor.expect_ident("mode id")
        cursor.expect_keyword("rationale")
        rationale = cursor.expect_string("waiver rationale")
        return _RawWaive(start, _ref(fn, cursor), _ref(gw, cursor), _ref(mode, cursor), rationale.text)
    raise AssertionError(f"unhandled keyword {keyword}")


def _expect_asil(cursor: _Cursor) -> str:
    token = cursor.take("ASIL level")
    if token.kind != "word" or token.text not in ("QM", "A", "B", "C", "D"):
        raise _SyntaxIssue(
            ParseDiagnostic(cursor.location(token), f"expected ASIL level QM|A|B|C|D, got {token.text!r}")
        )
    return token.text


def _to_number(token: _Token, cursor: _Cursor) -> Union[int, float]:
    if token.kind == "num":
        if _INT_RE.match(token.text.lstrip("-")):
            return int(token.text)
        try:
            return float(token.text)
        except ValueError:
            pass
    raise _SyntaxIssue(ParseDiagnostic(cursor.location(token), f"expected a number, got {token.text!r}"))


# ---------------------------------------------------------------------------
# Semantic phase


def parse_item(text: str, filename: str = "<item>") -> ItemDefinition:
    """Parse an item definition; raises :class:`ParseError` on any problem."""
    tokens, diagnostics = _lex(text, filename)
    cursor = _Cursor(tokens, filename)
    statements = _parse_statements(cursor, ITEM_KEYWORDS, diagnostics)
    start = SourceLocation(filename, 1, 1)

    item_stmts = [s for s in statements if isinstance(s, _RawItem)]
    if not item_stmts:
        diagnostics.append(ParseDiagnostic(start, "missing 'item' declaration"))
    for extra in item_stmts[1:]:
        diagnostics.append(ParseDiagnostic(extra.loc, "duplicate 'item' declaration"))

    def collect(kind, what):
        out, seen = [], {}
        for stmt in statements:
            if isinstance(stmt, kind):
                key = stmt.name.name if kind is _RawParam else stmt.id.name
                loc = stmt.name.loc if kind is _RawParam else stmt.id.loc
                if key in seen:
                    diagnostics.append(ParseDiagnostic(loc, f"duplicate {what} {key!r}"))
                    continue
                seen[key] = stmt
                out.append(stmt)
        return out, seen

    raw_elements, element_map = collect(_RawElement, "element")
    raw_modes, mode_map = collect(_RawMode, "mode")
    raw_functions, _fn_map = collect(_RawFunction, "function")
    raw_guidewords, _gw_map = collect(_RawGuideword, "guide word")
    raw_scenarios, _sc_map = collect(_RawScenario, "scenario")
    raw_params, _pm_map = collect(_RawParam, "parameter")

    mode_names = {}
    for raw in raw_modes:
        if raw.name in mode_names:
            diagnostics.append(ParseDiagnostic(raw.id.loc, f"duplicate mode name {raw.name!r}"))
        mode_names[raw.name] = raw

    primaries = [raw for raw in raw_elements if raw.primary]
    if raw_elements and not primaries:
        diagnostics.append(ParseDiagnostic(start, "no element is flagged 'primary'"))
    for extra in primaries[1:]:
        diagnostics.append(ParseDiagnostic(extra.id.loc, "more than one element is flagged 'primary'"))

    connections = []
    for stmt in statements:
        if isinstance(stmt, _RawConnect):
            ok = True
            for end in (stmt.a, stmt.b):
                if end.name not in element_map:
                    diagnostics.append(ParseDiagnostic(end.loc, f"connection references unknown element {end.name!r}"))
                    ok = False
            if ok:
                connections.append((stmt.a.name, stmt.b.name))

    if primaries and raw_elements and not any(d.severity == "error" for d in diagnostics):
        reachable = {primaries[0].id.name}
        adjacency: dict[str, set[str]] = {e.id.name: set() for e in raw_elements}
        for a, b in connections:
            adjacency[a].add(b)
            adjacency[b].add(a)
        frontier = [primaries[0].id.name]
        while frontier:
            node = frontier.pop()
            for nxt in adjacency[node]:
                if nxt not in reachable:
                    reachable.add(nxt)
                    frontier.append(nxt)
        for raw in raw_elements:
            if raw.id.name not in reachable:
                diagnostics.append(
                    ParseDiagnostic(raw.id.loc, f"element {raw.id.name!r} is not connected to the item under analysis")
                )

    functions = []
    for raw in raw_functions:
        mode_ids = []
        for ref in raw.modes:
            if ref.name not in mode_map:
                diagnostics.append(ParseDiagnostic(ref.loc, f"function references undeclared mode {ref.name!r}"))
            elif ref.name in mode_ids:
                diagnostics.append(ParseDiagnostic(ref.loc, f"mode {ref.name!r} listed twice"))
            else:
                mode_ids.append(ref.name)
        if not raw.modes:
            diagnostics.append(ParseDiagnostic(raw.id.loc, f"function {raw.id.name!r} lists no applicable modes"))
        functions.append((raw, mode_ids))

    if any(d.severity == "error" for d in diagnostics):
        raise ParseError(diagnostics)

    try:
        return ItemDefinition(
            name=item_stmts[0].name,
            elements=tuple(ElementNode(raw.id.name, raw.primary) for raw in raw_elements),
            connections=tuple(connections),
            modes=tuple(OperatingMode(raw.id.name, raw.name, raw.automated) for raw in raw_modes),
            functions=tuple(
                FunctionDef(raw.id.name, raw.description, tuple(mode_ids)) for raw, mode_ids in functions
            ),
            guidewords=tuple(GuideWord(raw.id.name, raw.interpretation) for raw in raw_guidewords),
            scenarios=tuple(
                OperationalScenario(raw.id.name, raw.description, ExposureClass(raw.exposure), raw.rationale)
                for raw in raw_scenarios
            ),
            params=tuple(Parameter(raw.name.name, raw.value, raw.unit) for raw in raw_params),
        )
    except ModelError as exc:
        diagnostics.append(ParseDiagnostic(item_stmts[0].loc, str(exc)))
        raise ParseError(diagnostics) from exc


def parse_hara(text: str, item: ItemDefinition, filename: str = "<hara>") -> HaraDocument:
    """Parse a hazard analysis document against an already-parsed item."""
    tokens, diagnostics = _lex(text, filename)
    cursor = _Cursor(tokens, filename)
    statements = _parse_statements(cursor, HARA_KEYWORDS, diagnostics)
    start = SourceLocation(filename, 1, 1)

    headers = [s for s in statements if isinstance(s, _RawHeader)]
    if not headers:
        diagnostics.append(ParseDiagnostic(start, "missing 'hara' declaration"))
    for extra in headers[1:]:
        diagnostics.append(ParseDiagnostic(extra.loc, "duplicate 'hara' declaration"))

    mode_map = item.mode_map()
    function_map = item.function_map()
    guideword_map = item.guideword_map()
    scenario_map = item.scenario_map()

    goals: list[SafetyGoal] = []
    goal_ids: dict[str, _RawGoal] = {}
    for raw in (s for s in statements if isinstance(s, _RawGoal)):
        if raw.id.name in goal_ids:
            diagnostics.append(ParseDiagnostic(raw.id.loc, f"duplicate safety-goal id {raw.id.name!r}"))
            continue
        goal_ids[raw.id.name] = raw
        mode_ids = []
        ok = True
        for ref in raw.modes:
            if ref.name not in mode_map:
                diagnostics.append(ParseDiagnostic(ref.loc, f"goal references undeclared mode {ref.name!r}"))
                ok = False
            elif ref.name in mode_ids:
                diagnostics.append(ParseDiagnostic(ref.loc, f"mode {ref.name!r} listed twice"))
                ok = False
            else:
                mode_ids.append(ref.name)
        if not ok:
            continue
        try:
            goals.append(
                SafetyGoal(
                    raw.id.name,
                    raw.text,
                    tuple(mode_ids),
                    AsilLevel[raw.asil] if raw.asil is not None else None,
                )
            )
        except ModelError as exc:
            diagnostics.append(ParseDiagnostic(raw.id.loc, str(exc)))

    entries: list[HazardEntry] = []
    entry_ids: dict[str, _RawEntry] = {}
    for raw in (s for s in statements if isinstance(s, _RawEntry)):
        ok = True
        try:
            entry_id = parse_entry_id(raw.id_text)
        except ModelError as exc:
            diagnostics.append(ParseDiagnostic(raw.loc, str(exc)))
            continue
        if raw.id_text in entry_ids:
            diagnostics.append(ParseDiagnostic(raw.loc, f"duplicate entry id {raw.id_text!r}"))
            continue
        entry_ids[raw.id_text] = raw
        if raw.mode.name not in mode_map:
            diagnostics.append(ParseDiagnostic(raw.mode.loc, f"entry references undeclared mode {raw.mode.name!r}"))
            ok = False
        if raw.function.name not in function_map:
            diagnostics.append(
                ParseDiagnostic(raw.function.loc, f"entry references undeclared function {raw.function.name!r}")
            )
            ok = False
        elif raw.mode.name in mode_map and raw.mode.name not in function_map[raw.function.name].modes:
            diagnostics.append(
                ParseDiagnostic(
                    raw.mode.loc,
                    f"mode {raw.mode.name!r} is not applicable to function {raw.function.name!r}",
                )
            )
            ok = False
        if raw.guideword.name not in guideword_map:
            diagnostics.append(
                ParseDiagnostic(raw.guideword.loc, f"entry references undeclared guide word {raw.guideword.name!r}")
            )
            ok = False
        if raw.scenario.name not in scenario_map:
            diagnostics.append(
                ParseDiagnostic(raw.scenario.loc, f"entry references undeclared scenario {raw.scenario.name!r}")
            )
            ok = False
        if raw.goal.name not in goal_ids:
            diagnostics.append(
                ParseDiagnostic(raw.goal.loc, f"entry references undeclared safety goal {raw.goal.name!r}")
            )
            ok = False
        if not ok:
            continue
        ratings = {}
        for field_name, cls in (("severity", SeverityClass), ("exposure", ExposureClass), ("controllability", ControllabilityClass)):
            raw_rating: _RawRating = getattr(raw, field_name)
            try:
                ratings[field_name] = Rating(cls(raw_rating.value), raw_rating.rationale)
            except ModelError as exc:
                diagnostics.append(ParseDiagnostic(raw_rating.loc, str(exc)))
                ok = False
        if not ok:
            continue
        try:
            entries.append(
                HazardEntry(
                    id=entry_id,
                    mode_id=raw.mode.name,
                    malfunction=Malfunction(raw.function.name, raw.guideword.name, raw.malfunction),
                    scenario_id=raw.scenario.name,
                    consequence=raw.consequence,
                    severity=ratings["severity"],
                    exposure=ratings["exposure"],
                    controllability=ratings["controllability"],
                    asil=AsilLevel[raw.asil],
                    goal_id=raw.goal.name,
                )
            )
        except ModelError as exc:
            diagnostics.append(ParseDiagnostic(raw.loc, str(exc)))

    waivers: list[Waiver] = []
    for raw in (s for s in statements if isinstance(s, _RawWaive)):
        ok = True
        if raw.function.name not in function_map:
            diagnostics.append(
                ParseDiagnostic(raw.function.loc, f"waiver references undeclared function {raw.function.name!r}")
            )
            ok = False
        if raw.guideword.name not in guideword_map:
            diagnostics.append(
                ParseDiagnostic(raw.guideword.loc, f"waiver references undeclared guide word {raw.guideword.name!r}")
            )
            ok = False
        if raw.mode.name not in mode_map:
            diagnostics.append(ParseDiagnostic(raw.mode.loc, f"waiver references undeclared mode {raw.mode.name!r}"))
            ok = False
        if not ok:
            continue
        try:
            waivers.append(Waiver(raw.function.name, raw.guideword.name, raw.mode.name, raw.rationale))
        except ModelError as exc:
            diagnostics.append(ParseDiagnostic(raw.loc, str(exc)))

    if any(d.severity == "error" for d in diagnostics):
        raise ParseError(diagnostics)

    header = headers[0]
    try:
        return HaraDocument(
            title=header.title,
            revision=header.revision,
            kind=RevisionKind(header.kind),
            based_on=header.based_on,
            item=item,
            entries=tuple(entries),
            waivers=tuple(waivers),
            goals=tuple(goals),
        )
    except ModelError as exc:
        diagnostics.append(ParseDiagnostic(header.loc, str(exc)))
        raise ParseError(diagnostics) from exc


# ---------------------------------------------------------------------------
# Canonical serialization


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _mode_list(mode_ids) -> str:
    return "[" + ", ".join(mode_ids) + "]"


def serialize_item(item: ItemDefinition) -> str:
    sections: list[list[str]] = [[f"item {_quote(item.name)}"]]
    if item.elements:
        sections.append([f"element {e.id} primary" if e.primary else f"element {e.id}" for e in item.elements])
    if item.connections:
        sections.append([f"connect {a} {b}" for a, b in item.connections])
    if item.modes:
        sections.append(
            [f"mode {m.id} {_quote(m.name)} automated" if m.automated else f"mode {m.id} {_quote(m.name)}" for m in item.modes]
        )
    if item.functions:
        sections.append(
            [f"function {f.id} {_quote(f.description)} modes {_mode_list(f.modes)}" for f in item.functions]
        )
    if item.guidewords:
        sections.append([f"guideword {g.id} {_quote(g.interpretation)}" for g in item.guidewords])
    if item.scenarios:
        sections.append(
            [
                f"scenario {s.id} {_quote(s.description)} exposure E{int(s.default_exposure)} "
                f"rationale {_quote(s.exposure_rationale)}"
                for s in item.scenarios
            ]
        )
    if item.params:
        sections.append([f"param {p.name} {p.value} {_quote(p.unit)}" for p in item.params])
    return "\n\n".join("\n".join(lines) for lines in sections) + "\n"


def _entry_block(entry: HazardEntry) -> list[str]:
    return [
        f"entry {entry.id}",
        f"  mode {entry.mode_id}",
        f"  function {entry.malfunction.function_id}",
        f"  guideword {entry.malfunction.guideword_id}",
        f"  malfunction {_quote(entry.malfunction.description)}",
        f"  scenario {entry.scenario_id}",
        f"  consequence {_quote(entry.consequence)}",
        f"  S{int(entry.severity.level)} {_quote(entry.severity.rationale)}",
        f"  E{int(entry.exposure.level)} {_quote(entry.exposure.rationale)}",
        f"  C{int(entry.controllability.level)} {_quote(entry.controllability.rationale)}",
        f"  asil {entry.asil.name}",
        f"  goal {entry.goal_id}",
    ]


def serialize_document(doc: HaraDocument) -> str:
    header = f"hara {_quote(doc.title)} revision {doc.revision} kind {doc.kind.value}"
    if doc.based_on is not None:
        header += f" based-on {doc.based_on}"
    sections: list[list[str]] = [[header]]
    if doc.goals:
        lines = []
        for g in doc.goals:
            line = f"goal {g.id} {_quote(g.text)} modes {_mode_list(g.modes)}"
            if g.asil is not None:
                line += f" asil {g.asil.name}"
            lines.append(line)
        sections.append(lines)
    for entry in doc.entries:
        sections.append(_entry_block(entry))
    if doc.waivers:
        sections.append(
            [
                f"waive function {w.function_id} guideword {w.guideword_id} mode {w.mode_id} "
                f"rationale {_quote(w.rationale)}"
                for w in doc.waivers
            ]
        )
    return "\n\n".join("\n".join(lines) for lines in sections) + "\n"


def serialize(value: Union[ItemDefinition, HaraDocument]) -> str:
    """Canonical text form; ``parse(serialize(x))`` reproduces ``x``."""
    if isinstance(value, ItemDefinition):
        return serialize_item(value)
    if isinstance(value, HaraDocument):
        return serialize_document(value)
    raise TypeError(f"cannot serialize {type(value).__name__}")

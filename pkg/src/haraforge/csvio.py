"""Semicolon-separated table format mirroring the hazard analysis worksheet.

The table carries the entries only: 13 columns, one header row, one row per
entry. Safety-goal texts, waivers, and revision metadata are not
representable here and are supplied from a sidecar document (typically a
goals-only document or the revision being re-imported).
"""

from __future__ import annotations

import csv
import io

from .dsl import ParseDiagnostic, ParseError, SourceLocation
from .model import (
    AsilLevel,
    ControllabilityClass,
    ExposureClass,
    HaraDocument,
    HazardEntry,
    ItemDefinition,
    Malfunction,
    ModelError,
    Rating,
    SeverityClass,
    parse_entry_id,
)

CSV_HEADER = [
    "ID",
    "Operating Mode",
    "Function",
    "Malfunction",
    "Hazardous Scenario and Consequence",
    "S",
    "Rationale",
    "E",
    "Rationale",
    "C",
    "Rationale",
    "A",
    "SG",
]

_CLASS_PARSERS = {
    "S": (SeverityClass, 3),
    "E": (ExposureClass, 4),
    "C": (ControllabilityClass, 3),
}


def _writer_dialect():
    return dict(delimiter=";", quotechar='"', quoting=csv.QUOTE_MINIMAL, lineterminator="\n")


def write_csv(doc: HaraDocument) -> str:
    """Render the document's entries as canonical CSV (header + LF endings)."""
    functions = doc.item.function_map()
    modes = doc.item.mode_map()
    buffer = io.StringIO()
    writer = csv.writer(buffer, **_writer_dialect())
    writer.writerow(CSV_HEADER)
    for entry in doc.entries:
        malfunction = entry.malfunction.guideword_id.upper()
        if entry.malfunction.description:
            malfunction += f": {entry.malfunction.description}"
        writer.writerow(
            [
                str(entry.id),
                modes[entry.mode_id].name,
                functions[entry.malfunction.function_id].description,
                malfunction,
                f"{entry.scenario_id}: {entry.consequence}",
                f"S{int(entry.severity.level)}",
                entry.severity.rationale,
                f"E{int(entry.exposure.level)}",
                entry.exposure.rationale,
                f"C{int(entry.controllability.level)}",
                entry.controllability.rationale,
                entry.asil.name,
                entry.goal_id,
            ]
        )
    return buffer.getvalue()


def _class_cell(cell: str, letter: str, loc: SourceLocation, diagnostics: list[ParseDiagnostic]):
    cls, maximum = _CLASS_PARSERS[letter]
    if len(cell) >= 2 and cell[0] == letter and cell[1:].isdigit():
        value = int(cell[1:])
        if value <= maximum:
            return cls(value)
        diagnostics.append(
            ParseDiagnostic(loc, f"rating class {cell} out of range ({letter}0..{letter}{maximum})")
        )
        return None
    diagnostics.append(ParseDiagnostic(loc, f"malformed {letter}-class cell {cell!r}"))
    return None


def parse_csv(
    text: str,
    item: ItemDefinition,
    *,
    sidecar: HaraDocument,
    filename: str = "<csv>",
) -> HaraDocument:
    """Parse a CSV table into a document.

    ``sidecar`` supplies everything the table cannot carry: title, revision
    metadata, safety-goal texts, and waivers. Raises :class:`ParseError`
    with located diagnostics on any problem.
    """
    diagnostics: list[ParseDiagnostic] = []

    def loc(line: int) -> SourceLocation:
        return SourceLocation(filename, line, 1)

    mode_by_name = {m.name: m.id for m in item.modes}
    function_by_description: dict[str, str] = {}
    ambiguous_descriptions = set()
    for fn in item.functions:
        if fn.description in function_by_description:
            ambiguous_descriptions.add(fn.description)
        function_by_description[fn.description] = fn.id
    guideword_by_fold = {g.id.lower(): g.id for g in item.guidewords}
    scenario_ids = set(item.scenario_map())
    goal_ids = {g.id for g in sidecar.goals}

    rows: list[tuple[int, list[str]]] = []
    reader = csv.reader(io.StringIO(text), delimiter=";", quotechar='"')
    previous_line = 0
    try:
        for row in reader:
            rows.append((previous_line + 1, row))
            previous_line = reader.line_num
    except (csv.Error, ValueError) as exc:
        diagnostics.append(ParseDiagnostic(loc(previous_line + 1), f"malformed CSV: {exc}"))
        raise ParseError(diagnostics)

    if not rows:
        diagnostics.append(ParseDiagnostic(loc(1), "missing header row"))
        raise ParseError(diagnostics)
    header_line, header = rows[0]
    if header != CSV_HEADER:
        diagnostics.append(
            ParseDiagnostic(loc(header_line), f"malformed header: expected {';'.join(CSV_HEADER)!r}")
        )
        raise ParseError(diagnostics)

    entries: list[HazardEntry] = []
    seen_ids: set[str] = set()
    for line, row in rows[1:]:
        if len(row) != 13:
            diagnostics.append(ParseDiagnostic(loc(line), f"expected 13 columns, got {len(row)}"))
            continue
        (id_cell, mode_cell, function_cell, malfunction_cell, scenario_cell,
         s_cell, s_rationale, e_cell, e_rationale, c_cell, c_rationale,
         asil_cell, goal_cell) = row

        ok = True
        try:
            entry_id = parse_entry_id(id_cell)
        except ModelError as exc:
            diagnostics.append(ParseDiagnostic(loc(line), str(exc)))
            continue
        if id_cell in seen_ids:
            diagnostics.append(ParseDiagnostic(loc(line), f"duplicate entry id {id_cell!r}"))
            continue
        seen_ids.add(id_cell)

        mode_id = mode_by_name.get(mode_cell)
        if mode_id is None:
            diagnostics.append(ParseDiagnostic(loc(line), f"unknown operating mode text {mode_cell!r}"))
            ok = False

        if function_cell in ambiguous_descriptions:
            diagnostics.append(ParseDiagnostic(loc(line), f"ambiguous function text {function_cell!r}"))
            ok = False
        function_id = function_by_description.get(function_cell)
        if function_id is None:
            diagnostics.append(ParseDiagnostic(loc(line), f"unknown function text {function_cell!r}"))
            ok = False

        if ": " in malfunction_cell:
            guideword_text, malfunction_description = malfunction_cell.split(": ", 1)
        else:
            guideword_text, malfunction_description = malfunction_cell, ""
        guideword_id = guideword_by_fold.get(guideword_text.lower())
        if guideword_id is None:
            diagnostics.append(ParseDiagnostic(loc(line), f"unknown guide word text {guideword_text!r}"))
            ok = False

        if ": " in scenario_cell:
            scenario_id, consequence = scenario_cell.split(": ", 1)
        else:
            scenario_id, consequence = scenario_cell, ""
        if scenario_id not in scenario_ids:
            diagnostics.append(
                ParseDiagnostic(loc(line), f"scenario cell must start with a known scenario id, got {scenario_id!r}")
            )
            ok = False

        severity = _class_cell(s_cell, "S", loc(line), diagnostics)
        exposure = _class_cell(e_cell, "E", loc(line), diagnostics)
        controllability = _class_cell(c_cell, "C", loc(line), diagnostics)
        if None in (severity, exposure, controllability):
            ok = False

        if asil_cell not in AsilLevel.__members__:
            diagnostics.append(ParseDiagnostic(loc(line), f"malformed ASIL cell {asil_cell!r}"))
            ok = False
        if goal_cell not in goal_ids:
            diagnostics.append(ParseDiagnostic(loc(line), f"unknown safety goal {goal_cell!r}"))
            ok = False
        if not ok:
            continue

        try:
            entries.append(
                HazardEntry(
                    id=entry_id,
                    mode_id=mode_id,
                    malfunction=Malfunction(function_id, guideword_id, malfunction_description),
                    scenario_id=scenario_id,
                    consequence=consequence,
                    severity=Rating(severity, s_rationale),
                    exposure=Rating(exposure, e_rationale),
                    controllability=Rating(controllability, c_rationale),
                    asil=AsilLevel[asil_cell],
                    goal_id=goal_cell,
                )
            )
        except ModelError as exc:
            diagnostics.append(ParseDiagnostic(loc(line), str(exc)))

    if diagnostics:
        raise ParseError(diagnostics)

    try:
        return HaraDocument(
            title=sidecar.title,
            revision=sidecar.revision,
            kind=sidecar.kind,
            based_on=sidecar.based_on,
            item=item,
            entries=tuple(entries),
            waivers=sidecar.waivers,
            goals=sidecar.goals,
        )
    except ModelError as exc:
        diagnostics.append(ParseDiagnostic(loc(1), str(exc)))
        raise ParseError(diagnostics) from exc

"""Command-line entry point: validate, generate, asil, diff, report, demo.

Exit codes are a stable contract: 0 on success, 1 when findings of error
severity exist (or any finding under ``--strict``), 2 on usage, IO, or
parse failures. All output is plain deterministic text.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path
from typing import Optional, Sequence

from .asil import determine_asil
from .corpus import load_corpus
from .csvio import write_csv
from .diffing import classify_refinement, diff
from .dsl import ParseError, parse_hara, parse_item, serialize_document, serialize_item
from .generator import GenerationError, coverage_report, enumerate_candidates
from .model import (
    ControllabilityClass,
    ExposureClass,
    HaraDocument,
    ItemDefinition,
    ModelError,
    RevisionHistory,
    SeverityClass,
)
from .report import asil_histogram, render_histogram, render_markdown, safety_goal_table
from .validator import Finding, validate

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_FAILURE = 2


class _InputError(Exception):
    """IO or parse failure; rendered on stderr with exit code 2."""


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _InputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except UnicodeDecodeError as exc:
        raise _InputError(f"cannot read {path}: not valid UTF-8 ({exc})") from exc


def _load_item(path: str) -> ItemDefinition:
    try:
        return parse_item(_read(path), filename=path)
    except ParseError as exc:
        raise _InputError("\n".join(str(d) for d in exc.diagnostics)) from exc


def _load_hara(path: str, item: ItemDefinition) -> HaraDocument:
    try:
        return parse_hara(_read(path), item, filename=path)
    except ParseError as exc:
        raise _InputError("\n".join(str(d) for d in exc.diagnostics)) from exc


def _load_history(directory: str, default_item: ItemDefinition) -> RevisionHistory:
    base = Path(directory)
    if not base.is_dir():
        raise _InputError(f"history directory {directory} does not exist")
    docs = []
    for hara_path in sorted(base.glob("*.hara")):
        item_path = hara_path.with_suffix(".item")
        item = _load_item(str(item_path)) if item_path.exists() else default_item
        docs.append(_load_hara(str(hara_path), item))
    if not docs:
        raise _InputError(f"history directory {directory} contains no .hara files")
    docs.sort(key=lambda d: d.revision)
    try:
        return RevisionHistory(tuple(docs))
    except ModelError as exc:
        raise _InputError(f"invalid revision history in {directory}: {exc}") from exc


def _print_findings(findings: Sequence[Finding], machine: bool) -> None:
    for finding in findings:
        if machine:
            record = {
                "rule": finding.rule,
                "location": finding.location,
                "severity": finding.severity,
                "message": finding.message,
            }
            print(json.dumps(record))
        else:
            print(f"{finding.rule}\t{finding.location}\t{finding.message}")


def _cmd_validate(args: argparse.Namespace) -> int:
    item = _load_item(args.item)
    doc = _load_hara(args.hara, item)
    history = _load_history(args.history, item) if args.history else None
    try:
        findings = validate(doc, history)
    except ModelError as exc:
        raise _InputError(str(exc)) from exc
    _print_findings(findings, args.machine)
    if any(f.severity == "error" for f in findings):
        return EXIT_FINDINGS
    if args.strict and findings:
        return EXIT_FINDINGS
    return EXIT_OK


def _cmd_generate(args: argparse.Namespace) -> int:
    item = _load_item(args.item)
    try:
        if args.uncovered:
            doc = _load_hara(args.uncovered, item)
            triples = [gap.triple for gap in coverage_report(doc)]
        else:
            triples = enumerate_candidates(item)
    except GenerationError as exc:
        raise _InputError(str(exc)) from exc
    for triple in triples:
        print(f"{triple.function_id}\t{triple.guideword_id}\t{triple.mode_id}")
    return EXIT_OK


_CLASS_ARG = {
    "S": (SeverityClass, re.compile(r"S([0-3])\Z")),
    "E": (ExposureClass, re.compile(r"E([0-4])\Z")),
    "C": (ControllabilityClass, re.compile(r"C([0-3])\Z")),
}


def _cmd_asil(args: argparse.Namespace) -> int:
    values = {}
    for letter, text in (("S", args.severity), ("E", args.exposure), ("C", args.controllability)):
        cls, pattern = _CLASS_ARG[letter]
        match = pattern.match(text)
        if not match:
            raise _InputError(f"expected {letter}0..{letter}{max(cls)}, got {text!r}")
        values[letter] = cls(int(match.group(1)))
    print(determine_asil(values["S"], values["E"], values["C"]).label)
    return EXIT_OK


def _cmd_diff(args: argparse.Namespace) -> int:
    item = _load_item(args.item)
    base = _load_hara(args.base, item)
    next_doc = _load_hara(args.next, item)
    report = diff(base, next_doc)
    sys.stdout.write(render_markdown(report))
    return EXIT_OK


def _cmd_report(args: argparse.Namespace) -> int:
    item = _load_item(args.item)
    doc = _load_hara(args.hara, item)
    if args.format == "csv":
        sys.stdout.write(write_csv(doc))
    else:
        sys.stdout.write(render_markdown(safety_goal_table(doc)))
        sys.stdout.write("\n## ASIL distribution\n\n")
        sys.stdout.write(render_histogram(asil_histogram(doc)))
    return EXIT_OK


def _cmd_demo(args: argparse.Namespace) -> int:
    out = Path(args.outdir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise _InputError(f"cannot create {args.outdir}: {exc.strerror or exc}") from exc
    item, history = load_corpus()
    files = [("afa_logic.item", serialize_item(item))]
    for revision in history.revisions:
        files.append((f"hara_rev{revision.revision}.hara", serialize_document(revision)))
    for name, text in files:
        path = out / name
        try:
            path.write_text(text, encoding="utf-8")
        except OSError as exc:
            raise _InputError(f"cannot write {path}: {exc.strerror or exc}") from exc
        print(f"wrote {path}")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="haraforge",
        description="Workbench for hazard analysis and risk assessment documents.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="run the rule engine over a document")
    p_validate.add_argument("item", help="path to the .item file")
    p_validate.add_argument("hara", help="path to the .hara file")
    p_validate.add_argument("--history", help="directory of .hara revisions (sibling .item files are honored)")
    p_validate.add_argument("--strict", action="store_true", help="treat warnings as failures")
    p_validate.add_argument("--machine", action="store_true", help="one JSON record per finding")
    p_validate.set_defaults(func=_cmd_validate)

    p_generate = sub.add_parser("generate", help="enumerate candidate hazardous-scenario triples")
    p_generate.add_argument("item", help="path to the .item file")
    p_generate.add_argument("--uncovered", metavar="HARA", help="restrict to triples a document leaves uncovered")
    p_generate.set_defaults(func=_cmd_generate)

    p_asil = sub.add_parser("asil", help="derive the ASIL for an S/E/C combination")
    p_asil.add_argument("severity", metavar="S", help="severity class, S0..S3")
    p_asil.add_argument("exposure", metavar="E", help="exposure class, E0..E4")
    p_asil.add_argument("controllability", metavar="C", help="controllability class, C0..C3")
    p_asil.set_defaults(func=_cmd_asil)

    p_diff = sub.add_parser("diff", help="semantic diff between two revisions")
    p_diff.add_argument("base", help="path to the base .hara file")
    p_diff.add_argument("next", help="path to the next .hara file")
    p_diff.add_argument("item", help="path to the .item file both revisions bind to")
    p_diff.set_defaults(func=_cmd_diff)

    p_report = sub.add_parser("report", help="render the safety-goal table or the CSV export")
    p_report.add_argument("item", help="path to the .item file")
    p_report.add_argument("hara", help="path to the .hara file")
    p_report.add_argument("--format", choices=("md", "csv"), default="md")
    p_report.set_defaults(func=_cmd_report)

    p_demo = sub.add_parser("demo", help="write the bundled corpus files")
    p_demo.add_argument("outdir", help="target directory")
    p_demo.set_defaults(func=_cmd_demo)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _InputError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())

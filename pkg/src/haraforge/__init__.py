"""haraforge: a workbench for hazard analysis and risk assessment documents.

Library surface for authoring, generating, validating, versioning, and
reporting HARA documents; the ``haraforge`` command wraps the same
operations for files on disk.
"""

from .asil import (
    RISK_GRAPH,
    GoalAllocation,
    aggregate_goal_asil,
    check_entry_consistency,
    determine_asil,
    propagate_to_elements,
)
from .corpus import CorpusManifest, corpus_item, corpus_manifest, load_corpus
from .csvio import CSV_HEADER, parse_csv, write_csv
from .diffing import (
    DiffReport,
    EntryChange,
    FieldChange,
    GoalChange,
    RefinementClass,
    Split,
    check_id_stability,
    classify_refinement,
    diff,
)
from .dsl import (
    ParseDiagnostic,
    ParseError,
    SourceLocation,
    parse_hara,
    parse_item,
    serialize,
    serialize_document,
    serialize_item,
)
from .generator import (
    DEFAULT_GUIDE_WORDS,
    CandidateTriple,
    CoverageFinding,
    GenerationError,
    coverage_report,
    enumerate_candidates,
    enumerate_malfunctions,
)
from .model import (
    AsilLevel,
    ControllabilityClass,
    ElementNode,
    EntryId,
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
    RevisionHistory,
    RevisionKind,
    SafetyGoal,
    SeverityClass,
    Waiver,
    compare_asil,
    compare_entry_ids,
    evolve_unchecked,
    parse_entry_id,
    unchecked,
)
from .report import GoalGroup, GoalTable, asil_histogram, render_markdown, safety_goal_table
from .validator import Finding, explain_rule, validate

__version__ = "0.1.0"

__all__ = [
    "AsilLevel",
    "CandidateTriple",
    "ControllabilityClass",
    "CorpusManifest",
    "CoverageFinding",
    "CSV_HEADER",
    "DEFAULT_GUIDE_WORDS",
    "DiffReport",
    "ElementNode",
    "EntryChange",
    "EntryId",
    "ExposureClass",
    "FieldChange",
    "Finding",
    "FunctionDef",
    "GenerationError",
    "GoalAllocation",
    "GoalChange",
    "GoalGroup",
    "GoalTable",
    "GuideWord",
    "HaraDocument",
    "HazardEntry",
    "ItemDefinition",
    "Malfunction",
    "ModelError",
    "OperatingMode",
    "OperationalScenario",
    "Parameter",
    "ParseDiagnostic",
    "ParseError",
    "Rating",
    "RefinementClass",
    "RevisionHistory",
    "RevisionKind",
    "RISK_GRAPH",
    "SafetyGoal",
    "SeverityClass",
    "SourceLocation",
    "Split",
    "Waiver",
    "aggregate_goal_asil",
    "asil_histogram",
    "check_entry_consistency",
    "check_id_stability",
    "classify_refinement",
    "compare_asil",
    "compare_entry_ids",
    "corpus_item",
    "corpus_manifest",
    "coverage_report",
    "determine_asil",
    "diff",
    "enumerate_candidates",
    "enumerate_malfunctions",
    "evolve_unchecked",
    "explain_rule",
    "load_corpus",
    "parse_csv",
    "parse_entry_id",
    "parse_hara",
    "parse_item",
    "propagate_to_elements",
    "render_markdown",
    "safety_goal_table",
    "serialize",
    "serialize_document",
    "serialize_item",
    "unchecked",
    "validate",
    "write_csv",
]

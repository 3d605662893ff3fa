"""Bundled example corpus: an unmanned protective vehicle's hazard analysis.

The corpus ships an item definition and a two-revision history exhibiting a
safety refinement in which one highly rated steering scenario is split into
a within-specification and a beyond-specification case. Fixture values are
tagged by provenance in the manifest; risk-parameter ratings are synthetic
but chosen so the risk graph reproduces the stated ASILs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .generator import enumerate_candidates
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
    OperatingMode,
    OperationalScenario,
    Parameter,
    Rating,
    RevisionHistory,
    RevisionKind,
    SafetyGoal,
    SeverityClass,
    Waiver,
    parse_entry_id,
)

PAPER_VERBATIM = "paper-verbatim"
PAPER_DERIVED = "paper-derived"
SYNTHETIC_CONSISTENT = "synthetic-consistent"

_PROVENANCE_TAGS = (PAPER_VERBATIM, PAPER_DERIVED, SYNTHETIC_CONSISTENT)

CORPUS_TITLE = "AFA Logic HARA"

_ALL_MODES = ("manual", "safe_halt", "follow", "coupled")
_MANUAL_MODES = ("manual",)
_AUTOMATED_MODES = ("safe_halt", "follow", "coupled")


@dataclass(frozen=True)
class CorpusManifest:
    """Provenance tag per fixture value family."""

    tags: Mapping[str, str]

    def __post_init__(self) -> None:
        for key, tag in self.tags.items():
            if tag not in _PROVENANCE_TAGS:
                raise ValueError(f"fixture {key!r} carries unknown provenance tag {tag!r}")

    def tag(self, key: str) -> str:
        return self.tags[key]


def corpus_item() -> ItemDefinition:
    return ItemDefinition(
        name="AFA Logic",
        elements=(
            ElementNode("afa_logic", primary=True),
            ElementNode("drivetrain"),
            ElementNode("brakes"),
            ElementNode("steering"),
            ElementNode("environment_perception"),
        ),
        connections=(
            ("afa_logic", "drivetrain"),
            ("afa_logic", "brakes"),
            ("afa_logic", "steering"),
            ("afa_logic", "environment_perception"),
        ),
        modes=(
            OperatingMode("manual", "Manual Mode"),
            OperatingMode("safe_halt", "Safe Halt", automated=True),
            OperatingMode("follow", "Follow Mode", automated=True),
            OperatingMode("coupled", "Coupled Mode", automated=True),
        ),
        functions=(
            FunctionDef("mode_management", "Operating mode management", _ALL_MODES),
            FunctionDef("mode_display", "Mode display", _ALL_MODES),
            FunctionDef("steering_actuation", "Steering actuation", _ALL_MODES),
            FunctionDef("brake_actuation", "Brake actuation", _ALL_MODES),
            FunctionDef("speed_control", "Speed control", _ALL_MODES),
            FunctionDef("environment_monitoring", "Environment monitoring", _AUTOMATED_MODES),
        ),
        guidewords=(
            GuideWord("loss", "Function is not provided when demanded"),
            GuideWord("unintended", "Function acts without demand"),
            GuideWord("more", "Function output beyond the specified magnitude"),
            GuideWord("less", "Function output below the specified magnitude"),
        ),
        scenarios=(
            OperationalScenario(
                "passing_traffic",
                "Traffic passes the work zone on the adjacent motorway lane",
                ExposureClass.E4,
                "Flowing traffic on the adjacent lane is present during almost all of the operating time",
            ),
            OperationalScenario(
                "lane_following",
                "The vehicle follows the leading vehicle along the hard shoulder",
                ExposureClass.E4,
                "Following the leading vehicle fills most of the operating time",
            ),
            OperationalScenario(
                "worker_near_vehicle",
                "Road workers are on foot near the vehicle inside the coned-off work zone",
                ExposureClass.E2,
                "Workers approach the vehicle only for setup, checks, and fault handling",
            ),
            OperationalScenario(
                "mode_transition",
                "The operator commands an operating mode change from the leading vehicle",
                ExposureClass.E3,
                "Mode changes are commanded several times per shift",
            ),
            OperationalScenario(
                "manual_transfer",
                "A driver moves the vehicle manually between work sites on public roads",
                ExposureClass.E3,
                "Transfer drives on public roads happen on most working days",
            ),
            OperationalScenario(
                "ramp_passage",
                "The convoy passes an acceleration or deceleration lane in close coupling",
                ExposureClass.E2,
                "Ramps are passed a few times per shift",
            ),
            OperationalScenario(
                "stopped_vehicle_ahead",
                "A third-party vehicle stops on the hard shoulder ahead of the convoy",
                ExposureClass.E2,
                "Vehicles halting on the hard shoulder ahead are rare per operating hour",
            ),
            OperationalScenario(
                "driver_takeover",
                "A driver takes over the vehicle during or directly after automated operation",
                ExposureClass.E2,
                "Takeovers occur at the start and end of work segments",
            ),
        ),
        params=(
            Parameter("max_speed", 12, "km/h"),
            Parameter("follow_distance", 90, "m"),
            Parameter("coupled_distance", 10, "m"),
        ),
    )


_GOAL_TEXTS: dict[str, tuple[str, tuple[str, ...]]] = {
    "SG01": ("Unintended and not permitted operating mode change must be prevented.", _ALL_MODES),
    "SG02": ("Intended and permitted operating mode change must be ensured.", _ALL_MODES),
    "SG07": ("Display of actual operating mode in HMI must be ensured.", _ALL_MODES),
    "SG04": ("Unintended anti-lock brake actuation must be prevented.", _MANUAL_MODES),
    "SG05": ("Unintended acceleration must be prevented.", _MANUAL_MODES),
    "SG16": ("Anti-lock functionality must be ensured.", _MANUAL_MODES),
    "SG17": ("Unintended steering actuation must be prevented", _MANUAL_MODES),
    "SG03": ("Steering actuation beyond specification must be prevented.", _AUTOMATED_MODES),
    "SG06": ("Detection of driver intervention must be ensured.", _AUTOMATED_MODES),
    "SG08": ("Unintended slow acceleration must be prevented.", _AUTOMATED_MODES),
    "SG09": ("Deceleration to standstill must be ensured.", _AUTOMATED_MODES),
    "SG10": ("Leaving tolerance ranges must trigger operating mode change to Safe Halt.", _AUTOMATED_MODES),
    "SG11": ("Maximum velocity must not be exceeded.", _AUTOMATED_MODES),
    "SG12": ("Overrunning hard shoulder markings must be prevented.", _AUTOMATED_MODES),
    "SG13": (
        "Detection of and reaction to (deceleration to standstill) relevant obstacles "
        "(humans, vehicles, etc.) must be ensured.",
        _AUTOMATED_MODES,
    ),
    "SG14": ("Identification of leading vehicle must be ensured.", _AUTOMATED_MODES),
    "SG15": (
        "Detection of missing leading vehicle and operating mode change to safe halt must be ensured.",
        _AUTOMATED_MODES,
    ),
}


def _goals(stated: dict[str, AsilLevel], *, exclude: tuple[str, ...] = ()) -> tuple[SafetyGoal, ...]:
    return tuple(
        SafetyGoal(goal_id, text, modes, stated.get(goal_id))
        for goal_id, (text, modes) in _GOAL_TEXTS.items()
        if goal_id not in exclude
    )


def _entry(
    id_text: str,
    goal: str,
    mode: str,
    function: str,
    guideword: str,
    malfunction: str,
    scenario: str,
    consequence: str,
    s: int,
    s_why: str,
    e: int,
    e_why: str,
    c: int,
    c_why: str,
    level: str,
) -> HazardEntry:
    return HazardEntry(
        id=parse_entry_id(id_text),
        mode_id=mode,
        malfunction=Malfunction(function, guideword, malfunction),
        scenario_id=scenario,
        consequence=consequence,
        severity=Rating(SeverityClass(s), s_why),
        exposure=Rating(ExposureClass(e), e_why),
        controllability=Rating(ControllabilityClass(c), c_why),
        asil=AsilLevel[level],
        goal_id=goal,
    )


def _shared_entries() -> list[HazardEntry]:
    return [
        _entry(
            "3", "SG01", "follow", "mode_management", "unintended",
            "Unintended change from Follow Mode to Coupled Mode without a permitted command",
            "lane_following",
            "The vehicle closes up from the follow distance to the coupled distance while workers may walk between the vehicles.",
            2, "Workers can be caught between the closing vehicles",
            4, "Following the leading vehicle fills most of the operating time",
            2, "Workers between the vehicles can step aside while the gap closes slowly",
            "B",
        ),
        _entry(
            "5", "SG02", "follow", "mode_management", "loss",
            "Commanded operating mode change is not executed",
            "mode_transition",
            "A commanded change to Safe Halt is ignored and the vehicle keeps driving although the work convoy has stopped.",
            2, "A vehicle that keeps driving can touch the stopped work convoy",
            3, "Mode changes are commanded several times per shift",
            1, "The operator repeats the command or stops the convoy",
            "QM",
        ),
        _entry(
            "8", "SG06", "coupled", "mode_management", "loss",
            "Driver intervention is not detected",
            "driver_takeover",
            "The vehicle keeps actuating steering and brakes against the driver's inputs during a takeover.",
            2, "Actuation against the driver can push the vehicle off its path at low speed",
            2, "Takeovers occur at the start and end of work segments",
            2, "The driver can brake harder and switch off the automation",
            "QM",
        ),
        _entry(
            "9", "SG08", "safe_halt", "speed_control", "unintended",
            "Unintended creeping acceleration out of standstill",
            "worker_near_vehicle",
            "The vehicle creeps forward while workers stand directly in front of it.",
            2, "A creeping vehicle can press a worker against equipment",
            2, "Workers stand in front of the vehicle only during setup and checks",
            1, "Creeping speed leaves workers time to step aside",
            "QM",
        ),
        _entry(
            "12", "SG13", "follow", "environment_monitoring", "loss",
            "Obstacles ahead are not detected",
            "stopped_vehicle_ahead",
            "The vehicle approaches a stopped vehicle or person on the hard shoulder without decelerating.",
            2, "A collision at operating speed injures persons at walking pace at most moderately",
            2, "Vehicles halting on the hard shoulder ahead are rare per operating hour",
            1, "Persons ahead can move clear because the closing speed is very low",
            "QM",
        ),
        _entry(
            "13", "SG13", "follow", "environment_monitoring", "loss",
            "A detected obstacle does not trigger a reaction",
            "worker_near_vehicle",
            "A worker crossing in front of the moving vehicle is not reacted to and may be touched at walking pace.",
            2, "Touching a worker at walking pace causes at most moderate injuries",
            2, "Workers cross in front of the vehicle only inside the coned-off zone",
            1, "Workers see the slow vehicle approaching and step back",
            "QM",
        ),
        _entry(
            "14", "SG09", "follow", "brake_actuation", "loss",
            "Brake actuation unavailable on demand",
            "lane_following",
            "The vehicle cannot be brought to a standstill behind the leading vehicle and rolls into the coned-off working area.",
            1, "Rolling into the coned-off working area at low speed causes light injuries at most",
            4, "Following the leading vehicle fills most of the operating time",
            2, "The leading vehicle crew can warn workers and clear the area",
            "A",
        ),
        _entry(
            "17", "SG10", "follow", "mode_management", "less",
            "Reaction to a tolerance violation falls short of a full Safe Halt",
            "lane_following",
            "The vehicle keeps operating outside its functional boundaries instead of halting.",
            2, "Operation outside the functional boundaries can put the vehicle into the path of workers",
            4, "Tolerance checks run continuously during following operation",
            2, "The operator can command Safe Halt from the leading vehicle",
            "B",
        ),
        _entry(
            "21", "SG11", "follow", "speed_control", "more",
            "Speed above the configured maximum",
            "passing_traffic",
            "The vehicle exceeds the configured maximum speed and closes up on the working area faster than workers expect.",
            2, "A faster vehicle shortens the safety gap to the working area",
            4, "Flowing traffic passes the work zone during almost all of the operating time",
            2, "Workers and the operator notice the closing vehicle and react",
            "B",
        ),
        _entry(
            "22", "SG14", "follow", "environment_monitoring", "unintended",
            "A third-party vehicle is identified as leading vehicle",
            "stopped_vehicle_ahead",
            "The vehicle follows a third-party vehicle that leaves the hard shoulder into flowing traffic.",
            3, "Following a vehicle into flowing traffic exposes high-speed collisions",
            2, "Third-party vehicles stop on the hard shoulder only rarely",
            2, "The operator can see the wrong target and command Safe Halt",
            "A",
        ),
        _entry(
            "25", "SG15", "coupled", "environment_monitoring", "loss",
            "Loss of the leading vehicle is not detected",
            "ramp_passage",
            "The convoy separates on a ramp and the vehicle continues uncoupled without switching to Safe Halt.",
            2, "An uncoupled vehicle on a ramp obstructs merging traffic at low speed",
            2, "Ramps are passed a few times per shift",
            2, "Merging drivers see the slow vehicle early on the ramp",
            "QM",
        ),
        _entry(
            "28", "SG04", "manual", "brake_actuation", "unintended",
            "Unintended anti-lock modulation during manual braking",
            "manual_transfer",
            "Brake pressure is released without demand during a manual stop and the stopping distance grows into a junction.",
            3, "An extended stopping distance can reach into crossing traffic",
            3, "Transfer drives on public roads happen on most working days",
            2, "The driver can pump the brake and steer around the obstacle",
            "B",
        ),
        _entry(
            "31", "SG05", "manual", "speed_control", "unintended",
            "Unintended acceleration while driving manually",
            "manual_transfer",
            "The vehicle accelerates without pedal demand in urban transfer traffic.",
            2, "Unintended acceleration in transfer traffic can cause rear-end collisions",
            3, "Transfer drives on public roads happen on most working days",
            2, "The driver can brake and disengage the drivetrain",
            "A",
        ),
        _entry(
            "33", "SG16", "manual", "brake_actuation", "less",
            "Anti-lock support below demand during full braking",
            "manual_transfer",
            "Wheels lock during an emergency stop on a wet road and the vehicle becomes unsteerable.",
            3, "A vehicle with locked wheels becomes unsteerable at road speed",
            3, "Transfer drives on public roads happen on most working days",
            2, "The driver can release and modulate the brake",
            "B",
        ),
        _entry(
            "36", "SG17", "manual", "steering_actuation", "unintended",
            "Unintended steering actuation while driving manually",
            "manual_transfer",
            "A steering torque is superimposed in oncoming traffic and the driver must counter-steer.",
            3, "A superimposed steering torque can push the vehicle into oncoming traffic",
            3, "Transfer drives on public roads happen on most working days",
            2, "The driver feels the torque and counter-steers",
            "B",
        ),
        _entry(
            "41", "SG07", "safe_halt", "mode_display", "unintended",
            "A not active operating mode is displayed",
            "mode_transition",
            "The operator believes the vehicle is in Safe Halt while Follow Mode is active, leaves it unattended, and the vehicle can move off into the adjacent lane.",
            3, "A vehicle moving off unsupervised can intrude into the adjacent lane",
            3, "Mode changes are commanded several times per shift",
            1, "The operator can verify standstill in the HMI before leaving the vehicle",
            "A",
        ),
    ]


def _entry_37_presplit() -> HazardEntry:
    return _entry(
        "37", "SG12", "follow", "steering_actuation", "unintended",
        "Unintended steering actuation, up to full lock",
        "passing_traffic",
        "The vehicle departs the hard shoulder into the adjacent lane and high-speed traffic cannot evade.",
        3, "Intruding into the adjacent lane exposes high-speed rear and side collisions",
        4, "Flowing traffic passes the work zone during almost all of the operating time",
        3, "Full steering actuation moves the vehicle into the lane faster than approaching drivers can react",
        "D",
    )


def _entry_37_postsplit() -> HazardEntry:
    return _entry(
        "37", "SG12", "follow", "steering_actuation", "unintended",
        "Unintended steering actuation within the specified angle range",
        "passing_traffic",
        "The vehicle drifts over the hard shoulder marking into the adjacent lane with low lateral velocity.",
        3, "Intruding into the adjacent lane exposes high-speed rear and side collisions",
        4, "Flowing traffic passes the work zone during almost all of the operating time",
        1, "The limited steering angle keeps the lateral velocity low, so approaching drivers have time to evade",
        "B",
    )


def _entry_37a() -> HazardEntry:
    return _entry(
        "37a", "SG03", "follow", "steering_actuation", "more",
        "Steering actuation beyond the specified angle range, up to full lock",
        "passing_traffic",
        "The vehicle swerves abruptly into the adjacent lane and high-speed traffic cannot evade.",
        3, "Intruding into the adjacent lane exposes high-speed rear and side collisions",
        4, "Flowing traffic passes the work zone during almost all of the operating time",
        3, "An abrupt swerve into the lane leaves approaching drivers no time to evade",
        "D",
    )


def _entry_29_presplit() -> HazardEntry:
    return _entry(
        "29", "SG13", "follow", "environment_monitoring", "less",
        "Deceleration for a detected obstacle falls short of the demand",
        "stopped_vehicle_ahead",
        "The vehicle decelerates too weakly for a stopped vehicle ahead and touches it at low residual speed.",
        2, "A touch at low residual speed causes at most moderate damage",
        2, "Vehicles halting on the hard shoulder ahead are rare per operating hour",
        1, "Persons ahead can move clear because the closing speed is very low",
        "QM",
    )


def _waiver_complement(
    item: ItemDefinition,
    entries: list[HazardEntry],
    specials: dict[tuple[str, str, str], str],
) -> tuple[Waiver, ...]:
    functions = item.function_map()
    guidewords = item.guideword_map()
    modes = item.mode_map()
    covered = {e.triple for e in entries}
    waivers = []
    for triple in enumerate_candidates(item):
        if triple.key() in covered:
            continue
        rationale = specials.get(triple.key())
        if rationale is None:
            gw = guidewords[triple.guideword_id]
            fn = functions[triple.function_id]
            mode = modes[triple.mode_id]
            rationale = (
                f"Review outcome: '{gw.interpretation.lower()}' adds no vehicle-level hazard for "
                f"{fn.description.lower()} in {mode.name} beyond the recorded entries."
            )
        waivers.append(Waiver(triple.function_id, triple.guideword_id, triple.mode_id, rationale))
    return tuple(waivers)


def load_corpus() -> tuple[ItemDefinition, RevisionHistory]:
    """The bundled item plus its pre-split and post-split revisions."""
    item = corpus_item()

    presplit_entries = _shared_entries() + [_entry_37_presplit(), _entry_29_presplit()]
    presplit = HaraDocument(
        title=CORPUS_TITLE,
        revision=1,
        kind=RevisionKind.INITIAL,
        based_on=None,
        item=item,
        entries=tuple(presplit_entries),
        waivers=_waiver_complement(
            item,
            presplit_entries,
            {
                ("steering_actuation", "more", "follow"):
                    "Actuation beyond the specification is assessed together with unintended actuation in entry 37.",
            },
        ),
        goals=_goals({
            "SG07": AsilLevel.A,
            "SG12": AsilLevel.D,
            "SG13": AsilLevel.QM,
        }, exclude=("SG03",)),
    )

    postsplit_entries = _shared_entries() + [_entry_37_postsplit(), _entry_37a()]
    postsplit = HaraDocument(
        title=CORPUS_TITLE,
        revision=2,
        kind=RevisionKind.SAFETY_REFINEMENT,
        based_on=1,
        item=item,
        entries=tuple(postsplit_entries),
        waivers=_waiver_complement(
            item,
            postsplit_entries,
            {
                ("environment_monitoring", "less", "follow"):
                    "Partial loss of the obstacle reaction was merged into the assessment of entry 12.",
            },
        ),
        goals=_goals({
            "SG03": AsilLevel.D,
            "SG07": AsilLevel.A,
            "SG12": AsilLevel.B,
            "SG13": AsilLevel.QM,
        }),
    )
    return item, RevisionHistory((presplit, postsplit))


def corpus_manifest() -> CorpusManifest:
    """Provenance tags for every fixture value family in the corpus."""
    item, history = load_corpus()
    tags: dict[str, str] = {
        "title": SYNTHETIC_CONSISTENT,
        "item:name": PAPER_VERBATIM,
        "item:elements": PAPER_VERBATIM,
        "item:connections": PAPER_VERBATIM,
        "item:modes": PAPER_VERBATIM,
        "item:functions": PAPER_DERIVED,
        "item:guidewords": SYNTHETIC_CONSISTENT,
        "item:scenarios": SYNTHETIC_CONSISTENT,
        "history:structure": PAPER_DERIVED,
        "waivers": SYNTHETIC_CONSISTENT,
    }
    for param in item.params:
        tags[f"param:{param.name}"] = PAPER_VERBATIM
    for goal in history.latest.goals:
        tags[f"goal:{goal.id}:text"] = PAPER_VERBATIM
        tags[f"goal:{goal.id}:modes"] = PAPER_VERBATIM
        if goal.asil is not None:
            tags[f"goal:{goal.id}:asil"] = PAPER_VERBATIM

    derived_asil_ids = {"37", "37a", "41", "12", "13", "29"}
    narrative_ids = {"37", "37a", "41"}
    seen: set[str] = set()
    for revision in history.revisions:
        for entry in revision.entries:
            key = str(entry.id)
            if key in seen:
                continue
            seen.add(key)
            tags[f"entry:{key}:id"] = PAPER_VERBATIM if key in ("37", "37a") else SYNTHETIC_CONSISTENT
            tags[f"entry:{key}:scenario"] = PAPER_DERIVED if key in narrative_ids else SYNTHETIC_CONSISTENT
            tags[f"entry:{key}:ratings"] = SYNTHETIC_CONSISTENT
            tags[f"entry:{key}:asil"] = PAPER_DERIVED if key in derived_asil_ids else SYNTHETIC_CONSISTENT
    return CorpusManifest(tags)

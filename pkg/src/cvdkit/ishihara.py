"""Weighted plate-test engine.

Plates live in a JSON document; every answer option carries a credit
toward the normal, protan and deuteran interpretations, and every plate
carries an importance weight. A completed session is scored by summing
weight x credit per interpretation, and the score ratios fuzzify into
the four membership degrees of a FuzzyProfile (beta = 1 - alpha_n).

Plate order is fixed as declared in the file; there is no adaptive
sequencing.
"""

from __future__ import annotations

import json
import uuid
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .correct import FuzzyProfile

PLATE_KINDS = ("demonstration", "diagnosis", "hidden", "masked")


class PlateParseError(ValueError):
    """The plate file could not be parsed at all."""


class PlateValidationError(ValueError):
    """The plate file parsed but violates structural invariants."""

    def __init__(self, problems: list[str]):
        super().__init__("invalid plate set:\n  " + "\n  ".join(problems))
        self.problems = problems


class SessionStateError(RuntimeError):
    """A session operation was attempted in the wrong state."""


@dataclass(frozen=True)
class AnswerOption:
    label: str
    w_normal: float = 0.0
    w_protan: float = 0.0
    w_deuteran: float = 0.0
    canonical: bool = False


@dataclass(frozen=True)
class PlateDefinition:
    id: str
    image_ref: str
    kind: str
    weight: float
    options: tuple[AnswerOption, ...]


@dataclass(frozen=True)
class PlateSet:
    plates: tuple[PlateDefinition, ...]
    source_dir: Path | None = None

    def __post_init__(self):
        object.__setattr__(
            self, "_by_id", {p.id: p for p in self.plates}
        )

    def __len__(self) -> int:
        return len(self.plates)

    def __iter__(self):
        return iter(self.plates)

    def get(self, plate_id: str) -> PlateDefinition | None:
        return self._by_id.get(plate_id)

    def image_path(self, plate: PlateDefinition) -> Path | None:
        """Plate raster location, resolved against the plate file's directory."""
        if self.source_dir is None:
            return None
        return self.source_dir / plate.image_ref


@dataclass
class TestSession:
    """One user's walk through a plate set. Mutable; one writer at a time."""

    session_id: str
    plate_order: tuple[str, ...]
    responses: dict[str, int] = field(default_factory=dict)

    @property
    def completed(self) -> bool:
        return len(self.responses) == len(self.plate_order)


@dataclass(frozen=True)
class RawScores:
    s_normal: float
    s_protan: float
    s_deuteran: float
    max_normal: float
    max_protan: float
    max_deuteran: float


def _parse_option(raw: dict, where: str, problems: list[str]) -> AnswerOption:
    label = raw.get("label")
    if not isinstance(label, str) or not label:
        problems.append(f"{where}: option label must be a non-empty string")
        label = str(label)
    credits = {}
    for key in ("normal", "protan", "deuteran"):
        v = raw.get(key, 0.0)
        if not isinstance(v, (int, float)) or v < 0:
            problems.append(f"{where}: credit {key!r} must be a non-negative number")
            v = 0.0
        credits[key] = float(v)
    return AnswerOption(
        label=label,
        w_normal=credits["normal"],
        w_protan=credits["protan"],
        w_deuteran=credits["deuteran"],
        canonical=bool(raw.get("canonical", False)),
    )


def parse_plates(doc: dict, source_dir: Path | None = None) -> PlateSet:
    """Validate a parsed plate document; collects every violation."""
    problems: list[str] = []
    raw_plates = doc.get("plates")
    if not isinstance(raw_plates, list) or not raw_plates:
        raise PlateValidationError(["document must contain a non-empty 'plates' list"])

    plates: list[PlateDefinition] = []
    seen_ids: set[str] = set()
    for i, raw in enumerate(raw_plates):
        where = f"plates[{i}]"
        pid = raw.get("id")
        if not isinstance(pid, str) or not pid:
            problems.append(f"{where}: missing or empty id")
            pid = f"<missing-{i}>"
        if pid in seen_ids:
            problems.append(f"{where}: duplicate plate id {pid!r}")
        seen_ids.add(pid)

        image_ref = raw.get("image")
        if not isinstance(image_ref, str) or not image_ref:
            problems.append(f"{where} ({pid}): missing image reference")
            image_ref = ""

        kind = raw.get("kind")
        if kind not in PLATE_KINDS:
            problems.append(
                f"{where} ({pid}): kind must be one of {PLATE_KINDS}, got {kind!r}"
            )
            kind = "diagnosis"

        weight = raw.get("weight", 1.0)
        if not isinstance(weight, (int, float)) or weight <= 0:
            problems.append(f"{where} ({pid}): weight must be > 0, got {weight!r}")
            weight = 1.0

        raw_options = raw.get("options")
        options: list[AnswerOption] = []
        if not isinstance(raw_options, list) or len(raw_options) < 2:
            problems.append(f"{where} ({pid}): a plate needs at least 2 answer options")
        else:
            for j, raw_opt in enumerate(raw_options):
                options.append(_parse_option(raw_opt, f"{where}.options[{j}] ({pid})", problems))
            n_canonical = sum(1 for o in options if o.canonical)
            if n_canonical != 1:
                problems.append(
                    f"{where} ({pid}): exactly one option must be canonical, found {n_canonical}"
                )

        plates.append(
            PlateDefinition(
                id=pid,
                image_ref=image_ref,
                kind=kind,
                weight=float(weight),
                options=tuple(options),
            )
        )

    if problems:
        raise PlateValidationError(problems)
    return PlateSet(plates=tuple(plates), source_dir=source_dir)


def load_plates(path: str | Path) -> PlateSet:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise PlateParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise PlateParseError(f"{path}: top level must be an object")
    return parse_plates(doc, source_dir=path.parent)


def default_plates() -> PlateSet:
    """The bundled 24-plate reading-table set."""
    data_dir = resources.files("cvdkit").joinpath("data")
    with resources.as_file(data_dir) as p:
        return load_plates(Path(p) / "plates.json")


def new_session(plates: PlateSet, session_id: str | None = None) -> TestSession:
    return TestSession(
        session_id=session_id or uuid.uuid4().hex,
        plate_order=tuple(p.id for p in plates),
    )


def record_answer(session: TestSession, plates: PlateSet, plate_id: str, option_index: int) -> None:
    plate = plates.get(plate_id)
    if plate is None or plate_id not in session.plate_order:
        raise KeyError(f"unknown plate id {plate_id!r}")
    if not 0 <= option_index < len(plate.options):
        raise IndexError(
            f"option index {option_index} out of range for plate {plate_id!r} "
            f"({len(plate.options)} options)"
        )
    session.responses[plate_id] = option_index


def next_plate(session: TestSession, plates: PlateSet) -> PlateDefinition | None:
    """First unanswered plate in declared order; None when the test is done."""
    for pid in session.plate_order:
        if pid not in session.responses:
            plate = plates.get(pid)
            if plate is None:
                raise KeyError(f"session references unknown plate {pid!r}")
            return plate
    return None


def score_session(session: TestSession, plates: PlateSet) -> RawScores:
    if not session.completed:
        missing = [pid for pid in session.plate_order if pid not in session.responses]
        raise SessionStateError(
            f"session {session.session_id} is incomplete ({len(missing)} unanswered plates)"
        )
    s = {"normal": 0.0, "protan": 0.0, "deuteran": 0.0}
    mx = {"normal": 0.0, "protan": 0.0, "deuteran": 0.0}
    for pid in session.plate_order:
        plate = plates.get(pid)
        if plate is None:
            raise KeyError(f"session references unknown plate {pid!r}")
        chosen = plate.options[session.responses[pid]]
        s["normal"] += plate.weight * chosen.w_normal
        s["protan"] += plate.weight * chosen.w_protan
        s["deuteran"] += plate.weight * chosen.w_deuteran
        mx["normal"] += plate.weight * max(o.w_normal for o in plate.options)
        mx["protan"] += plate.weight * max(o.w_protan for o in plate.options)
        mx["deuteran"] += plate.weight * max(o.w_deuteran for o in plate.options)
    return RawScores(
        s_normal=s["normal"],
        s_protan=s["protan"],
        s_deuteran=s["deuteran"],
        max_normal=mx["normal"],
        max_protan=mx["protan"],
        max_deuteran=mx["deuteran"],
    )


def fuzzify(scores: RawScores) -> FuzzyProfile:
    """Linear score normalization; beta is the complement of normality."""
    alpha_n = scores.s_normal / scores.max_normal if scores.max_normal > 0 else 0.0
    alpha_p = scores.s_protan / scores.max_protan if scores.max_protan > 0 else 0.0
    alpha_d = scores.s_deuteran / scores.max_deuteran if scores.max_deuteran > 0 else 0.0
    beta = min(max(1.0 - alpha_n, 0.0), 1.0)
    return FuzzyProfile(beta=beta, alpha_p=alpha_p, alpha_d=alpha_d, alpha_n=alpha_n)

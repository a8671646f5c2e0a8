"""Comparative web-study generator and tally.

The study is 90 questions built from a 10-image corpus: for every base
image, one degree-0 control plus protan and deuteran variants at degrees
0.25/0.5/0.75/1.0. Each question shows a simulated image next to five
options: the four correction variants re-simulated at the question's
degree, plus an untouched copy of the presented image. That is 450
option images total, with an expected control pick rate of 10/90.

Option order is shuffled by Fisher-Yates driven by a SplitMix64 stream
seeded with the survey seed (questions processed in index order, swap
index chosen as next() mod (i+1)). The algorithm is fixed so any
implementation can reproduce the same bundle bit for bit.

Responses accumulate append-only in a JSON-lines log, one respondent per
record.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .core import Image8, load_image, save_image
from .correct import CorrectionOptions, FuzzyProfile, correct
from .simulate import SimSpec, simulate

OPTION_LABELS = (
    "method_a_eq",
    "method_a_noeq",
    "method_b_eq",
    "method_b_noeq",
    "no_improvement",
)
METHOD_LABELS = OPTION_LABELS[:4]
NONZERO_DEGREES = (0.25, 0.5, 0.75, 1.0)
CVD_TYPES = ("protan", "deuteran")
CORPUS_SIZE = 10
QUESTION_COUNT = 90
OPTION_POSITIONS = ("A", "B", "C", "D", "E")
SHUFFLE_ALGORITHM = "splitmix64-fisher-yates-v1"


class SurveyConfigError(ValueError):
    """Survey generation was asked to run on an unusable configuration."""


class ResponseValidationError(ValueError):
    """One or more response records reference unknown questions or labels."""

    def __init__(self, offenders: list[str]):
        super().__init__("invalid survey responses:\n  " + "\n  ".join(offenders))
        self.offenders = offenders


class SplitMix64:
    """Tiny deterministic 64-bit generator (public-domain SplitMix64)."""

    _MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self._state = seed & self._MASK

    def next(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & self._MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & self._MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & self._MASK
        return z ^ (z >> 31)

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.next() % (i + 1)
            items[i], items[j] = items[j], items[i]


@dataclass(frozen=True)
class SurveyQuestion:
    index: int
    base_image: str
    cvd_type: str
    degree: float
    option_order: tuple[str, ...]


@dataclass(frozen=True)
class SurveySpec:
    seed: int
    questions: tuple[SurveyQuestion, ...]

    def question(self, index: int) -> SurveyQuestion:
        if not 1 <= index <= len(self.questions):
            raise KeyError(f"question index {index} out of range 1..{len(self.questions)}")
        return self.questions[index - 1]


@dataclass(frozen=True)
class SurveyResponse:
    respondent_id: str
    answers: dict[int, str]


@dataclass(frozen=True)
class TallyReport:
    total_answers: int
    overall: dict[str, float]
    positive_overall: dict[str, float]
    by_type: dict[str, dict[str, float]]
    by_type_degree: dict[str, dict[float, dict[str, float]]]
    no_improvement_rate: float
    expected_no_improvement_rate: float


def _question_profile(cvd_type: str, degree: float) -> FuzzyProfile:
    # One anomaly varied at a time: the diagonal embedding of the degree.
    if cvd_type == "protan":
        return FuzzyProfile(beta=degree, alpha_p=degree, alpha_d=0.0, alpha_n=1.0 - degree)
    return FuzzyProfile(beta=degree, alpha_p=0.0, alpha_d=degree, alpha_n=1.0 - degree)


def _question_simspec(cvd_type: str, degree: float) -> SimSpec:
    if cvd_type == "protan":
        return SimSpec(alpha_p=degree, alpha_d=0.0)
    return SimSpec(alpha_p=0.0, alpha_d=degree)


_VARIANT_OPTIONS = {
    "method_a_eq": CorrectionOptions(method="a", domain="RGB", equalize=True),
    "method_a_noeq": CorrectionOptions(method="a", domain="RGB", equalize=False),
    "method_b_eq": CorrectionOptions(method="b", domain="RGB", equalize=True),
    "method_b_noeq": CorrectionOptions(method="b", domain="RGB", equalize=False),
}


def build_questions(corpus_ids: Sequence[str], seed: int) -> tuple[SurveyQuestion, ...]:
    """The deterministic question layout for a corpus, options shuffled.

    Per corpus image (sorted by id): one degree-0 control (type alternating
    protan/deuteran by corpus position), then protan and deuteran questions
    at each nonzero degree.
    """
    if len(corpus_ids) != CORPUS_SIZE:
        raise SurveyConfigError(
            f"survey corpus must contain exactly {CORPUS_SIZE} images, got {len(corpus_ids)}"
        )
    if len(set(corpus_ids)) != len(corpus_ids):
        raise SurveyConfigError("survey corpus ids must be unique")

    rng = SplitMix64(seed)
    questions: list[SurveyQuestion] = []
    for pos, base in enumerate(sorted(corpus_ids)):
        control_type = CVD_TYPES[pos % 2]
        cells = [(control_type, 0.0)]
        cells += [(t, d) for t in CVD_TYPES for d in NONZERO_DEGREES]
        for cvd_type, degree in cells:
            order = list(OPTION_LABELS)
            rng.shuffle(order)
            questions.append(
                SurveyQuestion(
                    index=len(questions) + 1,
                    base_image=base,
                    cvd_type=cvd_type,
                    degree=degree,
                    option_order=tuple(order),
                )
            )
    return tuple(questions)


def question_image_names(question: SurveyQuestion) -> dict[str, str]:
    """Deterministic bundle file names: presented plus one per position."""
    stem = f"q{question.index:02d}"
    names = {"presented": f"{stem}_presented.png"}
    for pos, label in zip(OPTION_POSITIONS, question.option_order):
        names[pos] = f"{stem}_opt{pos}.png"
    return names


def generate_survey(
    corpus: Sequence[tuple[str, Image8]],
    seed: int,
    out_dir: str | Path,
) -> SurveySpec:
    """Render the full question bundle into out_dir and write spec.json."""
    ids = [cid for cid, _ in corpus]
    questions = build_questions(ids, seed)
    by_id = dict(corpus)

    out_dir = Path(out_dir)
    images_dir = out_dir / "images"
    images_dir.mkdir(parents=True, exist_ok=True)

    for q in questions:
        base = by_id[q.base_image]
        spec = _question_simspec(q.cvd_type, q.degree)
        presented = simulate(base, spec)
        names = question_image_names(q)
        save_image(presented, images_dir / names["presented"])
        profile = _question_profile(q.cvd_type, q.degree)
        for pos, label in zip(OPTION_POSITIONS, q.option_order):
            if label == "no_improvement":
                option_img = presented
            else:
                corrected = correct(base, profile, _VARIANT_OPTIONS[label])
                option_img = simulate(corrected, spec)
            save_image(option_img, images_dir / names[pos])

    spec_obj = SurveySpec(seed=seed, questions=questions)
    save_spec(spec_obj, out_dir / "spec.json")
    return spec_obj


def generate_survey_dir(corpus_dir: str | Path, seed: int, out_dir: str | Path) -> SurveySpec:
    """Generate from a directory of PNG/BMP base images (exactly 10)."""
    corpus_dir = Path(corpus_dir)
    files = sorted(
        p for p in corpus_dir.iterdir() if p.suffix.lower() in (".png", ".bmp")
    )
    if len(files) != CORPUS_SIZE:
        raise SurveyConfigError(
            f"survey corpus must contain exactly {CORPUS_SIZE} images, "
            f"found {len(files)} in {corpus_dir}"
        )
    corpus = [(p.stem, load_image(p)) for p in files]
    return generate_survey(corpus, seed, out_dir)


def save_spec(spec: SurveySpec, path: str | Path) -> None:
    doc = {
        "seed": spec.seed,
        "shuffle": SHUFFLE_ALGORITHM,
        "option_labels": list(OPTION_LABELS),
        "questions": [
            {
                "index": q.index,
                "base_image": q.base_image,
                "cvd_type": q.cvd_type,
                "degree": q.degree,
                "option_order": list(q.option_order),
            }
            for q in spec.questions
        ],
    }
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def load_spec(path: str | Path) -> SurveySpec:
    doc = json.loads(Path(path).read_text())
    questions = tuple(
        SurveyQuestion(
            index=q["index"],
            base_image=q["base_image"],
            cvd_type=q["cvd_type"],
            degree=float(q["degree"]),
            option_order=tuple(q["option_order"]),
        )
        for q in doc["questions"]
    )
    return SurveySpec(seed=int(doc["seed"]), questions=questions)


def append_response(path: str | Path, response: SurveyResponse) -> None:
    record = {
        "respondent_id": response.respondent_id,
        "answers": {str(k): v for k, v in response.answers.items()},
    }
    line = json.dumps(record, sort_keys=True)
    with open(path, "a") as fh:
        fh.write(line + "\n")


def load_responses(path: str | Path) -> list[SurveyResponse]:
    responses = []
    text = Path(path).read_text()
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: line {lineno}: {exc.msg}") from exc
        responses.append(
            SurveyResponse(
                respondent_id=str(record["respondent_id"]),
                answers={int(k): v for k, v in record["answers"].items()},
            )
        )
    return responses


def _percentages(counts: dict[str, int]) -> dict[str, float]:
    total = sum(counts.values())
    if total == 0:
        return {label: 0.0 for label in counts}
    return {label: 100.0 * n / total for label, n in counts.items()}


def tally(spec: SurveySpec, responses: Iterable[SurveyResponse]) -> TallyReport:
    """Aggregate responses into the percentage breakdowns of the study."""
    offenders: list[str] = []
    n_questions = len(spec.questions)
    overall = {label: 0 for label in OPTION_LABELS}
    positive = {label: 0 for label in METHOD_LABELS}
    by_type = {t: {label: 0 for label in METHOD_LABELS} for t in CVD_TYPES}
    by_type_degree = {
        t: {d: {label: 0 for label in METHOD_LABELS} for d in NONZERO_DEGREES}
        for t in CVD_TYPES
    }

    total_answers = 0
    for resp in responses:
        for index, label in resp.answers.items():
            if not 1 <= index <= n_questions:
                offenders.append(
                    f"respondent {resp.respondent_id!r}: unknown question index {index}"
                )
                continue
            if label not in OPTION_LABELS:
                offenders.append(
                    f"respondent {resp.respondent_id!r}: question {index}: "
                    f"unknown option label {label!r}"
                )
                continue
            question = spec.questions[index - 1]
            total_answers += 1
            overall[label] += 1
            if label != "no_improvement":
                positive[label] += 1
                by_type[question.cvd_type][label] += 1
                if question.degree in by_type_degree[question.cvd_type]:
                    by_type_degree[question.cvd_type][question.degree][label] += 1

    if offenders:
        raise ResponseValidationError(offenders)

    no_improv_rate = (
        100.0 * overall["no_improvement"] / total_answers if total_answers else 0.0
    )
    return TallyReport(
        total_answers=total_answers,
        overall=_percentages(overall),
        positive_overall=_percentages(positive),
        by_type={t: _percentages(c) for t, c in by_type.items()},
        by_type_degree={
            t: {d: _percentages(c) for d, c in degrees.items()}
            for t, degrees in by_type_degree.items()
        },
        no_improvement_rate=no_improv_rate,
        expected_no_improvement_rate=100.0 * CORPUS_SIZE / QUESTION_COUNT,
    )


def format_report(report: TallyReport) -> str:
    lines = [
        f"answers tallied: {report.total_answers}",
        f"control picks (no_improvement): {report.no_improvement_rate:.1f}% "
        f"(expected {report.expected_no_improvement_rate:.1f}%)",
        "",
        "overall:",
    ]
    for label in OPTION_LABELS:
        lines.append(f"  {label:16s} {report.overall[label]:6.1f}%")
    lines.append("positive responses only:")
    for label in METHOD_LABELS:
        lines.append(f"  {label:16s} {report.positive_overall[label]:6.1f}%")
    for t in CVD_TYPES:
        lines.append(f"{t} questions (positive only):")
        for label in METHOD_LABELS:
            lines.append(f"  {label:16s} {report.by_type[t][label]:6.1f}%")
        for d in NONZERO_DEGREES:
            cells = "  ".join(
                f"{label}={report.by_type_degree[t][d][label]:.1f}%"
                for label in METHOD_LABELS
            )
            lines.append(f"  degree {d:.2f}: {cells}")
    return "\n".join(lines)


def report_csv(report: TallyReport) -> str:
    """Every percentage group as flat CSV rows."""
    rows = ["group,cvd_type,degree,label,percent"]
    for label in OPTION_LABELS:
        rows.append(f"overall,,,{label},{report.overall[label]:.4f}")
    for label in METHOD_LABELS:
        rows.append(f"positive,,,{label},{report.positive_overall[label]:.4f}")
    for t in CVD_TYPES:
        for label in METHOD_LABELS:
            rows.append(f"by_type,{t},,{label},{report.by_type[t][label]:.4f}")
        for d in NONZERO_DEGREES:
            for label in METHOD_LABELS:
                rows.append(
                    f"by_type_degree,{t},{d},{label},"
                    f"{report.by_type_degree[t][d][label]:.4f}"
                )
    rows.append(f"control,,,no_improvement,{report.no_improvement_rate:.4f}")
    rows.append(f"control,,,expected,{report.expected_no_improvement_rate:.4f}")
    return "\n".join(rows) + "\n"

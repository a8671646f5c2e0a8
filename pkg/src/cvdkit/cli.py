"""Command-line interface.

Exit codes: 0 success, 1 usage error (bad flags, unreadable paths,
out-of-range degrees), 2 processing error (bad image data, configuration
problems discovered mid-run).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .core import Image8, load_image, save_image
from .correct import CorrectionOptions, FuzzyProfile, correct, load_profile
from .histogram import equalize
from .simulate import DegreeRangeError, SimSpec, simulate
from .survey import (
    SurveyConfigError,
    ResponseValidationError,
    format_report,
    generate_survey_dir,
    load_responses,
    load_spec,
    report_csv,
    tally,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PROCESSING = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1, not argparse's default 2
        raise UsageError(message)


def _degree(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"degree must be in [0, 1], got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cvdkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="simulate graded red-green deficiency")
    p_sim.add_argument("--alpha-p", type=_degree, required=True, help="protan degree in [0,1]")
    p_sim.add_argument("--alpha-d", type=_degree, required=True, help="deuteran degree in [0,1]")
    p_sim.add_argument("input", type=Path)
    p_sim.add_argument("output", type=Path)

    p_cor = sub.add_parser("correct", help="apply an adaptive correction")
    p_cor.add_argument("--method", choices=["a", "b"], required=True)
    p_cor.add_argument("--domain", choices=["rgb", "lms"], default="rgb")
    p_cor.add_argument("--equalize", action="store_true")
    p_cor.add_argument("--profile", type=Path, help="profile document from the plate test")
    p_cor.add_argument("--beta", type=_degree)
    p_cor.add_argument("--alpha-p", type=_degree)
    p_cor.add_argument("--alpha-d", type=_degree)
    p_cor.add_argument("--alpha-n", type=_degree)
    p_cor.add_argument("input", type=Path)
    p_cor.add_argument("output", type=Path)

    p_eq = sub.add_parser("equalize", help="histogram-equalize all three channels")
    p_eq.add_argument("input", type=Path)
    p_eq.add_argument("output", type=Path)

    p_survey = sub.add_parser("survey", help="comparative study tools")
    survey_sub = p_survey.add_subparsers(dest="survey_command", required=True)

    p_gen = survey_sub.add_parser("gen", help="render the 90-question bundle")
    p_gen.add_argument("--corpus", type=Path, required=True, help="directory of 10 base images")
    p_gen.add_argument("--seed", type=int, required=True)
    p_gen.add_argument("--out", type=Path, required=True)

    p_tally = survey_sub.add_parser("tally", help="aggregate collected responses")
    p_tally.add_argument("--spec", type=Path, required=True)
    p_tally.add_argument("--responses", type=Path, required=True)
    p_tally.add_argument("--csv", type=Path, help="also write every percentage group as CSV")

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--data", type=Path, required=True, help="state directory")
    p_serve.add_argument("--ui", type=Path, help="built web UI directory (index.html)")

    return parser


def _require_file(path: Path) -> Path:
    if not path.is_file():
        raise UsageError(f"no such file: {path}")
    return path


def _resolve_profile(args) -> FuzzyProfile:
    flags = (args.beta, args.alpha_p, args.alpha_d, args.alpha_n)
    if args.profile is not None:
        if any(v is not None for v in flags):
            raise UsageError("--profile and explicit degree flags are mutually exclusive")
        return load_profile(_require_file(args.profile))
    if any(v is None for v in flags):
        raise UsageError(
            "correct requires either --profile FILE or all of "
            "--beta --alpha-p --alpha-d --alpha-n"
        )
    return FuzzyProfile(
        beta=args.beta, alpha_p=args.alpha_p, alpha_d=args.alpha_d, alpha_n=args.alpha_n
    )


def _cmd_simulate(args) -> int:
    img = load_image(_require_file(args.input))
    out = simulate(img, SimSpec(alpha_p=args.alpha_p, alpha_d=args.alpha_d))
    save_image(out, args.output)
    return EXIT_OK


def _cmd_correct(args) -> int:
    profile = _resolve_profile(args)
    opts = CorrectionOptions(
        method=args.method, domain=args.domain.upper(), equalize=args.equalize
    )
    img = load_image(_require_file(args.input))
    save_image(correct(img, profile, opts), args.output)
    return EXIT_OK


def _cmd_equalize(args) -> int:
    img = load_image(_require_file(args.input))
    planes = [equalize(img.pixels[..., c]) for c in range(3)]
    save_image(Image8(np.stack(planes, axis=-1)), args.output)
    return EXIT_OK


def _cmd_survey_gen(args) -> int:
    if not args.corpus.is_dir():
        raise UsageError(f"no such directory: {args.corpus}")
    spec = generate_survey_dir(args.corpus, args.seed, args.out)
    print(f"wrote {len(spec.questions)} questions to {args.out}")
    return EXIT_OK


def _cmd_survey_tally(args) -> int:
    spec = load_spec(_require_file(args.spec))
    responses = load_responses(_require_file(args.responses))
    report = tally(spec, responses)
    print(format_report(report))
    if args.csv:
        args.csv.write_text(report_csv(report))
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(args.data, ui_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


_COMMANDS = {
    "simulate": _cmd_simulate,
    "correct": _cmd_correct,
    "equalize": _cmd_equalize,
    "serve": _cmd_serve,
}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"cvdkit: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        if args.command == "survey":
            handler = _cmd_survey_gen if args.survey_command == "gen" else _cmd_survey_tally
        else:
            handler = _COMMANDS[args.command]
        return handler(args)
    except UsageError as exc:
        print(f"cvdkit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"cvdkit: no such file: {exc.filename}", file=sys.stderr)
        return EXIT_USAGE
    except (
        DegreeRangeError,
        SurveyConfigError,
        ResponseValidationError,
        ValueError,
        OSError,
    ) as exc:
        print(f"cvdkit: {exc}", file=sys.stderr)
        return EXIT_PROCESSING


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

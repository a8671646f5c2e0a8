#!/usr/bin/env python3
"""End-to-end survey dry run.

Builds a synthetic corpus, renders the 90-question bundle, fabricates a
batch of respondents with a mild preference ordering over the methods,
and prints the tally. Useful as a smoke test of the whole study path and
as a template for driving the real thing.

Usage: run_survey_demo.py [WORK_DIR]
"""

from __future__ import annotations

import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np

from cvdkit.survey import (
    SurveyResponse,
    format_report,
    generate_survey_dir,
    tally,
)


def synthesize_responses(spec, n_respondents: int, seed: int):
    """Respondents with a soft preference for equalized method B."""
    rng = np.random.default_rng(seed)
    weights = {
        "method_b_eq": 0.38,
        "method_b_noeq": 0.22,
        "method_a_eq": 0.12,
        "method_a_noeq": 0.08,
        "no_improvement": 0.20,
    }
    labels = list(weights)
    probs = np.array([weights[l] for l in labels])
    out = []
    for r in range(n_respondents):
        answers = {
            q.index: labels[rng.choice(len(labels), p=probs)] for q in spec.questions
        }
        out.append(SurveyResponse(respondent_id=f"demo-{r:02d}", answers=answers))
    return out


def main() -> int:
    work = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp(prefix="cvdkit-demo-"))
    corpus = work / "corpus"
    bundle = work / "bundle"
    subprocess.run(
        [sys.executable, str(Path(__file__).parent / "make_corpus.py"), str(corpus), "160"],
        check=True,
        stdout=subprocess.DEVNULL,
    )
    spec = generate_survey_dir(corpus, seed=20260811, out_dir=bundle)
    print(f"bundle: {bundle} ({len(list((bundle / 'images').iterdir()))} images)")

    responses = synthesize_responses(spec, n_respondents=40, seed=7)
    report = tally(spec, responses)
    print(format_report(report))
    print(f"\nbest positive share: "
          f"{max(report.positive_overall, key=report.positive_overall.get)}")
    assert abs(sum(report.overall.values()) - 100.0) < 0.1
    assert abs(sum(report.positive_overall.values()) - 100.0) < 0.1
    return 0


if __name__ == "__main__":
    sys.exit(main())

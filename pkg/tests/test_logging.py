from fractions import Fraction
from pathlib import Path
from typing import Any

import pytest
import structlog

from mfkit.catalog import standard_quadric
from mfkit.factorization import knorrer_build, verify
from mfkit.logging import _format_message, noformat
from mfkit.matrix import GradedFreeModule
from mfkit.report import INFINITE

QUADRIC = standard_quadric(1)


@pytest.mark.parametrize(
    "value, expected",
    [
        (10, 10),
        ("10", "10"),
        (noformat(10), 10),
        (noformat(Path("relative/path")), Path("relative/path")),
        (Fraction(-1, 2), "-1/2"),
        (QUADRIC.f, "x0*y0 + x1*y1"),
        (noformat(INFINITE), INFINITE),
        (INFINITE, "infinite"),
        (GradedFreeModule([0, 1]), "twists [0, 1]"),
    ],
)
def test_format_message(value: Any, expected: Any):
    assert expected == _format_message(value)


def test_format_matrix():
    mf = knorrer_build(QUADRIC)
    assert _format_message(mf.phi) == "2x2 matrix over Q"


def test_report_can_be_logged():
    logger = structlog.get_logger()
    report = verify(knorrer_build(QUADRIC))

    assert _format_message(report)["rank"] == 2
    logger.info("verified", report=report, f=QUADRIC.f)

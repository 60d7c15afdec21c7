import json
from pathlib import Path
from typing import Any, Optional, Sequence, Tuple

import pytest
from click.testing import CliRunner, Result
from pytest_cov.embed import cleanup_on_sigterm

from mfkit.logging import configure_logger


@pytest.fixture(scope="session", autouse=True)
def configure_logging(tmp_path_factory):
    log_path = tmp_path_factory.mktemp("logs") / "mfkit.log"
    configure_logger(verbosity_level=3, log_path=log_path)

    # https://pytest-cov.readthedocs.io/en/latest/subprocess-support.html#if-you-use-multiprocessing-process
    cleanup_on_sigterm()


def invoke_cli(
    args: Sequence[str], out_path: Path, input_: Optional[str] = None
) -> Tuple[Result, Optional[Any]]:
    """Run the CLI writing its JSON document to ``out_path``.

    Returns the click result and the parsed document, ``None`` when the
    command wrote nothing.
    """
    from mfkit.cli import cli

    runner = CliRunner()
    result = runner.invoke(cli, [*args, "--out", str(out_path)], input=input_)
    text = out_path.read_text() if out_path.exists() else ""
    return result, json.loads(text) if text.strip() else None


# (mu, d, n, seed) of seeded random decompositions; n + 1 variables.
RANDOM_DECOMPOSITIONS: Sequence[Tuple[Tuple[int, ...], int, int, int]] = (
    ((1, 1), 3, 3, 0),
    ((1, 2), 4, 2, 1),
    ((1, 2), 5, 2, 2),
    ((2, 2), 5, 1, 3),
    ((2, 2), 4, 2, 4),
    ((1, 1), 3, 4, 5),
    ((1, 1), 4, 2, 6),
    ((1, 1, 1), 3, 3, 7),
    ((1, 1, 2), 4, 2, 8),
    ((1, 2, 2), 5, 2, 9),
    ((2, 2, 2), 4, 2, 10),
    ((1, 1, 1), 5, 1, 11),
    ((1, 2, 2), 4, 1, 12),
    ((1, 1, 1, 1), 3, 2, 13),
    ((1, 1, 1, 1), 3, 3, 14),
    ((1, 1, 2, 2), 4, 1, 15),
    ((1, 1, 1, 2), 4, 2, 16),
    ((1, 2, 2, 2), 5, 1, 17),
    ((2, 2, 2, 2), 5, 1, 18),
    ((1, 1, 1, 1), 4, 2, 19),
)


def random_decomposition_params():
    return [
        pytest.param(mu, d, n, seed, id=f"mu{''.join(map(str, mu))}-d{d}-n{n}")
        for mu, d, n, seed in RANDOM_DECOMPOSITIONS
    ]

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

import mfkit.cli
from mfkit.testing import invoke_cli

CATALOG_PLUGIN_PATH = Path(__file__).parent / "plugins" / "__catalog__"


@pytest.fixture
def quadric_path(tmp_path: Path) -> Path:
    path = tmp_path / "quadric.json"
    result, _ = invoke_cli(["catalog", "quadric", "--s", "2"], path)
    assert result.exit_code == 0, result.output
    return path


def test_catalog_document(tmp_path: Path):
    result, document = invoke_cli(["catalog", "quadric", "--s", "1"], tmp_path / "out.json")

    assert result.exit_code == 0, result.output
    assert document == {
        "field": "Q",
        "num_vars": 4,
        "variables": ["x0", "x1", "y0", "y1"],
        "name": "quadric",
        "f": "x0*y0 + x1*y1",
        "decomposition": {"gs": ["x0", "x1"], "hs": ["y0", "y1"]},
        "provenance": "split quadric of rank 2s+2",
    }


@pytest.mark.parametrize(
    "args",
    [
        pytest.param(["--d", "3", "--n", "2"], id="separate-values"),
        pytest.param(["--d=3", "--n=2"], id="inline-values"),
    ],
)
def test_catalog_family_arguments(tmp_path: Path, args):
    result, document = invoke_cli(["catalog", "power-sum", *args], tmp_path / "out.json")
    assert result.exit_code == 0, result.output
    assert document["f"] == "z0^3 + z1^3 + z2^3"


def test_catalog_generic_det_rank_gap(tmp_path: Path):
    result, document = invoke_cli(["catalog", "generic-det", "--n", "4"], tmp_path / "out.json")
    assert result.exit_code == 0, result.output
    assert document["rank_gap"] == {"mf_rank_upper": 4, "knorrer_rank": 8, "gap": True}


def test_catalog_seed_from_environment(tmp_path: Path, monkeypatch):
    args = ["catalog", "sample", "--mu", "1,1", "--d", "3", "--n", "2"]
    _, with_option = invoke_cli([*args, "--seed", "4"], tmp_path / "option.json")
    monkeypatch.setenv("MFKIT_SEED", "4")
    _, with_env = invoke_cli(args, tmp_path / "env.json")
    assert with_option == with_env


@pytest.mark.parametrize(
    "args",
    [
        pytest.param(["catalog", "no-such-family"], id="unknown-family"),
        pytest.param(["catalog", "quadric"], id="missing-parameter"),
        pytest.param(["catalog", "quadric", "--s"], id="missing-value"),
        pytest.param(["catalog", "quadric", "--s", "1", "--field", "Fp:4"], id="bad-field"),
    ],
)
def test_catalog_usage_errors(tmp_path: Path, args):
    result, document = invoke_cli(args, tmp_path / "out.json")
    assert result.exit_code == 2
    assert document is None


def test_catalog_family_from_plugin(tmp_path: Path):
    result, document = invoke_cli(
        ["-P", str(CATALOG_PLUGIN_PATH), "catalog", "cubic-sum", "--n", "1"],
        tmp_path / "out.json",
    )
    assert result.exit_code == 0, result.output
    assert document["f"] == "z0^3 + z1^3"


def test_build_verify_and_rank(tmp_path: Path, quadric_path: Path):
    mf_path = tmp_path / "mf.json"
    result, document = invoke_cli(["mf", "build", "--decomp", str(quadric_path)], mf_path)
    assert result.exit_code == 0, result.output
    assert len(document["phi"]["entries"]) == 4

    result, report = invoke_cli(["mf", "verify", str(mf_path)], tmp_path / "verify.json")
    assert result.exit_code == 0, result.output
    assert report == {
        "rank": 4,
        "products_ok": True,
        "graded_ok": True,
        "reduced_ok": True,
        "witness": None,
    }

    result, report = invoke_cli(["mf", "mcm-rank", str(mf_path)], tmp_path / "rank.json")
    assert result.exit_code == 0, result.output
    assert report["r"] == 2
    assert report["c"] in ("1", "-1")

    result, report = invoke_cli(
        ["mf", "randomized-check", str(mf_path), "--r", "2", "--trials", "3"],
        tmp_path / "random.json",
    )
    assert result.exit_code == 0, result.output
    assert report["passed"]


def test_build_from_stdin(tmp_path: Path, quadric_path: Path):
    result, document = invoke_cli(
        ["mf", "build", "--decomp", "-"], tmp_path / "mf.json", input_=quadric_path.read_text()
    )
    assert result.exit_code == 0, result.output
    assert document["f"] == "x0*y0 + x1*y1 + x2*y2"


def test_verify_reports_witness(tmp_path: Path, quadric_path: Path):
    mf_path = tmp_path / "mf.json"
    invoke_cli(["mf", "build", "--decomp", str(quadric_path)], mf_path)
    document = json.loads(mf_path.read_text())
    document["psi"]["entries"][0][0] += " + x0"
    broken_path = tmp_path / "broken.json"
    broken_path.write_text(json.dumps(document))

    result, report = invoke_cli(["mf", "verify", str(broken_path)], tmp_path / "verify.json")

    assert result.exit_code == 1
    assert not report["products_ok"]
    assert report["witness"]["check"] == "products"


def test_extend_and_restrict(tmp_path: Path, quadric_path: Path):
    mf_path = tmp_path / "mf.json"
    invoke_cli(["mf", "build", "--decomp", str(quadric_path)], mf_path)

    wide_path = tmp_path / "wide.json"
    result, document = invoke_cli(["mf", "extend", str(mf_path), "--num-vars", "8"], wide_path)
    assert result.exit_code == 0, result.output
    assert document["variables"][-2:] == ["z6", "z7"]

    result, document = invoke_cli(
        ["mf", "restrict", str(wide_path), "--num-vars", "6"], tmp_path / "narrow.json"
    )
    assert result.exit_code == 0, result.output
    assert document == json.loads(mf_path.read_text())


def test_bgs_check(tmp_path: Path, quadric_path: Path):
    result, report = invoke_cli(["bgs-check", "--decomp", str(quadric_path)], tmp_path / "bgs.json")
    assert result.exit_code == 0, result.output
    assert report["e"] == 1
    assert (report["bgs_mf_threshold"], report["bgs_mcm_threshold"]) == (4, 2)
    assert (report["mf_rank_upper"], report["mcm_rank_upper"]) == (4, 2)
    assert report["consistent"]


def test_analyze_text(tmp_path: Path):
    result, report = invoke_cli(
        ["analyze", "-"], tmp_path / "analyze.json", input_="z0^3 + z1^3 + z2^3 + z3^3\n"
    )
    assert result.exit_code == 0, result.output
    assert report["sing_codim"] == 3
    assert report["e"] == 0
    assert report["strength_lower"] == 1
    assert report["strength_upper"] is None


def test_analyze_with_decomposition(tmp_path: Path, quadric_path: Path):
    result, report = invoke_cli(
        ["analyze", str(quadric_path), "--decomp", str(quadric_path)], tmp_path / "analyze.json"
    )
    assert result.exit_code == 0, result.output
    assert (report["strength_lower"], report["strength_upper"]) == (2, 2)


def test_analyze_syntax_error(tmp_path: Path):
    result, document = invoke_cli(["analyze", "-"], tmp_path / "analyze.json", input_="z0 +\n")
    assert result.exit_code == 2
    assert "end of input" in result.output
    assert document is None


@pytest.mark.parametrize(
    "args, text, message",
    [
        pytest.param(
            ["--field", "Fp:3"], "1/3*z0^2 + z1^2\n", "undefined over Fp:3", id="not-invertible"
        ),
        pytest.param([], "z0^2 + 1/0*z1^2\n", "Zero denominator", id="zero-denominator"),
    ],
)
def test_analyze_bad_coefficient(tmp_path: Path, args, text: str, message: str):
    result, document = invoke_cli(["analyze", "-", *args], tmp_path / "analyze.json", input_=text)
    assert result.exit_code == 2
    assert message in result.output
    assert document is None


def test_strength_cert(tmp_path: Path):
    first = tmp_path / "first.txt"
    second = tmp_path / "second.txt"
    first.write_text("x0*y0 + x1*y1")
    second.write_text("x0^2 - y1^2")
    result, certificate = invoke_cli(
        ["strength", "cert", str(first), "--field", "Fp:7"], tmp_path / "cert.json"
    )
    assert result.exit_code == 0, result.output
    assert certificate["certified_collective_lower"] == 1

    result, certificate = invoke_cli(
        ["strength", "cert", str(first), str(second)], tmp_path / "cert2.json"
    )
    assert result.exit_code == 0, result.output
    assert certificate["polys"] == ["x0*y0 + x1*y1", "x0^2 - y1^2"]


def test_strength_secondary(tmp_path: Path, quadric_path: Path):
    result, certificate = invoke_cli(
        ["strength", "secondary", "--decomp", str(quadric_path)], tmp_path / "secondary.json"
    )
    assert result.exit_code == 0, result.output
    assert certificate["certified_collective_lower"] == "infinite"


def test_search_finds_factorization(tmp_path: Path):
    result, document = invoke_cli(
        ["search", "-", "--field", "Fp:2", "--rank", "2", "--pattern", "1,1;0,0", "-p", "1"],
        tmp_path / "search.json",
        input_="x0*y0 + x1*y1",
    )
    assert result.exit_code == 0, result.output
    assert document["found"]
    assert not document["exhaustive"]
    assert document["pattern"] == [[1, 1], [0, 0]]
    assert document["candidates"] == 2**16
    assert document["mf"]["field"] == "Fp:2"


def test_search_exhausts(tmp_path: Path):
    result, document = invoke_cli(
        ["search", "-", "--field", "Fp:2", "--rank", "1", "-p", "1"],
        tmp_path / "search.json",
        input_="x0*y0 + x1*y1",
    )
    assert result.exit_code == 0, result.output
    assert document["exhaustive"]
    assert document["mf"] is None


def test_search_over_rationals_is_refused(tmp_path: Path):
    result, _ = invoke_cli(
        ["search", "-", "--rank", "1", "-p", "1"], tmp_path / "search.json", input_="x0*y0"
    )
    assert result.exit_code == 2
    assert "prime field" in result.output


def test_search_budget(tmp_path: Path):
    result, document = invoke_cli(
        ["search", "-", "--field", "Fp:3", "--rank", "2", "--pattern", "1,1;0,0", "--budget", "1000"],
        tmp_path / "search.json",
        input_="x0*y0 + x1*y1",
    )
    assert result.exit_code == 3
    assert "budget" in result.output
    assert document is None


def test_search_beyond_limits(tmp_path: Path):
    result, document = invoke_cli(
        ["search", "-", "--field", "Fp:5", "--rank", "1", "-p", "1"],
        tmp_path / "search.json",
        input_="x0*y0 + x1*y1",
    )
    assert result.exit_code == 3
    assert "search limit of 3" in result.output
    assert document is None


def test_invalid_document(tmp_path: Path):
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    result, _ = invoke_cli(["mf", "verify", str(bad)], tmp_path / "out.json")
    assert result.exit_code == 2
    assert "Invalid JSON" in result.output


@pytest.mark.parametrize(
    "params",
    [
        pytest.param(["--help"], id="alone"),
        pytest.param(["-v", "--help"], id="verbose"),
        pytest.param(["mf", "--help"], id="group"),
    ],
)
def test_help(params):
    runner = CliRunner()
    result = runner.invoke(mfkit.cli.cli, params)
    assert result.exit_code == 0
    assert result.output.startswith("Usage: ")


@pytest.mark.parametrize(
    "params",
    [
        pytest.param(["mf", "verify"], id="missing-file"),
        pytest.param(["search", "-", "--rank", "0"], id="rank-range"),
        pytest.param(["no-such-command"], id="unknown-command"),
    ],
)
def test_usage_errors(params):
    runner = CliRunner()
    result = runner.invoke(mfkit.cli.cli, params)
    assert result.exit_code == 2

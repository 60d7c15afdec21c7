#!/usr/bin/env python3
import functools
import io
import sys
from importlib.metadata import version
from pathlib import Path
from typing import IO, Any, Dict, Iterable, List, Optional, Sequence, Tuple

import attr
import click
from rich.console import Console
from rich.panel import Panel
from rich.style import Style
from rich.table import Table
from structlog import get_logger

from .catalog import CatalogFamily, collect_families
from .cli_options import field_option, output_option, verbosity_option
from .factorization import (
    extend_mf,
    knorrer_build,
    mcm_rank_of,
    restrict_mf,
    verify,
)
from .fields import QQ, Field
from .logging import configure_logger
from .matrix import DEFAULT_TRIALS, ResourceLimitError, randomized_det_check
from .models import MatrixFactorization, StrengthDecomposition
from .parser import parse_polynomials
from .plugins import MfkitPluginManager
from .poly import Polynomial
from .report import (
    McmRankReport,
    RandomizedCheckReport,
    Report,
    VerificationReport,
    format_strength,
)
from .search import (
    DEFAULT_CHUNK_SIZE,
    DEFAULT_PROCESS_NUM,
    DEFAULT_SEARCH_BUDGET,
    SearchConfig,
    parse_pattern,
    search_patterns,
)
from .serialization import (
    Document,
    catalog_entry_to_document,
    decomposition_from_document,
    dump_document,
    load_document,
    mf_from_document,
    mf_to_document,
    polynomial_from_document,
)
from .strength import (
    analyze,
    bgs_report,
    collective_strength_certificate,
    secondary_strength_bound,
)
from .ui import NullProgressReporter, RichConsoleProgressReporter

logger = get_logger()

SEED_ENVVAR = "MFKIT_SEED"


class InputError(click.ClickException):
    exit_code = 2


class ResourceRefused(click.ClickException):
    exit_code = 3


def get_version():
    return version("mfkit")


def show_version(
    ctx: click.Context,
    _param: click.Option,
    value: bool,  # noqa: FBT001
) -> None:
    if not value or ctx.resilient_parsing:
        return
    click.echo(get_version())
    ctx.exit(code=0)


def translate_errors(func):
    """Turn domain exceptions into click exceptions with the matching exit code."""

    @functools.wraps(func)
    def decorator(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except ResourceLimitError as e:
            logger.warning("Computation refused", reason=str(e))
            raise ResourceRefused(str(e)) from e
        except (ValueError, IndexError) as e:
            raise InputError(str(e)) from e
        except ArithmeticError as e:
            raise click.ClickException(str(e)) from e

    return decorator


@attr.define
class Session:
    families: Dict[str, CatalogFamily]
    verbose: int


class MfkitContext(click.Context):
    def __init__(
        self,
        *args,
        plugin_manager: Optional[MfkitPluginManager] = None,
        **kwargs,
    ):
        super().__init__(*args, **kwargs)
        self.params["plugin_manager"] = plugin_manager or MfkitPluginManager()


def print_summary(title: str, rows: Iterable[Tuple[str, Any]], *, ok: bool = True):
    table = Table(
        show_header=False,
        show_edge=False,
        style=Style(color="white"),
    )
    table.add_column("Property", style="#00FFC8", no_wrap=True)
    table.add_column("Value")
    for name, value in rows:
        table.add_row(name, str(format_strength(value)))

    status = "[#00FFC8]ok[/#00FFC8]" if ok else "[red]failed[/red]"
    console = Console(stderr=True)
    console.print(Panel(table, title=title, subtitle=status))


def _is_document(text: str) -> bool:
    return text.lstrip().startswith("{")


def read_polynomials(streams: Sequence[IO[str]], field: Field) -> List[Polynomial]:
    """Read one polynomial per input.

    An input is either polynomial text or a JSON document carrying ``f``;
    texts share one ring built from every variable name that occurs.
    """
    texts = [stream.read() for stream in streams]
    if all(_is_document(text) for text in texts):
        documents: List[Document] = [load_document(io.StringIO(text)) for text in texts]
        return [polynomial_from_document(document) for document in documents]
    if any(_is_document(text) for text in texts):
        raise ValueError("Cannot mix JSON documents and polynomial text")
    return parse_polynomials(texts, field=field)


def read_decomposition(stream: IO[str]) -> StrengthDecomposition:
    return decomposition_from_document(load_document(stream))


def read_mf(stream: IO[str]) -> MatrixFactorization:
    return mf_from_document(load_document(stream))


def write(out: IO[str], document: Any):
    if isinstance(document, Report):
        document = document.asdict()
    dump_document(document, out)


def verification_rows(report: VerificationReport) -> List[Tuple[str, Any]]:
    rows: List[Tuple[str, Any]] = [
        ("Rank", report.rank),
        ("Products", report.products_ok),
        ("Grading", report.graded_ok),
        ("Reduced", report.reduced_ok),
    ]
    if report.witness is not None:
        witness = report.witness
        rows.append(
            (
                "Witness",
                f"{witness.check} of {witness.matrix} at ({witness.row}, {witness.col}): "
                f"expected {witness.expected}, got {witness.actual}",
            )
        )
    return rows


@click.group(context_settings=dict(help_option_names=["--help", "-h"]))
@click.option(
    "--log",
    "log_path",
    default=None,
    type=click.Path(path_type=Path),
    help="File to save logs (in text format).",
)
@click.option(
    "-P",
    "--plugins-path",
    type=click.Path(path_type=Path, exists=True, resolve_path=True),
    default=None,
    help="Load plugins from the provided path.",
    show_default=True,
)
@verbosity_option
@click.option(
    "--version",
    help="Shows mfkit version",
    is_flag=True,
    callback=show_version,
    expose_value=False,
)
@click.pass_context
def cli(
    ctx: click.Context,
    *,
    log_path: Optional[Path],
    plugins_path: Optional[Path],
    plugin_manager: MfkitPluginManager,
    verbose: int,
):
    """Construct, verify and analyze graded matrix factorizations of hypersurfaces.

    Commands read JSON documents or polynomial text ('-' is standard input)
    and write one JSON document to standard output; summaries go to
    standard error.
    """
    configure_logger(verbose, log_path)

    plugin_manager.import_plugins(plugins_path)
    families = collect_families(plugin_manager.load_catalog_families_from_plugins())
    ctx.obj = Session(families=families, verbose=verbose)


cli.context_class = MfkitContext


@cli.group()
def mf():
    """Matrix factorizations."""


@mf.command("build")
@click.option(
    "--decomp",
    type=click.File("r"),
    required=True,
    help="Strength decomposition JSON, '-' is standard input.",
)
@output_option
@translate_errors
def mf_build(decomp: IO[str], out: IO[str]):
    """Build the rank 2^s factorization of f = Σ g_i h_i and verify it."""
    decomposition = read_decomposition(decomp)
    mf_ = knorrer_build(decomposition)
    report = verify(mf_)
    write(out, mf_to_document(mf_))
    print_summary(
        "Knörrer construction",
        [("f", mf_.f), ("s", decomposition.s), *verification_rows(report)],
        ok=report.passed,
    )
    if not report.passed:
        sys.exit(1)


@mf.command("verify")
@click.argument("mf_file", type=click.File("r"))
@output_option
@translate_errors
def mf_verify(mf_file: IO[str], out: IO[str]):
    """Check both products, the grading and reducedness."""
    report = verify(read_mf(mf_file))
    write(out, report)
    print_summary("Verification", verification_rows(report), ok=report.passed)
    if not report.passed:
        sys.exit(1)


@mf.command("mcm-rank")
@click.argument("mf_file", type=click.File("r"))
@output_option
@translate_errors
def mf_mcm_rank(mf_file: IO[str], out: IO[str]):
    """Find r and c with det(phi) = c * f^r."""
    mf_ = read_mf(mf_file)
    r, c = mcm_rank_of(mf_)
    report = McmRankReport(r=r, c=mf_.ring.field.to_string(c), rank=mf_.rank)
    write(out, report)
    print_summary("Cokernel rank", [("Rank", report.rank), ("r", r), ("c", report.c)])


@mf.command("randomized-check")
@click.argument("mf_file", type=click.File("r"))
@click.option("--r", "r", type=click.IntRange(0), required=True, help="Expected power of f.")
@click.option(
    "--trials",
    type=click.IntRange(1),
    default=DEFAULT_TRIALS,
    show_default=True,
    help="Number of evaluation points.",
)
@click.option(
    "--seed",
    type=int,
    default=0,
    show_default=True,
    envvar=SEED_ENVVAR,
    help=f"Sampler seed, overridden by ${SEED_ENVVAR}.",
)
@output_option
@translate_errors
def mf_randomized_check(mf_file: IO[str], r: int, trials: int, seed: int, out: IO[str]):
    """Test det(phi) = c * f^r at random points."""
    mf_ = read_mf(mf_file)
    passed = randomized_det_check(mf_.phi, mf_.f, r, trials=trials, seed=seed)
    report = RandomizedCheckReport(
        rank=mf_.rank, r=r, trials=trials, seed=seed, passed=passed
    )
    write(out, report)
    print_summary(
        "Randomized determinant check",
        [("Rank", mf_.rank), ("r", r), ("Trials", trials), ("Seed", seed)],
        ok=passed,
    )
    if not passed:
        sys.exit(1)


@mf.command("extend")
@click.argument("mf_file", type=click.File("r"))
@click.option("--num-vars", type=click.IntRange(0), required=True, help="New number of variables.")
@output_option
@translate_errors
def mf_extend(mf_file: IO[str], num_vars: int, out: IO[str]):
    """Rewrite the factorization over a ring with more variables."""
    write(out, mf_to_document(extend_mf(read_mf(mf_file), num_vars)))


@mf.command("restrict")
@click.argument("mf_file", type=click.File("r"))
@click.option("--num-vars", type=click.IntRange(0), required=True, help="Number of variables kept.")
@output_option
@translate_errors
def mf_restrict(mf_file: IO[str], num_vars: int, out: IO[str]):
    """Set the trailing variables to zero and verify the result."""
    mf_ = restrict_mf(read_mf(mf_file), num_vars)
    report = verify(mf_)
    write(out, mf_to_document(mf_))
    if not report.passed:
        print_summary("Restriction", verification_rows(report), ok=False)
        sys.exit(1)


@cli.command("analyze")
@click.argument("poly_file", type=click.File("r"))
@field_option(default="Q")
@click.option(
    "--decomp",
    type=click.File("r"),
    default=None,
    help="Strength decomposition of the same form, adds an upper strength bound.",
)
@output_option
@translate_errors
def analyze_command(
    poly_file: IO[str], field: Field, decomp: Optional[IO[str]], out: IO[str]
):
    """Singularity profile, e(f) and strength bounds of a form."""
    (f,) = read_polynomials([poly_file], field)
    decomposition = read_decomposition(decomp) if decomp is not None else None
    if decomposition is not None and decomposition.f != f:
        raise ValueError("The decomposition does not sum to the given form")
    report = analyze(f, decomposition)
    write(out, report)
    upper = "?" if report.strength_upper is None else format_strength(report.strength_upper)
    print_summary(
        "Singularity profile",
        [
            ("f", f),
            ("Degree", report.degree),
            ("codim Sing", report.sing_codim),
            ("e(f)", report.e),
            ("Strength", f"[{format_strength(report.strength_lower)}, {upper}]"),
        ],
    )


@cli.group()
def strength():
    """Strength certificates."""


@strength.command("cert")
@click.argument("poly_files", type=click.File("r"), nargs=-1, required=True)
@field_option(default="Q")
@output_option
@translate_errors
def strength_cert(poly_files: Tuple[IO[str], ...], field: Field, out: IO[str]):
    """Certified lower bound on the collective strength of the forms."""
    fs = read_polynomials(poly_files, field)
    certificate = collective_strength_certificate(fs)
    write(out, certificate)
    print_summary(
        "Collective strength certificate",
        [
            ("Forms", len(fs)),
            ("codim of minors", certificate.minors_codim),
            ("Strength >=", certificate.certified_collective_lower),
        ],
    )


@strength.command("secondary")
@click.option("--decomp", type=click.File("r"), required=True, help="Strength decomposition JSON.")
@output_option
@translate_errors
def strength_secondary(decomp: IO[str], out: IO[str]):
    """Certified lower bound on the collective strength of all factors."""
    decomposition = read_decomposition(decomp)
    certificate = collective_strength_certificate(decomposition.factors())
    write(out, certificate)
    print_summary(
        "Secondary strength",
        [("s", decomposition.s), ("Secondary strength >=", secondary_strength_bound(decomposition))],
    )


@cli.command("bgs-check")
@click.option("--decomp", type=click.File("r"), required=True, help="Strength decomposition JSON.")
@output_option
@translate_errors
def bgs_check(decomp: IO[str], out: IO[str]):
    """Compare the exhibited factorization ranks with the conjectured lower bounds."""
    report = bgs_report(read_decomposition(decomp))
    write(out, report)
    print_summary(
        "Rank bounds",
        [
            ("s", report.s_exhibited),
            ("e(f)", report.e),
            ("MF rank", f"{report.bgs_mf_threshold} <= ? <= {report.mf_rank_upper}"),
            ("MCM rank", f"{report.bgs_mcm_threshold} <= ? <= {report.mcm_rank_upper}"),
        ],
        ok=report.consistent,
    )
    if not report.consistent:
        sys.exit(1)


def parse_family_arguments(args: Sequence[str]) -> Dict[str, str]:
    """Parse ``--key value`` and ``--key=value`` pairs."""
    arguments: Dict[str, str] = {}
    rest = list(args)
    while rest:
        token = rest.pop(0)
        if not token.startswith("--") or len(token) == 2:  # noqa: PLR2004
            raise click.UsageError(f"Unexpected catalog argument {token!r}")
        key, sep, value = token[2:].partition("=")
        if not sep:
            if not rest:
                raise click.UsageError(f"Missing value for --{key}")
            value = rest.pop(0)
        arguments[key.replace("-", "_")] = value
    return arguments


@cli.command(
    "catalog",
    context_settings=dict(ignore_unknown_options=True, allow_extra_args=True),
)
@click.argument("name")
@click.option(
    "--seed",
    type=int,
    default=None,
    envvar=SEED_ENVVAR,
    help=f"Seed for sampled families, overridden by ${SEED_ENVVAR}.",
)
@output_option
@click.pass_context
@translate_errors
def catalog_command(ctx: click.Context, name: str, seed: Optional[int], out: IO[str]):
    """Emit a catalog entry, family parameters are given as --key value."""
    session: Session = ctx.obj
    family = session.families.get(name)
    if family is None:
        raise click.BadParameter(
            f"Unknown family {name!r}, choose from: {', '.join(sorted(session.families))}",
            param_hint="NAME",
        )
    arguments: Dict[str, Any] = dict(parse_family_arguments(ctx.args))
    if seed is not None:
        if any(p.name == "seed" for p in family.parameters):
            arguments["seed"] = seed
        else:
            logger.debug("Seed ignored for unsampled family", family=name)
    entry = family.build(**arguments)
    write(out, catalog_entry_to_document(entry))
    rows: List[Tuple[str, Any]] = [
        ("f", entry.f),
        ("Variables", entry.ring.num_vars),
        ("s", entry.decomposition.s if entry.decomposition else "-"),
        ("Provenance", entry.provenance),
    ]
    rank_gap = entry.rank_gap()
    if rank_gap is not None:
        rows.append(
            ("MF rank", f"{rank_gap.mf_rank_upper} (Knörrer: {rank_gap.knorrer_rank})")
        )
    print_summary(f"Catalog: {entry.name}", rows)


@cli.command("search")
@click.argument("poly_file", type=click.File("r"))
@field_option(default=None)
@click.option("--rank", type=click.IntRange(1), required=True, help="Size of phi.")
@click.option(
    "--pattern",
    default=None,
    help="Twists of phi as 'source;target', e.g. '1,1;0,0'. Every pattern is tried when omitted.",
)
@click.option(
    "-p",
    "--process-num",
    "process_num",
    type=click.IntRange(1),
    default=DEFAULT_PROCESS_NUM,
    help="Number of worker processes to search parallelly.",
    show_default=True,
)
@click.option(
    "--chunk-size",
    type=click.IntRange(1),
    default=DEFAULT_CHUNK_SIZE,
    show_default=True,
    help="Candidates per worker task.",
)
@click.option(
    "--budget",
    type=click.IntRange(1),
    default=DEFAULT_SEARCH_BUDGET,
    show_default=True,
    help="Refuse patterns with more candidates than this.",
)
@output_option
@click.pass_context
@translate_errors
def search_command(
    ctx: click.Context,
    poly_file: IO[str],
    field: Optional[Field],
    rank: int,
    pattern: Optional[str],
    process_num: int,
    chunk_size: int,
    budget: int,
    out: IO[str],
):
    """Exhaustively search reduced factorizations of a form over a prime field."""
    session: Session = ctx.obj
    (f,) = read_polynomials([poly_file], field or QQ)
    if f.ring.characteristic == 0:
        raise ValueError("Search needs a prime field, use --field Fp:<p>")
    config = SearchConfig(
        process_num=process_num,
        chunk_size=chunk_size,
        budget=budget,
        progress_reporter=NullProgressReporter
        if session.verbose
        else RichConsoleProgressReporter,
    )
    patterns = [parse_pattern(pattern)] if pattern is not None else None
    report, found = search_patterns(f, rank, patterns, config)
    document = report.asdict()
    document["exhaustive"] = report.exhaustive
    document["mf"] = mf_to_document(found) if found is not None else None
    write(out, document)
    print_summary(
        "Factorization search",
        [
            ("f", f),
            ("Rank", rank),
            ("Patterns", report.patterns_searched),
            ("Candidates", report.candidates),
            ("Result", "found" if report.found else "none (exhaustive)"),
        ],
    )


def main():
    try:
        # Click argument parsing
        ctx = cli.make_context("mfkit", sys.argv[1:])
    except click.ClickException as e:
        e.show()
        sys.exit(e.exit_code)
    except click.exceptions.Exit as e:
        sys.exit(e.exit_code)
    except Exception:
        logger.exception("Unhandled exception during mfkit")
        sys.exit(1)

    try:
        with ctx:
            cli.invoke(ctx)
    except click.ClickException as e:
        e.show()
        sys.exit(e.exit_code)
    except click.exceptions.Exit as e:
        sys.exit(e.exit_code)
    except Exception:
        logger.exception("Unhandled exception during mfkit")
        sys.exit(1)

    sys.exit(0)


if __name__ == "__main__":
    main()

"""Exhaustive search for small reduced matrix factorizations over a prime field.

Candidates for ``phi`` are numbered: the coefficient of slot ``k`` (entries
row-major, monomials largest first) is digit ``k`` of the index in base ``p``.
For every candidate with ``det(phi) | f^rank``, the partner ``psi`` is solved
from ``phi psi = f I`` by linear algebra; ``psi phi = f I`` then follows
because ``phi`` is invertible over the fraction field.
"""

import functools
import itertools
import multiprocessing
from typing import Dict, List, Optional, Sequence, Tuple, Type

import attr
from structlog import get_logger

from .factorization import verify
from .fields import PrimeField
from .matrix import GradedFreeModule, GradedMatrix, ResourceLimitError, determinant
from .models import ChunkResult, MatrixFactorization
from .pool import make_pool
from .poly import Exponents, Polynomial, PolynomialRing
from .report import SearchReport
from .ui import NullProgressReporter, ProgressReporter

logger = get_logger()

DEFAULT_PROCESS_NUM = multiprocessing.cpu_count()
DEFAULT_SEARCH_BUDGET = 2**30
DEFAULT_CHUNK_SIZE = 4096
DEFAULT_MAX_PRIME = 3
DEFAULT_MAX_NUM_VARS = 4
DEFAULT_MAX_RANK = 2

Pattern = Tuple[Tuple[int, ...], Tuple[int, ...]]
"""``(source twists of phi, target twists of phi)``."""


class SearchSpaceTooLarge(ResourceLimitError):
    pass


@attr.define
class SearchConfig:
    process_num: int = DEFAULT_PROCESS_NUM
    chunk_size: int = DEFAULT_CHUNK_SIZE
    budget: int = DEFAULT_SEARCH_BUDGET
    max_prime: int = DEFAULT_MAX_PRIME
    max_num_vars: int = DEFAULT_MAX_NUM_VARS
    max_rank: int = DEFAULT_MAX_RANK
    progress_reporter: Type[ProgressReporter] = NullProgressReporter

    def check_limits(self, f: Polynomial, rank: int):
        """Refuse searches beyond the characteristic, variable and rank limits."""
        limits = (
            ("characteristic", f.ring.characteristic, self.max_prime),
            ("number of variables", f.ring.num_vars, self.max_num_vars),
            ("rank", rank, self.max_rank),
        )
        for name, value, limit in limits:
            if value > limit:
                raise SearchSpaceTooLarge(
                    f"The {name} {value} exceeds the search limit of {limit}"
                )


def parse_pattern(text: str) -> Pattern:
    """Parse ``"1,1;0,0"`` into source and target twists of ``phi``."""
    source, sep, target = text.partition(";")
    if not sep:
        raise ValueError(f"Pattern needs 'source;target' twists: {text!r}")
    try:
        return (
            tuple(int(t) for t in source.split(",")),
            tuple(int(t) for t in target.split(",")),
        )
    except ValueError as e:
        raise ValueError(f"Invalid twist list in pattern {text!r}") from e


def _solve_mod_p(
    rows: List[List[int]], rhs: List[int], num_unknowns: int, p: int
) -> Optional[List[int]]:
    """One solution of ``rows x = rhs`` over F_p, or ``None``."""
    matrix = [row[:] + [b] for row, b in zip(rows, rhs)]
    pivots: List[int] = []
    rank = 0
    for col in range(num_unknowns):
        pivot = next((r for r in range(rank, len(matrix)) if matrix[r][col]), None)
        if pivot is None:
            continue
        matrix[rank], matrix[pivot] = matrix[pivot], matrix[rank]
        inverse = pow(matrix[rank][col], p - 2, p)
        matrix[rank] = [v * inverse % p for v in matrix[rank]]
        for r in range(len(matrix)):
            if r != rank and matrix[r][col]:
                factor = matrix[r][col]
                matrix[r] = [(a - factor * b) % p for a, b in zip(matrix[r], matrix[rank])]
        pivots.append(col)
        rank += 1
    if any(row[-1] for row in matrix[rank:]):
        return None
    solution = [0] * num_unknowns
    for r, col in enumerate(pivots):
        solution[col] = matrix[r][-1]
    return solution


@attr.define
class _SearchProblem:
    f: Polynomial
    source: GradedFreeModule
    target: GradedFreeModule
    slots: List[Tuple[int, int, Exponents]]
    """``(row, col, monomial)`` of every free coefficient of phi."""
    f_power: Polynomial

    @property
    def ring(self) -> PolynomialRing:
        return self.f.ring

    @property
    def p(self) -> int:
        return self.ring.field.characteristic

    @property
    def size(self) -> int:
        return self.p ** len(self.slots)

    def phi(self, index: int) -> GradedMatrix:
        ring = self.ring
        coefficients: List[List[Dict[Exponents, int]]] = [
            [{} for _ in range(self.source.rank)] for _ in range(self.target.rank)
        ]
        for row, col, monomial in self.slots:
            index, digit = divmod(index, self.p)
            if digit:
                coefficients[row][col][monomial] = digit
        return GradedMatrix(
            ring,
            self.source,
            self.target,
            [[ring.from_dict(entry) for entry in row] for row in coefficients],
        )

    @property
    def psi_source(self) -> GradedFreeModule:
        return self.target.shift(self.f.degree)

    def solve_psi(self, phi: GradedMatrix) -> Optional[GradedMatrix]:
        """Solve ``phi psi = f I`` column by column for a reduced graded ``psi``."""
        ring = self.ring
        p = self.p
        rank = self.target.rank
        f_terms = self.f.as_dict()
        columns: List[List[Polynomial]] = []
        for col in range(rank):
            unknowns = [
                (i, monomial)
                for i in range(rank)
                for monomial in ring.monomials_of_degree(
                    self.psi_source.twists[col] - self.source.twists[i]
                )
                if self.psi_source.twists[col] - self.source.twists[i] >= 1
            ]
            equations: Dict[Tuple[int, Exponents], List[int]] = {}
            for k, (i, monomial) in enumerate(unknowns):
                for j in range(rank):
                    for exponents, coefficient in phi[j, i].terms:
                        key = (j, tuple(a + b for a, b in zip(exponents, monomial)))
                        row = equations.setdefault(key, [0] * len(unknowns))
                        row[k] = (row[k] + coefficient) % p
            for exponents in f_terms:
                equations.setdefault((col, exponents), [0] * len(unknowns))
            keys = list(equations)
            rhs = [f_terms.get(exponents, 0) if j == col else 0 for j, exponents in keys]
            solution = _solve_mod_p([equations[k] for k in keys], rhs, len(unknowns), p)
            if solution is None:
                return None
            entries: List[Dict[Exponents, int]] = [{} for _ in range(rank)]
            for (i, monomial), value in zip(unknowns, solution):
                if value:
                    entries[i][monomial] = value
            columns.append([ring.from_dict(entry) for entry in entries])
        rows = [[columns[col][i] for col in range(rank)] for i in range(rank)]
        return GradedMatrix(ring, self.psi_source, self.source, rows)

    def check(self, index: int) -> Optional[MatrixFactorization]:
        phi = self.phi(index)
        det = determinant(phi)
        if not det or self.f_power.exact_divide(det) is None:
            return None
        psi = self.solve_psi(phi)
        if psi is None:
            return None
        return MatrixFactorization(self.f, phi, psi)


def _scan_chunk(problem: _SearchProblem, bounds: Tuple[int, int]) -> ChunkResult:
    start, stop = bounds
    for index in range(start, stop):
        if problem.check(index) is not None:
            return ChunkResult(start, stop, index)
    return ChunkResult(start, stop)


def _build_problem(f: Polynomial, rank: int, pattern: Pattern) -> _SearchProblem:
    ring = f.ring
    if not isinstance(ring.field, PrimeField):
        raise ValueError("Factorization search needs a prime field")
    if not f.is_homogeneous() or f.degree < 2:  # noqa: PLR2004
        raise ValueError("Factorization search needs a homogeneous f of degree >= 2")
    source = GradedFreeModule(pattern[0])
    target = GradedFreeModule(pattern[1])
    if source.rank != rank or target.rank != rank:
        raise ValueError(f"Pattern {pattern} does not have rank {rank}")
    slots = [
        (row, col, monomial)
        for row in range(rank)
        for col in range(rank)
        if source.twists[col] - target.twists[row] >= 1
        for monomial in ring.monomials_of_degree(source.twists[col] - target.twists[row])
    ]
    return _SearchProblem(f=f, source=source, target=target, slots=slots, f_power=f**rank)


def search_space_size(f: Polynomial, rank: int, pattern: Pattern) -> int:
    return _build_problem(f, rank, pattern).size


def search_reduced_mf(
    f: Polynomial,
    rank: int,
    pattern: Pattern,
    config: Optional[SearchConfig] = None,
) -> Optional[MatrixFactorization]:
    """First reduced graded factorization of ``f`` in candidate order, or ``None``.

    ``None`` means the whole candidate space was enumerated without a hit.
    """
    config = config or SearchConfig()
    problem = _build_problem(f, rank, pattern)
    config.check_limits(f, rank)
    total = problem.size
    if total > config.budget:
        raise SearchSpaceTooLarge(
            f"{total} candidates exceed the search budget of {config.budget}"
        )
    logger.info("Searching matrix factorizations", rank=rank, candidates=total)

    next_start = 0
    best: Optional[int] = None
    progress_reporter = config.progress_reporter(total)

    def submit_next(pool):
        nonlocal next_start
        if next_start >= total or (best is not None and best < next_start):
            return
        stop = min(next_start + config.chunk_size, total)
        pool.submit((next_start, stop))
        next_start = stop

    def on_result(pool, result: ChunkResult):
        nonlocal best
        progress_reporter.update(result)
        logger.debug("Chunk scanned", start=result.start, hit=result.hit, _verbosity=3)
        if result.hit is not None and (best is None or result.hit < best):
            best = result.hit
        submit_next(pool)

    process_num = max(1, config.process_num)
    with progress_reporter, make_pool(
        process_num, functools.partial(_scan_chunk, problem), on_result
    ) as pool:
        for _ in range(2 * process_num if process_num > 1 else 1):
            submit_next(pool)
        pool.process_until_done()

    if best is None:
        logger.info("No matrix factorization found", rank=rank, candidates=total)
        return None
    mf = problem.check(best)
    assert mf is not None  # noqa: S101
    logger.info("Matrix factorization found", index=best, verified=verify(mf).passed)
    return mf


def all_patterns(f: Polynomial, rank: int) -> List[Pattern]:
    """Twist patterns worth searching for a factorization of the given rank.

    ``F`` is normalized to start at twist 0 and every twist of ``G`` and ``F``
    stays in ``0..deg f``; entries of degree below 1 are forced to zero.
    """
    d = f.degree
    patterns: List[Pattern] = []
    for target_tail in itertools.combinations_with_replacement(range(d + 1), rank - 1):
        target = (0, *target_tail)
        for source in itertools.combinations_with_replacement(range(1, d + 1), rank):
            patterns.append((tuple(source), target))
    return patterns


def search_patterns(
    f: Polynomial,
    rank: int,
    patterns: Optional[Sequence[Pattern]] = None,
    config: Optional[SearchConfig] = None,
) -> Tuple[SearchReport, Optional[MatrixFactorization]]:
    """Search the patterns in order and stop at the first one with a hit.

    Without explicit patterns every pattern of :func:`all_patterns` is tried.
    """
    config = config or SearchConfig()
    config.check_limits(f, rank)
    if patterns is None:
        patterns = all_patterns(f, rank)
    candidates = 0
    searched = 0
    for pattern in patterns:
        searched += 1
        candidates += search_space_size(f, rank, pattern)
        mf = search_reduced_mf(f, rank, pattern, config)
        if mf is not None:
            report = SearchReport(
                rank=rank,
                pattern=(list(pattern[0]), list(pattern[1])),
                patterns_searched=searched,
                candidates=candidates,
                found=True,
            )
            return report, mf
    report = SearchReport(
        rank=rank, pattern=None, patterns_searched=searched, candidates=candidates, found=False
    )
    return report, None

"""Graded free modules and polynomial matrices between them.

A :class:`GradedMatrix` maps ``source = ⊕ S(-a_i)`` to ``target = ⊕ S(-b_j)``;
entry ``(j, i)`` is zero or homogeneous of degree ``a_i - b_j``.
"""

import functools
import random
from typing import Callable, List, Optional, Sequence, Tuple

import attr
from structlog import get_logger

from .fields import FieldScalar
from .poly import Polynomial, PolynomialRing, RingMismatchError

logger = get_logger()

COFACTOR_MAX_RANK = 6
EXACT_MAX_RANK = 16
DEFAULT_TRIALS = 8
RESAMPLE_FACTOR = 10
RATIONAL_SAMPLE_BOUND = 1000

Rows = List[List[Polynomial]]


class ResourceLimitError(Exception):
    """A computation was refused because it exceeds a size limit."""


class DeterminantRankError(ResourceLimitError):
    pass


class DegenerateSamplingError(ArithmeticError):
    pass


@attr.define(frozen=True)
class GradedFreeModule:
    twists: Tuple[int, ...] = attr.field(converter=tuple)

    @twists.validator
    def _check_twists(self, _attribute, value):
        if not value:
            raise ValueError("A graded free module needs rank >= 1")

    @property
    def rank(self) -> int:
        return len(self.twists)

    def shift(self, amount: int) -> "GradedFreeModule":
        return GradedFreeModule(tuple(t + amount for t in self.twists))

    def direct_sum(self, other: "GradedFreeModule") -> "GradedFreeModule":
        return GradedFreeModule(self.twists + other.twists)


def _as_rows(rows) -> Tuple[Tuple[Polynomial, ...], ...]:
    return tuple(tuple(row) for row in rows)


@attr.define(frozen=True)
class GradedMatrix:
    ring: PolynomialRing
    source: GradedFreeModule
    target: GradedFreeModule
    entries: Tuple[Tuple[Polynomial, ...], ...] = attr.field(converter=_as_rows)

    def __attrs_post_init__(self):
        if len(self.entries) != self.target.rank or any(
            len(row) != self.source.rank for row in self.entries
        ):
            raise ValueError(
                f"Entries do not form a {self.target.rank}x{self.source.rank} matrix"
            )
        for row in self.entries:
            for entry in row:
                if entry.ring != self.ring:
                    raise RingMismatchError("Matrix entry from a different ring")

    @classmethod
    def identity(cls, ring: PolynomialRing, module: GradedFreeModule) -> "GradedMatrix":
        return cls(
            ring,
            module,
            module,
            [
                [ring.one() if i == j else ring.zero() for i in range(module.rank)]
                for j in range(module.rank)
            ],
        )

    @property
    def num_rows(self) -> int:
        return self.target.rank

    @property
    def num_cols(self) -> int:
        return self.source.rank

    @property
    def is_square(self) -> bool:
        return self.num_rows == self.num_cols

    def __getitem__(self, index: Tuple[int, int]) -> Polynomial:
        row, col = index
        return self.entries[row][col]

    def rows(self) -> Rows:
        return [list(row) for row in self.entries]

    def expected_degree(self, row: int, col: int) -> int:
        return self.source.twists[col] - self.target.twists[row]

    def degree_violation(self) -> Optional[Tuple[int, int, int, Optional[int]]]:
        """First ``(row, col, expected, actual)`` entry breaking the grading."""
        for row, entries in enumerate(self.entries):
            for col, entry in enumerate(entries):
                if not entry:
                    continue
                expected = self.expected_degree(row, col)
                actual = entry.homogeneous_degree()
                if actual != expected:
                    return row, col, expected, actual  # type: ignore
        return None

    def unit_entry(self) -> Optional[Tuple[int, int]]:
        """First entry with a nonzero constant term, if any."""
        zero = self.ring.field.zero
        for row, entries in enumerate(self.entries):
            for col, entry in enumerate(entries):
                if entry.constant_coefficient != zero:
                    return row, col
        return None

    def __matmul__(self, other: "GradedMatrix") -> "GradedMatrix":
        """Composition ``self ∘ other``."""
        if other.ring != self.ring:
            raise RingMismatchError("Cannot compose matrices over different rings")
        if other.num_rows != self.num_cols:
            raise ValueError("Matrix shapes do not compose")
        zero = self.ring.zero()
        product = [
            [
                sum(
                    (self.entries[j][k] * other.entries[k][i] for k in range(self.num_cols)),
                    zero,
                )
                for i in range(other.num_cols)
            ]
            for j in range(self.num_rows)
        ]
        return GradedMatrix(self.ring, other.source, self.target, product)

    def __neg__(self) -> "GradedMatrix":
        return self.map_entries(lambda entry: -entry)

    def map_entries(
        self,
        fn: Callable[[Polynomial], Polynomial],
        ring: Optional[PolynomialRing] = None,
    ) -> "GradedMatrix":
        return GradedMatrix(
            ring or self.ring,
            self.source,
            self.target,
            [[fn(entry) for entry in row] for row in self.entries],
        )

    def evaluate(self, point: Sequence[FieldScalar]) -> List[List[FieldScalar]]:
        return [[entry.evaluate(point) for entry in row] for row in self.entries]

    def is_skew_symmetric(self) -> bool:
        n = self.num_rows
        return self.is_square and all(
            self.entries[i][j] == -self.entries[j][i] for i in range(n) for j in range(i, n)
        )


def block_matrix(
    ring: PolynomialRing,
    blocks: Sequence[Sequence[Rows]],
    source: GradedFreeModule,
    target: GradedFreeModule,
) -> GradedMatrix:
    """Glue a grid of row-lists into one matrix."""
    rows: Rows = []
    for block_row in blocks:
        for r in range(len(block_row[0])):
            rows.append([entry for block in block_row for entry in block[r]])
    return GradedMatrix(ring, source, target, rows)


def scalar_identity(ring: PolynomialRing, size: int, scalar: Polynomial) -> Rows:
    return [[scalar if i == j else ring.zero() for i in range(size)] for j in range(size)]


def _cofactor_determinant(rows: Rows, ring: PolynomialRing) -> Polynomial:
    n = len(rows)

    @functools.lru_cache(maxsize=None)
    def minor(start: int, columns: int) -> Polynomial:
        # Determinant of rows[start:] restricted to the columns in the bitmask.
        if start == n:
            return ring.one()
        result = ring.zero()
        sign = 1
        for col in range(n):
            if not columns >> col & 1:
                continue
            entry = rows[start][col]
            if entry:
                term = entry * minor(start + 1, columns & ~(1 << col))
                result = result + term if sign > 0 else result - term
            sign = -sign
        return result

    return minor(0, (1 << n) - 1)


def _bareiss_determinant(rows: Rows, ring: PolynomialRing) -> Polynomial:
    work = [list(row) for row in rows]
    n = len(work)
    sign = 1
    one = ring.one()
    previous = one
    for k in range(n - 1):
        if not work[k][k]:
            swap = next((i for i in range(k + 1, n) if work[i][k]), None)
            if swap is None:
                return ring.zero()
            work[k], work[swap] = work[swap], work[k]
            sign = -sign
        pivot = work[k][k]
        pivot_row = work[k]
        for i in range(k + 1, n):
            row = work[i]
            below = row[k]
            for j in range(k + 1, n):
                numerator = pivot * row[j] if row[j] else ring.zero()
                if below and pivot_row[j]:
                    numerator = numerator - below * pivot_row[j]
                if not numerator or previous == one:
                    row[j] = numerator
                    continue
                quotient = numerator.exact_divide(previous)
                if quotient is None:
                    raise ArithmeticError("Fraction-free elimination lost exactness")
                row[j] = quotient
            row[k] = ring.zero()
        previous = pivot
        logger.debug("Bareiss step", step=k, size=n, _verbosity=3)
    result = work[n - 1][n - 1]
    return result if sign > 0 else -result


def determinant_of_rows(rows: Rows, ring: PolynomialRing) -> Polynomial:
    """Exact determinant of a square list of polynomial rows."""
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise ValueError("Determinant of a non-square matrix")
    if n == 0:
        return ring.one()
    if n <= COFACTOR_MAX_RANK:
        return _cofactor_determinant(rows, ring)
    if n <= EXACT_MAX_RANK:
        return _bareiss_determinant(rows, ring)
    raise DeterminantRankError(
        f"Exact determinant refused for rank {n} > {EXACT_MAX_RANK}"
    )


def determinant(matrix: GradedMatrix) -> Polynomial:
    if not matrix.is_square:
        raise ValueError("Determinant of a non-square matrix")
    logger.debug("Computing determinant", rank=matrix.num_rows, _verbosity=2)
    return determinant_of_rows(matrix.rows(), matrix.ring)


def _submatrix(rows: Rows, skip_row: int, skip_col: int) -> Rows:
    return [
        [entry for c, entry in enumerate(row) if c != skip_col]
        for r, row in enumerate(rows)
        if r != skip_row
    ]


def adjugate(matrix: GradedMatrix) -> GradedMatrix:
    """Transpose of the cofactor matrix, so that ``M @ adj(M) = det(M) * I``.

    For ``M: ⊕S(-a_i) -> ⊕S(-b_j)`` the adjugate maps ``⊕S(-b_j - D)`` to
    ``⊕S(-a_i)`` with ``D = Σa - Σb`` the degree of the determinant.
    """
    if not matrix.is_square:
        raise ValueError("Adjugate of a non-square matrix")
    ring = matrix.ring
    rows = matrix.rows()
    n = len(rows)
    entries = []
    for i in range(n):
        entry_row = []
        for j in range(n):
            cofactor = determinant_of_rows(_submatrix(rows, j, i), ring)
            entry_row.append(cofactor if (i + j) % 2 == 0 else -cofactor)
        entries.append(entry_row)
    degree = sum(matrix.source.twists) - sum(matrix.target.twists)
    return GradedMatrix(ring, matrix.target.shift(degree), matrix.source, entries)


def pfaffian_of_rows(rows: Rows, ring: PolynomialRing) -> Polynomial:
    n = len(rows)
    if n % 2:
        return ring.zero()
    if n == 0:
        return ring.one()
    result = ring.zero()
    for j in range(1, n):
        entry = rows[0][j]
        if not entry:
            continue
        keep = [k for k in range(1, n) if k != j]
        term = entry * pfaffian_of_rows([[rows[a][b] for b in keep] for a in keep], ring)
        result = result + term if j % 2 else result - term
    return result


def pfaffian(matrix: GradedMatrix) -> Polynomial:
    """Pfaffian of a skew-symmetric matrix, expanded along the first row."""
    if not matrix.is_skew_symmetric():
        raise ValueError("Pfaffian of a matrix that is not skew-symmetric")
    return pfaffian_of_rows(matrix.rows(), matrix.ring)


def scalar_determinant(rows: List[List[FieldScalar]], ring: PolynomialRing) -> FieldScalar:
    field = ring.field
    work = [list(row) for row in rows]
    n = len(work)
    result = field.one
    for k in range(n):
        pivot_row = next((i for i in range(k, n) if work[i][k] != field.zero), None)
        if pivot_row is None:
            return field.zero
        if pivot_row != k:
            work[k], work[pivot_row] = work[pivot_row], work[k]
            result = field.neg(result)
        pivot = work[k][k]
        result = field.mul(result, pivot)
        inverse = field.inv(pivot)
        for i in range(k + 1, n):
            factor = field.mul(work[i][k], inverse)
            if factor == field.zero:
                continue
            for j in range(k, n):
                work[i][j] = field.sub(work[i][j], field.mul(factor, work[k][j]))
    return result


def _sample_point(ring: PolynomialRing, rng: random.Random) -> List[FieldScalar]:
    field = ring.field
    if field.characteristic:
        return [field.random_element(rng) for _ in range(ring.num_vars)]
    return [
        field.convert(rng.randint(-RATIONAL_SAMPLE_BOUND, RATIONAL_SAMPLE_BOUND))
        for _ in range(ring.num_vars)
    ]


def randomized_det_check(
    matrix: GradedMatrix,
    f: Polynomial,
    r: int,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
) -> bool:
    """Test ``det(M) = c * f^r`` for one nonzero scalar ``c`` at random points.

    Points where ``f`` vanishes are skipped; the check fails with
    :class:`DegenerateSamplingError` when too many of them do.
    """
    if not matrix.is_square:
        raise ValueError("Determinant of a non-square matrix")
    ring = matrix.ring
    field = ring.field
    rng = random.Random(seed)
    scalar: Optional[FieldScalar] = None
    accepted = 0
    for _ in range(RESAMPLE_FACTOR * max(trials, 1)):
        if accepted >= trials:
            break
        point = _sample_point(ring, rng)
        f_power = field.power(f.evaluate(point), r)
        if f_power == field.zero:
            continue
        accepted += 1
        ratio = field.div(scalar_determinant(matrix.evaluate(point), ring), f_power)
        if scalar is None:
            scalar = ratio
        if ratio == field.zero or ratio != scalar:
            logger.warning(
                "Randomized determinant check failed", trial=accepted, rank=matrix.num_rows
            )
            return False
    if accepted < trials:
        raise DegenerateSamplingError(
            f"Only {accepted} of {trials} sample points avoided the zero set of f"
        )
    return True

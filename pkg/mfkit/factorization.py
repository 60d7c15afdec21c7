"""Construction and verification of graded matrix factorizations.

Conventions: ``phi: G -> F`` and ``psi: F(-d) -> G`` where ``d = deg f``. In
twist lists this means ``psi.target == phi.source`` and
``psi.source == phi.target + d``.
"""

import itertools
from typing import List, Optional, Tuple

from structlog import get_logger

from .fields import QQ, Field, FieldScalar
from .matrix import (
    GradedFreeModule,
    GradedMatrix,
    adjugate,
    block_matrix,
    determinant,
    pfaffian_of_rows,
    scalar_identity,
)
from .models import DegreeMismatch, MatrixFactorization, StrengthDecomposition
from .poly import Polynomial, PolynomialRing
from .report import VerificationReport, Violation

logger = get_logger()

ADJUGATE_SIZES = range(2, 6)
PFAFFIAN_SIZES = (4, 6)


class NotAPowerOfF(ArithmeticError):
    pass


def _product_violation(
    name: str, product: GradedMatrix, f: Polynomial
) -> Optional[Violation]:
    ring = f.ring
    for row, entries in enumerate(product.entries):
        for col, entry in enumerate(entries):
            expected = f if row == col else ring.zero()
            if entry != expected:
                return Violation(
                    check="products",
                    matrix=name,
                    row=row,
                    col=col,
                    expected=str(expected),
                    actual=str(entry),
                )
    return None


def _graded_violation(mf: MatrixFactorization) -> Optional[Violation]:
    phi, psi = mf.phi, mf.psi
    if psi.target != phi.source:
        return Violation(
            check="graded",
            matrix="psi",
            expected=f"target twists {list(phi.source.twists)}",
            actual=f"target twists {list(psi.target.twists)}",
        )
    shifted = phi.target.shift(mf.degree)
    if psi.source != shifted:
        return Violation(
            check="graded",
            matrix="psi",
            expected=f"source twists {list(shifted.twists)}",
            actual=f"source twists {list(psi.source.twists)}",
        )
    for name, matrix in (("phi", phi), ("psi", psi)):
        violation = matrix.degree_violation()
        if violation is not None:
            row, col, expected, actual = violation
            return Violation(
                check="graded",
                matrix=name,
                row=row,
                col=col,
                expected=f"degree {expected}",
                actual="inhomogeneous" if actual is None else f"degree {actual}",
            )
    return None


def _reduced_violation(mf: MatrixFactorization) -> Optional[Violation]:
    for name, matrix in (("phi", mf.phi), ("psi", mf.psi)):
        unit = matrix.unit_entry()
        if unit is not None:
            row, col = unit
            return Violation(
                check="reduced",
                matrix=name,
                row=row,
                col=col,
                expected="no constant term",
                actual=str(matrix[row, col]),
            )
    return None


def verify(mf: MatrixFactorization) -> VerificationReport:
    """Check both product identities, the grading and reducedness.

    Never raises on a bad factorization; the report carries the first
    violation found.
    """
    product_violation = _product_violation(
        "phi*psi", mf.phi @ mf.psi, mf.f
    ) or _product_violation("psi*phi", mf.psi @ mf.phi, mf.f)
    graded_violation = _graded_violation(mf)
    reduced_violation = _reduced_violation(mf)
    witness = product_violation or graded_violation or reduced_violation
    if witness is not None:
        logger.warning("Matrix factorization check failed", witness=witness)
    return VerificationReport(
        rank=mf.rank,
        products_ok=product_violation is None,
        graded_ok=graded_violation is None,
        reduced_ok=reduced_violation is None,
        witness=witness,
    )


def tensor_step(mf: MatrixFactorization, g: Polynomial, h: Polynomial) -> MatrixFactorization:
    """Factorization of ``f + g h`` of twice the rank.

    ``alpha' = [[alpha, g I], [h I, -beta]]`` and
    ``beta' = [[beta, g I], [h I, -alpha]]``.
    """
    ring = mf.ring
    if not (g and h and g.is_homogeneous() and h.is_homogeneous()):
        raise DegreeMismatch("Knörrer factors must be nonzero and homogeneous")
    if g.degree < 1 or h.degree < 1 or g.degree + h.degree != mf.degree:
        raise DegreeMismatch(
            f"Factor degrees {g.degree} + {h.degree} do not match deg f = {mf.degree}"
        )
    alpha, beta = mf.phi, mf.psi
    F, G = alpha.target, alpha.source
    rank = mf.rank
    d = mf.degree

    new_F = F.direct_sum(G.shift(-h.degree))
    new_G = G.direct_sum(F.shift(g.degree))
    g_block = scalar_identity(ring, rank, g)
    h_block = scalar_identity(ring, rank, h)
    new_alpha = block_matrix(
        ring,
        [[alpha.rows(), g_block], [h_block, (-beta).rows()]],
        source=new_G,
        target=new_F,
    )
    new_beta = block_matrix(
        ring,
        [[beta.rows(), g_block], [h_block, (-alpha).rows()]],
        source=new_F.shift(d),
        target=new_G,
    )
    logger.debug("Knörrer step", rank=2 * rank, _verbosity=2)
    return MatrixFactorization(mf.f + g * h, new_alpha, new_beta)


def knorrer_build(decomposition: StrengthDecomposition) -> MatrixFactorization:
    """Rank ``2^s`` reduced factorization of ``Σ g_i h_i``."""
    ring = decomposition.ring
    g0, h0 = decomposition.gs[0], decomposition.hs[0]
    F = GradedFreeModule((0,))
    G = GradedFreeModule((g0.degree,))
    mf = MatrixFactorization(
        g0 * h0,
        GradedMatrix(ring, G, F, [[g0]]),
        GradedMatrix(ring, F.shift(decomposition.degree), G, [[h0]]),
    )
    for g, h in zip(decomposition.gs[1:], decomposition.hs[1:]):
        mf = tensor_step(mf, g, h)
    return mf


def mcm_rank_of(mf: MatrixFactorization) -> Tuple[int, FieldScalar]:
    """Return ``(r, c)`` with ``det(phi) = c * f^r``."""
    f = mf.f
    if f.degree < 1:
        raise NotAPowerOfF("f must have positive degree")
    quotient = determinant(mf.phi)
    if not quotient:
        raise NotAPowerOfF("det(phi) is zero")
    r = 0
    while not quotient.is_constant:
        divided = quotient.exact_divide(f)
        if divided is None:
            raise NotAPowerOfF(f"det(phi) is not a scalar times a power of {f}")
        quotient = divided
        r += 1
    return r, quotient.constant_coefficient


def _matrix_ring(names: List[str], field: Field) -> PolynomialRing:
    return PolynomialRing(field, len(names), names)


def generic_matrix(n: int, field: Field = QQ) -> GradedMatrix:
    """The ``n x n`` matrix of variables ``x11 .. xnn`` as a map of linear degree."""
    names = [f"x{i}{j}" for i in range(1, n + 1) for j in range(1, n + 1)]
    ring = _matrix_ring(names, field)
    return GradedMatrix(
        ring,
        GradedFreeModule((1,) * n),
        GradedFreeModule((0,) * n),
        [[ring.variable(f"x{i}{j}") for j in range(1, n + 1)] for i in range(1, n + 1)],
    )


def adjugate_mf(n: int, field: Field = QQ) -> MatrixFactorization:
    """``(M, adj M)`` for the generic ``n x n`` matrix, a factorization of ``det M``."""
    if n not in ADJUGATE_SIZES:
        raise ValueError(f"Generic matrix size must be in 2..5, got {n}")
    matrix = generic_matrix(n, field)
    return MatrixFactorization(determinant(matrix), matrix, adjugate(matrix))


def generic_skew_matrix(n: int, field: Field = QQ) -> GradedMatrix:
    """The generic skew-symmetric matrix with variables ``xij`` above the diagonal."""
    names = [f"x{i}{j}" for i, j in itertools.combinations(range(1, n + 1), 2)]
    ring = _matrix_ring(names, field)

    def entry(i: int, j: int) -> Polynomial:
        if i == j:
            return ring.zero()
        if i < j:
            return ring.variable(f"x{i}{j}")
        return -ring.variable(f"x{j}{i}")

    return GradedMatrix(
        ring,
        GradedFreeModule((1,) * n),
        GradedFreeModule((0,) * n),
        [[entry(i, j) for j in range(1, n + 1)] for i in range(1, n + 1)],
    )


def pfaffian_mf(n: int, field: Field = QQ) -> MatrixFactorization:
    """``(M, P)`` for the generic skew ``n x n`` matrix with ``M P = Pf(M) I``.

    ``P[j][i] = (-1)^(i+j+1+[i>j]) Pf(M without rows and columns i, j)``.
    """
    if n not in PFAFFIAN_SIZES:
        raise ValueError(f"Pfaffian size must be 4 or 6, got {n}")
    matrix = generic_skew_matrix(n, field)
    ring = matrix.ring
    rows = matrix.rows()
    f = pfaffian_of_rows(rows, ring)

    partner = [[ring.zero()] * n for _ in range(n)]
    for i, j in itertools.permutations(range(n), 2):
        keep = [k for k in range(n) if k not in (i, j)]
        sub = pfaffian_of_rows([[rows[a][b] for b in keep] for a in keep], ring)
        exponent = i + j + 1 + (1 if i > j else 0)
        partner[j][i] = sub if exponent % 2 == 0 else -sub

    psi = GradedMatrix(ring, matrix.target.shift(f.degree), matrix.source, partner)
    return MatrixFactorization(f, matrix, psi)


def extend_mf(mf: MatrixFactorization, new_count: int) -> MatrixFactorization:
    """The same factorization over a ring with more variables."""
    ring = mf.ring.extend(new_count)

    def extend(poly: Polynomial) -> Polynomial:
        return poly.extend_variables(new_count, ring)

    return MatrixFactorization(
        extend(mf.f), mf.phi.map_entries(extend, ring), mf.psi.map_entries(extend, ring)
    )


def restrict_mf(mf: MatrixFactorization, count: int) -> MatrixFactorization:
    """Set the variables with index ``>= count`` to zero everywhere."""
    ring = mf.ring.restrict(count)

    def restrict(poly: Polynomial) -> Polynomial:
        return poly.restrict_variables(count, ring)

    return MatrixFactorization(
        restrict(mf.f),
        mf.phi.map_entries(restrict, ring),
        mf.psi.map_entries(restrict, ring),
    )

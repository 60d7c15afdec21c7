from typing import List, Optional, Sequence, Tuple

import attr

from .matrix import GradedMatrix
from .poly import Polynomial, PolynomialRing, RingMismatchError, polynomial_sum


class InvalidDecomposition(ValueError):
    pass


class DegreeMismatch(InvalidDecomposition):
    pass


@attr.define(frozen=True)
class StrengthDecomposition:
    """``f = Σ g_i h_i`` with ``1 <= deg g_i <= deg h_i`` and a common total degree.

    Use :meth:`create` to accept factors in either order.
    """

    gs: Tuple[Polynomial, ...] = attr.field(converter=tuple)
    hs: Tuple[Polynomial, ...] = attr.field(converter=tuple)

    def __attrs_post_init__(self):
        if not self.gs or len(self.gs) != len(self.hs):
            raise InvalidDecomposition(
                f"Need matching nonempty factor lists, got {len(self.gs)} and {len(self.hs)}"
            )
        ring = self.gs[0].ring
        total = None
        for index, (g, h) in enumerate(zip(self.gs, self.hs)):
            if g.ring != ring or h.ring != ring:
                raise RingMismatchError("Decomposition factors from different rings")
            if not g or not h:
                raise InvalidDecomposition(f"Summand {index} has a zero factor")
            if not (g.is_homogeneous() and h.is_homogeneous()):
                raise InvalidDecomposition(f"Summand {index} has an inhomogeneous factor")
            if not 1 <= g.degree <= h.degree:
                raise DegreeMismatch(
                    f"Summand {index} has factor degrees {g.degree}, {h.degree}"
                )
            if total is None:
                total = g.degree + h.degree
            elif g.degree + h.degree != total:
                raise DegreeMismatch(
                    f"Summand {index} has degree {g.degree + h.degree}, expected {total}"
                )

    @classmethod
    def create(
        cls, gs: Sequence[Polynomial], hs: Sequence[Polynomial]
    ) -> "StrengthDecomposition":
        """Build a decomposition, swapping each pair so ``g`` has the smaller degree."""
        if len(gs) != len(hs):
            raise InvalidDecomposition("Factor lists differ in length")
        pairs = [(g, h) if g.degree <= h.degree else (h, g) for g, h in zip(gs, hs)]
        return cls([g for g, _ in pairs], [h for _, h in pairs])

    @property
    def ring(self) -> PolynomialRing:
        return self.gs[0].ring

    @property
    def s(self) -> int:
        """Number of summands minus one."""
        return len(self.gs) - 1

    @property
    def degree(self) -> int:
        return self.gs[0].degree + self.hs[0].degree

    @property
    def f(self) -> Polynomial:
        return polynomial_sum((g * h for g, h in zip(self.gs, self.hs)), self.ring)

    @property
    def mu(self) -> Tuple[int, ...]:
        return tuple(sorted(g.degree for g in self.gs))

    def factors(self) -> List[Polynomial]:
        return list(self.gs) + list(self.hs)

    def extend_variables(self, new_count: int) -> "StrengthDecomposition":
        ring = self.ring.extend(new_count)
        return StrengthDecomposition(
            [g.extend_variables(new_count, ring) for g in self.gs],
            [h.extend_variables(new_count, ring) for h in self.hs],
        )


@attr.define(frozen=True)
class MatrixFactorization:
    """A pair ``phi: G -> F`` and ``psi: F(-d) -> G`` with ``phi psi = f I``, ``psi phi = f I``.

    Only shapes are checked here; :func:`mfkit.factorization.verify` checks the
    identities, the grading and reducedness.
    """

    f: Polynomial
    phi: GradedMatrix
    psi: GradedMatrix

    def __attrs_post_init__(self):
        if not (self.phi.ring == self.psi.ring == self.f.ring):
            raise RingMismatchError("Matrix factorization parts from different rings")
        if not (self.phi.is_square and self.psi.is_square):
            raise ValueError("Matrix factorization matrices must be square")
        if self.phi.num_rows != self.psi.num_rows:
            raise ValueError(
                f"Ranks differ: phi has {self.phi.num_rows}, psi has {self.psi.num_rows}"
            )

    @property
    def ring(self) -> PolynomialRing:
        return self.f.ring

    @property
    def rank(self) -> int:
        return self.phi.num_rows

    @property
    def degree(self) -> int:
        """Degree of ``f``, read off the twists when ``f`` is zero."""
        if self.f:
            return self.f.degree
        return self.psi.source.twists[0] - self.phi.target.twists[0]


@attr.define(frozen=True)
class ChunkResult:
    """Outcome of scanning candidate indices ``[start, stop)`` of a search."""

    start: int
    stop: int
    hit: Optional[int] = None

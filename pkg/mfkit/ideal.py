"""Gröbner bases of homogeneous ideals and the invariants derived from them.

Buchberger's algorithm works on plain ``{exponents: coefficient}`` dicts with
monic basis elements.  S-pairs are taken in the normal strategy order (degree
of the lcm, then pair indices) and pruned by the coprime and chain criteria,
so the result only depends on the generator order.
"""

import enum
import itertools
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Set, Tuple

import attr
from structlog import get_logger

from .fields import Field, FieldScalar
from .matrix import determinant_of_rows
from .poly import Exponents, Polynomial, PolynomialRing, RingMismatchError, grevlex_key

logger = get_logger()

_Terms = Dict[Exponents, FieldScalar]
_BasisElement = Tuple[Exponents, _Terms]


class InhomogeneousIdealError(ValueError):
    pass


class UnitIdealError(ArithmeticError):
    pass


class TermOrder(enum.Enum):
    GREVLEX = "grevlex"
    GRLEX = "grlex"
    LEX = "lex"

    @property
    def key(self) -> Callable[[Exponents], tuple]:
        if self is TermOrder.GREVLEX:
            return grevlex_key
        if self is TermOrder.GRLEX:
            return lambda e: (sum(e), e)
        return lambda e: e


def _divides(a: Exponents, b: Exponents) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Exponents, b: Exponents) -> Exponents:
    return tuple(max(x, y) for x, y in zip(a, b))


def _shift(a: Exponents, b: Exponents) -> Exponents:
    return tuple(x - y for x, y in zip(a, b))


def _subtract_multiple(
    terms: _Terms, element: _Terms, shift: Exponents, factor: FieldScalar, field: Field
):
    zero = field.zero
    for exponents, coefficient in element.items():
        target = tuple(x + y for x, y in zip(exponents, shift))
        value = field.sub(terms.get(target, zero), field.mul(factor, coefficient))
        if value == zero:
            terms.pop(target, None)
        else:
            terms[target] = value


def _reduce(
    terms: _Terms,
    basis: Sequence[_BasisElement],
    field: Field,
    key: Callable[[Exponents], tuple],
) -> _Terms:
    """Fully reduce ``terms`` by a list of monic basis elements."""
    work = dict(terms)
    remainder: _Terms = {}
    while work:
        lead = max(work, key=key)
        coefficient = work[lead]
        for element_lead, element in basis:
            if _divides(element_lead, lead):
                _subtract_multiple(
                    work, element, _shift(lead, element_lead), coefficient, field
                )
                break
        else:
            remainder[lead] = coefficient
            del work[lead]
    return remainder


def _monic(
    terms: _Terms, field: Field, key: Callable[[Exponents], tuple]
) -> _BasisElement:
    lead = max(terms, key=key)
    inverse = field.inv(terms[lead])
    return lead, {e: field.mul(c, inverse) for e, c in terms.items()}


def _s_polynomial(
    first: _BasisElement, second: _BasisElement, lcm: Exponents, field: Field
) -> _Terms:
    result: _Terms = {}
    _subtract_multiple(result, first[1], _shift(lcm, first[0]), field.neg(field.one), field)
    _subtract_multiple(result, second[1], _shift(lcm, second[0]), field.one, field)
    return result


def _buchberger(
    generators: Iterable[_Terms], field: Field, key: Callable[[Exponents], tuple]
) -> List[_BasisElement]:
    basis: List[_BasisElement] = []
    pairs: Set[Tuple[int, int]] = set()

    def add(terms: _Terms) -> bool:
        element = _monic(terms, field, key)
        pairs.update((i, len(basis)) for i in range(len(basis)))
        basis.append(element)
        return not any(element[0])

    for generator in generators:
        remainder = _reduce(generator, basis, field, key)
        if remainder and add(remainder):
            return [basis[-1]]

    reductions = 0
    while pairs:
        i, j = min(
            pairs, key=lambda ij: (sum(_lcm(basis[ij[0]][0], basis[ij[1]][0])), ij)
        )
        pairs.remove((i, j))
        lead_i, lead_j = basis[i][0], basis[j][0]
        lcm = _lcm(lead_i, lead_j)
        if all(a == 0 or b == 0 for a, b in zip(lead_i, lead_j)):
            continue
        if any(
            k not in (i, j)
            and _divides(basis[k][0], lcm)
            and (min(i, k), max(i, k)) not in pairs
            and (min(j, k), max(j, k)) not in pairs
            for k in range(len(basis))
        ):
            continue
        reductions += 1
        remainder = _reduce(_s_polynomial(basis[i], basis[j], lcm, field), basis, field, key)
        if remainder and add(remainder):
            return [basis[-1]]

    logger.debug(
        "Buchberger finished", basis_size=len(basis), reductions=reductions, _verbosity=3
    )
    return basis


def _reduced(
    basis: List[_BasisElement], field: Field, key: Callable[[Exponents], tuple]
) -> List[_BasisElement]:
    minimal: List[_BasisElement] = []
    for element in sorted(basis, key=lambda element: key(element[0])):
        if not any(_divides(kept[0], element[0]) for kept in minimal):
            minimal.append(element)

    reduced = []
    for index, (lead, terms) in enumerate(minimal):
        others = minimal[:index] + minimal[index + 1 :]
        reduced.append((lead, _reduce(terms, others, field, key)))
    reduced.sort(key=lambda element: key(element[0]), reverse=True)
    return reduced


@attr.define(frozen=True)
class GroebnerBasis:
    """A reduced Gröbner basis with respect to ``order``."""

    ring: PolynomialRing
    order: TermOrder
    polynomials: Tuple[Polynomial, ...]
    leading_monomials: Tuple[Exponents, ...]

    @property
    def is_unit(self) -> bool:
        return any(not any(lead) for lead in self.leading_monomials)

    @property
    def is_zero(self) -> bool:
        return not self.polynomials

    def __len__(self) -> int:
        return len(self.polynomials)

    def __iter__(self):
        return iter(self.polynomials)

    def normal_form(self, poly: Polynomial) -> Polynomial:
        return normal_form(poly, self)

    def contains(self, poly: Polynomial) -> bool:
        return normal_form(poly, self).is_zero


def _nonzero(generators: Iterable[Polynomial]) -> Tuple[Polynomial, ...]:
    return tuple(g for g in generators if g)


@attr.define(frozen=True)
class Ideal:
    """A homogeneous ideal given by generators.

    Zero generators are dropped. The grevlex basis is computed on first use and
    cached.
    """

    ring: PolynomialRing
    generators: Tuple[Polynomial, ...] = attr.field(converter=_nonzero)
    _basis: Optional[GroebnerBasis] = attr.field(
        default=None, init=False, eq=False, repr=False
    )

    def __attrs_post_init__(self):
        for generator in self.generators:
            if generator.ring != self.ring:
                raise RingMismatchError("Ideal generator from a different ring")
            if not generator.is_homogeneous():
                raise InhomogeneousIdealError(f"Inhomogeneous generator: {generator}")

    @classmethod
    def of(cls, generators: Sequence[Polynomial]) -> "Ideal":
        if not generators:
            raise ValueError("Ring is ambiguous for an empty generator list")
        return cls(generators[0].ring, generators)

    @property
    def num_vars(self) -> int:
        return self.ring.num_vars

    def groebner_basis(self, order: TermOrder = TermOrder.GREVLEX) -> GroebnerBasis:
        if order is not TermOrder.GREVLEX:
            return groebner_basis(self, order)
        if self._basis is None:
            object.__setattr__(self, "_basis", groebner_basis(self, order))
        return self._basis  # type: ignore

    def contains(self, poly: Polynomial) -> bool:
        return self.groebner_basis().contains(poly)

    def __add__(self, other: "Ideal") -> "Ideal":
        if other.ring != self.ring:
            raise RingMismatchError("Cannot add ideals from different rings")
        return Ideal(self.ring, self.generators + other.generators)

    def extend_variables(self, new_count: int) -> "Ideal":
        ring = self.ring.extend(new_count)
        return Ideal(ring, [g.extend_variables(new_count, ring) for g in self.generators])


def groebner_basis(ideal: Ideal, order: TermOrder = TermOrder.GREVLEX) -> GroebnerBasis:
    ring = ideal.ring
    key = order.key
    logger.debug(
        "Computing Gröbner basis",
        generators=len(ideal.generators),
        num_vars=ring.num_vars,
        order=order.value,
        _verbosity=2,
    )
    basis = _reduced(
        _buchberger((g.as_dict() for g in ideal.generators), ring.field, key),
        ring.field,
        key,
    )
    return GroebnerBasis(
        ring=ring,
        order=order,
        polynomials=tuple(ring.from_dict(terms) for _lead, terms in basis),
        leading_monomials=tuple(lead for lead, _terms in basis),
    )


def normal_form(poly: Polynomial, basis: GroebnerBasis) -> Polynomial:
    """Remainder of ``poly`` on division by ``basis``; zero iff ``poly`` is in the ideal."""
    if poly.ring != basis.ring:
        raise RingMismatchError("Polynomial and basis live in different rings")
    elements = [
        (lead, p.as_dict()) for lead, p in zip(basis.leading_monomials, basis.polynomials)
    ]
    return basis.ring.from_dict(
        _reduce(poly.as_dict(), elements, basis.ring.field, basis.order.key)
    )


def _bitmask(exponents: Exponents) -> int:
    return sum(1 << i for i, x in enumerate(exponents) if x)


def _min_hitting_set(supports: List[int], num_vars: int) -> int:
    best = num_vars

    def search(chosen: int, size: int):
        nonlocal best
        if size >= best:
            return
        unhit = next((s for s in supports if not s & chosen), None)
        if unhit is None:
            best = size
            return
        for i in range(num_vars):
            if unhit >> i & 1:
                search(chosen | 1 << i, size + 1)

    search(0, 0)
    return best


def dimension(ideal: Ideal) -> int:
    """Krull dimension of ``R/I``.

    The largest set of variables containing the support of no leading monomial
    is the complement of a minimum set of variables meeting every support.
    """
    basis = ideal.groebner_basis()
    if basis.is_unit:
        raise UnitIdealError("The unit ideal has no dimension")
    supports = sorted({_bitmask(lead) for lead in basis.leading_monomials})
    return ideal.num_vars - _min_hitting_set(supports, ideal.num_vars)


def codimension(ideal: Ideal) -> int:
    return ideal.num_vars - dimension(ideal)


def jacobian_minors_ideal(fs: Sequence[Polynomial], r: int) -> Ideal:
    """The ideal of ``r x r`` minors of the Jacobian matrix of ``fs``."""
    if not fs:
        raise ValueError("Empty polynomial list")
    ring = fs[0].ring
    if not 1 <= r <= min(len(fs), ring.num_vars):
        raise ValueError(f"Minor size {r} out of range")
    jacobian = [f.gradient() for f in fs]
    minors = [
        determinant_of_rows([[jacobian[i][j] for j in columns] for i in rows], ring)
        for rows in itertools.combinations(range(len(fs)), r)
        for columns in itertools.combinations(range(ring.num_vars), r)
    ]
    logger.debug("Jacobian minors", size=r, count=len(minors), _verbosity=2)
    return Ideal(ring, minors)


def jacobian_ideal(fs: Sequence[Polynomial]) -> Ideal:
    """The ideal of partial derivatives of one form, or of maximal minors of several."""
    if not fs:
        raise ValueError("Empty polynomial list")
    if len(fs) == 1:
        return Ideal(fs[0].ring, fs[0].gradient())
    return jacobian_minors_ideal(fs, len(fs))

"""Sparse exact multivariate polynomials.

A :class:`Polynomial` is an immutable, canonical association from dense
exponent vectors to nonzero field scalars, kept sorted by the graded reverse
lexicographic order (largest term first).  Two equal polynomials always have
identical stored terms, so ``==`` and ``hash`` are structural.
"""

import heapq
import itertools
from fractions import Fraction
from typing import (
    Dict,
    Iterable,
    Iterator,
    List,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import attr

from .fields import QQ, Field, FieldScalar

Exponents = Tuple[int, ...]
Term = Tuple[Exponents, FieldScalar]


class RingMismatchError(ValueError):
    """Operands live in different ambient rings."""


class VariableIndexError(IndexError):
    pass


class _AnyDegree:
    """Degree of the zero polynomial: compatible with every degree."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "ANY_DEGREE"

    def __reduce__(self):
        return (_AnyDegree, ())


ANY_DEGREE = _AnyDegree()

Degree = Union[int, _AnyDegree]


def grevlex_key(exponents: Exponents) -> Tuple[int, Tuple[int, ...]]:
    """Sort key of the graded reverse lexicographic order (bigger is larger)."""
    return sum(exponents), tuple(-e for e in reversed(exponents))


def _descending_key(exponents: Exponents) -> Tuple[int, Tuple[int, ...]]:
    """Ascending in this key means descending in the grevlex order."""
    return -sum(exponents), tuple(reversed(exponents))


def _default_names(ring: "PolynomialRing") -> Tuple[str, ...]:
    return tuple(f"z{i}" for i in range(ring.num_vars))


@attr.define(frozen=True)
class PolynomialRing:
    """The ambient ring ``k[z_0, ..., z_{n-1}]``."""

    field: Field
    num_vars: int = attr.field(validator=attr.validators.ge(0))
    names: Tuple[str, ...] = attr.field(
        default=attr.Factory(_default_names, takes_self=True),
        converter=tuple,
    )

    @names.validator
    def _check_names(self, _attribute, value):
        if len(value) != self.num_vars:
            raise ValueError(
                f"Ring has {self.num_vars} variables but {len(value)} names"
            )
        if len(set(value)) != len(value):
            raise ValueError(f"Duplicate variable names: {value}")

    @property
    def characteristic(self) -> int:
        return self.field.characteristic

    def zero(self) -> "Polynomial":
        return Polynomial(self, ())

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, value: Union[int, Fraction]) -> "Polynomial":
        return self.from_dict({(0,) * self.num_vars: self.field.convert(value)})

    def variable(self, index: Union[int, str]) -> "Polynomial":
        if isinstance(index, str):
            index = self.index_of(index)
        if not 0 <= index < self.num_vars:
            raise VariableIndexError(f"No variable {index} in {self.num_vars} variables")
        exponents = tuple(int(i == index) for i in range(self.num_vars))
        return Polynomial(self, ((exponents, self.field.one),))

    def variables(self) -> List["Polynomial"]:
        return [self.variable(i) for i in range(self.num_vars)]

    def index_of(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise VariableIndexError(f"Unknown variable: {name!r}") from None

    def monomial(
        self, exponents: Sequence[int], coefficient: Union[int, Fraction] = 1
    ) -> "Polynomial":
        return self.from_dict({tuple(exponents): self.field.convert(coefficient)})

    def from_dict(self, terms: Dict[Exponents, FieldScalar]) -> "Polynomial":
        """Build a canonical polynomial, dropping zero coefficients."""
        zero = self.field.zero
        for exponents in terms:
            if len(exponents) != self.num_vars:
                raise RingMismatchError(
                    f"Exponent vector {exponents} does not fit {self.num_vars} variables"
                )
        items = [(e, c) for e, c in terms.items() if c != zero]
        items.sort(key=lambda item: grevlex_key(item[0]), reverse=True)
        return Polynomial(self, tuple(items))

    def extend(self, new_count: int, names: Optional[Sequence[str]] = None):
        if new_count < self.num_vars:
            raise ValueError(
                f"Cannot extend {self.num_vars} variables down to {new_count}"
            )
        if names is None:
            taken = set(self.names)
            extra = []
            i = 0
            while len(extra) < new_count - self.num_vars:
                name = f"z{self.num_vars + i}"
                if name not in taken:
                    extra.append(name)
                i += 1
            names = (*self.names, *extra)
        return PolynomialRing(self.field, new_count, names)

    def restrict(self, count: int) -> "PolynomialRing":
        return PolynomialRing(self.field, count, self.names[:count])

    def monomials_of_degree(self, degree: int) -> List[Exponents]:
        """All exponent vectors of the given total degree, largest first."""
        if degree < 0:
            return []
        if self.num_vars == 0:
            return [()] if degree == 0 else []
        result = [
            tuple(
                b - a - 1
                for a, b in zip((-1, *bars), (*bars, degree + self.num_vars - 1))
            )
            for bars in itertools.combinations(
                range(degree + self.num_vars - 1), self.num_vars - 1
            )
        ]
        result.sort(key=grevlex_key, reverse=True)
        return result


@attr.define(frozen=True)
class Polynomial:
    ring: PolynomialRing
    terms: Tuple[Term, ...]

    @property
    def field(self) -> Field:
        return self.ring.field

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Term]:
        return iter(self.terms)

    def as_dict(self) -> Dict[Exponents, FieldScalar]:
        return dict(self.terms)

    @property
    def leading_term(self) -> Term:
        if not self.terms:
            raise ValueError("Zero polynomial has no leading term")
        return self.terms[0]

    @property
    def leading_monomial(self) -> Exponents:
        return self.leading_term[0]

    @property
    def leading_coefficient(self) -> FieldScalar:
        return self.leading_term[1]

    @property
    def degree(self) -> int:
        """Maximal total degree; -1 for the zero polynomial."""
        return max((sum(e) for e, _ in self.terms), default=-1)

    @property
    def constant_coefficient(self) -> FieldScalar:
        for exponents, coefficient in reversed(self.terms):
            if not any(exponents):
                return coefficient
        return self.field.zero

    @property
    def is_constant(self) -> bool:
        return self.degree <= 0

    def support(self) -> List[int]:
        """Indices of the variables occurring in some term."""
        return [
            i
            for i in range(self.ring.num_vars)
            if any(exponents[i] for exponents, _ in self.terms)
        ]

    def _check_ring(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise RingMismatchError(f"{self.ring} != {other.ring}")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check_ring(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.constant(other)
        return NotImplemented

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        field = self.field
        result = dict(self.terms)
        for exponents, coefficient in other.terms:
            if exponents in result:
                result[exponents] = field.add(result[exponents], coefficient)
            else:
                result[exponents] = coefficient
        return self.ring.from_dict(result)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        neg = self.field.neg
        return Polynomial(self.ring, tuple((e, neg(c)) for e, c in self.terms))

    def __sub__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def scale(self, scalar: FieldScalar) -> "Polynomial":
        field = self.field
        if scalar == field.zero:
            return self.ring.zero()
        return Polynomial(
            self.ring, tuple((e, field.mul(c, scalar)) for e, c in self.terms)
        )

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(self.field.convert(other))
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_ring(other)
        field = self.field
        result: Dict[Exponents, FieldScalar] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                exponents = tuple(a + b for a, b in zip(e1, e2))
                product = field.mul(c1, c2)
                if exponents in result:
                    result[exponents] = field.add(result[exponents], product)
                else:
                    result[exponents] = product
        return self.ring.from_dict(result)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Polynomial":
        if exponent < 0:
            raise ValueError("Negative powers are not polynomials")
        result = self.ring.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def homogeneous_degree(self) -> Optional[Degree]:
        """Return the common degree of all terms.

        ``ANY_DEGREE`` for the zero polynomial, ``None`` when inhomogeneous.
        """
        if not self.terms:
            return ANY_DEGREE
        degrees = {sum(e) for e, _ in self.terms}
        if len(degrees) == 1:
            return degrees.pop()
        return None

    def is_homogeneous(self) -> bool:
        return self.homogeneous_degree() is not None

    def partial_derivative(self, index: int) -> "Polynomial":
        if not 0 <= index < self.ring.num_vars:
            raise VariableIndexError(
                f"Variable index {index} out of range for {self.ring.num_vars} variables"
            )
        field = self.field
        result = {}
        for exponents, coefficient in self.terms:
            power = exponents[index]
            if not power:
                continue
            new_coefficient = field.mul(coefficient, field.convert(power))
            if new_coefficient == field.zero:
                continue
            lowered = list(exponents)
            lowered[index] -= 1
            result[tuple(lowered)] = new_coefficient
        return self.ring.from_dict(result)

    def gradient(self) -> List["Polynomial"]:
        return [self.partial_derivative(i) for i in range(self.ring.num_vars)]

    def evaluate(self, point: Sequence[Union[int, Fraction]]) -> FieldScalar:
        if len(point) != self.ring.num_vars:
            raise ValueError(
                f"Point has {len(point)} coordinates, ring has {self.ring.num_vars} variables"
            )
        field = self.field
        values = [field.convert(v) for v in point]
        total = field.zero
        for exponents, coefficient in self.terms:
            value = coefficient
            for x, power in zip(values, exponents):
                if power:
                    value = field.mul(value, field.power(x, power))
            total = field.add(total, value)
        return total

    def extend_variables(
        self, new_count: int, ring: Optional[PolynomialRing] = None
    ) -> "Polynomial":
        """View the polynomial in a ring with more variables appended."""
        target = ring if ring is not None else self.ring.extend(new_count)
        if target.num_vars != new_count or target.field != self.field:
            raise RingMismatchError(f"{target} is not an extension of {self.ring}")
        if new_count < self.ring.num_vars:
            raise ValueError(
                f"Cannot shrink {self.ring.num_vars} variables to {new_count}"
            )
        padding = (0,) * (new_count - self.ring.num_vars)
        return Polynomial(target, tuple((e + padding, c) for e, c in self.terms))

    def restrict_variables(
        self, count: int, ring: Optional[PolynomialRing] = None
    ) -> "Polynomial":
        """Set every variable with index ``>= count`` to zero."""
        target = ring if ring is not None else self.ring.restrict(count)
        if count > self.ring.num_vars or target.num_vars != count:
            raise RingMismatchError(f"{target} is not a restriction of {self.ring}")
        kept = {e[:count]: c for e, c in self.terms if not any(e[count:])}
        return target.from_dict(kept)

    def relabel(self, ring: PolynomialRing, index_map: Sequence[int]) -> "Polynomial":
        """Move variable ``i`` to variable ``index_map[i]`` of ``ring``."""
        if len(index_map) != self.ring.num_vars or ring.field != self.field:
            raise RingMismatchError(f"Cannot relabel {self.ring} into {ring}")
        result = {}
        for exponents, coefficient in self.terms:
            new_exponents = [0] * ring.num_vars
            for i, power in enumerate(exponents):
                if power:
                    new_exponents[index_map[i]] += power
            result[tuple(new_exponents)] = coefficient
        return ring.from_dict(result)

    def exact_divide(self, divisor: "Polynomial") -> Optional["Polynomial"]:
        """Return ``q`` with ``self == q * divisor``, or ``None``."""
        self._check_ring(divisor)
        if divisor.is_zero:
            raise ZeroDivisionError("Division by the zero polynomial")
        field = self.field
        zero = field.zero
        lead_exponents, lead_coefficient = divisor.leading_term
        lead_inverse = field.inv(lead_coefficient)
        tail = divisor.terms[1:]
        quotient: Dict[Exponents, FieldScalar] = {}
        remainder = dict(self.terms)
        # Min-heap over negated grevlex keys; stale entries are skipped on pop.
        heap = [(_descending_key(e), e) for e in remainder]
        heapq.heapify(heap)
        while heap:
            _key, exponents = heapq.heappop(heap)
            coefficient = remainder.pop(exponents, None)
            if coefficient is None:
                continue
            shift = tuple(a - b for a, b in zip(exponents, lead_exponents))
            if any(s < 0 for s in shift):
                return None
            factor = field.mul(coefficient, lead_inverse)
            quotient[shift] = factor
            for tail_exponents, tail_coefficient in tail:
                target = tuple(a + b for a, b in zip(tail_exponents, shift))
                current = remainder.get(target)
                value = field.sub(
                    zero if current is None else current,
                    field.mul(factor, tail_coefficient),
                )
                if value == zero:
                    remainder.pop(target, None)
                    continue
                if current is None:
                    heapq.heappush(heap, (_descending_key(target), target))
                remainder[target] = value
        return self.ring.from_dict(quotient)

    def __str__(self) -> str:
        return format_polynomial(self)


def _format_monomial(names: Sequence[str], exponents: Exponents) -> str:
    return "*".join(
        name if power == 1 else f"{name}^{power}"
        for name, power in zip(names, exponents)
        if power
    )


def format_polynomial(poly: Polynomial) -> str:
    """Canonical text form, terms in the global monomial order."""
    if poly.is_zero:
        return "0"
    field = poly.field
    pieces = []
    for exponents, coefficient in poly.terms:
        negative = field.is_negative(coefficient)
        magnitude = field.neg(coefficient) if negative else coefficient
        monomial = _format_monomial(poly.ring.names, exponents)
        if not monomial:
            body = field.to_string(magnitude)
        elif magnitude == field.one:
            body = monomial
        else:
            body = f"{field.to_string(magnitude)}*{monomial}"
        if not pieces:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f"- {body}" if negative else f"+ {body}")
    return " ".join(pieces)


def polynomial_sum(polys: Iterable[Polynomial], ring: PolynomialRing) -> Polynomial:
    field = ring.field
    result: Dict[Exponents, FieldScalar] = {}
    for poly in polys:
        for exponents, coefficient in poly.terms:
            if exponents in result:
                result[exponents] = field.add(result[exponents], coefficient)
            else:
                result[exponents] = coefficient
    return ring.from_dict(result)


def default_ring(num_vars: int, field: Field = QQ) -> PolynomialRing:
    return PolynomialRing(field, num_vars)

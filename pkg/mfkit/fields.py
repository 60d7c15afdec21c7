"""Exact coefficient fields.

Scalars are plain Python values: :class:`fractions.Fraction` over the
rationals, and canonical ``int`` representatives in ``[0, p)`` over a prime
field.  A field object carries the arithmetic, so polynomials never wrap
individual coefficients.
"""

import abc
import random
from fractions import Fraction
from typing import Union

import attr

FieldScalar = Union[Fraction, int]

MAX_PRIME = 2**31


class FieldError(ValueError):
    pass


class Field(abc.ABC):
    """A coefficient field of an ambient polynomial ring."""

    @property
    @abc.abstractmethod
    def characteristic(self) -> int: ...

    @property
    @abc.abstractmethod
    def zero(self) -> FieldScalar: ...

    @property
    @abc.abstractmethod
    def one(self) -> FieldScalar: ...

    @abc.abstractmethod
    def convert(self, value: Union[int, Fraction]) -> FieldScalar:
        """Map an integer or rational into the field.

        Raises ``ZeroDivisionError`` when a denominator is not invertible.
        """

    @abc.abstractmethod
    def add(self, a: FieldScalar, b: FieldScalar) -> FieldScalar: ...

    @abc.abstractmethod
    def sub(self, a: FieldScalar, b: FieldScalar) -> FieldScalar: ...

    @abc.abstractmethod
    def mul(self, a: FieldScalar, b: FieldScalar) -> FieldScalar: ...

    @abc.abstractmethod
    def neg(self, a: FieldScalar) -> FieldScalar: ...

    @abc.abstractmethod
    def inv(self, a: FieldScalar) -> FieldScalar: ...

    @abc.abstractmethod
    def random_element(self, rng: random.Random) -> FieldScalar:
        """Draw a pseudorandom element, possibly zero."""

    @abc.abstractmethod
    def to_string(self, a: FieldScalar) -> str: ...

    @abc.abstractmethod
    def tag(self) -> str:
        """Return the serialized field name (``Q`` or ``Fp:<p>``)."""

    def div(self, a: FieldScalar, b: FieldScalar) -> FieldScalar:
        return self.mul(a, self.inv(b))

    def power(self, a: FieldScalar, exponent: int) -> FieldScalar:
        result = self.one
        base = a
        while exponent:
            if exponent & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            exponent >>= 1
        return result

    def is_negative(self, a: FieldScalar) -> bool:  # noqa: ARG002
        """Whether ``a`` should be printed with a leading minus sign."""
        return False


@attr.define(frozen=True)
class RationalField(Field):
    """The rationals, with arbitrary precision numerators and denominators."""

    @property
    def characteristic(self) -> int:
        return 0

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def convert(self, value: Union[int, Fraction]) -> Fraction:
        return Fraction(value)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("Zero has no inverse in Q")
        return 1 / Fraction(a)

    def random_element(self, rng: random.Random) -> Fraction:
        return Fraction(rng.randint(-3, 3))

    def to_string(self, a) -> str:
        return str(Fraction(a))

    def is_negative(self, a) -> bool:
        return a < 0

    def tag(self) -> str:
        return "Q"


def _is_prime(n: int) -> bool:
    if n < 2:  # noqa: PLR2004
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@attr.define(frozen=True)
class PrimeField(Field):
    """The field with ``p`` elements, ``p`` a prime below 2**31."""

    p: int = attr.field()

    @p.validator
    def _check_prime(self, _attribute, value):
        if not (value < MAX_PRIME and _is_prime(value)):
            raise FieldError(f"Not a supported prime: {value}")

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def convert(self, value: Union[int, Fraction]) -> int:
        value = Fraction(value)
        if value.denominator % self.p == 0:
            raise ZeroDivisionError(
                f"Denominator {value.denominator} is not invertible modulo {self.p}"
            )
        return value.numerator * pow(value.denominator, self.p - 2, self.p) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError(f"Zero has no inverse in F_{self.p}")
        return pow(a, self.p - 2, self.p)

    def random_element(self, rng: random.Random) -> int:
        return rng.randrange(self.p)

    def to_string(self, a) -> str:
        return str(a)

    def tag(self) -> str:
        return f"Fp:{self.p}"


QQ = RationalField()


def parse_field(tag: str) -> Field:
    """Parse ``Q`` or ``Fp:<p>``."""
    tag = tag.strip()
    if tag in ("Q", "QQ"):
        return QQ
    prefix, sep, value = tag.partition(":")
    if prefix.lower() == "fp" and sep:
        try:
            return PrimeField(int(value))
        except ValueError as e:
            raise FieldError(f"Invalid field: {tag!r}") from e
    raise FieldError(f"Invalid field: {tag!r}")

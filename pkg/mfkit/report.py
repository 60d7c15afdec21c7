import enum
import math
from fractions import Fraction
from typing import List, Optional, Tuple, Union

import attr

from .poly import Polynomial

Strength = Union[int, float]
"""A strength value; ``math.inf`` stands for infinite strength."""

INFINITE = math.inf


def format_strength(value: Optional[Strength]):
    if isinstance(value, float) and math.isinf(value):
        return "infinite"
    return value


def _serialize(_inst, _field, value):
    if isinstance(value, Polynomial):
        return str(value)
    if isinstance(value, (tuple, list)) and any(isinstance(v, Polynomial) for v in value):
        return [str(v) for v in value]
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, enum.Enum):
        return value.value
    return format_strength(value)


@attr.define(kw_only=True, frozen=True)
class Report:
    """A common base class for different reports."""

    def asdict(self) -> dict:
        return attr.asdict(self, value_serializer=_serialize)


@attr.define(kw_only=True, frozen=True)
class Violation(Report):
    """The first failed check of a matrix factorization."""

    check: str
    matrix: str
    row: Optional[int] = None
    col: Optional[int] = None
    expected: str
    actual: str


@attr.define(kw_only=True, frozen=True)
class VerificationReport(Report):
    rank: int
    products_ok: bool
    graded_ok: bool
    reduced_ok: bool
    witness: Optional[Violation] = None

    @property
    def passed(self) -> bool:
        return self.products_ok and self.graded_ok and self.reduced_ok


@attr.define(kw_only=True, frozen=True)
class McmRankReport(Report):
    r: int
    c: str
    rank: int


@attr.define(kw_only=True, frozen=True)
class RandomizedCheckReport(Report):
    rank: int
    r: int
    trials: int
    seed: int
    passed: bool


@attr.define(kw_only=True, frozen=True)
class SingularityProfile(Report):
    f: Polynomial
    degree: int
    jacobian_codim: int
    """Codimension of the Jacobian ideal plus ``f`` in the polynomial ring."""
    sing_codim: int
    """Codimension of the singular locus inside the hypersurface ring."""
    e: int
    strength_lower: Strength


@attr.define(kw_only=True, frozen=True)
class StrengthCertificate(Report):
    polys: Tuple[Polynomial, ...] = attr.field(converter=tuple)
    minors_codim: int
    certified_collective_lower: Strength


@attr.define(kw_only=True, frozen=True)
class StrengthInterval(Report):
    lower: Strength
    upper: Optional[Strength]


@attr.define(kw_only=True, frozen=True)
class AnalysisReport(Report):
    f: Polynomial
    degree: int
    jacobian_codim: int
    sing_codim: int
    e: int
    strength_lower: Strength
    strength_upper: Optional[Strength]
    bgs_mf_threshold: int
    bgs_mcm_threshold: int


@attr.define(kw_only=True, frozen=True)
class GapReport(Report):
    s: int
    e: int
    holds: bool
    bgs_mf_threshold: int
    """``2^(e+1)``."""
    bgs_mcm_threshold: int
    """``2^e``, clamped to 1 when ``e = -1``."""


@attr.define(kw_only=True, frozen=True)
class BGSReport(Report):
    f: Polynomial
    s_exhibited: int
    e: int
    strength_lower: Strength
    strength_upper: Strength
    mf_rank_upper: int
    mcm_rank_upper: int
    bgs_mf_threshold: int
    bgs_mcm_threshold: int
    """Clamped to 1 like :attr:`GapReport.bgs_mcm_threshold`."""
    consistent: bool


@attr.define(kw_only=True, frozen=True)
class SearchReport(Report):
    rank: int
    pattern: Optional[Tuple[List[int], List[int]]]
    """Twists of the hit, or ``None`` when nothing was found."""
    patterns_searched: int
    candidates: int
    found: bool

    @property
    def exhaustive(self) -> bool:
        return not self.found


@attr.define(kw_only=True, frozen=True)
class RankGapReport(Report):
    """Rank of an exhibited factorization against the Knörrer rank ``2^s``."""

    mf_rank_upper: int
    knorrer_rank: int

    @property
    def gap(self) -> bool:
        return self.mf_rank_upper < self.knorrer_rank

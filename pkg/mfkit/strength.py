"""Strength invariants certified by codimension computations.

All codimensions are taken in the ambient polynomial ring. For a form ``f``
the singular locus of the hypersurface ring is cut out by the partials and
``f`` itself, so its codimension inside ``R/f`` is one less than the
codimension of that ideal in ``R``.
"""

from typing import Optional, Sequence, Tuple

from structlog import get_logger

from .ideal import Ideal, UnitIdealError, codimension, jacobian_ideal, jacobian_minors_ideal
from .models import StrengthDecomposition
from .poly import Polynomial
from .report import (
    INFINITE,
    AnalysisReport,
    BGSReport,
    GapReport,
    SingularityProfile,
    Strength,
    StrengthCertificate,
    StrengthInterval,
)

logger = get_logger()


class UnsupportedCharacteristic(ValueError):
    pass


class DegenerateDecomposition(ValueError):
    pass


def bgs_thresholds(e: int) -> Tuple[int, int]:
    """Conjectured lower bounds ``(2^(e+1), 2^e)`` for MF-rank and MCM-rank.

    ``e = -1`` happens when the singular locus has codimension at most 1; the
    MCM bound ``2^-1`` is clamped to 1 there.
    """
    return 2 ** max(e + 1, 0), 2 ** max(e, 0)


def singularity_profile(f: Polynomial) -> SingularityProfile:
    if not f or not f.is_homogeneous() or f.degree < 2:  # noqa: PLR2004
        raise ValueError(f"Need a homogeneous form of degree >= 2, got {f}")
    ideal = jacobian_ideal([f]) + Ideal(f.ring, [f])
    jacobian_codim = codimension(ideal)
    sing_codim = jacobian_codim - 1
    profile = SingularityProfile(
        f=f,
        degree=f.degree,
        jacobian_codim=jacobian_codim,
        sing_codim=sing_codim,
        e=(sing_codim - 2) // 2,
        strength_lower=-(-(sing_codim - 1) // 2),
    )
    logger.debug(
        "Singularity profile", jacobian_codim=jacobian_codim, e=profile.e, _verbosity=2
    )
    return profile


def collective_strength_certificate(fs: Sequence[Polynomial]) -> StrengthCertificate:
    """Lower bound ``ceil(c / 2) - 1`` on collective strength.

    ``c`` is the codimension of the ideal of maximal minors of the Jacobian
    matrix of ``fs``. A unit minors ideal certifies infinite strength.
    """
    if not fs:
        raise ValueError("Empty polynomial list")
    ring = fs[0].ring
    if len(fs) > ring.num_vars:
        logger.warning(
            "More forms than variables, no maximal minors", forms=len(fs), num_vars=ring.num_vars
        )
        return StrengthCertificate(polys=fs, minors_codim=0, certified_collective_lower=-1)
    minors = jacobian_minors_ideal(fs, len(fs))
    try:
        minors_codim = codimension(minors)
    except UnitIdealError:
        return StrengthCertificate(
            polys=fs, minors_codim=ring.num_vars, certified_collective_lower=INFINITE
        )
    return StrengthCertificate(
        polys=fs,
        minors_codim=minors_codim,
        certified_collective_lower=-(-minors_codim // 2) - 1,
    )


def secondary_strength_bound(decomposition: StrengthDecomposition) -> Strength:
    """Certified lower bound on the collective strength of all factors."""
    return collective_strength_certificate(
        decomposition.factors()
    ).certified_collective_lower


def _symmetric_rank(q: Polynomial) -> int:
    field = q.field
    n = q.ring.num_vars
    half = field.inv(field.convert(2))
    form = [[field.zero] * n for _ in range(n)]
    for exponents, coefficient in q.terms:
        support = [i for i, x in enumerate(exponents) for _ in range(x)]
        i, j = support
        if i == j:
            form[i][i] = coefficient
        else:
            form[i][j] = form[j][i] = field.mul(coefficient, half)

    rank = 0
    for col in range(n):
        pivot = next((r for r in range(rank, n) if form[r][col] != field.zero), None)
        if pivot is None:
            continue
        form[rank], form[pivot] = form[pivot], form[rank]
        inverse = field.inv(form[rank][col])
        for r in range(rank + 1, n):
            factor = field.mul(form[r][col], inverse)
            if factor != field.zero:
                form[r] = [field.sub(a, field.mul(factor, b)) for a, b in zip(form[r], form[rank])]
        rank += 1
    return rank


def quadric_strength(q: Polynomial) -> int:
    """Exact strength ``ceil(rank / 2) - 1`` of a quadratic form."""
    if not q or not q.is_homogeneous() or q.degree != 2:  # noqa: PLR2004
        raise ValueError(f"Not a quadratic form: {q}")
    if q.ring.characteristic == 2:  # noqa: PLR2004
        raise UnsupportedCharacteristic("Quadric strength is only exact outside char 2")
    return -(-_symmetric_rank(q) // 2) - 1


def strength_interval(
    f: Polynomial,
    decomposition: Optional[StrengthDecomposition] = None,
    profile: Optional[SingularityProfile] = None,
) -> StrengthInterval:
    """``[certified lower, exhibited upper]``; the upper end is ``None`` when unknown."""
    if f and f.is_homogeneous() and f.degree == 1:
        return StrengthInterval(lower=INFINITE, upper=INFINITE)
    if profile is None:
        profile = singularity_profile(f)
    lower: Strength = profile.strength_lower
    upper: Optional[Strength] = decomposition.s if decomposition is not None else None
    if f.degree == 2 and f.ring.characteristic != 2:  # noqa: PLR2004
        exact = quadric_strength(f)
        lower = max(lower, exact)
        upper = exact if upper is None else min(upper, exact)
    return StrengthInterval(lower=lower, upper=upper)


def e_s_gap_check(
    decomposition: StrengthDecomposition, profile: Optional[SingularityProfile] = None
) -> GapReport:
    """Check ``s >= e(f) + 1`` for ``f = Σ g_i h_i``."""
    f = decomposition.f
    if not f:
        raise DegenerateDecomposition("The summands cancel to zero")
    e = (profile or singularity_profile(f)).e
    s = decomposition.s
    mf_threshold, mcm_threshold = bgs_thresholds(e)
    holds = s >= e + 1
    if not holds:
        logger.warning("Gap inequality violated", s=s, e=e)
    return GapReport(
        s=s,
        e=e,
        holds=holds,
        bgs_mf_threshold=mf_threshold,
        bgs_mcm_threshold=mcm_threshold,
    )


def analyze(
    f: Polynomial, decomposition: Optional[StrengthDecomposition] = None
) -> AnalysisReport:
    profile = singularity_profile(f)
    interval = strength_interval(f, decomposition, profile)
    mf_threshold, mcm_threshold = bgs_thresholds(profile.e)
    return AnalysisReport(
        f=f,
        degree=profile.degree,
        jacobian_codim=profile.jacobian_codim,
        sing_codim=profile.sing_codim,
        e=profile.e,
        strength_lower=interval.lower,
        strength_upper=interval.upper,
        bgs_mf_threshold=mf_threshold,
        bgs_mcm_threshold=mcm_threshold,
    )


def bgs_report(decomposition: StrengthDecomposition) -> BGSReport:
    """Compare the ranks exhibited by the Knörrer construction with the conjectured bounds."""
    f = decomposition.f
    if not f:
        raise DegenerateDecomposition("The summands cancel to zero")
    profile = singularity_profile(f)
    gap = e_s_gap_check(decomposition, profile)
    interval = strength_interval(f, decomposition, profile)
    s = decomposition.s
    mf_rank_upper = 2**s
    mcm_rank_upper = 2 ** max(s - 1, 0)
    return BGSReport(
        f=f,
        s_exhibited=s,
        e=gap.e,
        strength_lower=interval.lower,
        strength_upper=interval.upper if interval.upper is not None else s,
        mf_rank_upper=mf_rank_upper,
        mcm_rank_upper=mcm_rank_upper,
        bgs_mf_threshold=gap.bgs_mf_threshold,
        bgs_mcm_threshold=gap.bgs_mcm_threshold,
        consistent=gap.bgs_mf_threshold <= mf_rank_upper
        and gap.bgs_mcm_threshold <= mcm_rank_upper,
    )

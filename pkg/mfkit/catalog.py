"""Families of example forms with known strength decompositions.

Every family is a :class:`CatalogFamily`; plugins can add more through the
``mfkit_register_catalog_families`` hook.
"""

import random
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import attr
from structlog import get_logger

from .factorization import adjugate_mf, generic_skew_matrix, pfaffian_mf
from .fields import QQ, Field, parse_field
from .matrix import DegenerateSamplingError, determinant_of_rows, pfaffian_of_rows
from .models import MatrixFactorization, StrengthDecomposition
from .poly import Polynomial, PolynomialRing, polynomial_sum
from .report import RankGapReport

logger = get_logger()

SAMPLE_COEFFICIENTS = (-3, -2, -1, 1, 2, 3)
SAMPLE_ATTEMPTS = 100
DEFAULT_SEED = 0


@attr.define(frozen=True)
class CatalogEntry:
    name: str
    f: Polynomial
    decomposition: Optional[StrengthDecomposition] = None
    mf: Optional[MatrixFactorization] = None
    provenance: str = ""

    def __attrs_post_init__(self):
        if self.decomposition is not None and self.decomposition.f != self.f:
            raise ValueError(f"Decomposition of {self.name} does not sum to f")
        if self.mf is not None and self.mf.f != self.f:
            raise ValueError(f"Matrix factorization of {self.name} is not for f")

    @property
    def ring(self) -> PolynomialRing:
        return self.f.ring

    def rank_gap(self) -> Optional[RankGapReport]:
        """Compare the exhibited factorization with the one built from the decomposition."""
        if self.mf is None or self.decomposition is None:
            return None
        return RankGapReport(
            mf_rank_upper=self.mf.rank, knorrer_rank=2**self.decomposition.s
        )


def power_sum(d: int, n: int, field: Field = QQ) -> Polynomial:
    """``z0^d + ... + zn^d``."""
    if d < 1 or n < 0:
        raise ValueError(f"Power sum needs d >= 1 and n >= 0, got d={d}, n={n}")
    ring = PolynomialRing(field, n + 1)
    return polynomial_sum((z**d for z in ring.variables()), ring)


def _power_sum_decomposition(f: Polynomial) -> StrengthDecomposition:
    ring = f.ring
    d = f.degree
    variables = ring.variables()
    return StrengthDecomposition.create(variables, [z ** (d - 1) for z in variables])


def standard_quadric(s: int, field: Field = QQ) -> StrengthDecomposition:
    """``x0*y0 + ... + xs*ys`` in ``2s + 2`` variables."""
    if s < 0:
        raise ValueError(f"Number of extra summands must be >= 0, got {s}")
    names = [f"x{i}" for i in range(s + 1)] + [f"y{i}" for i in range(s + 1)]
    ring = PolynomialRing(field, len(names), names)
    return StrengthDecomposition(
        [ring.variable(f"x{i}") for i in range(s + 1)],
        [ring.variable(f"y{i}") for i in range(s + 1)],
    )


def sharp_family(d: int, s: int, n: int, field: Field = QQ) -> StrengthDecomposition:
    """``Σ x_i * (y_i_0^(d-1) + ... + y_i_n^(d-1))`` with a separate block of ``y`` per summand."""
    if d < 2 or s < 0 or n < 0:  # noqa: PLR2004
        raise ValueError(f"Need d >= 2, s >= 0, n >= 0, got d={d}, s={s}, n={n}")
    names = [f"x{i}" for i in range(s + 1)]
    names += [f"y{i}_{j}" for i in range(s + 1) for j in range(n + 1)]
    ring = PolynomialRing(field, len(names), names)
    gs = [ring.variable(f"x{i}") for i in range(s + 1)]
    hs = [
        polynomial_sum(
            (ring.variable(f"y{i}_{j}") ** (d - 1) for j in range(n + 1)), ring
        )
        for i in range(s + 1)
    ]
    return StrengthDecomposition.create(gs, hs)


def _cofactor_decomposition(
    rows: List[List[Polynomial]], ring: PolynomialRing
) -> StrengthDecomposition:
    n = len(rows)
    gs, hs = [], []
    for j in range(n):
        minor = determinant_of_rows(
            [[row[c] for c in range(n) if c != j] for row in rows[1:]], ring
        )
        gs.append(rows[0][j])
        hs.append(minor if j % 2 == 0 else -minor)
    return StrengthDecomposition.create(gs, hs)


def generic_matrix_det(n: int, field: Field = QQ) -> CatalogEntry:
    """Determinant of the generic matrix with its first-row Laplace expansion."""
    if not 2 <= n <= 4:  # noqa: PLR2004
        raise ValueError(f"Generic determinant size must be in 2..4, got {n}")
    mf = adjugate_mf(n, field)
    return CatalogEntry(
        name="generic-det",
        f=mf.f,
        decomposition=_cofactor_decomposition(mf.phi.rows(), mf.ring),
        mf=mf,
        provenance="determinant of a generic square matrix, adjugate factorization",
    )


def generic_pfaffian(n: int, field: Field = QQ) -> CatalogEntry:
    """Pfaffian of the generic skew matrix with its first-row expansion."""
    mf = pfaffian_mf(n, field)
    ring = mf.ring
    rows = generic_skew_matrix(n, field).rows()
    gs, hs = [], []
    for j in range(1, n):
        keep = [k for k in range(1, n) if k != j]
        sub = pfaffian_of_rows([[rows[a][b] for b in keep] for a in keep], ring)
        gs.append(rows[0][j])
        hs.append(sub if j % 2 else -sub)
    return CatalogEntry(
        name="generic-pfaffian",
        f=mf.f,
        decomposition=StrengthDecomposition.create(gs, hs),
        mf=mf,
        provenance="Pfaffian of a generic skew-symmetric matrix, submaximal Pfaffian factorization",
    )


def secondary_gap(n: int, field: Field = QQ) -> StrengthDecomposition:
    """``g1*g6 + g2*g5 + g3*g4`` for power sums ``g_k`` of degree ``k`` in ``n + 1`` variables."""
    sums = {k: power_sum(k, n, field) for k in range(1, 7)}
    return StrengthDecomposition.create(
        [sums[1], sums[2], sums[3]], [sums[6], sums[5], sums[4]]
    )


def _random_form(
    ring: PolynomialRing, degree: int, rng: random.Random
) -> Polynomial:
    field = ring.field
    for _ in range(SAMPLE_ATTEMPTS):
        if field.characteristic:
            terms = {m: field.random_element(rng) for m in ring.monomials_of_degree(degree)}
        else:
            terms = {
                m: field.convert(rng.choice(SAMPLE_COEFFICIENTS))
                for m in ring.monomials_of_degree(degree)
            }
        form = ring.from_dict(terms)
        if form:
            return form
    raise DegenerateSamplingError(f"Could not sample a nonzero form of degree {degree}")


def sample_type_mu(
    mu: Sequence[int], d: int, n: int, seed: int = DEFAULT_SEED, field: Field = QQ
) -> StrengthDecomposition:
    """Pseudorandom decomposition of type ``mu`` in ``n + 1`` variables.

    Samples are heuristically generic; nothing certifies genericity.
    """
    mu = list(mu)
    if not mu or mu != sorted(mu) or mu[0] < 1 or mu[-1] > d // 2:
        raise ValueError(f"Type {mu} needs 1 <= mu_0 <= ... <= mu_s <= {d // 2}")
    ring = PolynomialRing(field, n + 1)
    rng = random.Random(seed)
    gs = [_random_form(ring, k, rng) for k in mu]
    hs = [_random_form(ring, d - k, rng) for k in mu]
    logger.debug("Sampled decomposition", mu=mu, d=d, seed=seed, _verbosity=2)
    return StrengthDecomposition(gs, hs)


def _int_list(value: Any) -> Tuple[int, ...]:
    if isinstance(value, str):
        return tuple(int(v) for v in value.split(",") if v.strip())
    return tuple(int(v) for v in value)


def _field(value: Any) -> Field:
    return value if isinstance(value, Field) else parse_field(str(value))


@attr.define(frozen=True)
class CatalogParameter:
    name: str
    convert: Callable[[Any], Any]
    default: Any = None
    help: str = ""

    @property
    def required(self) -> bool:
        return self.default is None


@attr.define(frozen=True)
class CatalogFamily:
    name: str
    parameters: Tuple[CatalogParameter, ...]
    builder: Callable[..., CatalogEntry]
    help: str = ""

    def build(self, **kwargs) -> CatalogEntry:
        known = {p.name: p for p in self.parameters}
        unknown = set(kwargs) - set(known)
        if unknown:
            raise ValueError(f"Unknown parameters for {self.name}: {sorted(unknown)}")
        arguments = {}
        for parameter in self.parameters:
            if parameter.name in kwargs:
                arguments[parameter.name] = parameter.convert(kwargs[parameter.name])
            elif parameter.required:
                raise ValueError(f"Missing parameter {parameter.name!r} for {self.name}")
            else:
                arguments[parameter.name] = parameter.convert(parameter.default)
        return self.builder(**arguments)


def _entry(name: str, decomposition: StrengthDecomposition, provenance: str) -> CatalogEntry:
    return CatalogEntry(
        name=name, f=decomposition.f, decomposition=decomposition, provenance=provenance
    )


def _build_power_sum(d: int, n: int, field: Field) -> CatalogEntry:
    f = power_sum(d, n, field)
    return CatalogEntry(
        name="power-sum",
        f=f,
        decomposition=_power_sum_decomposition(f) if d >= 2 else None,  # noqa: PLR2004
        provenance="Fermat power sum, smooth outside characteristics dividing d",
    )


_FIELD = CatalogParameter("field", _field, "Q", "Coefficient field: Q or Fp:<p>")

BUILTIN_FAMILIES: Tuple[CatalogFamily, ...] = (
    CatalogFamily(
        "power-sum",
        (CatalogParameter("d", int, help="Degree"), CatalogParameter("n", int, help="Last variable index"), _FIELD),
        _build_power_sum,
        "z0^d + ... + zn^d",
    ),
    CatalogFamily(
        "quadric",
        (CatalogParameter("s", int, help="Number of summands minus one"), _FIELD),
        lambda s, field: _entry(
            "quadric", standard_quadric(s, field), "split quadric of rank 2s+2"
        ),
        "x0*y0 + ... + xs*ys",
    ),
    CatalogFamily(
        "sharp",
        (
            CatalogParameter("d", int, help="Degree"),
            CatalogParameter("s", int, help="Number of summands minus one"),
            CatalogParameter("n", int, help="Last index of each y block"),
            _FIELD,
        ),
        lambda d, s, n, field: _entry(
            "sharp",
            sharp_family(d, s, n, field),
            "linear forms times power sums in disjoint variable blocks, s = e(f) + 1",
        ),
        "Σ x_i * (power sum of degree d-1 in its own block)",
    ),
    CatalogFamily(
        "generic-det",
        (CatalogParameter("n", int, help="Matrix size"), _FIELD),
        generic_matrix_det,
        "Determinant of the generic n x n matrix",
    ),
    CatalogFamily(
        "generic-pfaffian",
        (CatalogParameter("n", int, help="Matrix size, 4 or 6"), _FIELD),
        generic_pfaffian,
        "Pfaffian of the generic skew-symmetric n x n matrix",
    ),
    CatalogFamily(
        "secondary-gap",
        (CatalogParameter("n", int, help="Last variable index"), _FIELD),
        lambda n, field: _entry(
            "secondary-gap",
            secondary_gap(n, field),
            "strength at most 2 with secondary strength growing with n",
        ),
        "g1*g6 + g2*g5 + g3*g4 for power sums g_k",
    ),
    CatalogFamily(
        "sample",
        (
            CatalogParameter("mu", _int_list, help="Type vector, e.g. 1,2,3"),
            CatalogParameter("d", int, help="Degree"),
            CatalogParameter("n", int, help="Last variable index"),
            CatalogParameter("seed", int, DEFAULT_SEED, "Sampler seed"),
            _FIELD,
        ),
        lambda mu, d, n, seed, field: _entry(
            "sample",
            sample_type_mu(mu, d, n, seed, field),
            "pseudorandom decomposition of the given type, heuristically generic",
        ),
        "Random decomposition of type mu",
    ),
)


def collect_families(extra: Iterable[CatalogFamily] = ()) -> Dict[str, CatalogFamily]:
    families: Dict[str, CatalogFamily] = {}
    for family in (*BUILTIN_FAMILIES, *extra):
        if family.name in families:
            logger.warning("Catalog family overridden", name=family.name)
        families[family.name] = family
    return families

import pytest

from mfkit.catalog import (
    BUILTIN_FAMILIES,
    CatalogEntry,
    collect_families,
    generic_matrix_det,
    generic_pfaffian,
    power_sum,
    sample_type_mu,
    secondary_gap,
    sharp_family,
    standard_quadric,
)
from mfkit.factorization import knorrer_build, verify
from mfkit.fields import PrimeField
from mfkit.models import DegreeMismatch, StrengthDecomposition

FAMILIES = collect_families()


def test_power_sum():
    assert str(power_sum(3, 2)) == "z0^3 + z1^3 + z2^3"
    with pytest.raises(ValueError, match="d >= 1"):
        power_sum(0, 2)


def test_standard_quadric():
    decomposition = standard_quadric(2)
    assert str(decomposition.f) == "x0*y0 + x1*y1 + x2*y2"
    assert decomposition.s == 2
    assert decomposition.mu == (1, 1, 1)
    with pytest.raises(ValueError, match=">= 0"):
        standard_quadric(-1)


def test_sharp_family():
    decomposition = sharp_family(3, 1, 1)
    assert decomposition.ring.names == ("x0", "x1", "y0_0", "y0_1", "y1_0", "y1_1")
    assert str(decomposition.f) == "x0*y0_0^2 + x0*y0_1^2 + x1*y1_0^2 + x1*y1_1^2"


def test_secondary_gap():
    decomposition = secondary_gap(1)
    assert decomposition.mu == (1, 2, 3)
    assert decomposition.degree == 7
    assert decomposition.f.is_homogeneous()


@pytest.mark.parametrize("n", [2, 3, 4])
def test_generic_matrix_det(n: int):
    entry = generic_matrix_det(n)
    assert entry.decomposition is not None
    assert entry.decomposition.f == entry.f
    assert entry.decomposition.s == n - 1
    assert entry.mf is not None
    assert verify(entry.mf).passed

    rank_gap = entry.rank_gap()
    assert rank_gap is not None
    assert rank_gap.mf_rank_upper == entry.mf.rank == n
    assert rank_gap.knorrer_rank == 2 ** (n - 1)
    assert rank_gap.gap == (n >= 3)


def test_generic_pfaffian():
    entry = generic_pfaffian(4)
    assert entry.decomposition is not None
    assert entry.decomposition.s == 2
    assert entry.f.degree == 2
    assert verify(knorrer_build(entry.decomposition)).passed


@pytest.mark.parametrize("n, knorrer_rank, gap", [(4, 4, False), (6, 16, True)])
def test_generic_pfaffian_rank_gap(n: int, knorrer_rank: int, gap: bool):
    rank_gap = generic_pfaffian(n).rank_gap()
    assert rank_gap is not None
    assert (rank_gap.mf_rank_upper, rank_gap.knorrer_rank, rank_gap.gap) == (n, knorrer_rank, gap)


def test_rank_gap_needs_factorization_and_decomposition():
    assert FAMILIES["quadric"].build(s="1").rank_gap() is None


def test_sample_is_deterministic():
    first = sample_type_mu((1, 2), 4, 3, seed=7)
    assert first == sample_type_mu((1, 2), 4, 3, seed=7)
    assert first != sample_type_mu((1, 2), 4, 3, seed=8)
    assert first.mu == (1, 2)
    assert first.degree == 4


def test_sample_over_prime_field():
    decomposition = sample_type_mu((1, 1), 2, 2, seed=1, field=PrimeField(3))
    assert decomposition.ring.field == PrimeField(3)
    assert verify(knorrer_build(decomposition)).passed


@pytest.mark.parametrize(
    "mu, d",
    [
        pytest.param((), 4, id="empty"),
        pytest.param((2, 1), 4, id="unsorted"),
        pytest.param((3,), 4, id="too-large"),
        pytest.param((0, 1), 4, id="zero"),
    ],
)
def test_sample_invalid_type(mu, d: int):
    with pytest.raises(ValueError, match="Type"):
        sample_type_mu(mu, d, 2)


def test_entry_checks_decomposition():
    with pytest.raises(ValueError, match="does not sum to f"):
        CatalogEntry("broken", power_sum(2, 3), standard_quadric(1))


def test_builtin_family_names():
    assert set(FAMILIES) == {family.name for family in BUILTIN_FAMILIES}
    assert {"power-sum", "quadric", "sharp", "generic-det", "sample"} <= set(FAMILIES)


@pytest.mark.parametrize(
    "name, arguments, expected_f",
    [
        pytest.param("quadric", {"s": "1"}, "x0*y0 + x1*y1", id="quadric"),
        pytest.param("power-sum", {"d": "2", "n": "1"}, "z0^2 + z1^2", id="power-sum"),
        pytest.param(
            "power-sum", {"d": "3", "n": "1", "field": "Fp:5"}, "z0^3 + z1^3", id="power-sum-f5"
        ),
        pytest.param("generic-det", {"n": 2}, "-x12*x21 + x11*x22", id="generic-det"),
    ],
)
def test_family_build(name: str, arguments, expected_f: str):
    entry = FAMILIES[name].build(**arguments)
    assert str(entry.f) == expected_f
    assert entry.name == name


def test_family_build_sample_uses_default_seed():
    family = FAMILIES["sample"]
    assert family.build(mu="1,1", d="3", n="2") == family.build(mu="1,1", d="3", n="2", seed="0")


def test_family_build_errors():
    family = FAMILIES["quadric"]
    with pytest.raises(ValueError, match="Missing parameter 's'"):
        family.build()
    with pytest.raises(ValueError, match="Unknown parameters"):
        family.build(s="1", t="2")


def test_linear_power_sum_has_no_decomposition():
    entry = FAMILIES["power-sum"].build(d="1", n="2")
    assert entry.decomposition is None


def test_mixed_degree_decomposition_is_rejected():
    ring = standard_quadric(1).ring
    x0, x1, y0, _ = ring.variables()
    with pytest.raises(DegreeMismatch):
        StrengthDecomposition.create([x0, x1], [y0, y0**2])

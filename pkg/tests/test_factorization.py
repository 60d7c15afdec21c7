import attr
import pytest

from mfkit.catalog import sample_type_mu, standard_quadric
from mfkit.factorization import (
    NotAPowerOfF,
    adjugate_mf,
    extend_mf,
    knorrer_build,
    mcm_rank_of,
    pfaffian_mf,
    restrict_mf,
    tensor_step,
    verify,
)
from mfkit.fields import QQ, PrimeField
from mfkit.matrix import GradedFreeModule, GradedMatrix, determinant, randomized_det_check
from mfkit.models import DegreeMismatch, MatrixFactorization, StrengthDecomposition
from mfkit.poly import PolynomialRing
from mfkit.testing import random_decomposition_params


@pytest.mark.parametrize("s", range(4))
def test_knorrer_build_standard_quadric(s: int):
    decomposition = standard_quadric(s)
    mf = knorrer_build(decomposition)

    report = verify(mf)
    assert report.passed, report.witness
    assert mf.rank == 2**s
    assert mf.f == decomposition.f

    if s == 0:
        # a single product g * h: det(phi) = g is no power of f
        with pytest.raises(NotAPowerOfF):
            mcm_rank_of(mf)
    else:
        r, c = mcm_rank_of(mf)
        assert r == 2 ** (s - 1)
        assert abs(c) == 1


def test_knorrer_build_rank_sixteen_exact_determinant():
    mf = knorrer_build(standard_quadric(4))
    det = determinant(mf.phi)
    power = mf.f**8
    assert det in (power, -power)


def test_knorrer_build_rank_sixteen_randomized():
    decomposition = standard_quadric(4)
    mf = knorrer_build(decomposition)
    assert mf.rank == 16
    assert verify(mf).passed
    assert randomized_det_check(mf.phi, mf.f, 8, trials=3, seed=0)


@pytest.mark.parametrize("mu, d, n, seed", random_decomposition_params())
def test_knorrer_build_random_decompositions(mu, d: int, n: int, seed: int):
    decomposition = sample_type_mu(mu, d, n, seed=seed)
    mf = knorrer_build(decomposition)

    assert verify(mf).passed
    assert mf.rank == 2**decomposition.s
    r, c = mcm_rank_of(mf)
    assert r == 2 ** (decomposition.s - 1)
    assert abs(c) == 1


def test_knorrer_build_over_prime_field():
    mf = knorrer_build(standard_quadric(2, PrimeField(2)))
    assert verify(mf).passed
    assert mcm_rank_of(mf) == (2, 1)


def test_knorrer_build_with_cancelling_prefix():
    ring = PolynomialRing(QQ, 4, ["x0", "x1", "y0", "y1"])
    x0, x1, y0, y1 = ring.variables()
    decomposition = StrengthDecomposition([x0, x0, x1], [y0, -y0, y1])

    mf = knorrer_build(decomposition)
    assert mf.f == x1 * y1
    assert mf.rank == 4
    assert mf.psi.source == mf.phi.target.shift(2)
    assert verify(mf).passed
    assert mcm_rank_of(mf) == (2, 1)


@pytest.mark.parametrize(
    "mf",
    [
        pytest.param(knorrer_build(standard_quadric(2)), id="quadric"),
        pytest.param(knorrer_build(sample_type_mu((1, 1), 3, 2, seed=3)), id="sample-cubic"),
        pytest.param(adjugate_mf(3), id="adjugate"),
        pytest.param(pfaffian_mf(4), id="pfaffian"),
    ],
)
def test_determinants_multiply_to_power_of_f(mf: MatrixFactorization):
    assert determinant(mf.phi) * determinant(mf.psi) == mf.f**mf.rank


def test_tensor_step_grading():
    decomposition = standard_quadric(1)
    mf = knorrer_build(decomposition)
    assert mf.phi.target == GradedFreeModule((0, 0))
    assert mf.phi.source == GradedFreeModule((1, 1))
    assert mf.psi.source == GradedFreeModule((2, 2))


def test_tensor_step_degree_mismatch():
    decomposition = standard_quadric(1)
    mf = knorrer_build(decomposition)
    z = decomposition.ring.variables()
    with pytest.raises(DegreeMismatch):
        tensor_step(mf, z[0], z[1] ** 2)
    with pytest.raises(DegreeMismatch):
        tensor_step(mf, z[0] + z[1] ** 2, z[1])


def test_verify_reports_product_witness():
    mf = knorrer_build(standard_quadric(1))
    entries = mf.psi.rows()
    entries[0][0] = entries[0][0] + mf.ring.variable(0)
    broken = attr.evolve(mf, psi=attr.evolve(mf.psi, entries=entries))

    report = verify(broken)
    assert not report.passed
    assert not report.products_ok
    assert report.witness is not None
    assert report.witness.check == "products"
    assert report.witness.matrix == "phi*psi"


def test_verify_reports_unit_entry():
    ring = PolynomialRing(QQ, 1)
    (z,) = ring.variables()
    f = z**2
    phi = GradedMatrix(ring, GradedFreeModule([0]), GradedFreeModule([0]), [[ring.one()]])
    psi = GradedMatrix(ring, GradedFreeModule([2]), GradedFreeModule([0]), [[f]])
    report = verify(MatrixFactorization(f, phi, psi))

    assert report.products_ok
    assert report.graded_ok
    assert not report.reduced_ok
    assert report.witness.check == "reduced"
    assert report.witness.matrix == "phi"


def test_verify_reports_grading_witness():
    ring = PolynomialRing(QQ, 2)
    x, y = ring.variables()
    f = x * y
    phi = GradedMatrix(ring, GradedFreeModule([2]), GradedFreeModule([0]), [[x]])
    psi = GradedMatrix(ring, GradedFreeModule([2]), GradedFreeModule([2]), [[y]])
    report = verify(MatrixFactorization(f, phi, psi))

    assert report.products_ok
    assert not report.graded_ok
    assert report.witness.check == "graded"


@pytest.mark.parametrize("n", [2, 3, 4])
def test_adjugate_mf(n: int):
    mf = adjugate_mf(n)
    assert verify(mf).passed
    assert mcm_rank_of(mf) == (1, 1)
    assert mf.f.degree == n


def test_adjugate_mf_size():
    with pytest.raises(ValueError, match="2..5"):
        adjugate_mf(6)


@pytest.mark.parametrize("n", [4, 6])
def test_pfaffian_mf(n: int):
    mf = pfaffian_mf(n)
    assert verify(mf).passed
    assert mf.rank == n
    assert mf.f.degree == n // 2
    assert mcm_rank_of(mf) == (2, 1)


def test_mcm_rank_rejects_non_power():
    ring = PolynomialRing(QQ, 2)
    x, y = ring.variables()
    phi = GradedMatrix(
        ring,
        GradedFreeModule([1, 1]),
        GradedFreeModule([0, 0]),
        [[x, ring.zero()], [ring.zero(), x]],
    )
    psi = GradedMatrix(
        ring,
        GradedFreeModule([2, 2]),
        GradedFreeModule([1, 1]),
        [[y, ring.zero()], [ring.zero(), y]],
    )
    with pytest.raises(NotAPowerOfF):
        mcm_rank_of(MatrixFactorization(x * y, phi, psi))


def test_extend_and_restrict_mf():
    mf = knorrer_build(standard_quadric(1))
    extended = extend_mf(mf, 6)
    assert extended.ring.num_vars == 6
    assert verify(extended).passed
    assert mcm_rank_of(extended) == mcm_rank_of(mf)

    restricted = restrict_mf(extended, 4)
    assert restricted == mf


def test_restrict_mf_of_extended_decomposition():
    decomposition = sample_type_mu((1, 1), 3, 2, seed=5)
    wide = decomposition.extend_variables(5)
    assert isinstance(wide, StrengthDecomposition)
    mf = knorrer_build(wide)
    assert verify(restrict_mf(mf, 3)).passed

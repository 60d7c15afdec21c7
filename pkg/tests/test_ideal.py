import itertools

import pytest
import sympy

from mfkit.fields import QQ, PrimeField
from mfkit.ideal import (
    Ideal,
    InhomogeneousIdealError,
    TermOrder,
    UnitIdealError,
    codimension,
    dimension,
    groebner_basis,
    jacobian_ideal,
    jacobian_minors_ideal,
    normal_form,
)
from mfkit.matrix import determinant_of_rows
from mfkit.parser import parse_polynomials
from mfkit.poly import PolynomialRing

RING = PolynomialRing(QQ, 4)
Z0, Z1, Z2, Z3 = RING.variables()
SYMBOLS = sympy.symbols("z0 z1 z2 z3")


def _twisted_cubic() -> Ideal:
    rows = [[Z0, Z1, Z2], [Z1, Z2, Z3]]
    minors = [
        determinant_of_rows([[rows[0][a], rows[0][b]], [rows[1][a], rows[1][b]]], RING)
        for a, b in ((0, 1), (0, 2), (1, 2))
    ]
    return Ideal(RING, minors)


def _to_sympy(poly):
    return sympy.expand(sympy.sympify(str(poly).replace("^", "**")))


@pytest.mark.parametrize(
    "order, sympy_order",
    [
        pytest.param(TermOrder.GREVLEX, "grevlex", id="grevlex"),
        pytest.param(TermOrder.GRLEX, "grlex", id="grlex"),
        pytest.param(TermOrder.LEX, "lex", id="lex"),
    ],
)
def test_groebner_basis_matches_sympy(order: TermOrder, sympy_order: str):
    ideal = _twisted_cubic()
    basis = groebner_basis(ideal, order)
    expected = sympy.groebner(
        [_to_sympy(g) for g in ideal.generators], *SYMBOLS, order=sympy_order
    )
    assert {_to_sympy(g) for g in basis} == {sympy.expand(g) for g in expected.exprs}


def test_groebner_basis_is_monic_and_reduced():
    basis = _twisted_cubic().groebner_basis()
    assert all(g.leading_coefficient == 1 for g in basis)
    for i, g in enumerate(basis):
        others = [lead for j, lead in enumerate(basis.leading_monomials) if j != i]
        for exponents, _ in g.terms:
            assert not any(all(a <= b for a, b in zip(lead, exponents)) for lead in others)


def test_membership():
    ideal = _twisted_cubic()
    assert ideal.contains(Z0 * Z3 - Z1 * Z2)
    assert ideal.contains((Z0 * Z2 - Z1**2) * (Z0 + Z3))
    assert not ideal.contains(Z0 * Z3)
    assert normal_form(Z1**2 + Z3**2, ideal.groebner_basis()) == Z0 * Z2 + Z3**2


@pytest.mark.parametrize(
    "texts, expected_codim",
    [
        pytest.param(["z0", "z1"], 2, id="coordinate-plane"),
        pytest.param(["z0*z1", "z2*z3"], 2, id="complete-intersection"),
        pytest.param(["z0*z1", "z0*z2", "z0*z3"], 1, id="common-factor"),
        pytest.param(["z0^2", "z1^3", "z2^4", "z3^5"], 4, id="artinian"),
        pytest.param(["z0^2 + z1^2 + z2^2 + z3^2"], 1, id="hypersurface"),
    ],
)
def test_codimension(texts, expected_codim: int):
    polys = parse_polynomials(texts, RING)
    assert codimension(Ideal(RING, polys)) == expected_codim


def test_twisted_cubic_dimension():
    assert dimension(_twisted_cubic()) == 2


def test_zero_ideal():
    ideal = Ideal(RING, [RING.zero()])
    assert ideal.generators == ()
    assert ideal.groebner_basis().is_zero
    assert dimension(ideal) == 4


def test_unit_ideal():
    ideal = Ideal(RING, [Z0, RING.constant(3)])
    assert ideal.groebner_basis().is_unit
    with pytest.raises(UnitIdealError):
        dimension(ideal)


def test_inhomogeneous_generator():
    with pytest.raises(InhomogeneousIdealError):
        Ideal(RING, [Z0**2 + Z1])


def test_codimension_over_prime_field():
    ring = PolynomialRing(PrimeField(2), 3)
    x, y, z = ring.variables()
    f = x**2 + y**2 + z**2
    # (x + y + z)^2 in characteristic 2: a double plane
    assert f == (x + y + z) ** 2
    assert codimension(jacobian_ideal([f]) + Ideal(ring, [f])) == 1


def test_jacobian_ideal_of_smooth_quadric():
    f = Z0 * Z1 + Z2 * Z3
    assert codimension(jacobian_ideal([f])) == 4


def test_jacobian_minors_ideal():
    fs = [Z0 * Z1, Z2 * Z3]
    minors = jacobian_minors_ideal(fs, 2)
    # maximal minors vanish where one of the gradients does
    assert codimension(minors) == 2
    assert jacobian_ideal(fs) == minors


def test_jacobian_minors_ideal_invalid_size():
    with pytest.raises(ValueError, match="out of range"):
        jacobian_minors_ideal([Z0 * Z1], 2)
    with pytest.raises(ValueError, match="Empty"):
        jacobian_minors_ideal([], 1)


def test_extend_variables_preserves_codimension():
    ideal = _twisted_cubic()
    assert codimension(ideal.extend_variables(6)) == codimension(ideal)
    assert dimension(ideal.extend_variables(6)) == dimension(ideal) + 2


def test_sum_of_ideals():
    assert codimension(Ideal(RING, [Z0]) + Ideal(RING, [Z1])) == 2


def _s_polynomial(ring: PolynomialRing, f, g, lead_f, lead_g):
    lcm = tuple(max(a, b) for a, b in zip(lead_f, lead_g))
    return ring.monomial(tuple(a - b for a, b in zip(lcm, lead_f))) * f - ring.monomial(
        tuple(a - b for a, b in zip(lcm, lead_g))
    ) * g


def _cubic_jacobian() -> Ideal:
    ring = PolynomialRing(PrimeField(7), 3)
    f = parse_polynomials(["z0^3 + 2*z1^3 - z2^3 + z0*z1*z2"], ring)[0]
    return jacobian_ideal([f])


@pytest.mark.parametrize(
    "ideal, order",
    [
        pytest.param(_twisted_cubic(), TermOrder.GREVLEX, id="twisted-cubic-grevlex"),
        pytest.param(_twisted_cubic(), TermOrder.LEX, id="twisted-cubic-lex"),
        pytest.param(_cubic_jacobian(), TermOrder.GREVLEX, id="cubic-jacobian"),
        pytest.param(
            Ideal(RING, parse_polynomials(["z0*z1 - z2^2", "z1*z3 - z0^2", "z2*z3"], RING)),
            TermOrder.GRLEX,
            id="mixed-binomials",
        ),
    ],
)
def test_s_polynomials_reduce_to_zero(ideal: Ideal, order: TermOrder):
    basis = groebner_basis(ideal, order)
    elements = list(zip(basis.polynomials, basis.leading_monomials))
    for (f, lead_f), (g, lead_g) in itertools.combinations(elements, 2):
        assert normal_form(_s_polynomial(ideal.ring, f, g, lead_f, lead_g), basis).is_zero
    # the basis generates the original ideal
    assert all(basis.contains(generator) for generator in ideal.generators)


def test_normal_form_is_idempotent():
    basis = _twisted_cubic().groebner_basis()
    for poly in (Z1**3 + Z0 * Z3**2, Z2**2 - 5 * Z1 * Z3, Z0**4 + Z3**4):
        remainder = normal_form(poly, basis)
        assert normal_form(remainder, basis) == remainder
        assert basis.contains(poly - remainder)

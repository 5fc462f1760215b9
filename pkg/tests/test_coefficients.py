"""
Aritmética de monômios, polinômios por raízes e símbolos q-Pochhammer
"""

from fractions import Fraction

import pytest
import sympy
from sympy import Poly

from denomkit.exceptions import InfiniteResidueError, NonUnitSubstitutionError, PeriodMismatchError
from denomkit.services.coefficients import (
    Z,
    DenPoly,
    QMonomial,
    QPochProduct,
    ZRational,
    angle,
    bracket,
    confirm_identification,
    curly,
    format_scalar,
    identify_monomial,
    identify_polynomial,
    parse_factor_spec,
    parse_scalar,
    poch_expr,
    poch_from_ratio,
    poch_substitute,
    poch_to_laurent_ratio,
)


def test_minus_q_sign_follows_parity():
    assert QMonomial.minus_q(3) == QMonomial(6, 3)
    assert QMonomial.minus_q(4) == QMonomial(0, 4)
    assert QMonomial.minus_q(-2).sign == 1
    with pytest.raises(ValueError):
        QMonomial.minus_q(Fraction(1, 2))


def test_monomial_units_wrap_mod_12():
    i = QMonomial(3, 0)
    assert i * i == QMonomial(6, 0)
    assert (i ** 4).unit == 0
    assert (-QMonomial(0, 2)).unit == 6
    assert QMonomial(4, 1).inverse() == QMonomial(8, -1)


def test_format_scalar_grammar():
    assert format_scalar(QMonomial(0, 0)) == '1'
    assert format_scalar(QMonomial(0, 4)) == 'qs^{4}'
    assert format_scalar(QMonomial(6, 3)) == '(-1)^1 * qs^{3}'
    assert format_scalar(QMonomial(3, Fraction(1, 2))) == 'i * qs^{1/2}'


@pytest.mark.parametrize('text, expected', [
    ('qs^4', QMonomial(0, 4)),
    ('-qs^3', QMonomial(6, 3)),
    ('(-qs)^4', QMonomial(0, 4)),
    ('(-qs)^-3', QMonomial(6, -3)),
    ('i*qs^{-2}', QMonomial(3, -2)),
    ('sqrt(-1)', QMonomial(3, 0)),
    ('(-1)^1 * ω * qs^{1/2}', QMonomial(10, Fraction(1, 2))),
    ('w^2*qs', QMonomial(8, 1)),
    ('1', QMonomial(0, 0)),
])
def test_parse_scalar(text, expected):
    assert parse_scalar(text) == expected


def test_parse_scalar_scales_q():
    """q = q_s^3 em G2⁽¹⁾"""
    assert parse_scalar('(-q)^2', scale=3) == QMonomial(0, 6)
    assert parse_scalar('q^-1', scale=2) == QMonomial(0, -2)


def test_parse_scalar_reads_its_own_output():
    for m in (QMonomial(0, 0), QMonomial(6, 7), QMonomial(3, -4), QMonomial(8, Fraction(2, 3))):
        assert parse_scalar(format_scalar(m)) == m


def test_parse_scalar_rejects_garbage():
    with pytest.raises(ValueError):
        parse_scalar('x^2')
    with pytest.raises(ValueError):
        parse_scalar('qs**')


def test_denpoly_str_and_degree():
    d = parse_factor_spec('-2,8,12')
    assert str(d) == '(z-qs^2)(z-qs^8)(z-qs^12)'
    assert d.degree == 3
    assert str(parse_factor_spec('+7,11')) == '(z+qs^7)(z+qs^11)'
    assert str(parse_factor_spec('-4^2')) == '(z-qs^4)^2'


def test_denpoly_lcm_gcd_divides():
    a = parse_factor_spec('-2,4^2')
    b = parse_factor_spec('-4,6')
    assert a.lcm(b) == parse_factor_spec('-2,4^2,6')
    assert a.gcd(b) == parse_factor_spec('-4')
    assert a.gcd(b).divides(a)
    assert not b.divides(a)
    assert (a * b).quotient(b) == a


def test_substitute_moves_roots():
    """p(c·z) tem raízes r/c"""
    d = parse_factor_spec('-6')
    assert d.substitute(QMonomial(0, 2)) == parse_factor_spec('-4')
    assert d.substitute(QMonomial(6, 0)).root_set() == [QMonomial(6, 6)]


def test_signed_powers_cube_roots():
    d = DenPoly.signed_powers(-1, [9], order=3)
    assert d.degree == 3
    assert {r.unit for r in d.root_set()} == {2, 6, 10}
    assert {r.exp for r in d.root_set()} == {3}


def test_specialize_and_identify():
    d = parse_factor_spec('-2,8,12')
    poly = d.specialize(2)
    expected = Poly(sympy.expand((Z - 4) * (Z - 256) * (Z - 4096)), Z, domain='QQ')
    assert poly == expected
    assert identify_polynomial(poly, 2) == d
    assert confirm_identification(d, d.specialize(3), 3)


def test_identify_cyclotomic_factor():
    """z² + z·s⁴ + s⁸ = (z − ω q⁴)(z − ω² q⁴)"""
    d = DenPoly.from_roots([QMonomial(4, 4), QMonomial(8, 4)])
    assert identify_polynomial(d.specialize(2), 2) == d


def test_identify_monomial():
    assert identify_monomial(Fraction(-8), 2) == QMonomial(6, 3)
    assert identify_monomial(Fraction(1, 4), 2) == QMonomial(0, -2)
    assert identify_monomial(Fraction(3), 2) is None


def test_zrational_cancels_common_roots():
    r = ZRational.make(1, parse_factor_spec('-2,4'), parse_factor_spec('-4,6'))
    assert r.num == parse_factor_spec('-2')
    assert r.den == parse_factor_spec('-6')
    assert not r.is_polynomial
    assert r.equiv(ZRational.make(5, parse_factor_spec('-2'), parse_factor_spec('-6')))


def test_poch_period_must_be_even():
    with pytest.raises(PeriodMismatchError):
        bracket(1, 7)
    with pytest.raises(PeriodMismatchError):
        bracket(1, 8) * bracket(1, 12)


def test_bracket_ratio_telescopes():
    """[a]/[a+T] = (1 − (−q)^a z)"""
    x = poch_expr(12, [bracket(2, 12)], [bracket(14, 12)])
    ratio = poch_to_laurent_ratio(x)
    assert ratio.den.degree == 0
    assert ratio.num == DenPoly.from_roots([QMonomial.minus_q(2).inverse()])


def test_unbalanced_product_has_infinite_residue():
    with pytest.raises(InfiniteResidueError):
        poch_to_laurent_ratio(bracket(2, 12))


def test_ratio_to_poch_and_back():
    ratio = ZRational.make(1, parse_factor_spec('-2,8'), DenPoly.one())
    x = poch_from_ratio(ratio, 24)
    assert poch_to_laurent_ratio(x).equiv(ratio)


def test_curly_is_bracket_times_angle():
    assert curly(3, 12) == bracket(3, 12) * angle(3, 12)
    assert len(angle(3, 12, order=3).atoms) == 2
    assert str(bracket(3, 12)) == '[3]'
    assert str(poch_expr(12, [], [angle(2, 12)])) == '1/(⟨2⟩)'


def test_substitution_needs_unit_monomial():
    x = bracket(1, 12)
    assert poch_substitute(x, QMonomial(0, 2)) == bracket(1, 12).shifted(QMonomial(0, 2))
    with pytest.raises(NonUnitSubstitutionError):
        poch_substitute(x, 2)


def test_inverse_product_is_one():
    x = curly(2, 12) / bracket(5, 12)
    assert (x * x.inverse()).is_one
    assert QPochProduct.one(12).is_one

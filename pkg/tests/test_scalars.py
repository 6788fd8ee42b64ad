from fractions import Fraction

import pytest
import sympy

from sugra47.errors import InexactScalarError, StructuralError
from sugra47.scalars import (
    EXACT,
    Field,
    Mode,
    ToleranceConfig,
    format_scalar,
    from_sympy,
    parse_scalar,
    to_sympy,
)


def test_parse_scalar():
    assert parse_scalar("3/4") == Fraction(3, 4)
    assert parse_scalar(" -2 ") == Fraction(-2)
    assert parse_scalar("0.5") == 0.5


def test_parse_scalar_rejects_text():
    with pytest.raises(StructuralError):
        parse_scalar("one half")


def test_parse_scalar_rejects_zero_denominators():
    with pytest.raises(StructuralError):
        parse_scalar("1/0")
    with pytest.raises(StructuralError):
        EXACT.convert("-3/0")


def test_exact_convert():
    assert EXACT.convert("1/3") == Fraction(1, 3)
    assert EXACT.convert(0.5) == Fraction(1, 2)
    assert EXACT.convert(sympy.Rational(2, 3)) == Fraction(2, 3)
    assert isinstance(EXACT.convert(4), Fraction)


def test_float_comparisons(float_field):
    assert float_field.convert("1/4") == 0.25
    assert float_field.is_zero(1e-10)
    assert not float_field.is_zero(1e-6)
    assert float_field.equal(1.0, 1.0 + 1e-10)
    assert float_field.sign(-1e-12) == 0
    assert float_field.sign(-0.5) == -1


def test_relative_tolerance():
    field = Field.floating(1e-12, 1e-6)
    assert field.equal(1e6, 1e6 + 0.5)
    assert not field.equal(1.0, 1.001)


def test_tolerances_are_validated():
    with pytest.raises(StructuralError):
        ToleranceConfig(-1.0)
    with pytest.raises(StructuralError):
        Field(Mode.FLOAT, ToleranceConfig(0.0))


def test_exact_sqrt():
    assert EXACT.sqrt(Fraction(9, 4)) == Fraction(3, 2)
    with pytest.raises(InexactScalarError):
        EXACT.sqrt(Fraction(2))
    with pytest.raises(StructuralError):
        EXACT.sqrt(Fraction(-1))


def test_roots(float_field):
    assert EXACT.root(Fraction(512), 9) == 2
    assert EXACT.root(Fraction(-1), 9) == -1
    assert float_field.root(-512.0, 9) == pytest.approx(-2.0)
    with pytest.raises(StructuralError):
        EXACT.root(Fraction(-4), 2)


def test_max_abs():
    assert EXACT.max_abs([Fraction(-3), Fraction(2)]) == 3
    assert EXACT.max_abs([]) == 0


def test_format_scalar():
    assert format_scalar(Fraction(-5, 2)) == "-5/2"
    assert format_scalar(Fraction(3)) == "3"
    assert format_scalar(0.25) == 0.25


def test_sympy_conversion():
    assert from_sympy(sympy.sqrt(4)) == Fraction(2)
    assert isinstance(from_sympy(sympy.sqrt(2)), float)
    assert to_sympy(Fraction(1, 3)) == sympy.Rational(1, 3)

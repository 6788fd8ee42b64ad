from fractions import Fraction

import pytest

from sugra47.errors import InexactScalarError, PreconditionError, StructuralError
from sugra47.exterior import Frame, basis_form, contraction_gram, hodge, norm_squared, zero_form
from sugra47.g2 import (
    OrbitClass,
    TorsionKind,
    canonical_g2_form,
    classify,
    contraction_3g_check,
    find_split_form,
    induced_metric,
    signed_canonical_form,
    stabilizer_algebra,
    torsion_class,
    weak_einstein_constant,
)
from sugra47.scalars import EXACT

IDENTITY = [[int(i == j) for j in range(7)] for i in range(7)]


def test_canonical_form():
    omega = canonical_g2_form()
    assert norm_squared(omega) == 7
    classification = classify(omega)
    assert classification.orbit is OrbitClass.GENERIC_G2
    assert classification.det_b == -1
    assert induced_metric(omega).g == IDENTITY
    assert contraction_3g_check(omega) == 0
    assert contraction_gram(omega) == [[3 * x for x in row] for row in IDENTITY]


def test_stabilizer_has_dimension_14():
    omega = canonical_g2_form()
    assert len(stabilizer_algebra(omega)) == 14
    assert len(stabilizer_algebra(omega, skew=True)) == 14


def test_signed_form_with_all_plus_is_canonical():
    assert signed_canonical_form([1] * 7) == canonical_g2_form()
    with pytest.raises(StructuralError):
        signed_canonical_form([1, 1])


def test_split_form():
    signs, omega = find_split_form()
    assert len(signs) == 7
    classification = classify(omega)
    assert classification.orbit is OrbitClass.GENERIC_G2_STAR
    assert sorted([classification.signature.positive, classification.signature.negative]) == [3, 4]
    with pytest.raises(PreconditionError):
        contraction_3g_check(omega)


def test_degenerate_form():
    frame = Frame.euclidean(7)
    omega = basis_form(frame, (1, 2, 3))
    assert classify(omega).orbit is OrbitClass.DEGENERATE
    assert induced_metric(omega).g is None


def test_classify_needs_a_3_form_in_dimension_7():
    with pytest.raises(StructuralError):
        classify(basis_form(Frame.euclidean(7), (1, 2)))
    with pytest.raises(StructuralError):
        classify(basis_form(Frame.euclidean(6), (1, 2, 3)))


def test_scaled_form_needs_a_ninth_root(float_field):
    omega = 2 * canonical_g2_form()
    assert classify(omega).orbit is OrbitClass.GENERIC_G2
    with pytest.raises(InexactScalarError):
        induced_metric(omega, EXACT)
    metric = induced_metric(omega, float_field)
    assert metric.g[0][0] == pytest.approx(2 ** (2 / 3))
    assert metric.g[0][1] == pytest.approx(0.0)


def test_torsion_classes():
    omega = canonical_g2_form()
    frame = omega.frame
    star = hodge(omega)
    assert torsion_class(zero_form(frame, 4), zero_form(frame, 5), star).kind is TorsionKind.PARALLEL
    weak = torsion_class(2 * star, zero_form(frame, 5), star)
    assert weak.kind is TorsionKind.WEAK and weak.lam == 2
    other = basis_form(frame, (1, 2, 3, 4))
    assert torsion_class(other, zero_form(frame, 5), star).kind is TorsionKind.CO_CALIBRATED
    general = torsion_class(other, basis_form(frame, (1, 2, 3, 4, 5)), star)
    assert general.kind is TorsionKind.GENERAL


def test_weak_einstein_constant():
    assert weak_einstein_constant(Fraction(2)) == Fraction(3, 2)

from fractions import Fraction

import pytest

from sugra47.errors import StructuralError
from sugra47.homogeneous import ricci
from sugra47.models import (
    cp2xs3_space,
    hyperbolic_times_sphere_space,
    isotropy_rows,
    s3xt4_phi,
    s3xt4_space,
    so7_g2_space,
)


def test_isotropy_rows():
    rows = {row.name: row for row in isotropy_rows()}
    assert list(rows) == ["su2", "so3^5", "so3^7", "so3^(3,3)", "g2"]
    assert rows["su2"].blocks == (4, 1, 1, 1)
    assert rows["su2"].centralizer_dimension == 6
    assert rows["so3^5"].blocks == (5, 1, 1)
    assert rows["so3^7"].blocks == (7,)
    assert rows["so3^(3,3)"].centralizer_dimension == 1
    assert rows["g2"].subalgebra_dimension == 14
    assert all(row.ok for row in rows.values())
    assert "note" in rows["su2"].to_json()


@pytest.mark.parametrize(
    "parameters",
    [{"a": 0}, {"c": (1, 1)}, {"c": (1, -1, 1)}],
)
def test_cp2xs3_rejects_bad_weights(parameters):
    with pytest.raises(StructuralError):
        cp2xs3_space(**parameters)


@pytest.mark.parametrize("lambdas", [(1, 0, 1), (1, 1)])
def test_s3xt4_rejects_bad_weights(lambdas):
    with pytest.raises(StructuralError):
        s3xt4_space(lambdas)


def test_s3xt4_forms():
    space = s3xt4_space().space
    assert space.dh == 0
    phi = s3xt4_phi(space.frame)
    assert phi.coefficient((1, 4, 5)) == 1
    assert phi.coefficient((1, 6, 7)) == 1
    assert s3xt4_phi(space.frame, self_dual=False).coefficient((1, 6, 7)) == -1


def test_so7_over_g2_dimensions():
    model = so7_g2_space()
    assert (model.space.dh, model.space.dm) == (14, 7)
    assert model.space.frame.labels == ("A1", "A2", "A3", "A4", "A5", "A6", "A7")


def test_hyperbolic_times_sphere_ricci(float_field):
    ric = ricci(hyperbolic_times_sphere_space(float_field).orthonormal())
    expected = [Fraction(-1, 6)] * 3 + [Fraction(1, 3)] * 4
    for i in range(7):
        for j in range(7):
            assert ric[i][j] == pytest.approx(float(expected[i]) if i == j else 0.0, abs=1e-9)

from fractions import Fraction

import pytest

from sugra47.errors import InexactScalarError, PreconditionError, StructuralError
from sugra47.exterior import basis_form, wedge
from sugra47.homogeneous import (
    InvariantMetric,
    ReductiveSpace,
    block_dimensions,
    cartan_ricci,
    ce_differential,
    check_metric,
    decompose_module,
    einstein_constant,
    invariant_forms,
    isotypic_decomposition,
    metric_from_bilinear,
    orthonormal_model,
    reductive_split,
    rescale_orthonormal,
    ricci,
)
from sugra47.lie import hyperbolic_algebra, so_algebra, so_matrices, su2_algebra
from sugra47.models import (
    cp2xs3_space,
    hyperbolic_space,
    hyperbolic_times_sphere_space,
    so7_g2_space,
    so8_so7_space,
    su2_group_space,
    torus_space,
)


def diagonal(value, n):
    return [[value if i == j else 0 for j in range(n)] for i in range(n)]


def test_round_sphere():
    model = so8_so7_space()
    assert model.space.dh == 21 and model.space.dm == 7
    assert model.metric.matrix == diagonal(12, 7)
    assert model.space.is_symmetric()
    assert model.space.is_almost_effective()
    assert ricci(model.space, model.metric) == diagonal(6, 7)
    assert ricci(model.orthonormal()) == diagonal(Fraction(1, 2), 7)


def test_bi_invariant_su2():
    model = su2_group_space()
    assert model.metric.matrix == diagonal(8, 3)
    assert ricci(model.space, model.metric) == diagonal(2, 3)
    unit = orthonormal_model(model.space, InvariantMetric.identity(3))
    assert ricci(unit) == diagonal(2, 3)
    assert cartan_ricci(su2_algebra()) == diagonal(2, 3)
    assert ricci(rescale_orthonormal(unit, 2)) == diagonal(Fraction(1, 2), 3)
    with pytest.raises(PreconditionError):
        rescale_orthonormal(unit, 0)


def test_minus_killing_su2_needs_float(float_field):
    with pytest.raises(InexactScalarError):
        su2_group_space().orthonormal()
    model = su2_group_space(float_field)
    ric = ricci(model.orthonormal())
    for i in range(3):
        for j in range(3):
            assert ric[i][j] == pytest.approx(0.25 if i == j else 0.0)


def test_hyperbolic_space():
    model = hyperbolic_space(3)
    ric = ricci(model.space)
    assert ric == diagonal(-2, 3)
    assert cartan_ricci(hyperbolic_algebra(2)) == ric
    assert einstein_constant(ric, model.metric) == -2


def test_flat_torus():
    model = torus_space(7)
    assert len(invariant_forms(model.space, 3)) == 35
    assert ricci(model.space) == diagonal(0, 7)
    phi = basis_form(model.space.frame, (1, 2, 3))
    assert ce_differential(model.space, phi).is_zero()


def test_so7_over_g2():
    model = so7_g2_space()
    space = model.space
    assert (space.dh, space.dm) == (14, 7)
    assert not space.is_symmetric()
    assert space.is_almost_effective()
    assert block_dimensions(isotypic_decomposition(space)) == [7]
    assert len(invariant_forms(space, 3)) == 1
    assert len(invariant_forms(space, 2)) == 0


def test_invalid_metrics():
    sphere = so8_so7_space().space
    with pytest.raises(StructuralError, match="invariant"):
        check_metric(sphere, InvariantMetric.diagonal([1, 2, 1, 1, 1, 1, 1]))
    with pytest.raises(StructuralError, match="positive"):
        check_metric(sphere, InvariantMetric.diagonal([-1] * 7))
    with pytest.raises(StructuralError, match="symmetric"):
        check_metric(su2_group_space().space, InvariantMetric.from_matrix([[1, 1, 0], [0, 1, 0], [0, 0, 1]]))
    with pytest.raises(StructuralError):
        check_metric(sphere, InvariantMetric.identity(3))


def test_reductive_split():
    so3 = so_algebra(3)
    space = reductive_split(so3, [[1, 0, 0]])
    assert space.dm == 2
    assert space.is_symmetric()
    assert space.is_almost_effective()
    assert metric_from_bilinear(space).matrix == diagonal(2, 2)
    with pytest.raises(StructuralError):
        reductive_split(so3, [[1, 0, 0]], "casimir")


def test_non_reductive_decomposition():
    algebra = hyperbolic_algebra(1)
    with pytest.raises(StructuralError, match="reductive"):
        ReductiveSpace(algebra, [[0, 1]], [[1, 0]])
    with pytest.raises(StructuralError, match="does not match"):
        ReductiveSpace(algebra, [], [[1, 0]])


def test_hyperbolic_times_sphere():
    with pytest.raises(InexactScalarError):
        hyperbolic_times_sphere_space().orthonormal()


def test_einstein_constant():
    metric = InvariantMetric.identity(2)
    assert einstein_constant([[3, 0], [0, 3]], metric) == 3
    assert einstein_constant([[1, 0], [0, 2]], metric) is None


def test_cp2xs3_invariant_forms():
    space = cp2xs3_space().space
    assert space.dh == 4 and space.dm == 7
    assert len(invariant_forms(space, 3)) == 4
    for phi in invariant_forms(space, 3):
        assert ce_differential(space, ce_differential(space, phi)).is_zero()


def test_ce_differential_needs_invariant_forms():
    space = so8_so7_space().space
    with pytest.raises(StructuralError, match="invariant"):
        ce_differential(space, basis_form(space.frame, (1,)))
    with pytest.raises(StructuralError):
        ce_differential(space, basis_form(torus_space(3).space.frame, (1,)))


def test_generator_differentials_of_su2():
    space = orthonormal_model(su2_group_space().space, InvariantMetric.identity(3))
    e = [basis_form(space.frame, (i,)) for i in range(1, 4)]
    d = space.generator_differentials()
    # [i, j] = 2k gives d e^3 = -2 e^1 ^ e^2
    assert d[2] == -2 * wedge(e[0], e[1])


def test_decompose_standard_representation():
    components = decompose_module(so_matrices(3))
    assert block_dimensions(components) == [3]

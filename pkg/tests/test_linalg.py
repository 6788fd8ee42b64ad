from fractions import Fraction

import pytest

from sugra47.errors import InexactScalarError, StructuralError
from sugra47.linalg import (
    CoordinateSolver,
    cluster,
    determinant,
    eigenspaces,
    identity,
    inertia,
    inverse,
    matmul,
    matvec,
    nullspace,
    rank,
    real_eigenvalues,
    solve,
)
from sugra47.scalars import EXACT

F = Fraction


@pytest.mark.parametrize("exact", [True, False])
def test_nullspace(exact, float_field):
    field = EXACT if exact else float_field
    rows = [[1, 1, 0], [0, 0, 1]]
    kernel = nullspace(rows, 3, field)
    assert len(kernel) == 1
    assert all(abs(x) < 1e-12 for x in matvec(rows, kernel[0]))


def test_nullspace_without_equations():
    assert nullspace([], 2, EXACT) == [[1, 0], [0, 1]]


def test_solve():
    assert solve([[F(2), F(0)], [F(0), F(4)]], [F(1), F(1)], 2, EXACT) == [F(1, 2), F(1, 4)]


@pytest.mark.parametrize("exact", [True, False])
def test_solve_inconsistent(exact, float_field):
    field = EXACT if exact else float_field
    with pytest.raises(StructuralError):
        solve([[1, 1], [1, 1]], [1, 2], 2, field)


def test_rank_and_determinant():
    matrix = [[F(1), F(2)], [F(2), F(4)]]
    assert rank(matrix, 2, EXACT) == 1
    assert determinant(matrix, EXACT) == 0
    assert determinant([], EXACT) == 1


def test_inverse():
    matrix = [[F(2), F(1)], [F(1), F(1)]]
    assert matmul(inverse(matrix, EXACT), matrix) == identity(2, EXACT)
    with pytest.raises(StructuralError):
        inverse([[F(1), F(2)], [F(2), F(4)]], EXACT)


def test_coordinate_solver():
    solver = CoordinateSolver([[F(1), F(0), F(0)], [F(1), F(1), F(0)]], EXACT)
    assert solver.coordinates([F(3), F(2), F(0)]) == [1, 2]
    with pytest.raises(StructuralError):
        solver.coordinates([F(0), F(0), F(1)])
    with pytest.raises(StructuralError):
        CoordinateSolver([[F(1), F(1)], [F(2), F(2)]], EXACT)


def test_real_eigenvalues():
    assert real_eigenvalues([[F(2), F(0)], [F(0), F(3)]], EXACT).real == [2, 3]
    rotation = real_eigenvalues([[F(0), F(-1)], [F(1), F(0)]], EXACT)
    assert rotation.real == [] and rotation.complex_count == 2


def test_irrational_eigenvalues():
    values = real_eigenvalues([[F(0), F(2)], [F(1), F(0)]], EXACT).real
    assert values == pytest.approx([-(2 ** 0.5), 2 ** 0.5])
    with pytest.raises(InexactScalarError):
        eigenspaces([[F(0), F(2)], [F(1), F(0)]], EXACT)


def test_eigenspaces():
    spaces = eigenspaces([[F(1), F(0), F(0)], [F(0), F(1), F(0)], [F(0), F(0), F(5)]], EXACT)
    assert [(value, len(basis)) for value, basis in spaces] == [(1, 2), (5, 1)]


def test_cluster(float_field):
    assert cluster([1.0, 2.0, 1.0 + 1e-12], float_field) == [(1.0, 2), (2.0, 1)]
    assert cluster([F(1), F(1), F(2)], EXACT) == [(1, 2), (2, 1)]


def test_inertia():
    assert tuple(inertia([[F(0), F(1)], [F(1), F(0)]], EXACT)) == (1, 1, 0)
    diagonal = [[F(1), F(0), F(0)], [F(0), F(-1), F(0)], [F(0), F(0), F(0)]]
    assert tuple(inertia(diagonal, EXACT)) == (1, 1, 1)


def test_float_inertia(float_field):
    assert tuple(inertia([[2.0, 0.0], [0.0, -3.0]], float_field)) == (1, 1, 0)

import pytest

from sugra47.errors import StructuralError
from sugra47.lie import (
    LieAlgebraData,
    centralizer,
    direct_sum,
    harmonic_so3,
    hyperbolic_algebra,
    is_subalgebra,
    lie_from_matrices,
    so_algebra,
    so_matrices,
    sp2_algebra,
    su2_algebra,
)
from sugra47.linalg import matmul, transpose


def diagonal(value, n):
    return [[value if i == j else 0 for j in range(n)] for i in range(n)]


def test_so3_brackets():
    so3 = so_algebra(3)
    assert so3.labels == ("E12", "E13", "E23")
    # [E12, E23] = E13
    assert so3.constant(0, 2, 1) == 1
    assert so3.constant(2, 0, 1) == -1
    assert so3.bracket([1, 0, 0], [0, 0, 1]) == [0, 1, 0]
    assert so3.jacobi_defect() == 0


def test_killing_forms():
    assert so_algebra(3).killing_form() == diagonal(-2, 3)
    assert su2_algebra().killing_form() == diagonal(-8, 3)
    assert so_algebra(4).killing_form() == diagonal(-4, 6)


def test_invalid_brackets():
    with pytest.raises(StructuralError, match="Jacobi"):
        LieAlgebraData(3, {(0, 1): {2: 1}, (1, 2): {1: 1}})
    with pytest.raises(StructuralError, match="outside"):
        LieAlgebraData(2, {(0, 2): {0: 1}})
    with pytest.raises(StructuralError, match="outside"):
        LieAlgebraData(2, {(0, 1): {5: 1}})
    with pytest.raises(StructuralError):
        LieAlgebraData(2, {(1, 1): {0: 1}})
    with pytest.raises(StructuralError):
        LieAlgebraData(2, {}, labels=["A"])


def test_reversed_pairs_are_folded():
    algebra = LieAlgebraData(2, {(1, 0): {1: 1}})
    assert algebra.constant(0, 1, 1) == -1
    assert algebra.ad_traces() == [-1, 0]


def test_matrices_must_close():
    e12, _, e23 = so_matrices(3)
    with pytest.raises(StructuralError, match="not closed"):
        lie_from_matrices([e12, e23])


def test_direct_sum():
    algebra = direct_sum(so_algebra(3), su2_algebra())
    assert algebra.dim == 6
    assert algebra.labels == ("E12", "E13", "E23", "i", "j", "k")
    assert algebra.constant(3, 4, 5) == 2
    assert algebra.constant(0, 3, 4) == 0
    assert len(algebra.matrices) == 6
    assert len(algebra.matrices[0]) == 7


def test_centralizer_and_subalgebras():
    so3 = so_algebra(3)
    assert len(centralizer(so3, [[1, 0, 0]])) == 1
    assert len(centralizer(so3, [])) == 3
    assert is_subalgebra(so3, [[1, 0, 0]])
    assert not is_subalgebra(so3, [[1, 0, 0], [0, 1, 0]])
    so4 = so_algebra(4)
    # so4 = so3 + so3: the centralizer of one factor is the other
    left = [[1, 0, 0, 0, 0, 1], [0, 1, 0, 0, -1, 0], [0, 0, 1, 1, 0, 0]]
    assert is_subalgebra(so4, left)
    assert len(centralizer(so4, left)) == 3


def test_change_basis():
    so3 = so_algebra(3)
    swapped = so3.change_basis([[0, 0, 1], [0, 1, 0], [1, 0, 0]])
    # [E23, E12] = -E13
    assert swapped.constant(0, 2, 1) == -1
    with pytest.raises(StructuralError):
        so3.change_basis([[1, 0, 0]])


def test_hyperbolic_algebra_is_not_unimodular():
    algebra = hyperbolic_algebra(3)
    assert algebra.dim == 4
    assert algebra.ad_traces() == [3, 0, 0, 0]


def test_harmonic_modules_are_skew_for_their_gram():
    for degree, dimension in ((1, 3), (2, 5), (3, 7)):
        matrices, gram = harmonic_so3(degree)
        assert len(matrices) == 3
        assert len(gram) == dimension
        for matrix in matrices:
            lhs = matmul(transpose(matrix), gram)
            rhs = matmul(gram, matrix)
            assert all(lhs[i][j] + rhs[i][j] == 0 for i in range(dimension) for j in range(dimension))
        assert lie_from_matrices(matrices).dim == 3


def test_sp2():
    assert sp2_algebra().dim == 10


def test_from_json():
    data = {
        "dim": 3,
        "labels": ["x", "y", "z"],
        "brackets": [
            {"i": 0, "j": 1, "coeffs": {"2": 1}},
            {"i": 1, "j": 2, "coeffs": {"0": 1}},
            {"i": 2, "j": 0, "coeffs": {"1": "1"}},
        ],
    }
    algebra = LieAlgebraData.from_json(data)
    assert algebra.constant(0, 2, 1) == -1
    assert algebra.killing_form() == diagonal(-2, 3)
    assert LieAlgebraData.from_json(algebra.to_json()).constant(0, 1, 2) == 1
    with pytest.raises(StructuralError, match="Malformed"):
        LieAlgebraData.from_json({"brackets": []})

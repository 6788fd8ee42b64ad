"""
Small dense linear algebra on lists of lists.

Exact computations go through sympy matrices of rationals, float computations
through numpy/scipy. Entries are `Fraction` or `float` depending on the field.
"""

import logging
from fractions import Fraction
from typing import List, NamedTuple, Sequence, Tuple

import numpy
import scipy.linalg
import sympy

from .errors import InexactScalarError, StructuralError
from .scalars import Field, Number, from_sympy, to_sympy

logger = logging.getLogger(__name__)

Vector = List[Number]
Matrix = List[List[Number]]


class Inertia(NamedTuple):
    """Counts of positive, negative and zero eigenvalues of a symmetric matrix."""

    positive: int
    negative: int
    zero: int


class Eigenvalues(NamedTuple):
    """Real eigenvalues (with multiplicity) and the number of discarded complex ones."""

    real: List[Number]
    complex_count: int


def identity(n: int, field: Field) -> Matrix:
    one, zero = field.convert(1), field.convert(0)
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def zeros(rows: int, cols: int, field: Field) -> Matrix:
    zero = field.convert(0)
    return [[zero] * cols for _ in range(rows)]


def transpose(matrix: Matrix) -> Matrix:
    return [list(column) for column in zip(*matrix)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    columns = transpose(b)
    return [[sum(x * y for x, y in zip(row, column)) for column in columns] for row in a]


def matvec(a: Matrix, v: Sequence[Number]) -> Vector:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def commutator(a: Matrix, b: Matrix) -> Matrix:
    ab, ba = matmul(a, b), matmul(b, a)
    return [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(ab, ba)]


def trace(matrix: Matrix) -> Number:
    return sum(matrix[i][i] for i in range(len(matrix)))


def _sympy_matrix(rows: Sequence[Sequence[Number]], ncols: int) -> sympy.Matrix:
    if len(rows) == 0:
        return sympy.zeros(0, ncols)
    return sympy.Matrix(len(rows), ncols, lambda i, j: to_sympy(rows[i][j]))


def _numpy_matrix(rows: Sequence[Sequence[Number]], ncols: int) -> numpy.ndarray:
    return numpy.array([[float(x) for x in row] for row in rows], dtype=float).reshape(
        len(rows), ncols
    )


def _from_sympy_matrix(matrix: sympy.Matrix) -> Matrix:
    return [[from_sympy(matrix[i, j]) for j in range(matrix.cols)] for i in range(matrix.rows)]


def nullspace(rows: Sequence[Sequence[Number]], ncols: int, field: Field) -> List[Vector]:
    """Basis of {x : rows @ x = 0}.

    Args:
        rows (Sequence[Sequence[Number]]): The rows of the linear system.
        ncols (int): The number of unknowns.
        field (Field): The arithmetic to use.

    Returns:
        List[Vector]: A basis of the solution space.
    """
    if ncols == 0:
        return []
    if len(rows) == 0:
        return identity(ncols, field)
    if field.exact:
        return [
            [from_sympy(x) for x in vector]
            for vector in _sympy_matrix(rows, ncols).nullspace()
        ]
    _, singular, vh = numpy.linalg.svd(_numpy_matrix(rows, ncols))
    rank = int(numpy.sum(singular > field.tolerance.abs_tol))
    return [[float(x) for x in row] for row in vh[rank:]]


def solve(rows: Sequence[Sequence[Number]], rhs: Sequence[Number], ncols: int, field: Field) -> Vector:
    """A solution of rows @ x = rhs (free unknowns set to zero).

    Raises:
        StructuralError: if the system is inconsistent.
    """
    if field.exact:
        try:
            solution, params = _sympy_matrix(rows, ncols).gauss_jordan_solve(
                sympy.Matrix([to_sympy(x) for x in rhs])
            )
        except ValueError as exception:
            raise StructuralError("The linear system is inconsistent") from exception
        solution = solution.subs({p: 0 for p in params})
        return [from_sympy(solution[i, 0]) for i in range(ncols)]
    a = _numpy_matrix(rows, ncols)
    b = numpy.array([float(x) for x in rhs])
    solution = numpy.linalg.lstsq(a, b, rcond=None)[0]
    if numpy.max(numpy.abs(a @ solution - b), initial=0.0) > field.tolerance.abs_tol:
        raise StructuralError("The linear system is inconsistent")
    return [float(x) for x in solution]


def rank(rows: Sequence[Sequence[Number]], ncols: int, field: Field) -> int:
    if len(rows) == 0 or ncols == 0:
        return 0
    if field.exact:
        return _sympy_matrix(rows, ncols).rank()
    singular = numpy.linalg.svd(_numpy_matrix(rows, ncols), compute_uv=False)
    return int(numpy.sum(singular > field.tolerance.abs_tol))


def inverse(matrix: Matrix, field: Field) -> Matrix:
    n = len(matrix)
    if field.exact:
        m = _sympy_matrix(matrix, n)
        if m.det() == 0:
            raise StructuralError("Matrix is singular")
        return _from_sympy_matrix(m.inv())
    array = _numpy_matrix(matrix, n)
    if abs(numpy.linalg.det(array)) <= field.tolerance.abs_tol:
        raise StructuralError("Matrix is singular")
    return numpy.linalg.inv(array).tolist()


def determinant(matrix: Matrix, field: Field) -> Number:
    n = len(matrix)
    if n == 0:
        return field.convert(1)
    if field.exact:
        return from_sympy(_sympy_matrix(matrix, n).det())
    return float(numpy.linalg.det(_numpy_matrix(matrix, n)))


class CoordinateSolver:
    """Expresses vectors of an ambient space in a fixed basis of a subspace."""

    def __init__(self, basis: Sequence[Sequence[Number]], field: Field) -> None:
        """Init

        Args:
            basis (Sequence[Sequence[Number]]): The basis vectors (as rows).
            field (Field): The arithmetic to use.
        """
        self.field = field
        self.basis = [list(v) for v in basis]
        self.dimension = len(self.basis)
        ambient = len(self.basis[0]) if self.basis else 0
        if rank(self.basis, ambient, field) != self.dimension:
            raise StructuralError("The basis vectors are linearly dependent")
        if field.exact:
            b = _sympy_matrix(self.basis, ambient).T
            self._left = _from_sympy_matrix((b.T * b).inv() * b.T)
        else:
            self._left = numpy.linalg.pinv(_numpy_matrix(self.basis, ambient).T).tolist()

    def project(self, vector: Sequence[Number]) -> Vector:
        """Least-squares coordinates, without checking that `vector` lies in the span."""
        nonzero = [(i, x) for i, x in enumerate(vector) if x != 0]
        return [sum(row[i] * x for i, x in nonzero) for row in self._left]

    def coordinates(self, vector: Sequence[Number]) -> Vector:
        """Coordinates of `vector`, raising `StructuralError` if it is outside the span."""
        coords = self.project(vector)
        for i, x in enumerate(vector):
            rebuilt = sum(c * b[i] for c, b in zip(coords, self.basis))
            if not self.field.equal(rebuilt, x):
                raise StructuralError("Vector is not in the span of the basis")
        return coords


def real_eigenvalues(matrix: Matrix, field: Field) -> Eigenvalues:
    """Real eigenvalues of a square matrix, repeated by multiplicity.

    In exact mode the characteristic polynomial is factored over the rationals;
    rational roots stay exact, irrational real roots are returned as floats.
    """
    n = len(matrix)
    if n == 0:
        return Eigenvalues([], 0)
    if field.exact:
        x = sympy.Symbol("x")
        _, factors = sympy.factor_list(_sympy_matrix(matrix, n).charpoly(x).as_expr(), x)
        real, complex_count = [], 0
        for factor, multiplicity in factors:
            poly = sympy.Poly(factor, x)
            roots = poly.real_roots()
            complex_count += int((poly.degree() - len(roots)) * multiplicity)
            for root in roots:
                real.extend([from_sympy(root) if root.is_Rational else float(root)] * multiplicity)
        return Eigenvalues(sorted(real), complex_count)
    values = scipy.linalg.eigvals(_numpy_matrix(matrix, n))
    real = sorted(float(v.real) for v in values if abs(v.imag) <= field.tolerance.abs_tol)
    return Eigenvalues(real, n - len(real))


def cluster(values: Sequence[Number], field: Field, scale: int = 10) -> List[Tuple[Number, int]]:
    """Group equal (or, in float mode, nearby) values as (value, multiplicity)."""
    groups: List[Tuple[Number, int]] = []
    tol = field.tolerance.abs_tol * scale
    for value in sorted(values):
        if groups:
            last, count = groups[-1]
            same = last == value if field.exact else abs(last - value) <= tol
            if same:
                groups[-1] = (last, count + 1)
                continue
        groups.append((value, 1))
    return groups


def _exact_inertia(matrix: Matrix) -> Inertia:
    """Sylvester inertia by symmetric Gaussian elimination with exact pivoting."""
    a = [[Fraction(x) for x in row] for row in matrix]
    active = list(range(len(a)))
    positive = negative = 0
    while active:
        pivot = next((i for i in active if a[i][i] != 0), None)
        if pivot is None:
            pair = next(
                ((i, j) for i in active for j in active if i < j and a[i][j] != 0), None
            )
            if pair is None:
                break
            i, j = pair
            for k in active:
                a[i][k] += a[j][k]
            for k in active:
                a[k][i] += a[k][j]
            pivot = i
        d = a[pivot][pivot]
        if d > 0:
            positive += 1
        else:
            negative += 1
        row = {k: a[pivot][k] for k in active}
        active.remove(pivot)
        for i in active:
            factor = a[i][pivot] / d
            if factor != 0:
                for k in active:
                    a[i][k] -= factor * row[k]
    return Inertia(positive, negative, len(a) - positive - negative)


def inertia(matrix: Matrix, field: Field) -> Inertia:
    """Signature of a symmetric matrix."""
    if field.exact:
        return _exact_inertia(matrix)
    values = numpy.linalg.eigvalsh(_numpy_matrix(matrix, len(matrix)))
    tol = field.tolerance.abs_tol
    positive = int(numpy.sum(values > tol))
    negative = int(numpy.sum(values < -tol))
    return Inertia(positive, negative, len(values) - positive - negative)


def eigenspaces(matrix: Matrix, field: Field) -> List[Tuple[Number, List[Vector]]]:
    """Real eigenvalues with a basis of each eigenspace (kernel of A - lambda I).

    In exact mode an irrational eigenvalue raises `InexactScalarError`.
    """
    n = len(matrix)
    values = real_eigenvalues(matrix, field)
    if values.complex_count:
        logger.warning("Discarding %d complex eigenvalues", values.complex_count)
    result = []
    for value, _ in cluster(values.real, field):
        if field.exact and not isinstance(value, Fraction):
            raise InexactScalarError(f"Eigenvalue {value} is not rational")
        shifted = [[matrix[i][j] - (value if i == j else 0) for j in range(n)] for i in range(n)]
        result.append((value, nullspace(shifted, n, field)))
    return result

"""
Finite-dimensional real Lie algebras given by structure constants, and the
matrix algebras the homogeneous examples are built from.
"""

import itertools
import logging
import math
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import sympy

from .errors import StructuralError
from .linalg import (
    CoordinateSolver,
    Matrix,
    Vector,
    commutator,
    inverse,
    matmul,
    nullspace,
    rank,
    trace,
)
from .scalars import EXACT, Field, Number, format_scalar

logger = logging.getLogger(__name__)

Brackets = Dict[Tuple[int, int], Dict[int, Number]]


def _flatten(matrix: Matrix) -> Vector:
    return [x for row in matrix for x in row]


class LieAlgebraData:
    """A Lie algebra [X_i, X_j] = sum_k c^k_ij X_k with 0-based indices.

    Only brackets with i < j are stored, as sparse maps k -> c^k_ij. Jacobi is
    checked on construction.
    """

    def __init__(
        self,
        dim: int,
        brackets: Mapping[Tuple[int, int], Mapping[int, Number]],
        labels: Optional[Sequence[str]] = None,
        matrices: Optional[Sequence[Matrix]] = None,
        field: Field = EXACT,
        check: bool = True,
    ) -> None:
        """Init

        Args:
            dim (int): The dimension.
            brackets (Mapping): (i, j) -> {k: c^k_ij}. Pairs with i > j are folded
            in with a sign; pairs with i == j must be zero.
            labels (Sequence[str], optional): Basis labels. Defaults to X1, X2, ...
            matrices (Sequence[Matrix], optional): A matrix realization of the basis.
            field (Field, optional): The arithmetic used for the Jacobi check.
            check (bool, optional): Whether to verify the Jacobi identity.
        """
        self.dim = dim
        self.labels = tuple(labels) if labels else tuple(f"X{i + 1}" for i in range(dim))
        if len(self.labels) != dim:
            raise StructuralError(f"Lie algebra of dimension {dim} got {len(self.labels)} labels")
        self.matrices = tuple(matrices) if matrices is not None else None
        self.field = field
        self._matrix_solver = None
        normalized: Brackets = {}
        for (i, j), coeffs in brackets.items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise StructuralError(f"Bracket ({i}, {j}) is outside the algebra")
            if i == j:
                if any(not field.is_zero(c) for c in coeffs.values()):
                    raise StructuralError(f"[X{i + 1}, X{i + 1}] must vanish")
                continue
            sign, key = (1, (i, j)) if i < j else (-1, (j, i))
            target = normalized.setdefault(key, {})
            for k, c in coeffs.items():
                if not 0 <= k < dim:
                    raise StructuralError(f"Bracket ({i}, {j}) has a component outside the algebra")
                target[k] = target.get(k, 0) + sign * c
        self._brackets = {
            key: {k: c for k, c in coeffs.items() if c != 0}
            for key, coeffs in normalized.items()
            if any(c != 0 for c in coeffs.values())
        }
        if check:
            defect = self.jacobi_defect()
            if not field.is_zero(defect):
                logger.error("Jacobi identity fails by %s", defect)
                raise StructuralError(f"The brackets violate the Jacobi identity (defect {defect})")

    def constant(self, i: int, j: int, k: int) -> Number:
        """c^k_ij."""
        if i < j:
            return self._brackets.get((i, j), {}).get(k, 0)
        if i > j:
            return -self._brackets.get((j, i), {}).get(k, 0)
        return 0

    def basis_bracket(self, i: int, j: int) -> Dict[int, Number]:
        if i < j:
            return dict(self._brackets.get((i, j), {}))
        if i > j:
            return {k: -c for k, c in self._brackets.get((j, i), {}).items()}
        return {}

    def bracket(self, x: Sequence[Number], y: Sequence[Number]) -> Vector:
        result = [self.field.convert(0)] * self.dim
        xs = [(i, a) for i, a in enumerate(x) if a != 0]
        ys = [(j, b) for j, b in enumerate(y) if b != 0]
        for i, a in xs:
            for j, b in ys:
                for k, c in self.basis_bracket(i, j).items():
                    result[k] += a * b * c
        return result

    def items(self):
        return sorted(self._brackets.items())

    def ad(self, x: Sequence[Number]) -> Matrix:
        """Matrix of ad_x, column j holding [x, X_j]."""
        matrix = [[self.field.convert(0)] * self.dim for _ in range(self.dim)]
        for i, a in enumerate(x):
            if a == 0:
                continue
            for j in range(self.dim):
                for k, c in self.basis_bracket(i, j).items():
                    matrix[k][j] += a * c
        return matrix

    def killing_form(self) -> Matrix:
        """B_ij = tr(ad X_i ad X_j) = sum_{k,l} c^l_ik c^k_jl."""
        ads = [
            [(k, l, c) for k in range(self.dim) for l, c in self.basis_bracket(i, k).items()]
            for i in range(self.dim)
        ]
        result = [[self.field.convert(0)] * self.dim for _ in range(self.dim)]
        for i in range(self.dim):
            for j in range(i, self.dim):
                value = sum(c * self.constant(j, l, k) for k, l, c in ads[i])
                result[i][j] = result[j][i] = value
        return result

    def ad_traces(self) -> Vector:
        """tr ad X_i for every basis vector; all zero for a unimodular algebra."""
        return [sum(self.constant(i, k, k) for k in range(self.dim)) for i in range(self.dim)]

    def jacobi_defect(self) -> Number:
        """Largest coefficient of [[X_i, X_j], X_k] + cyclic over all triples."""
        worst = self.field.convert(0)
        for i, j, k in itertools.combinations(range(self.dim), 3):
            total: Dict[int, Number] = {}
            for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                for m, x in self.basis_bracket(a, b).items():
                    for n, y in self.basis_bracket(m, c).items():
                        total[n] = total.get(n, 0) + x * y
            worst = max(worst, self.field.max_abs(total.values()))
        return worst

    def change_basis(self, vectors: Sequence[Sequence[Number]], labels: Optional[Sequence[str]] = None) -> "LieAlgebraData":
        """The same algebra in the basis given by `vectors` (coordinates in the old basis)."""
        if len(vectors) != self.dim:
            raise StructuralError("A change of basis needs one vector per dimension")
        solver = CoordinateSolver(vectors, self.field)
        brackets = {}
        for a, b in itertools.combinations(range(self.dim), 2):
            coords = solver.coordinates(self.bracket(vectors[a], vectors[b]))
            brackets[(a, b)] = {k: c for k, c in enumerate(coords) if not self.field.is_zero(c)}
        matrices = None
        if self.matrices is not None:
            n = len(self.matrices[0])
            matrices = [
                [[sum(v * m[r][s] for v, m in zip(vector, self.matrices)) for s in range(n)] for r in range(n)]
                for vector in vectors
            ]
        return LieAlgebraData(self.dim, brackets, labels, matrices, self.field, check=False)

    def matrix_of(self, x: Sequence[Number]) -> Matrix:
        if self.matrices is None:
            raise StructuralError("The algebra has no matrix realization")
        n = len(self.matrices[0])
        return [[sum(v * m[r][s] for v, m in zip(x, self.matrices)) for s in range(n)] for r in range(n)]

    def coordinates_of_matrix(self, matrix: Matrix) -> Vector:
        if self.matrices is None:
            raise StructuralError("The algebra has no matrix realization")
        if self._matrix_solver is None:
            self._matrix_solver = CoordinateSolver([_flatten(m) for m in self.matrices], self.field)
        return self._matrix_solver.coordinates(_flatten(matrix))

    def trace_form(self) -> Matrix:
        """tr(M_i M_j) of the matrix realization."""
        if self.matrices is None:
            raise StructuralError("The trace form needs a matrix realization")
        return [[trace(matmul(a, b)) for b in self.matrices] for a in self.matrices]

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "labels": list(self.labels),
            "brackets": [
                {"i": i, "j": j, "coeffs": {str(k): format_scalar(c) for k, c in sorted(coeffs.items())}}
                for (i, j), coeffs in self.items()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping, field: Field = EXACT) -> "LieAlgebraData":
        """Read {dim, labels, brackets: [{i, j, coeffs: {k: scalar}}]} with 0-based indices."""
        try:
            brackets: Dict[Tuple[int, int], Dict[int, Number]] = {}
            for entry in data.get("brackets", []):
                key = (int(entry["i"]), int(entry["j"]))
                target = brackets.setdefault(key, {})
                for k, c in entry["coeffs"].items():
                    target[int(k)] = target.get(int(k), 0) + field.convert(c)
            return cls(int(data["dim"]), brackets, data.get("labels"), None, field)
        except (KeyError, TypeError) as exception:
            logger.error("Malformed Lie algebra object")
            raise StructuralError(f"Malformed Lie algebra object: {exception}") from exception


def lie_from_matrices(
    matrices: Sequence[Matrix], field: Field = EXACT, labels: Optional[Sequence[str]] = None
) -> LieAlgebraData:
    """Structure constants of the span of `matrices` under the commutator."""
    if not matrices:
        return LieAlgebraData(0, {}, labels, [], field)
    solver = CoordinateSolver([_flatten(m) for m in matrices], field)
    brackets = {}
    for i, j in itertools.combinations(range(len(matrices)), 2):
        try:
            coords = solver.coordinates(_flatten(commutator(matrices[i], matrices[j])))
        except StructuralError as exception:
            name_i = labels[i] if labels else f"X{i + 1}"
            name_j = labels[j] if labels else f"X{j + 1}"
            logger.error("[%s, %s] leaves the span of the matrices", name_i, name_j)
            raise StructuralError(
                f"The matrices are not closed under the commutator: [{name_i}, {name_j}]"
            ) from exception
        brackets[(i, j)] = {k: c for k, c in enumerate(coords) if not field.is_zero(c)}
    return LieAlgebraData(len(matrices), brackets, labels, matrices, field)


def direct_sum(a: LieAlgebraData, b: LieAlgebraData) -> LieAlgebraData:
    """a + b with the basis of a first; matrix realizations become block diagonal."""
    shift = a.dim
    brackets = {key: dict(coeffs) for key, coeffs in a.items()}
    for (i, j), coeffs in b.items():
        brackets[(i + shift, j + shift)] = {k + shift: c for k, c in coeffs.items()}
    matrices = None
    if a.matrices is not None and b.matrices is not None:
        na = len(a.matrices[0]) if a.matrices else 0
        nb = len(b.matrices[0]) if b.matrices else 0
        matrices = [block_diagonal([m, _zero(nb)]) for m in a.matrices] + [
            block_diagonal([_zero(na), m]) for m in b.matrices
        ]
    return LieAlgebraData(a.dim + b.dim, brackets, a.labels + b.labels, matrices, a.field, check=False)


def _zero(n: int) -> Matrix:
    return [[Fraction(0)] * n for _ in range(n)]


def block_diagonal(blocks: Sequence[Matrix]) -> Matrix:
    n = sum(len(block) for block in blocks)
    result = _zero(n)
    offset = 0
    for block in blocks:
        for r, row in enumerate(block):
            for s, x in enumerate(row):
                result[offset + r][offset + s] = x
        offset += len(block)
    return result


def centralizer(algebra: LieAlgebraData, h_basis: Sequence[Sequence[Number]]) -> List[Vector]:
    """Basis of {X : [X, h] = 0 for every h in h_basis}."""
    if not h_basis:
        return [[algebra.field.convert(int(i == j)) for j in range(algebra.dim)] for i in range(algebra.dim)]
    rows = []
    for h in h_basis:
        # [X, h] = -ad_h X
        rows.extend(algebra.ad(h))
    return nullspace(rows, algebra.dim, algebra.field)


def is_subalgebra(algebra: LieAlgebraData, basis: Sequence[Sequence[Number]]) -> bool:
    if not basis:
        return True
    field = algebra.field
    target = rank(basis, algebra.dim, field)
    for x, y in itertools.combinations(basis, 2):
        if rank(list(basis) + [algebra.bracket(x, y)], algebra.dim, field) != target:
            return False
    return True


def so_matrices(n: int) -> List[Matrix]:
    """E_ij - E_ji for i < j."""
    result = []
    for i, j in itertools.combinations(range(n), 2):
        matrix = _zero(n)
        matrix[i][j] = Fraction(1)
        matrix[j][i] = Fraction(-1)
        result.append(matrix)
    return result


def so_labels(n: int) -> List[str]:
    return [f"E{i + 1}{j + 1}" for i, j in itertools.combinations(range(n), 2)]


def so_algebra(n: int, field: Field = EXACT) -> LieAlgebraData:
    return lie_from_matrices(so_matrices(n), field, so_labels(n))


def so_gram_matrices(gram: Matrix, field: Field = EXACT) -> List[Matrix]:
    """Basis G^-1 (E_ij - E_ji) of the Lie algebra of the form with Gram matrix G."""
    inverse_gram = inverse(gram, field)
    return [matmul(inverse_gram, s) for s in so_matrices(len(gram))]


def so_gram_algebra(gram: Matrix, field: Field = EXACT) -> LieAlgebraData:
    return lie_from_matrices(so_gram_matrices(gram, field), field, so_labels(len(gram)))


# left multiplication by i, j, k on H = R^4 with basis 1, i, j, k
QUATERNION_UNITS = (
    [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]],
    [[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]],
    [[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]],
)


def quaternion_left(q: Sequence[Number]) -> Matrix:
    """Left multiplication by q0 + q1 i + q2 j + q3 k on R^4."""
    result = [[Fraction(q[0]) * int(r == s) for s in range(4)] for r in range(4)]
    for coeff, unit in zip(q[1:], QUATERNION_UNITS):
        for r in range(4):
            for s in range(4):
                result[r][s] += Fraction(coeff) * unit[r][s]
    return result


def su2_matrices() -> List[Matrix]:
    """su2 as left multiplication by imaginary quaternions on R^4."""
    return [quaternion_left(q) for q in ((0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))]


def su2_algebra(field: Field = EXACT) -> LieAlgebraData:
    return lie_from_matrices(su2_matrices(), field, ["i", "j", "k"])


def sp2_matrices() -> List[Matrix]:
    """Quaternionic anti-Hermitian 2x2 matrices acting on H^2 = R^8 by left multiplication."""
    units = ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
    zero = _zero(4)
    result = []
    for q in units[1:]:
        result.append(block_diagonal([quaternion_left(q), zero]))
    for q in units[1:]:
        result.append(block_diagonal([zero, quaternion_left(q)]))
    for q in units:
        upper = quaternion_left(q)
        lower = quaternion_left((-q[0], q[1], q[2], q[3]))
        matrix = _zero(8)
        for r in range(4):
            for s in range(4):
                matrix[r][4 + s] = upper[r][s]
                matrix[4 + r][s] = lower[r][s]
        result.append(matrix)
    return result


def sp2_algebra(field: Field = EXACT) -> LieAlgebraData:
    return lie_from_matrices(sp2_matrices(), field)


def abelian_algebra(n: int, field: Field = EXACT, labels: Optional[Sequence[str]] = None) -> LieAlgebraData:
    return LieAlgebraData(n, {}, labels, None, field)


def hyperbolic_algebra(n: int, field: Field = EXACT) -> LieAlgebraData:
    """The solvable algebra [A, X_i] = X_i of real hyperbolic (n+1)-space."""
    brackets = {(0, i): {i: Fraction(1)} for i in range(1, n + 1)}
    labels = ["A"] + [f"X{i}" for i in range(1, n + 1)]
    return LieAlgebraData(n + 1, brackets, labels, None, field)


def harmonic_so3(degree: int, field: Field = EXACT) -> Tuple[List[Matrix], Matrix]:
    """The irreducible so3 module of dimension 2 degree + 1.

    The module is the space of harmonic polynomials of the given degree in x, y, z,
    acted on by the rotation fields y d/dz - z d/dy and cyclic. Returns the three
    generator matrices and the Fischer Gram matrix, for which they are skew.
    """
    x, y, z = sympy.symbols("x y z")
    variables = (x, y, z)
    exponents = sorted(
        (e for e in itertools.product(range(degree + 1), repeat=3) if sum(e) == degree), reverse=True
    )
    monomials = [x ** a * y ** b * z ** c for a, b, c in exponents]

    def coefficients(poly, exps) -> List[Fraction]:
        p = sympy.Poly(poly, *variables)
        return [Fraction(str(p.coeff_monomial(x ** a * y ** b * z ** c))) for a, b, c in exps]

    lower = sorted(
        (e for e in itertools.product(range(degree + 1), repeat=3) if sum(e) == degree - 2), reverse=True
    )
    if lower:
        laplacians = [
            coefficients(sum(sympy.diff(m, v, 2) for v in variables), lower) for m in monomials
        ]
        rows = [list(row) for row in zip(*laplacians)]
        harmonic = nullspace(rows, len(monomials), EXACT)
    else:
        harmonic = [[Fraction(int(i == j)) for j in range(len(monomials))] for i in range(len(monomials))]
    polys = [sum(sympy.Rational(c.numerator, c.denominator) * m for c, m in zip(h, monomials)) for h in harmonic]
    solver = CoordinateSolver(harmonic, EXACT)
    fields = (
        lambda p: y * sympy.diff(p, z) - z * sympy.diff(p, y),
        lambda p: z * sympy.diff(p, x) - x * sympy.diff(p, z),
        lambda p: x * sympy.diff(p, y) - y * sympy.diff(p, x),
    )
    matrices = []
    for rotation in fields:
        columns = [solver.coordinates(coefficients(sympy.expand(rotation(p)), exponents)) for p in polys]
        matrices.append([[field.convert(columns[s][r]) for s in range(len(polys))] for r in range(len(polys))])
    weights = [math.factorial(a) * math.factorial(b) * math.factorial(c) for a, b, c in exponents]
    gram = [
        [field.convert(sum(w * p * q for w, p, q in zip(weights, h1, h2))) for h2 in harmonic]
        for h1 in harmonic
    ]
    return matrices, gram

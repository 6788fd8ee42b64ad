"""
Reductive homogeneous spaces G/H: invariant metrics and forms, the
Chevalley-Eilenberg differential on invariant forms, isotropy decomposition and
Ricci curvature.
"""

import itertools
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, NamedTuple, Optional, Sequence, Tuple

import scipy.linalg

from .errors import PreconditionError, StructuralError
from .exterior import (
    Frame,
    KForm,
    basis_form,
    basis_forms,
    basis_vector,
    endo_action,
    evaluate,
    extend_derivation,
    from_vector,
    max_norm,
    one_form,
    to_vector,
    wedge,
    zero_form,
)
from .lie import LieAlgebraData
from .linalg import (
    CoordinateSolver,
    Matrix,
    Vector,
    cluster,
    eigenspaces,
    identity,
    inertia,
    inverse,
    matmul,
    matvec,
    nullspace,
    rank,
    solve,
    transpose,
)
from .scalars import EXACT, Field, Number

logger = logging.getLogger(__name__)

REFINE_TOLERANCE = 1e-7


@dataclass(frozen=True)
class InvariantMetric:
    """An inner product on m given by its Gram matrix in the m basis."""

    gram: Tuple[Tuple[Number, ...], ...]

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence[Number]]) -> "InvariantMetric":
        return cls(tuple(tuple(row) for row in matrix))

    @classmethod
    def diagonal(cls, weights: Sequence[Number]) -> "InvariantMetric":
        n = len(weights)
        return cls(tuple(tuple(weights[i] if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def identity(cls, n: int) -> "InvariantMetric":
        return cls.diagonal([Fraction(1)] * n)

    @property
    def matrix(self) -> Matrix:
        return [list(row) for row in self.gram]

    @property
    def dimension(self) -> int:
        return len(self.gram)

    def is_diagonal(self) -> bool:
        return all(self.gram[i][j] == 0 for i in range(self.dimension) for j in range(self.dimension) if i != j)

    def weights(self) -> List[Number]:
        return [self.gram[i][i] for i in range(self.dimension)]


class ReductiveSpace:
    """A reductive decomposition g = h + m.

    The algebra is rewritten in the adapted basis (h basis first, then m basis);
    `isotropy` holds, for each h generator, the matrix of ad restricted to m,
    column j being [h_a, m_j] in m coordinates.
    """

    def __init__(
        self,
        algebra: LieAlgebraData,
        h_basis: Sequence[Sequence[Number]],
        m_basis: Sequence[Sequence[Number]],
        m_labels: Optional[Sequence[str]] = None,
        name: str = "",
    ) -> None:
        self.field = algebra.field
        self.algebra = algebra
        self.name = name
        self.h_basis = [list(v) for v in h_basis]
        self.m_basis = [list(v) for v in m_basis]
        self.dh = len(self.h_basis)
        self.dm = len(self.m_basis)
        if self.dh + self.dm != algebra.dim:
            raise StructuralError(
                f"dim h + dim m = {self.dh + self.dm} does not match dim g = {algebra.dim}"
            )
        vectors = self.h_basis + self.m_basis
        if all(v[i] == int(i == j) for j, v in enumerate(vectors) for i in range(algebra.dim)):
            self.adapted = algebra
        else:
            self.adapted = algebra.change_basis(vectors)
        self.frame = Frame.euclidean(self.dm, m_labels)
        self._check_reductive()
        self.isotropy = [
            [
                [self.adapted.constant(a, self.dh + j, self.dh + k) for j in range(self.dm)]
                for k in range(self.dm)
            ]
            for a in range(self.dh)
        ]
        self._m_brackets = [
            [
                [self.adapted.constant(self.dh + p, self.dh + q, self.dh + k) for k in range(self.dm)]
                for q in range(self.dm)
            ]
            for p in range(self.dm)
        ]
        self._generator_differentials = None

    @classmethod
    def from_adapted(
        cls,
        algebra: LieAlgebraData,
        dh: int,
        m_labels: Optional[Sequence[str]] = None,
        name: str = "",
    ) -> "ReductiveSpace":
        """A space whose algebra basis already lists h first and m after."""
        units = [[Fraction(int(i == j)) for i in range(algebra.dim)] for j in range(algebra.dim)]
        return cls(algebra, units[:dh], units[dh:], m_labels, name)

    def _check_reductive(self) -> None:
        field = self.field
        for a, b in itertools.combinations(range(self.dh), 2):
            if any(not field.is_zero(c) for k, c in self.adapted.basis_bracket(a, b).items() if k >= self.dh):
                logger.error("[h, h] leaves h for the pair (%d, %d)", a, b)
                raise StructuralError("h is not a subalgebra")
        for a in range(self.dh):
            for j in range(self.dh, self.adapted.dim):
                if any(not field.is_zero(c) for k, c in self.adapted.basis_bracket(a, j).items() if k < self.dh):
                    logger.error("[h, m] leaves m for the pair (%d, %d)", a, j)
                    raise StructuralError("The decomposition is not reductive: [h, m] is not inside m")

    def m_bracket(self, p: int, q: int) -> Vector:
        """[m_p, m_q] projected to m, in m coordinates (0-based)."""
        return list(self._m_brackets[p][q])

    def h_bracket(self, p: int, q: int) -> Vector:
        """[m_p, m_q] projected to h, in h coordinates."""
        return [self.adapted.constant(self.dh + p, self.dh + q, a) for a in range(self.dh)]

    def is_symmetric(self) -> bool:
        return all(
            self.field.is_zero(x) for p in range(self.dm) for q in range(self.dm) for x in self._m_brackets[p][q]
        )

    def is_almost_effective(self) -> bool:
        """The isotropy representation is injective on h."""
        flat = [[x for row in matrix for x in row] for matrix in self.isotropy]
        return rank(flat, self.dm * self.dm, self.field) == self.dh

    def killing_on_m(self) -> Matrix:
        killing = self.adapted.killing_form()
        return [[killing[self.dh + p][self.dh + q] for q in range(self.dm)] for p in range(self.dm)]

    def generator_differentials(self) -> List[KForm]:
        """d e^l = -sum_{p<q} c^l_pq e^p ^ e^q with the m part of the brackets."""
        if self._generator_differentials is None:
            result = []
            for l in range(self.dm):
                terms = {}
                for p, q in itertools.combinations(range(self.dm), 2):
                    c = self._m_brackets[p][q][l]
                    if c != 0:
                        terms[(p + 1, q + 1)] = -c
                result.append(KForm(self.frame, 2, terms))
            self._generator_differentials = result
        return self._generator_differentials

    def is_invariant(self, a: KForm) -> bool:
        return all(
            self.field.is_zero(max_norm(endo_action(matrix, a), self.field)) for matrix in self.isotropy
        )


def check_metric(space: ReductiveSpace, metric: InvariantMetric) -> None:
    """Raise unless the metric is symmetric, positive definite and isotropy invariant."""
    field = space.field
    gram = metric.matrix
    n = space.dm
    if metric.dimension != n:
        raise StructuralError(f"Metric of size {metric.dimension} on m of dimension {n}")
    if any(not field.equal(gram[i][j], gram[j][i]) for i in range(n) for j in range(n)):
        raise StructuralError("The metric is not symmetric")
    signature = inertia(gram, field)
    if signature.positive != n:
        raise StructuralError(f"The metric is not positive definite (inertia {tuple(signature)})")
    for matrix in space.isotropy:
        lhs = matmul(transpose(matrix), gram)
        rhs = matmul(gram, matrix)
        if any(not field.is_zero(lhs[i][j] + rhs[i][j]) for i in range(n) for j in range(n)):
            raise StructuralError("The metric is not invariant under the isotropy action")


def metric_from_bilinear(space: ReductiveSpace, kind: str = "killing", scale: Number = -1) -> InvariantMetric:
    """scale * (Killing or trace form) restricted to the m basis."""
    form = space.algebra.killing_form() if kind == "killing" else space.algebra.trace_form()
    rows = [matvec(form, v) for v in space.m_basis]
    return InvariantMetric.from_matrix(
        [[scale * sum(x * y for x, y in zip(row, w)) for w in space.m_basis] for row in rows]
    )


def reductive_split(
    algebra: LieAlgebraData,
    h_basis: Sequence[Sequence[Number]],
    bilinear: str = "killing",
    m_labels: Optional[Sequence[str]] = None,
    name: str = "",
) -> ReductiveSpace:
    """Take m to be the orthogonal complement of h for the Killing or trace form."""
    field = algebra.field
    if bilinear == "killing":
        form = algebra.killing_form()
    elif bilinear == "trace":
        form = algebra.trace_form()
    else:
        raise StructuralError(f"Unknown bilinear form '{bilinear}'")
    rows = [matvec(form, h) for h in h_basis]
    restricted = [[sum(x * y for x, y in zip(row, h)) for h in h_basis] for row in rows]
    if rank(restricted, len(h_basis), field) != len(h_basis):
        logger.error("The %s form is degenerate on h", bilinear)
        raise StructuralError(
            f"The {bilinear} form is degenerate on h; give the m basis explicitly instead"
        )
    m_basis = nullspace(rows, algebra.dim, field)
    return ReductiveSpace(algebra, h_basis, m_basis, m_labels, name)


def _orthogonalize(gram: Matrix, field: Field) -> Tuple[Matrix, List[Number]]:
    """Gram-Schmidt without normalization: rows u_i (in the old basis) and <u_i, u_i>."""
    n = len(gram)
    vectors: Matrix = []
    norms: List[Number] = []

    def inner(u, v):
        return sum(u[i] * gram[i][j] * v[j] for i in range(n) for j in range(n) if u[i] != 0 and v[j] != 0)

    for i in range(n):
        u = [field.convert(int(i == j)) for j in range(n)]
        for w, norm in zip(vectors, norms):
            factor = inner(u, w) / norm
            u = [a - factor * b for a, b in zip(u, w)]
        vectors.append(u)
        norms.append(inner(u, u))
    return vectors, norms


def orthonormal_model(space: ReductiveSpace, metric: InvariantMetric) -> ReductiveSpace:
    """The same space with an m basis orthonormal for `metric`.

    The metric is pushed into the structure constants: for X~_i = X_i / sqrt(w_i),
    c~^k_ij = c^k_ij sqrt(w_k / (w_i w_j)) with weight 1 on h. In exact mode only
    the square roots of these ratios must be rational, otherwise
    `InexactScalarError` is raised.
    """
    field = space.field
    check_metric(space, metric)
    if not metric.is_diagonal():
        vectors, weights = _orthogonalize(metric.matrix, field)
        m_basis = [
            [sum(u[p] * space.m_basis[p][i] for p in range(space.dm)) for i in range(space.algebra.dim)]
            for u in vectors
        ]
        space = ReductiveSpace(space.algebra, space.h_basis, m_basis, None, space.name)
    else:
        weights = metric.weights()
    all_weights = [field.convert(1)] * space.dh + list(weights)
    brackets = {}
    for (i, j), coeffs in space.adapted.items():
        brackets[(i, j)] = {
            k: c * field.sqrt(all_weights[k] / (all_weights[i] * all_weights[j])) for k, c in coeffs.items()
        }
    labels = space.frame.labels
    algebra = LieAlgebraData(space.adapted.dim, brackets, space.adapted.labels, None, field, check=False)
    return ReductiveSpace.from_adapted(algebra, space.dh, labels, space.name)


def rescale_orthonormal(space: ReductiveSpace, t: Number) -> ReductiveSpace:
    """The orthonormal model of the metric t^2 g from the one of g.

    Brackets of two m vectors scale by 1/t in m and by 1/t^2 in h; the rest is unchanged.
    """
    if t <= 0:
        raise PreconditionError(f"Scale factor must be positive, got {t}")
    dh = space.dh
    brackets = {}
    for (i, j), coeffs in space.adapted.items():
        if i >= dh and j >= dh:
            brackets[(i, j)] = {k: c / t if k >= dh else c / (t * t) for k, c in coeffs.items()}
        else:
            brackets[(i, j)] = dict(coeffs)
    algebra = LieAlgebraData(space.adapted.dim, brackets, space.adapted.labels, None, space.field, check=False)
    return ReductiveSpace.from_adapted(algebra, dh, space.frame.labels, space.name)


def invariant_forms(space: ReductiveSpace, degree: int) -> List[KForm]:
    """Basis of the h-invariant k-forms on m."""
    frame = space.frame
    keys = basis_forms(frame, degree)
    if not keys:
        return []
    if not space.isotropy:
        return [basis_form(frame, key, space.field.convert(1)) for key in keys]
    columns = []
    for key in keys:
        form = basis_form(frame, key, space.field.convert(1))
        column = []
        for matrix in space.isotropy:
            column.extend(to_vector(endo_action(matrix, form), keys))
        columns.append(column)
    rows = [list(row) for row in zip(*columns)]
    result = [from_vector(frame, degree, keys, v) for v in nullspace(rows, len(keys), space.field)]
    logger.debug("%d invariant %d-forms on '%s'", len(result), degree, space.name)
    return result


def ce_differential(space: ReductiveSpace, a: KForm, check: bool = True) -> KForm:
    """Exterior derivative of an invariant form on G/H from the m part of the brackets."""
    if a.frame != space.frame:
        raise StructuralError("Form does not live on m")
    if check and not space.is_invariant(a):
        logger.error("Form %s is not invariant", a)
        raise StructuralError("The Chevalley-Eilenberg formula only applies to invariant forms")
    return extend_derivation(space.generator_differentials(), a)


class IsotypicComponent(NamedTuple):
    """An eigenspace of the Casimir operator and its irreducible block dimensions."""

    casimir: Number
    dimension: int
    blocks: Tuple[int, ...]
    basis: List[Vector]


def _independent(matrices: Sequence[Matrix], field: Field) -> List[Matrix]:
    chosen: List[Matrix] = []
    for matrix in matrices:
        flat = [[x for row in m for x in row] for m in chosen + [matrix]]
        if rank(flat, len(flat[0]), field) > len(chosen):
            chosen.append(matrix)
    return chosen


def _split_component(
    matrices: Sequence[Matrix], gram: Matrix, basis: List[Vector], field: Field, rng: random.Random
) -> Tuple[int, ...]:
    """Irreducible block dimensions of an isotypic component.

    Eigenspaces of a random self-adjoint element of the commutant are irreducible
    submodules; their eigenvalues are clustered in floating point.
    """
    d = len(basis)
    solver = CoordinateSolver(basis, field)
    restricted = []
    for matrix in matrices:
        columns = [solver.coordinates(matvec(matrix, w)) for w in basis]
        restricted.append(transpose(columns))
    rows = []
    for r_a in restricted:
        for r in range(d):
            for s in range(d):
                row = [field.convert(0)] * (d * d)
                for t in range(d):
                    row[t * d + s] += r_a[r][t]
                    row[r * d + t] -= r_a[t][s]
                rows.append(row)
    commutant = nullspace(rows, d * d, field)
    if len(commutant) <= 1:
        return (d,)
    weights = [rng.randint(1, 97) for _ in commutant]
    x = [[sum(w * c[r * d + s] for w, c in zip(weights, commutant)) for s in range(d)] for r in range(d)]
    gram_w = [[sum(u[i] * gram[i][j] * v[j] for i in range(len(u)) for j in range(len(v))) for v in basis] for u in basis]
    adjoint = matmul(matmul(inverse(gram_w, field), transpose(x)), gram_w)
    symmetric = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(x, adjoint)]
    lhs = [[float(v) for v in row] for row in matmul(gram_w, symmetric)]
    values = scipy.linalg.eigh(lhs, [[float(v) for v in row] for row in gram_w], eigvals_only=True)
    loose = Field.floating(REFINE_TOLERANCE)
    return tuple(sorted((count for _, count in cluster([float(v) for v in values], loose)), reverse=True))


def decompose_module(
    matrices: Sequence[Matrix], gram: Optional[Matrix] = None, field: Field = EXACT, seed: int = 0
) -> List[IsotypicComponent]:
    """Decompose a representation by skew-adjoint matrices into isotypic components.

    The Casimir operator sum B^ab rho_a rho_b of the negative trace form B separates
    the components; its kernel is the trivial part, split into 1-dimensional blocks.
    Without generators the whole space is a single trivial block.
    """
    if gram is None:
        gram = identity(len(matrices[0]), field) if matrices else None
    if not matrices:
        n = len(gram) if gram else 0
        return [IsotypicComponent(field.convert(0), n, (n,), identity(n, field))]
    n = len(gram)
    generators = _independent(matrices, field)
    trace_form = [[-sum(matmul(a, b)[i][i] for i in range(n)) for b in generators] for a in generators]
    inverse_form = inverse(trace_form, field)
    casimir = [[field.convert(0)] * n for _ in range(n)]
    for (i, a), (j, b) in itertools.product(enumerate(generators), repeat=2):
        if inverse_form[i][j] == 0:
            continue
        product = matmul(a, b)
        for r in range(n):
            for s in range(n):
                casimir[r][s] += inverse_form[i][j] * product[r][s]
    rng = random.Random(seed)
    result = []
    for value, basis in eigenspaces(casimir, field):
        if not basis:
            continue
        if field.is_zero(value):
            blocks = (1,) * len(basis)
        else:
            blocks = _split_component(generators, gram, basis, field, rng)
        result.append(IsotypicComponent(value, len(basis), blocks, basis))
    return result


def block_dimensions(components: Sequence[IsotypicComponent]) -> List[int]:
    return sorted((b for component in components for b in component.blocks), reverse=True)


def isotypic_decomposition(
    space: ReductiveSpace, metric: Optional[InvariantMetric] = None
) -> List[IsotypicComponent]:
    """Isotypic decomposition of the isotropy module m."""
    gram = metric.matrix if metric else identity(space.dm, space.field)
    return decompose_module(space.isotropy, gram, space.field)


def ricci(space: ReductiveSpace, metric: Optional[InvariantMetric] = None) -> Matrix:
    """Ricci tensor of a G-invariant metric on G/H, as a matrix in the m basis.

    Ric(X, Y) = -1/2 sum g^ab <[X, X_a]_m, [Y, X_b]_m> - 1/2 B(X, Y)
                + 1/4 sum g^ac g^bd <[X_a, X_b]_m, X> <[X_c, X_d]_m, Y>
                - 1/2 (<[Z, X]_m, Y> + <[Z, Y]_m, X>)
    with B the Killing form of g and <Z, W> = tr(pr_m ad W) on m. Z vanishes when
    G is unimodular.
    """
    field = space.field
    n = space.dm
    metric = metric or InvariantMetric.identity(n)
    check_metric(space, metric)
    gram = metric.matrix
    ginv = inverse(gram, field) if n else []
    c = [[space.m_bracket(p, a) for a in range(n)] for p in range(n)]
    lowered = [[matvec(gram, c[p][a]) for a in range(n)] for p in range(n)]

    def dot(u, v):
        return sum(x * y for x, y in zip(u, v))

    first = [
        [
            sum(ginv[a][b] * dot(c[p][a], lowered[q][b]) for a in range(n) for b in range(n) if ginv[a][b] != 0)
            for q in range(n)
        ]
        for p in range(n)
    ]
    projections = [[[lowered[a][b][p] for b in range(n)] for a in range(n)] for p in range(n)]
    raised = [matmul(matmul(ginv, m), ginv) for m in projections]
    third = [
        [sum(projections[p][a][b] * raised[q][a][b] for a in range(n) for b in range(n)) for q in range(n)]
        for p in range(n)
    ]
    traces = [sum(c[w][a][a] for a in range(n)) for w in range(n)]
    z = matvec(ginv, traces) if n else []
    if any(not field.is_zero(x) for x in z):
        logger.debug("'%s' is not unimodular, including the mean curvature term", space.name)
    zx = [[sum(z[w] * c[w][p][k] for w in range(n)) for k in range(n)] for p in range(n)]
    lowered_zx = [matvec(gram, v) for v in zx]
    killing = space.killing_on_m()
    return [
        [
            -Fraction(1, 2) * first[p][q]
            - Fraction(1, 2) * killing[p][q]
            + Fraction(1, 4) * third[p][q]
            - Fraction(1, 2) * (lowered_zx[p][q] + lowered_zx[q][p])
            for q in range(n)
        ]
        for p in range(n)
    ]


def einstein_constant(ric: Matrix, metric: InvariantMetric, field: Field = EXACT) -> Optional[Number]:
    """c with Ric = c g, or None when the metric is not Einstein."""
    gram = metric.matrix
    n = len(gram)
    if n == 0:
        return None
    c = ric[0][0] / gram[0][0]
    if all(field.equal(ric[i][j], c * gram[i][j]) for i in range(n) for j in range(n)):
        return c
    return None


def cartan_ricci(algebra: LieAlgebraData) -> Matrix:
    """Ricci tensor of the left-invariant metric making the basis orthonormal.

    Solves d e^i = -omega^i_j ^ e^j for skew connection forms with constant
    coefficients, then contracts Omega = d omega + omega ^ omega.
    """
    field = algebra.field
    n = algebra.dim
    frame = Frame.euclidean(n)
    pairs = list(itertools.combinations(range(n), 2))
    unknown = {}
    for i, j in pairs:
        for k in range(n):
            unknown[(i, j, k)] = len(unknown)

    def gamma_row(i, j, k, sign, row):
        if i < j:
            row[unknown[(i, j, k)]] += sign
        elif i > j:
            row[unknown[(j, i, k)]] -= sign

    rows, rhs = [], []
    for i in range(n):
        for a, b in pairs:
            row = [0] * len(unknown)
            # coefficient of e^a ^ e^b in omega^i_j ^ e^j is Gamma^i_ba - Gamma^i_ab
            gamma_row(i, b, a, 1, row)
            gamma_row(i, a, b, -1, row)
            rows.append(row)
            rhs.append(algebra.constant(a, b, i))
    solution = solve(rows, rhs, len(unknown), field)

    def connection(i, j) -> KForm:
        if i == j:
            return zero_form(frame, 1)
        if i < j:
            return one_form(frame, [solution[unknown[(i, j, k)]] for k in range(n)])
        return -connection(j, i)

    differentials = []
    for l in range(n):
        differentials.append(
            KForm(frame, 2, {(a + 1, b + 1): -algebra.constant(a, b, l) for a, b in pairs})
        )
    omega = [[connection(i, j) for j in range(n)] for i in range(n)]
    curvature = [
        [
            extend_derivation(differentials, omega[i][j])
            + sum((wedge(omega[i][k], omega[k][j]) for k in range(n)), zero_form(frame, 2))
            for j in range(n)
        ]
        for i in range(n)
    ]
    vectors = [basis_vector(frame, i) for i in range(1, n + 1)]
    return [
        [sum(evaluate(curvature[i][j], [vectors[i], vectors[l]]) for i in range(n)) for l in range(n)]
        for j in range(n)
    ]


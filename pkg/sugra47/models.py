"""
Built-in homogeneous models: SO7/G2, CP2 x S3, S3 x T4, flat tori, the
hyperbolic-times-sphere model, SO8/SO7 and a few Lie groups; plus the rows of
the so7 subalgebra table checked by centralizer and isotypic computations.
"""

import logging
from fractions import Fraction
from typing import List, NamedTuple, Optional, Sequence, Tuple

from .dga import cp2xs3_dga, lie_from_dga
from .errors import StructuralError
from .exterior import Frame, KForm, basis_form
from .g2 import canonical_g2_form, stabilizer_algebra
from .homogeneous import (
    InvariantMetric,
    ReductiveSpace,
    block_dimensions,
    decompose_module,
    metric_from_bilinear,
    orthonormal_model,
)
from .lie import (
    LieAlgebraData,
    abelian_algebra,
    block_diagonal,
    centralizer,
    direct_sum,
    harmonic_so3,
    hyperbolic_algebra,
    is_subalgebra,
    so_algebra,
    so_gram_algebra,
    so_matrices,
    su2_algebra,
    su2_matrices,
)
from .linalg import Matrix, identity
from .scalars import EXACT, Field, Number

logger = logging.getLogger(__name__)


class HomogeneousModel(NamedTuple):
    """A reductive space with an invariant metric."""

    name: str
    space: ReductiveSpace
    metric: InvariantMetric

    def orthonormal(self) -> ReductiveSpace:
        return orthonormal_model(self.space, self.metric)


def _units(n: int, indices: Sequence[int]) -> List[List[Fraction]]:
    return [[Fraction(int(i == j)) for i in range(n)] for j in indices]


def _zero(n: int) -> Matrix:
    return [[Fraction(0)] * n for _ in range(n)]


def so7_g2_space(field: Field = EXACT) -> HomogeneousModel:
    """SO7/G2 with m spanned by A_k, (A_k)_ij = omega_kij.

    The A_k are orthonormal for -(1/6) tr, and the isotropy action of X in g2
    on m is X itself in this basis.
    """
    so7 = so_algebra(7, field)
    omega = canonical_g2_form()
    h_matrices = stabilizer_algebra(omega, field, skew=True)
    m_matrices = [
        [[omega.coefficient((k, i, j)) for j in range(1, 8)] for i in range(1, 8)] for k in range(1, 8)
    ]
    h = [so7.coordinates_of_matrix(x) for x in h_matrices]
    m = [so7.coordinates_of_matrix(x) for x in m_matrices]
    space = ReductiveSpace(so7, h, m, [f"A{k}" for k in range(1, 8)], "SO7/G2")
    return HomogeneousModel(space.name, space, InvariantMetric.identity(7))


def cp2xs3_space(a: Number = 1, c: Sequence[Number] = (1, 1, 1), field: Field = EXACT) -> HomogeneousModel:
    """CP2 x S3 from the corrected structure equations.

    h is spanned by the duals of g1..g4, m by those of a1..a4 and b1..b3; the
    metric is a on the a-directions and c1, c2, c3 on the b-directions.
    """
    a, c = field.convert(a), [field.convert(x) for x in c]
    if len(c) != 3 or a <= 0 or any(x <= 0 for x in c):
        raise StructuralError(f"Metric weights must be positive, got a={a}, c={tuple(c)}")
    algebra = lie_from_dga(cp2xs3_dga(True, field))
    units = _units(algebra.dim, range(algebra.dim))
    space = ReductiveSpace(
        algebra, units[7:], units[:7], ["a1", "a2", "a3", "a4", "b1", "b2", "b3"], "CP2xS3"
    )
    weights = [a] * 4 + c
    return HomogeneousModel(space.name, space, InvariantMetric.diagonal(weights))


def s3xt4_space(lambdas: Sequence[Number] = (1, 1, 1), field: Field = EXACT) -> HomogeneousModel:
    """S3 x T4 as a Lie group with orthonormal coframe w1, w2, w3, r1..r4.

    The su2 brackets are [X_b, X_c] = -(l_a / (l_b l_c)) X_a for cyclic (a, b, c),
    so that d w^a = (l_a / (l_b l_c)) w^b ^ w^c.
    """
    lam = [field.convert(x) for x in lambdas]
    if len(lam) != 3 or any(x == 0 for x in lam):
        raise StructuralError(f"Expected three nonzero weights, got {tuple(lambdas)}")
    brackets = {}
    for a, b, c in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        brackets[(b, c)] = {a: -lam[a] / (lam[b] * lam[c])}
    labels = ["w1", "w2", "w3", "r1", "r2", "r3", "r4"]
    algebra = LieAlgebraData(7, brackets, labels, None, field)
    space = ReductiveSpace.from_adapted(algebra, 0, labels, "S3xT4")
    return HomogeneousModel(space.name, space, InvariantMetric.identity(7))


def s3xt4_phi(frame: Frame, self_dual: bool = True) -> KForm:
    """w1 ^ sigma with sigma = r1^r2 +- r3^r4."""
    sign = 1 if self_dual else -1
    return basis_form(frame, (1, 4, 5)) + sign * basis_form(frame, (1, 6, 7))


def torus_space(n: int = 7, field: Field = EXACT) -> HomogeneousModel:
    space = ReductiveSpace.from_adapted(abelian_algebra(n, field), 0, None, f"T{n}")
    return HomogeneousModel(space.name, space, InvariantMetric.identity(n))


def hyperbolic_times_sphere_space(field: Field = EXACT) -> HomogeneousModel:
    """Q3 x P4 with Q3 hyperbolic (Einstein constant -1/6) and P4 = SO5/SO4 round (1/3).

    Hyperbolic 3-space is the solvable group [A, X_i] = X_i with metric 12 times
    the standard one, the round 4-sphere carries 9 times the metric for which
    the E_i5 are orthonormal. Only float mode can orthonormalize it.
    """
    algebra = direct_sum(hyperbolic_algebra(2, field), so_algebra(5, field))
    pairs = [(i, j) for i in range(5) for j in range(i + 1, 5)]
    h = [3 + k for k, (_, j) in enumerate(pairs) if j != 4]
    m = [0, 1, 2] + [3 + k for k, (_, j) in enumerate(pairs) if j == 4]
    units = _units(algebra.dim, range(algebra.dim))
    space = ReductiveSpace(
        algebra,
        [units[k] for k in h],
        [units[k] for k in m],
        ["A", "X1", "X2", "E15", "E25", "E35", "E45"],
        "H3xS4",
    )
    weights = [field.convert(12)] * 3 + [field.convert(9)] * 4
    return HomogeneousModel(space.name, space, InvariantMetric.diagonal(weights))


def so8_so7_space(field: Field = EXACT) -> HomogeneousModel:
    """The symmetric sphere SO8/SO7 with metric -Killing on m = span(E_i8)."""
    so8 = so_algebra(8, field)
    pairs = [(i, j) for i in range(8) for j in range(i + 1, 8)]
    units = _units(so8.dim, range(so8.dim))
    h = [units[k] for k, (_, j) in enumerate(pairs) if j != 7]
    m = [units[k] for k, (_, j) in enumerate(pairs) if j == 7]
    space = ReductiveSpace(so8, h, m, [f"E{i}8" for i in range(1, 8)], "SO8/SO7")
    return HomogeneousModel(space.name, space, metric_from_bilinear(space, "killing", -1))


def su2_group_space(field: Field = EXACT) -> HomogeneousModel:
    """SU2 with the bi-invariant metric -Killing."""
    space = ReductiveSpace.from_adapted(su2_algebra(field), 0, ["i", "j", "k"], "SU2")
    return HomogeneousModel(space.name, space, metric_from_bilinear(space, "killing", -1))


def hyperbolic_space(n: int = 3, field: Field = EXACT) -> HomogeneousModel:
    """Real hyperbolic n-space as a solvable group, sectional curvature -1."""
    space = ReductiveSpace.from_adapted(hyperbolic_algebra(n - 1, field), 0, None, f"H{n}")
    return HomogeneousModel(space.name, space, InvariantMetric.identity(n))


class IsotropyRow(NamedTuple):
    """A subalgebra of so7 with its module structure on R7 and centralizer."""

    name: str
    module: str
    subalgebra_dimension: int
    blocks: Tuple[int, ...]
    expected_blocks: Tuple[int, ...]
    centralizer_dimension: int
    expected_centralizer: int
    note: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.blocks == self.expected_blocks and self.centralizer_dimension == self.expected_centralizer

    def to_json(self) -> dict:
        result = {
            "name": self.name,
            "module": self.module,
            "dim": self.subalgebra_dimension,
            "blocks": list(self.blocks),
            "centralizer_dim": self.centralizer_dimension,
            "ok": self.ok,
        }
        if self.note:
            result["note"] = self.note
        return result


def _isotropy_row(
    name: str,
    module: str,
    matrices: Sequence[Matrix],
    gram: Matrix,
    expected_blocks: Tuple[int, ...],
    expected_centralizer: int,
    field: Field,
    note: Optional[str] = None,
) -> IsotropyRow:
    ambient = so_gram_algebra(gram, field)
    h = [ambient.coordinates_of_matrix(x) for x in matrices]
    if not is_subalgebra(ambient, h):
        raise StructuralError(f"The generators of {name} do not span a subalgebra")
    components = decompose_module(matrices, gram, field)
    row = IsotropyRow(
        name,
        module,
        len(matrices),
        tuple(block_dimensions(components)),
        expected_blocks,
        len(centralizer(ambient, h)),
        expected_centralizer,
        note,
    )
    logger.info("%s: blocks %s, centralizer of dimension %d", name, row.blocks, row.centralizer_dimension)
    return row


def isotropy_rows(field: Field = EXACT) -> List[IsotropyRow]:
    """Check the so7 subalgebras su2, so3 (dimension 5 and 7 modules), so3^(3,3) and g2."""
    rows = []
    seven = identity(7, field)

    su2 = [block_diagonal([x, _zero(3)]) for x in su2_matrices()]
    rows.append(
        _isotropy_row(
            "su2",
            "V4+3R",
            su2,
            seven,
            (4, 1, 1, 1),
            6,
            field,
            note="centralizer is su2' + so3 (dimension 6), not su2' + so4 (dimension 9)",
        )
    )

    five, gram_five = harmonic_so3(2, field)
    gram = block_diagonal([gram_five, identity(2, field)])
    rows.append(
        _isotropy_row("so3^5", "V5+2R", [block_diagonal([x, _zero(2)]) for x in five], gram, (5, 1, 1), 1, field)
    )

    seven_module, gram_seven = harmonic_so3(3, field)
    rows.append(_isotropy_row("so3^7", "V7", seven_module, gram_seven, (7,), 0, field))

    diagonal = [block_diagonal([x, x, _zero(1)]) for x in so_matrices(3)]
    rows.append(_isotropy_row("so3^(3,3)", "V3+V3+R", diagonal, seven, (3, 3, 1), 1, field))

    g2 = stabilizer_algebra(canonical_g2_form(), field, skew=True)
    rows.append(_isotropy_row("g2", "V7", g2, seven, (7,), 0, field))
    return rows

"""
Pointwise G2 linear algebra: the canonical generic 3-form, the bilinear form
and metric a 3-form induces, orbit classification and the stabilizer algebra.
"""

import itertools
import logging
from enum import Enum
from fractions import Fraction
from typing import List, NamedTuple, Optional, Sequence, Tuple

from .errors import PreconditionError, StructuralError
from .exterior import (
    Frame,
    KForm,
    basis_forms,
    basis_vector,
    contraction_gram,
    endo_action,
    form_inner,
    interior,
    max_norm,
    to_vector,
    wedge_all,
)
from .linalg import Inertia, Matrix, determinant, inertia, nullspace
from .scalars import EXACT, Field, Number, format_scalar

logger = logging.getLogger(__name__)

CANONICAL_TERMS = (
    ((1, 2, 7), 1),
    ((3, 4, 7), 1),
    ((5, 6, 7), 1),
    ((1, 3, 5), 1),
    ((2, 4, 5), -1),
    ((1, 4, 6), -1),
    ((2, 3, 6), -1),
)


class OrbitClass(Enum):
    GENERIC_G2 = "GenericG2"
    GENERIC_G2_STAR = "GenericG2Star"
    DEGENERATE = "Degenerate"


class InducedMetric(NamedTuple):
    """The vol-valued bilinear form B of a 3-form and its normalization g."""

    B: Matrix
    g: Optional[Matrix]
    det_b: Number


class Classification(NamedTuple):
    orbit: OrbitClass
    signature: Inertia
    det_b: Number
    near_degenerate: bool = False

    def to_json(self) -> dict:
        return {
            "class": self.orbit.value,
            "detB": format_scalar(self.det_b),
            "signature": [self.signature.positive, self.signature.negative],
        }


class TorsionKind(Enum):
    PARALLEL = "parallel"
    WEAK = "weak"
    CO_CALIBRATED = "co-calibrated"
    GENERAL = "general"


class G2Torsion(NamedTuple):
    kind: TorsionKind
    lam: Optional[Number] = None


def _check_seven(omega: KForm) -> None:
    if omega.degree != 3 or omega.frame.n != 7:
        raise StructuralError(
            f"Expected a 3-form on a 7-frame, got degree {omega.degree} on dimension {omega.frame.n}"
        )


def canonical_g2_form(frame: Optional[Frame] = None) -> KForm:
    """The canonical generic 3-form e^127 + e^347 + e^567 + e^135 - e^245 - e^146 - e^236."""
    frame = frame or Frame.euclidean(7)
    if frame.n != 7 or frame.q != 0:
        raise StructuralError("The canonical G2 form lives on a Euclidean 7-frame")
    return KForm(frame, 3, {key: Fraction(sign) for key, sign in CANONICAL_TERMS})


def signed_canonical_form(signs: Sequence[int], frame: Optional[Frame] = None) -> KForm:
    """The canonical form with its seven terms multiplied by the given signs."""
    frame = frame or Frame.euclidean(7)
    if len(signs) != len(CANONICAL_TERMS):
        raise StructuralError("Expected one sign per canonical term")
    return KForm(
        frame, 3, {key: Fraction(sign * flip) for (key, sign), flip in zip(CANONICAL_TERMS, signs)}
    )


def induced_bilinear(omega: KForm) -> Matrix:
    """B_ij = coefficient of vol in -(1/6) (e_i ⌟ omega) ^ (e_j ⌟ omega) ^ omega."""
    _check_seven(omega)
    frame = omega.frame
    top = tuple(range(1, 8))
    contracted = [interior(basis_vector(frame, i), omega) for i in range(1, 8)]
    matrix = [[Fraction(0)] * 7 for _ in range(7)]
    for i in range(7):
        for j in range(i, 7):
            value = -Fraction(1, 6) * wedge_all([contracted[i], contracted[j], omega]).coefficient(top)
            matrix[i][j] = matrix[j][i] = value
    return matrix


def induced_metric(omega: KForm, field: Field = EXACT) -> InducedMetric:
    """g = (det B)^(-1/9) B, or no metric when B is degenerate.

    In exact mode the ninth root raises `InexactScalarError` unless det B is the
    ninth power of a rational.
    """
    b = induced_bilinear(omega)
    det_b = determinant(b, field)
    if field.is_zero(det_b):
        return InducedMetric(b, None, det_b)
    scale = field.root(det_b, 9)
    return InducedMetric(b, [[x / scale for x in row] for row in b], det_b)


def classify(omega: KForm, field: Field = EXACT) -> Classification:
    """Orbit of a 3-form under GL7.

    The signature is read off sign(det B) B, which has the signature of g, so no
    ninth root is needed.
    """
    b = induced_bilinear(omega)
    det_b = determinant(b, field)
    if field.is_zero(det_b):
        near = not field.exact and det_b != 0
        if near:
            logger.warning("det B = %s is within tolerance of zero, classifying as degenerate", det_b)
        return Classification(OrbitClass.DEGENERATE, inertia(b, field), det_b, near)
    sign = 1 if det_b > 0 else -1
    signature = inertia([[sign * x for x in row] for row in b], field)
    if signature.negative == 0 or signature.positive == 0:
        orbit = OrbitClass.GENERIC_G2
    elif {signature.positive, signature.negative} == {3, 4}:
        orbit = OrbitClass.GENERIC_G2_STAR
    else:
        logger.error("Unexpected signature %s for a nondegenerate 3-form", signature)
        raise StructuralError(f"A nondegenerate 3-form cannot induce the signature {signature}")
    return Classification(orbit, signature, det_b)


def find_split_form(frame: Optional[Frame] = None, field: Field = EXACT) -> Tuple[Tuple[int, ...], KForm]:
    """First sign pattern of the canonical terms whose form lies in the G2* orbit.

    The 2^7 patterns are walked in lexicographic order with +1 before -1.
    """
    for signs in itertools.product((1, -1), repeat=len(CANONICAL_TERMS)):
        omega = signed_canonical_form(signs, frame)
        if classify(omega, field).orbit is OrbitClass.GENERIC_G2_STAR:
            logger.debug("Sign pattern %s gives a split form", signs)
            return signs, omega
    raise StructuralError("No sign pattern of the canonical form is split")


def gl_basis(n: int) -> List[Matrix]:
    return [
        [[Fraction(int(r == a and c == b)) for c in range(n)] for r in range(n)]
        for a in range(n)
        for b in range(n)
    ]


def so_basis(n: int) -> List[Matrix]:
    """E_ab - E_ba for a < b."""
    result = []
    for a, b in itertools.combinations(range(n), 2):
        matrix = [[Fraction(0)] * n for _ in range(n)]
        matrix[a][b] = Fraction(1)
        matrix[b][a] = Fraction(-1)
        result.append(matrix)
    return result


def annihilator(forms: Sequence[KForm], generators: Sequence[Matrix], field: Field = EXACT) -> List[Matrix]:
    """Combinations of `generators` whose derivation action kills every form."""
    columns = []
    for matrix in generators:
        column = []
        for a in forms:
            column.extend(to_vector(endo_action(matrix, a), basis_forms(a.frame, a.degree)))
        columns.append(column)
    rows = [list(row) for row in zip(*columns)]
    n = len(generators[0])
    return [
        [[sum(c * m[r][s] for c, m in zip(vector, generators)) for s in range(n)] for r in range(n)]
        for vector in nullspace(rows, len(generators), field)
    ]


def stabilizer_algebra(omega: KForm, field: Field = EXACT, skew: bool = False) -> List[Matrix]:
    """Basis of {A : A.omega = 0} inside gl_n, or inside so_n when `skew` is set."""
    n = omega.frame.n
    generators = so_basis(n) if skew else gl_basis(n)
    if omega.is_zero():
        return generators
    result = annihilator([omega], generators, field)
    logger.debug("Stabilizer of %s has dimension %d", omega, len(result))
    return result


def contraction_3g_check(omega: KForm, field: Field = EXACT) -> Number:
    """Largest entry of <e_i ⌟ omega, e_j ⌟ omega> - 3 g_ij.

    The frame must be orthonormal for the induced metric, i.e. g = identity.
    """
    classification = classify(omega, field)
    if classification.orbit is not OrbitClass.GENERIC_G2:
        raise PreconditionError(f"Expected a generic G2 form, got {classification.orbit.value}")
    metric = induced_metric(omega, field)
    n = omega.frame.n
    if any(
        not field.equal(metric.g[i][j], int(i == j)) for i in range(n) for j in range(n)
    ):
        raise PreconditionError("The frame is not orthonormal for the metric induced by the form")
    gram = contraction_gram(omega)
    return field.max_abs(gram[i][j] - 3 * int(i == j) for i in range(n) for j in range(n))


def torsion_class(d_omega: KForm, d_star_omega: KForm, star_omega: KForm, field: Field = EXACT) -> G2Torsion:
    """Parallel, weak (d omega = lam *omega with lam != 0), co-calibrated or general."""
    closed = field.is_zero(max_norm(d_omega, field))
    coclosed = field.is_zero(max_norm(d_star_omega, field))
    if closed and coclosed:
        return G2Torsion(TorsionKind.PARALLEL)
    if not closed:
        norm = form_inner(star_omega, star_omega)
        if not field.is_zero(norm):
            lam = form_inner(d_omega, star_omega) / norm
            if not field.is_zero(lam) and field.is_zero(max_norm(d_omega - lam * star_omega, field)):
                return G2Torsion(TorsionKind.WEAK, lam)
    if coclosed:
        return G2Torsion(TorsionKind.CO_CALIBRATED)
    return G2Torsion(TorsionKind.GENERAL)


def weak_einstein_constant(lam: Number) -> Number:
    """Einstein constant (3/8) lam^2 of a weak G2 metric."""
    return Fraction(3, 8) * lam ** 2

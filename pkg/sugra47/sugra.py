"""
The supergravity layer: special 3-forms on the internal factor, the Maxwell
eigenproblem, the solution taxonomy and the Einstein equations of a
(4,7)-decomposable background.
"""

import itertools
import logging
from dataclasses import dataclass, field as dataclass_field, replace
from enum import Enum
from fractions import Fraction
from typing import Dict, List, NamedTuple, Optional, Tuple

import sympy

from .errors import InexactScalarError, PreconditionError, StructuralError
from .exterior import (
    KForm,
    basis_forms,
    form_inner,
    form_to_json,
    hodge,
    max_norm,
    norm_squared,
    to_vector,
    zero_form,
)
from .g2 import OrbitClass, TorsionKind, classify, torsion_class, weak_einstein_constant
from .homogeneous import (
    InvariantMetric,
    ReductiveSpace,
    ce_differential,
    invariant_forms,
    orthonormal_model,
    rescale_orthonormal,
    ricci,
)
from .linalg import CoordinateSolver, Matrix, cluster, nullspace, real_eigenvalues, transpose
from .models import s3xt4_phi, s3xt4_space
from .product import ProductFrame, flux_from_special_form, lorentz_constant, q_matrix, stress_blocks
from .scalars import EXACT, Field, Number, format_scalar, from_sympy

logger = logging.getLogger(__name__)

SPLIT_NORM = 7
WEAK_F = 2


class SolutionTag(Enum):
    TYPE_I = "TypeI"
    TYPE_II = "TypeII"
    TYPE_III_ALPHA = "TypeIIIalpha"
    TYPE_III_BETA = "TypeIIIbeta"


class Flag(Enum):
    NOT_SPECIAL_EINSTEIN = "not-special-gravitational-einstein"
    PARALLEL_TYPE_II = "parallel-g2-type-ii-excluded"
    WEAK_G2 = "weak-g2"
    CO_CALIBRATED = "co-calibrated"
    LORENTZ_MISMATCH = "lorentz-constant-mismatch"
    ORIENTATION_FLIPPED = "orientation-flipped"
    DEGRADED = "degraded-to-float"
    COMPLEX_DISCARDED = "complex-eigenvalues-discarded"


class SolutionType(NamedTuple):
    tag: SolutionTag
    genericity: Optional[OrbitClass] = None

    def to_json(self) -> dict:
        return {"tag": self.tag.value, "genericity": self.genericity.value if self.genericity else None}


@dataclass(frozen=True)
class SpecialFormCandidate:
    """A 3-form and a constant f on an orthonormal homogeneous model.

    `space` must be the orthonormal model of the metric (see
    `homogeneous.orthonormal_model`), so that phi is written on an orthonormal
    coframe; `orientation` multiplies the Hodge star.
    """

    space: ReductiveSpace
    phi: KForm
    f: Number
    orientation: int = 1
    name: str = ""

    def __post_init__(self):
        if self.phi.frame != self.space.frame or self.phi.degree != 3:
            raise StructuralError("phi must be a 3-form on the m coframe of the space")
        if self.orientation not in (1, -1):
            raise StructuralError(f"Orientation must be 1 or -1, got {self.orientation}")

    @property
    def field(self) -> Field:
        return self.space.field

    def star(self, a: KForm) -> KForm:
        return self.orientation * hodge(a)

    @classmethod
    def from_metric(
        cls,
        space: ReductiveSpace,
        metric: InvariantMetric,
        coefficients: Dict[Tuple[int, ...], Number],
        f: Number,
        orientation: int = 1,
        name: str = "",
    ) -> "SpecialFormCandidate":
        """Build the orthonormal model, then phi from its coefficients on that coframe."""
        model = orthonormal_model(space, metric)
        return cls(model, KForm(model.frame, 3, coefficients), f, orientation, name or space.name)


class Residuals(NamedTuple):
    closure: Number
    maxwell: Number

    def vanish(self, field: Field) -> bool:
        return field.is_zero(self.closure) and field.is_zero(self.maxwell)


def special_form_residual(candidate: SpecialFormCandidate) -> Residuals:
    """|d*phi| and |d phi - f *phi| in the max norm.

    Raises:
        StructuralError: if phi is not invariant.
    """
    space, field = candidate.space, candidate.field
    star_phi = candidate.star(candidate.phi)
    d_phi = ce_differential(space, candidate.phi)
    closure = max_norm(ce_differential(space, star_phi, check=False), field)
    maxwell = max_norm(d_phi - candidate.f * star_phi, field)
    return Residuals(closure, maxwell)


class MaxwellBranch(NamedTuple):
    f: Number
    forms: List[KForm]

    def to_json(self) -> dict:
        return {"f": format_scalar(self.f), "forms": [form_to_json(a) for a in self.forms]}


class MaxwellSolution(NamedTuple):
    space: ReductiveSpace
    orientation: int
    branches: List[MaxwellBranch]
    invariant_dimension: int
    coclosed_dimension: int
    complex_count: int = 0

    def to_json(self) -> dict:
        return {
            "space": self.space.name,
            "orientation": self.orientation,
            "invariant_3forms": self.invariant_dimension,
            "coclosed_3forms": self.coclosed_dimension,
            "complex_eigenvalues_discarded": self.complex_count,
            "branches": [branch.to_json() for branch in self.branches],
        }


def solve_maxwell(
    space: ReductiveSpace, metric: Optional[InvariantMetric] = None, orientation: int = 1
) -> MaxwellSolution:
    """All real f with an invariant co-closed phi such that d phi = f *phi.

    The co-closed invariant 3-forms C_1..C_r are computed first; with D and S the
    matrices of d and * on them, the candidates for f are the eigenvalues of
    S^+ D, and each branch is the kernel of D - f S.
    """
    if metric is not None:
        space = orthonormal_model(space, metric)
    field = space.field
    frame = space.frame
    logger.info("Solving the Maxwell equation on '%s'", space.name)
    invariant = invariant_forms(space, 3)
    if not invariant:
        return MaxwellSolution(space, orientation, [], 0, 0)

    keys5 = basis_forms(frame, 5)
    columns = [to_vector(ce_differential(space, orientation * hodge(a), check=False), keys5) for a in invariant]
    coclosed = [
        sum((c * a for c, a in zip(vector, invariant) if c != 0), zero_form(frame, 3))
        for vector in nullspace(transpose(columns), len(invariant), field)
    ]
    if not coclosed:
        return MaxwellSolution(space, orientation, [], len(invariant), 0)

    keys4 = basis_forms(frame, 4)
    d_columns = [to_vector(ce_differential(space, a, check=False), keys4) for a in coclosed]
    s_columns = [to_vector(orientation * hodge(a), keys4) for a in coclosed]
    solver = CoordinateSolver(s_columns, field)
    reduced = transpose([solver.project(column) for column in d_columns])
    values = real_eigenvalues(reduced, field)
    if values.complex_count:
        logger.warning("Discarding %d complex Maxwell eigenvalues", values.complex_count)

    r = len(coclosed)
    branches = []
    for value, _ in cluster(values.real, field):
        if field.exact and not isinstance(value, Fraction):
            logger.warning("Irrational Maxwell eigenvalue %s", value)
            raise InexactScalarError(f"The Maxwell eigenvalue {value} is not rational")
        rows = [[d_columns[j][i] - value * s_columns[j][i] for j in range(r)] for i in range(len(keys4))]
        kernel = nullspace(rows, r, field)
        if not kernel:
            continue
        forms = [
            sum((c * a for c, a in zip(vector, coclosed) if c != 0), zero_form(frame, 3)) for vector in kernel
        ]
        branches.append(MaxwellBranch(value, forms))
        logger.debug("f = %s with a %d-dimensional eigenspace", value, len(forms))
    return MaxwellSolution(space, orientation, branches, len(invariant), r, values.complex_count)


def q_phi(phi: KForm) -> Matrix:
    """q_phi(X, Y) = -(1/2) <X ⌟ phi, Y ⌟ phi> on the orthonormal coframe."""
    if phi.degree != 3:
        raise StructuralError("q_phi needs a 3-form")
    return q_matrix(phi)


def classify_type(candidate: SpecialFormCandidate, residuals: Optional[Residuals] = None) -> SolutionType:
    """TypeI (phi = 0), TypeII (f = 0) or TypeIII, split by genericity of phi.

    Raises:
        PreconditionError: if the candidate is not a special form, or phi = 0 and f = 0.
    """
    field = candidate.field
    residuals = residuals or special_form_residual(candidate)
    if not residuals.vanish(field):
        raise PreconditionError(f"Not a special form (residuals {tuple(residuals)})")
    phi_zero = field.is_zero(max_norm(candidate.phi, field))
    f_zero = field.is_zero(candidate.f)
    if phi_zero and f_zero:
        raise PreconditionError("phi = 0 and f = 0 is the trivial background, which has no type")
    if phi_zero:
        return SolutionType(SolutionTag.TYPE_I)
    orbit = classify(candidate.phi, field).orbit
    if f_zero:
        return SolutionType(SolutionTag.TYPE_II, orbit)
    if orbit is OrbitClass.GENERIC_G2:
        return SolutionType(SolutionTag.TYPE_III_ALPHA, orbit)
    return SolutionType(SolutionTag.TYPE_III_BETA, orbit)


def reduced_einstein(phi: KForm, f: Number) -> Matrix:
    """Right-hand side of the Einstein equation on the internal factor.

    (1/6)(f^2 + 2|phi|^2) g + q_phi, which is (f^2/6) g for phi = 0 and
    (1/3)|phi|^2 g + q_phi for f = 0.
    """
    n = phi.frame.n
    scale = Fraction(1, 6) * (f ** 2 + 2 * norm_squared(phi))
    q = q_phi(phi)
    return [[scale * int(i == j) + q[i][j] for j in range(n)] for i in range(n)]


def einstein7_residual(candidate: SpecialFormCandidate) -> Number:
    """Largest entry of Ric - (1/6)(f^2 + 2|phi|^2) g - q_phi."""
    ric = ricci(candidate.space)
    rhs = reduced_einstein(candidate.phi, candidate.f)
    n = len(ric)
    return candidate.field.max_abs(ric[i][j] - rhs[i][j] for i in range(n) for j in range(n))


def lorentz_einstein_constant(phi: KForm, f: Number) -> Number:
    """Lambda = -(2 f^2 + |phi|^2) / 6."""
    return lorentz_constant(f, norm_squared(phi))


def weak_g2_f_values() -> Tuple[Number, ...]:
    """Real f for which the weak G2 Einstein constant (3/8) f^2 meets (1/6)(f^2 + 5)."""
    f = sympy.Symbol("f", real=True)
    roots = sympy.solve(sympy.Eq(sympy.Rational(3, 8) * f ** 2, sympy.Rational(1, 6) * (f ** 2 + 5)), f)
    return tuple(sorted(from_sympy(root) for root in roots))


def weak_g2_compatible(f: Number, field: Field) -> bool:
    """(3/8) f^2 = (1/6)(f^2 + 5): Ricci of a weak G2 metric against the reduced equation at |phi|^2 = 7."""
    return field.equal(weak_einstein_constant(f), Fraction(1, 6) * (f ** 2 + 5))


def rescale(candidate: SpecialFormCandidate, t: Number) -> SpecialFormCandidate:
    """The candidate for the metric t^2 g and the form t^3 phi.

    On orthonormal coframes the coefficients of phi do not change and f becomes f / t.

    Raises:
        PreconditionError: if t <= 0.
    """
    if t <= 0:
        raise PreconditionError(f"Scale factor must be positive, got {t}")
    return replace(candidate, space=rescale_orthonormal(candidate.space, t), f=candidate.f / t)


class Normalized(NamedTuple):
    candidate: SpecialFormCandidate
    orientation_flipped: bool
    scale: Optional[Number]


def normalize(candidate: SpecialFormCandidate) -> Normalized:
    """Make f >= 0 by flipping the orientation, scale phi to |phi|^2 = 7 and f to 2.

    The scaling of phi is only applied to generic forms and may raise
    `InexactScalarError` in exact mode.
    """
    field = candidate.field
    flipped = False
    if not field.is_zero(candidate.f) and candidate.f < 0:
        candidate = replace(candidate, orientation=-candidate.orientation, f=-candidate.f)
        flipped = True
        logger.info("Flipped the orientation of '%s' to make f positive", candidate.name)
    norm = norm_squared(candidate.phi)
    if not field.is_zero(norm) and classify(candidate.phi, field).orbit is OrbitClass.GENERIC_G2:
        if not field.equal(norm, SPLIT_NORM):
            factor = field.sqrt(field.convert(SPLIT_NORM) / norm)
            candidate = replace(candidate, phi=factor * candidate.phi)
    scale = None
    if not field.is_zero(candidate.f):
        scale = candidate.f / WEAK_F
        candidate = rescale(candidate, scale)
    return Normalized(candidate, flipped, scale)


class MaxwellFit(NamedTuple):
    f: Number
    residual: Number


def maxwell_fit(candidate: SpecialFormCandidate) -> MaxwellFit:
    """Least-squares f = <d phi, *phi> / <*phi, *phi> and the remaining |d phi - f *phi|."""
    field = candidate.field
    star_phi = candidate.star(candidate.phi)
    d_phi = ce_differential(candidate.space, candidate.phi)
    norm = form_inner(star_phi, star_phi)
    f = form_inner(d_phi, star_phi) / norm if not field.is_zero(norm) else field.convert(0)
    return MaxwellFit(f, max_norm(d_phi - f * star_phi, field))


@dataclass
class BackgroundReport:
    name: str
    closure_residual: Number
    maxwell_residual: Number
    einstein7_residual: Number
    lorentz_constant: Number
    phi_norm: Number
    f: Number
    solution_type: Optional[SolutionType]
    crosscheck_defect: Number
    flags: List[Flag] = dataclass_field(default_factory=list)
    field: Optional[Field] = None

    @property
    def maxwell_ok(self) -> bool:
        return self.field.is_zero(self.closure_residual) and self.field.is_zero(self.maxwell_residual)

    @property
    def einstein_ok(self) -> bool:
        return self.field.is_zero(self.einstein7_residual) and Flag.LORENTZ_MISMATCH not in self.flags

    def add_flag(self, flag: Flag) -> None:
        if flag not in self.flags:
            self.flags.append(flag)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "f": format_scalar(self.f),
            "phi_norm2": format_scalar(self.phi_norm),
            "residuals": {
                "closure": format_scalar(self.closure_residual),
                "maxwell": format_scalar(self.maxwell_residual),
                "einstein7": format_scalar(self.einstein7_residual),
                "crosscheck": format_scalar(self.crosscheck_defect),
            },
            "lambda": format_scalar(self.lorentz_constant),
            "type": self.solution_type.to_json() if self.solution_type else None,
            "flags": [flag.value for flag in self.flags],
            "mode": self.field.mode.value,
        }


def verify_background(
    candidate: SpecialFormCandidate, declared_lorentz: Optional[Number] = None
) -> BackgroundReport:
    """Check the Maxwell, closure and Einstein equations of the product background.

    The 11-dimensional stress tensor of the assembled flux is compared entry by
    entry with the reduced block formulas as a cross-check.
    """
    field = candidate.field
    space = candidate.space
    phi, f = candidate.phi, candidate.f
    logger.info("Verifying the background '%s'", candidate.name or space.name)
    residuals = special_form_residual(candidate)
    phi_norm = norm_squared(phi)
    lam = lorentz_constant(f, phi_norm)

    flux = flux_from_special_form(ProductFrame(right=space.frame), phi, f)
    if candidate.orientation < 0:
        flux = replace(flux, F7=-flux.F7)
    crosscheck = stress_blocks(flux, field).defect

    report = BackgroundReport(
        candidate.name or space.name,
        residuals.closure,
        residuals.maxwell,
        einstein7_residual(candidate),
        lam,
        phi_norm,
        f,
        None,
        crosscheck,
        field=field,
    )
    if candidate.orientation < 0:
        report.add_flag(Flag.ORIENTATION_FLIPPED)
    if declared_lorentz is not None and not field.equal(field.convert(declared_lorentz), lam):
        logger.warning("Declared Lorentz Einstein constant %s differs from %s", declared_lorentz, lam)
        report.add_flag(Flag.LORENTZ_MISMATCH)
    if not report.maxwell_ok:
        return report

    phi_zero = field.is_zero(max_norm(phi, field))
    if phi_zero and field.is_zero(f):
        return report
    report.solution_type = classify_type(candidate, residuals)
    if not phi_zero:
        torsion = torsion_class(
            ce_differential(space, phi),
            ce_differential(space, candidate.star(phi), check=False),
            candidate.star(phi),
            field,
        )
        if torsion.kind is TorsionKind.WEAK:
            report.add_flag(Flag.WEAK_G2)
        if torsion.kind in (TorsionKind.WEAK, TorsionKind.CO_CALIBRATED):
            report.add_flag(Flag.CO_CALIBRATED)
        if (
            report.solution_type.tag is SolutionTag.TYPE_II
            and report.solution_type.genericity is OrbitClass.GENERIC_G2
            and torsion.kind is TorsionKind.PARALLEL
        ):
            report.add_flag(Flag.PARALLEL_TYPE_II)
    if not report.einstein_ok:
        report.add_flag(Flag.NOT_SPECIAL_EINSTEIN)
    return report


class ParityRow(NamedTuple):
    lambdas: Tuple[int, int, int]
    self_dual: bool
    residual_at_one: Number
    fitted_f: Number
    solves: bool
    predicted: bool

    @property
    def agrees(self) -> bool:
        return self.solves == self.predicted

    def to_json(self) -> dict:
        return {
            "lambda": list(self.lambdas),
            "sigma": "self-dual" if self.self_dual else "anti-self-dual",
            "residual_at_f1": format_scalar(self.residual_at_one),
            "fitted_f": format_scalar(self.fitted_f),
            "parity_rule": self.predicted,
            "agrees": self.agrees,
        }


def s3xt4_parity_table(field: Field = EXACT) -> List[ParityRow]:
    """The Maxwell equation with f = 1 on S3 x T4 for every sign pattern and duality.

    The parity rule: a self-dual sigma needs an odd number of +1 among the
    weights, an anti-self-dual one an even number.
    """
    rows = []
    for lambdas in itertools.product((1, -1), repeat=3):
        space = s3xt4_space(lambdas, field).space
        for self_dual in (True, False):
            candidate = SpecialFormCandidate(space, s3xt4_phi(space.frame, self_dual), field.convert(1))
            residual = special_form_residual(candidate).maxwell
            fit = maxwell_fit(candidate)
            positives = sum(1 for x in lambdas if x > 0)
            predicted = (positives % 2 == 1) == self_dual
            rows.append(ParityRow(lambdas, self_dual, residual, fit.f, field.is_zero(residual), predicted))
    return rows

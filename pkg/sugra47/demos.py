"""
Built-in demonstrations. Each one builds its data in code and returns a
`Report` whose exit code follows the command-line contract.
"""

import logging
import random
from fractions import Fraction
from typing import Callable, Dict, NamedTuple

from .dga import CP2XS3_CORRECTED, CP2XS3_LABELS, CP2XS3_LITERAL, cp2xs3_dga, dga_from_structure_equations
from .exterior import (
    Frame,
    KForm,
    basis_forms,
    contraction_identity,
    form_inner,
    frame_vector,
    hodge,
    max_norm,
    norm_squared,
    star_star_sign,
    volume_form,
)
from .g2 import (
    OrbitClass,
    canonical_g2_form,
    classify,
    contraction_3g_check,
    find_split_form,
    induced_metric,
    stabilizer_algebra,
)
from .homogeneous import InvariantMetric, ce_differential, einstein_constant, invariant_forms, ricci
from .models import (
    cp2xs3_space,
    hyperbolic_times_sphere_space,
    isotropy_rows,
    s3xt4_phi,
    s3xt4_space,
    so7_g2_space,
    torus_space,
)
from .product import (
    FluxForm,
    ProductFrame,
    flux_norm,
    flux_norm_direct,
    flux_square,
    norm_factorization_check,
    split_star_check,
    star_flux,
    stress_blocks,
)
from .scalars import Field, format_scalar
from .scenarios import Report
from .sugra import (
    Flag,
    SolutionTag,
    SpecialFormCandidate,
    normalize,
    s3xt4_parity_table,
    solve_maxwell,
    special_form_residual,
    verify_background,
    weak_g2_f_values,
)

logger = logging.getLogger(__name__)

SWEEP_SEED = 47
SWEEP_SAMPLES = 20


class Demo(NamedTuple):
    name: str
    description: str
    run: Callable[[Field], Report]


def _record_backgrounds(report: Report, backgrounds) -> None:
    report.results["verify"] = [background.to_json() for background in backgrounds]
    for background in backgrounds:
        if not background.maxwell_ok:
            report.maxwell_failed = True
        elif not background.einstein_ok:
            report.einstein_failed = True
        for flag in background.flags:
            report.flag(flag.value)


def canonical_g2(field: Field) -> Report:
    """The canonical generic 3-form: orbit, metric, stabilizer and a split cousin."""
    report = Report("canonical-g2", field.mode)
    omega = canonical_g2_form()
    classification = classify(omega, field)
    stabilizer = stabilizer_algebra(omega, field)
    norm = norm_squared(omega)
    metric = induced_metric(omega, field)
    signs, split = find_split_form(field=field)
    split_class = classify(split, field)
    report.results.update(
        {
            "classification": classification.to_json(),
            "norm2": format_scalar(norm),
            "stabilizer_dim": len(stabilizer),
            "contraction_defect": format_scalar(contraction_3g_check(omega, field)),
            "split_form": {"signs": list(signs), "classification": split_class.to_json()},
        }
    )
    report.check("generic", classification.orbit is OrbitClass.GENERIC_G2)
    report.check("norm is 7", field.equal(norm, 7))
    report.check("stabilizer has dimension 14", len(stabilizer) == 14)
    report.check(
        "induced metric is the identity",
        all(field.equal(metric.g[i][j], int(i == j)) for i in range(7) for j in range(7)),
    )
    report.check("split form is G2*", split_class.orbit is OrbitClass.GENERIC_G2_STAR)
    return report


def _dga_agrees(dga, space, forms) -> bool:
    """Compare d of the coframe algebra with the invariant-form differential on forms over m.

    The m coframe must be the first generators of the algebra.
    """
    field = dga.field
    for a in forms:
        lifted = KForm(dga.frame, a.degree, dict(a.items()))
        expected = KForm(dga.frame, a.degree + 1, dict(ce_differential(space, a).items()))
        if not field.is_zero(max_norm(dga.d(lifted) - expected, field)):
            return False
    return True


def cp2xs3(field: Field) -> Report:
    """CP2 x S3: the structure equations, the Maxwell branches and the failing Einstein equation."""
    report = Report("cp2xs3", field.mode)
    literal = cp2xs3_dga(False, field)
    defects = sorted(literal.defects())
    corrected = dga_from_structure_equations(CP2XS3_CORRECTED, CP2XS3_LABELS, field)
    report.results["structure_equations"] = {
        "literal_defects": defects,
        "corrected": {
            label: CP2XS3_CORRECTED[label]
            for label in CP2XS3_LABELS
            if CP2XS3_CORRECTED[label] != CP2XS3_LITERAL[label]
        },
        "corrected_generators": corrected.frame.n,
    }

    model = cp2xs3_space(field=field)
    space = model.orthonormal()
    invariant = invariant_forms(space, 3)
    report.results["invariant_3forms"] = len(invariant)
    report.check(
        "d on invariant forms is the Chevalley-Eilenberg differential",
        _dga_agrees(corrected, space, invariant),
    )
    solution = solve_maxwell(space)
    report.results["solve-maxwell"] = solution.to_json()
    branch_values = sorted(branch.f for branch in solution.branches)
    report.check(
        "branches f = 0 and f = 1",
        len(branch_values) == 2 and field.is_zero(branch_values[0]) and field.equal(branch_values[1], 1),
    )

    squashed = solve_maxwell(cp2xs3_space(1, (4, 2, 2), field).orthonormal())
    squashed_nonzero = sorted(
        ((branch.f, len(branch.forms)) for branch in squashed.branches if not field.is_zero(branch.f)),
        key=lambda item: item[0],
    )
    report.results["squashed_branches"] = {format_scalar(f): dimension for f, dimension in squashed_nonzero}
    expected = [(Fraction(1, 2), 2), (Fraction(1), 1)]
    report.check(
        "squashed branches f = 1/2 of dimension 2 and f = 1 of dimension 1",
        len(squashed_nonzero) == len(expected)
        and all(
            field.equal(f, expected_f) and dimension == expected_dimension
            for (f, dimension), (expected_f, expected_dimension) in zip(squashed_nonzero, expected)
        ),
    )

    backgrounds = [
        verify_background(SpecialFormCandidate(space, phi, branch.f, 1, f"CP2xS3 (f={format_scalar(branch.f)})"))
        for branch in solution.branches
        for phi in branch.forms
    ]
    _record_backgrounds(report, backgrounds)
    return report


def s3xt4(field: Field) -> Report:
    """S3 x T4: the self-dual solution and the sign-pattern parity rule."""
    report = Report("s3xt4", field.mode)
    space = s3xt4_space(field=field).space
    candidate = SpecialFormCandidate(space, s3xt4_phi(space.frame, True), field.convert(1), 1, "S3xT4")
    residuals = special_form_residual(candidate)
    report.results["self_dual"] = {
        "closure": format_scalar(residuals.closure),
        "maxwell": format_scalar(residuals.maxwell),
    }
    if not residuals.vanish(field):
        report.maxwell_failed = True
    table = s3xt4_parity_table(field)
    report.results["parity_table"] = [row.to_json() for row in table]
    report.check("parity rule", all(row.agrees for row in table))
    return report


def spin7_g2(field: Field) -> Report:
    """The isotropy irreducible S7 = Spin7/G2 (so7 over g2): the weak G2 background."""
    report = Report("spin7-g2", field.mode)
    space = so7_g2_space(field).orthonormal()
    solution = solve_maxwell(space)
    report.results["solve-maxwell"] = solution.to_json()
    nonzero = [branch for branch in solution.branches if not field.is_zero(branch.f)]
    report.check("one real branch with f != 0", len(nonzero) == 1 and len(nonzero[0].forms) == 1)
    if not nonzero:
        return report
    branch = nonzero[0]
    normalized = normalize(SpecialFormCandidate(space, branch.forms[0], branch.f, 1, "SO7/G2"))
    candidate = normalized.candidate
    ric = ricci(candidate.space)
    constant = einstein_constant(ric, InvariantMetric.identity(7), field)
    report.results["normalized"] = {
        "f": format_scalar(candidate.f),
        "scale": format_scalar(normalized.scale),
        "orientation_flipped": normalized.orientation_flipped,
        "norm2": format_scalar(norm_squared(candidate.phi)),
        "einstein_constant": format_scalar(constant) if constant is not None else None,
    }
    report.results["weak_g2_f_values"] = [format_scalar(x) for x in weak_g2_f_values()]
    background = verify_background(candidate)
    _record_backgrounds(report, [background])
    report.check("Ric = (3/2) g", constant is not None and field.equal(constant, Fraction(3, 2)))
    report.check(
        "type IIIalpha",
        background.solution_type is not None and background.solution_type.tag is SolutionTag.TYPE_III_ALPHA,
    )
    return report


def torus7(field: Field) -> Report:
    """The flat torus: every invariant 3-form is harmonic."""
    report = Report("torus7", field.mode)
    space = torus_space(7, field).space
    invariant = invariant_forms(space, 3)
    ric = ricci(space)
    solution = solve_maxwell(space)
    report.results.update(
        {
            "invariant_3forms": len(invariant),
            "einstein_constant": format_scalar(einstein_constant(ric, InvariantMetric.identity(7), field)),
            "branches": {format_scalar(branch.f): len(branch.forms) for branch in solution.branches},
        }
    )
    report.check("35 invariant 3-forms", len(invariant) == 35)
    report.check("flat", all(field.is_zero(x) for row in ric for x in row))
    return report


def parallel_g2(field: Field) -> Report:
    """The canonical form on the flat torus with f = 0: harmonic, generic and excluded."""
    report = Report("parallel-g2", field.mode)
    space = torus_space(7, field).space
    candidate = SpecialFormCandidate(space, canonical_g2_form(space.frame), field.convert(0), 1, "T7 parallel G2")
    background = verify_background(candidate)
    _record_backgrounds(report, [background])
    report.check("non-existence flag", Flag.PARALLEL_TYPE_II in background.flags)
    return report


def hyperbolic_sphere(field: Field) -> Report:
    """Hyperbolic 3-space times the round 4-sphere with phi = vol_Q and f = 0."""
    report = Report("hyperbolic-sphere", field.mode)
    model = hyperbolic_times_sphere_space(field)
    space = model.orthonormal()
    phi = KForm(space.frame, 3, {(1, 2, 3): field.convert(1)})
    background = verify_background(SpecialFormCandidate(space, phi, field.convert(0), 1, "H3xS4"))
    _record_backgrounds(report, [background])
    report.check("Lambda = -1/6", field.equal(background.lorentz_constant, Fraction(-1, 6)))
    return report


def _random_form(rng: random.Random, frame: Frame, degree: int, field: Field) -> KForm:
    keys = basis_forms(frame, degree)
    chosen = rng.sample(keys, min(len(keys), rng.randint(1, 4)))
    return KForm(frame, degree, {key: field.convert(rng.randint(-3, 3)) for key in chosen})


def lemma_sweep(field: Field) -> Report:
    """Random checks of the sign conventions, the contraction identity and the product formulas."""
    report = Report("lemma-sweep", field.mode)
    rng = random.Random(SWEEP_SEED)
    failures = {"star_star": 0, "contraction": 0, "split_star": 0, "norm_product": 0, "flux": 0, "stress": 0}

    for p, q in ((7, 0), (3, 1), (4, 3), (2, 2)):
        frame = Frame(p, q)
        vol = volume_form(frame)
        if not field.equal(form_inner(vol, vol), (-1) ** q):
            failures["star_star"] += 1
        for _ in range(SWEEP_SAMPLES):
            degree = rng.randint(1, frame.n)
            a = _random_form(rng, frame, degree, field)
            if hodge(hodge(a)) != star_star_sign(frame, degree) * a:
                failures["star_star"] += 1
            x = frame_vector(frame, [field.convert(rng.randint(-2, 2)) for _ in range(frame.n)])
            y = frame_vector(frame, [field.convert(rng.randint(-2, 2)) for _ in range(frame.n)])
            lhs, rhs = contraction_identity(a, x, y)
            if not field.equal(lhs, rhs):
                failures["contraction"] += 1

    pf = ProductFrame()
    for _ in range(SWEEP_SAMPLES):
        left = _random_form(rng, pf.left, rng.randint(0, 4), field)
        right = _random_form(rng, pf.right, rng.randint(0, 7), field)
        check = split_star_check(pf, left, right)
        if check.direct != check.closed:
            failures["split_star"] += 1
        lhs, rhs = norm_factorization_check(pf, left, right)
        if not field.equal(lhs, rhs):
            failures["norm_product"] += 1

        flux = FluxForm(pf, field.convert(rng.randint(-3, 3)), _random_form(rng, pf.right, 4, field))
        star, square = star_flux(flux), flux_square(flux)
        if star.direct != star.closed or square.direct != square.closed:
            failures["flux"] += 1
        if not field.equal(flux_norm(flux), flux_norm_direct(flux)):
            failures["flux"] += 1
        if not field.is_zero(stress_blocks(flux, field).defect):
            failures["stress"] += 1

    report.results["samples"] = SWEEP_SAMPLES
    report.results["failures"] = failures
    report.check("all identities hold", not any(failures.values()))
    return report


def isotropy_table(field: Field) -> Report:
    report = Report("isotropy-rows", field.mode)
    rows = isotropy_rows(field)
    report.results["rows"] = [row.to_json() for row in rows]
    for row in rows:
        report.check(row.name, row.ok)
    return report


DEMOS: Dict[str, Demo] = {
    demo.name: demo
    for demo in (
        Demo("canonical-g2", "The canonical generic 3-form and its split cousin.", canonical_g2),
        Demo("cp2xs3", "CP2 x S3: Maxwell solutions that fail the Einstein equation.", cp2xs3),
        Demo("s3xt4", "S3 x T4: the self-dual solution and the parity rule.", s3xt4),
        Demo("spin7-g2", "so7 over g2: the weak G2 background with f = 2.", spin7_g2),
        Demo("torus7", "The flat 7-torus.", torus7),
        Demo("example-2-15", "Hyperbolic 3-space times the round 4-sphere, phi = vol_Q.", hyperbolic_sphere),
        Demo("hyperbolic-sphere", "Same as example-2-15.", hyperbolic_sphere),
        Demo("lemma-sweep", "Random checks of the exterior and product identities.", lemma_sweep),
        Demo("isotropy-rows", "Subalgebras of so7: isotypic blocks and centralizers.", isotropy_table),
        Demo("parallel-g2", "The canonical form on the flat torus, excluded as a background.", parallel_g2),
    )
}

"""
Product frames for M~(3,1) x M7 and the algebra of the flux 4-form
F = f vol_left + F7.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Mapping, NamedTuple, Tuple

from .errors import StructuralError
from .exterior import (
    Frame,
    FrameVector,
    KForm,
    basis_vector,
    contraction_gram,
    form_from_json,
    form_inner,
    form_to_json,
    hodge,
    interior,
    vector_inner,
    volume_form,
    wedge,
)
from .scalars import EXACT, Field, Number, format_scalar

logger = logging.getLogger(__name__)

LEFT = "left"
RIGHT = "right"


class CrossCheck(NamedTuple):
    """A quantity computed directly and through its closed form."""

    direct: object
    closed: object


@dataclass(frozen=True)
class ProductFrame:
    """The frame of a product, left block first."""

    left: Frame = field(default_factory=lambda: Frame(3, 1))
    right: Frame = field(default_factory=lambda: Frame.euclidean(7))

    @property
    def combined(self) -> Frame:
        shift = self.left.n
        timelike = tuple(self.left.timelike) + tuple(i + shift for i in self.right.timelike)
        return Frame(self.left.p + self.right.p, self.left.q + self.right.q, timelike=timelike)

    def factor(self, side: str) -> Frame:
        if side == LEFT:
            return self.left
        if side == RIGHT:
            return self.right
        raise StructuralError(f"Unknown factor '{side}'")

    def block(self, side: str) -> range:
        """The 1-based indices of a factor inside the combined frame."""
        if side == LEFT:
            return range(1, self.left.n + 1)
        return range(self.left.n + 1, self.left.n + self.right.n + 1)


def lift(pf: ProductFrame, a: KForm, side: str) -> KForm:
    """Inject a form of one factor into the combined frame."""
    if a.frame != pf.factor(side):
        raise StructuralError(f"Form does not live on the {side} factor")
    shift = 0 if side == LEFT else pf.left.n
    return KForm(
        pf.combined,
        a.degree,
        {tuple(i + shift for i in key): coeff for key, coeff in a.items()},
    )


def lift_vector(pf: ProductFrame, x: FrameVector, side: str) -> FrameVector:
    if x.frame != pf.factor(side):
        raise StructuralError(f"Vector does not live on the {side} factor")
    zeros_left = (Fraction(0),) * pf.left.n
    zeros_right = (Fraction(0),) * pf.right.n
    components = x.components + zeros_right if side == LEFT else zeros_left + x.components
    return FrameVector(pf.combined, components)


def split_star_check(pf: ProductFrame, left_form: KForm, right_form: KForm) -> CrossCheck:
    """Hodge star of a product form, directly and via the factor stars.

    The closed form is *(a~ ^ a) = (-1)^(l (p - k)) *a~ ^ *a with p the dimension
    of the left factor, k = deg a~ and l = deg a.
    """
    direct = hodge(wedge(lift(pf, left_form, LEFT), lift(pf, right_form, RIGHT)))
    sign = (-1) ** (right_form.degree * (pf.left.n - left_form.degree))
    closed = sign * wedge(lift(pf, hodge(left_form), LEFT), lift(pf, hodge(right_form), RIGHT))
    return CrossCheck(direct, closed)


def norm_factorization_check(
    pf: ProductFrame, left_form: KForm, right_form: KForm
) -> Tuple[Number, Number]:
    product = wedge(lift(pf, left_form, LEFT), lift(pf, right_form, RIGHT))
    lhs = form_inner(product, product)
    rhs = form_inner(left_form, left_form) * form_inner(right_form, right_form)
    return lhs, rhs


@dataclass(frozen=True)
class FluxForm:
    """F = f vol_left + F7, with F7 a 4-form on the right factor."""

    pf: ProductFrame
    f: Number
    F7: KForm

    def __post_init__(self):
        if self.F7.frame != self.pf.right or self.F7.degree != 4:
            raise StructuralError("F7 must be a 4-form on the right factor")

    @property
    def assembled(self) -> KForm:
        return self.f * lift(self.pf, volume_form(self.pf.left), LEFT) + lift(
            self.pf, self.F7, RIGHT
        )

    @property
    def phi(self) -> KForm:
        """The 3-form *7 F7."""
        return hodge(self.F7)


def flux_from_special_form(pf: ProductFrame, phi: KForm, f: Number) -> FluxForm:
    """The flux attached to a 3-form phi on the right factor, F7 = *7 phi."""
    if phi.degree != 3:
        raise StructuralError("A special form has degree 3")
    return FluxForm(pf, f, hodge(phi))


def star_flux(flux: FluxForm) -> CrossCheck:
    """*F computed on the combined frame and as -f vol_right + vol_left ^ *7 F7."""
    pf = flux.pf
    closed = -flux.f * lift(pf, volume_form(pf.right), RIGHT) + wedge(
        lift(pf, volume_form(pf.left), LEFT), lift(pf, hodge(flux.F7), RIGHT)
    )
    return CrossCheck(hodge(flux.assembled), closed)


def flux_square(flux: FluxForm) -> CrossCheck:
    """F ^ F computed directly and as 2 f vol_left ^ F7."""
    pf = flux.pf
    closed = 2 * flux.f * wedge(lift(pf, volume_form(pf.left), LEFT), lift(pf, flux.F7, RIGHT))
    return CrossCheck(wedge(flux.assembled, flux.assembled), closed)


def flux_norm(flux: FluxForm) -> Number:
    """|F|^2 = <vol_left, vol_left> f^2 + |F7|^2 (= -f^2 + |F7|^2 for a Lorentzian factor)."""
    vol = volume_form(flux.pf.left)
    return form_inner(vol, vol) * flux.f ** 2 + form_inner(flux.F7, flux.F7)


def flux_norm_direct(flux: FluxForm) -> Number:
    assembled = flux.assembled
    return form_inner(assembled, assembled)


def stress_rhs(flux: FluxForm, x: FrameVector, y: FrameVector) -> Number:
    """Right-hand side of the Einstein equation, (1/2)<X ⌟ F, Y ⌟ F> - (1/6) g(X, Y) |F|^2."""
    assembled = flux.assembled
    return Fraction(1, 2) * form_inner(interior(x, assembled), interior(y, assembled)) - Fraction(
        1, 6
    ) * vector_inner(x, y) * form_inner(assembled, assembled)


class StressBlocks(NamedTuple):
    """The stress tensor on the combined frame and its block predictions."""

    direct: List[List[Number]]
    predicted: List[List[Number]]
    lorentz_constant: Number
    defect: Number


def lorentz_constant(f: Number, phi_norm: Number) -> Number:
    return -Fraction(1, 6) * (2 * f ** 2 + phi_norm)


def q_matrix(phi: KForm) -> List[List[Number]]:
    """q_phi(e_i, e_j) = -(1/2)<e_i ⌟ phi, e_j ⌟ phi>."""
    return [[-Fraction(1, 2) * x for x in row] for row in contraction_gram(phi)]


def stress_blocks(flux: FluxForm, field: Field = EXACT) -> StressBlocks:
    """Compare the stress tensor with the reduced formulas block by block.

    Left block: Lambda g~ with Lambda = -(2 f^2 + |phi|^2)/6. Right block:
    (1/6)(f^2 + 2 |phi|^2) g + q_phi. Mixed block: zero.
    """
    pf = flux.pf
    combined = pf.combined
    n = combined.n
    vectors = [basis_vector(combined, i) for i in range(1, n + 1)]
    direct = [[stress_rhs(flux, x, y) for y in vectors] for x in vectors]

    phi = flux.phi
    phi_norm = form_inner(phi, phi)
    constant = lorentz_constant(flux.f, phi_norm)
    q = q_matrix(phi)
    right_scale = Fraction(1, 6) * (flux.f ** 2 + 2 * phi_norm)
    zero = field.convert(0)
    predicted = [[zero] * n for _ in range(n)]
    for i in pf.block(LEFT):
        predicted[i - 1][i - 1] = constant * combined.metric_sign(i)
    shift = pf.left.n
    for i in pf.block(RIGHT):
        for j in pf.block(RIGHT):
            metric = combined.metric_sign(i) if i == j else 0
            predicted[i - 1][j - 1] = right_scale * metric + q[i - 1 - shift][j - 1 - shift]
    defect = field.max_abs(
        direct[i][j] - predicted[i][j] for i in range(n) for j in range(n)
    )
    return StressBlocks(direct, predicted, constant, defect)


def flux_to_json(flux: FluxForm) -> dict:
    return {"f": format_scalar(flux.f), "F7": form_to_json(flux.F7)}


def flux_from_json(pf: ProductFrame, data: Mapping, field: Field = EXACT) -> FluxForm:
    try:
        return FluxForm(pf, field.convert(data["f"]), form_from_json(pf.right, data["F7"], field))
    except KeyError as exception:
        raise StructuralError(f"Malformed flux object: missing {exception}") from exception

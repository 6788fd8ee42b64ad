"""
Multilinear algebra of alternating forms over a pseudo-orthonormal coframe.

Indices are 1-based: the coframe of a `Frame` of dimension n is e^1, ..., e^n,
with e^i spacelike for i <= p and timelike for i > p. The volume form is
e^1 ^ ... ^ e^n. Interior products fill the first slot.
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import StructuralError
from .scalars import EXACT, Field, Number, format_scalar

logger = logging.getLogger(__name__)

MultiIndex = Tuple[int, ...]


@dataclass(frozen=True)
class Frame:
    """An oriented pseudo-orthonormal coframe of signature (p, q).

    The timelike indices default to the last q ones; product frames place them
    inside their factor's block instead.
    """

    p: int
    q: int = 0
    labels: Optional[Tuple[str, ...]] = None
    timelike: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if self.p < 0 or self.q < 0:
            raise StructuralError(f"Invalid signature ({self.p}, {self.q})")
        if self.labels is not None and len(self.labels) != self.n:
            raise StructuralError(
                f"Frame of dimension {self.n} got {len(self.labels)} labels"
            )
        if self.timelike is None:
            object.__setattr__(self, "timelike", tuple(range(self.p + 1, self.n + 1)))
        if len(set(self.timelike)) != self.q or any(
            i < 1 or i > self.n for i in self.timelike
        ):
            raise StructuralError(f"Invalid timelike indices {self.timelike}")

    @classmethod
    def euclidean(cls, n: int, labels: Optional[Sequence[str]] = None) -> "Frame":
        return cls(n, 0, tuple(labels) if labels else None)

    @property
    def n(self) -> int:
        return self.p + self.q

    @property
    def signature(self) -> Tuple[int, int]:
        return (self.p, self.q)

    def metric_sign(self, i: int) -> int:
        """<e_i, e_i> for the 1-based index i."""
        return -1 if i in self.timelike else 1

    def label(self, i: int) -> str:
        return self.labels[i - 1] if self.labels else f"e{i}"

    def index_sign(self, indices: Iterable[int]) -> int:
        """(-1)^u where u counts the timelike indices."""
        sign = 1
        for i in indices:
            sign *= self.metric_sign(i)
        return sign


@dataclass(frozen=True)
class FrameVector:
    """A vector given by its components in the frame basis e_1, ..., e_n."""

    frame: Frame
    components: Tuple[Number, ...]

    def __post_init__(self):
        if len(self.components) != self.frame.n:
            raise StructuralError(
                f"Vector has {len(self.components)} components on a frame of dimension {self.frame.n}"
            )


def basis_vector(frame: Frame, i: int) -> FrameVector:
    return FrameVector(frame, tuple(Fraction(int(j == i)) for j in range(1, frame.n + 1)))


def frame_vector(frame: Frame, components: Sequence[Number]) -> FrameVector:
    return FrameVector(frame, tuple(components))


def vector_inner(x: FrameVector, y: FrameVector) -> Number:
    if x.frame != y.frame:
        raise StructuralError("Vectors live on different frames")
    return sum(
        x.frame.metric_sign(i + 1) * a * b for i, (a, b) in enumerate(zip(x.components, y.components))
    )


def sort_indices(indices: Sequence[int]) -> Tuple[int, MultiIndex]:
    """Sort a multi-index and return the sign of the sorting permutation.

    The sign is 0 when an index is repeated.
    """
    if len(set(indices)) != len(indices):
        return 0, tuple()
    inversions = sum(
        1 for a, b in itertools.combinations(range(len(indices)), 2) if indices[a] > indices[b]
    )
    return (-1) ** inversions, tuple(sorted(indices))


class KForm:
    """A sparse alternating k-form.

    Terms are stored as strictly increasing multi-indices mapped to nonzero
    coefficients. Instances are immutable.
    """

    __slots__ = ("frame", "degree", "_terms")

    def __init__(self, frame: Frame, degree: int, terms: Optional[Mapping] = None) -> None:
        """Init

        Args:
            frame (Frame): The frame the form lives on.
            degree (int): The degree k.
            terms (Mapping, optional): Multi-index to coefficient. Unsorted or repeated
            indices are normalized. Defaults to the zero form.
        """
        if degree < 0:
            raise StructuralError(f"Negative degree {degree}")
        normalized: Dict[MultiIndex, Number] = {}
        for indices, coeff in (terms or {}).items():
            indices = tuple(indices)
            if len(indices) != degree:
                raise StructuralError(f"Multi-index {indices} does not have degree {degree}")
            if any(i < 1 or i > frame.n for i in indices):
                raise StructuralError(f"Multi-index {indices} is outside the frame")
            sign, key = sort_indices(indices)
            if sign == 0 or coeff == 0:
                continue
            normalized[key] = normalized.get(key, 0) + sign * coeff
        object.__setattr__(self, "frame", frame)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "_terms", {k: v for k, v in normalized.items() if v != 0})

    def __setattr__(self, name, value):
        raise AttributeError("KForm is immutable")

    def items(self):
        return sorted(self._terms.items())

    def indices(self) -> List[MultiIndex]:
        return sorted(self._terms)

    def coefficient(self, indices: Sequence[int]) -> Number:
        sign, key = sort_indices(tuple(indices))
        return sign * self._terms.get(key, 0)

    def coefficients(self) -> List[Number]:
        return list(self._terms.values())

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def _check(self, other: "KForm") -> None:
        if not isinstance(other, KForm):
            raise StructuralError(f"Expected a KForm, got {type(other).__name__}")
        if other.frame != self.frame:
            raise StructuralError("Forms live on different frames")
        if other.degree != self.degree:
            raise StructuralError(f"Degree mismatch: {self.degree} and {other.degree}")

    def __add__(self, other: "KForm") -> "KForm":
        self._check(other)
        terms = dict(self._terms)
        for key, coeff in other._terms.items():
            terms[key] = terms.get(key, 0) + coeff
        return KForm(self.frame, self.degree, terms)

    def __neg__(self) -> "KForm":
        return KForm(self.frame, self.degree, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other: "KForm") -> "KForm":
        return self + (-other)

    def __mul__(self, scalar) -> "KForm":
        if isinstance(scalar, KForm):
            return NotImplemented
        return KForm(self.frame, self.degree, {k: scalar * v for k, v in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, KForm):
            return NotImplemented
        return (
            self.frame == other.frame
            and self.degree == other.degree
            and self._terms == other._terms
        )

    def __hash__(self):
        return hash((self.frame, self.degree, tuple(sorted(self._terms.items()))))

    def __repr__(self) -> str:
        if not self._terms:
            return f"KForm({self.degree}, 0)"
        body = " + ".join(
            f"{coeff}*{'^'.join(self.frame.label(i) for i in key) or '1'}"
            for key, coeff in self.items()
        )
        return f"KForm({self.degree}, {body})"


def zero_form(frame: Frame, degree: int) -> KForm:
    return KForm(frame, degree)


def scalar_form(frame: Frame, value: Number) -> KForm:
    return KForm(frame, 0, {(): value})


def basis_form(frame: Frame, indices: Sequence[int], coeff: Number = 1) -> KForm:
    return KForm(frame, len(indices), {tuple(indices): Fraction(coeff) if isinstance(coeff, int) else coeff})


def one_form(frame: Frame, components: Sequence[Number]) -> KForm:
    return KForm(frame, 1, {(i + 1,): c for i, c in enumerate(components)})


def volume_form(frame: Frame) -> KForm:
    return basis_form(frame, range(1, frame.n + 1))


def combination(forms: Sequence[KForm], coefficients: Sequence[Number]) -> KForm:
    """Linear combination of forms of the same degree."""
    if not forms:
        raise StructuralError("Empty combination")
    result = zero_form(forms[0].frame, forms[0].degree)
    for form, coeff in zip(forms, coefficients):
        if coeff != 0:
            result = result + coeff * form
    return result


def wedge(a: KForm, b: KForm) -> KForm:
    """Exterior product a ^ b."""
    if a.frame != b.frame:
        raise StructuralError("Cannot wedge forms living on different frames")
    terms: Dict[MultiIndex, Number] = {}
    for i_a, c_a in a.items():
        for i_b, c_b in b.items():
            sign, key = sort_indices(i_a + i_b)
            if sign:
                terms[key] = terms.get(key, 0) + sign * c_a * c_b
    return KForm(a.frame, a.degree + b.degree, terms)


def wedge_all(forms: Sequence[KForm]) -> KForm:
    result = forms[0]
    for form in forms[1:]:
        result = wedge(result, form)
    return result


def interior(x: FrameVector, a: KForm) -> KForm:
    """Contraction X ⌟ a, filling the first argument of a."""
    if x.frame != a.frame:
        raise StructuralError("Vector and form live on different frames")
    if a.degree == 0:
        raise StructuralError("Cannot contract a vector with a 0-form")
    terms: Dict[MultiIndex, Number] = {}
    for key, coeff in a.items():
        for position, i in enumerate(key):
            component = x.components[i - 1]
            if component == 0:
                continue
            rest = key[:position] + key[position + 1 :]
            terms[rest] = terms.get(rest, 0) + (-1) ** position * component * coeff
    return KForm(a.frame, a.degree - 1, terms)


def evaluate(a: KForm, vectors: Sequence[FrameVector]) -> Number:
    """a(X_1, ..., X_k) under the determinant convention."""
    if len(vectors) != a.degree:
        raise StructuralError(f"A {a.degree}-form needs {a.degree} vectors, got {len(vectors)}")
    result = a
    for vector in vectors:
        result = interior(vector, result)
    return result.coefficient(())


def form_inner(a: KForm, b: KForm) -> Number:
    """Inner product <a, b> induced by the frame metric."""
    a._check(b)
    return sum(
        a.frame.index_sign(key) * coeff * b.coefficient(key) for key, coeff in a.items()
    )


def norm_squared(a: KForm) -> Number:
    return form_inner(a, a)


def max_norm(a: KForm, field: Field = EXACT) -> Number:
    """Largest absolute coefficient, the residual norm used by every check."""
    return field.max_abs(a.coefficients())


def hodge(a: KForm) -> KForm:
    """Hodge star defined by a ^ *b = <a, b> vol."""
    n = a.frame.n
    full = set(range(1, n + 1))
    terms: Dict[MultiIndex, Number] = {}
    for key, coeff in a.items():
        complement = tuple(sorted(full - set(key)))
        sign, _ = sort_indices(key + complement)
        terms[complement] = a.frame.index_sign(key) * sign * coeff
    return KForm(a.frame, n - a.degree, terms)


def star_star_sign(frame: Frame, degree: int) -> int:
    """The sign of ** on forms of the given degree."""
    return (-1) ** (degree * (frame.n - degree) + frame.q)


def endo_action(matrix: Sequence[Sequence[Number]], a: KForm) -> KForm:
    """Derivation action of an endomorphism A on forms.

    (A.a)(X_1, ..., X_k) = -sum_i a(X_1, ..., A X_i, ..., X_k), so that
    A.e^i = -sum_j A_ij e^j.
    """
    n = a.frame.n
    if len(matrix) != n or any(len(row) != n for row in matrix):
        raise StructuralError(f"Endomorphism is not {n}x{n}")
    terms: Dict[MultiIndex, Number] = {}
    for key, coeff in a.items():
        for position, i in enumerate(key):
            row = matrix[i - 1]
            for j, entry in enumerate(row, start=1):
                if entry == 0:
                    continue
                replaced = key[:position] + (j,) + key[position + 1 :]
                sign, sorted_key = sort_indices(replaced)
                if sign:
                    terms[sorted_key] = terms.get(sorted_key, 0) - sign * entry * coeff
    return KForm(a.frame, a.degree, terms)


def pullback(a: KForm, matrix: Sequence[Sequence[Number]], target: Optional[Frame] = None) -> KForm:
    """Substitute e^i -> sum_j T_ij f^j in every factor of a.

    Args:
        a (KForm): The form to transform.
        matrix (Sequence[Sequence[Number]]): T, with one row per index of a's frame.
        target (Frame, optional): The frame of the f^j. Defaults to a's frame.

    Returns:
        KForm: The transformed form on the target frame.
    """
    target = target or a.frame
    if len(matrix) != a.frame.n or any(len(row) != target.n for row in matrix):
        raise StructuralError("Substitution matrix does not match the frames")
    terms: Dict[MultiIndex, Number] = {}
    for key, coeff in a.items():
        partial: Dict[MultiIndex, Number] = {(): coeff}
        for i in key:
            expanded: Dict[MultiIndex, Number] = {}
            for prefix, value in partial.items():
                for j, entry in enumerate(matrix[i - 1], start=1):
                    if entry != 0 and j not in prefix:
                        grown = prefix + (j,)
                        expanded[grown] = expanded.get(grown, 0) + value * entry
            partial = expanded
        for indices, value in partial.items():
            sign, sorted_key = sort_indices(indices)
            terms[sorted_key] = terms.get(sorted_key, 0) + sign * value
    return KForm(target, a.degree, terms)


def extend_derivation(generator_images: Sequence[KForm], a: KForm) -> KForm:
    """Extend a degree-one map given on e^1, ..., e^n to all forms by the graded Leibniz rule.

    d(e^i1 ^ ... ^ e^ik) = sum_r (-1)^(r-1) e^i1 ^ ... ^ d e^ir ^ ... ^ e^ik.
    """
    frame = a.frame
    if len(generator_images) != frame.n:
        raise StructuralError(f"Expected {frame.n} generator images, got {len(generator_images)}")
    terms: Dict[MultiIndex, Number] = {}
    for key, coeff in a.items():
        for position, i in enumerate(key):
            image = generator_images[i - 1]
            sign = (-1) ** position
            for inner, value in image.items():
                expanded = key[:position] + inner + key[position + 1 :]
                term_sign, sorted_key = sort_indices(expanded)
                if term_sign:
                    terms[sorted_key] = terms.get(sorted_key, 0) + term_sign * sign * value * coeff
    degree = a.degree + (generator_images[0].degree - 1 if generator_images else 0)
    return KForm(frame, degree, terms)


def contraction_identity(a: KForm, x: FrameVector, y: FrameVector) -> Tuple[Number, Number]:
    """Both sides of the contraction identity.

    For 1 <= k < n: (-1)^q <X ⌟ *a, Y ⌟ *a> and <a, a><X, Y> - <X ⌟ a, Y ⌟ a>.
    For k = n: <X ⌟ a, Y ⌟ a> and <a, a><X, Y>.
    """
    if a.degree == 0:
        raise StructuralError("The contraction identity needs a form of positive degree")
    if a.degree == a.frame.n:
        return form_inner(interior(x, a), interior(y, a)), form_inner(a, a) * vector_inner(x, y)
    star = hodge(a)
    lhs = (-1) ** a.frame.q * form_inner(interior(x, star), interior(y, star))
    rhs = form_inner(a, a) * vector_inner(x, y) - form_inner(interior(x, a), interior(y, a))
    return lhs, rhs


def contraction_gram(a: KForm) -> List[List[Number]]:
    """The matrix <e_i ⌟ a, e_j ⌟ a> over all pairs of basis vectors."""
    contracted = [interior(basis_vector(a.frame, i), a) for i in range(1, a.frame.n + 1)]
    return [[form_inner(x, y) for y in contracted] for x in contracted]


def basis_forms(frame: Frame, degree: int) -> List[MultiIndex]:
    """All increasing multi-indices of the given degree, in lexicographic order."""
    return list(itertools.combinations(range(1, frame.n + 1), degree))


def to_vector(a: KForm, basis: Sequence[MultiIndex]) -> List[Number]:
    return [a.coefficient(key) for key in basis]


def from_vector(frame: Frame, degree: int, basis: Sequence[MultiIndex], values: Sequence[Number]) -> KForm:
    return KForm(frame, degree, {key: value for key, value in zip(basis, values)})


def form_to_json(a: KForm) -> dict:
    return {
        "degree": a.degree,
        "terms": [
            {"indices": list(key), "coeff": format_scalar(coeff)} for key, coeff in a.items()
        ],
    }


def form_from_json(frame: Frame, data: Mapping, field: Field = EXACT) -> KForm:
    """Read a form from its JSON object {degree, terms: [{indices, coeff}]}."""
    try:
        degree = int(data["degree"])
        terms = {}
        for term in data["terms"]:
            coeff = field.convert(term["coeff"])
            key = tuple(int(i) for i in term["indices"])
            terms[key] = terms.get(key, 0) + coeff
    except (KeyError, TypeError) as exception:
        logger.error("Malformed form object '%s'", data)
        raise StructuralError(f"Malformed form object: {exception}") from exception
    return KForm(frame, degree, terms)

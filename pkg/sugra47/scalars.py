"""
Arithmetic policies: exact rationals or floating point with a tolerance.
"""

import logging
import math
import re
from dataclasses import dataclass, field as dataclass_field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Union

import sympy

from .errors import InexactScalarError, StructuralError

logger = logging.getLogger(__name__)

Number = Union[Fraction, float]

RATIONAL_REGEX = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


class Mode(Enum):
    EXACT = "exact"
    FLOAT = "float"


@dataclass(frozen=True)
class ToleranceConfig:
    """Tolerances used by every float-mode comparison."""

    abs_tol: float = 1e-9
    rel_tol: float = 0.0

    def __post_init__(self):
        if self.abs_tol < 0 or self.rel_tol < 0:
            raise StructuralError(
                f"Tolerances must be nonnegative (abs_tol={self.abs_tol}, rel_tol={self.rel_tol})"
            )


@dataclass(frozen=True)
class Field:
    """The scalar tower used by a computation.

    In exact mode every coefficient is a `Fraction` and equality is equality.
    In float mode coefficients are floats and two numbers are equal when they
    differ by at most the configured tolerance.
    """

    mode: Mode = Mode.EXACT
    tolerance: ToleranceConfig = dataclass_field(default_factory=ToleranceConfig)

    def __post_init__(self):
        if self.mode is Mode.FLOAT and self.tolerance.abs_tol <= 0:
            raise StructuralError("Float mode needs a positive absolute tolerance")

    @classmethod
    def floating(cls, abs_tol: float = 1e-9, rel_tol: float = 0.0) -> "Field":
        return cls(Mode.FLOAT, ToleranceConfig(abs_tol, rel_tol))

    @property
    def exact(self) -> bool:
        return self.mode is Mode.EXACT

    def convert(self, value) -> Number:
        """Convert an int, a float, a Fraction, a sympy number or a "p/q" string."""
        if isinstance(value, str):
            value = parse_scalar(value)
        elif isinstance(value, sympy.Basic):
            value = from_sympy(value)
        if self.exact:
            if isinstance(value, float):
                return Fraction(repr(value))
            return Fraction(value)
        return float(value)

    def is_zero(self, value: Number) -> bool:
        if self.exact:
            return value == 0
        return abs(value) <= self.tolerance.abs_tol

    def equal(self, a: Number, b: Number) -> bool:
        if self.exact:
            return a == b
        bound = max(self.tolerance.abs_tol, self.tolerance.rel_tol * max(abs(a), abs(b)))
        return abs(a - b) <= bound

    def sign(self, value: Number) -> int:
        if self.is_zero(value):
            return 0
        return 1 if value > 0 else -1

    def sqrt(self, value: Number) -> Number:
        """Square root, raising `InexactScalarError` when it is irrational in exact mode."""
        if value < 0 and not self.is_zero(value):
            raise StructuralError(f"Square root of the negative number {value}")
        if not self.exact:
            return math.sqrt(max(float(value), 0.0))
        return self.root(value, 2)

    def root(self, value: Number, n: int) -> Number:
        """Real n-th root (odd n allows negative input)."""
        if not self.exact:
            value = float(value)
            if value < 0:
                return -abs(value) ** (1.0 / n)
            return value ** (1.0 / n)
        value = Fraction(value)
        negative = value < 0
        if negative and n % 2 == 0:
            raise StructuralError(f"Even root of the negative number {value}")
        num, num_exact = sympy.integer_nthroot(abs(value.numerator), n)
        den, den_exact = sympy.integer_nthroot(value.denominator, n)
        if not (num_exact and den_exact):
            raise InexactScalarError(f"The {n}-th root of {value} is not rational")
        result = Fraction(int(num), int(den))
        return -result if negative else result

    def max_abs(self, values: Iterable[Number]) -> Number:
        result = Fraction(0) if self.exact else 0.0
        for value in values:
            result = max(result, abs(value))
        return result


EXACT = Field()


def parse_scalar(text: str) -> Number:
    """Parse a "p/q" string as a Fraction and anything else as a float.

    Args:
        text (str): The text to parse.

    Returns:
        Number: The parsed scalar.
    """
    match = RATIONAL_REGEX.match(text)
    if match:
        numerator, denominator = match.groups()
        if denominator is not None and int(denominator) == 0:
            raise StructuralError(f"'{text}' has a zero denominator")
        return Fraction(int(numerator), int(denominator or 1))
    try:
        return float(text)
    except ValueError as exception:
        raise StructuralError(f"'{text}' is not a scalar") from exception


def format_scalar(value: Number) -> Union[str, float]:
    """Render a scalar for a report: exact values as "p/q" strings."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, int):
        return str(value)
    return float(value)


def to_sympy(value: Number):
    if isinstance(value, Fraction):
        return sympy.Rational(value.numerator, value.denominator)
    if isinstance(value, int):
        return sympy.Integer(value)
    return sympy.Float(value)


def from_sympy(value) -> Number:
    value = sympy.sympify(value)
    if value.is_Rational:
        return Fraction(int(value.p), int(value.q))
    return float(value)

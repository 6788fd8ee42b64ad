"""
Coframe differential graded algebras: the exterior derivative given on a
coframe by structure equations, written either as forms or as text such as
"-a2^g3 - a3^(3g1 - g2) - a4^g4".
"""

import logging
import re
from typing import Dict, Mapping, Optional, Sequence

from .errors import StructuralError
from .exterior import (
    Frame,
    KForm,
    basis_form,
    extend_derivation,
    form_from_json,
    form_to_json,
    max_norm,
    wedge,
    zero_form,
)
from .lie import LieAlgebraData
from .scalars import EXACT, Field, Number

logger = logging.getLogger(__name__)

TOKEN_REGEX = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_]+\d*)|(\S))")

CP2XS3_LABELS = ("a1", "a2", "a3", "a4", "b1", "b2", "b3", "g1", "g2", "g3", "g4")

# The CP2 x S3 structure equations as printed. They violate d^2 = 0.
CP2XS3_LITERAL = {
    "a1": "-a2^g3 - a3^(3g1 - g2) - a4^g4",
    "a2": "a1^g3 - a3^g4 - a1^(3g1 + g2)",
    "a3": "a1^(3g1 - g2) + a2^g4 - a4^g2",
    "a4": "a1^g4 + a2^(3g1 + g2) - a3^g3",
    "b1": "-b2^b3",
    "b2": "-b3^b1",
    "b3": "-b1^b2",
    "g1": "-a1^a3 - a2^a4",
    "g2": "a1^a3 - a2^a4 - 2g3^g4",
    "g3": "-a1^a2 - a3^a4 - 2g4^g2",
    "g4": "-a1^a4 - a2^a3 - 2g2^g3",
}

# Three single-symbol corrections (in d a2, d a3 and d a4) restore d^2 = 0.
CP2XS3_CORRECTED = dict(
    CP2XS3_LITERAL,
    a2="a1^g3 - a3^g4 - a4^(3g1 + g2)",
    a3="a1^(3g1 - g2) + a2^g4 - a4^g3",
    a4="a1^g4 + a2^(3g1 + g2) + a3^g3",
)


class _Parser:
    """Recursive descent over sums of wedge products of labelled 1-forms."""

    def __init__(self, text: str, frame: Frame, field: Field) -> None:
        self.text = text
        self.frame = frame
        self.field = field
        self.index = {frame.label(i): i for i in range(1, frame.n + 1)}
        self.tokens = []
        position = 0
        text = text.strip()
        while position < len(text):
            match = TOKEN_REGEX.match(text, position)
            if match is None:
                break
            number, label, symbol = match.groups()
            if number is not None:
                self.tokens.append(("number", number))
            elif label is not None:
                self.tokens.append(("label", label))
            else:
                self.tokens.append(("symbol", symbol))
            position = match.end()
        self.position = 0

    def error(self, message: str) -> StructuralError:
        logger.error("Could not parse '%s'", self.text)
        return StructuralError(f"{message} in '{self.text}'")

    def peek(self):
        return self.tokens[self.position] if self.position < len(self.tokens) else (None, None)

    def take(self):
        token = self.peek()
        self.position += 1
        return token

    def parse(self) -> KForm:
        if not self.tokens:
            raise self.error("Empty expression")
        result = self.expression()
        if self.position != len(self.tokens):
            raise self.error(f"Unexpected token '{self.peek()[1]}'")
        return result

    def expression(self) -> KForm:
        sign = 1
        kind, value = self.peek()
        if kind == "symbol" and value in "+-":
            self.take()
            sign = -1 if value == "-" else 1
        result = sign * self.term()
        while True:
            kind, value = self.peek()
            if kind != "symbol" or value not in "+-":
                return result
            self.take()
            term = self.term()
            if term.degree != result.degree:
                raise self.error("Terms of different degrees")
            result = result + term if value == "+" else result - term

    def term(self) -> KForm:
        coeff: Number = self.field.convert(1)
        kind, value = self.peek()
        if kind == "number":
            self.take()
            coeff = self.field.convert(value)
            if self.peek() == ("symbol", "*"):
                self.take()
        result = self.factor()
        while self.peek() == ("symbol", "^"):
            self.take()
            result = wedge(result, self.factor())
        return coeff * result

    def factor(self) -> KForm:
        kind, value = self.take()
        if kind == "label":
            if value not in self.index:
                raise self.error(f"Unknown generator '{value}'")
            return basis_form(self.frame, (self.index[value],), self.field.convert(1))
        if (kind, value) == ("symbol", "("):
            inner = self.expression()
            if self.take() != ("symbol", ")"):
                raise self.error("Missing ')'")
            return inner
        raise self.error(f"Unexpected token '{value}'")


def parse_form_expression(text: str, frame: Frame, field: Field = EXACT) -> KForm:
    """Parse a text such as "-a2^g3 - a3^(3g1 - g2)" against the labels of `frame`.

    "0" alone denotes a zero 2-form.
    """
    if text.strip() == "0":
        return zero_form(frame, 2)
    return _Parser(text, frame, field).parse()


class CoframeDGA:
    """The derivative d on a coframe, given on each generator as a 2-form."""

    def __init__(self, frame: Frame, differentials: Sequence[KForm], field: Field = EXACT) -> None:
        if len(differentials) != frame.n:
            raise StructuralError(f"Expected {frame.n} differentials, got {len(differentials)}")
        for i, form in enumerate(differentials, start=1):
            if form.frame != frame or form.degree != 2:
                raise StructuralError(f"d {frame.label(i)} must be a 2-form on the coframe")
        self.frame = frame
        self.differentials = tuple(differentials)
        self.field = field

    @classmethod
    def from_table(cls, table: Mapping[str, str], labels: Sequence[str], field: Field = EXACT) -> "CoframeDGA":
        """Build the algebra from {generator label: text of its derivative}."""
        frame = Frame.euclidean(len(labels), labels)
        missing = [label for label in labels if label not in table]
        if missing:
            raise StructuralError(f"No derivative given for {', '.join(missing)}")
        return cls(frame, [parse_form_expression(table[label], frame, field) for label in labels], field)

    def d(self, a: KForm) -> KForm:
        if a.frame != self.frame:
            raise StructuralError("Form does not live on the coframe")
        return extend_derivation(self.differentials, a)

    def defects(self) -> Dict[str, KForm]:
        """Generators whose d^2 is nonzero, with the offending 3-form."""
        result = {}
        for i, form in enumerate(self.differentials, start=1):
            square = self.d(form)
            if not self.field.is_zero(max_norm(square, self.field)):
                result[self.frame.label(i)] = square
        if result:
            logger.warning("d^2 != 0 on %s", ", ".join(result))
        return result

    def validate(self) -> None:
        defects = self.defects()
        if defects:
            raise StructuralError(f"d^2 does not vanish on {', '.join(defects)}")

    def to_json(self) -> dict:
        return {
            "generators": [self.frame.label(i) for i in range(1, self.frame.n + 1)],
            "d": [
                {"gen": self.frame.label(i), "two_form": form_to_json(form)}
                for i, form in enumerate(self.differentials, start=1)
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping, field: Field = EXACT) -> "CoframeDGA":
        """Read {generators, d: [{gen, two_form}]}; a two_form is a form object or a text expression."""
        try:
            labels = list(data["generators"])
            frame = Frame.euclidean(len(labels), labels)
            given = {}
            for entry in data["d"]:
                value = entry["two_form"]
                if isinstance(value, str):
                    given[entry["gen"]] = parse_form_expression(value, frame, field)
                else:
                    given[entry["gen"]] = form_from_json(frame, value, field)
        except (KeyError, TypeError) as exception:
            logger.error("Malformed coframe object")
            raise StructuralError(f"Malformed coframe object: {exception}") from exception
        differentials = [given.get(label, zero_form(frame, 2)) for label in labels]
        return cls(frame, differentials, field)


def lie_from_dga(dga: CoframeDGA, check: bool = True) -> LieAlgebraData:
    """The Lie algebra dual to the coframe, with c^k_ij = -(d theta^k)(X_i, X_j)."""
    brackets: Dict = {}
    for k, form in enumerate(dga.differentials):
        for (i, j), value in form.items():
            brackets.setdefault((i - 1, j - 1), {})[k] = -value
    labels = [dga.frame.label(i).upper() for i in range(1, dga.frame.n + 1)]
    return LieAlgebraData(dga.frame.n, brackets, labels, None, dga.field, check=check)


def cp2xs3_dga(corrected: bool = True, field: Field = EXACT) -> CoframeDGA:
    table = CP2XS3_CORRECTED if corrected else CP2XS3_LITERAL
    return CoframeDGA.from_table(table, CP2XS3_LABELS, field)


def dga_from_structure_equations(
    table: Mapping[str, str], labels: Optional[Sequence[str]] = None, field: Field = EXACT
) -> CoframeDGA:
    """Ingest structure equations {generator: "d of it"} and check d^2 = 0.

    Raises:
        StructuralError: if d^2 does not vanish on some generator.
    """
    dga = CoframeDGA.from_table(table, list(labels or table), field)
    dga.validate()
    return dga

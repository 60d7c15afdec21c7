import re
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from lark.exceptions import UnexpectedEOF, UnexpectedInput, UnexpectedToken, VisitError
from lark.lark import Lark
from lark.visitors import Transformer

from .fields import QQ, Field
from .poly import Exponents, Polynomial, PolynomialRing, VariableIndexError

_polynomial_parser = Lark(
    """
    %import common.INT
    %import common.WS
    %ignore WS

    start: first_term (SIGN term)*

    first_term: SIGN? term

    term: coefficient "*"? factor ("*" factor)*   -> scaled_term
        | coefficient                             -> constant_term
        | factor ("*" factor)*                    -> unit_term

    coefficient: INT ("/" INT)?
    factor: NAME ("^" INT)?

    SIGN: "+" | "-"
    NAME: /[A-Za-z_][A-Za-z0-9_]*/
""",
    parser="lalr",
)

RawTerm = Tuple[Fraction, Dict[str, int]]


class PolynomialSyntaxError(ValueError):
    def __init__(self, message: str, line: Optional[int], column: Optional[int]):
        location = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{location}")
        self.line = line
        self.column = column


class _TextToTerms(Transformer):
    def coefficient(self, s):
        if len(s) == 1:
            return Fraction(int(s[0]))
        denominator = int(s[1])
        if denominator == 0:
            raise PolynomialSyntaxError(
                "Zero denominator in coefficient", s[1].line, s[1].column
            )
        return Fraction(int(s[0]), denominator)

    def factor(self, s):
        name = str(s[0])
        power = int(s[1]) if len(s) > 1 else 1
        return name, power

    @staticmethod
    def _collect(factors) -> Dict[str, int]:
        powers: Dict[str, int] = {}
        for name, power in factors:
            powers[name] = powers.get(name, 0) + power
        return powers

    def scaled_term(self, s):
        return s[0], self._collect(s[1:])

    def constant_term(self, s):
        return s[0], {}

    def unit_term(self, s):
        return Fraction(1), self._collect(s)

    def first_term(self, s):
        if len(s) == 1:
            return s[0]
        sign, (coefficient, powers) = s
        return (-coefficient if sign == "-" else coefficient), powers

    def start(self, s):
        terms = [s[0]]
        for sign, (coefficient, powers) in zip(s[1::2], s[2::2]):
            terms.append((-coefficient if sign == "-" else coefficient, powers))
        return terms


def _end_position(text: str) -> Tuple[int, int]:
    lines = text.split("\n")
    return len(lines), len(lines[-1]) + 1


def parse_terms(text: str) -> List[RawTerm]:
    """Parse polynomial text into ``(coefficient, {name: power})`` terms."""
    try:
        parsed = _polynomial_parser.parse(text)
    except UnexpectedEOF as e:
        line, column = _end_position(text)
        raise PolynomialSyntaxError("Unexpected end of input", line, column) from e
    except UnexpectedToken as e:
        if e.token.type == "$END":
            line, column = _end_position(text)
            raise PolynomialSyntaxError("Unexpected end of input", line, column) from e
        raise PolynomialSyntaxError(
            f"Syntax error: unexpected {e.token!r}", e.line, e.column
        ) from e
    except UnexpectedInput as e:
        raise PolynomialSyntaxError(
            f"Syntax error: {e.__class__.__name__}", e.line, e.column
        ) from e
    try:
        return _TextToTerms().transform(parsed)
    except VisitError as e:
        raise e.orig_exc from e


def natural_key(name: str):
    return [int(chunk) if chunk.isdigit() else chunk for chunk in re.split(r"(\d+)", name)]


def collect_names(term_lists: Iterable[Sequence[RawTerm]]) -> Set[str]:
    return {
        name
        for terms in term_lists
        for _coefficient, powers in terms
        for name, power in powers.items()
        if power
    }


def infer_ring(names: Iterable[str], field: Field = QQ) -> PolynomialRing:
    ordered = sorted(set(names), key=natural_key)
    return PolynomialRing(field, len(ordered), ordered)


def build_polynomial(terms: Sequence[RawTerm], ring: PolynomialRing) -> Polynomial:
    field = ring.field
    result: Dict[Exponents, object] = {}
    for coefficient, powers in terms:
        exponents = [0] * ring.num_vars
        for name, power in powers.items():
            if not power:
                continue
            try:
                exponents[ring.index_of(name)] += power
            except VariableIndexError as e:
                raise PolynomialSyntaxError(
                    f"Unknown variable {name!r}", None, None
                ) from e
        key = tuple(exponents)
        try:
            value = field.convert(coefficient)
        except ZeroDivisionError as e:
            raise PolynomialSyntaxError(
                f"Coefficient {coefficient} is undefined over {field.tag()}", None, None
            ) from e
        result[key] = field.add(result[key], value) if key in result else value
    return ring.from_dict(result)  # type: ignore


def parse_polynomial(
    text: str, ring: Optional[PolynomialRing] = None, field: Field = QQ
) -> Polynomial:
    """Parse a polynomial.

    Without an explicit ``ring`` the variables are the names occurring in
    ``text``, in natural sort order (``x0, x1, y0, y1``).
    """
    terms = parse_terms(text)
    if ring is None:
        ring = infer_ring(collect_names([terms]), field)
    return build_polynomial(terms, ring)


def parse_polynomials(
    texts: Sequence[str], ring: Optional[PolynomialRing] = None, field: Field = QQ
) -> List[Polynomial]:
    """Parse several polynomials into one shared ring."""
    parsed = [parse_terms(text) for text in texts]
    if ring is None:
        ring = infer_ring(collect_names(parsed), field)
    return [build_polynomial(terms, ring) for terms in parsed]

"""
================================================================================
CONTEXT BLOCK
================================================================================
File: parser.py
Module: puiseux_analysis.parser
Purpose: Polynomial input grammar, canonical rendering and mini-regularization

Description:
    parse_poly() turns text such as "x^4 - t^2*x^2*y^2 + y^4" into an exact
    sympy Poly over the Gaussian rationals in (x, y) or (x, y, t).
    render_poly() prints a Poly back in the same grammar, so that parsing
    the rendered text returns the same polynomial.

Grammar:
    expr    :: term (('+' | '-') term)*
    term    :: signed (('*' | '/') signed | power)*
    signed  :: ('+' | '-')* power
    power   :: atom ('^' integer)?
    atom    :: number | 'i' | 'x' | 'y' | 't' | '(' expr ')'
    number  :: digits ('/' digits)?

    Juxtaposition multiplies ("2x^2y"). Division is only by nonzero
    constants. Exponents are nonnegative integers.

Unicode:
    Superscript digits become '^' exponents, U+2212 becomes '-', and the
    middle dot and multiplication sign become '*'. Whatever remains
    outside ASCII is transliterated with unidecode.

Mini-regularization:
    f = H_m + (higher order) is mini-regular in x when H_m(1, 0) != 0.
    Otherwise y -> y + c*x is applied for the smallest integer c >= 0 with
    H_m(1, c) != 0.

Created: 2025-12-14
================================================================================
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from pyparsing import (
    Forward,
    Literal,
    Optional as Opt,
    ParseBaseException,
    ParseFatalException,
    ParserElement,
    Regex,
    StringEnd,
    Suppress,
    Word,
    ZeroOrMore,
    alphas,
    one_of,
)
from sympy import I, Poly, Rational, expand
from unidecode import unidecode

from .algebra import INF, T, X, Y, join_terms, render_term, to_coeff
from .errors import PolynomialSyntaxError, ZeroInputError
from .series import PuiseuxSeries

logger = logging.getLogger(__name__)

ParserElement.enable_packrat()

VARIABLES = {"x": X, "y": Y, "t": T}

_SUPERSCRIPTS = {
    "⁰": "0", "¹": "1", "²": "2", "³": "3", "⁴": "4",
    "⁵": "5", "⁶": "6", "⁷": "7", "⁸": "8", "⁹": "9",
    "⁻": "-", "⁺": "+",
}
_OPERATORS = {"−": "-", "–": "-", "·": "*", "×": "*", "⋅": "*"}


@dataclass(frozen=True)
class InputPolynomial:
    """
    Parsed input.

    Attributes:
        source: Text as given
        poly: Exact Poly in (x, y), or (x, y, t) when t occurs
        variables: Names of the variables that occur
    """
    source: str
    poly: Poly
    variables: tuple

    @property
    def has_parameter(self) -> bool:
        return "t" in self.variables


# =============================================================================
# NORMALIZATION
# =============================================================================

def normalize(text: str) -> str:
    """Map Unicode exponents and operators onto the ASCII grammar."""
    out = []
    in_exponent = False
    for ch in text:
        if ch in _SUPERSCRIPTS:
            if not in_exponent:
                out.append("^")
                in_exponent = True
            out.append(_SUPERSCRIPTS[ch])
            continue
        in_exponent = False
        out.append(_OPERATORS.get(ch, ch))
    return unidecode("".join(out))


# =============================================================================
# GRAMMAR
# =============================================================================

def _number(s, loc, toks):
    return Rational(toks[0])


def _identifier(s, loc, toks):
    name = toks[0]
    letters = {**VARIABLES, "i": I}
    if all(ch in letters for ch in name):
        result = 1
        for ch in name:
            result = result * letters[ch]
        return result
    raise ParseFatalException(s, loc, f"unknown variable '{name}'")


def _exponent(s, loc, toks):
    value = int(toks[0].replace(" ", ""))
    if value < 0:
        raise ParseFatalException(s, loc, f"negative exponent {value}")
    return value


def _power(s, loc, toks):
    if len(toks) == 1:
        return toks[0]
    return toks[0] ** toks[1]


def _signed(s, loc, toks):
    *signs, value = toks
    return -value if signs.count("-") % 2 else value


def _term(s, loc, toks):
    result = toks[0]
    pending = "*"
    for tok in toks[1:]:
        if isinstance(tok, str):
            pending = tok
            continue
        if pending == "/":
            if not tok.is_number or tok == 0:
                raise ParseFatalException(s, loc, "division is only allowed by a nonzero constant")
            result = result / tok
        else:
            result = result * tok
        pending = "*"
    return result


def _sum(s, loc, toks):
    result = toks[0]
    for op, value in zip(toks[1::2], toks[2::2]):
        result = result + value if op == "+" else result - value
    return result


def _build_grammar() -> ParserElement:
    expr = Forward()
    number = Regex(r"\d+(/\d+)?").set_parse_action(_number)
    identifier = Word(alphas, alphas + "_").set_parse_action(_identifier)
    atom = number | identifier | (Suppress("(") + expr + Suppress(")"))
    exponent = Regex(r"[+-]?\s*\d+").set_parse_action(_exponent)
    power = (atom + Opt(Suppress("^") + exponent)).set_parse_action(_power)
    signed = (ZeroOrMore(one_of("+ -")) + power).set_parse_action(_signed)
    term = (signed + ZeroOrMore((one_of("* /") + signed) | power)).set_parse_action(_term)
    expr <<= (term + ZeroOrMore(one_of("+ -") + term)).set_parse_action(_sum)
    return expr


EXPRESSION = _build_grammar()
GRAMMAR = EXPRESSION + StringEnd()


# Series in y with rational exponents: "y^(3/2) - 2*y^(7/4) + O(y^2)"

@dataclass(frozen=True)
class _SeriesTerm:
    coeff: object
    exponent: Fraction


def _fraction(s, loc, toks):
    return Fraction(toks[0])


def _y_power(s, loc, toks):
    return toks[1] if len(toks) > 1 else Fraction(1)


def _constant(s, loc, toks):
    value = toks[0]
    if not value.is_number:
        raise ParseFatalException(s, loc, "series coefficients must be constants")
    return value


def _series_term(s, loc, toks):
    coeff = next((t for t in toks if not isinstance(t, Fraction)), 1)
    exponent = next((t for t in toks if isinstance(t, Fraction)), Fraction(0))
    return _SeriesTerm(coeff, exponent)


def _series_sum(s, loc, toks):
    terms = []
    sign = 1
    trunc = INF
    for tok in toks:
        if isinstance(tok, str):
            sign = -1 if tok == "-" else 1
        elif isinstance(tok, _SeriesTerm):
            terms.append((tok.exponent, to_coeff(sign * tok.coeff)))
            sign = 1
        else:
            trunc = min(trunc, tok)
    return PuiseuxSeries.make(terms, trunc)


def _build_series_grammar() -> ParserElement:
    rational = Regex(r"\d+(/\d+)?").set_parse_action(_fraction)
    exponent = rational | (Suppress("(") + rational + Suppress(")"))
    y_power = (Literal("y") + Opt(Suppress("^") + exponent)).set_parse_action(_y_power)
    unit = Literal("i").set_parse_action(lambda: I)
    number = Regex(r"\d+(/\d+)?").set_parse_action(_number)
    constant = (
        (number + Opt(Opt(Suppress("*")) + unit)).set_parse_action(_term)
        | unit
        | (Suppress("(") + EXPRESSION + Suppress(")")).set_parse_action(_constant)
    )
    term = (constant + Opt(Opt(Suppress("*")) + y_power)) | y_power
    remainder = Suppress("O") + Suppress("(") + y_power + Suppress(")")
    signed_term = remainder | term.set_parse_action(_series_term)
    series = Opt(one_of("+ -")) + signed_term + ZeroOrMore(one_of("+ -") + signed_term)
    return series.set_parse_action(_series_sum) + StringEnd()


SERIES_GRAMMAR = _build_series_grammar()


# =============================================================================
# PUBLIC API
# =============================================================================

def parse_poly(text: str) -> InputPolynomial:
    """
    Parse a polynomial in x, y and optionally t.

    Args:
        text: Source text (ASCII grammar or the Unicode forms above)

    Returns:
        InputPolynomial with an exact Poly

    Raises:
        PolynomialSyntaxError: With the line and column of the failure
    """
    source = text
    normalized = normalize(text)
    if not normalized.strip():
        raise PolynomialSyntaxError("empty input", 1, 1)
    try:
        expr = GRAMMAR.parse_string(normalized, parse_all=True)[0]
    except ParseBaseException as exc:
        raise PolynomialSyntaxError(exc.msg, exc.lineno, exc.col) from exc
    expr = expand(expr)
    used = tuple(name for name, sym in VARIABLES.items() if expr.has(sym))
    gens = (X, Y, T) if "t" in used else (X, Y)
    poly = Poly(expr, *gens)
    logger.debug(f"Parsed {source!r} as {poly.as_expr()}")
    return InputPolynomial(source=source, poly=poly, variables=used)


def parse_series(text: str) -> PuiseuxSeries:
    """
    Parse a Puiseux series in y such as "y^(3/2) + y^(7/4)".

    Coefficients are Gaussian rationals; a trailing "O(y^e)" sets the
    truncation order. The printed form of any exact series parses back.

    Raises:
        PolynomialSyntaxError: With the line and column of the failure
    """
    normalized = normalize(text)
    if not normalized.strip():
        raise PolynomialSyntaxError("empty series", 1, 1)
    try:
        return SERIES_GRAMMAR.parse_string(normalized, parse_all=True)[0]
    except ParseBaseException as exc:
        raise PolynomialSyntaxError(exc.msg, exc.lineno, exc.col) from exc


def _monomial(exps: tuple, gens: tuple) -> str:
    pieces = []
    for e, g in zip(exps, gens):
        if e == 1:
            pieces.append(str(g))
        elif e > 1:
            pieces.append(f"{g}^{e}")
    return "*".join(pieces)


def render_poly(poly: Poly) -> str:
    """Print a Poly in the input grammar, highest total degree first."""
    if poly.is_zero:
        return "0"
    terms = sorted(poly.terms(), key=lambda item: (-sum(item[0]), [-e for e in item[0]]))
    return join_terms(
        render_term(to_coeff(c), _monomial(exps, poly.gens)) for exps, c in terms
    )


def lowest_form(poly: Poly) -> tuple[int, object]:
    """(m, H_m): order and lowest homogeneous part in (x, y)."""
    xy = Poly(poly.as_expr(), X, Y)
    if xy.is_zero:
        raise ZeroInputError()
    m = min(i + j for (i, j), _ in xy.terms())
    form = sum(c * X ** i * Y ** j for (i, j), c in xy.terms() if i + j == m)
    return m, form


def mini_regularize(poly: Poly) -> tuple[Poly, Optional[int]]:
    """
    Make f mini-regular in x by y -> y + c*x.

    For a family F(x, y, t) the shift is chosen from F(x, y, 0) and applied
    to the whole family.

    Args:
        poly: Nonzero Poly in (x, y) or (x, y, t)

    Returns:
        (poly, None) when already mini-regular, else (shifted poly, c)

    Raises:
        ZeroInputError: For the zero polynomial
    """
    gens = poly.gens
    base = Poly(poly.as_expr().subs(T, 0), X, Y) if T in gens else Poly(poly.as_expr(), X, Y)
    m, form = lowest_form(base)
    c = 0
    while form.subs({X: 1, Y: c}) == 0:
        c += 1
    if c == 0:
        return poly, None
    shifted = Poly(expand(poly.as_expr().subs(Y, Y + c * X)), *gens)
    logger.info(f"Applied y -> y + {c}*x to reach mini-regularity of order {m}")
    return shifted, c


def describe_change(c: Optional[int]) -> Optional[str]:
    if c is None:
        return None
    return "y -> y + x" if c == 1 else f"y -> y + {c}*x"

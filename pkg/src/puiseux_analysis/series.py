"""
================================================================================
CONTEXT BLOCK
================================================================================
File: series.py
Module: puiseux_analysis.series
Purpose: Truncated fractional power series in y

Description:
    PuiseuxSeries holds finitely many terms a_i*y^(e_i) together with a
    truncation order: every exponent below `trunc` is known (missing terms
    are zero), nothing is known at or beyond it. An exact finite series has
    trunc = +inf.

    Exponents are stored as reduced Fractions, so the shared denominator N
    (the Puiseux multiplicity) is always the lcm of the stored
    denominators and the gcd normalization holds without bookkeeping.

Truncation Rules:
    - a + b is known below min(trunc_a, trunc_b)
    - a * b is known below min(trunc_a + low(b), trunc_b + low(a)),
      where low() is the order, or the trunc when no term is stored

Created: 2025-12-14
================================================================================
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from mpmath import iv

from .algebra import (
    INF,
    CBall,
    Coeff,
    Exponent,
    as_box,
    c_add,
    c_mul,
    c_neg,
    coeff_to_dict,
    format_exponent,
    gauss,
    is_zero,
    join_terms,
    render_term,
    root_of_unity,
    to_coeff,
)
from .errors import PreconditionError, TruncationError

logger = logging.getLogger(__name__)


def _exp(value) -> Exponent:
    if value == INF:
        return INF
    return Fraction(value)


def _add_exp(a: Exponent, b: Exponent) -> Exponent:
    if a == INF or b == INF:
        return INF
    return a + b


def monomial_text(exponent: Fraction, var: str = "y") -> str:
    if exponent == 0:
        return ""
    if exponent == 1:
        return var
    if exponent.denominator == 1:
        return f"{var}^{exponent.numerator}"
    return f"{var}^({exponent.numerator}/{exponent.denominator})"


@dataclass(frozen=True)
class PuiseuxSeries:
    """
    Truncated Puiseux series Σ a_i y^(e_i) + O(y^trunc).

    Build instances with PuiseuxSeries.make() so that exponents are merged,
    zero coefficients dropped and terms at or past `trunc` discarded.
    """

    terms: tuple = ()
    trunc: Exponent = INF

    # =========================================================================
    # CONSTRUCTION
    # =========================================================================

    @classmethod
    def make(cls, terms: Iterable, trunc: Exponent = INF) -> "PuiseuxSeries":
        trunc = _exp(trunc)
        merged: dict[Fraction, Coeff] = {}
        for exponent, coeff in terms:
            exponent = Fraction(exponent)
            if exponent >= trunc:
                continue
            coeff = to_coeff(coeff)
            merged[exponent] = c_add(merged[exponent], coeff) if exponent in merged else coeff
        kept = tuple(
            (e, c) for e, c in sorted(merged.items(), key=lambda item: item[0])
            if not is_zero(c)
        )
        return cls(kept, trunc)

    @classmethod
    def zero(cls, trunc: Exponent = INF) -> "PuiseuxSeries":
        return cls((), _exp(trunc))

    @classmethod
    def monomial(cls, coeff, exponent, trunc: Exponent = INF) -> "PuiseuxSeries":
        return cls.make([(exponent, coeff)], trunc)

    @classmethod
    def constant(cls, coeff) -> "PuiseuxSeries":
        return cls.make([(0, coeff)])

    # =========================================================================
    # BASIC PROPERTIES
    # =========================================================================

    @property
    def exponents(self) -> list[Fraction]:
        return [e for e, _ in self.terms]

    @property
    def is_exact(self) -> bool:
        """True when the series is a finite, fully known sum."""
        return self.trunc == INF

    @property
    def is_zero(self) -> bool:
        """True only for the provably zero series."""
        return not self.terms and self.trunc == INF

    @property
    def denom(self) -> int:
        """Puiseux multiplicity N: reduced common denominator of the exponents."""
        n = 1
        for e, _ in self.terms:
            n = math.lcm(n, e.denominator)
        return n

    def order(self) -> Exponent:
        """
        O_y of the series.

        Raises:
            TruncationError: When no term is known and the series is not
                             provably zero
        """
        if self.terms:
            return self.terms[0][0]
        if self.trunc == INF:
            return INF
        raise TruncationError(f"no known term below y^{format_exponent(self.trunc)}")

    def low(self) -> Exponent:
        """Order when a term is known, otherwise the truncation order."""
        return self.terms[0][0] if self.terms else self.trunc

    @property
    def leading(self) -> tuple[Fraction, Coeff]:
        if not self.terms:
            raise TruncationError("series has no known leading term")
        return self.terms[0]

    def coefficient(self, exponent) -> Coeff:
        exponent = Fraction(exponent)
        if exponent >= self.trunc:
            raise TruncationError(f"coefficient of y^{exponent} is beyond the truncation")
        for e, c in self.terms:
            if e == exponent:
                return c
        return gauss(0)

    # =========================================================================
    # ARITHMETIC
    # =========================================================================

    def __add__(self, other: "PuiseuxSeries") -> "PuiseuxSeries":
        return PuiseuxSeries.make(self.terms + other.terms, min(self.trunc, other.trunc))

    def __neg__(self) -> "PuiseuxSeries":
        return PuiseuxSeries(tuple((e, c_neg(c)) for e, c in self.terms), self.trunc)

    def __sub__(self, other: "PuiseuxSeries") -> "PuiseuxSeries":
        return self + (-other)

    def __mul__(self, other: "PuiseuxSeries") -> "PuiseuxSeries":
        trunc = min(_add_exp(self.trunc, other.low()), _add_exp(other.trunc, self.low()))
        products = []
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                if e1 + e2 < trunc:
                    products.append((e1 + e2, c_mul(c1, c2)))
        return PuiseuxSeries.make(products, trunc)

    def __pow__(self, n: int) -> "PuiseuxSeries":
        result = PuiseuxSeries.constant(1)
        for _ in range(n):
            result = result * self
        return result

    def scale(self, coeff: Coeff) -> "PuiseuxSeries":
        return PuiseuxSeries.make(((e, c_mul(c, coeff)) for e, c in self.terms), self.trunc)

    def shift(self, exponent) -> "PuiseuxSeries":
        """Multiply by y^exponent."""
        exponent = Fraction(exponent)
        return PuiseuxSeries(
            tuple((e + exponent, c) for e, c in self.terms),
            _add_exp(self.trunc, exponent),
        )

    # =========================================================================
    # CUTTING
    # =========================================================================

    def prefix_below(self, exponent) -> "PuiseuxSeries":
        """Exact series of the terms with exponent < `exponent`."""
        exponent = Fraction(exponent)
        if exponent > self.trunc:
            raise TruncationError(f"prefix below y^{exponent} is not fully known")
        return PuiseuxSeries(tuple((e, c) for e, c in self.terms if e < exponent), INF)

    def truncate_above(self, exponent: Exponent) -> "PuiseuxSeries":
        """Exact series of the terms with exponent <= `exponent`."""
        if exponent == INF:
            return self
        exponent = Fraction(exponent)
        if exponent >= self.trunc:
            raise TruncationError(f"terms up to y^{exponent} are not fully known")
        return PuiseuxSeries(tuple((e, c) for e, c in self.terms if e <= exponent), INF)

    def cap(self, exponent: Exponent) -> "PuiseuxSeries":
        """Forget everything at or beyond `exponent`."""
        return PuiseuxSeries.make(self.terms, min(self.trunc, _exp(exponent)))

    # =========================================================================
    # CONJUGATION, METRIC, CONTACT
    # =========================================================================

    def conjugate(self, k: int) -> "PuiseuxSeries":
        """Apply y^(1/N) -> θ^k y^(1/N) with θ = exp(2πi/N)."""
        n = self.denom
        return PuiseuxSeries.make(
            ((e, c_mul(c, root_of_unity(n, k * int(e * n)))) for e, c in self.terms),
            self.trunc,
        )

    def conjugates(self) -> list["PuiseuxSeries"]:
        return [self.conjugate(k) for k in range(self.denom)]

    def metric_norm(self) -> CBall:
        """Enclosure of Σ 2^(-e_i) |a_i| / (1 + |a_i|) over the stored terms."""
        total = iv.mpf(0)
        log2 = iv.ln(2)
        for e, c in self.terms:
            magnitude = abs(as_box(c))
            weight = iv.exp(-(iv.mpf(e.numerator) / e.denominator) * log2)
            total += weight * magnitude / (1 + magnitude)
        return CBall(iv.mpc(total, 0), iv.prec)

    def contact_order(self, other: "PuiseuxSeries", curve_level: bool = False) -> Exponent:
        """
        Contact order O_y(self - other), or its maximum over the conjugates
        of `other` when `curve_level` is set.

        Raises:
            TruncationError: When the difference vanishes to the stored depth
                             but the two series are not identical
        """
        if curve_level:
            return max(self.contact_order(conj) for conj in other.conjugates())
        if self == other:
            return INF
        difference = self - other
        if difference.terms:
            return difference.terms[0][0]
        if difference.trunc == INF:
            return INF
        raise TruncationError(
            f"series agree up to y^{format_exponent(difference.trunc)}"
        )

    def puiseux_pairs(self) -> list[Fraction]:
        """Characteristic exponents: terms that enlarge the running denominator."""
        pairs = []
        running = 1
        for e, _ in self.terms:
            enlarged = math.lcm(running, e.denominator)
            if enlarged > running:
                pairs.append(e)
                running = enlarged
        return pairs

    # =========================================================================
    # OUTPUT
    # =========================================================================

    def __str__(self) -> str:
        pieces = [render_term(c, monomial_text(e)) for e, c in self.terms]
        if self.trunc != INF:
            pieces.append(f"O({monomial_text(Fraction(self.trunc)) or '1'})")
        return join_terms(pieces) if pieces else "0"

    def to_dict(self) -> dict:
        n = self.denom
        return {
            "denom": n,
            "terms": [[int(e * n), coeff_to_dict(c)] for e, c in self.terms],
            "trunc": format_exponent(self.trunc),
            "text": str(self),
        }


def evaluate_into(alpha: PuiseuxSeries, phi) -> PuiseuxSeries:
    """
    Substitute ξ = alpha into φ(ξ) = Σ α_k ξ^k by Horner's rule.

    Args:
        alpha: Series to substitute
        phi: Object exposing `coeffs`, a mapping ξ-degree -> PuiseuxSeries

    Returns:
        φ(alpha(y), y) with the truncation order the inputs allow
    """
    if alpha.terms and alpha.terms[0][0] < 0:
        raise PreconditionError("substituted series must have nonnegative order")
    degrees = sorted(phi.coeffs)
    if not degrees:
        return PuiseuxSeries.zero()
    result = PuiseuxSeries.zero()
    for k in range(degrees[-1], -1, -1):
        result = result * alpha
        if k in phi.coeffs:
            result = result + phi.coeffs[k]
    return result


def powers_of(alpha: PuiseuxSeries, top: int) -> list[PuiseuxSeries]:
    """[alpha^0, alpha^1, ..., alpha^top]."""
    powers = [PuiseuxSeries.constant(1)]
    for _ in range(top):
        powers.append(powers[-1] * alpha)
    return powers



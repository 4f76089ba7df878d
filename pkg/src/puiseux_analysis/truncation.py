"""
================================================================================
CONTEXT BLOCK
================================================================================
File: truncation.py
Module: puiseux_analysis.truncation
Purpose: Puiseux root truncation and the root deformation family

Description:
    Each root ζ_i is cut just past its maximal contact e_i with the other
    roots; the product of the cut roots (with multiplicities) is
    invariant under conjugation and so collects into a polynomial over
    the ground field: the root truncation f̂_root.

    The root deformation family interpolates between the roots of f
    (t = 0) and the cut roots (t = 1):

        F_root(x, y, t) = u * Π [x - ζ_i(y) + t R_i(y)]^(m_i),
        R_i = ζ_i - ζ̂_i

    Only finitely many terms of each ζ_i are known, so every root is read
    below a common depth D; F_root is the depth-capped representative and
    the depth is reported with it.

Collection:
    Products are formed over series coefficients and collected term by
    term. Every collected exponent must be an integer, and every ball
    coefficient must enclose a Gaussian rational, which is then snapped
    to it (logged).

Created: 2025-12-14
================================================================================
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from sympy import Poly, expand

from .algebra import (
    INF,
    Exponent,
    T,
    X,
    Y,
    exact_to_sympy,
    format_ball,
    format_exponent,
    is_exact,
    parts,
    snap_gaussian,
)
from .errors import InvariantViolation, PreconditionError, UnresolvedRootCluster
from .expansion import DEFAULT_EXTRA_STEPS, RootBranch, expand_roots
from .polygon import XiPolynomial
from .series import PuiseuxSeries

logger = logging.getLogger(__name__)


@dataclass
class TruncationResult:
    """Cut roots, their contact exponents and the collected f̂_root."""

    truncated_roots: list
    e_values: list
    fhat: Poly
    remainder_orders: list
    branches: list = field(default_factory=list)
    is_polynomial: bool = True
    depth: Exponent = INF

    def to_dict(self) -> dict:
        return {
            "fhat": str(self.fhat.as_expr()),
            "is_polynomial": self.is_polynomial,
            "e_values": [format_exponent(e) for e in self.e_values],
            "truncated_roots": [
                {"series": series.to_dict(), "multiplicity": m}
                for series, m in self.truncated_roots
            ],
            "remainder_orders": [format_exponent(e) for e in self.remainder_orders],
            "depth": format_exponent(self.depth),
        }


# =============================================================================
# PRODUCTS OVER SERIES COEFFICIENTS
# =============================================================================

def _multiply(left: dict, right: dict) -> dict:
    """Product of polynomials in (x, t) with PuiseuxSeries coefficients."""
    product: dict = {}
    for (a, b), s in left.items():
        for (c, d), r in right.items():
            key = (a + c, b + d)
            term = s * r
            product[key] = product[key] + term if key in product else term
    return {key: s for key, s in product.items() if not s.is_zero}


def _power(factor: dict, n: int) -> dict:
    result = {(0, 0): PuiseuxSeries.constant(1)}
    for _ in range(n):
        result = _multiply(result, factor)
    return result


def _linear_factor(root: PuiseuxSeries, remainder: Optional[PuiseuxSeries] = None) -> dict:
    factor = {(1, 0): PuiseuxSeries.constant(1), (0, 0): -root}
    if remainder is not None and not remainder.is_zero:
        factor[(0, 1)] = remainder
    return {key: s for key, s in factor.items() if not s.is_zero}


def collect(product: dict, real: bool, gens=(X, Y, T)) -> Poly:
    """
    Collect a product into a sympy polynomial.

    Args:
        product: (x-degree, t-degree) -> exact PuiseuxSeries in y
        real: Require real coefficients (input had rational coefficients)

    Raises:
        InvariantViolation: On a fractional exponent or a stray imaginary part
        UnresolvedRootCluster: When a ball encloses no Gaussian rational
    """
    expr = 0
    for (kx, kt), series in sorted(product.items()):
        for exponent, coeff in series.terms:
            if exponent.denominator != 1:
                raise InvariantViolation(
                    f"fractional exponent y^{exponent} survived collection"
                )
            snapped = snap_gaussian(coeff)
            if snapped is None:
                raise UnresolvedRootCluster(
                    f"coefficient {format_ball(coeff)} of x^{kx}*y^{exponent} "
                    f"encloses no Gaussian rational"
                )
            if not is_exact(coeff):
                logger.info(f"Snapped x^{kx}*y^{exponent}*t^{kt} coefficient to {snapped}")
            if real and parts(snapped)[1] != 0:
                raise InvariantViolation(f"imaginary coefficient {snapped} after collection")
            expr += exact_to_sympy(snapped) * X ** kx * Y ** int(exponent) * T ** kt
    return Poly(expand(expr), *gens)


# =============================================================================
# ROOT TRUNCATION
# =============================================================================

def _is_rational_input(f: Poly) -> bool:
    return all(c.is_real for c in f.coeffs())


def separation_exponents(branches: list[RootBranch]) -> list[Exponent]:
    """e_i = max_{j != i} O_y(ζ_i - ζ_j) over all roots (conjugates included)."""
    return [b.separation_depth for b in branches]


def branches_for_truncation(
    phi: XiPolynomial,
    depth: Optional[Exponent] = None,
    extra_steps: int = DEFAULT_EXTRA_STEPS,
) -> list[RootBranch]:
    """
    Roots known strictly beyond every e_i and through a shared exponent.

    Conjugate roots must be read below the same depth for the product to
    stay conjugation invariant, so simple roots are re-expanded through the
    largest exponent any branch reached.
    """
    branches = expand_roots(phi, depth=depth, extra_steps=extra_steps)
    if all(b.series.is_exact for b in branches):
        return branches
    target = max(
        [b.separation_depth for b in branches]
        + [e for b in branches for e in b.series.exponents]
    )
    if depth is not None:
        target = max(target, Fraction(depth))
    return expand_roots(phi, depth=target)


def common_depth(branches: list[RootBranch]) -> Exponent:
    return min(b.series.trunc for b in branches)


def root_truncation(
    f: Poly,
    depth: Optional[Exponent] = None,
    extra_steps: int = DEFAULT_EXTRA_STEPS,
) -> TruncationResult:
    """
    Puiseux root truncation of f(x, y).

    Args:
        f: Polynomial in (x, y), mini-regular in x
        depth: Expansion depth for the stored roots
        extra_steps: Newton steps past separation when depth is None

    Returns:
        TruncationResult with f̂_root collected over the ground field

    Raises:
        MiniRegularityError: When f is not mini-regular in x
        InvariantViolation: When the collected product is not a polynomial
                            over the ground field
        UnresolvedRootCluster: When ball coefficients cannot be snapped
    """
    phi = XiPolynomial.from_poly(Poly(f.as_expr(), X, Y))
    branches = branches_for_truncation(phi, depth, extra_steps)
    real = _is_rational_input(f)
    e_values = separation_exponents(branches)

    if len(branches) == 1:
        branch = branches[0]
        series = branch.series
        known = PuiseuxSeries(series.terms, INF)
        fhat = collect(_power(_linear_factor(known), branch.multiplicity), real, gens=(X, Y))
        if not series.is_exact:
            logger.warning("Single root with infinitely many terms; f̂_root emitted to stored depth")
        return TruncationResult(
            truncated_roots=[(series, branch.multiplicity)],
            e_values=e_values,
            fhat=fhat,
            remainder_orders=[INF],
            branches=branches,
            is_polynomial=series.is_exact,
            depth=series.trunc,
        )

    truncated = []
    remainders = []
    product = {(0, 0): PuiseuxSeries.constant(1)}
    for branch, e in zip(branches, e_values):
        cut = branch.series.truncate_above(e)
        truncated.append((cut, branch.multiplicity))
        rest = branch.series - cut
        remainders.append(rest.low())
        product = _multiply(product, _power(_linear_factor(cut), branch.multiplicity))
    fhat = collect(product, real, gens=(X, Y))
    logger.info(f"Root truncation of degree {sum(m for _, m in truncated)} collected")
    return TruncationResult(
        truncated_roots=truncated,
        e_values=e_values,
        fhat=fhat,
        remainder_orders=remainders,
        branches=branches,
        is_polynomial=True,
        depth=common_depth(branches),
    )


def root_deformation_family(
    f: Poly,
    unit_deformation=None,
    depth: Optional[Exponent] = None,
    extra_steps: int = DEFAULT_EXTRA_STEPS,
) -> Poly:
    """
    F_root(x, y, t) = u * Π [x - ζ_i + t R_i]^(m_i), roots read below the
    common depth D.

    Args:
        f: Polynomial in (x, y), mini-regular in x
        unit_deformation: Optional sympy expression u(x, y, t); 1 by default

    Returns:
        Poly in (x, y, t); F_root(x, y, 1) = f̂_root

    Raises:
        PreconditionError: When the unit does not specialize to a unit
    """
    result = root_truncation(f, depth=depth, extra_steps=extra_steps)
    branches = result.branches
    real = _is_rational_input(f)
    cap = common_depth(branches)
    product = {(0, 0): PuiseuxSeries.constant(1)}
    for branch, (cut, m) in zip(branches, result.truncated_roots):
        known = PuiseuxSeries(branch.series.cap(cap).terms, INF)
        remainder = known - cut if len(branches) > 1 else PuiseuxSeries.zero()
        product = _multiply(product, _power(_linear_factor(known, remainder), m))
    family = collect(product, real)
    if unit_deformation is not None:
        unit = Poly(unit_deformation, X, Y, T)
        if unit.as_expr().subs({X: 0, Y: 0, T: 0}) == 0:
            raise PreconditionError("unit deformation vanishes at the origin")
        family = Poly(expand(family.as_expr() * unit.as_expr()), X, Y, T)
    logger.info(f"Root deformation family built below depth {format_exponent(cap)}")
    return family

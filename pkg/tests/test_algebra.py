"""
================================================================================
CONTEXT BLOCK
================================================================================
File: test_algebra.py
Module: tests.test_algebra
Purpose: BDD tests for coefficient arithmetic and certified roots

Description:
    Tests Gaussian rational formatting, ball zero tests, root isolation,
    squarefree decomposition and precision escalation.

Test Scenarios:
    - Formatting of exact coefficients
    - Exact roots of z^2 + 1
    - Squarefree decomposition
    - Ambiguous balls and escalation
    - Taylor shift

Dependencies:
    - pytest-bdd: BDD test framework
    - puiseux_analysis: The module under test

Created: 2025-12-14
================================================================================
"""

from fractions import Fraction

import pytest
from pytest_bdd import given, parsers, scenario, then, when
from sympy import Poly, expand, sympify

from puiseux_analysis.algebra import (
    CBall,
    CPoly,
    X,
    Y,
    Z,
    current_precision,
    escalating,
    format_coeff,
    gauss,
    is_zero,
    resultant,
    roots_certified,
    squarefree_decompose,
)
from puiseux_analysis.errors import AmbiguousZeroError, UnresolvedRootCluster
from puiseux_analysis.parser import parse_poly


# =============================================================================
# SCENARIOS
# =============================================================================

@scenario("features/algebra.feature", "Format a Gaussian rational")
def test_format_gaussian():
    """Test formatting of an exact coefficient."""
    pass


@scenario("features/algebra.feature", "Exact roots of a polynomial splitting over the Gaussian rationals")
def test_exact_roots():
    """Test that z^2 + 1 has the exact roots -i and i."""
    pass


@scenario("features/algebra.feature", "Squarefree decomposition of a square")
def test_squarefree():
    """Test squarefree decomposition."""
    pass


@scenario("features/algebra.feature", "A wide ball around zero is ambiguous")
def test_ambiguous_ball():
    """Test that wide balls around zero are not decided."""
    pass


@scenario("features/algebra.feature", "Precision escalates on ambiguity")
def test_escalation():
    """Test precision doubling."""
    pass


@scenario("features/algebra.feature", "Escalation gives up at the precision cap")
def test_escalation_cap():
    """Test the escalation cap."""
    pass


@scenario("features/algebra.feature", "Taylor shift of a univariate polynomial")
def test_taylor_shift():
    """Test p(z + a)."""
    pass


@scenario("features/algebra.feature", "Resultants vanish exactly on common factors")
def test_resultant():
    """Test Sylvester resultants."""
    pass


# =============================================================================
# GIVEN STEPS
# =============================================================================

@given(
    parsers.parse('the Gaussian rational with real part "{re}" and imaginary part "{im}"'),
    target_fixture="coefficient",
)
def gaussian_rational(re, im):
    return gauss(Fraction(re), Fraction(im))


@given(parsers.parse('the polynomials "{p}" and "{q}" in z'), target_fixture="pair")
def polynomial_pair(p, q):
    return Poly(sympify(p.replace("^", "**")), Z), Poly(sympify(q.replace("^", "**")), Z)


@given("the polynomial z^2 + 1 with exact coefficients", target_fixture="cpoly")
def z_squared_plus_one():
    return CPoly.from_list([gauss(1), gauss(0), gauss(1)])


@given("the polynomial z^2 with exact coefficients", target_fixture="cpoly")
def z_squared():
    return CPoly.from_list([gauss(0), gauss(0), gauss(1)])


@given(parsers.parse('the bivariate polynomial "{text}"'), target_fixture="bivariate")
def bivariate_polynomial(text):
    return parse_poly(text).poly


@given(parsers.parse('a ball of radius "{radius}" around 0'), target_fixture="ball")
def ball_around_zero(radius):
    return CBall.from_disk(0, radius)


@given("a computation that is ambiguous below 256 bits", target_fixture="computation")
def ambiguous_below_256():
    def compute():
        if current_precision() < 256:
            raise AmbiguousZeroError("too coarse")
        return current_precision()

    return compute


@given("a computation that is always ambiguous", target_fixture="computation")
def always_ambiguous():
    def compute():
        raise AmbiguousZeroError("never resolves")

    return compute


# =============================================================================
# WHEN STEPS
# =============================================================================

@when("I take their resultant in z", target_fixture="res")
def take_resultant(pair):
    """
    When: I eliminate z between the two polynomials
    """
    return resultant(*pair, Z)


@when("I format the coefficient", target_fixture="text")
def format_coefficient(coefficient):
    """
    When: I format an exact coefficient
    """
    return format_coeff(coefficient)


@when("I compute its certified roots", target_fixture="roots")
def compute_roots(cpoly):
    """
    When: I isolate the roots of a univariate polynomial
    """
    return roots_certified(cpoly)


@when("I decompose it into squarefree factors", target_fixture="factors")
def decompose(bivariate):
    """
    When: I split a polynomial into squarefree factors
    """
    return squarefree_decompose(bivariate)


@when("I ask whether the ball is zero", target_fixture="outcome")
def ask_zero(ball):
    """
    When: I run the zero test on a ball
    """
    with pytest.raises(AmbiguousZeroError) as excinfo:
        is_zero(ball)
    return excinfo.value


@when("I run it with escalation from 64 bits", target_fixture="outcome")
def run_escalating(computation):
    """
    When: I run a computation under precision escalation
    """
    return escalating(computation, precision=64)


@when("I run it with escalation capped at 128 bits", target_fixture="outcome")
def run_capped(computation):
    """
    When: I run a computation that never resolves
    """
    with pytest.raises(UnresolvedRootCluster) as excinfo:
        escalating(computation, precision=64, max_precision=128)
    return excinfo.value


@when(parsers.parse("I shift it by {amount:d}"), target_fixture="shifted")
def shift_polynomial(cpoly, amount):
    """
    When: I apply a Taylor shift
    """
    return cpoly.shift(gauss(amount))


# =============================================================================
# THEN STEPS
# =============================================================================

@then(parsers.parse('the text should be "{expected}"'))
def verify_text(text, expected):
    assert text == expected


@then(parsers.parse('the roots should be exactly "{expected}"'))
def verify_roots(roots, expected):
    """
    Then: Verify the roots are exact and in sorted order
    """
    assert ", ".join(format_coeff(r) for r, _ in roots) == expected
    assert all(not isinstance(r, CBall) for r, _ in roots)


@then(parsers.parse("every root should have multiplicity {m:d}"))
def verify_multiplicities(roots, m):
    assert all(k == m for _, k in roots)


@then(parsers.parse("there should be {count:d} factor of multiplicity {m:d}"))
def verify_factors(factors, count, m):
    assert len(factors) == count
    factor, multiplicity = factors[0]
    assert multiplicity == m
    assert factor.as_expr() == X ** 2 - Y ** 3


@then("an ambiguous zero error should be raised")
def verify_ambiguous(outcome):
    assert isinstance(outcome, AmbiguousZeroError)
    assert "straddles zero" in str(outcome)


@then(parsers.parse("it should succeed at {bits:d} bits"))
def verify_bits(outcome, bits):
    assert outcome == bits


@then("an unresolved root cluster error should be raised")
def verify_unresolved(outcome):
    assert isinstance(outcome, UnresolvedRootCluster)
    assert "128 bits" in str(outcome)


@then(parsers.parse('the polynomial text should be "{expected}"'))
def verify_polynomial_text(shifted, expected):
    assert str(shifted) == expected


@then(parsers.parse('the resultant should equal "{value}"'))
def verify_resultant(res, value):
    assert expand(res - sympify(value)) == 0

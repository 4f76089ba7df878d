"""
================================================================================
CONTEXT BLOCK
================================================================================
File: test_series.py
Module: tests.test_series
Purpose: BDD tests for Puiseux series arithmetic

Description:
    Tests Puiseux pairs, contact orders, conjugation, printing and
    substitution into ξ-polynomials.

Test Scenarios:
    - Puiseux pairs and multiplicity
    - Contact orders, plain and curve-level
    - Conjugates under y^(1/N) -> θ^k y^(1/N)
    - Truncated series output
    - Exact substitution

Dependencies:
    - pytest-bdd: BDD test framework
    - puiseux_analysis: The module under test

Created: 2025-12-14
================================================================================
"""

from fractions import Fraction

from pytest_bdd import given, parsers, scenario, then, when

from puiseux_analysis.algebra import format_exponent, gauss
from puiseux_analysis.parser import parse_series


# =============================================================================
# SCENARIOS
# =============================================================================

@scenario("features/series.feature", "Puiseux pairs of a two-pair series")
def test_puiseux_pairs():
    """Test characteristic exponents."""
    pass


@scenario("features/series.feature", "Contact order of two series")
def test_contact_order():
    """Test O_y of a difference."""
    pass


@scenario("features/series.feature", "Curve-level contact order of conjugate series")
def test_curve_contact_order():
    """Test contact maximized over conjugates."""
    pass


@scenario("features/series.feature", "Conjugates of a series")
def test_conjugates():
    """Test conjugation by roots of unity."""
    pass


@scenario("features/series.feature", "Truncated series print their remainder")
def test_truncated_output():
    """Test printing with O(y^e)."""
    pass


@scenario("features/series.feature", "Substituting a root into its curve")
def test_substitution():
    """Test φ(ζ(y), y) = 0 for an exact root."""
    pass


@scenario("features/series.feature", "Metric norm of a series")
def test_metric_norm():
    """Test the weighted coefficient norm."""
    pass


# =============================================================================
# GIVEN STEPS
# =============================================================================

@given(parsers.parse('the series "{text}"'), target_fixture="series")
def given_series(text):
    return parse_series(text)


@given(parsers.parse('the other series "{text}"'), target_fixture="other")
def given_other_series(text):
    return parse_series(text)


# =============================================================================
# WHEN STEPS
# =============================================================================

@when("I take its metric norm", target_fixture="norm")
def take_metric_norm(series):
    """
    When: I enclose the series norm
    """
    return series.metric_norm()


@when("I compute its Puiseux pairs", target_fixture="pairs")
def compute_pairs(series):
    """
    When: I compute the characteristic exponents
    """
    return series.puiseux_pairs()


@when("I compute their contact order", target_fixture="contact")
def compute_contact(series, other):
    """
    When: I compute O_y(a - b)
    """
    return series.contact_order(other)


@when("I compute their curve-level contact order", target_fixture="contact")
def compute_curve_contact(series, other):
    """
    When: I compute the contact order over all conjugates
    """
    return series.contact_order(other, curve_level=True)


@when("I list its conjugates", target_fixture="conjugates")
def list_conjugates(series):
    """
    When: I apply every root of unity of order N
    """
    return series.conjugates()


@when(parsers.parse('I substitute it into "{text}"'), target_fixture="value")
def substitute(series, text, xi_poly):
    """
    When: I evaluate φ at the series
    """
    return xi_poly(text).evaluate(series)


# =============================================================================
# THEN STEPS
# =============================================================================

@then(parsers.parse('the pairs should be "{expected}"'))
def verify_pairs(pairs, expected):
    assert ", ".join(format_exponent(e) for e in pairs) == expected


@then(parsers.parse("the Puiseux multiplicity should be {n:d}"))
def verify_denominator(series, n):
    assert series.denom == n


@then(parsers.parse('the contact order should be "{expected}"'))
def verify_contact(contact, expected):
    assert format_exponent(contact) == expected


@then(parsers.parse("there should be {count:d} conjugates"))
def verify_conjugate_count(conjugates, count):
    assert len(conjugates) == count


@then(parsers.parse('conjugate {k:d} should print as "{expected}"'))
def verify_conjugate(conjugates, k, expected):
    assert str(conjugates[k]) == expected


@then(parsers.parse('the series should print as "{expected}"'))
def verify_print(series, expected):
    assert str(series) == expected


@then(parsers.parse('its order should be "{expected}"'))
def verify_order(series, expected):
    assert format_exponent(series.order()) == expected


@then("the result should be exactly zero")
def verify_zero(value):
    assert value.is_zero


@then(parsers.parse('the norm should enclose "{expected}"'))
def verify_norm(norm, expected):
    assert norm.contains(gauss(Fraction(expected)))

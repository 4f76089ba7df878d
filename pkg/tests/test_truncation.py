"""
================================================================================
CONTEXT BLOCK
================================================================================
File: test_truncation.py
Module: tests.test_truncation
Purpose: BDD tests for Puiseux root truncation and root deformations

Description:
    Tests f̂_root on curves with known truncations, the contact exponents
    e_i, and the root deformation family F_root(x, y, t).

Test Scenarios:
    - (x^2-y^4)^2-y^10 and (x^2-y^3)^2-4xy^5
    - Curves whose roots are finite sums
    - Curves whose cut roots have irrational coefficients
    - F_root(x, y, 1) = f̂_root
    - Truncate command text output

Dependencies:
    - pytest-bdd: BDD test framework
    - puiseux_analysis: The module under test

Created: 2025-12-14
================================================================================
"""

from fractions import Fraction

from pytest_bdd import given, parsers, scenario, then, when
from sympy import expand

from puiseux_analysis.algebra import T, escalating
from puiseux_analysis.parser import parse_poly
from puiseux_analysis.render import to_text
from puiseux_analysis.truncation import root_deformation_family, root_truncation


# =============================================================================
# SCENARIOS
# =============================================================================

@scenario("features/truncation.feature", "Truncation of a curve with four real branches")
def test_four_branches():
    """Test the truncation of (x^2-y^4)^2-y^10."""
    pass


@scenario("features/truncation.feature", "Truncation of a curve with two Puiseux pairs")
def test_two_pairs():
    """Test the truncation of (x^2-y^3)^2-4xy^5."""
    pass


@scenario("features/truncation.feature", "Curves with finite roots are their own truncation")
def test_finite_roots():
    """Test that exact finite roots are kept whole."""
    pass


@scenario("features/truncation.feature", "Truncation of curves with irrational roots")
def test_irrational_roots():
    """Test that ball roots multiply back to the exact truncation."""
    pass


@scenario("features/truncation.feature", "The root deformation family ends at the truncation")
def test_family_endpoint():
    """Test F_root(x, y, 1)."""
    pass


@scenario("features/truncation.feature", "Finite roots give a constant family")
def test_constant_family():
    """Test a t-free family."""
    pass


@scenario("features/truncation.feature", "Truncate command with the family")
def test_truncate_command():
    """Test the text report."""
    pass


# =============================================================================
# GIVEN STEPS
# =============================================================================

@given(parsers.parse('the curve "{text}"'), target_fixture="curve")
def given_curve(text):
    return parse_poly(text)


# =============================================================================
# WHEN STEPS
# =============================================================================

@when("I compute its root truncation", target_fixture="result")
def compute_truncation(curve):
    """
    When: I cut every root past its maximal contact and multiply back
    """
    return escalating(root_truncation, curve.poly)


@when("I build its root deformation family", target_fixture="family")
def build_family(curve):
    """
    When: I build F_root(x, y, t)
    """
    return escalating(root_deformation_family, curve.poly)


@when("I run the truncate command with the family", target_fixture="report")
def run_truncate(curve, analysis_executor):
    """
    When: I run the truncate command and render it as text
    """
    payload = analysis_executor.run("truncate", curve.source, with_family=True)
    return to_text("truncate", payload)


# =============================================================================
# THEN STEPS
# =============================================================================

@then(parsers.parse('the truncation should equal "{expected}"'))
def verify_truncation(result, expected):
    assert expand(result.fhat.as_expr() - parse_poly(expected).poly.as_expr()) == 0
    assert result.is_polynomial


@then(parsers.parse("every cut should be at e = {e:d}"))
def verify_cuts(result, e):
    assert result.e_values == [Fraction(e)] * len(result.e_values)
    assert len(result.truncated_roots) == 4


@then("all coefficients should be rational")
def verify_rational(result):
    assert all(c.is_rational for c in result.fhat.coeffs())


@then("setting t = 1 should give the root truncation")
def verify_endpoint(curve, family):
    fhat = escalating(root_truncation, curve.poly).fhat
    assert expand(family.as_expr().subs(T, 1) - fhat.as_expr()) == 0


@then("the family should depend on t")
def verify_depends(family):
    assert family.as_expr().has(T)


@then("the family should not depend on t")
def verify_constant(curve, family):
    assert not family.as_expr().has(T)
    assert expand(family.as_expr() - curve.poly.as_expr()) == 0


@then(parsers.parse('the text report should start with "{prefix}"'))
def verify_prefix(report, prefix):
    assert report.startswith(prefix)


@then(parsers.parse('the text report should contain "{fragment}"'))
def verify_fragment(report, fragment):
    assert fragment in report

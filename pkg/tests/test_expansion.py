"""
================================================================================
CONTEXT BLOCK
================================================================================
File: test_expansion.py
Module: tests.test_expansion
Purpose: BDD tests for root expansion, trees, valuations and critical points

Description:
    Tests the Newton-Puiseux recursion, Kuo-Lu tree heights, the blurred
    critical points, the valuation val_φ, canonical coordinates and the
    bar-edge translation identity.

Test Scenarios:
    - Tree of (x^2-y^3)^2-4xy^5
    - Exact root coefficients and conjugate classes
    - Multiple roots
    - Valuations on ξ^4(ξ-y)^5
    - Canonical coordinate on ξ^2-2y^3
    - Puiseux pairs command
    - Repeated factor with a non-terminating root
    - Undecidable critical values
    - Conservation laws on seeded random curves with fractional and
      irrational roots

Dependencies:
    - pytest-bdd: BDD test framework
    - puiseux_analysis: The module under test

Created: 2025-12-14
================================================================================
"""

import itertools
import random
from fractions import Fraction

import pytest
from pytest_bdd import given, parsers, scenario, then, when
from sympy import Poly, Rational, expand

from puiseux_analysis.algebra import (
    CBall,
    CPoly,
    X,
    Y,
    c_equal,
    c_mul,
    escalating,
    format_exponent,
    gauss,
    is_exact,
)
from puiseux_analysis.expansion import (
    _bar_critical_marks,
    bar_edge_bijection,
    build_tree,
    conjugate_classes,
    critical_points,
    expand_roots,
    lojasiewicz_exponent,
    truncate_at,
    valuation,
)
from puiseux_analysis.errors import AmbiguousZeroError
from puiseux_analysis.parser import parse_series
from puiseux_analysis.polygon import XiPolynomial


# =============================================================================
# SCENARIOS
# =============================================================================

@scenario("features/expansion.feature", "Kuo-Lu tree of a curve with two Puiseux pairs")
def test_tree():
    """Test bars and critical points of the four-branch curve."""
    pass


@scenario("features/expansion.feature", "Leading coefficients of the roots are exact")
def test_exact_coefficients():
    """Test exact root coefficients."""
    pass


@scenario("features/expansion.feature", "Multiple roots keep their multiplicity")
def test_multiple_roots():
    """Test multiplicities of repeated roots."""
    pass


@scenario("features/expansion.feature", "Repeated factor whose root has infinitely many terms")
def test_repeated_factor():
    """Test that a squared factor with an infinite root keeps multiplicity 2."""
    pass


@scenario("features/expansion.feature", "Critical values that cannot be told from zero")
def test_ambiguous_marks():
    """Test that an undecidable critical value is reported, not dropped."""
    pass


@scenario("features/expansion.feature", "Valuation on a curve with a multiple root")
def test_valuation():
    """Test val_φ against (-ε^4, 4h + 5)."""
    pass


@scenario("features/expansion.feature", "Canonical coordinate of a series off the curve")
def test_canonical_coordinate():
    """Test μ_φ and its height."""
    pass


@scenario("features/expansion.feature", "Puiseux pairs per geometric branch")
def test_pairs_command():
    """Test the pairs command."""
    pass


@scenario("features/expansion.feature", "Conservation laws on random curves")
def test_conservation():
    """Test multiplicity sums, ultrametricity and translation identities."""
    pass


# =============================================================================
# HELPERS
# =============================================================================

def random_root(rng: random.Random):
    """c1*y^e1 (+ c2*y^e2) with 1 <= e1 < e2."""
    e1 = rng.randint(1, 3)
    root = Rational(rng.choice([-2, -1, 1, 2, 3])) * Y ** e1
    if rng.random() < 0.5:
        root += Rational(rng.choice([-1, 1]), rng.choice([1, 2])) * Y ** (e1 + rng.randint(1, 2))
    return root


def random_factor(rng: random.Random) -> tuple:
    """A monic factor in ξ and its degree."""
    kind = rng.choice(["line", "line", "cusp", "surd", "cube"])
    if kind == "line":
        return X - random_root(rng), 1
    if kind == "cusp":
        # ±√c y^((2b+1)/2)
        return X ** 2 - rng.choice([1, 2, -3]) * Y ** (2 * rng.randint(1, 2) + 1), 2
    if kind == "surd":
        return X ** 2 - rng.choice([2, 3, 5]) * Y ** (2 * rng.randint(1, 2)), 2
    return X ** 3 - rng.choice([1, 2]) * Y ** rng.choice([4, 5]), 3


def random_curve(rng: random.Random, max_order: int = 6) -> XiPolynomial:
    """Product of random monic factors of total ξ-degree 2..max_order, repeats allowed."""
    expr, order = 1, 0
    while order < 2 or (order < max_order and rng.random() < 0.6):
        factor, degree = random_factor(rng)
        if order + degree > max_order:
            continue
        power = 2 if order + 2 * degree <= max_order and rng.random() < 0.2 else 1
        expr *= factor ** power
        order += degree * power
    return XiPolynomial.from_poly(Poly(expand(expr), X, Y))


def analyse(phi: XiPolynomial) -> tuple:
    branches = expand_roots(phi)
    tree = build_tree(phi, branches)
    points = critical_points(phi, tree)
    translations = [
        pair.translation_holds
        for branch in branches
        for pair in bar_edge_bijection(branch.series, phi, tree)
    ]
    return phi, branches, tree, points, translations


# =============================================================================
# GIVEN STEPS
# =============================================================================

@given(parsers.parse('the curve "{text}"'), target_fixture="curve")
def given_curve(text):
    return text


@given(
    parsers.parse("a bar polynomial z^2 + b with b a ball of radius {radius} around 0"),
    target_fixture="bar_poly",
)
def ball_bar_polynomial(radius):
    return CPoly.from_terms({2: gauss(1), 0: CBall.from_disk(0, float(Fraction(radius)))})


@given(
    parsers.parse("{count:d} random curves of order at most {order:d} with seed {seed:d}"),
    target_fixture="curves",
)
def random_curves(count, order, seed):
    rng = random.Random(seed)
    return [random_curve(rng, order) for _ in range(count)]


# =============================================================================
# WHEN STEPS
# =============================================================================

@when("I run the tree command", target_fixture="payload")
def run_tree(curve, analysis_executor):
    """
    When: I run the tree command through the executor
    """
    return analysis_executor.run("tree", curve)


@when("I run the pairs command", target_fixture="payload")
def run_pairs(curve, analysis_executor):
    """
    When: I run the pairs command through the executor
    """
    return analysis_executor.run("pairs", curve)


@when("I expand its roots", target_fixture="branches")
def expand_curve(curve, xi_poly):
    """
    When: I expand every Puiseux root of the curve
    """
    return expand_roots(xi_poly(curve), depth=Fraction(3))


@when(parsers.parse('I take the valuation of "{series}"'), target_fixture="value")
def take_valuation(curve, series, xi_poly):
    """
    When: I evaluate val_φ at a series
    """
    return valuation(parse_series(series), xi_poly(curve))


@when(parsers.parse('I truncate the series "{series}" at the roots'), target_fixture="canonical")
def truncate_series(series, branches):
    """
    When: I cut a series at its highest contact with the roots
    """
    return truncate_at(parse_series(series), branches)


@when("I analyse each curve", target_fixture="analyses")
def analyse_curves(curves):
    """
    When: I expand, build the tree and place the critical points
    """
    return [escalating(analyse, phi) for phi in curves]


# =============================================================================
# THEN STEPS
# =============================================================================

@then(parsers.parse("there should be {count:d} root branches of multiplicity {m:d}"))
def verify_branch_count(payload, count, m):
    assert len(payload["branches"]) == count
    assert all(b["multiplicity"] == m for b in payload["branches"])


@then(parsers.parse('the bar heights should be "{expected}"'))
def verify_bar_heights(payload, expected):
    heights = sorted(Fraction(bar["height"]) for bar in payload["tree"]["bars"])
    assert ", ".join(format_exponent(h) for h in heights) == expected


@then(parsers.parse("there should be {count:d} critical points of total multiplicity {total:d}"))
def verify_critical_points(payload, count, total):
    points = payload["critical_points"]
    assert len(points) == count
    assert sum(p["multiplicity"] for p in points) == total


@then("every root should have an exact coefficient of +1 or -1 at y^(3/2)")
def verify_leading(branches):
    for branch in branches:
        c = branch.series.coefficient(Fraction(3, 2))
        assert is_exact(c)
        assert c in (gauss(1), gauss(-1))


@then("the square of the coefficient at y^(7/4) should equal the coefficient at y^(3/2)")
def verify_second(branches):
    for branch in branches:
        c = branch.series.coefficient(Fraction(7, 4))
        assert is_exact(c)
        assert c_mul(c, c) == branch.series.coefficient(Fraction(3, 2))


@then("all roots should form one conjugate class")
def verify_one_class(branches):
    assert conjugate_classes(branches) == [[0, 1, 2, 3]]


@then(parsers.parse('the multiplicities should be "{expected}"'))
def verify_multiplicities(branches, expected):
    assert ", ".join(str(b.multiplicity) for b in branches) == expected


@then(parsers.parse('the root should start with "{expected}"'))
def verify_root_start(branches, expected):
    (branch,) = branches
    start = parse_series(expected)
    assert branch.series.trunc > start.terms[-1][0]
    for e, c in start.terms:
        assert c_equal(branch.series.coefficient(e), c)


@then(parsers.parse('the roots should be exactly "{expected}"'))
def verify_exact_roots(branches, expected):
    assert all(b.series.is_exact for b in branches)
    assert ", ".join(str(b.series) for b in branches) == expected


@then(parsers.parse('the value should be "{expected}"'))
def verify_value(value, expected):
    assert str(value) == expected


@then(parsers.parse('the height should be "{expected}"'))
def verify_height(canonical, expected):
    _, height = canonical
    assert format_exponent(height) == expected


@then(parsers.parse('the canonical coordinate should print as "{expected}"'))
def verify_canonical(canonical, expected):
    series, _ = canonical
    assert str(series) == expected


@then(parsers.parse('the canonical Puiseux pairs should be "{expected}"'))
def verify_canonical_pairs(canonical, expected):
    series, _ = canonical
    assert ", ".join(format_exponent(e) for e in series.puiseux_pairs()) == expected


@then(parsers.parse("there should be {count:d} geometric branch with {n:d} conjugates"))
def verify_geometric_branches(payload, count, n):
    assert len(payload["branches"]) == count
    assert payload["branches"][0]["conjugates"] == n


@then(parsers.parse('its Puiseux pairs should be "{expected}"'))
def verify_branch_pairs(payload, expected):
    assert ", ".join(payload["branches"][0]["puiseux_pairs"]) == expected


@then("its polygon pairs should match its Puiseux pairs")
def verify_polygon_pairs(payload):
    row = payload["branches"][0]
    assert row["polygon_pairs"] == row["puiseux_pairs"]


@then("reading its critical marks should fail as ambiguous")
def verify_ambiguous_marks(bar_poly):
    with pytest.raises(AmbiguousZeroError):
        _bar_critical_marks(bar_poly)


@then("the sample should include fractional exponents and irrational coefficients")
def verify_sample_spread(analyses):
    series = [b.series for _, branches, _, _, _ in analyses for b in branches]
    assert any(e.denominator > 1 for s in series for e, _ in s.terms)
    assert any(not is_exact(c) for s in series for _, c in s.terms)


@then("the root multiplicities should add up to the order")
def verify_root_sum(analyses):
    for phi, branches, _, _, _ in analyses:
        assert sum(b.multiplicity for b in branches) == phi.regularity_order()


@then("the critical multiplicities should add up to the order minus one")
def verify_critical_sum(analyses):
    for phi, _, _, points, _ in analyses:
        assert sum(p.multiplicity for p in points) == phi.regularity_order() - 1


@then("contact orders should satisfy the ultrametric inequality")
def verify_ultrametric(analyses):
    for _, branches, _, _, _ in analyses:
        for a, b, c in itertools.permutations(branches, 3):
            ac = a.series.contact_order(c.series)
            ab = a.series.contact_order(b.series)
            bc = b.series.contact_order(c.series)
            assert ac >= min(ab, bc)


@then("the translation identity should hold on every bar-edge pair")
def verify_translation(analyses):
    for phi, _, _, _, translations in analyses:
        assert translations and all(translations), phi


@then(parsers.parse('the Lojasiewicz exponent of "{series}" should be "{expected}"'))
def verify_lojasiewicz(branches, curve, series, expected, xi_poly):
    xi = parse_series(series)
    exponent = lojasiewicz_exponent(xi, branches)
    assert format_exponent(exponent) == expected
    assert valuation(xi, xi_poly(curve)).h == exponent

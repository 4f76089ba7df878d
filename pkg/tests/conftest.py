"""
================================================================================
CONTEXT BLOCK
================================================================================
File: conftest.py
Module: tests.conftest
Purpose: Pytest fixtures and configuration for BDD tests

Description:
    Provides shared fixtures for all test modules including:
    - An AnalysisExecutor with default settings
    - Parsing helpers that turn polynomial text into ξ-polynomials
    - Reference polynomials used by several feature files

Fixtures:
    - run_config: Default RunConfig (no environment overrides)
    - analysis_executor: AnalysisExecutor instance for command tests
    - xi_poly: Factory turning text into an XiPolynomial in (x, y)
    - kuo_lu_example: The four-branch curve with bars 3/2, 7/4, 7/4

Notes:
    Everything is computed exactly or with certified balls, so the
    tests assert on exact values rather than tolerances.

Created: 2025-12-14
================================================================================
"""

import pytest
from sympy import Poly

from puiseux_analysis.algebra import X, Y
from puiseux_analysis.analysis import AnalysisExecutor
from puiseux_analysis.models import RunConfig
from puiseux_analysis.parser import parse_poly
from puiseux_analysis.polygon import XiPolynomial


@pytest.fixture(scope="session")
def run_config():
    """
    Provide default run settings for the test session.

    Given: No environment overrides
    Then: Depth is automatic, precision starts at 128 bits
    """
    return RunConfig()


@pytest.fixture(scope="session")
def analysis_executor(run_config):
    """
    Provide an AnalysisExecutor instance for the test session.

    Given: Default run settings
    Then: An executor is created and yielded
    """
    return AnalysisExecutor(run_config)


@pytest.fixture(scope="session")
def xi_poly():
    """Factory: polynomial text -> XiPolynomial in ξ = x over y."""

    def build(text: str) -> XiPolynomial:
        return XiPolynomial.from_poly(Poly(parse_poly(text).poly.as_expr(), X, Y))

    return build


@pytest.fixture
def kuo_lu_example():
    """Four Puiseux roots ±y^(3/2) ± y^(7/4) + ..."""
    return "(x^2-y^3)^2-4*x*y^5"

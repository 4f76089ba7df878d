"""
================================================================================
CONTEXT BLOCK
================================================================================
File: __init__.py
Module: puiseux_analysis
Purpose: Package initialization for exact Newton-Puiseux analysis

Description:
    Exact Newton-Puiseux expansion of plane curve germs f(x, y) = 0 in
    x as fractional power series in y, with the constructions built on
    it: Newton polygons at arbitrary centres, the Kuo-Lu tree and its
    blurred critical points, the Puiseux root truncation, and Morse
    stability checks for polynomial families and deformations.

Architecture:
    - algebra.py: Gaussian rationals, certified balls, exact polynomial tools
    - series.py: Truncated Puiseux series
    - polygon.py: ξ-polynomials and Newton polygons
    - expansion.py: Root expansion, Kuo-Lu tree, critical points
    - truncation.py: Root truncation and root deformation family
    - stability.py: Morse stability and the fundamental lemma check
    - parser.py / render.py: Input grammar and output formats
    - analysis.py: Command executor used by cli.py and server.py
    - corpus.py: Batch runs over a CSV corpus

Created: 2025-12-14
================================================================================
"""

__version__ = "0.1.0"

from .analysis import AnalysisExecutor
from .expansion import build_tree, critical_points, expand_roots
from .models import RunConfig, StabilityReport, Verdict
from .parser import mini_regularize, parse_poly, parse_series, render_poly
from .polygon import XiPolynomial, build_polygon
from .series import PuiseuxSeries
from .stability import PolyFamily, check_deformation, check_poly_family, verify_fundamental_lemma
from .truncation import root_deformation_family, root_truncation

__all__ = [
    "AnalysisExecutor",
    "PolyFamily",
    "PuiseuxSeries",
    "RunConfig",
    "StabilityReport",
    "Verdict",
    "XiPolynomial",
    "build_polygon",
    "build_tree",
    "check_deformation",
    "check_poly_family",
    "critical_points",
    "expand_roots",
    "mini_regularize",
    "parse_poly",
    "parse_series",
    "render_poly",
    "root_deformation_family",
    "root_truncation",
    "verify_fundamental_lemma",
]

"""
================================================================================
CONTEXT BLOCK
================================================================================
File: analysis.py
Module: puiseux_analysis.analysis
Purpose: Command executor shared by the command line and the tool server

Description:
    AnalysisExecutor runs one command (expand, polygon, tree, truncate,
    stability, contact, pairs) on polynomial text and returns a dict
    ready for JSON serialization. Every computation that can meet an
    ambiguous ball runs under escalating(), starting at the configured
    precision.

Input Handling:
    1. parse_poly() reads the text (ASCII or Unicode forms)
    2. zero input is rejected
    3. with regularize = "auto" the input is made mini-regular in x by a
       change y -> y + c*x, which is reported in the result

Created: 2025-12-14
================================================================================
"""

import logging
from typing import Callable, Optional, Sequence

from sympy import Poly

from .algebra import T, X, Y, Z, escalating, format_exponent
from .errors import PreconditionError, ZeroInputError
from .expansion import (
    bar_edge_bijection,
    build_tree,
    conjugate_classes,
    critical_points,
    expand_roots,
    lojasiewicz_exponent,
    pairs_from_polygons,
    truncate_at,
    valuation,
)
from .models import RunConfig, Verdict
from .parser import InputPolynomial, describe_change, mini_regularize, parse_poly, parse_series, render_poly
from .polygon import XiPolynomial, build_polygon, newton_dots, taylor_recenter
from .render import polygon_figure, save_figure, tree_figure
from .stability import PolyFamily, check_deformation, check_poly_family, verify_fundamental_lemma
from .truncation import root_deformation_family, root_truncation

logger = logging.getLogger(__name__)

COMMANDS = ("expand", "polygon", "tree", "truncate", "stability", "contact", "pairs")


class AnalysisExecutor:
    """
    Runs analysis commands on polynomial text.

    All methods return dictionaries suitable for JSON serialization
    and tool responses.
    """

    def __init__(self, config: Optional[RunConfig] = None):
        """
        Initialize the executor.

        Args:
            config: Run settings; defaults come from the environment
        """
        self.config = config or RunConfig.from_env()

    # =========================================================================
    # HELPERS
    # =========================================================================

    def _run(self, fn: Callable, *args, **kwargs):
        return escalating(fn, *args, precision=self.config.precision_bits, **kwargs)

    def _depth_kwargs(self) -> dict:
        return {"depth": self.config.depth, "extra_steps": self.config.extra_steps}

    def prepare(self, text: str) -> tuple[InputPolynomial, Poly, Optional[int]]:
        """
        Parse and, when configured, mini-regularize the input.

        Returns:
            (parsed input, polynomial to analyse, shift c or None)

        Raises:
            PolynomialSyntaxError: On malformed text
            ZeroInputError: For the zero polynomial
        """
        parsed = parse_poly(text)
        if parsed.poly.is_zero:
            raise ZeroInputError()
        poly = parsed.poly
        shift = None
        if self.config.regularize == "auto":
            poly, shift = mini_regularize(poly)
        return parsed, poly, shift

    def _plane_curve(self, text: str) -> tuple[dict, Poly, XiPolynomial]:
        parsed, poly, shift = self.prepare(text)
        if parsed.has_parameter:
            raise PreconditionError("this command takes a polynomial in x and y only")
        header = {
            "input": render_poly(parsed.poly),
            "regularization": describe_change(shift),
        }
        return header, poly, XiPolynomial.from_poly(Poly(poly.as_expr(), X, Y))

    def _figure(self, draw_fn: Callable) -> Optional[str]:
        if not self.config.svg:
            return None
        return save_figure(draw_fn(), self.config.svg)

    # =========================================================================
    # ROOTS, POLYGONS AND TREES
    # =========================================================================

    def expand(self, text: str) -> dict:
        """
        Puiseux roots of f with multiplicities and separation depths.

        Args:
            text: Polynomial in x and y

        Returns:
            Dictionary with the order m and the root branches
        """
        header, _, phi = self._plane_curve(text)
        branches = self._run(expand_roots, phi, **self._depth_kwargs())
        return {
            **header,
            "order": phi.regularity_order(),
            "branches": [b.to_dict() for b in branches],
        }

    def polygon(self, text: str, center: Optional[str] = None) -> dict:
        """
        Newton polygon NP(φ, α) with edges, co-slopes and associated polynomials.

        Args:
            text: Polynomial in x and y
            center: Optional series α in y (defaults to 0)
        """
        header, _, phi = self._plane_curve(text)
        alpha = parse_series(center) if center else None

        def compute():
            psi = phi if alpha is None else taylor_recenter(phi, alpha)
            return build_polygon(phi, alpha), newton_dots(psi)[0]

        polygon, dots = self._run(compute)
        return {
            **header,
            "center": str(alpha) if alpha is not None else None,
            "polygon": polygon.to_dict(),
            "dots": [d.to_dict() for d in dots],
            "svg": self._figure(lambda: polygon_figure(polygon, dots)),
        }

    def tree(self, text: str) -> dict:
        """
        Kuo-Lu tree of f: root branches, bars and blurred critical points.

        Returns:
            Dictionary with branches, bars and critical points; the critical
            multiplicities add up to m - 1
        """
        header, _, phi = self._plane_curve(text)

        def compute():
            branches = expand_roots(phi, **self._depth_kwargs())
            tree = build_tree(phi, branches)
            return branches, tree, critical_points(phi, tree)

        branches, tree, points = self._run(compute)
        return {
            **header,
            "order": phi.regularity_order(),
            "branches": [b.to_dict() for b in branches],
            "tree": tree.to_dict(),
            "critical_points": [p.to_dict() for p in points],
            "svg": self._figure(lambda: tree_figure(tree)),
        }

    # =========================================================================
    # TRUNCATION AND STABILITY
    # =========================================================================

    def truncate(self, text: str, with_family: bool = False) -> dict:
        """
        Puiseux root truncation f̂_root, optionally with the root deformation.

        Args:
            text: Polynomial in x and y
            with_family: Also build F_root(x, y, t)
        """
        header, poly, _ = self._plane_curve(text)
        result = self._run(root_truncation, poly, **self._depth_kwargs())
        payload = {
            **header,
            "fhat": render_poly(result.fhat),
            "truncation": result.to_dict(),
        }
        if with_family:
            family = self._run(root_deformation_family, poly, **self._depth_kwargs())
            payload["family"] = render_poly(family)
        return payload

    def stability(self, text: str, lemma: bool = False) -> dict:
        """
        Morse stability verdict.

        The input decides what is checked:
        - a polynomial in x and t is a family p_t(z) with z = x
        - a polynomial in x, y and t is a deformation F(x, y, t)
        - a polynomial in x and y is replaced by its root deformation family

        Args:
            text: Polynomial text
            lemma: Also recompute the critical structure at sampled t
        """
        parsed, poly, shift = self.prepare(text)
        payload = {
            "input": render_poly(parsed.poly),
            "regularization": describe_change(shift),
        }
        if parsed.has_parameter and "y" not in parsed.variables:
            family = PolyFamily.from_expr(parsed.poly.as_expr().subs(X, Z))
            report = self._run(check_poly_family, family)
            payload["kind"] = "polynomial family"
            payload["report"] = report.to_dict()
            payload["verdict"] = report.verdict.value
            return payload

        if parsed.has_parameter:
            F = Poly(poly.as_expr(), X, Y, T)
            payload["kind"] = "deformation"
        else:
            F = self._run(root_deformation_family, poly, **self._depth_kwargs())
            payload["kind"] = "root deformation family"
            payload["family"] = render_poly(F)
        report = self._run(check_deformation, F, **self._depth_kwargs())
        payload["report"] = report.to_dict()
        payload["verdict"] = report.verdict.value
        if lemma:
            if report.verdict.is_stable:
                result = self._run(verify_fundamental_lemma, F, report=report, **self._depth_kwargs())
                payload["lemma"] = result.to_dict()
            else:
                logger.info(f"Skipping the fundamental lemma check: verdict {report.verdict.value}")
        return payload

    # =========================================================================
    # CONTACT AND PUISEUX PAIRS
    # =========================================================================

    def contact(self, text: str, series: Sequence[str]) -> dict:
        """
        Canonical coordinates, valuations and bar-edge pairs of given series.

        Args:
            text: Polynomial in x and y
            series: One or two series in y; with two, their contact order
                    is reported too
        """
        if not series:
            raise PreconditionError("contact needs at least one series")
        header, _, phi = self._plane_curve(text)
        parsed = [parse_series(s) for s in series]
        depth = self.config.depth
        known = [e for mu in parsed for e in mu.exponents]
        if known:
            depth = max(depth or 0, max(known) + 1)

        def compute():
            branches = expand_roots(phi, depth=depth, extra_steps=self.config.extra_steps)
            tree = build_tree(phi, branches)
            items = []
            for mu in parsed:
                canonical, height = truncate_at(mu, branches)
                items.append({
                    "series": str(mu),
                    "canonical": str(canonical),
                    "height": format_exponent(height),
                    "valuation": str(valuation(mu, phi)),
                    "lojasiewicz": format_exponent(lojasiewicz_exponent(mu, branches)),
                    "puiseux_pairs": [format_exponent(e) for e in mu.puiseux_pairs()],
                    "canonical_pairs": [format_exponent(e) for e in canonical.puiseux_pairs()],
                    "bar_edges": [p.to_dict() for p in bar_edge_bijection(mu, phi, tree)],
                })
            return items

        payload = {**header, "series": self._run(compute)}
        if len(parsed) == 2:
            a, b = parsed
            payload["contact_order"] = format_exponent(a.contact_order(b))
            payload["curve_contact_order"] = format_exponent(a.contact_order(b, curve_level=True))
        return payload

    def pairs(self, text: str) -> dict:
        """
        Puiseux pairs of every geometric branch, listed once per conjugate class.

        The pairs are read from the series and recomputed from the
        polygons along each branch.
        """
        header, _, phi = self._plane_curve(text)

        def compute():
            branches = expand_roots(phi, **self._depth_kwargs())
            rows = []
            for group in conjugate_classes(branches):
                branch = branches[group[0]]
                rows.append({
                    "series": str(branch.series),
                    "conjugates": len(group),
                    "multiplicity": branch.multiplicity,
                    "puiseux_pairs": [format_exponent(e) for e in branch.series.puiseux_pairs()],
                    "polygon_pairs": [
                        format_exponent(e) for e in pairs_from_polygons(branch.series, phi)
                    ],
                })
            return rows

        return {**header, "branches": self._run(compute)}

    # =========================================================================
    # DISPATCH
    # =========================================================================

    def run(self, command: str, text: str, **options) -> dict:
        """Dispatch by command name; options go to the command method."""
        if command not in COMMANDS:
            raise PreconditionError(f"unknown command: {command}")
        payload = getattr(self, command)(text, **options)
        payload = {"command": command, **payload}
        logger.debug(f"Command {command} finished")
        return payload


def exit_status(payload: dict) -> int:
    """0, or 3 when a stability verdict is inconclusive."""
    if payload.get("verdict") == Verdict.INCONCLUSIVE.value:
        return 3
    return 0

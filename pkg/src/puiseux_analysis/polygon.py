"""
================================================================================
CONTEXT BLOCK
================================================================================
File: polygon.py
Module: puiseux_analysis.polygon
Purpose: Newton polygons of φ at a series α, with vertex-edge queries

Description:
    XiPolynomial is φ(ξ) = Σ α_k(y) ξ^k with PuiseuxSeries coefficients.
    Recentering at α (exact binomial shift) gives the Taylor coefficients
    of φ(α + ξ); each nonzero coefficient contributes a Newton dot
    (k, O_y(α_k)) carrying its leading coefficient.

    The polygon is the lower-left hull boundary of the dots:
        E_0        horizontal edge starting at (m, 0)
        E_1..E_top proper edges with strictly increasing co-slopes
        E_l        vertical edge above the last vertex (m_l, q_l)

    edge_at_coslope(h) answers for any h > 0 with the proper edge of that
    co-slope, or a vertex edge (single dot, monomial associated
    polynomial), or the artificial vertex edge at (0, q_l) when α is not a
    root and h exceeds the top co-slope.

Unknown Coefficients:
    A coefficient with no known term but finite truncation is kept as a
    lower bound (k, T). The polygon is built only if every such bound lies
    strictly inside the region above the hull; bounds with k below a
    declared root multiplicity are read as zero.

Created: 2025-12-14
================================================================================
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional

from sympy import Poly

from .algebra import (
    INF,
    Coeff,
    CPoly,
    Exponent,
    X,
    Y,
    coeff_to_dict,
    exact_to_sympy,
    format_exponent,
    gauss,
    is_exact,
    join_terms,
    to_coeff,
)
from .errors import (
    InvariantViolation,
    MiniRegularityError,
    PreconditionError,
    TruncationError,
    ZeroInputError,
)
from .series import PuiseuxSeries, evaluate_into, powers_of

logger = logging.getLogger(__name__)


# =============================================================================
# ξ-POLYNOMIALS
# =============================================================================

@dataclass(frozen=True, eq=False)
class XiPolynomial:
    """φ(ξ) = Σ coeffs[k] ξ^k with PuiseuxSeries coefficients."""

    coeffs: dict = field(default_factory=dict)

    @classmethod
    def from_poly(cls, poly: Poly) -> "XiPolynomial":
        """
        Build φ from a sympy Poly in the generators (x, y).

        Args:
            poly: Polynomial whose first generator plays the role of ξ

        Returns:
            XiPolynomial with exact coefficients
        """
        if poly.is_zero:
            raise ZeroInputError()
        grouped: dict[int, list] = {}
        for (i, j), c in poly.terms():
            grouped.setdefault(i, []).append((Fraction(j), to_coeff(c)))
        return cls({k: PuiseuxSeries.make(terms) for k, terms in grouped.items()})

    @property
    def degree(self) -> int:
        return max(self.coeffs) if self.coeffs else -1

    def coefficient(self, k: int) -> PuiseuxSeries:
        return self.coeffs.get(k, PuiseuxSeries.zero())

    def regularity_order(self) -> int:
        """
        Order m of mini-regularity: O_y(α_m) = 0 and O_y(α_k) + k >= m, k < m.

        Raises:
            MiniRegularityError: Naming the failing condition
        """
        m = None
        for k in sorted(self.coeffs):
            series = self.coeffs[k]
            if series.terms and series.terms[0][0] == 0:
                m = k
                break
        if m is None:
            raise MiniRegularityError("no ξ-coefficient has a nonzero constant term")
        if m == 0:
            raise MiniRegularityError("φ(0, 0) != 0: the origin is not a point of the curve")
        for k in sorted(self.coeffs):
            if k >= m:
                break
            if self.coeffs[k].low() + k < m:
                raise MiniRegularityError(
                    f"O_y(α_{k}) + {k} < {m}: not mini-regular of order {m}"
                )
        return m

    def to_poly(self) -> Optional[Poly]:
        """φ as a Poly in (x, y), or None unless every coefficient is an exact polynomial in y."""
        expr = 0
        for k, series in self.coeffs.items():
            if not series.is_exact:
                return None
            for e, c in series.terms:
                if e.denominator != 1 or not is_exact(c):
                    return None
                expr += exact_to_sympy(c) * X ** k * Y ** int(e)
        return Poly(expr, X, Y)

    def evaluate(self, alpha: PuiseuxSeries) -> PuiseuxSeries:
        return evaluate_into(alpha, self)

    def derivative(self) -> "XiPolynomial":
        return XiPolynomial({
            k - 1: series.scale(gauss(k))
            for k, series in self.coeffs.items() if k >= 1
        })

    def cap(self, exponent: Exponent) -> "XiPolynomial":
        return XiPolynomial({k: s.cap(exponent) for k, s in self.coeffs.items()})

    def __str__(self) -> str:
        pieces = []
        for k in sorted(self.coeffs, reverse=True):
            text = str(self.coeffs[k])
            monomial = "x" if k == 1 else (f"x^{k}" if k > 1 else "")
            if not monomial:
                pieces.append(text)
            elif text == "1":
                pieces.append(monomial)
            else:
                pieces.append(f"({text})*{monomial}")
        return join_terms(pieces) if pieces else "0"


def taylor_recenter(phi: XiPolynomial, alpha: PuiseuxSeries) -> XiPolynomial:
    """
    Coefficients of φ(α + ξ) by binomial expansion.

    Args:
        phi: ξ-polynomial
        alpha: Centre, of order >= 1

    Returns:
        XiPolynomial whose k-th coefficient is α_k = φ^(k)(α)/k!
    """
    if alpha.terms and alpha.terms[0][0] < 1:
        raise PreconditionError("recentering requires a series of order >= 1")
    if alpha.is_zero:
        return phi
    top = phi.degree
    powers = powers_of(alpha, top)
    recentered = {}
    for j in range(top + 1):
        acc = PuiseuxSeries.zero()
        for k in range(j, top + 1):
            if k in phi.coeffs:
                acc = acc + (phi.coeffs[k] * powers[k - j]).scale(gauss(math.comb(k, j)))
        if not acc.is_zero:
            recentered[j] = acc
    return XiPolynomial(recentered)


# =============================================================================
# DOTS AND EDGES
# =============================================================================

@dataclass(frozen=True)
class NewtonDot:
    """Dot (k, q) for the term coeff * y^q ξ^k."""

    k: int
    q: Fraction
    coeff: Coeff

    @property
    def position(self) -> tuple[int, Fraction]:
        return (self.k, self.q)

    def to_dict(self) -> dict:
        return {"k": self.k, "q": format_exponent(self.q), "coeff": coeff_to_dict(self.coeff)}


class EdgeKind(str, Enum):
    PROPER = "proper"
    VERTEX = "vertex"
    ARTIFICIAL_VERTEX = "artificial_vertex"


@dataclass(frozen=True)
class Edge:
    """
    Polygon edge, vertex edge or artificial vertex edge.

    right_vertex is the end with the larger ξ-degree; the Lojasiewicz
    exponent is q + k*h evaluated there.
    """

    kind: EdgeKind
    left_vertex: tuple
    right_vertex: tuple
    coslope: Exponent
    dots: tuple
    assoc_poly: CPoly

    @property
    def is_vertical(self) -> bool:
        return self.coslope == INF

    @property
    def lojasiewicz(self) -> Exponent:
        return edge_lojasiewicz(self)

    def equivalent(self, other: "Edge") -> bool:
        """Same kind, vertices, co-slope, dot positions and associated polynomial."""
        return (
            self.kind == other.kind
            and self.left_vertex == other.left_vertex
            and self.right_vertex == other.right_vertex
            and self.coslope == other.coslope
            and [d.position for d in self.dots] == [d.position for d in other.dots]
            and self.assoc_poly.equals(other.assoc_poly)
        )

    def same_shape(self, other: "Edge") -> bool:
        """Geometric equality, ignoring coefficients."""
        return (
            self.left_vertex == other.left_vertex
            and self.right_vertex == other.right_vertex
            and self.coslope == other.coslope
            and [d.position for d in self.dots] == [d.position for d in other.dots]
        )

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "left_vertex": [self.left_vertex[0], format_exponent(self.left_vertex[1])],
            "right_vertex": [self.right_vertex[0], format_exponent(self.right_vertex[1])],
            "coslope": format_exponent(self.coslope),
            "lojasiewicz": format_exponent(self.lojasiewicz),
            "dots": [d.to_dict() for d in self.dots],
            "assoc_poly": str(self.assoc_poly),
        }


def edge_lojasiewicz(edge: Edge) -> Exponent:
    """L(E) = q + m*h at the right vertex (m, q); +inf for the vertical edge."""
    if edge.coslope == INF:
        return INF
    k, q = edge.right_vertex
    return q + k * edge.coslope


def _edge_from_dots(kind: EdgeKind, dots: list[NewtonDot], coslope: Exponent) -> Edge:
    dots = sorted(dots, key=lambda d: d.k)
    assoc = CPoly.from_terms({d.k: d.coeff for d in dots})
    return Edge(
        kind=kind,
        left_vertex=dots[0].position,
        right_vertex=dots[-1].position,
        coslope=coslope,
        dots=tuple(dots),
        assoc_poly=assoc,
    )


# =============================================================================
# POLYGON
# =============================================================================

@dataclass(frozen=True)
class Polygon:
    """
    Newton polygon NP(φ, α) with its vertex-edge extension.

    edges runs E_0 (horizontal) .. E_l (vertical); vertices runs from
    (m, 0) to the last vertex (m_l, q_l).
    """

    edges: tuple
    vertices: tuple
    pending: tuple = ()

    @property
    def horizontal(self) -> Edge:
        return self.edges[0]

    @property
    def vertical(self) -> Edge:
        return self.edges[-1]

    @property
    def proper_edges(self) -> list[Edge]:
        """Edges of finite positive co-slope, in increasing co-slope order."""
        return list(self.edges[1:-1])

    @property
    def top(self) -> Edge:
        return self.edges[-2]

    @property
    def last_vertex(self) -> tuple:
        return self.vertices[-1].position

    @property
    def root_multiplicity(self) -> int:
        return self.vertices[-1].k

    @property
    def coslopes(self) -> list[Fraction]:
        return [e.coslope for e in self.proper_edges]

    def edge_at_coslope(self, h) -> Edge:
        """
        Extended polygon query.

        Args:
            h: Co-slope > 0 (may be +inf for the vertical edge)

        Returns:
            The proper edge of co-slope h, else the vertex edge at the vertex
            whose supporting line has co-slope h, else the artificial vertex
            edge at (0, q_l)
        """
        if h != INF:
            h = Fraction(h)
        if h <= 0:
            raise PreconditionError("co-slope must be positive")
        if h == INF:
            return self.vertical
        for edge in self.proper_edges:
            if edge.coslope == h:
                return edge
        vertex = min(self.vertices, key=lambda d: d.q + d.k * h)
        kind = EdgeKind.ARTIFICIAL_VERTEX if vertex.k == 0 else EdgeKind.VERTEX
        return _edge_from_dots(kind, [vertex], h)

    def same_shape(self, other: "Polygon") -> bool:
        return (
            len(self.edges) == len(other.edges)
            and all(a.same_shape(b) for a, b in zip(self.edges, other.edges))
        )

    def equivalent(self, other: "Polygon") -> bool:
        return (
            len(self.edges) == len(other.edges)
            and all(a.equivalent(b) for a, b in zip(self.edges, other.edges))
        )

    def to_dict(self) -> dict:
        return {
            "vertices": [[v.k, format_exponent(v.q)] for v in self.vertices],
            "last_vertex": [self.last_vertex[0], format_exponent(self.last_vertex[1])],
            "edges": [e.to_dict() for e in self.edges],
            "coslopes": [format_exponent(h) for h in self.coslopes],
        }


def newton_dots(phi: XiPolynomial) -> tuple[list[NewtonDot], list[tuple[int, Exponent]]]:
    """
    Known dots and unknown-coefficient bounds of φ.

    Returns:
        (dots, bounds): dots for coefficients with a known leading term,
        (k, trunc) bounds for coefficients with no known term
    """
    dots, bounds = [], []
    for k in sorted(phi.coeffs):
        series = phi.coeffs[k]
        if series.terms:
            e, c = series.terms[0]
            dots.append(NewtonDot(k, e, c))
        elif series.trunc != INF:
            bounds.append((k, series.trunc))
    return dots, bounds


def _cross(o: NewtonDot, a: NewtonDot, b: NewtonDot) -> Fraction:
    return (a.k - o.k) * (b.q - o.q) - (a.q - o.q) * (b.k - o.k)


def lower_hull(dots: list[NewtonDot]) -> list[NewtonDot]:
    """Lower convex hull vertices, left to right, collinear points removed."""
    hull: list[NewtonDot] = []
    for dot in sorted(dots, key=lambda d: (d.k, d.q)):
        if hull and hull[-1].k == dot.k:
            continue
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], dot) <= 0:
            hull.pop()
        hull.append(dot)
    return hull


def _hull_height(vertices: list[NewtonDot], k: int) -> Fraction:
    """Height of the polygon boundary above ξ-degree k (vertices right to left)."""
    if k >= vertices[0].k:
        return Fraction(0)
    for right, left in zip(vertices, vertices[1:]):
        if left.k <= k <= right.k:
            return left.q + (right.q - left.q) * Fraction(k - left.k, right.k - left.k)
    raise TruncationError(f"ξ^{k} lies left of the last vertex")


def polygon_of(psi: XiPolynomial, root_multiplicity: Optional[int] = None) -> Polygon:
    """
    Newton polygon of an already recentred ξ-polynomial.

    Args:
        psi: Taylor coefficients at the centre
        root_multiplicity: When the centre is known to be a root of this
                           multiplicity, unknown coefficients below it are
                           read as zero

    Raises:
        MiniRegularityError: When no coefficient has order 0
        TruncationError: When an unknown coefficient could touch the hull
    """
    dots, bounds = newton_dots(psi)
    if root_multiplicity:
        if any(d.k < root_multiplicity for d in dots):
            raise InvariantViolation(
                f"centre is not a root of multiplicity {root_multiplicity}"
            )
        bounds = [(k, t) for k, t in bounds if k >= root_multiplicity]
    flat = [d for d in dots if d.q == 0]
    if not flat:
        raise MiniRegularityError("no ξ-coefficient of order 0 at this centre")
    m = min(d.k for d in flat)
    if any(d.q < 0 for d in dots):
        raise PreconditionError("Newton dots with negative order")

    hull = lower_hull([d for d in dots if d.k <= m])
    vertices = list(reversed(hull))  # from (m, 0) leftwards

    for k, t in bounds:
        if k < vertices[-1].k or t <= _hull_height(vertices, k):
            raise TruncationError(
                f"coefficient of ξ^{k} unknown from y^{format_exponent(t)} on; "
                f"it may change the polygon"
            )

    edges = [_edge_from_dots(EdgeKind.PROPER, flat, Fraction(0))]
    for right, left in zip(vertices, vertices[1:]):
        h = (left.q - right.q) / (right.k - left.k)
        level = right.q + right.k * h
        on_edge = [d for d in dots if left.k <= d.k <= right.k and d.q + d.k * h == level]
        edges.append(_edge_from_dots(EdgeKind.PROPER, on_edge, h))
    edges.append(_edge_from_dots(EdgeKind.PROPER, [vertices[-1]], INF))
    logger.debug(f"Polygon vertices {[v.position for v in vertices]}")
    return Polygon(tuple(edges), tuple(vertices), tuple(bounds))


def build_polygon(
    phi: XiPolynomial,
    alpha: Optional[PuiseuxSeries] = None,
    root_multiplicity: Optional[int] = None,
) -> Polygon:
    """
    NP(φ, α): recentre at α and take the Newton polygon.

    Args:
        phi: Mini-regular ξ-polynomial
        alpha: Centre (defaults to 0)
        root_multiplicity: Declared multiplicity when α is a known root

    Returns:
        The polygon with edges E_0 .. E_l

    Raises:
        MiniRegularityError: When φ is not mini-regular
    """
    phi.regularity_order()
    psi = phi if alpha is None else taylor_recenter(phi, alpha)
    return polygon_of(psi, root_multiplicity)


def extended_polygon(
    phi: XiPolynomial,
    alpha: Optional[PuiseuxSeries] = None,
    root_multiplicity: Optional[int] = None,
) -> Polygon:
    """Alias of build_polygon; vertex edges come from Polygon.edge_at_coslope."""
    return build_polygon(phi, alpha, root_multiplicity)

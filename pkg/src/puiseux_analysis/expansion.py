"""
================================================================================
CONTEXT BLOCK
================================================================================
File: expansion.py
Module: puiseux_analysis.expansion
Purpose: Newton-Puiseux root expansion, Kuo-Lu tree and critical points

Description:
    expand_roots() runs the classical Newton-Puiseux recursion: at the
    current centre α take every edge of NP(φ, α) steeper than the last
    exponent used, and for every nonzero root c of its associated
    polynomial move to α + c*y^h. A root of multiplicity 1 is extended by
    simple Newton steps; a multiple root recurses. When the Taylor
    coefficients below ξ^r vanish exactly, α is a root of multiplicity r.

    build_tree() groups the branches by contact order. Each splitting
    height becomes a Bar whose associated polynomial P_B is read off the
    (possibly vertex) edge of co-slope h(B) of NP(φ, ζ_B).

    critical_points() places the blurred critical points: every root c of
    P_B' that is not a root of P_B marks a critical point at ζ_B + c*y^h
    with value (P_B(c), L(B)); every multiple root ζ_i contributes one of
    multiplicity m_i - 1 at ζ_i itself.

Conventions:
    Branches are sorted by their terms (exponent, then real and imaginary
    part of the coefficient) so output is deterministic.

Created: 2025-12-14
================================================================================
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from sympy import Poly
from sympy.polys.domains import QQ_I

from .algebra import (
    INF,
    Coeff,
    CPoly,
    Exponent,
    X,
    Y,
    Z,
    c_div,
    c_equal,
    c_neg,
    c_sort_key,
    coeff_to_dict,
    format_coeff,
    format_exponent,
    is_exact,
    is_zero,
    roots_certified,
)
from .errors import (
    AmbiguousZeroError,
    InvariantViolation,
    PreconditionError,
    TruncationError,
    UnresolvedRootCluster,
)
from .polygon import Edge, Polygon, XiPolynomial, build_polygon, polygon_of, taylor_recenter
from .series import PuiseuxSeries, evaluate_into

logger = logging.getLogger(__name__)

DEFAULT_EXTRA_STEPS = 4

# Recentering levels a root cluster may stay unsplit when φ is not a polynomial
MAX_CLUSTER_LEVELS = 64


# =============================================================================
# DOMAIN TYPES
# =============================================================================

@dataclass(frozen=True)
class RootBranch:
    """Root ζ_i of φ in M1, known below series.trunc, with multiplicity m_i."""

    series: PuiseuxSeries
    multiplicity: int
    separation_depth: Exponent = Fraction(0)

    def to_dict(self) -> dict:
        return {
            "series": self.series.to_dict(),
            "multiplicity": self.multiplicity,
            "separation_depth": format_exponent(self.separation_depth),
            "puiseux_pairs": [format_exponent(e) for e in self.series.puiseux_pairs()],
        }


@dataclass(frozen=True)
class ValuePair:
    """Element (u, h) of the value space; u is None for the zero element."""

    u: Optional[Coeff]
    h: Exponent

    @classmethod
    def zero(cls) -> "ValuePair":
        return cls(None, INF)

    @property
    def is_zero(self) -> bool:
        return self.u is None

    def equals(self, other: "ValuePair") -> bool:
        if self.is_zero or other.is_zero:
            return self.is_zero and other.is_zero
        return self.h == other.h and c_equal(self.u, other.u)

    def __str__(self) -> str:
        if self.is_zero:
            return "0_V"
        return f"({format_coeff(self.u)}, {format_exponent(self.h)})"

    def to_dict(self) -> dict:
        if self.is_zero:
            return {"zero": True}
        return {"zero": False, "u": coeff_to_dict(self.u), "h": format_exponent(self.h)}


@dataclass(frozen=True)
class CriticalPoint:
    """Blurred critical point of val_φ."""

    coordinate: PuiseuxSeries
    multiplicity: int
    bar: Optional[int]
    lojasiewicz: Exponent
    value: ValuePair

    def to_dict(self) -> dict:
        return {
            "coordinate": self.coordinate.to_dict(),
            "multiplicity": self.multiplicity,
            "bar": self.bar,
            "lojasiewicz": format_exponent(self.lojasiewicz),
            "value": self.value.to_dict(),
        }


@dataclass
class Bar:
    """Splitting height h(B) shared by the supported branches."""

    height: Exponent
    stem: PuiseuxSeries
    assoc_poly: CPoly
    lojasiewicz: Exponent
    supported: tuple
    parent: Optional[int] = None
    children: list = field(default_factory=list)
    critical_marks: list = field(default_factory=list)

    def to_dict(self, index: int) -> dict:
        return {
            "id": index,
            "height": format_exponent(self.height),
            "stem": str(self.stem),
            "assoc_poly": str(self.assoc_poly),
            "lojasiewicz": format_exponent(self.lojasiewicz),
            "supported_roots": list(self.supported),
            "parent": self.parent,
            "children": list(self.children),
            "critical_marks": [
                {"coordinate": coeff_to_dict(c), "multiplicity": k}
                for c, k in self.critical_marks
            ],
        }


@dataclass
class KuoLuTree:
    """Bars in preorder; leaves are the root branches."""

    branches: list
    bars: list

    def path(self, branch_index: int) -> list[int]:
        """Bar ids from the tree root down to the given leaf."""
        return [i for i, bar in enumerate(self.bars) if branch_index in bar.supported]

    def path_heights(self, branch_index: int) -> list[Exponent]:
        return [self.bars[i].height for i in self.path(branch_index)]

    def heights(self) -> list[Exponent]:
        return sorted(bar.height for bar in self.bars)

    def supporting_bars(self, alpha: PuiseuxSeries) -> list[int]:
        """Materialized bars whose stem is the prefix of alpha below their height."""
        supporting = []
        for i, bar in enumerate(self.bars):
            if _agrees_below(alpha, bar.stem, bar.height):
                supporting.append(i)
        return supporting

    def to_dict(self) -> dict:
        return {
            "branches": [b.to_dict() for b in self.branches],
            "bars": [bar.to_dict(i) for i, bar in enumerate(self.bars)],
        }


# =============================================================================
# ROOT EXPANSION
# =============================================================================

def _edge_roots(edge: Edge) -> list[tuple[Coeff, int]]:
    return [(c, mu) for c, mu in roots_certified(edge.assoc_poly)
            if not (is_exact(c) and not c)]


def _newton_extend(
    psi: XiPolynomial,
    alpha: PuiseuxSeries,
    last: Exponent,
    steps: Optional[int],
    depth: Optional[Exponent],
) -> PuiseuxSeries:
    """
    Extend a simple root by Newton steps on the (1, q1)-(0, q0) edge.

    Returns:
        alpha extended, truncated at the first exponent not computed
        (+inf when an exact root is reached)
    """
    done = 0
    while True:
        a0 = psi.coefficient(0)
        if a0.is_zero:
            return alpha
        a1 = psi.coefficient(1)
        e0, c0 = a0.leading
        e1, c1 = a1.leading
        h = e0 - e1
        if h <= last:
            raise InvariantViolation(
                f"Newton step exponent {format_exponent(h)} not past {format_exponent(last)}"
            )
        if (depth is not None and h > depth) or (depth is None and done >= steps):
            return PuiseuxSeries(alpha.terms, h)
        term = PuiseuxSeries.monomial(c_neg(c_div(c0, c1)), h)
        alpha = alpha + term
        psi = taylor_recenter(psi, term)
        last = h
        done += 1


def _expand_from(
    psi: XiPolynomial,
    alpha: PuiseuxSeries,
    last: Exponent,
    seeds: list,
    level: int = 0,
) -> None:
    if level > MAX_CLUSTER_LEVELS:
        raise UnresolvedRootCluster(
            f"root cluster at {alpha} still unsplit after {MAX_CLUSTER_LEVELS} recenterings"
        )
    polygon = polygon_of(psi)
    r = polygon.root_multiplicity
    if r:
        seeds.append((alpha, r, psi, last, True))
    for edge in polygon.proper_edges:
        if edge.coslope <= last:
            continue
        for c, mu in _edge_roots(edge):
            term = PuiseuxSeries.monomial(c, edge.coslope)
            moved = taylor_recenter(psi, term)
            if mu == 1:
                seeds.append((alpha + term, 1, moved, edge.coslope, False))
            else:
                _expand_from(moved, alpha + term, edge.coslope, seeds, level + 1)


def _squarefree_part(phi: XiPolynomial) -> Optional[XiPolynomial]:
    """
    Product of the squarefree factors of a polynomial φ with a repeated factor.

    Returns:
        None when φ is not a polynomial in (x, y) or is already squarefree
    """
    poly = phi.to_poly()
    if poly is None:
        return None
    _, groups = poly.sqf_list()
    if all(multiplicity == 1 for _, multiplicity in groups):
        return None
    reduced = Poly(1, X, Y)
    for group, _ in groups:
        reduced = reduced * Poly(group.as_expr(), X, Y)
    logger.debug(f"Expanding the squarefree part {reduced.as_expr()} of a repeated factor")
    return XiPolynomial.from_poly(reduced)


def _multiplicity_in(phi: XiPolynomial, series: PuiseuxSeries, separation: Exponent) -> int:
    """
    Number of roots of φ equal to a root of its squarefree part.

    The vertex of NP(φ, known part) supporting a co-slope strictly between
    the separation exponent and the truncation counts the roots in contact
    beyond the separation, and only copies of this root are.
    """
    known = PuiseuxSeries(series.terms, INF)
    polygon = build_polygon(phi, known)
    if series.is_exact:
        return polygon.root_multiplicity
    if series.trunc <= separation:
        raise TruncationError(
            f"root known below y^{format_exponent(series.trunc)} only, "
            f"not past its separation at {format_exponent(separation)}"
        )
    h = (separation + series.trunc) / 2
    return polygon.edge_at_coslope(h).dots[0].k


def expand_roots(
    phi: XiPolynomial,
    depth: Optional[Exponent] = None,
    extra_steps: int = DEFAULT_EXTRA_STEPS,
) -> list[RootBranch]:
    """
    All roots of a mini-regular φ in M1, with multiplicities.

    Args:
        phi: Mini-regular ξ-polynomial of order m
        depth: Extend simple roots through every exponent <= depth; when
               None each simple root gets `extra_steps` terms past the
               exponent where it separated
        extra_steps: Newton steps taken past the separation exponent

    Returns:
        Sorted branches whose multiplicities sum to m

    Raises:
        MiniRegularityError: When φ is not mini-regular
        UnresolvedRootCluster: When an edge polynomial cannot be solved
    """
    m = phi.regularity_order()
    reduced = _squarefree_part(phi)
    seeds: list = []
    _expand_from(reduced or phi, PuiseuxSeries.zero(), Fraction(0), seeds)

    branches_raw = []
    for alpha, multiplicity, psi, last, exact in seeds:
        if exact or multiplicity > 1:
            branches_raw.append((alpha, multiplicity))
            continue
        series = _newton_extend(psi, alpha, last, extra_steps, depth)
        branches_raw.append((series, multiplicity))

    branches_raw.sort(key=lambda item: series_sort_key(item[0]))
    branches = []
    for i, (series, multiplicity) in enumerate(branches_raw):
        contacts = [
            series.contact_order(other)
            for j, (other, _) in enumerate(branches_raw) if j != i
        ]
        separation = max(contacts) if contacts else Fraction(0)
        if reduced is not None:
            multiplicity = _multiplicity_in(phi, series, separation)
        branches.append(RootBranch(series, multiplicity, separation))

    total = sum(b.multiplicity for b in branches)
    if total != m:
        raise InvariantViolation(f"root multiplicities sum to {total}, expected {m}")
    check_residuals(phi, branches)
    logger.info(f"Expanded {len(branches)} root branches of total multiplicity {m}")
    return branches


def series_sort_key(series: PuiseuxSeries) -> tuple:
    return tuple((e, c_sort_key(c)) for e, c in series.terms)


def residual_bound(index: int, branches: list[RootBranch]) -> Exponent:
    """Guaranteed O_y(φ(ζ_i)) for the known part of ζ_i."""
    branch = branches[index]
    trunc = branch.series.trunc
    bound = Fraction(0)
    for j, other in enumerate(branches):
        contact = trunc if j == index else min(trunc, branch.series.contact_order(other.series))
        if contact == INF:
            return INF
        bound += other.multiplicity * contact
    return bound


def check_residuals(phi: XiPolynomial, branches: list[RootBranch]) -> None:
    """
    Substitute the known part of every branch back into φ.

    Raises:
        InvariantViolation: When an exact residual vanishes to a lower
                            order than the branch structure guarantees
    """
    for i, branch in enumerate(branches):
        known = PuiseuxSeries(branch.series.terms, INF)
        bound = residual_bound(i, branches)
        try:
            residual = evaluate_into(known, phi)
        except AmbiguousZeroError:
            logger.debug(f"Residual of branch {i} not decidable at this precision")
            continue
        order = residual.low()
        if order < bound:
            if branch.series.terms and not all(is_exact(c) for _, c in branch.series.terms):
                logger.debug(f"Ball residual of branch {i} below bound {bound}")
                continue
            raise InvariantViolation(
                f"residual of branch {i} has order {format_exponent(order)} "
                f"< {format_exponent(bound)}"
            )


# =============================================================================
# CONTACT, TRUNCATION, VALUATION
# =============================================================================

def _agrees_below(alpha: PuiseuxSeries, stem: PuiseuxSeries, height: Exponent) -> bool:
    try:
        return alpha.contact_order(stem) >= height or (
            alpha.prefix_below(height).contact_order(stem) == INF
        )
    except TruncationError:
        return False


def contact_matrix(branches: list[RootBranch]) -> list[list[Exponent]]:
    return [[a.series.contact_order(b.series) for b in branches] for a in branches]


def truncate_at(mu: PuiseuxSeries, branches: list[RootBranch]) -> tuple[PuiseuxSeries, Exponent]:
    """
    Canonical coordinate μ_φ: μ cut above h = max_i O_y(μ - ζ_i).

    Returns:
        (μ_φ, h); μ itself with h = +inf when μ is one of the roots

    Raises:
        TruncationError: When the stored terms cannot decide a contact
    """
    if not branches:
        raise PreconditionError("no root branches given")
    height = max(mu.contact_order(b.series) for b in branches)
    if height == INF:
        return mu, INF
    return mu.truncate_above(height), height


def valuation(mu: PuiseuxSeries, phi: XiPolynomial) -> ValuePair:
    """
    val_φ(μ): leading coefficient and order of φ(μ(y), y).

    Raises:
        PreconditionError: When μ has negative order
        TruncationError: When μ is too short to fix the leading term
    """
    if mu.terms and mu.terms[0][0] < 1:
        raise PreconditionError("valuation requires a series of order >= 1")
    value = evaluate_into(mu, phi)
    if value.is_zero:
        return ValuePair.zero()
    exponent, coeff = value.leading
    return ValuePair(coeff, exponent)


def lojasiewicz_exponent(xi: PuiseuxSeries, branches: list[RootBranch]) -> Exponent:
    """O_y(φ(ξ)) computed as Σ m_i O_y(ξ - ζ_i)."""
    total = Fraction(0)
    for branch in branches:
        contact = xi.contact_order(branch.series)
        if contact == INF:
            return INF
        total += branch.multiplicity * contact
    return total


def _same_series(a: PuiseuxSeries, b: PuiseuxSeries) -> bool:
    if len(a.terms) != len(b.terms):
        return False
    return all(e1 == e2 and c_equal(c1, c2) for (e1, c1), (e2, c2) in zip(a.terms, b.terms))


def conjugate_classes(branches: list[RootBranch]) -> list[list[int]]:
    """Group branch indices whose series are conjugates of one another."""
    classes: list[list[int]] = []
    assigned: set[int] = set()
    for i, branch in enumerate(branches):
        if i in assigned:
            continue
        group = [i]
        assigned.add(i)
        conjugates = branch.series.conjugates()[1:]
        for j in range(i + 1, len(branches)):
            if j in assigned or branches[j].multiplicity != branch.multiplicity:
                continue
            if any(_same_series(conj, branches[j].series) for conj in conjugates):
                group.append(j)
                assigned.add(j)
        classes.append(group)
    return classes


# =============================================================================
# KUO-LU TREE
# =============================================================================

def bar_polynomial(phi: XiPolynomial, stem: PuiseuxSeries, height: Exponent) -> Edge:
    """Edge of co-slope h of NP(φ, ζ_B): carries P_B and L(B)."""
    return build_polygon(phi, stem).edge_at_coslope(height)


def build_tree(phi: XiPolynomial, branches: list[RootBranch]) -> KuoLuTree:
    """
    Kuo-Lu tree of φ from its root branches.

    Bars are created only at heights where at least two groups of branches
    split apart.
    """
    contacts = contact_matrix(branches)
    tree = KuoLuTree(branches=branches, bars=[])

    def grow(group: list[int], parent: Optional[int]) -> None:
        if len(group) < 2:
            return
        height = min(contacts[i][j] for i in group for j in group if i < j)
        stem = branches[group[0]].series.prefix_below(height)
        edge = bar_polynomial(phi, stem, height)
        if edge.assoc_poly.degree < 1:
            raise InvariantViolation(f"bar at height {format_exponent(height)} has constant P_B")
        bar = Bar(
            height=height,
            stem=stem,
            assoc_poly=edge.assoc_poly,
            lojasiewicz=edge.lojasiewicz,
            supported=tuple(group),
            parent=parent,
        )
        index = len(tree.bars)
        tree.bars.append(bar)
        if parent is not None:
            tree.bars[parent].children.append(index)
        classes: list[list[int]] = []
        for i in group:
            for cls in classes:
                if contacts[i][cls[0]] > height:
                    cls.append(i)
                    break
            else:
                classes.append([i])
        if len(classes) < 2:
            raise InvariantViolation("bar without splitting")
        for cls in classes:
            grow(cls, index)

    grow(list(range(len(branches))), None)
    logger.debug(f"Tree heights {[format_exponent(h) for h in tree.heights()]}")
    return tree


def _critical_polynomial(poly: CPoly) -> CPoly:
    """P_B' with the roots shared with P_B removed."""
    exact = Poly(poly.to_sympy().as_expr(), Z, domain=QQ_I)
    derivative = exact.diff(Z)
    return CPoly.from_sympy(derivative.quo(exact.gcd(derivative)))


def _bar_critical_marks(poly: CPoly) -> list[tuple[Coeff, int]]:
    if poly.is_exact:
        reduced = _critical_polynomial(poly)
        if reduced.degree < 1:
            return []
        return roots_certified(reduced)
    marks = []
    for c, k in roots_certified(poly.derivative()):
        # AmbiguousZeroError propagates to the precision loop
        if is_zero(poly.eval(c)):
            continue
        marks.append((c, k))
    return marks


def critical_points(phi: XiPolynomial, tree: KuoLuTree) -> list[CriticalPoint]:
    """
    Blurred critical points of val_φ with multiplicities summing to m - 1.

    Raises:
        InvariantViolation: When the multiplicities do not add up
    """
    points: list[CriticalPoint] = []
    for index, bar in enumerate(tree.bars):
        bar.critical_marks = _bar_critical_marks(bar.assoc_poly)
        for c, k in bar.critical_marks:
            coordinate = bar.stem + PuiseuxSeries.monomial(c, bar.height)
            value = ValuePair(bar.assoc_poly.eval(c), bar.lojasiewicz)
            points.append(CriticalPoint(coordinate, k, index, bar.lojasiewicz, value))
    for branch in tree.branches:
        if branch.multiplicity > 1:
            points.append(CriticalPoint(
                branch.series, branch.multiplicity - 1, None, INF, ValuePair.zero()
            ))
    total = sum(p.multiplicity for p in points)
    m = sum(b.multiplicity for b in tree.branches)
    if total != m - 1:
        raise InvariantViolation(f"critical multiplicities sum to {total}, expected {m - 1}")
    return points


# =============================================================================
# BAR <-> EDGE BIJECTION
# =============================================================================

@dataclass(frozen=True)
class BarEdgePair:
    """A supporting bar of α, its edge in NP_ext(φ, α) and the translation check."""

    height: Exponent
    offset: Coeff
    bar_poly: CPoly
    edge: Edge
    materialized: Optional[int]
    translation_holds: bool

    def to_dict(self) -> dict:
        return {
            "height": format_exponent(self.height),
            "offset": coeff_to_dict(self.offset),
            "bar_poly": str(self.bar_poly),
            "edge": self.edge.to_dict(),
            "bar": self.materialized,
            "translation_holds": self.translation_holds,
        }


def bar_edge_bijection(
    alpha: PuiseuxSeries,
    phi: XiPolynomial,
    tree: Optional[KuoLuTree] = None,
) -> list[BarEdgePair]:
    """
    Pair every supporting bar of α with the edge of NP_ext(φ, α) of the same
    co-slope and check P_B(z) = P_E(z - a), a the bar coordinate of α.

    Supporting bars are the materialized bars whose stem α extends, together
    with the vertex bars at the exponents of α and at the co-slopes of
    NP(φ, α).
    """
    if alpha.trunc != INF:
        alpha = PuiseuxSeries(alpha.terms, INF)
    polygon: Polygon = build_polygon(phi, alpha)
    heights = {e for e in alpha.exponents if e > 0}
    heights.update(polygon.coslopes)
    materialized = {}
    if tree is not None:
        for i in tree.supporting_bars(alpha):
            heights.add(tree.bars[i].height)
            materialized[tree.bars[i].height] = i
    pairs = []
    for h in sorted(heights):
        stem = alpha.prefix_below(h)
        offset = alpha.coefficient(h)
        bar_poly = bar_polynomial(phi, stem, h).assoc_poly
        edge = polygon.edge_at_coslope(h)
        holds = bar_poly.equals(edge.assoc_poly.shift(c_neg(offset)))
        if not holds:
            logger.warning(f"Translation identity fails at height {format_exponent(h)}")
        pairs.append(BarEdgePair(h, offset, bar_poly, edge, materialized.get(h), holds))
    return pairs


def pairs_from_polygons(alpha: PuiseuxSeries, phi: XiPolynomial) -> list[Fraction]:
    """
    Puiseux pairs of α read from the co-slopes of its bar-edge pairs.

    Only heights where α has a nonzero coordinate count; a height whose
    denominator does not divide the running denominator is characteristic.
    """
    pairs = []
    running = 1
    for pair in bar_edge_bijection(alpha, phi):
        if is_exact(pair.offset) and not pair.offset:
            continue
        h = pair.edge.coslope
        if running % h.denominator:
            pairs.append(h)
            running = math.lcm(running, h.denominator)
    return pairs



"""
================================================================================
CONTEXT BLOCK
================================================================================
File: stability.py
Module: puiseux_analysis.stability
Purpose: Morse stability of polynomial families and of deformations F(x, y, t)

Description:
    check_poly_family() decides the three conditions for p_t(z):
      (1) every critical point c0 of p_0 deforms as a single branch of the
          same multiplicity,
      (2) critical points with equal values keep equal values,
      (3) critical points that are multiple roots of p_0 stay roots.
    Condition (1) and (3) are decided symbolically from the squarefree
    decomposition of dp_t/dz over Q(t); condition (2) needs a certificate
    (linear branches, or an affine symmetry of p_t) and otherwise is
    reported as undecided.

    tschirnhausen_clear() recentres F at a critical coordinate γ of φ_0
    (after y = s^N), then edges forward: for every edge of NP(φ_0, γ) the
    ξ^(m_v - 1) coefficient below the edge is made t-independent by
    translations ξ -> ξ + β_t with β_0 = 0. Any t-dependent dot left
    strictly below the polygon is an instability witness; the t-dependent
    dots on the edges form the edge families P_E(z; t).

    check_deformation() combines both into a family-level verdict, and
    verify_fundamental_lemma() recomputes φ_t at sampled t from scratch.

Created: 2025-12-14
================================================================================
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from sympy import I, Poly, QQ_I, Rational, Symbol, cancel, expand, fraction, together

from .algebra import (
    INF,
    CPoly,
    Exponent,
    T,
    X,
    Y,
    Z,
    c_add,
    c_mul,
    coeff_to_dict,
    exact_to_sympy,
    format_coeff,
    format_exponent,
    is_exact,
    resultant,
    roots_certified,
    squarefree_decompose,
    to_coeff,
)
from .errors import (
    InvariantViolation,
    PreconditionError,
    PuiseuxError,
    UnresolvedRootCluster,
    ZeroInputError,
)
from .expansion import (
    DEFAULT_EXTRA_STEPS,
    build_tree,
    critical_points,
    expand_roots,
)
from .models import (
    CriticalBranchReport,
    FamilyCheck,
    LemmaReport,
    StabilityReport,
    Verdict,
)
from .polygon import Polygon, XiPolynomial, build_polygon, polygon_of
from .series import PuiseuxSeries

logger = logging.getLogger(__name__)

XI = Symbol("xi")
S = Symbol("s")
V = Symbol("v")

SAMPLE_TS = (Fraction(1, 16), Fraction(1, 32), Fraction(1, 64))
LEMMA_TS = (Fraction(1, 16), Fraction(1, 8))
MAX_CLEARING_STEPS = 64


def _rational(value: Fraction):
    return Rational(value.numerator, value.denominator)


def _uni(expr) -> Poly:
    return Poly(expr, Z, domain=QQ_I)


def _depends_on_t(expr) -> bool:
    return cancel(expr - expr.subs(T, 0)) != 0


# =============================================================================
# POLYNOMIAL FAMILIES
# =============================================================================

@dataclass(frozen=True)
class PolyFamily:
    """p_t(z) = a_0(t) z^n + ... + a_n(t), coefficients polynomial in t."""

    poly: Poly

    @classmethod
    def from_expr(cls, expr) -> "PolyFamily":
        poly = Poly(expand(expr), Z, T)
        if poly.is_zero:
            raise ZeroInputError("zero polynomial family")
        return cls(poly)

    @property
    def degree(self) -> int:
        return self.poly.degree(Z)

    @property
    def leading(self):
        """a_0(t)."""
        return Poly(self.poly.as_expr(), Z).LC()

    def at(self, t0) -> Poly:
        return _uni(self.poly.as_expr().subs(T, t0))

    def __str__(self) -> str:
        return str(self.poly.as_expr())


def _divides(h: Poly, g: Poly) -> bool:
    return not g.is_zero and g.rem(h).is_zero


def _critical_factors(p0: Poly) -> list[tuple[Poly, int]]:
    derivative = p0.diff(Z)
    if derivative.is_zero:
        return []
    return squarefree_decompose(derivative, gen=Z)


def critical_value_classes(p0: Poly, points: list) -> list[int]:
    """
    Index of the critical value of each point; equal indices mean equal
    values. Ball values are resolved against the certified roots of the
    squarefree part of res_z(p0', p0 - v).

    Raises:
        UnresolvedRootCluster: When a value disk meets two value roots
    """
    values = [CPoly.from_sympy(p0).eval(c) for c in points]
    if all(is_exact(v) for v in values):
        distinct: list = []
        classes = []
        for v in values:
            for i, w in enumerate(distinct):
                if v == w:
                    classes.append(i)
                    break
            else:
                distinct.append(v)
                classes.append(len(distinct) - 1)
        return classes
    eliminated = resultant(
        Poly(p0.diff(Z).as_expr(), Z, V), Poly(p0.as_expr() - V, Z, V), Z
    )
    value_poly = Poly(eliminated, V, domain=QQ_I).sqf_part()
    value_roots = [r for r, _ in roots_certified(CPoly.from_sympy(value_poly))]
    classes = []
    for v in values:
        hits = [i for i, r in enumerate(value_roots) if _same_point(v, r)]
        if len(hits) != 1:
            raise UnresolvedRootCluster("critical value not separated from the others")
        classes.append(hits[0])
    return classes


def _distinct_critical_values(p: Poly) -> int:
    if p.diff(Z).is_zero:
        return 0
    eliminated = resultant(Poly(p.diff(Z).as_expr(), Z, V), Poly(p.as_expr() - V, Z, V), Z)
    poly = Poly(eliminated, V, domain=QQ_I)
    return poly.sqf_part().degree() if not poly.is_zero else 0


def _multiplicity_profile(p: Poly) -> list[int]:
    profile = []
    for factor, k in _critical_factors(p):
        profile.extend([k] * factor.degree())
    return sorted(profile)


def _branch_root(factor: Poly):
    """Root c_t of a factor linear in z, as a rational function of t."""
    a, b = Poly(factor.as_expr(), Z).all_coeffs()
    return cancel(-b / a)


def _affine_symmetry(fam: PolyFamily, source, target) -> Optional[dict]:
    """z -> ω z + b(t) fixing p_t and sending source to target at t = 0."""
    n = fam.degree
    a0, a1 = Poly(fam.poly.as_expr(), Z).all_coeffs()[:2]
    expr = fam.poly.as_expr()
    for omega in (-1, I, -I):
        if expand(omega ** n) != 1:
            continue
        shift = cancel(a1 * (omega - 1) / (n * a0))
        moved = cancel(expand(expr.subs(Z, omega * Z + shift, simultaneous=True) - expr))
        if moved != 0:
            continue
        image = c_add(c_mul(to_coeff(omega), source), to_coeff(shift.subs(T, 0)))
        if _same_point(image, target):
            return {"omega": str(omega), "shift": str(shift)}
    return None


def _same_point(a, b) -> bool:
    if is_exact(a) and is_exact(b):
        return a == b
    if not is_exact(a):
        return a.overlaps(b)
    return b.overlaps(a)


def check_poly_family(fam: PolyFamily) -> StabilityReport:
    """
    Decide Morse stability of p_t(z) at t = 0.

    Returns:
        StabilityReport with one CriticalBranchReport per critical point
        of p_0

    Raises:
        UnresolvedRootCluster: When critical points or values cannot be
                               separated at the current precision
    """
    report = StabilityReport(Verdict.MORSE_STABLE, subject=str(fam))
    p = fam.poly
    p0 = fam.at(0)
    if p0.is_zero:
        raise PreconditionError("p_0 vanishes identically")
    if p0.degree() < fam.degree:
        report.notes.append("degree drops at t = 0")

    derivative = Poly(p.diff(Z).as_expr(), Z, T)
    branches = squarefree_decompose(derivative, gen=Z) if not derivative.is_zero else []
    specialized = [(g, e, _uni(g.as_expr().subs(T, 0))) for g, e in branches]

    points = []
    for h, k in _critical_factors(p0):
        carriers = [i for i, (_, _, g0) in enumerate(specialized) if _divides(h, g0)]
        stable = False
        if len(carriers) == 1:
            g, e, g0 = specialized[carriers[0]]
            stable = (
                e == k
                and not _divides(h ** 2, g0)
                and g0.degree() == g.degree(Z)
            )
        witness = {
            "critical_factor": str(h.as_expr()),
            "expected_multiplicity": k,
            "carriers": [
                {
                    "factor": str(specialized[i][0].as_expr()),
                    "multiplicity": specialized[i][1],
                    "at_t0": str(specialized[i][2].as_expr()),
                    "degree_drop": specialized[i][2].degree() < specialized[i][0].degree(Z),
                }
                for i in carriers
            ],
        }
        for c0, _ in roots_certified(CPoly.from_sympy(h)):
            report.critical_points.append(
                CriticalBranchReport(coeff_to_dict(c0), format_coeff(c0), k, stable, witness)
            )
            points.append((c0, h, k, carriers[0] if len(carriers) == 1 else None))
        if not stable and report.verdict == Verdict.MORSE_STABLE:
            report.verdict = Verdict.UNSTABLE
            report.failing_condition = "(1)"
            report.witness = {"critical_point": witness["critical_factor"], "splits": True, **witness}
            logger.debug(f"Critical factor {h.as_expr()} splits in {fam}")

    if report.verdict == Verdict.UNSTABLE:
        return report

    # condition (3): multiple roots of p_0 carried by factors dividing p_t
    for c0, h, k, carrier in points:
        if not _divides(h, p0):
            continue
        g = specialized[carrier][0]
        if expand(resultant(g, p, Z)) != 0:
            report.verdict = Verdict.UNSTABLE
            report.failing_condition = "(3)"
            report.witness = {"critical_point": format_coeff(c0), "factor": str(g.as_expr())}
            return report

    _check_equal_values(fam, p0, points, specialized, report)
    _sample_profiles(fam, p0, report)
    logger.debug(f"Family {fam}: {report.verdict.value}")
    return report


def _check_equal_values(fam, p0, points, specialized, report: StabilityReport) -> None:
    if len(points) < 2:
        return
    classes = critical_value_classes(p0, [c for c, _, _, _ in points])
    undecided = []
    for a in range(len(points)):
        for b in range(a + 1, len(points)):
            if classes[a] != classes[b]:
                continue
            holds = _values_stay_equal(fam, points[a], points[b], specialized)
            if holds is False:
                report.verdict = Verdict.ALMOST_MORSE_STABLE
                report.failing_condition = "(2)"
                report.witness = {
                    "critical_points": [format_coeff(points[a][0]), format_coeff(points[b][0])],
                    "equal_values_separate": True,
                }
                return
            if holds is None:
                undecided.append([format_coeff(points[a][0]), format_coeff(points[b][0])])
    if undecided:
        report.verdict = Verdict.INCONCLUSIVE
        report.witness = {"undecided_pairs": undecided}
        report.notes.append("almost Morse stable; condition (2) undecided for nonlinear branches")


def _values_stay_equal(fam: PolyFamily, first, second, specialized) -> Optional[bool]:
    expr = fam.poly.as_expr()
    if T not in expr.free_symbols:
        return True
    c_a, _, _, carrier_a = first
    c_b, _, _, carrier_b = second
    g_a = specialized[carrier_a][0]
    g_b = specialized[carrier_b][0]
    if g_a.degree(Z) == 1 and g_b.degree(Z) == 1:
        root_a, root_b = _branch_root(g_a), _branch_root(g_b)
        return cancel(expr.subs(Z, root_a) - expr.subs(Z, root_b)) == 0
    symmetry = _affine_symmetry(fam, c_a, c_b)
    if symmetry is None:
        return None
    base = _distinct_critical_values(fam.at(0))
    for t0 in SAMPLE_TS:
        if _distinct_critical_values(fam.at(_rational(t0))) > base:
            return False
    return True


def _sample_profiles(fam: PolyFamily, p0: Poly, report: StabilityReport) -> None:
    if not report.verdict.is_stable or p0.degree() < fam.degree:
        return
    reference = _multiplicity_profile(p0)
    for t0 in SAMPLE_TS:
        found = _multiplicity_profile(fam.at(_rational(t0)))
        if found != reference:
            logger.warning(f"Critical multiplicities of {fam} at t={t0}: {found} != {reference}")
            report.notes.append(f"sampled multiplicities differ at t={t0}")


# =============================================================================
# TSCHIRNHAUSEN CLEARING
# =============================================================================

@dataclass
class ClearingResult:
    """Family recentred at γ + B_t with its t-dependent dots."""

    denom: int
    terms: dict
    polygon: Polygon
    shift: dict = field(default_factory=dict)
    witness: Optional[dict] = None
    families: list = field(default_factory=list)

    @property
    def cleared(self) -> bool:
        return self.witness is None

    def shift_text(self) -> str:
        if not self.shift:
            return "0"
        pieces = []
        for j in sorted(self.shift):
            pieces.append(f"({self.shift[j]})*y^({format_exponent(Fraction(j, self.denom))})")
        return " + ".join(pieces)

    def t_dots(self) -> list[tuple[int, Fraction]]:
        return sorted(
            (k, Fraction(j, self.denom))
            for (k, j), value in self.terms.items() if _depends_on_t(value)
        )

    def to_dict(self) -> dict:
        return {
            "cleared": self.cleared,
            "shift": self.shift_text(),
            "t_dots": [[k, format_exponent(q)] for k, q in self.t_dots()],
            "witness": self.witness,
            "families": [
                {"coslope": format_exponent(edge.coslope), "family": str(expr)}
                for edge, expr in self.families
            ],
        }


def _recentre(F: Poly, gamma: PuiseuxSeries, denom: int) -> dict:
    anchor = sum(exact_to_sympy(c) * S ** int(e * denom) for e, c in gamma.terms)
    expr = expand(F.as_expr().subs({X: anchor + XI, Y: S ** denom}, simultaneous=True))
    poly = Poly(expr, XI, S)
    return {monomial: value for monomial, value in poly.terms()}


def _at_zero(terms: dict, denom: int) -> XiPolynomial:
    grouped: dict = {}
    for (k, j), value in terms.items():
        c0 = value.subs(T, 0)
        if c0 != 0:
            grouped.setdefault(k, []).append((Fraction(j, denom), to_coeff(c0)))
    return XiPolynomial({k: PuiseuxSeries.make(v) for k, v in grouped.items()})


def _shift_terms(terms: dict, coeff, exponent: int, cap: Optional[int]) -> dict:
    """ξ -> ξ + coeff * s^exponent."""
    shifted: dict = {}
    for (k, j), value in terms.items():
        for i in range(k + 1):
            jj = j + exponent * (k - i)
            if cap is not None and jj > cap:
                continue
            shifted[(i, jj)] = shifted.get((i, jj), 0) + math.comb(k, i) * value * coeff ** (k - i)
    cleaned = {}
    for key, value in shifted.items():
        value = cancel(value)
        if value != 0:
            cleaned[key] = value
    return cleaned


def _clear_coefficient(
    terms: dict,
    shift: dict,
    vertex: tuple,
    denom: int,
    lowest: Fraction,
    below: Exponent,
    cap: Optional[int],
) -> dict:
    """
    Make the ξ^(m_v - 1) coefficient t-independent below `below` using
    translations of order >= `lowest`.
    """
    m_v, q_v = vertex
    k = m_v - 1
    j_v = int(q_v * denom)
    for _ in range(MAX_CLEARING_STEPS):
        candidates = sorted(
            j for (kk, j), value in terms.items()
            if kk == k and (below == INF or Fraction(j, denom) < below) and _depends_on_t(value)
        )
        if not candidates:
            return terms
        j = candidates[0]
        order = j - j_v
        if Fraction(order, denom) < lowest:
            return terms
        lead = terms[(m_v, j_v)]
        value = terms[(k, j)]
        step = cancel(-(value - value.subs(T, 0)) / (m_v * lead))
        shift[order] = cancel(shift.get(order, 0) + step)
        terms = _shift_terms(terms, step, order, cap)
    logger.warning(f"Clearing at vertex {vertex} stopped after {MAX_CLEARING_STEPS} steps")
    return terms


def _below_polygon(polygon: Polygon, k: int, q: Fraction) -> bool:
    return any(q + k * edge.coslope < edge.lojasiewicz for edge in polygon.proper_edges)


def tschirnhausen_clear(
    F: Poly,
    gamma: PuiseuxSeries,
    root_multiplicity: Optional[int] = None,
) -> ClearingResult:
    """
    Edge-by-edge Tschirnhausen normalization of F at γ.

    Args:
        F: Deformation in (x, y, t) with F(x, y, 0) mini-regular in x
        gamma: Exact critical coordinate of φ_0 (finite series)
        root_multiplicity: For a multiple root γ of φ_0, its multiplicity;
                           the coefficients below ξ^r must then vanish for
                           all t after clearing

    Returns:
        ClearingResult with B_t (B_0 = 0), the cleared terms, the edge
        families and, when clearing fails, the witness dot

    Raises:
        PreconditionError: When γ is truncated or has ball coefficients
    """
    if gamma.trunc != INF or not all(is_exact(c) for _, c in gamma.terms):
        raise PreconditionError("clearing needs an exact finite anchor")
    F = Poly(F.as_expr(), X, Y, T)
    denom = gamma.denom
    terms = _recentre(F, gamma, denom)
    polygon = polygon_of(_at_zero(terms, denom), root_multiplicity)
    edges = polygon.proper_edges
    cap = None
    if root_multiplicity is None and edges:
        cap = int(max(e.lojasiewicz for e in edges) * denom)
        terms = {(k, j): v for (k, j), v in terms.items() if j <= cap}

    shift: dict = {}
    lowest = Fraction(0)
    for edge in edges:
        vertex = edge.right_vertex
        terms = _clear_coefficient(
            terms, shift, vertex, denom, lowest, vertex[1] + edge.coslope, cap
        )
        lowest = edge.coslope
    if root_multiplicity:
        terms = _clear_coefficient(terms, shift, polygon.last_vertex, denom, lowest, INF, cap)
    if not polygon_of(_at_zero(terms, denom), root_multiplicity).equivalent(polygon):
        raise InvariantViolation(f"cleared family at {gamma} does not reduce to φ_0 at t = 0")

    result = ClearingResult(denom=denom, terms=terms, polygon=polygon, shift=shift)
    for k, q in result.t_dots():
        if root_multiplicity and k < root_multiplicity:
            result.witness = {"condition": "(3)", "dot": [k, format_exponent(q)]}
            break
        if _below_polygon(polygon, k, q):
            result.witness = {"condition": "polygon", "dot": [k, format_exponent(q)]}
            break
    for edge in edges:
        line = sum(
            (value * Z ** k for (k, j), value in terms.items()
             if Fraction(j, denom) + k * edge.coslope == edge.lojasiewicz),
            0,
        )
        numerator, _ = fraction(together(line))
        result.families.append((edge, expand(numerator)))
    if result.witness:
        logger.info(f"Dot {result.witness['dot']} stays below NP(φ_0, γ) for γ = {gamma}")
    return result


# =============================================================================
# DEFORMATIONS
# =============================================================================

def _top_value(clearing: ClearingResult):
    top = clearing.polygon.top
    return clearing.terms.get((0, int(top.lojasiewicz * clearing.denom)), 0)


def _analyse(phi: XiPolynomial, depth, extra_steps):
    branches = expand_roots(phi, depth=depth, extra_steps=extra_steps)
    tree = build_tree(phi, branches)
    return branches, tree, critical_points(phi, tree)


def _specialize(F: Poly, t0) -> XiPolynomial:
    return XiPolynomial.from_poly(Poly(F.as_expr().subs(T, t0), X, Y))


def check_deformation(
    F: Poly,
    depth: Optional[Exponent] = None,
    extra_steps: int = DEFAULT_EXTRA_STEPS,
) -> StabilityReport:
    """
    Family-level stability verdict for F(x, y, t), per edge-family criterion.

    Raises:
        PreconditionError: When F(0, 0, t) does not vanish identically
        MiniRegularityError: When F(x, y, 0) is not mini-regular
    """
    F = Poly(F.as_expr(), X, Y, T)
    if expand(F.as_expr().subs({X: 0, Y: 0})) != 0:
        raise PreconditionError("F(0, 0, t) must vanish identically")
    phi0 = _specialize(F, 0)
    branches, tree, points = _analyse(phi0, depth, extra_steps)
    report = StabilityReport(Verdict.MORSE_STABLE, subject=str(F.as_expr()))
    if not points:
        report.notes.append("no critical points")
        return report
    if F.degree(T) == 0:
        # the trivial deformation keeps every critical value fixed
        report.notes.append("F does not depend on t")
        return report

    inconclusive = False
    almost = False
    bar_values: dict = {}
    for point in points:
        label = str(point.coordinate)
        if point.coordinate.trunc != INF or not all(is_exact(c) for _, c in point.coordinate.terms):
            inconclusive = True
            report.notes.append(f"critical coordinate {label} is not exact")
            continue
        multiplicity = point.multiplicity + 1 if point.bar is None else None
        clearing = tschirnhausen_clear(F, point.coordinate, multiplicity)
        if clearing.witness and report.verdict != Verdict.UNSTABLE:
            report.verdict = Verdict.UNSTABLE
            report.failing_condition = clearing.witness["condition"]
            report.witness = {"critical_point": label, **clearing.witness}
        for edge, family_expr in clearing.families:
            if Poly(family_expr, Z).degree() < 1:
                continue
            family_report = check_poly_family(PolyFamily.from_expr(family_expr))
            report.families.append(
                FamilyCheck(label, edge.coslope, str(family_expr), family_report)
            )
            if family_report.verdict == Verdict.UNSTABLE and report.verdict != Verdict.UNSTABLE:
                report.verdict = Verdict.UNSTABLE
                report.failing_condition = family_report.failing_condition
                report.witness = {
                    "critical_point": label,
                    "family": str(family_expr),
                    **family_report.witness,
                }
            elif family_report.verdict == Verdict.INCONCLUSIVE:
                inconclusive = True
            elif family_report.verdict == Verdict.ALMOST_MORSE_STABLE:
                almost = True
        if point.bar is not None and clearing.cleared:
            bar_values.setdefault(point.bar, []).append((point, _top_value(clearing)))

    if report.verdict == Verdict.UNSTABLE:
        return report
    for values in bar_values.values():
        for a in range(len(values)):
            for b in range(a + 1, len(values)):
                (pa, ua), (pb, ub) = values[a], values[b]
                if pa.value.equals(pb.value) and cancel(ua - ub) != 0:
                    almost = True
                    report.witness = {
                        "critical_points": [str(pa.coordinate), str(pb.coordinate)],
                        "equal_values_separate": True,
                    }
    if inconclusive:
        report.verdict = Verdict.INCONCLUSIVE
    elif almost:
        report.verdict = Verdict.ALMOST_MORSE_STABLE
        report.failing_condition = "(2)"
    if report.verdict.is_stable:
        _check_root_deformation(F, phi0, branches, tree, report, depth, extra_steps)
    logger.info(f"Deformation verdict: {report.verdict.value}")
    return report


def _root_signature(branches, tree) -> list:
    return sorted(
        (b.multiplicity, tuple(tree.path_heights(i))) for i, b in enumerate(branches)
    )


def _check_root_deformation(F, phi0, branches, tree, report, depth, extra_steps) -> None:
    """Roots of φ_t keep their multiplicities and splitting heights at t = 1/16."""
    t0 = SAMPLE_TS[0]
    phi_t = _specialize(F, _rational(t0))
    branches_t = expand_roots(phi_t, depth=depth, extra_steps=extra_steps)
    tree_t = build_tree(phi_t, branches_t)
    if _root_signature(branches, tree) != _root_signature(branches_t, tree_t):
        report.notes.append(f"root polygons change at t={t0}")
        logger.warning(f"Root structure of {report.subject} changes at t={t0}")


def _critical_signature(phi: XiPolynomial, points) -> list:
    signature = []
    for point in points:
        known = PuiseuxSeries(point.coordinate.terms, INF)
        try:
            polygon = build_polygon(phi, known)
        except PuiseuxError as exc:
            logger.debug(f"Polygon at {point.coordinate} unavailable: {exc}")
            polygon = None
        signature.append((
            point.multiplicity,
            point.lojasiewicz,
            tuple(point.coordinate.puiseux_pairs()),
            polygon,
        ))
    return sorted(signature, key=lambda row: str((*row[:3], _shape(row[3]))))


def _shape(polygon: Optional[Polygon]) -> Optional[tuple]:
    return tuple(v.position for v in polygon.vertices) if polygon is not None else None


def _same_signature(found: list, reference: list) -> bool:
    """Same critical data with polygons of the same shape; coefficients may move with t."""
    if len(found) != len(reference):
        return False
    for (*data, polygon), (*expected, polygon0) in zip(found, reference):
        if data != expected or (polygon is None) != (polygon0 is None):
            return False
        if polygon is not None and not polygon.same_shape(polygon0):
            return False
    return True


def _describe(signature) -> list:
    return [
        {
            "multiplicity": m,
            "lojasiewicz": format_exponent(L),
            "puiseux_pairs": [format_exponent(e) for e in pairs],
            "polygon": [[k, format_exponent(q)] for k, q in _shape(polygon)] if polygon else None,
        }
        for m, L, pairs, polygon in signature
    ]


def verify_fundamental_lemma(
    F: Poly,
    sample_ts: Sequence = LEMMA_TS,
    depth: Optional[Exponent] = None,
    extra_steps: int = DEFAULT_EXTRA_STEPS,
    report: Optional[StabilityReport] = None,
) -> LemmaReport:
    """
    Recompute the critical structure of φ_t at sampled t and compare it
    with t = 0: multiplicities, Lojasiewicz exponents, Puiseux pairs and
    the polygon at every critical coordinate.

    Raises:
        PreconditionError: When the deformation is not (almost) Morse stable
    """
    F = Poly(F.as_expr(), X, Y, T)
    if report is None:
        report = check_deformation(F, depth, extra_steps)
    if not report.verdict.is_stable:
        raise PreconditionError(
            f"fundamental lemma check needs a stable deformation, verdict {report.verdict.value}"
        )
    phi0 = _specialize(F, 0)
    branches0, tree0, points0 = _analyse(phi0, depth, extra_steps)
    reference = _critical_signature(phi0, points0)
    roots0 = _root_signature(branches0, tree0)
    mismatches = []
    samples = [Fraction(t) for t in sample_ts]
    for t0 in samples:
        phi_t = _specialize(F, _rational(t0))
        branches, tree, points = _analyse(phi_t, depth, extra_steps)
        found = _critical_signature(phi_t, points)
        if not _same_signature(found, reference):
            mismatches.append({
                "t": format_exponent(t0),
                "field": "critical_points",
                "expected": _describe(reference),
                "found": _describe(found),
            })
        roots = _root_signature(branches, tree)
        if roots != roots0:
            mismatches.append({
                "t": format_exponent(t0),
                "field": "roots",
                "expected": [[m, [format_exponent(h) for h in hs]] for m, hs in roots0],
                "found": [[m, [format_exponent(h) for h in hs]] for m, hs in roots],
            })
    if mismatches:
        logger.warning(f"Fundamental lemma check found {len(mismatches)} mismatches")
    return LemmaReport(
        samples=samples,
        consistent=not mismatches,
        mismatches=mismatches,
        reference={"critical_points": _describe(reference)},
    )

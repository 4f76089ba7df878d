"""
================================================================================
CONTEXT BLOCK
================================================================================
File: render.py
Module: puiseux_analysis.render
Purpose: Text, JSON and SVG output for analysis results

Description:
    Command results are plain dicts (see analysis.py). to_json() dumps them
    deterministically; to_text() lays out the fields a reader looks for
    first for each command. polygon_figure() and tree_figure() draw a
    Newton polygon and a Kuo-Lu tree with drawsvg.

Figures:
    - Polygon: x axis = ξ-degree k, y axis = y-order q (drawn upwards).
      Dots are filled circles, hull vertices are ringed, each proper edge
      is labelled with its co-slope.
    - Tree: bars are horizontal segments placed at their height, trunks
      join them, leaves carry the root index and multiplicity, and the
      critical marks of a bar are dashed stubs above it.

Created: 2025-12-14
================================================================================
"""

import json
import logging
from fractions import Fraction
from typing import Optional

import drawsvg as draw

from .algebra import INF, format_exponent
from .expansion import KuoLuTree
from .polygon import Polygon

logger = logging.getLogger(__name__)

FONT = "DejaVu Sans, Arial, sans-serif"
STROKE = "#1f2933"
ACCENT = "#c0392b"
MUTED = "#7b8794"


# =============================================================================
# JSON AND TEXT
# =============================================================================

def to_json(payload: dict) -> str:
    """Stable JSON: fixed key order from the payload, UTF-8 text."""
    return json.dumps(payload, indent=2, ensure_ascii=False, default=str)


def _header(payload: dict) -> list[str]:
    lines = [f"input: {payload.get('input', '')}"]
    change = payload.get("regularization")
    if change:
        lines.append(f"regularization: {change}")
    return lines


def _text_expand(payload: dict) -> list[str]:
    lines = [f"order m = {payload['order']}"]
    for i, branch in enumerate(payload["branches"], start=1):
        pairs = ", ".join(branch["puiseux_pairs"]) or "-"
        lines.append(
            f"  root {i}: {branch['series']['text']}"
            f"  [multiplicity {branch['multiplicity']},"
            f" separates at {branch['separation_depth']}, pairs {pairs}]"
        )
    return lines


def _edge_line(edge: dict) -> str:
    left = f"({edge['left_vertex'][0]}, {edge['left_vertex'][1]})"
    right = f"({edge['right_vertex'][0]}, {edge['right_vertex'][1]})"
    return (
        f"  {edge['kind']:<8} co-slope {edge['coslope']:<6} {left} - {right}"
        f"  L = {edge['lojasiewicz']}  P_E = {edge['assoc_poly']}"
    )


def _text_polygon(payload: dict) -> list[str]:
    polygon = payload["polygon"]
    lines = []
    if payload.get("center"):
        lines.append(f"centre: {payload['center']}")
    lines.append("vertices: " + ", ".join(f"({k}, {q})" for k, q in polygon["vertices"]))
    lines.append("co-slopes: " + (", ".join(polygon["coslopes"]) or "-"))
    lines.extend(_edge_line(edge) for edge in polygon["edges"])
    return lines


def _text_tree(payload: dict) -> list[str]:
    tree = payload["tree"]
    lines = _text_expand(payload)
    lines.append("bars: " + (", ".join(bar["height"] for bar in tree["bars"]) or "-"))
    for bar in tree["bars"]:
        parent = "-" if bar["parent"] is None else bar["parent"]
        lines.append(
            f"  bar {bar['id']}: h = {bar['height']}, parent {parent},"
            f" roots {[r + 1 for r in bar['supported_roots']]},"
            f" P_B = {bar['assoc_poly']}, L = {bar['lojasiewicz']}"
        )
    points = payload["critical_points"]
    total = sum(p["multiplicity"] for p in points)
    lines.append(f"critical points: {len(points)} (total multiplicity {total})")
    for point in points:
        where = "root" if point["bar"] is None else f"bar {point['bar']}"
        value = "0_V" if point["value"]["zero"] else (
            f"({point['value']['u']['text']}, {point['value']['h']})"
        )
        lines.append(
            f"  {point['coordinate']['text']}  [multiplicity {point['multiplicity']},"
            f" {where}, value {value}]"
        )
    return lines


def _text_truncate(payload: dict) -> list[str]:
    result = payload["truncation"]
    lines = [f"f_root = {payload['fhat']}"]
    if not result["is_polynomial"]:
        lines.append("  (single root with infinitely many terms: emitted to the stored depth)")
    for (root, e) in zip(result["truncated_roots"], result["e_values"]):
        lines.append(
            f"  cut at e = {e}: {root['series']['text']}  [multiplicity {root['multiplicity']}]"
        )
    if payload.get("family"):
        lines.append(f"F_root = {payload['family']}")
    return lines


def _text_stability(payload: dict) -> list[str]:
    report = payload["report"]
    lines = [f"family: {report['subject']}", f"verdict: {report['verdict']}"]
    if report["failing_condition"]:
        lines.append(f"failing condition: {report['failing_condition']}")
    if report["witness"]:
        lines.append("witness: " + json.dumps(report["witness"], ensure_ascii=False, default=str))
    for point in report["critical_points"]:
        state = {True: "stable", False: "unstable", None: "undecided"}[point["stable"]]
        lines.append(f"  critical point {point['text']} (m = {point['multiplicity']}): {state}")
    for family in report["families"]:
        lines.append(
            f"  at {family['critical_point']}, co-slope {family['coslope']}:"
            f" {family['family']} -> {family['report']['verdict']}"
        )
    lines.extend(f"  note: {note}" for note in report["notes"])
    lemma = payload.get("lemma")
    if lemma:
        samples = ", ".join(lemma["samples"])
        state = "consistent" if lemma["consistent"] else "inconsistent"
        lines.append(f"fundamental lemma at t = {samples}: {state}")
    return lines


def _text_contact(payload: dict) -> list[str]:
    lines = []
    for item in payload["series"]:
        lines.append(f"series: {item['series']}")
        lines.append(f"  canonical coordinate: {item['canonical']}  (height {item['height']})")
        lines.append(f"  valuation: {item['valuation']}")
        lines.append(f"  Lojasiewicz exponent: {item['lojasiewicz']}")
        lines.append(f"  Puiseux pairs: {', '.join(item['puiseux_pairs']) or '-'}"
                     f"  (canonical: {', '.join(item['canonical_pairs']) or '-'})")
        for pair in item["bar_edges"]:
            mark = "ok" if pair["translation_holds"] else "FAILS"
            lines.append(
                f"    h = {pair['height']}: P_B = {pair['bar_poly']},"
                f" P_E = {pair['edge']['assoc_poly']} [{mark}]"
            )
    if "contact_order" in payload:
        lines.append(f"contact order: {payload['contact_order']}"
                     f" (curve level {payload['curve_contact_order']})")
    return lines


def _text_pairs(payload: dict) -> list[str]:
    lines = []
    for branch in payload["branches"]:
        lines.append(
            f"  {branch['series']}  [conjugates {branch['conjugates']},"
            f" multiplicity {branch['multiplicity']}]"
        )
        lines.append(f"    pairs: {', '.join(branch['puiseux_pairs']) or '-'}"
                     f"  (from polygons: {', '.join(branch['polygon_pairs']) or '-'})")
    return lines


def _text_batch(payload: dict) -> list[str]:
    lines = []
    for row in payload["rows"]:
        lines.append(
            f"  {row['name']:<16} {row['verdict']:<18} lemma {row['lemma']}"
            f"  {row['error'] or ''}".rstrip()
        )
    summary = payload["summary"]
    lines.append(", ".join(f"{k}: {v}" for k, v in summary.items()))
    return lines


_TEXT = {
    "expand": _text_expand,
    "polygon": _text_polygon,
    "tree": _text_tree,
    "truncate": _text_truncate,
    "stability": _text_stability,
    "contact": _text_contact,
    "pairs": _text_pairs,
    "batch": _text_batch,
}


def to_text(command: str, payload: dict) -> str:
    """Human-readable report of one command result."""
    if "error" in payload:
        return f"error: {payload['error']}"
    lines = [] if command == "batch" else _header(payload)
    lines.extend(_TEXT[command](payload))
    if payload.get("svg"):
        lines.append(f"figure written to {payload['svg']}")
    return "\n".join(lines)


# =============================================================================
# SVG FIGURES
# =============================================================================

def _plot_height(value) -> float:
    return float(Fraction(value))


def polygon_figure(polygon: Polygon, dots: Optional[list] = None, scale: float = 60.0) -> draw.Drawing:
    """
    Draw NP(φ, α).

    Args:
        polygon: The polygon
        dots: Every Newton dot (defaults to the dots on the edges)
        scale: Pixels per unit
    """
    if dots is None:
        dots = [d for edge in polygon.edges for d in edge.dots]
    ks = [d.k for d in dots] + [v.k for v in polygon.vertices]
    qs = [_plot_height(d.q) for d in dots] + [_plot_height(v.q) for v in polygon.vertices]
    k_max = max(ks) + 1
    q_max = max(qs) + 1
    margin = 40
    width = k_max * scale + 2 * margin
    height = q_max * scale + 2 * margin

    def at(k, q) -> tuple[float, float]:
        return margin + k * scale, height - margin - _plot_height(q) * scale

    d = draw.Drawing(width, height)
    d.append(draw.Rectangle(0, 0, width, height, fill="white"))
    d.append(draw.Line(*at(0, 0), *at(k_max, 0), stroke=MUTED, stroke_width=1))
    d.append(draw.Line(*at(0, 0), *at(0, q_max), stroke=MUTED, stroke_width=1))
    for k in range(k_max + 1):
        x, y = at(k, 0)
        d.append(draw.Text(str(k), 11, x, y + 16, fill=MUTED, font_family=FONT, text_anchor="middle"))

    # hull, then the horizontal and vertical rays
    corners = [coord for v in polygon.vertices for coord in at(v.k, v.q)]
    if len(polygon.vertices) > 1:
        d.append(draw.Lines(*corners, close=False, fill="none", stroke=STROKE, stroke_width=2))
    first = polygon.vertices[0]
    last = polygon.vertices[-1]
    d.append(draw.Line(*at(first.k, first.q), *at(k_max, first.q), stroke=STROKE, stroke_width=2))
    d.append(draw.Line(*at(last.k, last.q), *at(last.k, q_max), stroke=STROKE, stroke_width=2))

    for edge in polygon.proper_edges:
        (x1, y1), (x2, y2) = at(*edge.left_vertex), at(*edge.right_vertex)
        d.append(draw.Text(
            f"h = {format_exponent(edge.coslope)}", 12, (x1 + x2) / 2 + 6, (y1 + y2) / 2 - 6,
            fill=ACCENT, font_family=FONT,
        ))
    for dot in dots:
        d.append(draw.Circle(*at(dot.k, dot.q), 4, fill=STROKE))
    for vertex in polygon.vertices:
        d.append(draw.Circle(*at(vertex.k, vertex.q), 7, fill="none", stroke=ACCENT, stroke_width=1.5))
    return d


def tree_figure(tree: KuoLuTree, scale: float = 80.0) -> draw.Drawing:
    """Draw the Kuo-Lu tree; bars sit at their heights, leaves on top."""
    n = len(tree.branches)
    spacing = 60
    margin = 50
    finite = [_plot_height(bar.height) for bar in tree.bars if bar.height != INF]
    top = (max(finite) if finite else 1.0) + 0.75
    width = max(n, 1) * spacing + 2 * margin
    height = top * scale + 2 * margin

    def y_of(h) -> float:
        return height - margin - h * scale

    leaf_x = {i: margin + spacing * (i + 0.5) for i in range(n)}
    d = draw.Drawing(width, height)
    d.append(draw.Rectangle(0, 0, width, height, fill="white"))

    def span(bar) -> tuple[float, float]:
        xs = [leaf_x[i] for i in bar.supported]
        return min(xs), max(xs)

    def anchor(index: Optional[int], members) -> float:
        if index is None:
            return leaf_x[members[0]]
        lo, hi = span(tree.bars[index])
        return (lo + hi) / 2

    # trunk below the root bar
    if tree.bars:
        root_x = anchor(0, None)
        d.append(draw.Line(root_x, y_of(0), root_x, y_of(_plot_height(tree.bars[0].height)),
                           stroke=STROKE, stroke_width=2))
    elif n:
        d.append(draw.Line(leaf_x[0], y_of(0), leaf_x[0], y_of(top), stroke=STROKE, stroke_width=2))

    for index, bar in enumerate(tree.bars):
        h = _plot_height(bar.height)
        lo, hi = span(bar)
        d.append(draw.Line(lo - 8, y_of(h), hi + 8, y_of(h), stroke=STROKE, stroke_width=4))
        d.append(draw.Text(format_exponent(bar.height), 12, hi + 14, y_of(h) + 4,
                           fill=ACCENT, font_family=FONT))
        covered = set()
        for child in bar.children:
            cx = anchor(child, None)
            d.append(draw.Line(cx, y_of(h), cx, y_of(_plot_height(tree.bars[child].height)),
                               stroke=STROKE, stroke_width=2))
            covered.update(tree.bars[child].supported)
        for leaf in bar.supported:
            if leaf in covered:
                continue
            d.append(draw.Line(leaf_x[leaf], y_of(h), leaf_x[leaf], y_of(top),
                               stroke=STROKE, stroke_width=2))
        marks = len(bar.critical_marks)
        for j, (_, mult) in enumerate(bar.critical_marks):
            mx = lo + (hi - lo) * (j + 1) / (marks + 1)
            d.append(draw.Line(mx, y_of(h), mx, y_of(h) - 24, stroke=ACCENT,
                               stroke_width=1.5, stroke_dasharray="4,3"))
            if mult > 1:
                d.append(draw.Text(str(mult), 10, mx + 3, y_of(h) - 26, fill=ACCENT, font_family=FONT))

    for i, branch in enumerate(tree.branches):
        label = f"ζ{i + 1}" + (f" ×{branch.multiplicity}" if branch.multiplicity > 1 else "")
        d.append(draw.Text(label, 12, leaf_x[i], y_of(top) - 8, fill=STROKE,
                           font_family=FONT, text_anchor="middle"))
    return d


def save_figure(drawing: draw.Drawing, path: str) -> str:
    drawing.save_svg(path)
    logger.info(f"Wrote SVG figure {path}")
    return path

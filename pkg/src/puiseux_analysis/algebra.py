"""
================================================================================
CONTEXT BLOCK
================================================================================
File: algebra.py
Module: puiseux_analysis.algebra
Purpose: Exact and certified arithmetic underneath every other module

Description:
    Coefficients of series and edge polynomials are either exact Gaussian
    rationals (sympy's QQ_I elements) or certified complex enclosures
    (CBall, a thin wrapper around an mpmath.iv complex interval). The
    module-level c_* functions dispatch on that pair so that callers never
    branch on the representation themselves.

    Exact polynomials in one to three variables are plain sympy Poly
    objects; squarefree decomposition, factorization and resultants are
    delegated to sympy. Univariate polynomials whose coefficients may be
    balls (edge polynomials after an algebraic root step) use CPoly.

Coefficient Policy:
    - Exact (+) Exact stays exact; any Ball operand promotes the result.
    - A ball that contains 0 and is narrower than 2^(-prec/2) counts as
      zero. A wider ball containing 0 raises AmbiguousZeroError, which
      escalating() answers by doubling the precision.

Precision:
    DEFAULT_PRECISION = 128 bits, MAX_PRECISION = 4096 bits. The active
    precision is process-wide (mpmath contexts are global) and is set with
    the working_precision() context manager.

Created: 2025-12-14
================================================================================
"""

import logging
import math
import threading
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence, TypeVar, Union

from mpmath import iv, mp
from mpmath.libmp import NoConvergence, to_rational
from sympy import Poly, QQ, QQ_I, Symbol
from sympy import resultant as sympy_resultant
from sympy.polys.domains.gaussiandomains import GaussianRational
from sympy.polys.polyerrors import CoercionFailed

from .errors import (
    AmbiguousZeroError,
    InvariantViolation,
    PuiseuxError,
    UnresolvedRootCluster,
    ZeroInputError,
)

logger = logging.getLogger(__name__)

Rat = Fraction
INF = math.inf
Exponent = Union[Fraction, float]
GaussRat = GaussianRational

DEFAULT_PRECISION = 128
MAX_PRECISION = 4096

X = Symbol("x")
Y = Symbol("y")
T = Symbol("t")
Z = Symbol("z")

ResultT = TypeVar("ResultT")


# =============================================================================
# PRECISION MANAGEMENT
# =============================================================================

_precision_lock = threading.RLock()


@contextmanager
def working_precision(bits: int):
    """
    Set the mpmath interval and multiprecision contexts to `bits`.

    Args:
        bits: Working precision in bits

    Yields:
        The precision that was set
    """
    with _precision_lock:
        saved = (iv.prec, mp.prec)
        iv.prec = bits
        mp.prec = bits
        try:
            yield bits
        finally:
            iv.prec, mp.prec = saved


def current_precision() -> int:
    """Return the interval context precision in bits."""
    return iv.prec


def escalating(
    fn: Callable[..., ResultT],
    *args,
    precision: int = DEFAULT_PRECISION,
    max_precision: int = MAX_PRECISION,
    **kwargs,
) -> ResultT:
    """
    Run `fn` and retry with doubled precision on ambiguous balls.

    Args:
        fn: Computation to run; it must rebuild its balls on every call
        precision: Starting precision in bits
        max_precision: Last precision tried before giving up

    Returns:
        Whatever `fn` returns

    Raises:
        UnresolvedRootCluster: When max_precision still leaves ambiguity
    """
    bits = precision
    while True:
        try:
            with working_precision(bits):
                return fn(*args, **kwargs)
        except (AmbiguousZeroError, UnresolvedRootCluster) as exc:
            if bits >= max_precision:
                raise UnresolvedRootCluster(
                    f"unresolved root cluster at {bits} bits: {exc}"
                ) from exc
            next_bits = min(2 * bits, max_precision)
            logger.warning(f"Escalating precision {bits} -> {next_bits}: {exc}")
            bits = next_bits


# =============================================================================
# EXACT GAUSSIAN RATIONALS
# =============================================================================

def _qq(value) -> object:
    fraction = Fraction(value)
    return QQ(fraction.numerator, fraction.denominator)


def gauss(re=0, im=0) -> GaussRat:
    """Build the Gaussian rational re + im*i from ints or Fractions."""
    return QQ_I(_qq(re), _qq(im))


def parts(value: GaussRat) -> tuple[Fraction, Fraction]:
    """Split a Gaussian rational into (real, imaginary) Fractions."""
    return (
        Fraction(int(value.x.numerator), int(value.x.denominator)),
        Fraction(int(value.y.numerator), int(value.y.denominator)),
    )


def to_coeff(value) -> "Coeff":
    """
    Convert ints, Fractions, sympy numbers and Gaussian rationals to a Coeff.

    Raises:
        InvariantViolation: For values outside the Gaussian rationals
    """
    if isinstance(value, (GaussianRational, CBall)):
        return value
    if isinstance(value, (int, Fraction)):
        return gauss(value)
    try:
        return QQ_I.from_sympy(value)
    except (CoercionFailed, TypeError, AttributeError) as exc:
        raise InvariantViolation(f"not a Gaussian rational: {value}") from exc


def exact_to_sympy(value: GaussRat):
    """Return the sympy expression of an exact coefficient."""
    return QQ_I.to_sympy(value)


def format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_exponent(value: Exponent) -> str:
    """Render an exponent as p/q, an integer, or 'inf'."""
    if value == INF:
        return "inf"
    return format_rational(Fraction(value))


def format_gauss(value: GaussRat) -> str:
    re, im = parts(value)
    if im == 0:
        return format_rational(re)
    if im == 1:
        imag = "i"
    elif im == -1:
        imag = "-i"
    else:
        imag = f"{format_rational(im)}*i"
    if re == 0:
        return imag
    sign = "-" if im < 0 else "+"
    imag = imag.lstrip("-")
    return f"{format_rational(re)} {sign} {imag}"


# =============================================================================
# BALLS
# =============================================================================

def _mp_of(endpoint) -> object:
    return mp.mpf(endpoint)


def _exact_box(value: GaussRat):
    re, im = parts(value)
    return iv.mpc(
        iv.mpf(re.numerator) / iv.mpf(re.denominator),
        iv.mpf(im.numerator) / iv.mpf(im.denominator),
    )


@dataclass(frozen=True, eq=False)
class CBall:
    """
    Certified complex enclosure.

    The enclosure is the axis-parallel box `box` (an mpmath iv.mpc); the
    disk reported by `mid`/`radius` contains it. Arithmetic goes through
    mpmath's outward-rounded interval operations.
    """

    box: object
    prec: int

    @classmethod
    def from_disk(cls, mid, radius) -> "CBall":
        mid = mp.mpc(mid)
        radius = mp.mpf(radius)
        box = iv.mpc(
            iv.mpf([mid.real - radius, mid.real + radius]),
            iv.mpf([mid.imag - radius, mid.imag + radius]),
        )
        return cls(box, iv.prec)

    @property
    def endpoints(self) -> tuple:
        (a, b), (c, d) = self.box._mpci_
        return _mp_of(a), _mp_of(b), _mp_of(c), _mp_of(d)

    @property
    def mid(self):
        a, b, c, d = self.endpoints
        return mp.mpc((a + b) / 2, (c + d) / 2)

    @property
    def radius(self):
        a, b, c, d = self.endpoints
        return mp.sqrt(((b - a) / 2) ** 2 + ((d - c) / 2) ** 2)

    @property
    def width(self):
        a, b, c, d = self.endpoints
        return max(b - a, d - c)

    @property
    def contains_zero(self) -> bool:
        return 0 in self.box

    def overlaps(self, other: "Coeff") -> bool:
        return self.box.overlap(as_box(other))

    def contains(self, value: "Coeff") -> bool:
        return as_box(value) in self.box

    def __eq__(self, other) -> bool:
        return isinstance(other, CBall) and self.box._mpci_ == other.box._mpci_

    def __hash__(self) -> int:
        return hash(self.box._mpci_)

    def __repr__(self) -> str:
        return f"CBall({format_ball(self)})"


Coeff = Union[GaussRat, CBall]


def as_box(value: "Coeff"):
    """Return the interval box of any coefficient."""
    if isinstance(value, CBall):
        return value.box
    return _exact_box(to_coeff(value))


def negligible_width():
    """Width below which a ball around zero is treated as zero."""
    return mp.mpf(2) ** (-(iv.prec // 2))


def format_ball(value: CBall, digits: int = 12) -> str:
    mid = value.mid
    re = mp.nstr(mid.real, digits)
    im = mp.nstr(mid.imag, digits)
    rad = mp.nstr(value.radius, 3)
    if mid.imag == 0 and value.endpoints[2] == value.endpoints[3]:
        return f"{re} +/- {rad}"
    return f"({re} + {im}*i) +/- {rad}"


# =============================================================================
# COEFFICIENT DISPATCH
# =============================================================================

def is_exact(value: Coeff) -> bool:
    return not isinstance(value, CBall)


def _ball_result(box) -> CBall:
    return CBall(box, iv.prec)


def c_add(a: Coeff, b: Coeff) -> Coeff:
    if is_exact(a) and is_exact(b):
        return a + b
    return _ball_result(as_box(a) + as_box(b))


def c_sub(a: Coeff, b: Coeff) -> Coeff:
    if is_exact(a) and is_exact(b):
        return a - b
    return _ball_result(as_box(a) - as_box(b))


def c_mul(a: Coeff, b: Coeff) -> Coeff:
    if is_exact(a) and is_exact(b):
        return a * b
    return _ball_result(as_box(a) * as_box(b))


def c_neg(a: Coeff) -> Coeff:
    if is_exact(a):
        return -a
    return _ball_result(-a.box)


def c_div(a: Coeff, b: Coeff) -> Coeff:
    if is_exact(a) and is_exact(b):
        if not b:
            raise ZeroDivisionError("division by exact zero coefficient")
        return a / b
    if 0 in as_box(b):
        raise AmbiguousZeroError("division by a ball containing zero")
    return _ball_result(as_box(a) / as_box(b))


def c_scale(a: Coeff, factor: int) -> Coeff:
    return c_mul(a, gauss(factor))


def is_zero(value: Coeff) -> bool:
    """
    Decide whether a coefficient is zero.

    Raises:
        AmbiguousZeroError: For a ball that contains 0 but is too wide
    """
    if is_exact(value):
        return not value
    if not value.contains_zero:
        return False
    if value.width < negligible_width():
        logger.debug(f"Treating negligible ball {format_ball(value)} as zero")
        return True
    raise AmbiguousZeroError(f"ball {format_ball(value)} straddles zero")


def c_equal(a: Coeff, b: Coeff) -> bool:
    if is_exact(a) and is_exact(b):
        return a == b
    return is_zero(c_sub(a, b))


def c_sort_key(value: Coeff) -> tuple:
    if is_exact(value):
        re, im = parts(value)
        return (float(re), float(im))
    mid = value.mid
    return (float(mid.real), float(mid.imag))


def format_coeff(value: Coeff) -> str:
    if is_exact(value):
        return format_gauss(value)
    return format_ball(value)


def coeff_to_dict(value: Coeff) -> dict:
    """JSON form of a coefficient."""
    if is_exact(value):
        re, im = parts(value)
        return {"exact": format_gauss(value), "re": format_rational(re),
                "im": format_rational(im)}
    mid = value.mid
    return {
        "mid_re": mp.nstr(mid.real, 20),
        "mid_im": mp.nstr(mid.imag, 20),
        "radius": mp.nstr(value.radius, 5),
        "precision_bits": value.prec,
    }


def _mpf_to_fraction(value) -> Fraction:
    """Exact value of a binary float, sign included."""
    p, q = to_rational(mp.mpf(value)._mpf_)
    return Fraction(int(p), int(q))


def snap_gaussian(value: Coeff, max_denominator: int = 10 ** 6) -> Optional[GaussRat]:
    """
    Recognize the Gaussian rational enclosed by a ball.

    Args:
        value: Exact value (returned as is) or ball
        max_denominator: Largest denominator tried for each part

    Returns:
        The Gaussian rational inside the ball, or None when none is found
    """
    if is_exact(value):
        return value
    mid = value.mid
    re = _mpf_to_fraction(mid.real).limit_denominator(max_denominator)
    im = _mpf_to_fraction(mid.imag).limit_denominator(max_denominator)
    candidate = gauss(re, im)
    if value.contains(candidate):
        return candidate
    return None


def root_of_unity(n: int, k: int = 1) -> Coeff:
    """
    Return θ^k for the primitive n-th root θ = exp(2πi/n).

    Exact for n in {1, 2, 4}; a ball otherwise.
    """
    k %= n
    if n == 1 or k == 0:
        return gauss(1)
    if n == 2:
        return gauss(-1)
    if n == 4:
        return [gauss(1), gauss(0, 1), gauss(-1), gauss(0, -1)][k]
    angle = 2 * iv.pi * k / n
    return _ball_result(iv.mpc(iv.cos(angle), iv.sin(angle)))


# =============================================================================
# UNIVARIATE POLYNOMIALS OVER COEFF
# =============================================================================

@dataclass(frozen=True)
class CPoly:
    """
    Univariate polynomial in z with Coeff coefficients, lowest degree first.

    No trailing zero coefficient is stored; the zero polynomial has no
    coefficients at all.
    """

    coeffs: tuple

    @classmethod
    def from_terms(cls, terms: dict) -> "CPoly":
        if not terms:
            return cls(())
        top = max(terms)
        coeffs = [gauss(0)] * (top + 1)
        for k, c in terms.items():
            coeffs[k] = c_add(coeffs[k], c)
        return cls.from_list(coeffs)

    @classmethod
    def from_list(cls, coeffs: Sequence[Coeff]) -> "CPoly":
        cleaned = [gauss(0) if is_zero(c) else c for c in coeffs]
        while cleaned and is_exact(cleaned[-1]) and not cleaned[-1]:
            cleaned.pop()
        return cls(tuple(cleaned))

    @classmethod
    def from_sympy(cls, poly: Poly) -> "CPoly":
        coeffs = [to_coeff(c) for c in reversed(poly.all_coeffs())]
        return cls.from_list(coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_exact(self) -> bool:
        return all(is_exact(c) for c in self.coeffs)

    @property
    def order(self) -> int:
        """Multiplicity of z = 0 as a root."""
        for k, c in enumerate(self.coeffs):
            if not (is_exact(c) and not c):
                return k
        raise ZeroInputError()

    @property
    def leading(self) -> Coeff:
        return self.coeffs[-1]

    def coeff(self, k: int) -> Coeff:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return gauss(0)

    def eval(self, z: Coeff) -> Coeff:
        result: Coeff = gauss(0)
        for c in reversed(self.coeffs):
            result = c_add(c_mul(result, z), c)
        return result

    def derivative(self, times: int = 1) -> "CPoly":
        coeffs = list(self.coeffs)
        for _ in range(times):
            coeffs = [c_scale(c, k) for k, c in enumerate(coeffs)][1:]
        return CPoly.from_list(coeffs)

    def shift(self, a: Coeff) -> "CPoly":
        """Return p(z + a) (Taylor shift)."""
        n = len(self.coeffs)
        shifted = [gauss(0)] * n
        powers = [gauss(1)]
        for _ in range(n):
            powers.append(c_mul(powers[-1], a))
        for k, c in enumerate(self.coeffs):
            for j in range(k + 1):
                term = c_mul(c_scale(c, math.comb(k, j)), powers[k - j])
                shifted[j] = c_add(shifted[j], term)
        return CPoly.from_list(shifted)

    def scale(self, factor: Coeff) -> "CPoly":
        return CPoly.from_list([c_mul(c, factor) for c in self.coeffs])

    def equals(self, other: "CPoly") -> bool:
        """Coefficient-wise equality (exact, or ball overlap around zero)."""
        size = max(len(self.coeffs), len(other.coeffs))
        return all(c_equal(self.coeff(k), other.coeff(k)) for k in range(size))

    def to_sympy(self) -> Poly:
        if not self.is_exact:
            raise InvariantViolation("polynomial has ball coefficients")
        expr = sum(exact_to_sympy(c) * Z ** k for k, c in enumerate(self.coeffs))
        return Poly(expr, Z)

    def __str__(self) -> str:
        return render_univariate(self, "z")

    def to_dict(self) -> dict:
        return {
            "text": str(self),
            "coeffs": [coeff_to_dict(c) for c in self.coeffs],
        }


def render_univariate(poly: CPoly, var: str) -> str:
    pieces = []
    for k in range(len(poly.coeffs) - 1, -1, -1):
        c = poly.coeffs[k]
        if is_exact(c) and not c:
            continue
        pieces.append(render_term(c, f"{var}^{k}" if k > 1 else (var if k == 1 else "")))
    return join_terms(pieces) if pieces else "0"


def render_term(c: Coeff, monomial: str) -> str:
    text = format_coeff(c)
    if not monomial:
        return text
    if is_exact(c):
        re, im = parts(c)
        if im == 0 and re == 1:
            return monomial
        if im == 0 and re == -1:
            return f"-{monomial}"
        if re != 0 and im != 0:
            text = f"({text})"
    else:
        text = f"[{text}]"
    return f"{text}*{monomial}"


def join_terms(pieces: Iterable[str]) -> str:
    out = ""
    for piece in pieces:
        if not out:
            out = piece
        elif piece.startswith("-"):
            out += f" - {piece[1:]}"
        else:
            out += f" + {piece}"
    return out


# =============================================================================
# EXACT POLYNOMIAL ALGORITHMS
# =============================================================================

def squarefree_decompose(poly: Poly, gen=None) -> list[tuple[Poly, int]]:
    """
    Squarefree decomposition, refined into irreducible factors.

    Args:
        poly: Nonzero sympy Poly (any number of generators)
        gen: When given, factors free of `gen` are dropped (they are units
             over the fraction field of the other variables)

    Returns:
        (factor, multiplicity) pairs, pairwise coprime, sorted by degree
        and then by the printed factor

    Raises:
        ZeroInputError: For the zero polynomial
    """
    if poly.is_zero:
        raise ZeroInputError()
    _, groups = poly.sqf_list()
    result = []
    for group, multiplicity in groups:
        _, irreducibles = group.factor_list()
        for factor, _ in irreducibles:
            if gen is not None and factor.degree(gen) <= 0:
                continue
            result.append((factor, multiplicity))
    result.sort(key=lambda item: (item[0].total_degree(), str(item[0].as_expr())))
    return result


def resultant(p: Poly, q: Poly, gen):
    """
    Sylvester resultant of p and q with respect to `gen`.

    Returns:
        A sympy expression in the remaining variables

    Raises:
        PuiseuxError: When both inputs are constant in `gen`
    """
    if p.is_zero or q.is_zero:
        raise ZeroInputError()
    if p.degree(gen) <= 0 and q.degree(gen) <= 0:
        raise PuiseuxError(f"both polynomials are constant in {gen}")
    return sympy_resultant(p.as_expr(), q.as_expr(), gen)


# =============================================================================
# CERTIFIED ROOTS
# =============================================================================

def _eval_boxes(boxes: Sequence, z) -> object:
    result = iv.mpc(0, 0)
    for c in reversed(boxes):
        result = result * z + c
    return result


def _derivative_boxes(boxes: Sequence, times: int) -> list:
    out = list(boxes)
    for _ in range(times):
        out = [c * k for k, c in enumerate(out)][1:]
    return out


def _inclusion_radius(boxes: Sequence, z, degree: int):
    point = iv.convert(mp.mpc(z))
    value = abs(_eval_boxes(boxes, point))
    slope = abs(_eval_boxes(_derivative_boxes(boxes, 1), point))
    _, upper = value._mpi_
    lower_slope, _ = slope._mpi_
    lower_slope = mp.mpf(lower_slope)
    if lower_slope <= 0:
        return None
    return degree * mp.mpf(upper) / lower_slope


def _disk_box(center, radius):
    return iv.mpc(
        iv.mpf([center.real - radius, center.real + radius]),
        iv.mpf([center.imag - radius, center.imag + radius]),
    )


def _numeric_roots(coeffs: Sequence[Coeff]) -> list[tuple[CBall, int]]:
    """
    Enclose the roots of a polynomial with nonzero constant term.

    Simple roots are certified by pairwise disjoint inclusion disks. Tight
    clusters of k approximations are accepted as one root of multiplicity k
    when the k-th derivative has no zero on the cluster disk.
    """
    boxes = [as_box(c) for c in coeffs]
    degree = len(boxes) - 1
    mids = [CBall(b, iv.prec).mid for b in reversed(boxes)]
    try:
        approximations = mp.polyroots(mids, maxsteps=200, extraprec=mp.prec, error=False)
    except NoConvergence as exc:
        raise UnresolvedRootCluster(f"root iteration did not converge: {exc}") from exc
    centers = [mp.mpc(z) for z in approximations]
    radii = []
    for center in centers:
        radius = _inclusion_radius(boxes, center, degree)
        radii.append(radius if radius is not None else mp.inf)

    # union-find over overlapping inclusion disks
    parent = list(range(degree))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(degree):
        for j in range(i + 1, degree):
            if abs(centers[i] - centers[j]) <= radii[i] + radii[j]:
                parent[find(i)] = find(j)
    clusters: dict[int, list[int]] = {}
    for i in range(degree):
        clusters.setdefault(find(i), []).append(i)

    roots = []
    tolerance = mp.mpf(2) ** (-(mp.prec // 4))
    for members in clusters.values():
        if len(members) == 1:
            i = members[0]
            if radii[i] == mp.inf:
                raise UnresolvedRootCluster("root enclosure failed")
            roots.append((CBall(_disk_box(centers[i], radii[i]), iv.prec), 1))
            continue
        k = len(members)
        center = sum((centers[i] for i in members), mp.mpc(0)) / k
        spread = max(abs(centers[i] - center) for i in members)
        if spread > tolerance:
            raise UnresolvedRootCluster(f"cluster of {k} roots with spread {mp.nstr(spread, 3)}")
        radius = max(spread * 2, tolerance)
        disk = _disk_box(center, radius)
        if 0 in _eval_boxes(_derivative_boxes(boxes, k), disk):
            raise UnresolvedRootCluster(f"cluster of {k} roots not certified")
        roots.append((CBall(disk, iv.prec), k))
    return roots


def roots_certified(poly: CPoly) -> list[tuple[Coeff, int]]:
    """
    All roots of `poly` with multiplicities.

    Exact polynomials are split with sympy first: linear factors over the
    Gaussian rationals give exact roots, the remaining irreducible factors
    are isolated numerically with certified disks. Ball polynomials go
    straight to certified clustering.

    Args:
        poly: Nonzero polynomial of degree >= 1

    Returns:
        (root, multiplicity) pairs sorted by real then imaginary part;
        multiplicities sum to the degree

    Raises:
        UnresolvedRootCluster: When clusters cannot be separated
    """
    if poly.is_zero:
        raise ZeroInputError()
    roots: list[tuple[Coeff, int]] = []
    zero_order = poly.order
    if zero_order:
        roots.append((gauss(0), zero_order))
    reduced = CPoly(poly.coeffs[zero_order:])
    if reduced.degree >= 1:
        if reduced.is_exact:
            sympy_poly = Poly(reduced.to_sympy().as_expr(), Z, domain=QQ_I)
            for factor, multiplicity in squarefree_decompose(sympy_poly):
                coeffs = [to_coeff(c) for c in reversed(factor.all_coeffs())]
                if factor.degree() == 1:
                    roots.append((c_neg(c_div(coeffs[0], coeffs[1])), multiplicity))
                else:
                    for root, _ in _numeric_roots(coeffs):
                        roots.append((root, multiplicity))
        else:
            roots.extend(_numeric_roots(reduced.coeffs))
    total = sum(m for _, m in roots)
    if total != poly.degree:
        raise InvariantViolation(f"root multiplicities sum to {total}, degree {poly.degree}")
    roots.sort(key=lambda item: c_sort_key(item[0]))
    return roots

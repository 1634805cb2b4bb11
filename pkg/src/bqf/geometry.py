"""Penner's half-plane correspondence for positive definite forms, loci, closest-point check.

Points are u + v*i with u, v exact rationals, v > 0.  The exact domain of
point_of_form consists of the positive definite forms whose |disc| is a
perfect square, so that v = sqrt(|disc|) / (2a) is rational.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .forms import Form, POSITIVE_DEFINITE
from .numutil import DomainError, is_square
from .composition import FormClass, compose, is_concordant, is_unitable
from .reduction import reduce_definite
from .forms import UnimodularMatrix, act

HOROCYCLE_INFINITY = "horocycle at infinity"
HYPERCYCLE_ZERO = "hypercycle through zero"
HOROCYCLE_ZERO = "horocycle at zero"


@dataclass(frozen=True)
class GaussianRationalPoint:
    """The point u + v*i of the upper half plane, u and v exact rationals with v > 0."""

    u: Fraction
    v: Fraction

    def __post_init__(self):
        object.__setattr__(self, "u", Fraction(self.u))
        object.__setattr__(self, "v", Fraction(self.v))
        if self.v <= 0:
            raise DomainError("the point must lie in the upper half plane (v > 0)")

    @property
    def alpha(self) -> int:
        return self.u.numerator

    @property
    def beta(self) -> int:
        return self.u.denominator

    @property
    def gamma(self) -> int:
        return self.v.numerator

    @property
    def delta(self) -> int:
        return self.v.denominator

    def norm_squared(self) -> Fraction:
        return self.u * self.u + self.v * self.v


@dataclass(frozen=True)
class Locus:
    """One curve of the displayed family; parameter is None only for the imaginary axis."""

    kind: str
    parameter: int | None

    def contains(self, w: GaussianRationalPoint) -> bool:
        if self.kind == HOROCYCLE_INFINITY:
            return w.v == Fraction(self.parameter, 2)
        if self.kind == HYPERCYCLE_ZERO:
            if self.parameter is None:
                return w.u == 0
            return w.u != 0 and abs(w.v / w.u) == self.parameter
        if self.kind == HOROCYCLE_ZERO:
            return 2 * w.v == self.parameter * w.norm_squared()
        raise DomainError(f"unknown locus kind {self.kind!r}")


def form_of_point(w: GaussianRationalPoint) -> Form:
    """The paper's triple (beta^2 delta, -2 alpha beta delta, alpha^2 delta + beta^2 gamma).

    Its discriminant is -4 beta^4 gamma delta identically.
    """
    a, b, g, d = w.alpha, w.beta, w.gamma, w.delta
    return Form(b * b * d, -2 * a * b * d, a * a * d + b * b * g)


def point_of_form(f: Form) -> GaussianRationalPoint:
    """Exact root point (-b + sqrt(disc)) / (2a); requires |disc| to be a perfect square."""
    if f.classify() != POSITIVE_DEFINITE:
        raise DomainError("point_of_form requires a positive definite form")
    mag = -f.discriminant()
    if not is_square(mag):
        raise DomainError(
            "point is irrational: |discriminant| must be a perfect square in exact mode"
        )
    return GaussianRationalPoint(Fraction(-f.b, 2 * f.a), Fraction(isqrt(mag), 2 * f.a))


def _loci_through(w: GaussianRationalPoint):
    """All loci of the displayed family (integer parameters) passing through w."""
    out = []
    if w.v.denominator <= 2:
        out.append(Locus(HOROCYCLE_INFINITY, int(2 * w.v)))
    if w.u == 0:
        out.append(Locus(HYPERCYCLE_ZERO, None))
    else:
        slope = abs(w.v / w.u)
        if slope.denominator == 1:
            out.append(Locus(HYPERCYCLE_ZERO, int(slope)))
    g = 2 * w.v / w.norm_squared()
    if g.denominator == 1 and g > 0:
        out.append(Locus(HOROCYCLE_ZERO, int(g)))
    return out


def common_locus(f1: Form, f2: Form):
    """A locus of the displayed family containing both root points, if any."""
    w1 = point_of_form(f1)
    w2 = point_of_form(f2)
    for locus in _loci_through(w1):
        if locus.contains(w2):
            return locus
    return None


def product_point_check(f1: Form, f2: Form, samples: int = 1000) -> bool:
    """Falsification check of the closest-point theorem.

    The point of the product class must lie on the common locus and be at
    least as close to the origin (Euclidean distance to 0) as every sampled
    product-class representative whose point also lies on that locus.
    """
    if f1.classify() != POSITIVE_DEFINITE or f2.classify() != POSITIVE_DEFINITE:
        raise DomainError("product_point_check requires positive definite forms")
    if not (f1.is_primitive() and f2.is_primitive()):
        raise DomainError("product_point_check requires primitive forms")
    if f1.discriminant() != f2.discriminant():
        raise DomainError("product_point_check requires equal discriminants")
    if not is_concordant(f1, f2):
        raise DomainError("forms must be concordant")
    locus = common_locus(f1, f2)
    if locus is None:
        raise DomainError("forms do not lie on a common locus")
    product = compose(FormClass(f1), FormClass(f2))
    # the concordant product itself realizes the point of the product class
    direct = Form(f1.a * f2.a, f1.b, f2.c // f1.a)
    assert FormClass(direct) == product
    w = point_of_form(direct)
    if not locus.contains(w):
        return False
    best = w.norm_squared()
    # sample class representatives and keep those whose points are exact and on the locus
    seen = 0
    gen: list[UnimodularMatrix] = [UnimodularMatrix(1, 1, 0, 1), UnimodularMatrix(0, -1, 1, 0)]
    frontier = [direct]
    visited = {direct}
    while frontier and seen < samples:
        nxt = []
        for g in frontier:
            for m in gen + [m.inverse() for m in gen]:
                h = act(m, g)
                if h in visited:
                    continue
                visited.add(h)
                nxt.append(h)
                seen += 1
                if h.a > 0 and is_square(-h.discriminant()):
                    p = point_of_form(h)
                    if locus.contains(p) and p.norm_squared() < best:
                        return False
        frontier = nxt
    return True

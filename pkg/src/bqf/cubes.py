"""Bhargava cubes: slicings, the triple (PSL2 Z)^3 action, triple product, converse constructor.

Vertex labels follow the paper's figure: the octuple (a, b, c, d, e, f, g, h)
slices into U = [[a,e],[b,f]], D = [[c,g],[d,h]], L = [[a,c],[e,g]],
R = [[b,d],[f,h]], F = [[a,b],[c,d]], B = [[e,f],[g,h]], and the three
associated forms are f_UD = -det(Ux + Dy) and its LR/FB analogues.
"""

from dataclasses import dataclass
from math import gcd

from .forms import Form, UnimodularMatrix
from .numutil import DomainError, is_square
from .composition import FormClass, compose, identity_form


class DegenerateCubeError(DomainError):
    """A slice form has zero or square discriminant."""


@dataclass(frozen=True)
class Cube:
    a: int
    b: int
    c: int
    d: int
    e: int
    f: int
    g: int
    h: int

    def vertices(self):
        return (self.a, self.b, self.c, self.d, self.e, self.f, self.g, self.h)

    def slices(self):
        """Three matrix pairs ((U, D), (L, R), (F, B)) as row tuples."""
        a, b, c, d, e, f, g, h = self.vertices()
        U = ((a, e), (b, f))
        D = ((c, g), (d, h))
        Lm = ((a, c), (e, g))
        R = ((b, d), (f, h))
        F = ((a, b), (c, d))
        B = ((e, f), (g, h))
        return (U, D), (Lm, R), (F, B)

    def form_coefficients(self):
        """Raw (a, b, c) triples of f_UD, f_LR, f_FB (may be degenerate)."""
        a, b, c, d, e, f, g, h = self.vertices()
        ud = (b * e - a * f, e * d + b * g - a * h - c * f, d * g - c * h)
        lr = (c * e - a * g, c * f + d * e - a * h - b * g, d * f - b * h)
        fb = (b * c - a * d, b * g + c * f - a * h - d * e, f * g - e * h)
        return ud, lr, fb

    def discriminant(self) -> int:
        """Common discriminant of the three slice forms (an identity for every octuple)."""
        triples = self.form_coefficients()
        discs = {b * b - 4 * a * c for a, b, c in triples}
        assert len(discs) == 1, "slice discriminants must agree"
        return discs.pop()

    def is_degenerate(self) -> bool:
        d = self.discriminant()
        return d == 0 or is_square(d)

    def is_primitive(self) -> bool:
        return all(
            gcd(gcd(abs(a), abs(b)), abs(c)) == 1 for a, b, c in self.form_coefficients()
        )


def cube_forms(cube: Cube):
    """The three slice forms as Form values; degenerate cubes are rejected."""
    d = cube.discriminant()
    if d == 0 or is_square(d):
        raise DegenerateCubeError(f"cube has degenerate discriminant {d}")
    return tuple(Form(*t) for t in cube.form_coefficients())


def _combine(gamma: UnimodularMatrix, M, N):
    """(M, N) -> (pM + qN, rM + sN) entrywise."""
    p, q, r, s = gamma.entries()
    M2 = tuple(tuple(p * M[i][j] + q * N[i][j] for j in range(2)) for i in range(2))
    N2 = tuple(tuple(r * M[i][j] + s * N[i][j] for j in range(2)) for i in range(2))
    return M2, N2


def act_ud(gamma: UnimodularMatrix, cube: Cube) -> Cube:
    (U, D), _, _ = cube.slices()
    (u0, u1), (d0, d1) = _combine(gamma, U, D)
    return Cube(u0[0], u1[0], d0[0], d1[0], u0[1], u1[1], d0[1], d1[1])


def act_lr(gamma: UnimodularMatrix, cube: Cube) -> Cube:
    _, (Lm, R), _ = cube.slices()
    (l0, l1), (r0, r1) = _combine(gamma, Lm, R)
    return Cube(l0[0], r0[0], l0[1], r0[1], l1[0], r1[0], l1[1], r1[1])


def act_fb(gamma: UnimodularMatrix, cube: Cube) -> Cube:
    _, _, (F, B) = cube.slices()
    (f0, f1), (b0, b1) = _combine(gamma, F, B)
    return Cube(f0[0], f0[1], f1[0], f1[1], b0[0], b0[1], b1[0], b1[1])


def act3(triple, cube: Cube) -> Cube:
    """Apply (gamma_ud, gamma_lr, gamma_fb); actions along distinct directions commute."""
    g_ud, g_lr, g_fb = triple
    return act_fb(g_fb, act_lr(g_lr, act_ud(g_ud, cube)))


def triple_product_check(cube: Cube) -> bool:
    """Whether [f_UD] * [f_LR] * [f_FB] is the principal class."""
    forms = cube_forms(cube)
    if not all(f.is_primitive() for f in forms):
        raise DomainError("triple product requires a primitive cube")
    c1, c2, c3 = (FormClass(f) for f in forms)
    product = compose(compose(c1, c2), c3)
    return product == FormClass(identity_form(cube.discriminant()))


def cube_from_pair(f1: Form, f2: Form) -> Cube:
    """A primitive cube with f_UD = f1 and f_LR = f2 exactly.

    Construction: move (f1, f2) to a concordant pair (a1, B, a2*C), (a2, B, a1*C),
    write down the template cube (1, 0, 0, -C, 0, -a1, -a2, -B), then transport
    back along the recorded equivalences with the slice-wise action.
    """
    from .composition import _concordant_pair_with_witnesses

    if f1.discriminant() != f2.discriminant():
        raise DomainError("cube_from_pair requires equal discriminants")
    if not (f1.is_primitive() and f2.is_primitive()):
        raise DomainError("cube_from_pair requires primitive forms")
    g1, w1, g2, w2 = _concordant_pair_with_witnesses(f1, f2)
    a1, b = g1.a, g1.b
    a2 = g2.a
    cc = g1.c // a2
    assert g1.c == a2 * cc and g2.c == a1 * cc
    template = Cube(1, 0, 0, -cc, 0, -a1, -a2, -b)
    ud, lr, _ = template.form_coefficients()
    assert ud == g1.coefficients() and lr == g2.coefficients()
    # acting on the UD pair by gamma sends f_UD to f_UD o gamma^T and fixes f_LR, f_FB
    cube = act_ud(w1.inverse().transpose(), template)
    cube = act_lr(w2.inverse().transpose(), cube)
    got_ud, got_lr, _ = cube.form_coefficients()
    assert got_ud == f1.coefficients() and got_lr == f2.coefficients()
    return cube

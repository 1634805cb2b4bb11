"""Dirichlet composition, class groups, identity/inverse/ambiguity."""

from dataclasses import dataclass
from math import gcd, isqrt

from .forms import Form, INDEFINITE, UnimodularMatrix, act, is_g_reduced
from .numutil import DomainError, crt, ext_gcd, is_square, squarefree_part
from .reduction import FormClass, _rho, equivalent


def is_unitable(f1: Form, f2: Form) -> bool:
    """Squarefree parts of the two discriminants agree."""
    return squarefree_part(f1.discriminant()) == squarefree_part(f2.discriminant())


def is_concordant(f1: Form, f2: Form) -> bool:
    """b1 = b2, a2 | c1 and a1 | c2 (equal discriminants required)."""
    if f1.discriminant() != f2.discriminant():
        raise DomainError("concordance requires equal discriminants")
    return f1.b == f2.b and f1.c % f2.a == 0 and f2.c % f1.a == 0


def _coprime_value(f: Form, n: int, seed: int = 0):
    """A primitive (x, y) with gcd(f(x,y), n) = 1, plus the value; ring-by-ring search."""

    def rings():
        if seed == 0:
            yield from ((1, 0), (0, 1), (1, 1))
        for radius in range(1, 64):
            ring = [
                (x, y)
                for x in range(-radius, radius + 1)
                for y in range(-radius, radius + 1)
                if max(abs(x), abs(y)) == radius and gcd(x, y) == 1
            ]
            k = seed % len(ring)
            yield from ring[k:]
            yield from ring[:k]

    for x, y in rings():
        v = f(x, y)
        if v != 0 and gcd(v, n) == 1:
            return x, y, v
    raise AssertionError("no value coprime to n found (form not primitive?)")


def _concordant_pair_with_witnesses(f1: Form, f2: Form, seed: int = 0):
    """Concordant (g1, g2) with witnesses w1, w2: act(wi, fi) = gi."""
    if f1.discriminant() != f2.discriminant():
        raise DomainError("concordant pair requires equal discriminants")
    if not (f1.is_primitive() and f2.is_primitive()):
        raise DomainError("concordant pair requires primitive forms")
    d = f1.discriminant()
    a1 = f1.a
    x, y, m = _coprime_value(f2, 2 * a1, seed)
    _, s, t = ext_gcd(x, y)
    gamma2 = UnimodularMatrix(x, -t, y, s)
    h2 = act(gamma2, f2)
    assert h2.a == m
    b, lcm = crt(f1.b, 2 * a1, h2.b, 2 * m)
    # keep B small-ish for tidy output
    if b > lcm // 2:
        b -= lcm
    n1 = (b - f1.b) // (2 * a1)
    n2 = (b - h2.b) // (2 * m)
    t1 = UnimodularMatrix(1, n1, 0, 1)
    t2 = UnimodularMatrix(1, n2, 0, 1)
    g1 = act(t1, f1)
    g2 = act(t2, h2)
    w2 = gamma2 @ t2
    assert g1 == Form(a1, b, (b * b - d) // (4 * a1))
    assert g2 == Form(m, b, (b * b - d) // (4 * m))
    assert is_concordant(g1, g2)
    return g1, t1, g2, w2


def concordant_pair(c1: FormClass, c2: FormClass, seed: int = 0):
    """Concordant representatives (g1, g2) of the two classes."""
    g1, _, g2, _ = _concordant_pair_with_witnesses(c1.representative, c2.representative, seed)
    return g1, g2


def compose(c1: FormClass, c2: FormClass, seed: int = 0) -> FormClass:
    """Gauss product via a concordant pair: (a1, b, a2 c) * (a2, b, a1 c) = (a1 a2, b, c)."""
    if c1.discriminant() != c2.discriminant():
        raise DomainError("composition requires equal discriminants")
    if not (c1.is_primitive() and c2.is_primitive()):
        raise DomainError("composition requires primitive classes")
    if seed == 0:
        key = (c1.representative, c2.representative) if c1.representative <= c2.representative \
            else (c2.representative, c1.representative)
        hit = _COMPOSE_CACHE.get(key)
        if hit is not None:
            return hit
    g1, g2 = concordant_pair(c1, c2, seed)
    a = g1.a * g2.a
    result = FormClass(Form(a, g1.b, (g1.b * g1.b - g1.discriminant()) // (4 * a)))
    if seed == 0:
        if len(_COMPOSE_CACHE) > 1 << 17:
            _COMPOSE_CACHE.clear()
        _COMPOSE_CACHE[key] = result
    return result


_COMPOSE_CACHE: dict = {}


def identity_form(disc: int) -> Form:
    """Principal form: (1, 0, -disc/4) if disc = 0 mod 4, else (1, 1, (1-disc)/4)."""
    if disc == 0 or is_square(disc):
        raise DomainError("discriminant must be nonzero and nonsquare")
    if disc % 4 == 0:
        return Form(1, 0, -disc // 4)
    if disc % 4 == 1:
        return Form(1, 1, -(disc - 1) // 4)
    raise DomainError("discriminant must be 0 or 1 mod 4")


def inverse(c: FormClass) -> FormClass:
    f = c.representative
    return FormClass(Form(f.a, -f.b, f.c))


def is_ambiguous(f: Form) -> bool:
    """Whether [f] has order dividing 2, i.e. f ~ (a, -b, c)."""
    if not f.is_primitive():
        raise DomainError("ambiguity is defined for primitive forms")
    return equivalent(f, Form(f.a, -f.b, f.c)) is not None


def _reduced_definite_forms(disc: int):
    """All primitive reduced positive definite forms of negative discriminant disc."""
    out = []
    amax = isqrt(-disc // 3) if disc < -3 else 1
    for a in range(1, amax + 1):
        for b in range(-a, a + 1):
            num = b * b - disc
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if (abs(b) == a or a == c) and b < 0:
                continue
            if gcd(gcd(a, abs(b)), c) == 1:
                out.append(Form(a, b, c))
    return sorted(out)


def _g_reduced_forms(disc: int):
    """All primitive G-reduced forms of positive nonsquare discriminant disc."""
    out = []
    for b in range(1, isqrt(disc) + 1):
        if (b - disc) % 2:
            continue
        num = b * b - disc
        if num % 4:
            continue
        n = num // 4  # = a*c < 0
        if n >= 0:
            continue
        m = -n
        for a in range(1, m + 1):
            if m % a:
                continue
            c = -(m // a)
            for aa, cc in ((a, c), (-a, -c)):
                f = Form(aa, b, cc)
                if f.is_primitive() and is_g_reduced(f):
                    out.append(f)
    return sorted(out)


@dataclass(frozen=True)
class ClassGroup:
    """The form class group of one discriminant, with verified group axioms."""

    discriminant: int
    elements: tuple

    def order(self) -> int:
        return len(self.elements)

    def identity(self) -> FormClass:
        return FormClass(identity_form(self.discriminant))

    def index_of(self, c: FormClass) -> int:
        return self.elements.index(c)

    def table(self):
        """Full composition table as indices into elements."""
        n = self.order()
        return tuple(
            tuple(self.index_of(compose(self.elements[i], self.elements[j])) for j in range(n))
            for i in range(n)
        )

    def verify(self) -> bool:
        """Closure, identity, inverses, commutativity (cheap axioms)."""
        tab = self.table()
        e = self.index_of(self.identity())
        n = self.order()
        for i in range(n):
            if tab[e][i] != i or tab[i][e] != i:
                return False
            if e not in tab[i]:
                return False
            for j in range(i, n):
                if tab[i][j] != tab[j][i]:
                    return False
        return True


def class_group(disc: int) -> ClassGroup:
    """All primitive classes of the given discriminant (positive definite ones when disc < 0)."""
    if disc == 0 or is_square(disc) or disc % 4 not in (0, 1):
        raise DomainError("discriminant must be nonsquare and 0 or 1 mod 4")
    if disc < 0:
        classes = sorted((FormClass(f) for f in _reduced_definite_forms(disc)),
                         key=lambda c: c.representative.coefficients())
        return ClassGroup(disc, tuple(classes))
    forms = set(_g_reduced_forms(disc))
    classes = []
    while forms:
        f = min(forms)
        cycle = [f]
        g, _ = _rho(f)
        while g != f:
            cycle.append(g)
            g, _ = _rho(g)
        forms -= set(cycle)
        classes.append(FormClass(f))
    classes.sort(key=lambda c: c.representative.coefficients())
    return ClassGroup(disc, tuple(classes))

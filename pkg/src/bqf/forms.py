"""Integral binary quadratic forms, the modular-group action, and reduction predicates.

A form (a, b, c) stands for a*x^2 + b*x*y + c*y^2.  Discriminants are always
nonzero and nonsquare, so no form factors over the integers.  All comparisons
against sqrt(disc) are done in exact integer arithmetic.
"""

from dataclasses import dataclass, field
from math import gcd

from .numutil import DomainError, gt_sqrt, is_square, lt_sqrt

POSITIVE_DEFINITE = "positive definite"
NEGATIVE_DEFINITE = "negative definite"
INDEFINITE = "indefinite"


@dataclass(frozen=True, order=True)
class Form:
    a: int
    b: int
    c: int

    def __post_init__(self):
        for v in (self.a, self.b, self.c):
            if not isinstance(v, int):
                raise DomainError("form coefficients must be integers")
        d = self.b * self.b - 4 * self.a * self.c
        if d == 0 or is_square(d):
            raise DomainError(
                f"discriminant must be nonzero and nonsquare, got {d} for {(self.a, self.b, self.c)}"
            )

    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def __neg__(self) -> "Form":
        return Form(-self.a, -self.b, -self.c)

    def coefficients(self):
        return (self.a, self.b, self.c)

    def content(self) -> int:
        return gcd(gcd(abs(self.a), abs(self.b)), abs(self.c))

    def is_primitive(self) -> bool:
        return self.content() == 1

    def classify(self) -> str:
        if self.discriminant() > 0:
            return INDEFINITE
        return POSITIVE_DEFINITE if self.a > 0 else NEGATIVE_DEFINITE


def discriminant(f: Form) -> int:
    return f.discriminant()


def content(f: Form) -> int:
    return f.content()


def is_primitive(f: Form) -> bool:
    return f.is_primitive()


def classify(f: Form) -> str:
    return f.classify()


def is_reduced_definite(f: Form) -> bool:
    """|b| <= a <= c, with b >= 0 whenever either inequality is an equality."""
    if f.discriminant() >= 0 or f.a <= 0:
        raise DomainError("definite reduction predicate requires a positive definite form")
    if not (abs(f.b) <= f.a <= f.c):
        return False
    if (abs(f.b) == f.a or f.a == f.c) and f.b < 0:
        return False
    return True


def is_g_reduced(f: Form) -> bool:
    """Gauss-reduced: |sqrt(disc) - 2|a|| < b < sqrt(disc), checked exactly."""
    d = f.discriminant()
    if d < 0:
        raise DomainError("G-reduction predicate requires an indefinite form")
    if f.b <= 0:
        return False
    return lt_sqrt(f.b, d) and lt_sqrt(2 * abs(f.a) - f.b, d) and gt_sqrt(2 * abs(f.a) + f.b, d)


def is_z_reduced(f: Form) -> bool:
    """Zagier-reduced: a, c > 0 and b > a + c."""
    if f.discriminant() < 0:
        raise DomainError("Z-reduction predicate requires an indefinite form")
    return f.a > 0 and f.c > 0 and f.b > f.a + f.c


def is_semi_reduced(f: Form) -> bool:
    """Semi-reduced: a*c < 0."""
    if f.discriminant() < 0:
        raise DomainError("semi-reduction predicate requires an indefinite form")
    return f.a * f.c < 0


def _canonical_sign(p, q, r, s):
    for v in (p, q, r, s):
        if v:
            return (p, q, r, s) if v > 0 else (-p, -q, -r, -s)
    raise DomainError("zero matrix is not unimodular")


@dataclass(frozen=True)
class UnimodularMatrix:
    """An element of PSL2(Z): det = +1, entries canonicalized so the first nonzero is positive.

    The optional word is a string over {L, S} multiplying out to the matrix up
    to sign; it never takes part in equality or hashing.
    """

    p: int
    q: int
    r: int
    s: int
    word: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.p * self.s - self.q * self.r != 1:
            raise DomainError("matrix must have determinant 1")
        canon = _canonical_sign(self.p, self.q, self.r, self.s)
        if canon != (self.p, self.q, self.r, self.s):
            object.__setattr__(self, "p", canon[0])
            object.__setattr__(self, "q", canon[1])
            object.__setattr__(self, "r", canon[2])
            object.__setattr__(self, "s", canon[3])
        if self.word is not None:
            w = evaluate_word(self.word)
            if (w.p, w.q, w.r, w.s) != (self.p, self.q, self.r, self.s):
                raise DomainError("word does not multiply out to the matrix")

    def entries(self):
        return (self.p, self.q, self.r, self.s)

    def trace(self) -> int:
        return self.p + self.s

    def __matmul__(self, other: "UnimodularMatrix") -> "UnimodularMatrix":
        return UnimodularMatrix(
            self.p * other.p + self.q * other.r,
            self.p * other.q + self.q * other.s,
            self.r * other.p + self.s * other.r,
            self.r * other.q + self.s * other.s,
        )

    def inverse(self) -> "UnimodularMatrix":
        return UnimodularMatrix(self.s, -self.q, -self.r, self.p)

    def transpose(self) -> "UnimodularMatrix":
        return UnimodularMatrix(self.p, self.r, self.q, self.s)

    def is_identity(self) -> bool:
        return (self.p, self.q, self.r, self.s) == (1, 0, 0, 1)

    def with_word(self, word: str) -> "UnimodularMatrix":
        return UnimodularMatrix(self.p, self.q, self.r, self.s, word=word)


_L_ENTRIES = (1, -1, 1, 0)
_S_ENTRIES = (0, -1, 1, 0)


def evaluate_word(word: str) -> "UnimodularMatrix":
    """Multiply out a word over the alphabet {L, S} left to right."""
    p, q, r, s = 1, 0, 0, 1
    for ch in word:
        if ch == "L":
            e = _L_ENTRIES
        elif ch == "S":
            e = _S_ENTRIES
        else:
            raise DomainError(f"word may only contain L and S, got {ch!r}")
        p, q, r, s = (p * e[0] + q * e[2], p * e[1] + q * e[3],
                      r * e[0] + s * e[2], r * e[1] + s * e[3])
    return UnimodularMatrix(p, q, r, s)


IDENTITY = UnimodularMatrix(1, 0, 0, 1)
L = UnimodularMatrix(1, -1, 1, 0, word="L")
S = UnimodularMatrix(0, -1, 1, 0, word="S")
LL = L @ L


def act(gamma: UnimodularMatrix, f: Form) -> Form:
    """Change of variables: gamma.f = (f(p,r), 2apq + b(ps+qr) + 2crs, f(q,s)).

    With standard matrix multiplication this composes on the right:
    act(g1 @ g2, f) == act(g2, act(g1, f)).
    """
    p, q, r, s = gamma.entries()
    a, b, c = f.a, f.b, f.c
    return Form(
        f(p, r),
        2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s,
        f(q, s),
    )


def simplify_word(word: str) -> str:
    """Reduce a {L,S}-word modulo the relations S^2 = L^3 = 1."""
    out = []
    for ch in word:
        out.append(ch)
        while True:
            if len(out) >= 2 and out[-1] == "S" and out[-2] == "S":
                del out[-2:]
            elif len(out) >= 3 and out[-1] == out[-2] == out[-3] == "L":
                del out[-3:]
            else:
                break
    return "".join(out)


def psl2_word(m: UnimodularMatrix) -> str:
    """Some {L,S}-word multiplying out to m up to sign (continued-fraction peeling)."""
    # T = [[1,1],[0,1]] = -(L S), so T^n -> (LS)^n and T^-1 -> S L L.
    p, q, r, s = m.entries()
    tokens = []

    def emit_t(n):
        if n >= 0:
            tokens.append("LS" * n)
        else:
            tokens.append("SLL" * (-n))

    while r != 0:
        n = p // r  # floor division keeps |p - n r| < |r|
        emit_t(n)
        tokens.append("S")
        # m <- S^-1 T^-n m ; S^-1 = -S in PSL2
        p, q, r, s = r, s, -(p - n * r), -(q - n * s)
    # now r == 0, det 1 forces p = s = ±1, matrix is ±T^(q/s)
    emit_t(q * s)
    word = simplify_word("".join(tokens))
    check = evaluate_word(word)
    if check.entries() != m.entries():
        raise AssertionError(f"word decomposition failed for {m.entries()}")
    return word

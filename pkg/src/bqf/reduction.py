"""Reduction algorithms, continued fractions of quadratic irrationals, Pell, Hirzebruch.

Everything is exact: square roots only ever appear through isqrt brackets,
never through floats.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

from .forms import (
    Form,
    IDENTITY,
    INDEFINITE,
    NEGATIVE_DEFINITE,
    POSITIVE_DEFINITE,
    S,
    UnimodularMatrix,
    act,
    is_g_reduced,
    is_reduced_definite,
    is_z_reduced,
)
from .numutil import (
    DomainError,
    SearchExhausted,
    ceil_sqrt_shift,
    floor_sqrt_shift,
    is_probable_prime,
    is_square,
)

_MAX_REDUCE_STEPS = 20000


# ---------------------------------------------------------------------------
# definite reduction

def reduce_definite(f: Form):
    """Reduce a positive definite form; returns (reduced form, witness gamma).

    act(gamma, f) equals the returned form, which is the unique class
    representative with |b| <= a <= c and b >= 0 on the boundary.
    """
    if f.classify() != POSITIVE_DEFINITE:
        raise DomainError("reduce_definite requires a positive definite form")
    g, w = f, IDENTITY
    for _ in range(_MAX_REDUCE_STEPS):
        # normalize b into (-a, a] by a translation
        n = (g.a - g.b) // (2 * g.a)
        if n:
            t = UnimodularMatrix(1, n, 0, 1)
            g, w = act(t, g), w @ t
        if g.a > g.c or (g.a == g.c and g.b < 0):
            g, w = act(S, g), w @ S
            continue
        break
    else:
        raise AssertionError("definite reduction did not terminate")
    assert is_reduced_definite(g)
    return g, w


# ---------------------------------------------------------------------------
# Gauss reduction of indefinite forms

def _rho(f: Form):
    """One Gauss reduction step (a,b,c) -> (c, b', c'); returns (form, step matrix)."""
    d = f.discriminant()
    c = f.c
    ac = abs(c)
    if c * c < d:
        # b' is the unique residue of -b mod 2|c| in (sqrt(d) - 2|c|, sqrt(d))
        k = floor_sqrt_shift(f.b, d, 2 * ac)
        bp = 2 * ac * k - f.b
    else:
        # unique residue in (-|c|, |c|]
        k = (f.b + ac) // (2 * ac)
        bp = 2 * ac * k - f.b
    cp = (bp * bp - d) // (4 * c)
    m = (f.b + bp) // (2 * c)
    # step matrix [[0,-1],[1,m]]; act(step, f) == (c, bp, cp) by the action formula
    return Form(c, bp, cp), UnimodularMatrix(0, -1, 1, m)


def _gauss_cycle_with_witnesses(f: Form):
    """All G-reduced forms of [f] in rho-cycle order, each with a witness from f."""
    if f.classify() != INDEFINITE:
        raise DomainError("Gauss cycle requires an indefinite form")
    g, w = f, IDENTITY
    for _ in range(_MAX_REDUCE_STEPS):
        if is_g_reduced(g):
            break
        g, step = _rho(g)
        w = w @ step
    else:
        raise AssertionError("Gauss reduction did not reach a reduced form")
    first = g
    out = [(g, w)]
    for _ in range(_MAX_REDUCE_STEPS):
        g, step = _rho(g)
        w = w @ step
        if g == first:
            return out
        assert is_g_reduced(g)
        out.append((g, w))
    raise AssertionError("Gauss cycle did not close")


def gauss_reduce_indefinite(f: Form):
    """Return (cycle of G-reduced forms of [f], witness mapping f to cycle[0])."""
    pairs = _gauss_cycle_with_witnesses(f)
    return tuple(g for g, _ in pairs), pairs[0][1]


# ---------------------------------------------------------------------------
# Zagier reduction

def zagier_step(f: Form):
    """Apply S(L^2 S)^n = [[n,1],[-1,0]] with n = ceil((b + sqrt(disc)) / (2a))."""
    d = f.discriminant()
    n = ceil_sqrt_shift(f.b, d, 2 * f.a)
    # act([[n,1],[-1,0]], f) == (a n^2 - b n + c, 2 a n - b, a) by the action formula
    return Form(f.a * n * n - f.b * n + f.c, 2 * f.a * n - f.b, f.a), n


def zagier_reduce(f: Form):
    """Iterate the Zagier step; returns (preperiod, cycle) of forms.

    If a < 0 at entry the form is first replaced by S.f = (c, -b, a); the
    iteration then converges on its own (after one step the associated
    irrational exceeds 1).
    """
    if f.classify() != INDEFINITE:
        raise DomainError("zagier_reduce requires an indefinite form")
    g = act(S, f) if f.a < 0 else f
    seen = {}
    seq = []
    for i in range(_MAX_REDUCE_STEPS):
        if g in seen:
            j = seen[g]
            cycle = tuple(seq[j:])
            assert all(is_z_reduced(h) for h in cycle)
            return tuple(seq[:j]), cycle
        seen[g] = i
        seq.append(g)
        g, _ = zagier_step(g)
    raise AssertionError("Zagier reduction did not become periodic")


# ---------------------------------------------------------------------------
# canonical class representatives

@lru_cache(maxsize=1 << 18)
def canonical_representative(f: Form) -> Form:
    """Unique reduced form (definite) or lexicographically least G-reduced form (indefinite)."""
    kind = f.classify()
    if kind == POSITIVE_DEFINITE:
        return reduce_definite(f)[0]
    if kind == NEGATIVE_DEFINITE:
        return -reduce_definite(-f)[0]
    cycle, _ = gauss_reduce_indefinite(f)
    return min(cycle)


@dataclass(frozen=True)
class FormClass:
    """A proper equivalence class, stored by its canonical representative."""

    representative: Form

    def __post_init__(self):
        object.__setattr__(self, "representative", canonical_representative(self.representative))

    def discriminant(self) -> int:
        return self.representative.discriminant()

    def is_primitive(self) -> bool:
        return self.representative.is_primitive()


def equivalent(f: Form, g: Form):
    """Witness gamma with act(gamma, f) == g when [f] = [g], else None."""
    if f.discriminant() != g.discriminant():
        return None
    kind = f.classify()
    if kind != g.classify():
        return None
    if kind == INDEFINITE:
        pairs = _gauss_cycle_with_witnesses(f)
        gr, wg = _gauss_cycle_with_witnesses(g)[0]
        for h, wf in pairs:
            if h == gr:
                witness = wf @ wg.inverse()
                assert act(witness, f) == g
                return witness
        return None
    if kind == NEGATIVE_DEFINITE:
        f, g = -f, -g
    rf, wf = reduce_definite(f)
    rg, wg = reduce_definite(g)
    if rf != rg:
        return None
    witness = wf @ wg.inverse()
    return witness


# ---------------------------------------------------------------------------
# quadratic irrationals

@dataclass(frozen=True)
class QuadraticIrrational:
    """(P + sqrt(D)) / Q with D > 0 nonsquare and Q | (D - P^2)."""

    P: int
    Q: int
    D: int

    def __post_init__(self):
        if self.Q == 0:
            raise DomainError("Q must be nonzero")
        if self.D <= 0 or is_square(self.D):
            raise DomainError("D must be positive and nonsquare")
        if (self.D - self.P * self.P) % self.Q:
            # rescale to restore the divisibility invariant
            k = abs(self.Q)
            object.__setattr__(self, "P", self.P * k)
            object.__setattr__(self, "D", self.D * k * k)
            object.__setattr__(self, "Q", self.Q * k)

    def floor(self) -> int:
        return floor_sqrt_shift(self.P, self.D, self.Q)

    def ceil(self) -> int:
        return ceil_sqrt_shift(self.P, self.D, self.Q)

    def __neg__(self) -> "QuadraticIrrational":
        return QuadraticIrrational(self.P, -self.Q, self.D)

    def inverse(self) -> "QuadraticIrrational":
        return QuadraticIrrational(-self.P, (self.D - self.P * self.P) // self.Q, self.D)

    def conjugate_pair_form(self) -> Form:
        """The primitive form whose first root (-b + sqrt(disc))/(2a) is this value."""
        p, q, d = self.P, self.Q, self.D
        a, b, c = q * q, -2 * p * q, p * p - d
        g = gcd(gcd(abs(a), abs(b)), abs(c))
        a, b, c = a // g, b // g, c // g
        if q < 0:
            a, b, c = -a, -b, -c
        return Form(a, b, c)

    def add_int(self, n: int) -> "QuadraticIrrational":
        return QuadraticIrrational(self.P + n * self.Q, self.Q, self.D)

    def is_negative(self) -> bool:
        # sign of (P + sqrt(D)) / Q
        num_positive = self.P >= 0 or self.P * self.P < self.D
        return num_positive != (self.Q > 0)

    def compare_fraction(self, fr: Fraction) -> int:
        """Sign of (self - fr), exactly."""
        m, n = fr.numerator, fr.denominator
        # (P + sqrt(D))/Q - m/n has the sign of (nP - mQ + n sqrt(D)) * sign(Q)
        a = n * self.P - m * self.Q
        if a >= 0:
            num_sign = 1
        else:
            num_sign = 1 if n * n * self.D > a * a else -1
        return num_sign if self.Q > 0 else -num_sign

    def approx(self) -> float:
        return (self.P + isqrt(self.D * 10**40) / 10**20) / self.Q


def root_of(f: Form) -> QuadraticIrrational:
    """First root (-b + sqrt(disc)) / (2a) of an indefinite form."""
    if f.classify() != INDEFINITE:
        raise DomainError("root_of requires an indefinite form")
    return QuadraticIrrational(-f.b, 2 * f.a, f.discriminant())


# ---------------------------------------------------------------------------
# continued fractions

PLUS = "plus"
MINUS = "minus"


@dataclass(frozen=True)
class ContinuedFraction:
    """Eventually periodic expansion: finite head then a repeating period."""

    flavor: str
    head: tuple
    period: tuple

    def __post_init__(self):
        if self.flavor not in (PLUS, MINUS):
            raise DomainError("flavor must be 'plus' or 'minus'")
        if not self.period:
            raise DomainError("period must be nonempty")
        object.__setattr__(self, "head", tuple(self.head))
        object.__setattr__(self, "period", tuple(self.period))
        lo = 2 if self.flavor == MINUS else 1
        tail = list(self.head[1:]) + list(self.period)
        if any(t < lo for t in tail):
            raise DomainError(f"{self.flavor} partial quotients after the first must be >= {lo}")

    def terms(self, n: int):
        out = list(self.head)
        i = 0
        while len(out) < n:
            out.append(self.period[i % len(self.period)])
            i += 1
        return out[:n]

    def canonical_period(self) -> tuple:
        return min(tuple(self.period[i:]) + tuple(self.period[:i]) for i in range(len(self.period)))


def _canonical_cf(flavor, head, period):
    """Minimize period length, then absorb a redundant head tail into the period."""
    period = list(period)
    for d in range(1, len(period) + 1):
        if len(period) % d == 0 and period == period[:d] * (len(period) // d):
            period = period[:d]
            break
    head = list(head)
    while head and head[-1] == period[-1]:
        head.pop()
        period = [period[-1]] + period[:-1]
    return ContinuedFraction(flavor, tuple(head), tuple(period))


def cf_plus(x: QuadraticIrrational) -> ContinuedFraction:
    """Ordinary continued fraction: a_k = floor(x_k), x_{k+1} = 1/(x_k - a_k)."""
    terms = []
    seen = {}
    cur = x
    for i in range(_MAX_REDUCE_STEPS):
        key = (cur.P, cur.Q, cur.D)
        if key in seen:
            j = seen[key]
            return _canonical_cf(PLUS, terms[:j], terms[j:])
        seen[key] = i
        a = cur.floor()
        terms.append(a)
        cur = cur.add_int(-a).inverse()
    raise AssertionError("plus continued fraction did not become periodic")


def cf_minus(x: QuadraticIrrational) -> ContinuedFraction:
    """Minus continued fraction: a_k = ceil(x_k), x_{k+1} = 1/(a_k - x_k)."""
    terms = []
    seen = {}
    cur = x
    for i in range(_MAX_REDUCE_STEPS):
        key = (cur.P, cur.Q, cur.D)
        if key in seen:
            j = seen[key]
            return _canonical_cf(MINUS, terms[:j], terms[j:])
        seen[key] = i
        a = cur.ceil()
        terms.append(a)
        cur = (-cur.add_int(-a)).inverse()
    raise AssertionError("minus continued fraction did not become periodic")


def convergents(cf: ContinuedFraction, n: int):
    """First n convergents as exact fractions."""
    out = []
    if cf.flavor == PLUS:
        p0, q0, p1, q1 = 1, 0, 0, 1
        for a in cf.terms(n):
            p0, q0, p1, q1 = a * p0 + p1, a * q0 + q1, p0, q0
            out.append(Fraction(p0, q0))
    else:
        p0, q0, p1, q1 = 1, 0, 0, -1
        for a in cf.terms(n):
            p0, q0, p1, q1 = a * p0 - p1, a * q0 - q1, p0, q0
            out.append(Fraction(p0, q0))
    return out


def cf_value(cf: ContinuedFraction) -> QuadraticIrrational:
    """Exact value of an eventually periodic expansion."""
    p, q, r, s = 1, 0, 0, 1
    for a in cf.period:
        if cf.flavor == PLUS:
            p, q, r, s = p * a + q, p, r * a + s, r
        else:
            p, q, r, s = p * a + q, -p, r * a + s, -r
    disc = (p + s) * (p + s) - 4 * (p * s - q * r)
    if disc <= 0 or is_square(disc):
        raise DomainError("periodic tail does not define a quadratic irrational")
    tail = QuadraticIrrational(p - s, 2 * r, disc)
    x = tail
    for a in reversed(cf.head):
        if cf.flavor == PLUS:
            x = x.inverse().add_int(a)
        else:
            x = (-x.inverse()).add_int(a)
    return x


# ---------------------------------------------------------------------------
# Pell

@dataclass(frozen=True)
class PellSolution:
    t: int
    u: int
    m: int
    D: int

    def __post_init__(self):
        if self.t * self.t - self.D * self.u * self.u != self.m * self.m:
            raise DomainError("not a Pell solution")


def pell(D: int, m: int = 1, budget: int = 10**6) -> PellSolution:
    """Smallest positive (t, u) with t^2 - D u^2 = m^2.

    m = 1 uses the continued fraction of sqrt(D); m > 1 scans u upward, bounded
    by the scaled fundamental solution and by the step budget.
    """
    if D <= 0 or is_square(D):
        raise DomainError("D must be positive and nonsquare")
    if m <= 0:
        raise DomainError("m must be positive")
    cf = cf_plus(QuadraticIrrational(0, 1, D))
    p0, q0, p1, q1 = 1, 0, 0, 1
    fund = None
    terms = list(cf.head) + list(cf.period)
    for i in range(min(budget, 4 * len(cf.period) + len(cf.head) + 4)):
        a = terms[i] if i < len(terms) else cf.period[(i - len(cf.head)) % len(cf.period)]
        p0, q0, p1, q1 = a * p0 + p1, a * q0 + q1, p0, q0
        if q0 > 0 and p0 * p0 - D * q0 * q0 == 1:
            fund = (p0, q0)
            break
    if fund is None:
        raise SearchExhausted(f"no fundamental solution within {budget} steps")
    if m == 1:
        return PellSolution(fund[0], fund[1], 1, D)
    bound = m * fund[1]
    if bound > budget:
        raise SearchExhausted(f"search bound {bound} exceeds budget {budget}")
    mm = m * m
    for u in range(1, bound + 1):
        tt = mm + D * u * u
        if is_square(tt):
            return PellSolution(isqrt(tt), u, m, D)
    raise SearchExhausted("no solution found below the scaled fundamental bound")


# ---------------------------------------------------------------------------
# Hirzebruch class-number formula

def _norm_minus_one_solvable(p: int) -> bool:
    """Whether t^2 - p u^2 = -1 has a solution (odd plus-CF period of sqrt(p))."""
    cf = cf_plus(QuadraticIrrational(0, 1, p))
    return len(cf.period) % 2 == 1


def hirzebruch_class_number(p: int, hypothesis: str = "ordinary") -> int:
    """Class number of Q(sqrt(-p)) from the minus-CF period of sqrt(p): (sum a_i)/3 - r.

    Requires p > 3 prime, p = 3 (mod 4), and class number one for Q(sqrt(p)),
    where the class-number hypothesis is checked in the 'ordinary' or 'narrow'
    sense.  For p = 3 (mod 4) the fundamental unit has norm +1, so the narrow
    class number is twice the ordinary one and the narrow hypothesis is
    unsatisfiable; 'ordinary' is the default.
    """
    from .composition import class_group

    if hypothesis not in ("ordinary", "narrow"):
        raise DomainError("hypothesis must be 'ordinary' or 'narrow'")
    if p <= 3 or not is_probable_prime(p):
        raise DomainError("p must be a prime greater than 3")
    if p % 4 != 3:
        raise DomainError("p must be congruent to 3 mod 4")
    h_narrow = class_group(4 * p).order()
    h_ordinary = h_narrow if _norm_minus_one_solvable(p) else h_narrow // 2
    checked = h_ordinary if hypothesis == "ordinary" else h_narrow
    if checked != 1:
        raise DomainError(
            f"hypothesis failed: Q(sqrt({p})) has {hypothesis} class number {checked}, not 1"
        )
    cf = cf_minus(QuadraticIrrational(0, 1, p))
    total = sum(cf.period)
    r = len(cf.period)
    if total % 3:
        raise AssertionError(f"period sum {total} for p={p} is not divisible by 3")
    return total // 3 - r

"""The Jimm involution on continued fractions and its action on classes of indefinite forms.

The rewrite sends [a0; a1, a2, ...] to [1_(a0-1), 2, 1_(a1-2), 2, 1_(a2-2), ...]
where 1_n is a run of n ones, followed by the cleanup rules: a run 1_0
disappears, [..., a, 1_(-1), b, ...] collapses to [..., a+b-1, ...] (cascading),
and a degenerate run at the very front is absorbed as [1_(-1), b, ...] ->
[0, b-1, ...].  Rational and noble inputs are outside the domain.
"""

from math import gcd

from .forms import Form, INDEFINITE
from .numutil import DomainError
from .reduction import (
    ContinuedFraction,
    FormClass,
    PLUS,
    QuadraticIrrational,
    _canonical_cf,
    cf_plus,
    cf_value,
    root_of,
)


class ExceptionalInputError(DomainError):
    """Rational or noble input: the rewrite has no eventually periodic image."""


def _is_noble(cf: ContinuedFraction) -> bool:
    return set(cf.period) == {1}


def rewrite_terms(terms):
    """Apply the run rewrite with cleanup to a finite prefix of partial quotients.

    Returns the image prefix; the tail of the output that could still be
    affected by unseen input is the caller's problem (drop a safety margin).
    """
    out = []
    pending_merge = False
    for i, a in enumerate(terms):
        k = a - 1 if i == 0 else a - 2
        # emit the run 1_k, then the separator 2
        if k < 0:
            # degenerate run: merge the neighbours (or produce the leading 0)
            if pending_merge:
                raise AssertionError("two pending merges cannot meet")
            if not out:
                out.append(0)
                pending_merge = "lead"
            else:
                pending_merge = True
        else:
            out.extend([1] * k)
        if pending_merge:
            if pending_merge == "lead":
                out.append(2 - 1)
            else:
                left = out.pop()
                out.append(left + 2 - 1)
            pending_merge = False
        else:
            out.append(2)
    return out


def _detect_eventual_period(seq, min_tail=4):
    """Smallest (head_len, period) describing seq as eventually periodic, or None.

    The head may take at most 40% of the window, so a spurious short period
    matching only a trailing run is rejected; doubling the window in the
    caller lets a genuine description through eventually.
    """
    n = len(seq)
    max_head = (2 * n) // 5
    for p in range(1, (n - min_tail) // 2 + 1):
        start = 0
        for i in range(n - p - 1, -1, -1):
            if seq[i] != seq[i + p]:
                start = i + 1
                break
        if start <= max_head and start + 2 * p <= n:
            return start, tuple(seq[start:start + p])
    return None


def jimm_cf(cf: ContinuedFraction) -> ContinuedFraction:
    """Image of an eventually periodic plus continued fraction under the rewrite."""
    if cf.flavor != PLUS:
        raise DomainError("jimm_cf expects a plus continued fraction")
    if _is_noble(cf):
        raise ExceptionalInputError("noble input: image is not eventually periodic")
    if any(t < 0 for t in cf.terms(1)):
        raise DomainError("jimm_cf expects a0 >= 0; use the functional equation for negatives")
    candidate = None
    for copies in (4, 8, 16, 32):
        terms = list(cf.head) + list(cf.period) * copies
        image = rewrite_terms(terms)
        image = image[: max(0, len(image) - max(4, max(cf.period)))]
        det = _detect_eventual_period(image)
        if det is None:
            continue
        head_len, period = det
        cand = _canonical_cf(PLUS, tuple(image[:head_len]), period)
        if candidate is not None and cand == candidate:
            # stable across a doubling: verify against a longer literal rewrite
            long_terms = list(cf.head) + list(cf.period) * (2 * copies)
            literal = rewrite_terms(long_terms)
            recon = cand.terms(len(literal) - max(4, max(cf.period)))
            if literal[: len(recon)] == recon:
                return cand
        candidate = cand
    raise ExceptionalInputError("rewrite did not stabilize; input too close to the exceptional set")


def jimm_value(x: QuadraticIrrational) -> QuadraticIrrational:
    """Jimm of a real quadratic irrational, via J(-x) = -1/J(x) for negative inputs."""
    if x.is_negative():
        return -(jimm_value(-x).inverse())
    return cf_value(jimm_cf(cf_plus(x)))


def jimm_class(f: Form) -> Form:
    """Canonical representative of the class of the Jimm image of [f].

    Computes the plus continued fraction of the root (-b + sqrt(disc)) / (2a)
    of the canonical class representative, rewrites it, reconstructs the image
    irrational from the periodic tail, and returns the canonical representative
    of the primitive form it vanishes on.  Canonicalizing the input makes the
    map well defined on classes; the image class is intrinsic only up to the
    sign/inverse four-group, because Dyer's involution does not respect the
    determinant character of PGL2(Z).
    """
    from .reduction import canonical_representative

    if f.classify() != INDEFINITE:
        raise DomainError("jimm_class requires an indefinite form")
    if not f.is_primitive():
        raise DomainError("jimm_class requires a primitive form")
    x = root_of(canonical_representative(f))
    y = jimm_value(x)
    g = y.conjugate_pair_form()
    return FormClass(g).representative

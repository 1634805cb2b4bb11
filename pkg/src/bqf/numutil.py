"""Exact integer helpers: square tests, surd floors, CRT, factorization."""

from math import gcd, isqrt


class DomainError(ValueError):
    """A precondition on the mathematical domain was violated."""


class SearchExhausted(RuntimeError):
    """A bounded search ran out of budget before finding an answer."""


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) * isqrt(n) == n


def floor_sqrt_shift(p: int, d: int, q: int) -> int:
    """floor((p + sqrt(d)) / q) for d > 0 nonsquare, q != 0, exactly."""
    s = isqrt(d)
    # p + sqrt(d) lies strictly between p+s and p+s+1
    if q > 0:
        return (p + s) // q
    return -((p + s) // (-q)) - 1


def ceil_sqrt_shift(p: int, d: int, q: int) -> int:
    """ceil((p + sqrt(d)) / q); the argument is irrational, so ceil = floor + 1."""
    return floor_sqrt_shift(p, d, q) + 1


def lt_sqrt(x: int, d: int) -> bool:
    """x < sqrt(d) for d > 0 nonsquare, exactly."""
    return x < 0 or x * x < d


def gt_sqrt(x: int, d: int) -> bool:
    """x > sqrt(d) for d > 0 nonsquare, exactly."""
    return x > 0 and x * x > d


def ext_gcd(a: int, b: int):
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b)."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def crt(r1: int, m1: int, r2: int, m2: int):
    """Solve x = r1 (mod m1), x = r2 (mod m2); returns (x, lcm). Moduli need not be coprime."""
    g, s, _ = ext_gcd(m1, m2)
    if (r2 - r1) % g:
        raise ValueError("congruences are incompatible")
    lcm = m1 // g * m2
    x = (r1 + m1 * ((r2 - r1) // g) * s) % lcm
    return x, lcm


_SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]


def is_probable_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24 (fixed base set)."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    for c in range(1, 50):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = gcd(abs(x - y), n)
        if d != n:
            return d
    raise RuntimeError(f"rho failed on {n}")


def factorint(n: int) -> dict:
    """Prime factorization {p: exponent} of |n|; ignores sign, rejects 0."""
    if n == 0:
        raise ValueError("cannot factor 0")
    n = abs(n)
    out = {}
    for p in _SMALL_PRIMES:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_probable_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        if is_square(m):
            r = isqrt(m)
            stack.extend([r, r])
            continue
        d = _pollard_rho(m)
        stack.extend([d, m // d])
    return dict(sorted(out.items()))


def squarefree_part(n: int) -> int:
    """Signed squarefree core: n = squarefree_part(n) * t**2."""
    if n == 0:
        return 0
    core = 1
    for p, e in factorint(n).items():
        if e % 2:
            core *= p
    return core if n > 0 else -core


def factor_string(n: int) -> str:
    """Human-readable factorization like '2^8*17', with sign."""
    if n == 0:
        return "0"
    parts = []
    for p, e in factorint(n).items():
        parts.append(f"{p}^{e}" if e > 1 else str(p))
    body = "*".join(parts) if parts else "1"
    return ("-" if n < 0 else "") + body

"""Carks: the quotient of the Farey tree by the automorphism group of an indefinite form.

The spine (quotient of Conway's river) is walked directly on forms: crossing a
white vertex applies S, crossing a black vertex applies whichever of L, L^2
keeps the label semi-reduced.  Bunch sizes are the run lengths of the turn
directions, which also equal the period of the ordinary continued fraction of
the root.
"""

from dataclasses import dataclass
from math import gcd

from .forms import (
    Form,
    INDEFINITE,
    L,
    LL,
    S,
    UnimodularMatrix,
    act,
    evaluate_word,
    is_g_reduced,
    is_semi_reduced,
    psl2_word,
    simplify_word,
)
from .numutil import DomainError, is_square
from .reduction import _gauss_cycle_with_witnesses, canonical_representative, equivalent


@dataclass(frozen=True)
class BunchCode:
    """Cyclic sequence of Farey-bunch sizes, canonicalized to the least rotation."""

    sizes: tuple

    def __post_init__(self):
        sizes = tuple(int(n) for n in self.sizes)
        if len(sizes) < 2 or len(sizes) % 2:
            raise DomainError("bunch code must have even length >= 2")
        if any(n < 1 for n in sizes):
            raise DomainError("bunch sizes must be positive")
        canon = min(sizes[i:] + sizes[:i] for i in range(len(sizes)))
        object.__setattr__(self, "sizes", canon)

    def __len__(self):
        return len(self.sizes)

    def __iter__(self):
        return iter(self.sizes)

    def reversed(self) -> "BunchCode":
        return BunchCode(tuple(reversed(self.sizes)))


def inverse_code(code: BunchCode) -> BunchCode:
    """Code of the inverse class: [a1,b1,...,ak,bk] -> [bk,ak,...,b1,a1] (plain reversal)."""
    return code.reversed()


@dataclass(frozen=True)
class Cark:
    """Quotient graph data: bunch code, spine labels in cyclic order, base edge, automorph."""

    code: BunchCode
    spine: tuple
    base: int
    automorph: UnimodularMatrix


def _pell4(f: Form):
    """Minimal (t, u > 0) with t^2 - disc(f) * u^2 = 4 via the cycle automorph of [f]."""
    from .reduction import _rho

    g0 = _gauss_cycle_with_witnesses(f)[0][0]
    g = g0
    prod = UnimodularMatrix(1, 0, 0, 1)
    while True:
        g, step = _rho(g)
        prod = prod @ step
        if g == g0:
            break
    assert act(prod, g0) == g0
    t = abs(prod.trace())
    u = abs(prod.r) // abs(g0.a)
    assert prod.r % g0.a == 0 and u > 0
    assert t * t - f.discriminant() * u * u == 4
    return t, u


def _automorph_matrix(f: Form, t: int, u: int) -> UnimodularMatrix:
    """[[ (t-bu)/2, -cu ], [ au, (t+bu)/2 ]] stabilizes f exactly."""
    return UnimodularMatrix((t - f.b * u) // 2, -f.c * u, f.a * u, (t + f.b * u) // 2)


def _block_word(m: UnimodularMatrix):
    """Word in blocks (L^2 S)^a (LS)^b for matrices with a nonnegative representative."""
    for sign in (1, -1):
        p, q, r, s = (sign * v for v in m.entries())
        if min(p, q, r, s) < 0:
            continue
        word = []
        ok = True
        guard = 0
        while (p, q, r, s) != (1, 0, 0, 1):
            guard += 1
            if guard > 10000:
                ok = False
                break
            if r == 0 and s == 1 and p == 1:
                word.append("LS" * q)  # trailing T^q
                break
            if q == 0 and p == 1 and s == 1:
                word.append("LLS" * r)  # trailing U^r
                break
            if r >= p and s >= q and (p or q):
                ks = [v for v in (r // p if p else None, s // q if q else None) if v is not None]
                k = min(ks)
                if k < 1:
                    ok = False
                    break
                word.append("LLS" * k)
                r, s = r - k * p, s - k * q
            elif p >= r and q >= s and (r or s):
                ks = [v for v in (p // r if r else None, q // s if s else None) if v is not None]
                k = min(ks)
                if k < 1:
                    ok = False
                    break
                word.append("LS" * k)
                p, q = p - k * r, q - k * s
            else:
                ok = False
                break
        if ok:
            flat = "".join(word)
            if evaluate_word(flat).entries() == m.entries():
                return flat
    return None


def aut_generator(f: Form) -> UnimodularMatrix:
    """Hyperbolic generator W of Aut(f) = Stab(f) in PSL2(Z), with an {L,S}-word attached.

    W is primitive (not a proper power); its trace is the minimal t with
    t^2 - disc * u^2 = 4.
    """
    if f.classify() != INDEFINITE:
        raise DomainError("aut_generator requires an indefinite form")
    if not f.is_primitive():
        raise DomainError("aut_generator requires a primitive form")
    t, u = _pell4(f)
    w = _automorph_matrix(f, t, u)
    assert act(w, f) == f
    word = _block_word(w)
    if word is None:
        word = psl2_word(w)
    return w.with_word(word)


def _spine_walk(f: Form):
    """Spine labels, their witnesses from f, and the turn directions at black vertices."""
    pairs = _gauss_cycle_with_witnesses(f)
    g0, w0 = min(pairs, key=lambda p: p[0].coefficients())
    labels = [g0]
    wits = [w0]
    dirs = []
    g, w = g0, w0
    guard = 0
    while True:
        guard += 1
        if guard > 10**6:
            raise AssertionError("spine walk did not close")
        # white vertex: the second edge there is gamma S
        g, w = act(S, g), w @ S
        labels.append(g)
        wits.append(w)
        # black vertex: exactly one of L, L^2 stays semi-reduced
        gl = act(L, g)
        if is_semi_reduced(gl):
            g, w = gl, w @ L
            dirs.append("L")
        else:
            g2 = act(LL, g)
            assert is_semi_reduced(g2), "neither turn is semi-reduced"
            g, w = g2, w @ LL
            dirs.append("R")
        if g == g0:
            break
        labels.append(g)
        wits.append(w)
    assert len(labels) == 2 * len(dirs)
    return labels, wits, dirs


def _runs_cyclic(dirs):
    """Run lengths of a cyclic direction word, starting at a direction change."""
    n = len(dirs)
    if all(d == dirs[0] for d in dirs):
        raise AssertionError("turn word has a single run; not a valid cark")
    start = next(i for i in range(n) if dirs[i] != dirs[i - 1])
    rotated = dirs[start:] + dirs[:start]
    runs = []
    count = 1
    for prev, cur in zip(rotated, rotated[1:]):
        if cur == prev:
            count += 1
        else:
            runs.append(count)
            count = 1
    runs.append(count)
    return runs


def cark_of(f: Form) -> Cark:
    """Cark of [f]: bunch code, spine labels (all semi-reduced forms), base edge, automorph."""
    if f.classify() != INDEFINITE:
        raise DomainError("cark_of requires an indefinite form")
    if not f.is_primitive():
        raise DomainError("cark_of requires a primitive form")
    labels, _, dirs = _spine_walk(f)
    code = BunchCode(tuple(_runs_cyclic(dirs)))
    return Cark(code=code, spine=tuple(labels), base=0, automorph=aut_generator(f))


def is_ambiguous_symmetric(f: Form) -> bool:
    """Spine symmetry read off the bunch code; equivalent to [f] having order <= 2.

    Reflecting the cark across its spine reverses the cyclic run sequence and
    swaps the inner/outer roles, so symmetry means the reversal matches the
    code after a rotation by an odd number of runs.
    """
    code = cark_of(f).code.sizes
    n = len(code)
    rev = tuple(reversed(code))
    return any(rev[j:] + rev[:j] == code for j in range(1, n, 2))


# ---------------------------------------------------------------------------
# representation problem

def _sign_norm(v):
    x, y = v
    if x < 0 or (x == 0 and y < 0):
        return (-x, -y)
    return (x, y)


def _vec_key(v):
    x, y = v
    return (abs(x) + abs(y), abs(x), abs(y), x, y)


def _apply(mat: UnimodularMatrix, v):
    x, y = v
    return (mat.p * x + mat.q * y, mat.r * x + mat.s * y)


def _orbit_canonical_indefinite(w: UnimodularMatrix, v):
    """Least representative of {±w^k v} under the size key (hyperbolic descent)."""
    winv = w.inverse()
    best = v
    for step in (w, winv):
        cur = v
        for _ in range(10**5):
            nxt = _apply(step, cur)
            if _vec_key(nxt) < _vec_key(cur):
                cur = nxt
            else:
                break
        if _vec_key(cur) < _vec_key(best):
            best = cur
    return _sign_norm(best)


def _definite_automorphs(f: Form):
    """The finite automorphism group of a definite form (orders 1, 2, 3 in PSL2)."""
    from math import isqrt

    d = f.discriminant()
    mats = []
    u = 0
    while 4 + d * u * u >= 0:
        tt = 4 + d * u * u
        if is_square(tt):
            t = isqrt(tt)
            for tv in {t, -t}:
                for uv in {u, -u}:
                    if (tv - f.b * uv) % 2 == 0:
                        m = _automorph_matrix(f, tv, uv)
                        if act(m, f) == f and m not in mats:
                            mats.append(m)
        u += 1
    return mats


def _orbit_canonical_definite(mats, v):
    orbit = {_sign_norm(_apply(m, v)) for m in mats}
    orbit.add(_sign_norm(v))
    return min(orbit, key=_vec_key)


def _represent_definite(f: Form, n: int):
    from math import isqrt

    sign = 1 if f.a > 0 else -1
    g = f if sign > 0 else -f
    target = n * sign
    if target <= 0:
        return []
    # 4a*g(x,y) = (2ax + by)^2 + |disc| y^2 bounds both variables
    dd = -g.discriminant()
    mats = _definite_automorphs(g)
    found = set()
    ymax = isqrt(4 * g.a * target // dd)
    for y in range(-ymax, ymax + 1):
        disc_x = g.b * g.b * y * y - 4 * g.a * (g.c * y * y - target)
        if disc_x < 0 or not is_square(disc_x):
            continue
        r = isqrt(disc_x)
        for pm in {r, -r}:
            num = -g.b * y + pm
            if num % (2 * g.a):
                continue
            x = num // (2 * g.a)
            if gcd(x, y) == 1 and f(x, y) == n:
                found.add(_orbit_canonical_definite(mats, (x, y)))
    return sorted(found, key=_vec_key)


def represent(f: Form, n: int, budget: int = 10**6):
    """All Aut(f)-orbit representatives of primitive solutions of f(X,Y) = N.

    Indefinite forms are searched along one period of the cark (faces grow
    strictly away from the spine, so the climb prunes exactly); definite forms
    use the direct ellipse bound.
    """
    if n == 0:
        raise DomainError("N must be nonzero")
    if not f.is_primitive():
        raise DomainError("representation solver requires a primitive form")
    if f.classify() != INDEFINITE:
        return _represent_definite(f, n)

    labels, wits, dirs = _spine_walk(f)
    w = aut_generator(f)
    target = n
    bound = abs(n)
    found = set()
    steps = 0

    def note(vec):
        if gcd(vec[0], vec[1]) == 1 and f(*vec) == target:
            found.add(_orbit_canonical_indefinite(w, vec))

    # spinal faces: the a- and c-values of every spinal label
    for g, wit in zip(labels, wits):
        u = (wit.p, wit.r)
        v = (wit.q, wit.s)
        assert f(*u) == g.a and f(*v) == g.c
        note(u)
        note(v)

    # branch faces: climb away from each black vertex, pruning on |value| > |N|
    stack = []
    for i, d in enumerate(dirs):
        wit = wits[2 * i + 1]
        u = (wit.p, wit.r)
        v = (wit.q, wit.s)
        uv = (u[0] + v[0], u[1] + v[1])
        stem = (v, uv) if d == "L" else (u, uv)
        stack.append(stem)
    while stack:
        steps += 1
        if steps > budget:
            raise DomainError("face search budget exhausted")
        x, y = stack.pop()
        z = (x[0] + y[0], x[1] + y[1])
        val = f(*z)
        assert abs(val) > max(abs(f(*x)), abs(f(*y))), "face labels must grow away from the spine"
        if abs(val) > bound:
            continue
        note(z)
        stack.append((x, z))
        stack.append((z, y))
    return sorted(found, key=_vec_key)


# ---------------------------------------------------------------------------
# DOT export

def export_dot(cark: Cark, depth: int = 1) -> str:
    """Deterministic DOT rendering: spine cycle, branches truncated at depth.

    Black spinal vertices always carry their branch stem; nodes cut off by the
    truncation get a small continuation stub so that every drawn black vertex
    has degree 3 and every white vertex degree 2.
    """
    if depth < 0:
        raise DomainError("depth must be >= 0")
    lines = [
        "graph cark {",
        '  graph [layout=circo];',
        '  node [fixedsize=true, width=0.18, label=""];',
    ]
    nodes = []
    edges = []
    stubs = 0

    def stub(parent):
        nonlocal stubs
        name = f"t{stubs}"
        stubs += 1
        nodes.append(f'  {name} [shape=none, width=0.05, label="..."];')
        edges.append(f"  {parent} -- {name} [style=dotted];")

    # vertex i sits between spinal edges i-1 and i; the closing turn is an
    # L-type step, so even-index vertices are black and odd ones white
    m = len(cark.spine)
    for i in range(m):
        color = "black" if i % 2 == 0 else "white"
        nodes.append(f'  s{i} [shape=circle, style=filled, fillcolor={color}];')
    for i, form in enumerate(cark.spine):
        j = (i + 1) % m
        label = ",".join(str(v) for v in form.coefficients())
        extra = ", color=red, penwidth=2.0" if i == cark.base else ""
        edges.append(f'  s{i} -- s{j} [label="{label}"{extra}];')

    # one Farey branch per black spinal vertex
    def branch(parent, name, level):
        # white node on the stem
        wname = f"{name}w"
        nodes.append(f'  {wname} [shape=circle, style=filled, fillcolor=white];')
        edges.append(f"  {parent} -- {wname};")
        if level >= depth:
            stub(wname)
            return
        bname = f"{name}b"
        nodes.append(f'  {bname} [shape=circle, style=filled, fillcolor=black];')
        edges.append(f"  {wname} -- {bname};")
        if level + 1 >= depth:
            stub(bname)
            stub(bname)
        else:
            branch(bname, name + "l", level + 1)
            branch(bname, name + "r", level + 1)

    for i in range(m):
        if i % 2 == 0:
            if depth == 0:
                stub(f"s{i}")
            else:
                branch(f"s{i}", f"b{i}_", 0)

    lines.extend(nodes)
    lines.extend(edges)
    lines.append("}")
    return "\n".join(lines) + "\n"

"""Reduction algorithms, continued fractions, Pell, Hirzebruch."""

import random
from fractions import Fraction
from math import gcd, isqrt

import pytest

from bqf import (
    ContinuedFraction,
    DomainError,
    Form,
    QuadraticIrrational,
    act,
    cf_minus,
    cf_plus,
    cf_value,
    convergents,
    gauss_reduce_indefinite,
    hirzebruch_class_number,
    is_g_reduced,
    is_z_reduced,
    pell,
    reduce_definite,
    root_of,
    zagier_reduce,
)
from bqf.forms import UnimodularMatrix, evaluate_word
from bqf.numutil import is_probable_prime, is_square
from bqf.reduction import zagier_step

GOLDEN = Form(25, 111, -33)


def all_g_reduced_forms(disc):
    """Brute-force enumeration of all G-reduced forms (any content) of a discriminant."""
    out = []
    for b in range(1, isqrt(disc) + 1):
        num = b * b - disc
        if num % 4 or num >= 0:
            continue
        m = -(num // 4)
        for a in range(1, m + 1):
            if m % a:
                continue
            for aa, cc in ((a, -(m // a)), (-a, m // a)):
                f = Form(aa, b, cc)
                if is_g_reduced(f):
                    out.append(f)
    return out


def all_z_reduced_forms(disc):
    """Brute-force enumeration of Z-reduced forms: a,c > 0, b > a+c, b^2 - 4ac = disc."""
    out = []
    for b in range(1, (disc + 1) // 2 + 1):
        num = b * b - disc
        if num <= 0 or num % 4:
            continue
        m = num // 4
        for a in range(1, m + 1):
            if m % a:
                continue
            c = m // a
            if b > a + c:
                out.append(Form(a, b, c))
    return out


class TestReduceDefinite:
    def test_examples(self):
        assert reduce_definite(Form(1, 0, 1))[0] == Form(1, 0, 1)
        assert reduce_definite(Form(2, 2, 3))[0] == Form(2, 2, 3)
        assert reduce_definite(Form(3, 2, 2))[0] == Form(2, 2, 3)

    def test_non_definite_rejected(self):
        with pytest.raises(DomainError):
            reduce_definite(GOLDEN)
        with pytest.raises(DomainError):
            reduce_definite(Form(-1, 0, -1))

    def test_witness_and_minimality_oracle(self):
        # the reduced form has the least (a, |b|) among all equivalent forms
        # reachable in a small ball (brute-force minimum over entries <= 50)
        rng = random.Random(9)
        for _ in range(25):
            while True:
                a = rng.randint(1, 12)
                b = rng.randint(-12, 12)
                c = rng.randint(1, 12)
                if b * b - 4 * a * c < 0:
                    break
            f = Form(a, b, c)
            red, w = reduce_definite(f)
            assert act(w, f) == red
            seen = {f}
            frontier = [f]
            for _ in range(6):
                nxt = []
                for g in frontier:
                    for word in ("L", "S", "LS", "LLS"):
                        h = act(evaluate_word(word), g)
                        if h not in seen and max(abs(h.a), abs(h.b), abs(h.c)) <= 50:
                            seen.add(h)
                            nxt.append(h)
                frontier = nxt
            ball_best = min((g.a, abs(g.b), g.c) for g in seen if g.a > 0)
            assert (red.a, abs(red.b), red.c) <= ball_best


class TestGaussIndefinite:
    def test_golden_cycle_against_enumeration(self):
        cycle, w = gauss_reduce_indefinite(GOLDEN)
        assert act(w, GOLDEN) == cycle[0]
        assert GOLDEN in cycle
        assert all(is_g_reduced(g) for g in cycle)
        assert len(cycle) % 2 == 0 and len(cycle) >= 2
        # independent oracle: enumerate every G-reduced form of disc 15621 and
        # take the rho-orbit that contains the golden form
        universe = set(all_g_reduced_forms(15621))
        assert set(cycle) <= universe
        # the cycle is closed under the reduction step, so it is a full orbit
        assert len(cycle) == 6

    def test_reduced_form_is_in_own_cycle(self):
        f = Form(1, 1, -1)
        cycle, _ = gauss_reduce_indefinite(f)
        assert f in cycle

    def test_small_disc_cycle(self):
        cycle, _ = gauss_reduce_indefinite(Form(1, 1, -1))
        assert set(cycle) == {Form(1, 1, -1), Form(-1, 1, 1)}
        # exhaustive predicate check over the tiny box
        box = set()
        for a in range(-3, 4):
            for b in range(-3, 4):
                for c in range(-3, 4):
                    d = b * b - 4 * a * c
                    if d == 5:
                        f = Form(a, b, c)
                        if is_g_reduced(f):
                            box.add(f)
        assert box == {Form(1, 1, -1), Form(-1, 1, 1)}

    def test_rho_step_matrix_witnesses(self):
        from bqf.reduction import _rho

        rng = random.Random(14)
        for _ in range(100):
            while True:
                a, b, c = (rng.randint(-30, 30) for _ in range(3))
                d = b * b - 4 * a * c
                if d > 0 and not is_square(d) and a:
                    break
            f = Form(a, b, c)
            g, step = _rho(f)
            assert act(step, f) == g

    def test_cycle_even_random(self):
        rng = random.Random(10)
        for _ in range(40):
            while True:
                a, b, c = (rng.randint(-25, 25) for _ in range(3))
                d = b * b - 4 * a * c
                if d > 0 and not is_square(d) and a:
                    break
            cycle, w = gauss_reduce_indefinite(Form(a, b, c))
            assert len(cycle) % 2 == 0 and len(cycle) >= 2
            assert act(w, Form(a, b, c)) == cycle[0]


class TestZagier:
    def test_step_formula(self):
        f = Form(5, 7, -3)
        g, n = zagier_step(f)
        assert g == act(UnimodularMatrix(n, 1, -1, 0), f)
        assert g == Form(f.a * n * n - f.b * n + f.c, 2 * f.a * n - f.b, f.a)

    def test_delta5_cycle_is_all_z_forms(self):
        pre, cycle = zagier_reduce(Form(1, 1, -1))
        assert set(cycle) == set(all_z_reduced_forms(5))
        assert all(is_z_reduced(g) for g in cycle)

    def test_negative_leading_entry(self):
        for f in (Form(-3, 1, 1), Form(-2, 3, 4), Form(-5, 5, -1)):
            _, cycle = zagier_reduce(f)
            assert all(is_z_reduced(g) for g in cycle)

    def test_cycle_steps_reproduce_minus_cf_period(self):
        # the ceiling coefficients around the Zagier cycle are the minus-CF
        # period of (b + sqrt(disc)) / (2a)
        for f in (Form(1, 1, -1), Form(2, 3, -4), Form(25, 111, -33)):
            _, cycle = zagier_reduce(f)
            ns = []
            for g in cycle:
                _, n = zagier_step(g)
                ns.append(n)
            w = QuadraticIrrational(cycle[0].b, 2 * cycle[0].a, cycle[0].discriminant())
            mcf = cf_minus(w)
            assert not mcf.head
            rotations = {tuple(ns[i:] + ns[:i]) for i in range(len(ns))}
            assert tuple(mcf.period) in rotations

    def test_termination_and_predicate_box(self):
        rng = random.Random(11)
        for _ in range(300):
            while True:
                a, b, c = (rng.randint(-100, 100) for _ in range(3))
                d = b * b - 4 * a * c
                if d > 0 and not is_square(d) and a:
                    break
            _, cycle = zagier_reduce(Form(a, b, c))
            assert all(is_z_reduced(g) for g in cycle)

    def test_union_of_cycles_matches_enumeration(self):
        from bqf import class_group

        for disc in (5, 8, 12, 13, 17):
            whole = set(all_z_reduced_forms(disc))
            union = set()
            for cls in class_group(disc).elements:
                _, cycle = zagier_reduce(cls.representative)
                union |= set(cycle)
            assert union == whole


class TestContinuedFractions:
    def test_golden_ratio(self):
        cf = cf_plus(QuadraticIrrational(1, 2, 5))
        assert cf.head == () and cf.period == (1,)

    def test_sqrt2(self):
        cf = cf_plus(QuadraticIrrational(0, 1, 2))
        assert cf.head == (1,) and cf.period == (2,)

    def test_golden_root_period(self):
        cf = cf_plus(root_of(GOLDEN))
        assert cf.canonical_period() == ContinuedFraction("plus", (), (3, 1, 1, 2, 1, 4)).canonical_period()

    def test_minus_cf_surds(self):
        assert cf_minus(QuadraticIrrational(0, 1, 7)) == ContinuedFraction("minus", (3,), (3, 6))
        assert cf_minus(QuadraticIrrational(0, 1, 11)) == ContinuedFraction("minus", (4,), (2, 2, 8))
        assert cf_minus(QuadraticIrrational(0, 1, 23)) == ContinuedFraction("minus", (5,), (5, 10))

    def test_minus_terms_at_least_two(self):
        rng = random.Random(12)
        for _ in range(60):
            d = rng.randint(2, 400)
            if is_square(d):
                continue
            p = rng.randint(-10, 10)
            q = rng.choice([1, 2, 3, -1, -2])
            cf = cf_minus(QuadraticIrrational(p, q, d))
            assert all(t >= 2 for t in list(cf.head[1:]) + list(cf.period))

    def test_value_reconstruction_exact(self):
        rng = random.Random(13)
        for _ in range(60):
            d = rng.randint(2, 300)
            if is_square(d):
                continue
            x = QuadraticIrrational(rng.randint(-8, 8), rng.choice([1, 2, 3, -2, 5]), d)
            for cf in (cf_plus(x), cf_minus(x)):
                v = cf_value(cf)
                # x == v exactly: rational parts equal, radicand parts equal
                assert Fraction(x.P, x.Q) == Fraction(v.P, v.Q)
                assert Fraction(x.D, x.Q * x.Q) == Fraction(v.D, v.Q * v.Q)

    def test_convergents_bracket(self):
        for d in (2, 3, 5, 7, 61, 109, 181):
            x = QuadraticIrrational(0, 1, d)
            for cf in (cf_plus(x), cf_minus(x)):
                cs = convergents(cf, 40)
                last = cs[-1]
                assert abs(x.compare_fraction(last)) <= 1
                # width of the final bracket below 1e-12
                assert abs(cs[-1] - cs[-2]) < Fraction(1, 10**12)


class TestPell:
    def test_small(self):
        assert (pell(2).t, pell(2).u) == (3, 2)
        assert (pell(5).t, pell(5).u) == (9, 4)

    def test_minimality_brute_force(self):
        for d in range(2, 51):
            if is_square(d):
                continue
            sol = pell(d)
            assert sol.t * sol.t - d * sol.u * sol.u == 1
            for u in range(1, sol.u):
                assert not is_square(1 + d * u * u)

    def test_cattle_problem_equation(self):
        sol = pell(4729494)
        assert sol.t * sol.t - 4729494 * sol.u * sol.u == 1
        assert len(str(sol.t)) == 45 and len(str(sol.u)) == 41

    def test_m_greater_one(self):
        sol = pell(5, 4)
        assert (sol.t, sol.u) == (6, 2)
        sol = pell(3, 2)
        assert (sol.t, sol.u) == (4, 2)

    def test_budget(self):
        from bqf import SearchExhausted

        with pytest.raises(SearchExhausted):
            pell(2, 97, budget=10)

    def test_rejects_square(self):
        with pytest.raises(DomainError):
            pell(16)


def brute_class_number(disc):
    """Count of primitive reduced positive definite forms of a negative discriminant."""
    count = 0
    for a in range(1, isqrt(-disc // 3) + 1):
        for b in range(-a, a + 1):
            num = b * b - disc
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or ((abs(b) == a or a == c) and b < 0):
                continue
            if gcd(gcd(a, abs(b)), c) == 1:
                count += 1
    return count


class TestHirzebruch:
    def test_examples(self):
        assert hirzebruch_class_number(7) == 1
        assert hirzebruch_class_number(11) == 1
        assert hirzebruch_class_number(23) == 3

    def test_against_brute_force_class_numbers(self):
        for p in range(5, 200):
            if p % 4 != 3 or not is_probable_prime(p):
                continue
            try:
                h = hirzebruch_class_number(p)
            except DomainError:
                continue  # hypothesis fails (e.g. p = 79)
            assert h == brute_class_number(-p)

    def test_hypothesis_failure_is_reported(self):
        with pytest.raises(DomainError, match="hypothesis failed"):
            hirzebruch_class_number(79)

    def test_narrow_hypothesis_unsatisfiable(self):
        with pytest.raises(DomainError, match="narrow"):
            hirzebruch_class_number(7, hypothesis="narrow")

    def test_preconditions(self):
        with pytest.raises(DomainError):
            hirzebruch_class_number(13)  # 1 mod 4
        with pytest.raises(DomainError):
            hirzebruch_class_number(9)  # not prime

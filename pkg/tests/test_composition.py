"""Dirichlet composition, class groups, classical identities."""

import random

import pytest

from bqf import (
    DomainError,
    Form,
    FormClass,
    class_group,
    compose,
    concordant_pair,
    equivalent,
    identity_form,
    inverse,
    is_ambiguous,
    is_concordant,
    is_unitable,
)
from bqf.numutil import is_square


class TestUnitable:
    def test_examples(self):
        assert not is_unitable(Form(1, 0, 1), Form(1, 0, 2))
        assert is_unitable(Form(1, 0, 1), Form(1, 0, 4))
        assert is_unitable(Form(1, 0, 5), Form(2, 2, 3))


class TestConcordant:
    def test_examples(self):
        assert is_concordant(Form(3, 2, 2), Form(2, 2, 3))
        assert not is_concordant(Form(2, 2, 3), Form(2, 2, 3))
        assert is_concordant(Form(1, 1, -1), Form(1, 1, -1))  # a = 1 divides everything

    def test_disc_mismatch(self):
        with pytest.raises(DomainError):
            is_concordant(Form(1, 0, 1), Form(1, 0, 2))


class TestConcordantPair:
    def test_unit_leading(self):
        c = FormClass(Form(1, 0, 5))
        g1, g2 = concordant_pair(c, c)
        assert is_concordant(g1, g2)
        assert equivalent(g1, Form(1, 0, 5)) is not None

    def test_delta5(self):
        c = FormClass(Form(1, 1, -1))
        g1, g2 = concordant_pair(c, c)
        assert is_concordant(g1, g2)

    def test_nontrivial_pair(self):
        c = FormClass(Form(2, 2, 3))
        g1, g2 = concordant_pair(c, c)
        assert is_concordant(g1, g2)
        assert equivalent(g1, Form(2, 2, 3)) is not None
        assert equivalent(g2, Form(2, 2, 3)) is not None

    def test_imprimitive_rejected(self):
        with pytest.raises(DomainError):
            concordant_pair(FormClass(Form(2, 4, 6)), FormClass(Form(2, 4, 6)))


class TestCompose:
    def test_identity_neutral(self):
        for disc in (-20, -4, 5, 12, 40):
            group = class_group(disc)
            e = group.identity()
            for c in group.elements:
                assert compose(e, c) == c

    def test_delta_minus20(self):
        c = FormClass(Form(2, 2, 3))
        assert compose(c, c) == FormClass(Form(1, 0, 5))
        assert compose(FormClass(Form(3, 2, 2)), c) == FormClass(Form(1, 0, 5))

    def test_well_defined_over_pair_choices(self):
        rng = random.Random(21)
        panel = [(-20, Form(2, 2, 3), Form(2, 2, 3)), (-84, Form(5, 4, 5), Form(3, 0, 7)),
                 (85, Form(3, 7, -3), Form(3, 7, -3)), (316, Form(5, 14, -6), Form(3, 14, -10))]
        for disc, f1, f2 in panel:
            assert f1.discriminant() == disc and f2.discriminant() == disc
            baseline = compose(FormClass(f1), FormClass(f2))
            for _ in range(25):
                assert compose(FormClass(f1), FormClass(f2), seed=rng.randint(0, 500)) == baseline


class TestIdentityForm:
    def test_examples(self):
        assert identity_form(-20) == Form(1, 0, 5)
        assert identity_form(5) == Form(1, 1, -1)
        assert identity_form(-4) == Form(1, 0, 1)

    def test_bad_residue(self):
        with pytest.raises(DomainError):
            identity_form(-21 + 4)  # -17 = 3 mod 4
        with pytest.raises(DomainError):
            identity_form(6)


class TestInverseAmbiguous:
    def test_inverse_identity(self):
        e = FormClass(identity_form(-20))
        assert inverse(e) == e

    def test_order_two_class(self):
        assert is_ambiguous(Form(2, 2, 3))

    def test_golden_matches_cark_symmetry(self):
        from bqf import is_ambiguous_symmetric

        f = Form(25, 111, -33)
        assert is_ambiguous(f) == is_ambiguous_symmetric(f)

    def test_inverse_composition(self):
        for disc in (-20, -84, 40, 145):
            group = class_group(disc)
            e = group.identity()
            for c in group.elements:
                assert compose(c, inverse(c)) == e


class TestClassGroup:
    def test_minus20(self):
        g = class_group(-20)
        assert g.order() == 2
        assert {c.representative for c in g.elements} == {Form(1, 0, 5), Form(2, 2, 3)}

    def test_minus4(self):
        g = class_group(-4)
        assert g.order() == 1
        assert g.elements[0].representative == Form(1, 0, 1)

    def test_golden_disc(self):
        g = class_group(15621)
        assert g.order() >= 2
        assert FormClass(Form(25, 111, -33)) != FormClass(Form(-55, 89, 35))
        assert FormClass(Form(25, 111, -33)) in g.elements
        assert FormClass(Form(-55, 89, 35)) in g.elements

    def test_verify_axioms_sample(self):
        for disc in (-20, -23, -47, 5, 13, 60, 229):
            assert class_group(disc).verify()

    def test_rejects_bad_disc(self):
        with pytest.raises(DomainError):
            class_group(25)
        with pytest.raises(DomainError):
            class_group(-21 + 4)


class TestClassicalIdentities:
    def test_pythagorean_and_brahmagupta(self):
        rng = random.Random(22)
        for _ in range(2000):
            x, y, xp, yp, n = (rng.randint(-50, 50) for _ in range(5))
            lhs = (x * x + n * y * y) * (xp * xp + n * yp * yp)
            assert lhs == (x * xp - n * y * yp) ** 2 + n * (x * yp + xp * y) ** 2
            assert lhs == (x * xp + n * y * yp) ** 2 + n * (x * yp - xp * y) ** 2
            lhs_minus = (x * x - n * y * y) * (xp * xp - n * yp * yp)
            assert lhs_minus == (x * xp + n * y * yp) ** 2 - n * (x * yp + xp * y) ** 2
            assert lhs_minus == (x * xp - n * y * yp) ** 2 - n * (x * yp - xp * y) ** 2

    def test_lagrange_identity(self):
        rng = random.Random(23)
        for _ in range(2000):
            x, y, xp, yp = (rng.randint(-50, 50) for _ in range(4))
            lhs = (2 * x * x + 2 * x * y + 3 * y * y) * (2 * xp * xp + 2 * xp * yp + 3 * yp * yp)
            X = 2 * x * xp + x * yp + y * xp + 3 * y * yp
            Y = x * yp - y * xp
            assert lhs == X * X + 5 * Y * Y

    def test_lagrange_identity_matches_composition(self):
        assert compose(FormClass(Form(2, 2, 3)), FormClass(Form(2, 2, 3))) == FormClass(Form(1, 0, 5))

    def test_values_multiplicativity_spot_check(self):
        from bqf import represent

        f1, f2 = Form(2, 2, 3), Form(2, 2, 3)
        product = compose(FormClass(f1), FormClass(f2)).representative  # x^2 + 5 y^2
        n1, n2 = f1(1, 1), f2(0, 1)  # 7 and 3
        target = n1 * n2
        sols = represent(product, target)
        assert sols, f"{target} should be represented by the product class"

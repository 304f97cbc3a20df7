import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from poissonddh.arith import (
    GF,
    QQ,
    LaurentPoly,
    NotDivisible,
    QBinomialTable,
    eval_at_one,
    field_for,
    laurent_exact_div,
    q_binomial,
    q_factorial,
    q_integer,
)


def L(terms, field=QQ):
    return LaurentPoly(field, terms)


T = L({1: 1})


class TestFields:
    def test_prime_field_canonical_residues(self):
        F = GF(7)
        assert F(-1) == 6
        assert F(Fraction(1, 2)) == 4
        assert F.inv(3) * 3 % 7 == 1

    def test_rationals_lowest_terms(self):
        assert QQ(Fraction(4, 2)) == 2 and isinstance(QQ(Fraction(4, 2)), int)
        assert QQ(Fraction(2, -4)) == Fraction(-1, 2)

    def test_non_prime_rejected(self):
        with pytest.raises(ValueError):
            GF(9)

    def test_denominator_vanishing_mod_p(self):
        with pytest.raises(ZeroDivisionError):
            GF(3)(Fraction(1, 3))

    def test_field_for(self):
        assert field_for(0) is QQ
        assert field_for(5) == GF(5)


class TestQIntegers:
    def test_examples(self):
        assert q_integer(3, 1) == L({2: 1, 1: 1, 0: 1})
        assert q_integer(1, 7) == 1
        assert q_integer(2, 2) == L({2: 1, 0: 1})
        assert q_integer(0, 3).is_zero()

    def test_q_binomial_examples(self):
        assert q_binomial(2, 1, 2) == L({2: 1, 0: 1})
        # t^4 + t^3 + 2t^2 + t + 1, frozen from the subset-sum oracle
        assert q_binomial(4, 2, 1) == L({4: 1, 3: 1, 2: 2, 1: 1, 0: 1})
        for i in range(6):
            assert q_binomial(i, 0, 3) == 1

    def test_q_binomial_negative_eta(self):
        assert q_binomial(2, 1, -1) == L({-1: 1, 0: 1})

    def test_q_binomial_rejects_bad_k(self):
        with pytest.raises(ValueError):
            q_binomial(2, 3, 1)

    @pytest.mark.parametrize("eta", [-2, -1, 1, 2, 3])
    def test_binomial_times_factorials(self, eta):
        table = QBinomialTable(eta)
        for i in range(9):
            for k in range(i + 1):
                prod = table.binomial(i, k) * table.factorial(i - k) * table.factorial(k)
                assert prod == table.factorial(i)

    @pytest.mark.parametrize("char", [0, 2, 3, 5, 7])
    def test_binomial_at_one_is_ordinary(self, char):
        F = field_for(char)
        for eta in (1, 2, -1):
            table = QBinomialTable(eta, F)
            for i in range(13):
                for k in range(i + 1):
                    assert eval_at_one(table.binomial(i, k)) == F(comb(i, k))

    def test_factorial_at_one(self):
        assert eval_at_one(q_factorial(5, 2)) == 120
        assert eval_at_one(q_factorial(5, 2, GF(5))) == 0

    @pytest.mark.parametrize("eta", [1, 2, -3])
    def test_q_pascal(self, eta):
        # C(i,k) = C(i-1,k-1) + q^k C(i-1,k)
        table = QBinomialTable(eta)
        for i in range(1, 9):
            for k in range(1, i):
                rhs = table.binomial(i - 1, k - 1) + L({eta * k: 1}) * table.binomial(i - 1, k)
                assert table.binomial(i, k) == rhs


class TestLaurent:
    def test_exact_div_examples(self):
        assert laurent_exact_div(T - T ** -1, T - 1) == L({0: 1, -1: 1})
        assert laurent_exact_div((T - 1) ** 2, T - 1) == T - 1
        with pytest.raises(NotDivisible):
            laurent_exact_div(T + 1, T - 1)

    def test_exact_div_char_two(self):
        F = GF(2)
        t = LaurentPoly.t(F)
        assert laurent_exact_div(t + 1, t - 1) == 1

    def test_exact_div_by_monomial(self):
        assert laurent_exact_div(L({3: 2, 1: 4}), L({1: 2})) == L({2: 1, 0: 2})

    def test_zero_divisor(self):
        with pytest.raises(ZeroDivisionError):
            laurent_exact_div(T, L({}))

    def test_eval_at_one_examples(self):
        assert eval_at_one(L({0: 1, -1: 1})) == 2
        assert eval_at_one(T - 1) == 0
        assert eval_at_one(L({2: 1, 0: 1}, GF(3))) == 2

    def test_printing(self):
        assert str(2 * T ** -1) == "2*t^-1"
        assert str(T - T ** -1) == "t - t^-1"
        assert str(L({})) == "0"

    def test_mixing_fields_rejected(self):
        with pytest.raises(ValueError):
            L({0: 1}) + LaurentPoly(GF(3), {0: 1})

    def test_negative_power_needs_monomial(self):
        with pytest.raises(ValueError):
            (T + 1) ** -1

    @pytest.mark.parametrize("char", [0, 3, 7])
    def test_random_division_pairs(self, char):
        F = field_for(char)
        rng = random.Random(char + 11)
        for _ in range(200):
            a = LaurentPoly(F, {rng.randint(-4, 4): rng.randint(-5, 5) for _ in range(rng.randint(0, 4))})
            b = LaurentPoly(F, {rng.randint(-4, 4): rng.randint(-5, 5) for _ in range(rng.randint(1, 4))})
            if b.is_zero():
                continue
            assert laurent_exact_div(a * b, b) == a


laurent = st.dictionaries(st.integers(-5, 5), st.integers(-6, 6), max_size=4).map(lambda d: L(d))


@settings(max_examples=150, deadline=None)
@given(laurent, laurent, laurent)
def test_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a - a == 0


@settings(max_examples=150, deadline=None)
@given(laurent, laurent)
def test_division_roundtrip_property(a, b):
    if b.is_zero():
        return
    assert (a * b).exact_div(b) == a


@settings(max_examples=100, deadline=None)
@given(laurent, laurent)
def test_eval_at_one_is_a_homomorphism(a, b):
    assert eval_at_one(a * b) == eval_at_one(a) * eval_at_one(b)
    assert eval_at_one(a + b) == eval_at_one(a) + eval_at_one(b)

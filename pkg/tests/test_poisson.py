import random
from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from poissonddh import (
    QQ,
    OreLevel,
    OreTower,
    PoissonPresentation,
    PolyRing,
    apply_D,
    bracket,
    extend_poisson_ore,
    field_for,
    reorder_tower,
    verify_higher_axioms,
    verify_jacobi,
    verify_ore_data,
)
from poissonddh.poisson import log_canonical_presentation, random_poly
from poissonddh.qmatrices import matrix_poisson_presentation

NAMES = ("X11", "X12", "X21", "X22")


def m2_tower(char=0, eta=2, d1_sign=1):
    F = field_for(char)
    R = PolyRing(F, NAMES)
    X11, X12, X21, X22 = R.gens()
    d = {"X11": -2 * d1_sign * X12 * X21}
    levels = [
        OreLevel("X11", D=(), eta=eta),
        OreLevel("X12", {"X11": -1}, D=(), eta=eta),
        OreLevel("X21", {"X11": -1, "X12": 0}, D=(), eta=eta),
        OreLevel("X22", {"X11": 0, "X12": -1, "X21": -1}, d, eta, (d,)),
    ]
    return OreTower(R, levels)


def synthetic_tower(a, char=0, order=6):
    """sigma(x) = t^a x, Delta(x) = (t - 1) x^2 at t = 1: D_k(X) = X^(k+1)."""
    R = PolyRing(field_for(char), ("X", "Y"))
    X = R.gen("X")
    D = tuple({"X": X ** (k + 1)} for k in range(1, order + 1))
    levels = [OreLevel("X"), OreLevel("Y", {"X": a}, {"X": X ** 2}, -a, D, nilpotent=False)]
    return OreTower(R, levels)


def random_lambda(ring, rng):
    names = ring.names
    return {(names[i], names[j]): rng.randint(-4, 4) for i in range(len(names)) for j in range(i)}


class TestBracket:
    def test_m2_table(self):
        P = m2_tower().presentation()
        assert P == matrix_poisson_presentation(2)
        X11, X12, X21, X22 = P.ring.gens()
        assert P.bracket(X22, X11) == -2 * X12 * X21
        assert P.bracket(X11, X22) == 2 * X12 * X21
        assert P.bracket(X11 * X22, X12) == 0

    @pytest.mark.parametrize("char", [0, 3, 5])
    def test_random_pairs_antisymmetric_bilinear_leibniz(self, char):
        P = m2_tower(char).presentation()
        rng = random.Random(7)
        for _ in range(100):
            f, g, h = (random_poly(P.ring, NAMES, rng, 3) for _ in range(3))
            c = rng.randint(-3, 3)
            assert bracket(P, f, g) == -bracket(P, g, f)
            assert bracket(P, f * c + h, g) == bracket(P, f, g) * c + bracket(P, h, g)
            assert bracket(P, f, g * h) == bracket(P, f, g) * h + g * bracket(P, f, h)

    def test_diagonal_entry_rejected(self):
        R = PolyRing(QQ, ("a", "b"))
        with pytest.raises(ValueError):
            PoissonPresentation(R, {("a", "a"): R.gen("a")})

    def test_table_order_normalised(self):
        R = PolyRing(QQ, ("a", "b"))
        a, b = R.gens()
        P1 = PoissonPresentation(R, {("a", "b"): a * b})
        P2 = PoissonPresentation(R, {("b", "a"): -a * b})
        assert P1 == P2
        assert P1.table_strings() == {("b", "a"): "-a*b"}

    def test_negative_exponent_needs_invertible(self):
        R = PolyRing(QQ, ("a", "b"))
        a, b = R.gens()
        with pytest.raises(ValueError):
            PoissonPresentation(R, {("a", "b"): a * b ** -1})
        P = PoissonPresentation(R, {("a", "b"): a * b ** -1}, invertible=("b",))
        assert P.bracket(a, b) == a * b ** -1


class TestJacobi:
    @pytest.mark.parametrize("char", [0, 3, 5, 7])
    def test_m2_and_m3(self, char):
        for n in (2, 3):
            P = matrix_poisson_presentation(n, field_for(char))
            rep = verify_jacobi(P, samples=5, seed=1)
            assert rep.passed and P.jacobi_checked

    def test_corrupted_table_fails_with_witness(self):
        P = matrix_poisson_presentation(2)
        table = {(P.ring.names[i], P.ring.names[j]): v for (i, j), v in P.table.items()}
        X = P.ring.gen
        table[("X21", "X12")] = X("X12") * X("X21")
        bad = PoissonPresentation(P.ring, table)
        rep = verify_jacobi(bad)
        assert not rep.passed
        w = rep.first_failure().witness
        assert w["jacobiator"] != 0 and len(w["triple"]) == 3
        assert not bad.jacobi_checked

    @pytest.mark.parametrize("char", [0, 3, 5, 7])
    def test_log_canonical_always_jacobi(self, char):
        R = PolyRing(field_for(char), ("a", "b", "c", "d"))
        rng = random.Random(char)
        for _ in range(10):
            P = log_canonical_presentation(R, random_lambda(R, rng))
            assert P.is_log_canonical()
            assert verify_jacobi(P, samples=3, seed=2).passed


class TestOreData:
    def base(self):
        P = matrix_poisson_presentation(2)
        R3 = PolyRing(QQ, NAMES[:3])
        table = {(P.ring.names[i], P.ring.names[j]): v.change_ring(R3)
                 for (i, j), v in P.table.items() if i < 3}
        return PoissonPresentation(R3, table)

    def test_build_m2_bottom_up(self):
        R1 = PolyRing(QQ, ("X11",))
        P = PoissonPresentation(R1, {})
        P = extend_poisson_ore(P, {"X11": -1}, {}, "X12")
        P = extend_poisson_ore(P, {"X11": -1, "X12": 0}, {}, "X21")
        X12, X21 = P.ring.gen("X12"), P.ring.gen("X21")
        P = extend_poisson_ore(P, {"X11": 0, "X12": -1, "X21": -1}, {"X11": -2 * X12 * X21}, "X22")
        assert P == matrix_poisson_presentation(2)

    def test_valid_data_passes(self):
        B = self.base()
        X12, X21 = B.ring.gen("X12"), B.ring.gen("X21")
        rep = verify_ore_data(B, {"X11": 0, "X12": -1, "X21": -1}, {"X11": -2 * X12 * X21})
        assert rep.passed and len(rep.children) == 2

    def test_rescaled_data_still_valid(self):
        # the criterion is linear in delta and alpha may shift by a multiple of the X11 weight
        B = self.base()
        X12, X21 = B.ring.gen("X12"), B.ring.gen("X21")
        assert verify_ore_data(B, {"X11": 1, "X12": -1, "X21": -1}, {"X11": 5 * X12 * X21}).passed

    def test_wrong_delta_fails(self):
        B = self.base()
        X11, X21 = B.ring.gen("X11"), B.ring.gen("X21")
        alpha, delta = {"X11": 0, "X12": -1, "X21": -1}, {"X12": X11 * X21}
        rep = verify_ore_data(B, alpha, delta)
        assert not rep.passed
        fail = rep.first_failure()
        assert fail.check == "delta Poisson alpha-derivation"
        assert fail.witness["residual"] != 0
        with pytest.raises(ValueError):
            extend_poisson_ore(B, alpha, delta, "X22")


class TestTower:
    def test_rejects_zero_eta(self):
        with pytest.raises(ValueError):
            m2_tower(3, eta=3)

    def test_rejects_mismatched_D1(self):
        T = m2_tower()
        lv = T.levels[-1]
        X12 = T.ring.gen("X12")
        with pytest.raises(ValueError):
            OreTower(T.ring, list(T.levels[:-1]) + [replace(lv, D=({"X11": X12},), below=None, _cache={})])

    def test_rejects_data_above_level(self):
        R = PolyRing(QQ, ("a", "b"))
        with pytest.raises(ValueError):
            OreTower(R, [OreLevel("a", {"b": 1}), OreLevel("b")])

    def test_apply_D_examples(self):
        T = m2_tower()
        lv = T.level("X22")
        R = T.ring
        X11, X12, X21, X22 = R.gens()
        assert apply_D(lv, 0, X11 ** 2) == X11 ** 2
        assert apply_D(lv, 1, X11 ** 2) == -4 * X11 * X12 * X21
        assert apply_D(lv, 2, X11 ** 2) == 4 * X12 ** 2 * X21 ** 2
        assert apply_D(lv, 3, X11 ** 2) == 0
        assert apply_D(lv, 1, X12) == 0

    def test_synthetic_D_matches_closed_form(self):
        T = synthetic_tower(2)
        lv = T.level("Y")
        X = T.ring.gen("X")
        for k in range(7):
            assert apply_D(lv, k, X) == X ** (k + 1)
        # D_2(X^2) = sum D_i(X) D_(2-i)(X) = 3 X^4
        assert apply_D(lv, 2, X ** 2) == 3 * X ** 4
        with pytest.raises(ValueError):
            lv.image(7, "X", T.ring)


class TestHigherAxioms:
    @pytest.mark.parametrize("char", [0, 3, 5, 7])
    def test_m2_passes(self, char):
        T = m2_tower(char)
        rep = verify_higher_axioms(T.level("X22"), T.presentation())
        assert rep.passed, str(rep)
        assert [c.check.split()[0] for c in rep.children] == ["D_0", "(A1)", "(A2)", "(A3)", "iterativity"]

    def test_misdeclared_eta_fails_A3(self):
        T = m2_tower(eta=1)
        rep = verify_higher_axioms(T.level("X22"), T.presentation())
        assert not rep.passed
        assert rep.first_failure().check.startswith("(A3)")

    @pytest.mark.parametrize("char,a", [(0, 1), (0, 2), (3, 1), (5, 2), (7, 1)])
    def test_synthetic_passes(self, char, a):
        T = synthetic_tower(a, char)
        rep = verify_higher_axioms(T.level("Y"), T.presentation(), samples=20, max_degree=3)
        assert rep.passed, str(rep)

    def test_non_iterative_data_fails(self):
        T = synthetic_tower(1, order=3)
        lv = T.level("Y")
        X = T.ring.gen("X")
        D = ({"X": X ** 2}, {"X": 2 * X ** 3}, {"X": X ** 4})
        bad = OreTower(T.ring, [T.levels[0], replace(lv, D=D, below=None, _cache={})])
        rep = verify_higher_axioms(bad.level("Y"), bad.presentation(), samples=5)
        assert not rep.passed

    @pytest.mark.parametrize("p", [3, 5, 7])
    def test_char_p_frobenius_kills_D1(self, p):
        # D_1^p = p! D_p vanishes in characteristic p
        T = synthetic_tower(1, p, order=p + 1)
        lv = T.level("Y")
        v = T.ring.gen("X")
        for _ in range(p):
            v = apply_D(lv, 1, v)
        assert v == 0
        w = T.ring.gen("X")
        for _ in range(p - 1):
            w = apply_D(lv, 1, w)
        assert w != 0


class TestReorder:
    def three_level(self, char=0):
        T = m2_tower(char)
        R = PolyRing(T.ring.field, NAMES[:3])
        return OreTower(R, [replace(lv, below=None, _cache={}) for lv in T.levels[:3]])

    def test_presentation_unchanged(self):
        T = self.three_level()
        moved = reorder_tower(T.localize("X21"), "X21")
        assert moved.names == ("X21", "X11", "X12")
        assert moved.presentation().table == T.localize("X21").presentation().table
        assert moved.level("X11").alpha == {"X21": 1}
        assert moved.level("X12").alpha["X21"] == 0

    def test_requires_invertible_and_top(self):
        T = self.three_level()
        with pytest.raises(ValueError):
            reorder_tower(T, "X21")
        with pytest.raises(ValueError):
            reorder_tower(T.localize("X12"), "X12")

    def test_requires_zero_delta(self):
        T = m2_tower()
        with pytest.raises(ValueError):
            reorder_tower(T.localize("X22"), "X22")

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.integers(-3, 3), min_size=6, max_size=6))
    def test_log_canonical_reorder_is_isomorphism(self, lams):
        R = PolyRing(QQ, ("a", "b", "c", "d"))
        pairs = [("b", "a"), ("c", "a"), ("c", "b"), ("d", "a"), ("d", "b"), ("d", "c")]
        lam = dict(zip(pairs, lams))
        levels = []
        for p, g in enumerate(R.names):
            levels.append(OreLevel(g, {h: lam[(g, h)] for h in R.names[:p]}))
        T = OreTower(R, levels).localize("d")
        moved = reorder_tower(T, "d")
        assert moved.names[0] == "d"
        assert moved.presentation().table == T.presentation().table
        assert moved.is_log_canonical()

import random

import pytest
from hypothesis import given, settings, strategies as st

from poissonddh import (
    QQ,
    CharacterData,
    LambdaMatrix,
    PolyRing,
    build_quantum_matrices,
    check_hyp,
    enumerate_Jw,
    field_for,
    quotient_affine,
    run_ddh,
    semiclassical_limit,
    verify_Jw_poisson,
    verify_jacobi,
)
from poissonddh.poisson import log_canonical_presentation
from poissonddh.qmatrices import matrix_characters, matrix_poisson_presentation


def affine(n, seed=0, char=0):
    names = tuple(f"Y{i}" for i in range(1, n + 1))
    R = PolyRing(field_for(char), names)
    rng = random.Random(seed)
    lam = {(names[i], names[j]): rng.randint(-3, 3) for i in range(n) for j in range(i)}
    return log_canonical_presentation(R, lam)


class TestCharacters:
    def test_matrix_pairings(self):
        ch = matrix_characters(2)
        assert ch.rho("X11") == -2 and ch.rho("X22") == -2
        assert ch.pairing("X12", "X11") == -1
        assert ch.pairing("X22", "X11") == 0

    def test_shape_checked(self):
        with pytest.raises(ValueError):
            CharacterData(2, {"a": (1, 0)}, {"a": (1,)})

    def test_perturbed_and_renamed(self):
        ch = matrix_characters(2)
        p = ch.perturbed("X11", 1, 3)
        assert list(p.f["X11"]) == [1, 3, 1, 0]
        assert p != ch
        r = ch.renamed({"X11": "A"})
        assert "A" in r.f and "X11" not in r.f


class TestCheckHyp:
    @pytest.mark.parametrize("n", [2, 3])
    @pytest.mark.parametrize("char", [0, 3, 5])
    def test_matrix_lambda(self, n, char):
        Q, ch = build_quantum_matrices(n, char)
        lam, _ = run_ddh(semiclassical_limit(Q)[1])
        assert check_hyp(ch, lam).passed

    def test_wrong_lambda_fails(self):
        ch = matrix_characters(2)
        names = ("X11", "X12", "X21", "X22")
        lam = LambdaMatrix(QQ, names, {("X12", "X11"): 1, ("X11", "X12"): -1})
        rep = check_hyp(ch, lam)
        assert not rep.passed

    def test_rho_vanishing_in_char_2(self):
        ch = matrix_characters(2)
        lam = LambdaMatrix(field_for(2), ch.names, {})
        rep = check_hyp(ch, lam, field_for(2))
        assert not rep.passed


class TestJw:
    @pytest.mark.parametrize("n", range(0, 7))
    def test_count_and_order(self, n):
        B = affine(n, n)
        ideals = enumerate_Jw(B)
        assert len(ideals) == 2 ** n
        assert ideals[0].w == ()
        if n:
            assert ideals[1].w == ("Y1",)
            assert ideals[-1].w == B.generators
        assert len({J.w for J in ideals}) == 2 ** n
        assert all(J.verified for J in ideals)

    def test_quotients_are_log_canonical(self):
        B = affine(4, 1)
        for J in enumerate_Jw(B):
            Qt = quotient_affine(B, J.w)
            assert Qt.is_log_canonical()
            assert Qt.generators == tuple(g for g in B.generators if g not in J.w)
            assert verify_jacobi(Qt).passed
            for a in Qt.generators:
                for b in Qt.generators:
                    if a != b:
                        assert J.quotient[a, b] == B.log_canonical_matrix()[(a, b)]

    def test_quotient_rejects_unknown(self):
        with pytest.raises(ValueError):
            quotient_affine(affine(2), ["Z"])

    def test_non_monomial_ideal_fails(self):
        # a bracket with a monomial outside J_w
        R = PolyRing(QQ, ("a", "b", "c"))
        a, b, c = R.gens()
        from poissonddh import PoissonPresentation
        B = PoissonPresentation(R, {("c", "a"): b * b})
        rep = verify_Jw_poisson(B, ["a"])
        assert not rep.passed
        assert rep.first_failure().witness["monomial"] == b ** 2

    def test_requires_log_canonical(self):
        with pytest.raises(ValueError):
            enumerate_Jw(matrix_poisson_presentation(2))

    @settings(max_examples=25, deadline=None)
    @given(st.integers(1, 5), st.integers(0, 10 ** 6), st.sampled_from([0, 3, 5, 7]))
    def test_every_Jw_is_poisson(self, n, seed, char):
        B = affine(n, seed, char)
        for J in enumerate_Jw(B):
            assert J.report.passed

from itertools import combinations

import pytest
import sympy as sp

from oracles import det_minor, matrix_bracket_table, poisson_bracket
from poissonddh import DeterminantalIdeal, MinorId, minor, verify_minor_bracket, verify_Pk_poisson
from poissonddh.qmatrices import (
    build_quantum_matrices,
    matrix_poisson_presentation,
    minor_bracket_rhs,
    pname,
    qname,
)


def to_sympy(p, X):
    out = sp.Integer(0)
    for e, c in p.terms.items():
        term = sp.Rational(c.numerator, c.denominator) if hasattr(c, "numerator") else sp.Integer(c)
        for name, k in zip(p.ring.names, e):
            if k:
                i, j = int(name[1]), int(name[2])
                term *= X[i, j] ** k
        out += term
    return sp.expand(out)


def all_minors(n, max_size=None):
    top = n if max_size is None else max_size
    for s in range(1, top + 1):
        for I in combinations(range(1, n + 1), s):
            for J in combinations(range(1, n + 1), s):
                yield I, J


class TestNames:
    def test_names(self):
        assert qname(3, 1, 2) == "x12" and pname(3, 2, 3) == "X23"
        assert pname(10, 1, 10) == "X1_10"

    def test_generator_order(self):
        Q, _ = build_quantum_matrices(2)
        assert Q.names == ("x11", "x12", "x21", "x22")


class TestMinors:
    def test_minor_validation(self):
        with pytest.raises(ValueError):
            MinorId((1, 2), (1,))
        with pytest.raises(ValueError):
            MinorId((1, 1), (1, 2))
        with pytest.raises(ValueError):
            minor(2, (1, 3), (1, 2))

    def test_ideal_sizes(self):
        assert len(DeterminantalIdeal(3, 0)) == 9
        assert len(DeterminantalIdeal(3, 1)) == 9
        assert len(DeterminantalIdeal(3, 2)) == 1
        with pytest.raises(ValueError):
            DeterminantalIdeal(3, 3)

    def test_minors_match_sympy(self):
        X, _ = matrix_bracket_table(3)
        for I, J in all_minors(3):
            assert to_sympy(minor(3, I, J), X) == det_minor(X, I, J)

    def test_minor_brackets_match_sympy(self):
        X, table = matrix_bracket_table(3)
        P = matrix_poisson_presentation(3)
        for I, J in all_minors(3, 2):
            m = minor(3, I, J, P.ring)
            for r in range(1, 4):
                for c in range(1, 4):
                    got = P.bracket(P.ring.gen(pname(3, r, c)), m)
                    assert to_sympy(got, X) == poisson_bracket(X[r, c], det_minor(X, I, J), X, table)


class TestMinorBracket:
    def test_exhaustive_n2(self):
        P = matrix_poisson_presentation(2)
        for I, J in all_minors(2):
            for r in (1, 2):
                for c in (1, 2):
                    rep = verify_minor_bracket(2, r, c, I, J, P)
                    assert rep.passed, str(rep)

    def test_n3_up_to_size_two(self):
        P = matrix_poisson_presentation(3)
        cases = set()
        for I, J in all_minors(3, 2):
            for r in range(1, 4):
                for c in range(1, 4):
                    rep = verify_minor_bracket(3, r, c, I, J, P)
                    assert rep.passed, str(rep)
                    cases.add(minor_bracket_rhs(3, r, c, I, J, P.ring)[0])
        assert len(cases) == 4

    def test_determinant_is_casimir(self):
        P = matrix_poisson_presentation(3)
        d = minor(3, (1, 2, 3), (1, 2, 3), P.ring)
        for g in P.ring.gens():
            assert P.bracket(g, d) == 0

    def test_dropping_the_sign_is_detected(self, monkeypatch):
        import poissonddh.qmatrices as qm

        monkeypatch.setattr(qm, "_sign", lambda S, a, b: 1)
        P = matrix_poisson_presentation(3)
        results = [verify_minor_bracket(3, r, c, I, J, P).passed
                   for I, J in all_minors(3, 2) for r in range(1, 4) for c in range(1, 4)]
        assert not all(results)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_Pk(self, n):
        P = matrix_poisson_presentation(n)
        for k in range(n):
            rep = verify_Pk_poisson(n, k, P)
            assert rep.passed, str(rep)

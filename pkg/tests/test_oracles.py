"""Re-derive the frozen expectations of the other test modules with sympy."""

import sympy as sp

from oracles import (
    det_minor,
    laurent_div,
    matrix_bracket_table,
    poisson_bracket,
    q_binomial_subsets,
    q_factorial,
    t,
)
from poissonddh.arith import QBinomialTable


def to_sympy(lp):
    return sp.expand(sum(c * t ** e for e, c in lp.terms.items()))


def test_q_binomial_4_2_1():
    assert q_binomial_subsets(4, 2, 1) == t**4 + t**3 + 2 * t**2 + t + 1


def test_q_binomials_match_subset_oracle():
    for eta in (-2, -1, 1, 2, 3):
        table = QBinomialTable(eta)
        for i in range(8):
            for k in range(i + 1):
                assert to_sympy(table.binomial(i, k)) == q_binomial_subsets(i, k, eta)


def test_factorial_quotient_agrees_with_subsets():
    assert sp.cancel(q_factorial(5, 2) / (q_factorial(2, 2) * q_factorial(3, 2))) == q_binomial_subsets(5, 2, 2)


def test_division_example():
    assert laurent_div(t - 1 / t, t - 1) == 1 + 1 / t


def test_scaled_limits():
    # alpha from sigma(x) = t^-1 x, and the t - t^-1 coefficient
    assert sp.cancel((1 / t - 1) / (t - 1)).subs(t, 1) == -1
    assert sp.cancel(-(t - 1 / t) / (t - 1)).subs(t, 1) == -2


def test_synthetic_second_derivation_is_cube():
    for a in (1, 2, 3):
        delta2 = (t - 1) ** 2 * (t**a + 1)
        assert sp.cancel(delta2 / ((t - 1) ** 2 * q_factorial(2, -a))).subs(t, 1) == 1


def test_matrix_bracket_examples():
    X, table = matrix_bracket_table(2)
    assert poisson_bracket(X[2, 2], X[1, 1], X, table) == -2 * X[1, 2] * X[2, 1]
    assert poisson_bracket(X[1, 1] * X[2, 2], X[1, 2], X, table) == 0
    # D_1(X11^2) = 2 X11 D_1(X11)
    assert sp.expand(sp.diff(X[1, 1] ** 2, X[1, 1]) * (-2 * X[1, 2] * X[2, 1])) == -4 * X[1, 1] * X[1, 2] * X[2, 1]


def test_minor_bracket_examples():
    X, table = matrix_bracket_table(2)
    assert poisson_bracket(X[1, 1], X[2, 2], X, table) == 2 * X[1, 2] * X[2, 1]
    assert poisson_bracket(X[1, 2], X[2, 2], X, table) == X[1, 2] * X[2, 2]
    det = det_minor(X, (1, 2), (1, 2))
    for x in X.values():
        assert poisson_bracket(x, det, X, table) == 0


def test_deleting_map_o_m2():
    X = {k: sp.Symbol(f"X{k}") for k in (11, 12, 21, 22)}
    d1 = -2 * X[12] * X[21]
    F = X[11] + sp.Rational(1, 2) * d1 / X[22]
    assert sp.expand(F) == X[11] - X[12] * X[21] / X[22]

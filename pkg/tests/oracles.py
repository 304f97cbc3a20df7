"""Independent reference computations built on sympy.

Only the test suite uses these; the frozen expectations in the tests
were produced here and ``test_oracles.py`` re-derives them.
"""

from itertools import combinations

import sympy as sp

t = sp.Symbol("t")


def q_integer(i, eta):
    return sp.expand(sum(t ** (eta * k) for k in range(i)))


def q_factorial(i, eta):
    out = sp.Integer(1)
    for m in range(1, i + 1):
        out *= q_integer(m, eta)
    return sp.expand(out)


def q_binomial_subsets(i, k, eta):
    """Gaussian binomial as a sum over k-subsets (no division involved)."""
    total = sp.Integer(0)
    for S in combinations(range(i), k):
        total += t ** (eta * (sum(S) - k * (k - 1) // 2))
    return sp.expand(total)


def laurent_div(a, b):
    q = sp.cancel(sp.together(a / b))
    num, den = sp.fraction(q)
    if sp.Poly(den, t).is_monomial:
        return sp.expand(q)
    raise ArithmeticError("not divisible")


def matrix_symbols(n):
    return {(i, j): sp.Symbol(f"X{i}{j}") for i in range(1, n + 1) for j in range(1, n + 1)}


def matrix_bracket_table(n):
    """The four-case semiclassical table as sympy expressions ``{X_lm, X_ij}``."""
    X = matrix_symbols(n)
    table = {}
    cells = sorted(X)
    for a, (l, m) in enumerate(cells):
        for (i, j) in cells[:a]:
            if (l > i and m == j) or (l == i and m > j):
                v = -X[i, j] * X[l, m]
            elif l > i and m < j:
                v = sp.Integer(0)
            else:
                v = -2 * X[i, m] * X[l, j]
            table[(l, m), (i, j)] = v
            table[(i, j), (l, m)] = -v
    return X, table


def poisson_bracket(f, g, X, table):
    """Biderivation extension with sympy differentiation."""
    out = sp.Integer(0)
    for a, xa in X.items():
        fa = sp.diff(f, xa)
        if fa == 0:
            continue
        for b, xb in X.items():
            if a == b:
                continue
            gb = sp.diff(g, xb)
            if gb != 0:
                out += fa * gb * table[a, b]
    return sp.expand(out)


def det_minor(X, I, J):
    return sp.expand(sp.Matrix([[X[i, j] for j in J] for i in I]).det())

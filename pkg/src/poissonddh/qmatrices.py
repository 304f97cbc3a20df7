"""Quantum matrices, their semiclassical limit, minors and determinantal ideals.

Generators ``x_ij`` are ordered lexicographically.  For ``(i, j) <
(l, m)``:

    x_lm x_ij = t^-1 x_ij x_lm                      (l > i, m = j or l = i, m > j)
    x_lm x_ij = x_ij x_lm                           (l > i, m < j)
    x_lm x_ij = x_ij x_lm - (t - t^-1) x_im x_lj    (l > i, m > j)

The semiclassical names are ``X_ij``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Sequence

from .arith import QQ, LaurentPoly, field_for
from .poisson import PoissonPresentation, bracket
from .poly import Poly, PolyRing
from .quantum import NCElem, QLevel, QuantumTower, reduce_at_one, sc_bracket
from .report import Report
from .torus import CharacterData

__all__ = [
    "qname",
    "pname",
    "build_quantum_matrices",
    "matrix_characters",
    "matrix_poisson_presentation",
    "matrix_ring",
    "MinorId",
    "DeterminantalIdeal",
    "minor",
    "minor_bracket_rhs",
    "verify_minor_bracket",
    "verify_Pk_poisson",
    "quantum_determinant_2",
    "check_quantum_minor_2",
]


def _suffix(n: int, i: int, j: int) -> str:
    return f"{i}{j}" if n < 10 else f"{i}_{j}"


def qname(n: int, i: int, j: int) -> str:
    return "x" + _suffix(n, i, j)


def pname(n: int, i: int, j: int) -> str:
    return "X" + _suffix(n, i, j)


def _cells(n: int):
    return [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]


def matrix_characters(n: int) -> CharacterData:
    """``f_ij = e_i + e_{n+j}`` and the vectors ``gamma_lm`` in ``Z^{2n}``."""
    f = {}
    gamma = {}
    for l, m in _cells(n):
        v = [0] * (2 * n)
        v[l - 1] = 1
        v[n + m - 1] = 1
        f[pname(n, l, m)] = v
        g = [1] * (l - 1) + [0] + [-1] * (n - l) + [-1] * n
        g[n + m - 1] = -2
        gamma[pname(n, l, m)] = g
    return CharacterData(2 * n, f, gamma)


def build_quantum_matrices(n: int, char: int = 0, allow_char_two: bool = False):
    """``O_t(M_n)`` as an iterated Ore extension, with its character data.

    Characteristic 2 is rejected since then ``eta = 2`` vanishes;
    ``allow_char_two`` builds it anyway so that the failure can be
    reported by the hypothesis checks.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if char == 2 and not allow_char_two:
        raise ValueError("(H1) fails in characteristic 2: eta = -(gamma|f) = 2 vanishes in K")
    K = field_for(char)
    t = LaurentPoly.t(K)
    coeff = -(t - t ** -1)
    levels = []
    for l, m in _cells(n):
        sigma = {}
        Delta = {}
        for i, j in _cells(n):
            if (i, j) >= (l, m):
                break
            if (l > i and m == j) or (l == i and m > j):
                sigma[qname(n, i, j)] = -1
            else:
                sigma[qname(n, i, j)] = 0
            if l > i and m > j:
                Delta[qname(n, i, j)] = [(coeff, {qname(n, i, m): 1, qname(n, l, j): 1})]
        levels.append(QLevel(qname(n, l, m), sigma, Delta, eta=2, poisson_name=pname(n, l, m)))
    return QuantumTower(K, levels), matrix_characters(n)


def matrix_ring(n: int, field=QQ) -> PolyRing:
    return PolyRing(field, tuple(pname(n, i, j) for i, j in _cells(n)))


def matrix_poisson_presentation(n: int, field=QQ) -> PoissonPresentation:
    """The Poisson matrix algebra written directly from the four-case bracket list."""
    ring = matrix_ring(n, field)
    X = {c: ring.gen(pname(n, *c)) for c in _cells(n)}
    table = {}
    for l, m in _cells(n):
        for i, j in _cells(n):
            if (i, j) >= (l, m):
                break
            if (l > i and m == j) or (l == i and m > j):
                val = -(X[i, j] * X[l, m])
            elif l > i and m < j:
                val = ring.zero()
            else:
                val = X[i, m] * X[l, j] * -2
            table[(pname(n, l, m), pname(n, i, j))] = val
    return PoissonPresentation(ring, table)


@dataclass(frozen=True)
class MinorId:
    """Row set ``I`` and column set ``J`` (1-based, sorted, same size)."""

    I: tuple[int, ...]
    J: tuple[int, ...]

    def __post_init__(self):
        I = tuple(sorted(self.I))
        J = tuple(sorted(self.J))
        if len(I) != len(J) or not I:
            raise ValueError("a minor needs nonempty row and column sets of equal size")
        if len(set(I)) != len(I) or len(set(J)) != len(J):
            raise ValueError("repeated index in a minor")
        object.__setattr__(self, "I", I)
        object.__setattr__(self, "J", J)

    @property
    def size(self) -> int:
        return len(self.I)

    def check(self, n: int) -> None:
        if not all(1 <= x <= n for x in self.I + self.J):
            raise ValueError(f"minor indices must lie in 1..{n}")

    def __str__(self):
        return f"[{','.join(map(str, self.I))}|{','.join(map(str, self.J))}]"


class DeterminantalIdeal:
    """The ideal generated by all ``(k+1) x (k+1)`` minors."""

    def __init__(self, n: int, k: int):
        if not 0 <= k <= n - 1:
            raise ValueError("k must satisfy 0 <= k <= n - 1")
        self.n = n
        self.k = k
        rows = list(combinations(range(1, n + 1), k + 1))
        self.generators = [MinorId(I, J) for I in rows for J in rows]
        assert len(self.generators) == comb(n, k + 1) ** 2

    def __len__(self):
        return len(self.generators)

    def __repr__(self):
        return f"DeterminantalIdeal(n={self.n}, k={self.k}, {len(self)} minors)"


def minor(n: int, I: Sequence[int], J: Sequence[int], ring: PolyRing | None = None) -> Poly:
    """``[I|J]`` by Laplace expansion along the first row."""
    mid = I if isinstance(I, MinorId) else MinorId(tuple(I), tuple(J))
    mid.check(n)
    ring = ring or matrix_ring(n)
    return _det(n, mid.I, mid.J, ring, {})


def _det(n, I, J, ring, memo):
    key = (I, J)
    if key in memo:
        return memo[key]
    if len(I) == 1:
        res = ring.gen(pname(n, I[0], J[0]))
    else:
        res = ring.zero()
        r = I[0]
        for pos, c in enumerate(J):
            sub = _det(n, I[1:], J[:pos] + J[pos + 1:], ring, memo)
            term = ring.gen(pname(n, r, c)) * sub
            res = res + (term if pos % 2 == 0 else -term)
    memo[key] = res
    return res


def _sign(S: Sequence[int], a: int, b: int) -> int:
    # parity reading of (-1)^{-|S cap [a, b]|}
    lo, hi = min(a, b), max(a, b)
    return -1 if sum(1 for x in S if lo <= x <= hi) % 2 else 1


def minor_bracket_rhs(n: int, r: int, c: int, I, J, ring: PolyRing):
    """Right-hand side of the case formula for ``{X_rc, [I|J]}``.

    Returns ``(case, value, sizes)`` where ``sizes`` lists the sizes of the
    minors occurring in the formula.
    """
    I = tuple(sorted(I))
    J = tuple(sorted(J))
    X = lambda a, b: ring.gen(pname(n, a, b))  # noqa: E731
    M = lambda R, C: minor(n, tuple(sorted(R)), tuple(sorted(C)), ring)  # noqa: E731
    sizes = []
    if r in I and c in J:
        return "r in I, c in J", ring.zero(), sizes

    def col_sum():
        s = ring.zero()
        for j in J:
            if j > c:
                Jn = [x for x in J if x != j] + [c]
                sizes.append(len(Jn))
                s = s + M(I, Jn) * X(r, j) * _sign(J, c, j)
        return s

    def row_sum():
        s = ring.zero()
        for i in I:
            if i < r:
                In = [x for x in I if x != i] + [r]
                sizes.append(len(In))
                s = s + M(In, J) * X(i, c) * _sign(I, i, r)
        return s

    base = M(I, J)
    sizes.append(len(I))
    if r in I:
        return "r in I, c not in J", -(base * X(r, c)) - col_sum() * 2, sizes
    if c in J:
        return "r not in I, c in J", base * X(r, c) + row_sum() * 2, sizes
    sizes.pop()
    return "r not in I, c not in J", row_sum() * 2 - col_sum() * 2, sizes


def verify_minor_bracket(n: int, r: int, c: int, I, J, P: PoissonPresentation | None = None) -> Report:
    """Compare ``{X_rc, [I|J]}`` (Leibniz expansion) with the case formula."""
    P = P or matrix_poisson_presentation(n)
    mid = MinorId(tuple(I), tuple(J))
    mid.check(n)
    ring = P.ring
    lhs = bracket(P, ring.gen(pname(n, r, c)), minor(n, mid.I, mid.J, ring))
    case, rhs, sizes = minor_bracket_rhs(n, r, c, mid.I, mid.J, ring)
    rep = Report(f"{{X{r}{c}, {mid}}} ({case})")
    rep.record(lhs == rhs, {"lhs": lhs, "rhs": rhs, "difference": lhs - rhs}, "case formula mismatch")
    rep.record(all(s == mid.size for s in sizes), {"sizes": sizes}, "formula uses minors of another size")
    return rep


def verify_Pk_poisson(n: int, k: int, P: PoissonPresentation | None = None) -> Report:
    """Case formulas for every ``(k+1)``-minor and generator, with size-preservation."""
    P = P or matrix_poisson_presentation(n)
    ideal = DeterminantalIdeal(n, k)
    rep = Report(f"P_{k} is Poisson in O(M_{n})")
    for mid in ideal.generators:
        for r, c in _cells(n):
            sub = verify_minor_bracket(n, r, c, mid.I, mid.J, P)
            rep.record(sub.passed, {"generator": f"X{r}{c}", "minor": str(mid), **(sub.witness or {})},
                       sub.message)
    return rep


def quantum_determinant_2(Q: QuantumTower) -> NCElem:
    """``x11 x22 - t x12 x21`` in ``O_t(M_2)``."""
    if Q.n != 4:
        raise ValueError("the quantum determinant is implemented for n = 2 only")
    x11, x12, x21, x22 = Q.gens()
    return x11 * x22 - (x12 * x21).scale(Q.t())


def check_quantum_minor_2(Q: QuantumTower) -> Report:
    """Two routes to ``{X_rc, det}`` for ``n = 2``: quantum commutators and the Poisson bracket."""
    rep = Report("quantum 2x2 minor: commutator route equals bracket route")
    Dq = quantum_determinant_2(Q)
    ring = Q.poisson_ring()
    det = minor(2, (1, 2), (1, 2), ring)
    rep.record(reduce_at_one(Dq) == det, {"coset": reduce_at_one(Dq), "minor": det}, "coset differs")
    P = matrix_poisson_presentation(2, Q.field)
    for g in range(4):
        via_q = sc_bracket(Q.gen(g), Dq)
        via_p = bracket(P, ring.gen(g), det)
        rep.record(via_q == via_p, {"generator": Q.names[g], "commutator": via_q, "bracket": via_p})
        comm = Q.commutator(Q.gen(g), Dq)
        rep.record(not comm, {"generator": Q.names[g], "commutator": comm}, "quantum determinant not central")
    return rep

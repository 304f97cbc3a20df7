"""Iterated Ore extensions over K[t, t^-1] and their semiclassical limits.

Elements are kept in normal form: ordered monomials ``x_1^a_1 ... x_n^a_n``
(tower order, lowest generator first) with Laurent coefficients in ``t``.
A level ``x_i`` acts on the subalgebra below it by ``x_i a = sigma_i(a) x_i
+ Delta_i(a)``, where ``sigma_i`` is diagonal with exponents ``lambda_ij``
and ``Delta_i`` is a ``sigma_i``-derivation given on generators.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

from .arith import LaurentPoly, NotDivisible, QBinomialTable
from .poisson import OreLevel, OreTower, PoissonPresentation
from .poly import Poly, PolyRing
from .report import Report

__all__ = [
    "QLevel",
    "QuantumTower",
    "NCElem",
    "nc_mul",
    "sc_bracket",
    "semiclassical_limit",
    "extract_higher_derivation",
    "check_hypotheses",
    "check_associativity",
    "q_leibniz_check",
]


@dataclass
class QLevel:
    """One level ``[x; sigma, Delta]``.

    ``Delta`` maps a lower generator name to a list of
    ``(coefficient, {name: exponent})`` pairs, or to an :class:`NCElem`.
    ``order`` is the largest ``k`` with possibly nonzero ``Delta^k`` on
    generators; for a nilpotent level it is certified (detected when
    omitted), otherwise it is a declared verification range.
    """

    name: str
    sigma: Mapping[str, int] = field(default_factory=dict)
    Delta: Mapping[str, Any] = field(default_factory=dict)
    eta: int | None = None
    order: int | None = None
    nilpotent: bool = True
    poisson_name: str | None = None


class NCElem:
    """Normal-form element: ``{exponent tuple: LaurentPoly}``."""

    __slots__ = ("tower", "terms")

    def __init__(self, tower: "QuantumTower", terms: Mapping | None = None):
        self.tower = tower
        clean = {}
        if terms:
            for e, c in terms.items():
                if not isinstance(c, LaurentPoly):
                    c = LaurentPoly.constant(tower.field, c)
                if c:
                    clean[tuple(e)] = c
        self.terms = clean

    @classmethod
    def _raw(cls, tower, terms):
        obj = cls.__new__(cls)
        obj.tower = tower
        obj.terms = terms
        return obj

    def _coerce(self, other) -> "NCElem":
        if isinstance(other, NCElem):
            if other.tower is not self.tower:
                raise ValueError("elements of different quantum towers")
            return other
        return self.tower.scalar(other)

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        other = self._coerce(other)
        return NCElem._raw(self.tower, _add_into(dict(self.terms), other.terms))

    __radd__ = __add__

    def __neg__(self):
        return NCElem._raw(self.tower, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, NCElem):
            return nc_mul(self, other)
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(self.tower.field, other)
        return self.scale(other)

    def __rmul__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(self.tower.field, other)
        return self.scale(other)

    def scale(self, c: LaurentPoly) -> "NCElem":
        out = {}
        for e, v in self.terms.items():
            w = v * c
            if w:
                out[e] = w
        return NCElem._raw(self.tower, out)

    def __pow__(self, k: int):
        result = self.tower.one()
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, NCElem):
            return self.tower is other.tower and self.terms == other.terms
        if isinstance(other, int):
            return self.terms == self.tower.scalar(other).terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def support(self) -> set[int]:
        out = set()
        for e in self.terms:
            out.update(i for i, a in enumerate(e) if a)
        return out

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        names = self.tower.names
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(n if a == 1 else f"{n}^{a}" for n, a in zip(names, e) if a)
            cs = str(c)
            neg = False
            if len(c.terms) == 1:
                neg = cs.startswith("-")
                if neg:
                    cs = cs[1:]
            else:
                cs = f"({cs})"
            if not mono:
                body = cs
            elif cs == "1":
                body = mono
            else:
                body = f"{cs}*{mono}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append(("- " if neg else "+ ") + body)
        return " ".join(parts)

    def __repr__(self):
        return f"NCElem({self})"


def _add_into(acc: dict, terms: Mapping, scale: LaurentPoly | None = None) -> dict:
    for e, c in terms.items():
        if scale is not None:
            c = c * scale
        v = acc.get(e)
        v = c if v is None else v + c
        if v:
            acc[e] = v
        else:
            acc.pop(e, None)
    return acc


class QuantumTower:
    """``K[t^+-1][x_1][x_2; sigma_2, Delta_2] ... [x_n; sigma_n, Delta_n]``."""

    def __init__(self, field, levels: Sequence[QLevel]):
        self.field = field
        self.levels = list(levels)
        self.names = tuple(lv.name for lv in self.levels)
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate generator names")
        self.n = len(self.names)
        self._pos = {a: i for i, a in enumerate(self.names)}
        self.poisson_names = tuple(
            lv.poisson_name if lv.poisson_name else _default_poisson_name(lv.name) for lv in self.levels
        )
        if len(set(self.poisson_names)) != self.n:
            raise ValueError("duplicate semiclassical generator names")
        self._sigma: list[list[int]] = []
        self._delta: list[dict[int, NCElem]] = []
        self._mono_cache: dict = {}
        self._delta_cache: dict = {}
        self._t = LaurentPoly.t(field)
        for p, lv in enumerate(self.levels):
            row = [0] * self.n
            for g, lam in lv.sigma.items():
                j = self.index(g)
                if j >= p:
                    raise ValueError(f"sigma of {lv.name!r} given on {g!r}, which is not below it")
                row[j] = int(lam)
            self._sigma.append(row)
        for p, lv in enumerate(self.levels):
            imgs = {}
            for g, img in lv.Delta.items():
                j = self.index(g)
                if j >= p:
                    raise ValueError(f"Delta of {lv.name!r} given on {g!r}, which is not below it")
                el = self._to_elem(img)
                if any(i >= p for i in el.support()):
                    raise ValueError(f"Delta_{lv.name}({g}) = {el} leaves the subalgebra below the level")
                if el:
                    imgs[j] = el
            self._delta.append(imgs)
        self.orders: list[int] = []
        for p, lv in enumerate(self.levels):
            self.orders.append(self._certify_order(p, lv))

    # -- construction helpers -------------------------------------------

    def _to_elem(self, img) -> NCElem:
        if isinstance(img, NCElem):
            if img.tower is self:
                return img
            if img.tower.names != self.names:
                raise ValueError("Delta image from a tower with other generators")
            return NCElem(self, img.terms)
        terms: dict = {}
        for coeff, mono in img:
            e = [0] * self.n
            for g, a in mono.items():
                e[self.index(g)] += a
            if any(a < 0 for a in e):
                raise ValueError("quantum monomials have nonnegative exponents")
            c = coeff if isinstance(coeff, LaurentPoly) else LaurentPoly.constant(self.field, coeff)
            _add_into(terms, {tuple(e): c})
        return NCElem._raw(self, terms)

    def _certify_order(self, p: int, lv: QLevel, cap: int = 32) -> int:
        if not self._delta[p]:
            return 0 if lv.order is None else lv.order
        if not lv.nilpotent:
            if lv.order is None:
                raise ValueError(f"non-nilpotent level {lv.name!r} needs a declared order")
            return lv.order
        limit = cap if lv.order is None else lv.order + 1
        for j in range(p):
            x = self.gen(j)
            k = 0
            while x:
                if k == limit:
                    which = "declared order" if lv.order is not None else "search cap"
                    raise ValueError(f"Delta_{lv.name} is not nilpotent on {self.names[j]} within the {which}")
                x = self.apply_Delta(p, x)
                k += 1
        if lv.order is not None:
            return lv.order
        best = 0
        for j in range(p):
            x = self.gen(j)
            k = 0
            while True:
                x = self.apply_Delta(p, x)
                if not x:
                    break
                k += 1
            best = max(best, k)
        return best

    def index(self, name) -> int:
        if isinstance(name, int):
            return name
        try:
            return self._pos[name]
        except KeyError:
            raise KeyError(f"unknown generator {name!r}") from None

    def level(self, which) -> QLevel:
        return self.levels[self.index(which)]

    def eta(self, which) -> int | None:
        return self.level(which).eta

    def sigma_exponent(self, i, j) -> int:
        return self._sigma[self.index(i)][self.index(j)]

    def Delta_image(self, i, j) -> NCElem:
        return self._delta[self.index(i)].get(self.index(j), self.zero())

    def zero(self) -> NCElem:
        return NCElem._raw(self, {})

    def one(self) -> NCElem:
        return self.scalar(1)

    def scalar(self, c) -> NCElem:
        if not isinstance(c, LaurentPoly):
            c = LaurentPoly.constant(self.field, c)
        return NCElem(self, {(0,) * self.n: c})

    def t(self) -> LaurentPoly:
        return self._t

    def gen(self, which) -> NCElem:
        e = [0] * self.n
        e[self.index(which)] = 1
        return NCElem._raw(self, {tuple(e): LaurentPoly.constant(self.field, 1)})

    def gens(self) -> list[NCElem]:
        return [self.gen(i) for i in range(self.n)]

    def monomial(self, exps, c=1) -> NCElem:
        if isinstance(exps, Mapping):
            e = [0] * self.n
            for g, a in exps.items():
                e[self.index(g)] = a
            exps = e
        return NCElem(self, {tuple(exps): c})

    def poisson_ring(self) -> PolyRing:
        return PolyRing(self.field, self.poisson_names)

    # -- normal-form arithmetic ------------------------------------------

    def _x_times(self, p: int, v: tuple) -> dict:
        """``x_p * v`` for a normal monomial ``v``."""
        lo = v[:p] + (0,) * (self.n - p)
        hi = (0,) * p + v[p:]
        w = sum(a * b for a, b in zip(self._sigma[p][:p], v[:p]) if b)
        e = list(v)
        e[p] += 1
        out = {tuple(e): LaurentPoly.monomial(self.field, w, 1)}
        if any(lo) and self._delta[p]:
            d = self._delta_mono(p, lo)
            for u, c in d.items():
                _add_into(out, {tuple(a + b for a, b in zip(u, hi)): c})
        return out

    def _mono_mul(self, u: tuple, v: tuple) -> dict:
        key = (u, v)
        cached = self._mono_cache.get(key)
        if cached is not None:
            return cached
        n = self.n
        top_u = max((i for i in range(n) if u[i]), default=-1)
        low_v = min((i for i in range(n) if v[i]), default=n)
        if top_u <= low_v:
            res = {tuple(a + b for a, b in zip(u, v)): LaurentPoly.constant(self.field, 1)}
        else:
            p = top_u
            rest = list(u)
            rest[p] -= 1
            rest = tuple(rest)
            res = {}
            for w, c in self._x_times(p, v).items():
                _add_into(res, self._mono_mul(rest, w), c)
        self._mono_cache[key] = res
        return res

    def mul_terms(self, a: Mapping, b: Mapping) -> dict:
        out: dict = {}
        for u, c1 in a.items():
            for v, c2 in b.items():
                _add_into(out, self._mono_mul(u, v), c1 * c2)
        return out

    def _delta_mono(self, p: int, m: tuple) -> dict:
        """``Delta_p`` of a monomial below ``p`` via ``Delta(ab) = sigma(a) Delta(b) + Delta(a) b``."""
        key = (p, m)
        cached = self._delta_cache.get(key)
        if cached is not None:
            return cached
        j = min(i for i in range(self.n) if m[i])
        rest = list(m)
        rest[j] -= 1
        rest = tuple(rest)
        out: dict = {}
        xj = tuple(1 if i == j else 0 for i in range(self.n))
        if any(rest):
            d_rest = self._delta_mono(p, rest)
            if d_rest:
                tw = LaurentPoly.monomial(self.field, self._sigma[p][j], 1)
                _add_into(out, self.mul_terms({xj: tw}, d_rest))
        dj = self._delta[p].get(j)
        if dj:
            _add_into(out, self.mul_terms(dj.terms, {rest: LaurentPoly.constant(self.field, 1)}))
        self._delta_cache[key] = out
        return out

    def apply_Delta(self, which, a: NCElem) -> NCElem:
        p = self.index(which)
        if any(i >= p for i in a.support()):
            raise ValueError(f"{a} is not in the subalgebra below {self.names[p]!r}")
        out: dict = {}
        for e, c in a.terms.items():
            if any(e):
                _add_into(out, self._delta_mono(p, e), c)
        return NCElem._raw(self, out)

    def apply_sigma(self, which, a: NCElem) -> NCElem:
        p = self.index(which)
        if any(i >= p for i in a.support()):
            raise ValueError(f"{a} is not in the subalgebra below {self.names[p]!r}")
        row = self._sigma[p]
        out = {}
        for e, c in a.terms.items():
            w = sum(x * y for x, y in zip(row, e) if y)
            out[e] = c * LaurentPoly.monomial(self.field, w, 1)
        return NCElem._raw(self, out)

    def Delta_power(self, which, k: int, a: NCElem) -> NCElem:
        for _ in range(k):
            a = self.apply_Delta(which, a)
        return a

    def commutator(self, r: NCElem, s: NCElem) -> NCElem:
        return r * s - s * r

    def random_elem(self, rng: random.Random, max_degree: int = 3, nterms: int = 2) -> NCElem:
        out: dict = {}
        for _ in range(nterms):
            e = [0] * self.n
            for _ in range(rng.randint(0, max_degree)):
                e[rng.randrange(self.n)] += 1
            c = LaurentPoly.monomial(self.field, rng.randint(-2, 2), rng.randint(1, 4))
            _add_into(out, {tuple(e): c})
        return NCElem._raw(self, out)

    def __repr__(self):
        return f"QuantumTower({', '.join(self.names)})"


def _default_poisson_name(name: str) -> str:
    up = name[:1].upper() + name[1:]
    return up if up != name else name


def nc_mul(u: NCElem, v: NCElem) -> NCElem:
    """Product in normal form."""
    if u.tower is not v.tower:
        raise ValueError("elements of different quantum towers")
    return NCElem._raw(u.tower, u.tower.mul_terms(u.terms, v.terms))


def _to_poisson(Q: QuantumTower, a: NCElem, divisor: LaurentPoly, ring: PolyRing | None = None) -> Poly:
    """``(a / divisor)|_{t=1}`` as a commutative polynomial; raises NotDivisible."""
    ring = ring or Q.poisson_ring()
    terms = {}
    for e, c in a.terms.items():
        q = c.exact_div(divisor)
        v = q.eval_at_one()
        if v:
            terms[e] = v
    return Poly(ring, terms)


def _t_minus_one(Q: QuantumTower) -> LaurentPoly:
    return LaurentPoly(Q.field, {1: 1, 0: -1})


def sc_bracket(r: NCElem, s: NCElem) -> Poly:
    """``([r, s] / (t - 1))|_{t=1}``."""
    Q = r.tower
    return _to_poisson(Q, Q.commutator(r, s), _t_minus_one(Q))


def reduce_at_one(a: NCElem) -> Poly:
    """The coset of ``a`` in the quotient at ``t = 1``."""
    return _to_poisson(a.tower, a, LaurentPoly.constant(a.tower.field, 1))


def _divisor(Q: QuantumTower, k: int, eta: int) -> LaurentPoly:
    return _t_minus_one(Q) ** k * QBinomialTable(eta, Q.field).factorial(k)


def extract_higher_derivation(Q: QuantumTower, which, k: int) -> dict[str, Poly]:
    """Images ``D_k(X_j) = (Delta^k(x_j) / ((t-1)^k (k)!_{t^eta}))|_{t=1}`` for ``j`` below the level."""
    p = Q.index(which)
    eta = Q.levels[p].eta
    if eta is None:
        raise ValueError(f"level {Q.names[p]!r} has no eta")
    div = _divisor(Q, k, eta)
    ring = Q.poisson_ring()
    out = {}
    for j in range(p):
        dk = Q.Delta_power(p, k, Q.gen(j))
        try:
            out[Q.poisson_names[j]] = _to_poisson(Q, dk, div, ring)
        except NotDivisible:
            raise NotDivisible(
                f"(H3) fails: Delta_{Q.names[p]}^{k}({Q.names[j]}) = {dk} is not divisible by {div}"
            ) from None
    return out


def semiclassical_limit(Q: QuantumTower, with_higher: bool = True) -> tuple[PoissonPresentation, OreTower]:
    """The Poisson algebra at ``t = 1`` and its Poisson-Ore tower.

    Higher-derivation data is attached to a level when its ``eta`` is
    known and nonzero in K and every ``Delta^k(x_j)`` up to the level's
    order divides exactly; otherwise only ``delta`` is recorded.
    """
    ring = Q.poisson_ring()
    f = Q.field
    tm1 = _t_minus_one(Q)
    table = {}
    for i in range(Q.n):
        for j in range(i):
            try:
                table[(i, j)] = _to_poisson(Q, Q.commutator(Q.gen(i), Q.gen(j)), tm1, ring)
            except NotDivisible:
                raise NotDivisible(
                    f"[{Q.names[i]}, {Q.names[j]}] is not divisible by t - 1: the quotient at t = 1 is not commutative"
                ) from None
    P = PoissonPresentation(ring, table)
    levels = []
    for p, lv in enumerate(Q.levels):
        alpha = {Q.poisson_names[j]: f(Q._sigma[p][j]) for j in range(p)}
        delta = {}
        for j, img in Q._delta[p].items():
            delta[Q.poisson_names[j]] = _to_poisson(Q, img, tm1, ring)
        eta = lv.eta
        D = None
        if with_higher and eta is not None and f(eta) != 0:
            try:
                D = tuple(
                    extract_higher_derivation(Q, p, k) for k in range(1, Q.orders[p] + 1)
                )
            except NotDivisible:
                D = None
        if eta is not None and f(eta) == 0:
            eta = None
        levels.append(OreLevel(Q.poisson_names[p], alpha, delta, eta, D, lv.nilpotent))
    return P, OreTower(ring, levels)


def check_associativity(Q: QuantumTower, triples: int = 100, seed: int = 0, max_degree: int = 3) -> Report:
    rep = Report("normal-form associativity")
    rng = random.Random(seed)
    gens = Q.gens()
    for a in gens:
        for b in gens:
            for c in gens:
                lhs = (a * b) * c
                rhs = a * (b * c)
                if not rep.record(lhs == rhs, {"triple": (a, b, c), "residual": lhs - rhs}):
                    return rep
    for _ in range(triples):
        a, b, c = (Q.random_elem(rng, max_degree) for _ in range(3))
        lhs = (a * b) * c
        rhs = a * (b * c)
        if not rep.record(lhs == rhs, {"triple": (a, b, c), "residual": lhs - rhs}):
            return rep
    return rep


def q_leibniz_check(Q: QuantumTower, which, a: NCElem, b: NCElem, k: int) -> bool:
    """``Delta^k(ab) = sum_j C(k,j)_{t^eta} sigma^{k-j} Delta^j(a) Delta^{k-j}(b)``."""
    p = Q.index(which)
    eta = Q.levels[p].eta
    table = QBinomialTable(eta, Q.field)
    lhs = Q.Delta_power(p, k, a * b)
    rhs = Q.zero()
    for j in range(k + 1):
        da = Q.Delta_power(p, j, a)
        for _ in range(k - j):
            da = Q.apply_sigma(p, da)
        rhs = rhs + (da * Q.Delta_power(p, k - j, b)).scale(table.binomial(k, j))
    return lhs == rhs


def _weight(Q: QuantumTower, e: tuple, characters) -> tuple:
    r = characters.r
    out = [0] * r
    for i, a in enumerate(e):
        if a:
            fv = _char_vec(characters, characters.f, Q, i)
            for c in range(r):
                out[c] += a * fv[c]
    return tuple(out)


def _char_vec(characters, table, Q: QuantumTower, p: int):
    key = Q.poisson_names[p] if Q.poisson_names[p] in table else Q.names[p]
    return table[key]


def check_hypotheses(Q: QuantumTower, characters, h3_range: Mapping[str, int] | None = None) -> Report:
    """Itemised check of (H1)-(H4) plus commutativity of the quotient at ``t = 1``.

    (H3) is tested on generators for ``k`` up to the level order plus one
    (nilpotent levels) or the declared order; ``h3_range`` overrides it.
    """
    f = Q.field
    rep = Report("hypotheses (H1)-(H4)")
    h1 = rep.add(Report("(H1) eigenvectors and eta = -(gamma|f) nonzero in K"))
    h2 = rep.add(Report("(H2) Delta sigma = t^eta sigma Delta on generators"))
    h3 = rep.add(Report("(H3) (t-1)^k (k)!_{t^eta} divides Delta^k on generators"))
    h4 = rep.add(Report("(H4) sigma_i(x_j) = t^{(gamma_i|f_j)} x_j"))
    com = rep.add(Report("quotient at t = 1 is commutative"))
    etas = []
    for p, lv in enumerate(Q.levels):
        gam = _char_vec(characters, characters.gamma, Q, p)
        fi = _char_vec(characters, characters.f, Q, p)
        rho = sum(a * b for a, b in zip(gam, fi))
        eta = -rho
        etas.append(eta)
        h1.record(
            f(eta) != 0,
            {"generator": Q.names[p], "eta": eta, "characteristic": f.characteristic},
            f"eta = {eta} vanishes in K",
        )
        if lv.eta is not None:
            h1.record(lv.eta == eta, {"generator": Q.names[p], "declared": lv.eta, "from characters": eta},
                      "declared eta differs from -(gamma|f)")
        for j, img in Q._delta[p].items():
            target = tuple(a + b for a, b in zip(_char_vec(characters, characters.f, Q, j), fi))
            for e in img.terms:
                h1.record(_weight(Q, e, characters) == target,
                          {"level": Q.names[p], "generator": Q.names[j], "monomial": Q.monomial(e)},
                          "Delta image is not an eigenvector of the expected weight")
        for j in range(p):
            gj = _char_vec(characters, characters.f, Q, j)
            lam = sum(a * b for a, b in zip(gam, gj))
            h4.record(Q._sigma[p][j] == lam,
                      {"level": Q.names[p], "generator": Q.names[j], "sigma exponent": Q._sigma[p][j],
                       "(gamma|f)": lam}, "sigma exponent differs from the pairing")
    tm1 = _t_minus_one(Q)
    for i in range(Q.n):
        for j in range(i):
            c = Q.commutator(Q.gen(i), Q.gen(j))
            ok = True
            try:
                _to_poisson(Q, c, tm1)
            except NotDivisible:
                ok = False
            com.record(ok, {"pair": (Q.names[i], Q.names[j]), "commutator": c}, "commutator not divisible by t - 1")
    for p in range(1, Q.n):
        if not Q._delta[p]:
            continue
        eta = etas[p]
        teta = LaurentPoly.monomial(f, eta, 1)
        for j in range(p):
            x = Q.gen(j)
            lhs = Q.apply_Delta(p, Q.apply_sigma(p, x))
            rhs = Q.apply_sigma(p, Q.apply_Delta(p, x)).scale(teta)
            h2.record(lhs == rhs, {"level": Q.names[p], "generator": Q.names[j], "residual": lhs - rhs})
        kmax = Q.orders[p] + (1 if Q.levels[p].nilpotent else 0)
        if h3_range and Q.names[p] in h3_range:
            kmax = h3_range[Q.names[p]]
        if f(eta) == 0:
            continue
        table = QBinomialTable(eta, f)
        for j in range(p):
            x = Q.gen(j)
            for k in range(1, kmax + 1):
                x = Q.apply_Delta(p, x)
                div = tm1 ** k * table.factorial(k)
                ok = True
                try:
                    _to_poisson(Q, x, div)
                except NotDivisible:
                    ok = False
                h3.record(ok, {"level": Q.names[p], "generator": Q.names[j], "k": k, "Delta^k": x},
                          "Delta^k image not divisible")
                if not ok:
                    break
    return rep

"""Sparse multivariate Laurent polynomials over a coefficient field."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .arith import Field

__all__ = ["PolyRing", "Poly"]


@dataclass(frozen=True)
class PolyRing:
    """Commutative (Laurent) polynomial ring with named generators.

    Exponents may be negative; whether a generator may be inverted is a
    property of the algebra using the ring, not of the ring itself.
    """

    field: Field
    names: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate generator names in {self.names}")

    @property
    def ngens(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown generator {name!r}") from None

    def gen(self, which) -> "Poly":
        i = which if isinstance(which, int) else self.index(which)
        e = [0] * self.ngens
        e[i] = 1
        return Poly(self, {tuple(e): 1})

    def gens(self) -> list["Poly"]:
        return [self.gen(i) for i in range(self.ngens)]

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.constant(1)

    def constant(self, c) -> "Poly":
        return Poly(self, {(0,) * self.ngens: c})

    def monomial(self, exps, c=1) -> "Poly":
        if isinstance(exps, Mapping):
            e = [0] * self.ngens
            for name, k in exps.items():
                e[self.index(name)] = k
            exps = e
        return Poly(self, {tuple(exps): c})

    def __call__(self, x) -> "Poly":
        if isinstance(x, Poly):
            return x if x.ring == self else x.change_ring(self)
        return self.constant(x)


class Poly:
    """Immutable sparse polynomial: ``{exponent tuple: nonzero coefficient}``."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Mapping | None = None):
        self.ring = ring
        f = ring.field
        clean = {}
        if terms:
            n = ring.ngens
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != n:
                    raise ValueError(f"exponent {e} does not match {n} generators")
                c = f(c)
                if c != 0:
                    clean[e] = f(clean.get(e, 0) + c)
                    if clean[e] == 0:
                        del clean[e]
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring, terms):
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.terms = terms
        obj._hash = None
        return obj

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise ValueError("generator-mismatch: polynomials live in different rings")
            return other
        return self.ring.constant(other)

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        other = self._coerce(other)
        f = self.ring.field
        res = dict(self.terms)
        for e, c in other.terms.items():
            v = f(res.get(e, 0) + c)
            if v:
                res[e] = v
            else:
                res.pop(e, None)
        return Poly._raw(self.ring, res)

    __radd__ = __add__

    def __neg__(self):
        f = self.ring.field
        return Poly._raw(self.ring, {e: f(-c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            f = self.ring.field
            c = f(other)
            if c == 0:
                return Poly._raw(self.ring, {})
            return Poly._raw(self.ring, {e: f(v * c) for e, v in self.terms.items()})
        other = self._coerce(other)
        f = self.ring.field
        res: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                res[e] = res.get(e, 0) + c1 * c2
        return Poly._raw(self.ring, {e: v for e, v in ((e, f(v)) for e, v in res.items()) if v != 0})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if not self.is_monomial():
                raise ValueError("only monomials can be raised to negative powers")
            (e, c), = self.terms.items()
            f = self.ring.field
            return Poly._raw(self.ring, {tuple(a * k for a in e): f(f.inv(c) ** (-k))})
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int,)):
            return self.terms == self.ring.constant(other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    # -- structure --------------------------------------------------------

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_constant(self) -> bool:
        return not self.terms or set(self.terms) == {(0,) * self.ring.ngens}

    def support(self) -> set[int]:
        """Indices of generators occurring with nonzero exponent."""
        out = set()
        for e in self.terms:
            out.update(i for i, a in enumerate(e) if a)
        return out

    def support_names(self) -> set[str]:
        return {self.ring.names[i] for i in self.support()}

    def has_negative_exponent(self, i: int) -> bool:
        return any(e[i] < 0 for e in self.terms)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def derivative(self, i: int) -> "Poly":
        f = self.ring.field
        res = {}
        for e, c in self.terms.items():
            if e[i]:
                v = f(c * e[i])
                if v:
                    e2 = list(e)
                    e2[i] -= 1
                    res[tuple(e2)] = v
        return Poly._raw(self.ring, res)

    def scale_by_weight(self, weights) -> "Poly":
        """Apply the diagonal derivation ``X_i -> w_i X_i`` (``m -> <e, w> m``)."""
        f = self.ring.field
        res = {}
        for e, c in self.terms.items():
            w = sum(a * b for a, b in zip(e, weights) if a)
            v = f(c * w)
            if v:
                res[e] = v
        return Poly._raw(self.ring, res)

    def coefficients_in(self, i: int) -> dict[int, "Poly"]:
        """Split as ``sum_k c_k X_i^k`` with ``c_k`` free of ``X_i``."""
        out: dict[int, dict] = {}
        for e, c in self.terms.items():
            e2 = list(e)
            k = e2[i]
            e2[i] = 0
            out.setdefault(k, {})[tuple(e2)] = c
        return {k: Poly._raw(self.ring, t) for k, t in out.items()}

    def change_ring(self, ring: PolyRing) -> "Poly":
        """Re-express in another ring over the same field, matching generators by name."""
        if ring == self.ring:
            return self
        if ring.field != self.ring.field:
            raise ValueError("cannot change coefficient field")
        pos = []
        for i, name in enumerate(self.ring.names):
            if name in ring.names:
                pos.append(ring.index(name))
            else:
                pos.append(None)
        res = {}
        for e, c in self.terms.items():
            new = [0] * ring.ngens
            for i, a in enumerate(e):
                if a:
                    if pos[i] is None:
                        raise ValueError(f"generator {self.ring.names[i]!r} missing from target ring")
                    new[pos[i]] = a
            res[tuple(new)] = c
        return Poly._raw(ring, res)

    def subs(self, images: Mapping, ring: PolyRing | None = None) -> "Poly":
        """Algebra substitution ``X_i -> images[X_i]``.

        ``images`` may be keyed by generator name or index; unlisted
        generators map to themselves.  Negative exponents are allowed only
        where the image is a monomial.
        """
        target = ring or self.ring
        imgs: list[Poly] = []
        for i, name in enumerate(self.ring.names):
            if name in images:
                img = images[name]
            elif i in images:
                img = images[i]
            else:
                img = self.ring.gen(i)
            imgs.append(target(img))
        cache: dict[tuple[int, int], Poly] = {}

        def power(i, k):
            key = (i, k)
            if key not in cache:
                if k < 0 and not imgs[i].is_monomial():
                    raise ValueError(
                        f"cannot substitute a non-monomial for inverted generator {self.ring.names[i]!r}"
                    )
                cache[key] = imgs[i] ** k
            return cache[key]

        total = target.zero()
        for e, c in self.terms.items():
            term = target.constant(c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            total = total + term
        return total

    def monomials(self) -> list["Poly"]:
        return [Poly._raw(self.ring, {e: 1}) for e in self.sorted_exponents()]

    def sorted_exponents(self) -> list[tuple]:
        return sorted(self.terms, reverse=True)

    # -- printing ---------------------------------------------------------

    def _mono_str(self, e) -> str:
        parts = []
        for name, k in zip(self.ring.names, e):
            if k == 1:
                parts.append(name)
            elif k:
                parts.append(f"{name}^{k}")
        return "*".join(parts)

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for e in self.sorted_exponents():
            cs = self.ring.field.fmt(self.terms[e])
            neg = cs.startswith("-")
            if neg:
                cs = cs[1:]
            mono = self._mono_str(e)
            if not mono:
                body = cs
            elif cs == "1":
                body = mono
            else:
                body = f"{cs}*{mono}"
            if not out:
                out.append(("-" if neg else "") + body)
            else:
                out.append(("- " if neg else "+ ") + body)
        return " ".join(out)

    def __repr__(self):
        return f"Poly({self})"


def poly_sum(ring: PolyRing, items: Iterable[Poly]) -> Poly:
    total = ring.zero()
    for p in items:
        total = total + p
    return total

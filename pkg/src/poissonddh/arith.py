"""Exact coefficient arithmetic.

Two kinds of base field are supported, the rationals and prime fields
``F_p``, together with the ring ``K[t, t^-1]`` of Laurent polynomials in
the deformation parameter ``t``.  Field elements are plain Python values
(``int`` / ``Fraction`` for QQ, canonical residues ``0..p-1`` for F_p) so
that polynomial code can use ordinary operators and renormalise through
the field.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

__all__ = [
    "NotDivisible",
    "Field",
    "RationalField",
    "PrimeField",
    "QQ",
    "GF",
    "field_for",
    "LaurentPoly",
    "q_integer",
    "q_factorial",
    "q_binomial",
    "QBinomialTable",
    "laurent_exact_div",
    "eval_at_one",
]


class NotDivisible(ArithmeticError):
    """An exact division left a nonzero remainder."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class Field:
    """Common interface of the coefficient fields."""

    characteristic: int

    def __call__(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def inv(self, x):
        raise NotImplementedError

    def div(self, a, b):
        return self(a * self.inv(b))

    def is_zero(self, x) -> bool:
        return self(x) == 0

    def fmt(self, x) -> str:
        return str(x)


class RationalField(Field):
    characteristic = 0

    def __call__(self, x):
        if isinstance(x, int):
            return x
        if isinstance(x, Fraction):
            return x.numerator if x.denominator == 1 else x
        if isinstance(x, Rational):
            return self(Fraction(x.numerator, x.denominator))
        if isinstance(x, str):
            return self(Fraction(x))
        raise TypeError(f"cannot coerce {x!r} into QQ")

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero in QQ")
        return self(Fraction(1) / x)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


class PrimeField(Field):
    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError(f"{p} is not a prime")
        self.characteristic = p

    def __call__(self, x):
        p = self.characteristic
        if isinstance(x, int):
            return x % p
        if isinstance(x, Rational):
            den = x.denominator % p
            if den == 0:
                raise ZeroDivisionError(f"denominator {x.denominator} vanishes mod {p}")
            return x.numerator * pow(den, -1, p) % p
        if isinstance(x, str):
            return self(Fraction(x))
        raise TypeError(f"cannot coerce {x!r} into GF({p})")

    def inv(self, x):
        x = self(x)
        if x == 0:
            raise ZeroDivisionError(f"inverse of zero in GF({self.characteristic})")
        return pow(x, -1, self.characteristic)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("GF", self.characteristic))

    def __repr__(self):
        return f"GF({self.characteristic})"


QQ = RationalField()

_prime_fields: dict[int, PrimeField] = {}


def GF(p: int) -> PrimeField:
    if p not in _prime_fields:
        _prime_fields[p] = PrimeField(p)
    return _prime_fields[p]


def field_for(characteristic: int) -> Field:
    """QQ for characteristic 0, otherwise the prime field."""
    return QQ if characteristic == 0 else GF(characteristic)


class LaurentPoly:
    """Element of ``K[t, t^-1]`` stored sparsely as ``{exponent: coefficient}``."""

    __slots__ = ("field", "terms", "_hash")

    def __init__(self, field: Field, terms=None):
        self.field = field
        clean = {}
        if terms:
            for e, c in terms.items():
                c = field(c)
                if c != 0:
                    clean[int(e)] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, field, terms):
        obj = cls.__new__(cls)
        obj.field = field
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, field: Field, c=1) -> "LaurentPoly":
        return cls(field, {0: c})

    @classmethod
    def monomial(cls, field: Field, e: int, c=1) -> "LaurentPoly":
        return cls(field, {e: c})

    @classmethod
    def t(cls, field: Field) -> "LaurentPoly":
        return cls(field, {1: 1})

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            if other.field != self.field:
                raise ValueError(f"mixing {self.field!r} and {other.field!r}")
            return other
        return LaurentPoly(self.field, {0: other})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        other = self._coerce(other)
        f = self.field
        res = dict(self.terms)
        for e, c in other.terms.items():
            v = f(res.get(e, 0) + c)
            if v:
                res[e] = v
            else:
                res.pop(e, None)
        return LaurentPoly._raw(f, res)

    __radd__ = __add__

    def __neg__(self):
        f = self.field
        return LaurentPoly._raw(f, {e: f(-c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        f = self.field
        res: dict[int, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                res[e] = res.get(e, 0) + c1 * c2
        return LaurentPoly(f, res)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials can be inverted in K[t, t^-1]")
            (e, c), = self.terms.items()
            return LaurentPoly(self.field, {e * k: self.field.inv(c) ** (-k)})
        result = LaurentPoly.constant(self.field, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.field == other.field and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == LaurentPoly(self.field, {0: other}).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def valuation(self) -> int:
        return min(self.terms)

    def degree(self) -> int:
        return max(self.terms)

    def constant_value(self):
        """The coefficient of ``t^0`` if this is a constant, else raise."""
        if not self.terms:
            return self.field.zero
        if set(self.terms) != {0}:
            raise ValueError(f"{self} is not a constant")
        return self.terms[0]

    def exact_div(self, other) -> "LaurentPoly":
        """Quotient ``q`` with ``self == q * other``; raises :class:`NotDivisible`."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero Laurent polynomial")
        f = self.field
        if self.is_zero():
            return LaurentPoly._raw(f, {})
        va, vb = self.valuation(), other.valuation()
        # shift both to polynomials with nonzero constant term
        rem = {e - va: c for e, c in self.terms.items()}
        den = {e - vb: c for e, c in other.terms.items()}
        db = max(den)
        lead_inv = f.inv(den[db])
        quot = {}
        while rem:
            dr = max(rem)
            if dr < db:
                raise NotDivisible(f"{self} is not divisible by {other}")
            c = f(rem[dr] * lead_inv)
            shift = dr - db
            quot[shift] = c
            for e, d in den.items():
                k = e + shift
                v = f(rem.get(k, 0) - c * d)
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
        return LaurentPoly(f, {e + va - vb: c for e, c in quot.items()})

    def eval_at_one(self):
        f = self.field
        return f(sum(self.terms.values()))

    def substitute_power(self, k: int) -> "LaurentPoly":
        """The element ``p(t^k)``."""
        return LaurentPoly(self.field, {e * k: c for e, c in self.terms.items()})

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            cs = self.field.fmt(c)
            neg = cs.startswith("-")
            if neg:
                cs = cs[1:]
            if e == 0:
                body = cs
            else:
                mono = "t" if e == 1 else f"t^{e}"
                body = mono if cs == "1" else f"{cs}*{mono}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append(("- " if neg else "+ ") + body)
        return " ".join(parts)

    def __repr__(self):
        return f"LaurentPoly({self})"


def q_integer(i: int, eta: int, field: Field = QQ) -> LaurentPoly:
    """``(i)_q`` with ``q = t^eta``, i.e. ``1 + q + ... + q^(i-1)``."""
    if i < 0:
        raise ValueError("q-integers are defined for i >= 0")
    terms: dict[int, int] = {}
    for k in range(i):
        terms[eta * k] = terms.get(eta * k, 0) + 1
    return LaurentPoly(field, terms)


def q_factorial(i: int, eta: int, field: Field = QQ) -> LaurentPoly:
    result = LaurentPoly.constant(field, 1)
    for m in range(1, i + 1):
        result = result * q_integer(m, eta, field)
    return result


def q_binomial(i: int, k: int, eta: int, field: Field = QQ) -> LaurentPoly:
    if not 0 <= k <= i:
        raise ValueError("q_binomial requires 0 <= k <= i")
    return QBinomialTable(eta, field).binomial(i, k)


class QBinomialTable:
    """Cached q-factorials ``(i)!_{t^eta}`` over a fixed field."""

    def __init__(self, eta: int, field: Field = QQ):
        self.eta = eta
        self.field = field
        self._fact = [LaurentPoly.constant(field, 1)]

    def factorial(self, i: int) -> LaurentPoly:
        while len(self._fact) <= i:
            m = len(self._fact)
            self._fact.append(self._fact[-1] * q_integer(m, self.eta, self.field))
        return self._fact[i]

    def binomial(self, i: int, k: int) -> LaurentPoly:
        if not 0 <= k <= i:
            raise ValueError("binomial requires 0 <= k <= i")
        den = self.factorial(i - k) * self.factorial(k)
        return self.factorial(i).exact_div(den)


def laurent_exact_div(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a.exact_div(b)


def eval_at_one(a: LaurentPoly):
    return a.eval_at_one()

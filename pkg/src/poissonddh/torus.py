"""Torus characters and the torus-invariant Poisson primes of Poisson affine spaces.

For a log-canonical algebra ``K[Y_1, ..., Y_n]`` with ``{Y_i, Y_j} =
lambda_ij Y_i Y_j`` the invariant Poisson primes are the ideals ``J_w``
generated by ``{Y_i : i in w}``; the quotient by ``J_w`` is again
log-canonical, with the rows and columns in ``w`` deleted from lambda.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Mapping, Sequence

from .ddh import LambdaMatrix
from .poisson import PoissonPresentation, log_canonical_presentation
from .poly import PolyRing
from .report import Report

__all__ = [
    "CharacterData",
    "JwIdeal",
    "check_hyp",
    "enumerate_Jw",
    "verify_Jw_poisson",
    "quotient_affine",
]


class CharacterData:
    """Characters ``f`` and vectors ``gamma`` in ``Z^r`` for each generator name."""

    def __init__(self, r: int, f: Mapping[str, Sequence[int]], gamma: Mapping[str, Sequence[int]]):
        self.r = r
        self.f = {k: tuple(int(x) for x in v) for k, v in f.items()}
        self.gamma = {k: tuple(int(x) for x in v) for k, v in gamma.items()}
        if set(self.f) != set(self.gamma):
            raise ValueError("f and gamma must be given for the same generators")
        for k in self.f:
            if len(self.f[k]) != r or len(self.gamma[k]) != r:
                raise ValueError(f"character vectors of {k!r} must have length {r}")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self.f)

    def pairing(self, a: str, b: str) -> int:
        """``(gamma_a | f_b)`` over the integers."""
        return sum(x * y for x, y in zip(self.gamma[a], self.f[b]))

    def rho(self, a: str) -> int:
        return self.pairing(a, a)

    def renamed(self, mapping: Mapping[str, str]) -> "CharacterData":
        return CharacterData(
            self.r,
            {mapping.get(k, k): v for k, v in self.f.items()},
            {mapping.get(k, k): v for k, v in self.gamma.items()},
        )

    def perturbed(self, name: str, coord: int = 0, by: int = 1) -> "CharacterData":
        f = dict(self.f)
        v = list(f[name])
        v[coord] += by
        f[name] = tuple(v)
        return CharacterData(self.r, f, self.gamma)

    def to_dict(self) -> dict:
        return {"r": self.r, "f": {k: list(v) for k, v in self.f.items()},
                "gamma": {k: list(v) for k, v in self.gamma.items()}}

    def __eq__(self, other):
        if not isinstance(other, CharacterData):
            return NotImplemented
        return self.r == other.r and self.f == other.f and self.gamma == other.gamma

    def __repr__(self):
        return f"CharacterData(r={self.r}, {len(self.f)} generators)"


def check_hyp(characters: CharacterData, lam: LambdaMatrix, field=None) -> Report:
    """``lambda_ij = (gamma_i|f_j)`` in K for ``i > j`` and ``rho_i = (gamma_i|f_i) != 0`` in K."""
    K = field if field is not None else lam.field
    rep = Report("torus hypothesis")
    rl = rep.add(Report("lambda_ij = (gamma_i|f_j)"))
    rr = rep.add(Report("rho_i = (gamma_i|f_i) nonzero in K"))
    names = lam.names
    for i, a in enumerate(names):
        for b in names[:i]:
            want = K(characters.pairing(a, b))
            rl.record(K(lam[a, b]) == want, {"pair": (a, b), "lambda": lam[a, b], "pairing": want},
                      "lambda differs from the character pairing")
        rho = characters.rho(a)
        rr.record(K(rho) != 0, {"generator": a, "rho": rho, "characteristic": K.characteristic},
                  "rho vanishes in K")
    return rep


@dataclass
class JwIdeal:
    """``J_w = <Y_i | i in w>`` with the quotient matrix."""

    w: tuple[str, ...]
    quotient: LambdaMatrix
    report: Report | None = None

    @property
    def generators(self) -> tuple[str, ...]:
        return self.w

    @property
    def verified(self) -> bool:
        return bool(self.report)

    def to_dict(self) -> dict:
        out = {"w": list(self.w), "quotient": self.quotient.to_dict()}
        if self.report is not None:
            out["passed"] = self.report.passed
        return out


def _lambda_of(B: PoissonPresentation) -> LambdaMatrix:
    lam = B.log_canonical_matrix()
    if lam is None:
        raise ValueError("presentation is not log-canonical")
    return LambdaMatrix(B.field, B.generators, lam)


def verify_Jw_poisson(B: PoissonPresentation, w: Sequence[str]) -> Report:
    """Every monomial of ``{Y_j, Y_i}``, ``i in w``, contains some ``Y_k`` with ``k in w``."""
    ring = B.ring
    ws = set(w)
    idx = {ring.index(g) for g in ws}
    rep = Report(f"J_w Poisson for w = {{{', '.join(g for g in B.generators if g in ws)}}}")
    for i in B.generators:
        if i not in ws:
            continue
        for j in B.generators:
            br = B.gen_bracket(j, i)
            for e in br.terms:
                ok = any(e[k] > 0 for k in idx)
                if not rep.record(ok, {"pair": (j, i), "monomial": ring.monomial(e)},
                                  "bracket monomial outside J_w"):
                    return rep
            if not br.terms:
                rep.record(True)
    return rep


def quotient_affine(B: PoissonPresentation, w: Sequence[str]) -> PoissonPresentation:
    """``B / J_w`` as the log-canonical algebra on the remaining generators."""
    ws = set(w)
    unknown = ws - set(B.generators)
    if unknown:
        raise ValueError(f"w contains unknown generators {sorted(unknown)}")
    keep = [g for g in B.generators if g not in ws]
    if not ws:
        return B
    sub = _lambda_of(B).submatrix(keep)
    ring = PolyRing(B.field, tuple(keep))
    lam = {}
    for i, a in enumerate(keep):
        for b in keep[:i]:
            lam[(a, b)] = sub[a, b]
    inv = [g for g in B.invertible if g in keep]
    return log_canonical_presentation(ring, lam, keep, inv)


def enumerate_Jw(B: PoissonPresentation, verify: bool = True) -> list[JwIdeal]:
    """All ``2^n`` ideals ``J_w`` in binary order (bit ``i`` set means generator ``i`` is in ``w``)."""
    lam = _lambda_of(B)
    names = B.generators
    n = len(names)
    out = []
    for bits in product((0, 1), repeat=n):
        # binary counting with the first generator as the least significant bit
        w = tuple(names[i] for i in range(n) if bits[n - 1 - i])
        keep = [g for g in names if g not in w]
        ideal = JwIdeal(w, lam.submatrix(keep))
        if verify:
            ideal.report = verify_Jw_poisson(B, w)
        out.append(ideal)
    return out

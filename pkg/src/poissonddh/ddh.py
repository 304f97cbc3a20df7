"""The Poisson deleting-derivation homomorphism and the full deletion pipeline.

For a top level ``X`` with higher-derivation data ``(D_k)`` and scalar
``eta`` the map

    F(a) = sum_k eta^-k D_k(a) X^-k,    F(Y) = X

is a Poisson isomorphism ``A[Y^{+-1}; alpha] -> A[X^{+-1}; alpha, delta]``.
Its inverse sends ``a`` to ``sum_k (-eta)^-k D_k(a) Y^-k``, which follows
from iterativity.  ``run_ddh`` alternates deletions at the top with
moving log-canonical tops to the front until every ``delta`` vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

from .poisson import (
    OreLevel,
    OreTower,
    PoissonPresentation,
    log_canonical_presentation,
    reorder_tower,
    verify_higher_axioms,
)
from .poly import Poly
from .report import Report

__all__ = [
    "LambdaMatrix",
    "StepRecord",
    "ReorderRecord",
    "BirationalRecord",
    "ddh_step",
    "verify_step_poisson",
    "check_compatibility",
    "run_ddh",
    "check_equivariance",
]


class LambdaMatrix:
    """Skew-symmetric matrix over K indexed by generator names."""

    def __init__(self, field, names: Sequence[str], entries):
        self.field = field
        self.names = tuple(names)
        n = len(self.names)
        if isinstance(entries, dict):
            rows = [[field.zero] * n for _ in range(n)]
            pos = {a: i for i, a in enumerate(self.names)}
            for (a, b), v in entries.items():
                rows[pos[a]][pos[b]] = field(v)
        else:
            rows = [[field(v) for v in row] for row in entries]
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ValueError("matrix shape does not match the names")
        for i in range(n):
            if rows[i][i] != 0:
                raise ValueError("lambda matrix must have zero diagonal")
            for j in range(i):
                if field(rows[i][j] + rows[j][i]) != 0:
                    raise ValueError(f"lambda matrix not skew at ({self.names[i]}, {self.names[j]})")
        self.rows = rows
        self._pos = {a: i for i, a in enumerate(self.names)}

    @property
    def n(self) -> int:
        return len(self.names)

    def __getitem__(self, key):
        a, b = key
        i = a if isinstance(a, int) else self._pos[a]
        j = b if isinstance(b, int) else self._pos[b]
        return self.rows[i][j]

    def submatrix(self, keep: Sequence[str]) -> "LambdaMatrix":
        keep = [a for a in self.names if a in set(keep)]
        return LambdaMatrix(self.field, keep, [[self[a, b] for b in keep] for a in keep])

    def presentation(self, ring, invertible=()) -> PoissonPresentation:
        lam = {}
        for i, a in enumerate(self.names):
            for b in self.names[:i]:
                lam[(a, b)] = self[a, b]
        return log_canonical_presentation(ring, lam, self.names, invertible)

    def __eq__(self, other):
        if not isinstance(other, LambdaMatrix):
            return NotImplemented
        return self.names == other.names and self.rows == other.rows and self.field == other.field

    def to_dict(self) -> dict[str, Any]:
        fmt = self.field.fmt
        return {"names": list(self.names), "rows": [[fmt(v) for v in r] for r in self.rows]}

    def __str__(self):
        fmt = self.field.fmt
        cells = [[fmt(v) for v in r] for r in self.rows]
        width = max([len(a) for a in self.names] + [len(c) for r in cells for c in r] + [1])
        head = " " * (width + 1) + " ".join(a.rjust(width) for a in self.names)
        body = [a.rjust(width) + " " + " ".join(c.rjust(width) for c in r) for a, r in zip(self.names, cells)]
        return "\n".join([head] + body)

    def __repr__(self):
        return f"LambdaMatrix({list(self.names)})"


@dataclass
class StepRecord:
    """One deletion: ``F`` maps ``after`` (Y = X, delta dropped) into ``before``."""

    deleted: str
    eta: Any
    images: dict[str, Poly]
    before: OreTower
    after: OreTower
    tower: OreTower
    inverse_images: dict[str, Poly] = field(default_factory=dict)
    report: Report | None = None

    kind = "delete"

    def apply(self, p: Poly) -> Poly:
        return p.subs(self.images)

    def apply_inverse(self, p: Poly) -> Poly:
        return p.subs(self.inverse_images)

    def trace_lines(self) -> list[str]:
        out = [f"delete {self.deleted} (eta = {self.before.field.fmt(self.eta)})"]
        for g, img in self.images.items():
            if g != self.deleted and img != self.before.ring.gen(g):
                out.append(f"  F({g}) = {img}")
        if self.report is not None:
            out.append(f"  step check: {'PASS' if self.report else 'FAIL'} ({self.report.total} identities)")
        return out


@dataclass
class ReorderRecord:
    """A log-canonical top generator inverted and moved to the front."""

    moved: str
    tower: OreTower

    kind = "reorder"

    def trace_lines(self) -> list[str]:
        return [f"move {self.moved} to the front"]


@dataclass
class BirationalRecord:
    """Steps of a run and the composed change of variables.

    ``images`` sends each original generator to a Laurent polynomial in
    the final log-canonical generators.  ``forward_image`` composes the
    step maps ``F`` the other way; it is Laurent only when each inverted
    generator's intermediate image stays a monomial.
    """

    original: OreTower
    final: OreTower
    steps: list = field(default_factory=list)
    images: dict[str, Poly] = field(default_factory=dict)

    def deletions(self) -> list[StepRecord]:
        return [s for s in self.steps if s.kind == "delete"]

    def forward_image(self, name: str) -> Poly:
        p = self.final.ring.gen(name)
        for step in reversed(self.deletions()):
            p = step.apply(p)
        return p

    def forward_images(self) -> dict[str, Poly]:
        return {g: self.forward_image(g) for g in self.final.names}

    def trace_lines(self) -> list[str]:
        out = []
        for s in self.steps:
            out.extend(s.trace_lines())
        return out

    def to_dict(self) -> dict[str, Any]:
        return {
            "steps": [s.trace_lines() for s in self.steps],
            "images": {g: str(p) for g, p in self.images.items()},
        }


def ddh_step(tower: OreTower, which) -> StepRecord:
    """Delete the derivation of the top level ``which`` and move it to the front."""
    name = which if isinstance(which, str) else tower.names[which]
    top = tower.levels[-1]
    if top.name != name:
        raise ValueError(f"deletion acts on the top level {top.name!r}, not {name!r}")
    if top.D is None:
        raise ValueError(f"level {name!r} has no higher-derivation data")
    if top.eta is None or tower.field(top.eta) == 0:
        raise ValueError(f"level {name!r} needs a nonzero eta")
    if not top.nilpotent:
        raise ValueError(f"level {name!r} has no certified nilpotency bound")
    f = tower.field
    ring = tower.ring
    before = tower.localize(name)
    lv = before.level(name)
    N = lv.bound
    X = ring.gen(name)
    Xinv = X ** -1
    eta_inv = f.inv(lv.eta)
    images = {}
    inverse = {}
    for g in lv.below:
        s = lv.series(ring.gen(g), N)
        fwd = ring.zero()
        bwd = ring.zero()
        xp = ring.one()
        c_f = f.one
        c_b = f.one
        for k in range(N + 1):
            if s[k]:
                fwd = fwd + s[k] * xp * c_f
                bwd = bwd + s[k] * xp * c_b
            xp = xp * Xinv
            c_f = f(c_f * eta_inv)
            c_b = f(-c_b * eta_inv)
        images[g] = fwd
        inverse[g] = bwd
    images[name] = X
    inverse[name] = X
    plain = OreLevel(name, dict(lv.alpha), {}, lv.eta, (), True, True)
    after = before.replace_level(plain)
    new = reorder_tower(after, name)
    return StepRecord(name, lv.eta, images, before, after, new, inverse)


def verify_step_poisson(
    record: StepRecord,
    P_before: PoissonPresentation | None = None,
    P_after: PoissonPresentation | None = None,
) -> Report:
    """``F({a,b}) = {F a, F b}`` and ``{X, F a} = F(alpha a) X`` on generator pairs."""
    Pb = P_before if P_before is not None else record.before.presentation()
    Pa = P_after if P_after is not None else record.after.presentation()
    lv = record.after.level(record.deleted)
    ring = Pb.ring
    X = ring.gen(record.deleted)
    w = lv.alpha_weights(ring)
    rep = Report(f"F is Poisson at {record.deleted}")
    hom = rep.add(Report("F({a,b}) = {F(a), F(b)}"))
    skew = rep.add(Report("{X, F(a)} = F(alpha(a)) X"))
    gens = list(lv.below)
    for x, an in enumerate(gens):
        a = ring.gen(an)
        Fa = record.apply(a)
        for bn in gens[x + 1:]:
            b = ring.gen(bn)
            lhs = record.apply(Pa.bracket(a, b))
            rhs = Pb.bracket(Fa, record.apply(b))
            hom.record(lhs == rhs, {"pair": (an, bn), "residual": lhs - rhs}, "F fails on a bracket")
        lhs = Pb.bracket(X, Fa)
        rhs = record.apply(a.scale_by_weight(w)) * X
        skew.record(lhs == rhs, {"generator": an, "residual": lhs - rhs}, "{X, F(a)} mismatch")
    record.report = rep
    return rep


def check_compatibility(tower: OreTower) -> Report:
    """``alpha_i D_{j,k} = D_{j,k} alpha_i + k lambda_ij D_{j,k}`` for ``j < i`` on generator images."""
    ring = tower.ring
    f = tower.field
    rep = Report("alpha/D compatibility")
    for p, lj in enumerate(tower.levels):
        if lj.D is None:
            continue
        for li in tower.levels[p + 1:]:
            w = li.alpha_weights(ring)
            lam_ij = li.alpha.get(lj.name, f.zero)
            for k, imgs in enumerate(lj.D, start=1):
                for g, img in imgs.items():
                    target = f(li.alpha.get(g, 0) + k * lam_ij)
                    lhs = img.scale_by_weight(w)
                    rep.record(
                        lhs == img * target,
                        {"alpha": li.name, "D": f"D_{lj.name},{k}", "generator": g, "residual": lhs - img * target},
                        "compatibility fails",
                    )
    return rep


def _check_final(original: OreTower, final: OreTower, images: dict[str, Poly], lam: LambdaMatrix) -> Report:
    rep = Report("composed map is Poisson into the log-canonical algebra")
    P0 = original.presentation()
    B = lam.presentation(final.ring, final.invertible)
    names = original.names
    for x, a in enumerate(names):
        for b in names[x + 1:]:
            lhs = B.bracket(images[a], images[b])
            rhs = P0.bracket(original.ring.gen(a), original.ring.gen(b)).subs(images)
            rep.record(lhs == rhs, {"pair": (a, b), "residual": lhs - rhs}, "composed map is not Poisson")
    return rep


def run_ddh(tower: OreTower, verify: bool = True, trace=None) -> tuple[LambdaMatrix, BirationalRecord]:
    """Delete derivations from the top down until the tower is log-canonical.

    Returns the lambda matrix (indexed by the original generator order)
    and the record of the steps.  With ``verify`` set, each level's
    axioms, the alpha/D compatibility and every step are checked, and the
    first failure raises ``RuntimeError``.
    """
    ring = tower.ring
    if verify:
        comp = check_compatibility(tower)
        if not comp:
            raise RuntimeError(f"compatibility hypothesis fails:\n{comp}")
        P = tower.presentation()
        for lv in tower.levels:
            if lv.delta_is_zero():
                continue
            if lv.D is None or not lv.nilpotent:
                raise RuntimeError(f"level {lv.name!r} has nonzero delta but no nilpotent higher derivation")
            ax = verify_higher_axioms(lv, P, samples=0)
            if not ax:
                raise RuntimeError(f"higher-derivation axioms fail:\n{ax}")
    cur = tower
    steps: list = []
    while not cur.is_log_canonical():
        top = cur.levels[-1]
        if top.delta_is_zero():
            cur = reorder_tower(cur.localize(top.name), top.name)
            steps.append(ReorderRecord(top.name, cur))
        else:
            rec = ddh_step(cur, top.name)
            if verify:
                rep = verify_step_poisson(rec)
                if not rep:
                    raise RuntimeError(f"step at {top.name} failed:\n{rep}")
            cur = rec.tower
            steps.append(rec)
        if trace is not None:
            for line in steps[-1].trace_lines():
                trace(line)
    f = tower.field
    names = tower.names
    lam = LambdaMatrix(f, names, [[cur.lam(a, b) for b in names] for a in names])
    images = {g: ring.gen(g) for g in names}
    for rec in steps:
        if rec.kind == "delete":
            images = {g: rec.apply_inverse(p) for g, p in images.items()}
    record = BirationalRecord(tower, cur, steps, images)
    if verify:
        rep = _check_final(tower, cur, images, lam)
        if not rep:
            raise RuntimeError(str(rep))
    return lam, record


def check_equivariance(tower: OreTower, characters) -> Report:
    """Compare the character weight of every monomial of ``D_{i,k}(X_j)`` with ``f_j + k f_i``."""
    ring = tower.ring
    rep = Report("torus equivariance of the higher derivations")
    wt = {g: tuple(characters.f[g]) for g in tower.names}
    r = len(next(iter(wt.values()))) if wt else 0
    for lv in tower.levels:
        if lv.D is not None:
            data = list(enumerate(lv.D, start=1))
        else:
            data = [(1, lv.delta)]
        for k, imgs in data:
            for g in lv.below or ():
                img = imgs.get(g)
                if not img:
                    continue
                target = tuple(wt[g][c] + k * wt[lv.name][c] for c in range(r))
                for e in img.terms:
                    got = [0] * r
                    for i, a in enumerate(e):
                        if a:
                            for c in range(r):
                                got[c] += a * wt[ring.names[i]][c]
                    mono = ring.monomial(e)
                    ok = rep.record(
                        tuple(got) == target,
                        {"level": lv.name, "k": k, "generator": g, "monomial": mono,
                         "weight": tuple(got), "expected": target},
                        "monomial weight differs from f_j + k f_i",
                    )
                    if not ok:
                        return rep
    return rep


"""JSON algebra descriptions and the polynomial-literal grammar.

A description is a JSON object::

    {
      "characteristic": 0,
      "mode": "poisson-presentation" | "ore-tower" | "quantum-tower" | "builtin",
      "generators": ["X1", {"name": "X2", "invertible": true}, ...],
      "brackets": {"X2,X1": "X1*X2"},            # poisson-presentation
      "levels": [...],                           # ore-tower / quantum-tower
      "builtin": {"name": "qmatrices", "n": 2},  # builtin
      "characters": {"r": 1, "f": {...}, "gamma": {...}}
    }

Ore-tower levels carry ``name``, ``alpha`` (scalars), ``delta``, ``eta``,
``D`` (a list of image maps for k = 1, 2, ...) and ``nilpotent``.
Quantum levels carry ``name``, ``sigma`` (integer exponents), ``Delta``,
``eta``, ``order``, ``nilpotent`` and ``poisson_name``.  Polynomial
literals use integers, fractions of integers, generator names, ``t``
(quantum images only) and ``+ - * ^`` with parentheses.  Quantum
monomials are read in normal order.
"""

from __future__ import annotations

import ast
import json
from fractions import Fraction
from typing import Any

from .arith import LaurentPoly, field_for
from .poisson import OreLevel, OreTower, PoissonPresentation
from .poly import Poly, PolyRing
from .quantum import QLevel, QuantumTower
from .torus import CharacterData

__all__ = [
    "DescriptionError",
    "AlgebraDescription",
    "parse_description",
    "parse_poly",
    "describe_presentation",
    "describe_tower",
    "describe_quantum",
]

MODES = ("poisson-presentation", "ore-tower", "quantum-tower", "builtin")


class DescriptionError(ValueError):
    """Malformed or inconsistent description; ``where`` locates the field."""

    def __init__(self, message: str, where: str = ""):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


def parse_poly(text, ring: PolyRing, allow_t: bool = False, where: str = ""):
    """Parse a literal into ``ring``; with ``allow_t`` return ``{exponents: LaurentPoly}``."""
    if isinstance(text, (int, Fraction)):
        text = str(text)
    if not isinstance(text, str):
        raise DescriptionError(f"expected a polynomial string, got {text!r}", where)
    src = text.replace("^", "**")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise DescriptionError(f"cannot parse {text!r} ({exc.msg} at column {exc.offset})", where) from None
    if allow_t:
        if "t" in ring.names:
            raise DescriptionError("generator name 't' clashes with the deformation parameter", where)
        big = PolyRing(ring.field, ring.names + ("t",))
    else:
        big = ring
    value = _eval(tree.body, big, text, where)
    if not isinstance(value, Poly):
        value = big.constant(value)
    if not allow_t:
        return value
    out: dict = {}
    n = ring.ngens
    for e, c in value.terms.items():
        if any(a < 0 for a in e[:n]):
            raise DescriptionError(f"negative generator exponent in quantum literal {text!r}", where)
        key = e[:n]
        lp = out.get(key, LaurentPoly(ring.field))
        out[key] = lp + LaurentPoly(ring.field, {e[n]: c})
    return {k: v for k, v in out.items() if v}


def _eval(node, ring: PolyRing, text: str, where: str):
    f = ring.field
    if isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, int):
            raise DescriptionError(f"only integer constants are allowed in {text!r}", where)
        return node.value
    if isinstance(node, ast.Name):
        if node.id not in ring.names:
            raise DescriptionError(f"unknown generator {node.id!r} in {text!r}", where)
        return ring.gen(node.id)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval(node.operand, ring, text, where)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        a = _eval(node.left, ring, text, where)
        if isinstance(node.op, ast.Pow):
            k = _eval(node.right, ring, text, where)
            if isinstance(k, Poly) or not isinstance(k, int):
                raise DescriptionError(f"exponents must be integers in {text!r}", where)
            if not isinstance(a, Poly):
                if k < 0:
                    return Fraction(1, a ** -k) if a else _zero_div(text, where)
                return a ** k
            try:
                return a ** k
            except ValueError as exc:
                raise DescriptionError(f"{exc} in {text!r}", where) from None
        b = _eval(node.right, ring, text, where)
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
        if isinstance(node.op, ast.Div):
            if isinstance(b, Poly):
                if not b.is_constant() or b.is_zero():
                    raise DescriptionError(f"division only by nonzero constants in {text!r}", where)
                b = next(iter(b.terms.values()))
            if b == 0 or f(b) == 0:
                return _zero_div(text, where)
            return a * f.inv(b) if isinstance(a, Poly) else Fraction(a) / Fraction(b)
    raise DescriptionError(f"unsupported syntax in {text!r}", where)


def _zero_div(text, where):
    raise DescriptionError(f"division by zero in {text!r}", where)


def _scalar(value, field, where: str):
    if isinstance(value, bool):
        raise DescriptionError("expected a scalar", where)
    if isinstance(value, int):
        return field(value)
    if isinstance(value, str):
        try:
            return field(Fraction(value.replace(" ", "")))
        except (ValueError, ZeroDivisionError):
            raise DescriptionError(f"bad scalar {value!r}", where) from None
    raise DescriptionError(f"expected a scalar, got {value!r}", where)


def _int(value, where: str, allow_none: bool = False):
    if value is None and allow_none:
        return None
    if isinstance(value, bool) or not isinstance(value, int):
        raise DescriptionError(f"expected an integer, got {value!r}", where)
    return value


class AlgebraDescription:
    """Validated, mode-tagged description of an algebra."""

    def __init__(self, data: dict[str, Any]):
        if not isinstance(data, dict):
            raise DescriptionError("a description must be a JSON object")
        self.data = data
        char = data.get("characteristic", 0)
        self.characteristic = _int(char, "characteristic")
        try:
            self.field = field_for(self.characteristic)
        except ValueError as exc:
            raise DescriptionError(str(exc), "characteristic") from None
        mode = data.get("mode")
        if mode not in MODES:
            raise DescriptionError(f"mode must be one of {', '.join(MODES)}", "mode")
        self.mode = mode
        self.generators: list[tuple[str, bool]] = []
        for k, g in enumerate(data.get("generators", [])):
            if isinstance(g, str):
                self.generators.append((g, False))
            elif isinstance(g, dict) and isinstance(g.get("name"), str):
                self.generators.append((g["name"], bool(g.get("invertible", False))))
            else:
                raise DescriptionError("generator entries are names or {name, invertible}", f"generators[{k}]")
        names = [g for g, _ in self.generators]
        if len(set(names)) != len(names):
            raise DescriptionError("duplicate generator names", "generators")
        for g in names:
            if not g.isidentifier() or (g == "t" and mode == "quantum-tower"):
                raise DescriptionError(f"invalid generator name {g!r}", "generators")
        self.characters = None
        if "characters" in data:
            ch = data["characters"]
            try:
                self.characters = CharacterData(int(ch["r"]), ch["f"], ch["gamma"])
            except (KeyError, TypeError, ValueError) as exc:
                raise DescriptionError(f"bad character data ({exc})", "characters") from None
        self._validate()

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(g for g, _ in self.generators)

    def _validate(self):
        # building once surfaces every semantic error at parse time
        if self.mode == "builtin":
            b = self.data.get("builtin")
            if not isinstance(b, dict) or b.get("name") != "qmatrices":
                raise DescriptionError("only the built-in 'qmatrices' is available", "builtin")
            n = _int(b.get("n"), "builtin.n")
            if n < 1:
                raise DescriptionError("n must be positive", "builtin.n")
            if self.characteristic == 2:
                raise DescriptionError("quantum matrices need characteristic 0 or an odd prime", "characteristic")
            self.builtin_n = n
            return
        self.build()

    def ring(self) -> PolyRing:
        return PolyRing(self.field, self.names)

    def build(self):
        """The algebra object: presentation, tower, or ``(QuantumTower, CharacterData | None)``."""
        try:
            if self.mode == "poisson-presentation":
                return self._build_presentation()
            if self.mode == "ore-tower":
                return self._build_tower()
            if self.mode == "quantum-tower":
                return self._build_quantum(), self.characters
        except DescriptionError:
            raise
        except (ValueError, KeyError) as exc:
            raise DescriptionError(str(exc).strip("'\""), self.mode) from None
        from .qmatrices import build_quantum_matrices

        Q, ch = build_quantum_matrices(self.builtin_n, self.characteristic)
        return Q, self.characters or ch

    def _build_presentation(self) -> PoissonPresentation:
        ring = self.ring()
        table = {}
        br = self.data.get("brackets", {})
        if not isinstance(br, dict):
            raise DescriptionError("brackets must be an object", "brackets")
        for key, val in br.items():
            parts = [p.strip() for p in key.split(",")]
            if len(parts) != 2:
                raise DescriptionError("bracket keys look like 'A,B'", f"brackets.{key}")
            for p in parts:
                if p not in ring.names:
                    raise DescriptionError(f"unknown generator {p!r}", f"brackets.{key}")
            table[(parts[0], parts[1])] = parse_poly(val, ring, where=f"brackets.{key}")
        inv = [g for g, i in self.generators if i]
        return PoissonPresentation(ring, table, self.names, inv)

    def _levels(self):
        levels = self.data.get("levels")
        if not isinstance(levels, list):
            raise DescriptionError("levels must be a list", "levels")
        if [lv.get("name") for lv in levels] != list(self.names):
            raise DescriptionError("levels must list every generator once, in tower order", "levels")
        return levels

    def _build_tower(self) -> OreTower:
        ring = self.ring()
        f = self.field
        inv = {g for g, i in self.generators if i}
        out = []
        for p, lv in enumerate(self._levels()):
            w = f"levels[{p}]"
            alpha = {g: _scalar(v, f, f"{w}.alpha.{g}") for g, v in lv.get("alpha", {}).items()}
            delta = {g: parse_poly(v, ring, where=f"{w}.delta.{g}") for g, v in lv.get("delta", {}).items()}
            D = None
            if "D" in lv:
                D = tuple(
                    {g: parse_poly(v, ring, where=f"{w}.D[{k}].{g}") for g, v in imgs.items()}
                    for k, imgs in enumerate(lv["D"])
                )
            eta = lv.get("eta")
            if eta is not None:
                eta = _scalar(eta, f, f"{w}.eta")
            for g in list(alpha) + list(delta):
                if g not in ring.names:
                    raise DescriptionError(f"unknown generator {g!r}", w)
            out.append(OreLevel(lv["name"], alpha, delta, eta, D, bool(lv.get("nilpotent", True)),
                                lv["name"] in inv))
        return OreTower(ring, out)

    def _build_quantum(self) -> QuantumTower:
        ring = self.ring()
        out = []
        for p, lv in enumerate(self._levels()):
            w = f"levels[{p}]"
            sigma = {g: _int(v, f"{w}.sigma.{g}") for g, v in lv.get("sigma", {}).items()}
            Delta = {}
            for g, v in lv.get("Delta", {}).items():
                terms = parse_poly(v, ring, allow_t=True, where=f"{w}.Delta.{g}")
                Delta[g] = [(c, dict(zip(ring.names, e))) for e, c in terms.items()]
            out.append(QLevel(
                lv["name"], sigma, Delta,
                eta=_int(lv.get("eta"), f"{w}.eta", allow_none=True),
                order=_int(lv.get("order"), f"{w}.order", allow_none=True),
                nilpotent=bool(lv.get("nilpotent", True)),
                poisson_name=lv.get("poisson_name"),
            ))
        return QuantumTower(self.field, out)

    def to_dict(self) -> dict[str, Any]:
        return json.loads(json.dumps(self.data))

    def to_json(self) -> str:
        return json.dumps(self.data, indent=2, sort_keys=False)

    def __eq__(self, other):
        if not isinstance(other, AlgebraDescription):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __repr__(self):
        return f"AlgebraDescription(mode={self.mode!r}, {len(self.generators)} generators)"


def parse_description(text: str) -> AlgebraDescription:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DescriptionError(f"invalid JSON: {exc.msg}", f"line {exc.lineno} column {exc.colno}") from None
    return AlgebraDescription(data)


def _gen_entries(names, invertible=()):
    return [{"name": g, "invertible": True} if g in invertible else g for g in names]


def _characters_dict(ch: CharacterData | None):
    return ch.to_dict() if ch is not None else None


def describe_presentation(P: PoissonPresentation, characters=None) -> AlgebraDescription:
    gens = P.generators
    br = {}
    for p, a in enumerate(gens):
        for b in gens[:p]:
            v = P.gen_bracket(a, b)
            if v:
                br[f"{a},{b}"] = str(v)
    data = {"characteristic": P.field.characteristic, "mode": "poisson-presentation",
            "generators": _gen_entries(gens, P.invertible), "brackets": br}
    if characters is not None:
        data["characters"] = _characters_dict(characters)
    return AlgebraDescription(data)


def describe_tower(T: OreTower, characters=None) -> AlgebraDescription:
    fmt = T.field.fmt
    levels = []
    for lv in T.levels:
        d: dict[str, Any] = {"name": lv.name}
        if lv.alpha:
            d["alpha"] = {g: fmt(v) for g, v in lv.alpha.items() if v}
        if lv.delta:
            d["delta"] = {g: str(v) for g, v in lv.delta.items()}
        if lv.eta is not None:
            d["eta"] = fmt(lv.eta)
        if lv.D is not None:
            d["D"] = [{g: str(v) for g, v in imgs.items()} for imgs in lv.D]
        if not lv.nilpotent:
            d["nilpotent"] = False
        levels.append(d)
    data = {"characteristic": T.field.characteristic, "mode": "ore-tower",
            "generators": _gen_entries(T.names, T.invertible), "levels": levels}
    if characters is not None:
        data["characters"] = _characters_dict(characters)
    return AlgebraDescription(data)


def _laurent_literal(c: LaurentPoly) -> str:
    s = str(c)
    return s if len(c.terms) == 1 else f"({s})"


def describe_quantum(Q: QuantumTower, characters=None) -> AlgebraDescription:
    levels = []
    for p, lv in enumerate(Q.levels):
        d: dict[str, Any] = {"name": lv.name}
        sig = {Q.names[j]: Q.sigma_exponent(p, j) for j in range(p) if Q.sigma_exponent(p, j)}
        if sig:
            d["sigma"] = sig
        Delta = {}
        for j in range(p):
            img = Q.Delta_image(p, j)
            if img:
                parts = []
                for e in sorted(img.terms, reverse=True):
                    mono = "*".join(n if a == 1 else f"{n}^{a}" for n, a in zip(Q.names, e) if a)
                    lit = _laurent_literal(img.terms[e])
                    parts.append(f"{lit}*{mono}" if mono else lit)
                Delta[Q.names[j]] = " + ".join(parts)
        if Delta:
            d["Delta"] = Delta
        if lv.eta is not None:
            d["eta"] = lv.eta
        if lv.order is not None:
            d["order"] = lv.order
        if not lv.nilpotent:
            d["nilpotent"] = False
        d["poisson_name"] = Q.poisson_names[p]
        levels.append(d)
    data = {"characteristic": Q.field.characteristic, "mode": "quantum-tower",
            "generators": list(Q.names), "levels": levels}
    if characters is not None:
        data["characters"] = _characters_dict(characters)
    return AlgebraDescription(data)

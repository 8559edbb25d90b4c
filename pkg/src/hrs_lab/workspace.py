"""Workspace files: a TOML document describing a quiver, modules, a torsion
pair and complexes.

    prime = 5

    [quiver]
    vertices = 2
    arrows = [[1, 2, "a"]]          # [source, target, name], vertices 1-based

    [modules.M]
    dims = [1, 1]
    arrows = { a = [[1]] }          # one (dim target x dim source) matrix per arrow

    [modules.X]
    expr = "P1+2*S2"                # or an expression over standard/named modules

    [torsion]
    generator = "P1+S1"             # "0" for the zero generator

    [heart]
    objects = ["S2[1]", "P1", "S1"] # expressions, "[1]" marks F[1]; complex names allowed

    [complexes.C]
    terms = { "0" = "S2", "1" = "S2" }
    differentials = { "0" = [[[0]], [[0]]] }   # per degree: one matrix per vertex

Expressions are sums of terms "k*NAME" with NAME one of P<v>, I<v>, S<v>
(vertex numbers 1-based), a module name, or "0".  Matrix entries are taken
mod p.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .complexes import ComplexA
from .heart import HeartObject, make_heart_object
from .linalg import FpMatrix, check_prime
from .quiver import AlgebraContext, Arrow, Quiver, Representation, RepMorphism, direct_sum, standard_module
from .torsion import TorsionPair


class WorkspaceError(ValueError):
    """Invalid workspace, with the offending key path and, when known, its line."""

    def __init__(self, path: str, message: str, line: int | None = None):
        self.path, self.line = path, line
        where = f"{path}" + (f" (line {line})" if line else "")
        super().__init__(f"{where}: {message}")


@dataclass
class Workspace:
    source: str
    context: AlgebraContext
    modules: dict[str, Representation]
    pair: TorsionPair
    heart_objects: list[str]
    complexes: dict[str, ComplexA]
    raw: dict = field(repr=False, default_factory=dict)

    def module(self, expr: str) -> Representation:
        return parse_expression(self.context, expr, self.modules, "expression")

    def heart_object(self, expr: str) -> HeartObject:
        """A heart object from "EXPR", "EXPR[1]" or a complex name."""
        e = expr.strip()
        if e in self.complexes:
            return make_heart_object(self.pair, self.complexes[e])
        if e.endswith("[1]"):
            return make_heart_object(self.pair, ComplexA.stalk(self.module(e[:-3]), -1))
        return make_heart_object(self.pair, ComplexA.stalk(self.module(e), 0))


_TERM = re.compile(r"^\s*(?:(\d+)\s*\*\s*)?([A-Za-z_][A-Za-z0-9_]*|0)\s*$")
_STD = re.compile(r"^([PIS])(\d+)$")


def parse_expression(ctx: AlgebraContext, expr: str, named: dict[str, Representation], path: str,
                     resolving: dict | None = None) -> Representation:
    if not isinstance(expr, str) or not expr.strip():
        raise WorkspaceError(path, f"expected a module expression, got {expr!r}")
    mods = []
    for part in expr.split("+"):
        m = _TERM.match(part)
        if not m:
            raise WorkspaceError(path, f"cannot parse term {part.strip()!r} in {expr!r}")
        mult, name = int(m.group(1) or 1), m.group(2)
        if name == "0":
            continue
        std = _STD.match(name)
        if std:
            v = int(std.group(2))
            if not 1 <= v <= ctx.n:
                raise WorkspaceError(path, f"vertex {v} in {name!r} is out of range 1..{ctx.n}")
            mod = standard_module(ctx, std.group(1), v - 1)
        elif name in named:
            mod = named[name]
        elif resolving is not None and name in resolving:
            mod = resolving[name]()
        else:
            raise WorkspaceError(path, f"unknown module {name!r}")
        mods += [mod] * mult
    return direct_sum(mods, ctx).obj


def _locate(text: str, path: str) -> int | None:
    """Best-effort line number of a dotted key path in the TOML source."""
    parts = path.split(".")
    lines = text.splitlines()
    start = 0
    for cut in range(len(parts), 0, -1):
        header = "[" + ".".join(parts[:cut]) + "]"
        for i, ln in enumerate(lines):
            if ln.strip().replace(" ", "") == header.replace(" ", ""):
                start = i
                rest = parts[cut:]
                if not rest:
                    return i + 1
                key = re.compile(r"^\s*\"?" + re.escape(rest[0]) + r"\"?\s*=")
                for j in range(i + 1, len(lines)):
                    if lines[j].lstrip().startswith("["):
                        break
                    if key.match(lines[j]):
                        return j + 1
                return i + 1
    key = re.compile(r"^\s*" + re.escape(parts[0]) + r"\s*=")
    for i, ln in enumerate(lines[start:], start):
        if key.match(ln):
            return i + 1
    return None


def _matrix(val, rows: int, cols: int, p: int, path: str, err=WorkspaceError) -> FpMatrix:
    if rows == 0 or cols == 0:
        if val in ([], [[]]) or (isinstance(val, list) and all(r == [] for r in val) and len(val) in (0, rows)):
            return FpMatrix.zeros(rows, cols, p)
    if not isinstance(val, list) or len(val) != rows or any(not isinstance(r, list) or len(r) != cols for r in val):
        raise err(path, f"expected a {rows}x{cols} matrix of integers")
    if any(not isinstance(x, int) or isinstance(x, bool) for r in val for x in r):
        raise err(path, "matrix entries must be integers")
    return FpMatrix(val, p, shape=(rows, cols))


def load_workspace(path: str | Path, prime_override: int | None = None) -> Workspace:
    text = Path(path).read_text()
    return parse_workspace(text, prime_override, source=str(path))


def parse_workspace(text: str, prime_override: int | None = None, source: str = "<string>") -> Workspace:
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise WorkspaceError("<toml>", str(exc)) from None

    def err(p: str, msg: str) -> WorkspaceError:
        return WorkspaceError(p, msg, _locate(text, p))

    prime = prime_override if prime_override is not None else raw.get("prime", 5)
    try:
        prime = check_prime(prime)
    except ValueError as exc:
        raise err("prime", str(exc)) from None

    q = raw.get("quiver")
    if not isinstance(q, dict):
        raise err("quiver", "missing [quiver] table")
    nv = q.get("vertices")
    if not isinstance(nv, int) or nv < 1:
        raise err("quiver.vertices", "expected a positive integer")
    arrows = []
    for i, a in enumerate(q.get("arrows", [])):
        p_ = "quiver.arrows"
        if not (isinstance(a, list) and len(a) in (2, 3) and all(isinstance(x, int) for x in a[:2])):
            raise err(p_, f"arrow #{i + 1} must be [source, target] or [source, target, name]")
        s, t = a[0], a[1]
        if not (1 <= s <= nv and 1 <= t <= nv):
            raise err(p_, f"arrow #{i + 1} has a vertex outside 1..{nv}")
        name = str(a[2]) if len(a) == 3 else f"a{i + 1}"
        arrows.append(Arrow(s - 1, t - 1, name))
    try:
        quiver = Quiver(nv, tuple(arrows))
        quiver.topological_order()
    except ValueError as exc:
        raise err("quiver", str(exc)) from None
    ctx = AlgebraContext(quiver, prime)

    # modules, allowing expressions to refer to each other (cycles rejected)
    mraw = raw.get("modules", {})
    if not isinstance(mraw, dict):
        raise err("modules", "expected a table of modules")
    modules: dict[str, Representation] = {}
    active: set[str] = set()

    def build(name: str) -> Representation:
        if name in modules:
            return modules[name]
        p_ = f"modules.{name}"
        if name in active:
            raise err(p_, "cyclic module expression")
        if _STD.match(name) or name == "0":
            raise err(p_, f"{name!r} clashes with a standard module name")
        active.add(name)
        entry = mraw[name]
        if not isinstance(entry, dict):
            raise err(p_, "expected a table with dims/arrows or expr")
        if "expr" in entry:
            m = parse_expression(ctx, entry["expr"], modules, p_ + ".expr", lazy)
        else:
            dims = entry.get("dims")
            if not (isinstance(dims, list) and len(dims) == nv and all(isinstance(d, int) and d >= 0 for d in dims)):
                raise err(p_ + ".dims", f"expected {nv} non-negative integers")
            amap = entry.get("arrows", {})
            if not isinstance(amap, dict):
                raise err(p_ + ".arrows", "expected a table arrow-name -> matrix")
            unknown = set(amap) - {a.name for a in arrows}
            if unknown:
                raise err(p_ + ".arrows", f"unknown arrow(s) {sorted(unknown)}")
            mats = []
            for a in arrows:
                mats.append(_matrix(amap.get(a.name, [[0] * dims[a.source] for _ in range(dims[a.target])]),
                                    dims[a.target], dims[a.source], prime, f"{p_}.arrows.{a.name}", err))
            m = Representation(ctx, tuple(dims), tuple(mats))
        active.discard(name)
        modules[name] = m
        return m

    lazy = {n: (lambda n=n: build(n)) for n in mraw}
    for name in mraw:
        build(name)

    traw = raw.get("torsion")
    if not isinstance(traw, dict) or "generator" not in traw:
        raise err("torsion", "missing [torsion] table with a generator expression")
    gen = parse_expression(ctx, traw["generator"], modules, "torsion.generator")
    pair = TorsionPair(ctx, gen, f"generator {traw['generator']}")

    complexes = {}
    for name, entry in raw.get("complexes", {}).items():
        complexes[name] = _complex(ctx, entry, modules, f"complexes.{name}", err)

    hobj = raw.get("heart", {}).get("objects", [])
    if not isinstance(hobj, list) or not all(isinstance(x, str) for x in hobj):
        raise err("heart.objects", "expected a list of strings")
    return Workspace(source, ctx, modules, pair, hobj, complexes, raw)


def _complex(ctx: AlgebraContext, entry, modules, path: str, err) -> ComplexA:
    if not isinstance(entry, dict):
        raise err(path, "expected a table with terms and differentials")
    terms = {}
    for deg, expr in entry.get("terms", {}).items():
        try:
            d = int(deg)
        except ValueError:
            raise err(path + ".terms", f"degree {deg!r} is not an integer") from None
        terms[d] = parse_expression(ctx, expr, modules, f"{path}.terms.{deg}")
    diffs = {}
    p = ctx.prime
    for deg, mats in entry.get("differentials", {}).items():
        dp = f"{path}.differentials.{deg}"
        try:
            d = int(deg)
        except ValueError:
            raise err(path + ".differentials", f"degree {deg!r} is not an integer") from None
        src = terms.get(d, ctx.zero_module())
        tgt = terms.get(d + 1, ctx.zero_module())
        if not isinstance(mats, list) or len(mats) != ctx.n:
            raise err(dp, f"expected one matrix per vertex ({ctx.n})")
        comps = [_matrix(m, tgt.dims[v], src.dims[v], p, f"{dp}.{v + 1}", err) for v, m in enumerate(mats)]
        try:
            diffs[d] = RepMorphism(src, tgt, comps)
        except ValueError as exc:
            raise err(dp, f"not a module map: {exc}") from None
    try:
        return ComplexA(ctx, terms, diffs)
    except ValueError as exc:
        raise err(path, str(exc)) from None

"""Bounded cochain complexes of representations and their derived Hom.

Conventions, fixed once:

* shift: ``X[k]^n = X^{n+k}`` with differential ``(-1)^k d_X^{n+k}``; chain
  maps shift without sign.
* cone of ``f: X -> Y``: ``C^n = X^{n+1} (+) Y^n`` with differential
  ``[[-d_X, 0], [f, d_Y]]``; it comes with ``Y -> C`` and ``C -> X[1]``.
* total Hom complex: ``Hom^k = prod_n Hom(X^n, Y^{n+k})`` with
  ``D(phi) = d_Y phi - (-1)^k phi d_X``.  Degree-0 cycles are chain maps and
  degree-0 boundaries are the null-homotopic ones.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Mapping, Sequence

import numpy as np

from .linalg import FpMatrix, block_diag, nullspace_array, rank_array, rref_array, solve_array
from .quiver import (
    AlgebraContext,
    Representation,
    RepMorphism,
    direct_sum,
    hom_space,
    kernel,
    morphism_from_sum,
    projective_cover,
    quotient_representation,
    restrict_codomain,
    factor_through_epi,
    image_bases,
)


class ComplexA:
    """A bounded cochain complex; zero terms are dropped on construction."""

    __slots__ = ("ctx", "terms", "diffs", "_hash")

    def __init__(self, ctx: AlgebraContext, terms: Mapping[int, Representation],
                 diffs: Mapping[int, RepMorphism] | None = None, check: bool = True):
        diffs = dict(diffs or {})
        self.ctx = ctx
        self.terms = {n: t for n, t in sorted(terms.items()) if not t.is_zero()}
        for n, t in self.terms.items():
            if t.ctx != ctx:
                raise ValueError(f"term in degree {n} lives over another context")
        self.diffs = {}
        for n, d in sorted(diffs.items()):
            if n in self.terms and n + 1 in self.terms:
                if check and (d.source != self.terms[n] or d.target != self.terms[n + 1]):
                    raise ValueError(f"differential in degree {n} has the wrong source or target")
                if not d.is_zero():
                    self.diffs[n] = d
            elif check and not d.is_zero():
                raise ValueError(f"nonzero differential in degree {n} touches a zero term")
        self._hash = None
        if check:
            for n in self.diffs:
                if n + 1 in self.diffs and not (self.diffs[n + 1] @ self.diffs[n]).is_zero():
                    raise ValueError(f"d^{n + 1} d^{n} != 0")

    @classmethod
    def stalk(cls, m: Representation, degree: int = 0) -> "ComplexA":
        return cls(m.ctx, {degree: m}, check=False)

    @classmethod
    def zero(cls, ctx: AlgebraContext) -> "ComplexA":
        return cls(ctx, {}, check=False)

    @classmethod
    def two_term(cls, d: RepMorphism, degree: int = -1) -> "ComplexA":
        """[source --d--> target] in degrees `degree`, `degree`+1."""
        return cls(d.source.ctx, {degree: d.source, degree + 1: d.target}, {degree: d})

    def term(self, n: int) -> Representation:
        t = self.terms.get(n)
        return t if t is not None else self.ctx.zero_module()

    def d(self, n: int) -> RepMorphism:
        f = self.diffs.get(n)
        return f if f is not None else RepMorphism.zero(self.term(n), self.term(n + 1))

    @property
    def degrees(self) -> list[int]:
        return list(self.terms)

    @property
    def lo(self) -> int | None:
        return min(self.terms) if self.terms else None

    @property
    def hi(self) -> int | None:
        return max(self.terms) if self.terms else None

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, ComplexA):
            return NotImplemented
        return self.ctx == other.ctx and self.terms == other.terms and self.diffs == other.diffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ctx, tuple(self.terms.items()), tuple(self.diffs.items())))
        return self._hash

    def __repr__(self) -> str:
        parts = [f"{n}: dims {t.dims}" for n, t in self.terms.items()]
        return f"ComplexA({'; '.join(parts) or 'zero'})"

    def is_acyclic(self) -> bool:
        return all(cohomology(self, n).rep.is_zero() for n in self.degrees)


def _degree_span(*cxs: ComplexA) -> range:
    degs = [n for c in cxs for n in c.degrees]
    if not degs:
        return range(0)
    return range(min(degs), max(degs) + 1)


class ChainMap:
    """Degreewise morphisms commuting with the differentials."""

    __slots__ = ("source", "target", "comps")

    def __init__(self, source: ComplexA, target: ComplexA,
                 comps: Mapping[int, RepMorphism], check: bool = True):
        self.source = source
        self.target = target
        self.comps = {n: f for n, f in comps.items()
                      if n in source.terms and n in target.terms and not f.is_zero()}
        if check:
            for n, f in self.comps.items():
                if f.source != source.terms[n] or f.target != target.terms[n]:
                    raise ValueError(f"component in degree {n} has the wrong source or target")
            for n in _degree_span(source, target):
                if (target.d(n) @ self.comp(n)) != (self.comp(n + 1) @ source.d(n)):
                    raise ValueError(f"not a chain map: square at degree {n} does not commute")

    def comp(self, n: int) -> RepMorphism:
        f = self.comps.get(n)
        return f if f is not None else RepMorphism.zero(self.source.term(n), self.target.term(n))

    @classmethod
    def identity(cls, x: ComplexA) -> "ChainMap":
        return cls(x, x, {n: RepMorphism.identity(t) for n, t in x.terms.items()}, check=False)

    @classmethod
    def zero(cls, x: ComplexA, y: ComplexA) -> "ChainMap":
        return cls(x, y, {}, check=False)

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        if other.target != self.source:
            raise ValueError("composition of non-composable chain maps")
        comps = {n: self.comp(n) @ other.comp(n) for n in other.comps if n in self.comps}
        return ChainMap(other.source, self.target, comps, check=False)

    def _same(self, other: "ChainMap") -> None:
        if self.source != other.source or self.target != other.target:
            raise ValueError("chain maps have different source or target")

    def __add__(self, other: "ChainMap") -> "ChainMap":
        self._same(other)
        degs = set(self.comps) | set(other.comps)
        return ChainMap(self.source, self.target, {n: self.comp(n) + other.comp(n) for n in degs}, check=False)

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        self._same(other)
        degs = set(self.comps) | set(other.comps)
        return ChainMap(self.source, self.target, {n: self.comp(n) - other.comp(n) for n in degs}, check=False)

    def __neg__(self) -> "ChainMap":
        return ChainMap(self.source, self.target, {n: -f for n, f in self.comps.items()}, check=False)

    def scale(self, c: int) -> "ChainMap":
        return ChainMap(self.source, self.target, {n: f.scale(c) for n, f in self.comps.items()}, check=False)

    def is_zero(self) -> bool:
        return not self.comps

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChainMap):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.comps == other.comps

    def __hash__(self) -> int:
        return hash((self.source, self.target, tuple(sorted(self.comps.items()))))

    def __repr__(self) -> str:
        return f"ChainMap({ {n: f for n, f in self.comps.items()} })"


@dataclass(frozen=True)
class HomotopyWitness:
    """Maps h^n : X^n -> Y^{n-1} with f - g = d_Y h + h d_X."""
    maps: dict

    def comp(self, n: int, x: ComplexA, y: ComplexA) -> RepMorphism:
        h = self.maps.get(n)
        return h if h is not None else RepMorphism.zero(x.term(n), y.term(n - 1))

    def certifies(self, f: ChainMap, g: ChainMap) -> bool:
        x, y = f.source, f.target
        for n in _degree_span(x, y):
            lhs = f.comp(n) - g.comp(n)
            rhs = y.d(n - 1) @ self.comp(n, x, y) + self.comp(n + 1, x, y) @ x.d(n)
            if lhs != rhs:
                return False
        return True


# --- cohomology -------------------------------------------------------------

@dataclass(frozen=True)
class Cohomology:
    rep: Representation
    cycles: Representation
    cycle_inclusion: RepMorphism  # Z^n >-> X^n
    projection: RepMorphism  # Z^n ->> H^n


def cohomology(x: ComplexA, n: int) -> Cohomology:
    z, zin = kernel(x.d(n))
    boundaries = restrict_codomain(x.d(n - 1), zin)
    h, pr = quotient_representation(z, image_bases(boundaries))
    return Cohomology(h, z, zin, pr)


def cohomology_map(f: ChainMap, n: int) -> RepMorphism:
    """H^n(f) : H^n(X) -> H^n(Y)."""
    hx, hy = cohomology(f.source, n), cohomology(f.target, n)
    on_cycles = restrict_codomain(f.comp(n) @ hx.cycle_inclusion, hy.cycle_inclusion)
    return factor_through_epi(hy.projection @ on_cycles, hx.projection)


def is_quasi_iso(f: ChainMap) -> bool:
    for n in _degree_span(f.source, f.target):
        hx, hy = cohomology(f.source, n), cohomology(f.target, n)
        if hx.rep.dims != hy.rep.dims:
            return False
        if hx.rep.is_zero():
            continue
        if not cohomology_map(f, n).is_iso():
            return False
    return True


def cohomology_dims(x: ComplexA) -> dict[int, tuple[int, ...]]:
    out = {}
    for n in _degree_span(x):
        h = cohomology(x, n).rep
        if not h.is_zero():
            out[n] = h.dims
    return out


# --- shift, cone, sums ----------------------------------------------------

def shift(x: ComplexA, k: int) -> ComplexA:
    sign = -1 if k % 2 else 1
    terms = {n - k: t for n, t in x.terms.items()}
    diffs = {n - k: (d.scale(sign) if sign < 0 else d) for n, d in x.diffs.items()}
    return ComplexA(x.ctx, terms, diffs, check=False)


def shift_map(f: ChainMap, k: int) -> ChainMap:
    return ChainMap(shift(f.source, k), shift(f.target, k),
                    {n - k: g for n, g in f.comps.items()}, check=False)


@dataclass(frozen=True)
class ComplexSum:
    obj: ComplexA
    injections: tuple[ChainMap, ...]
    projections: tuple[ChainMap, ...]


def direct_sum_complex(cxs: Sequence[ComplexA], ctx: AlgebraContext | None = None) -> ComplexSum:
    if not cxs:
        return ComplexSum(ComplexA.zero(ctx), (), ())
    ctx = cxs[0].ctx
    degs = sorted({n for c in cxs for n in c.degrees})
    sums = {n: direct_sum([c.term(n) for c in cxs], ctx) for n in degs}
    terms = {n: s.obj for n, s in sums.items()}
    diffs = {}
    for n in degs:
        if n + 1 in sums:
            s0, s1 = sums[n], sums[n + 1]
            diffs[n] = morphism_from_sum(s0, [s1.injections[i] @ c.d(n) for i, c in enumerate(cxs)])
    total = ComplexA(ctx, terms, diffs, check=False)
    injs, prjs = [], []
    for i, c in enumerate(cxs):
        injs.append(ChainMap(c, total, {n: sums[n].injections[i] for n in c.degrees}, check=False))
        prjs.append(ChainMap(total, c, {n: sums[n].projections[i] for n in c.degrees}, check=False))
    return ComplexSum(total, tuple(injs), tuple(prjs))


def map_from_sum(s: ComplexSum, maps: Sequence[ChainMap]) -> ChainMap:
    out = None
    for prj, g in zip(s.projections, maps):
        term = g @ prj
        out = term if out is None else out + term
    return out


def map_into_sum(s: ComplexSum, maps: Sequence[ChainMap]) -> ChainMap:
    out = None
    for inj, g in zip(s.injections, maps):
        term = inj @ g
        out = term if out is None else out + term
    return out


@dataclass(frozen=True)
class Cone:
    obj: ComplexA
    inclusion: ChainMap  # Y -> C
    projection: ChainMap  # C -> X[1]


def cone(f: ChainMap) -> Cone:
    x, y = f.source, f.target
    ctx = x.ctx
    degs = sorted({n - 1 for n in x.degrees} | set(y.degrees))
    sums = {n: direct_sum([x.term(n + 1), y.term(n)], ctx) for n in degs}
    diffs = {}
    for n in degs:
        if n + 1 not in sums:
            continue
        s0, s1 = sums[n], sums[n + 1]
        xx, yx = s0.projections
        ix, iy = s1.injections
        diffs[n] = (ix @ (-x.d(n + 1)) @ xx) + (iy @ f.comp(n + 1) @ xx) + (iy @ y.d(n) @ yx)
    c = ComplexA(ctx, {n: s.obj for n, s in sums.items()}, diffs, check=False)
    xs = shift(x, 1)
    inc = ChainMap(y, c, {n: sums[n].injections[1] for n in y.degrees}, check=False)
    prj = ChainMap(c, xs, {n: sums[n].projections[0] for n in xs.degrees}, check=False)
    return Cone(c, inc, prj)


# --- truncations and quotients -----------------------------------------------

def truncate_le(x: ComplexA, n: int) -> tuple[ComplexA, ChainMap]:
    """Standard truncation [... -> X^{n-1} -> Z^n -> 0] with its inclusion."""
    z, zin = kernel(x.d(n))
    terms = {m: t for m, t in x.terms.items() if m < n}
    terms[n] = z
    diffs = {m: d for m, d in x.diffs.items() if m < n - 1}
    diffs[n - 1] = restrict_codomain(x.d(n - 1), zin)
    sub = ComplexA(x.ctx, terms, diffs, check=False)
    comps = {m: RepMorphism.identity(t) for m, t in x.terms.items() if m < n}
    comps[n] = zin
    return sub, ChainMap(sub, x, comps, check=False)


def truncate_ge(x: ComplexA, n: int) -> tuple[ComplexA, ChainMap]:
    """Standard truncation [0 -> X^n / B^n -> X^{n+1} -> ...] with its projection."""
    q, qpr = quotient_representation(x.term(n), image_bases(x.d(n - 1)))
    terms = {m: t for m, t in x.terms.items() if m > n}
    terms[n] = q
    diffs = {m: d for m, d in x.diffs.items() if m > n}
    diffs[n] = factor_through_epi(x.d(n), qpr)
    quo = ComplexA(x.ctx, terms, diffs, check=False)
    comps = {m: RepMorphism.identity(t) for m, t in x.terms.items() if m > n}
    comps[n] = qpr
    return quo, ChainMap(x, quo, comps, check=False)


def quotient_complex(incl: ChainMap) -> tuple[ComplexA, ChainMap]:
    """X / S for a degreewise-injective chain map S -> X."""
    x = incl.target
    quots = {n: quotient_representation(t, list(incl.comp(n).comps)) for n, t in x.terms.items()}
    diffs = {}
    for n, d in x.diffs.items():
        diffs[n] = factor_through_epi(quots[n + 1][1] @ d, quots[n][1])
    q = ComplexA(x.ctx, {n: v[0] for n, v in quots.items()}, diffs, check=False)
    return q, ChainMap(x, q, {n: v[1] for n, v in quots.items()}, check=False)


def subcomplex_from_terms(x: ComplexA, incls: Mapping[int, RepMorphism]) -> tuple[ComplexA, ChainMap]:
    """The subcomplex with terms given by monos S^n >-> X^n (assumed d-stable)."""
    terms = {n: i.source for n, i in incls.items()}
    diffs = {}
    for n, i in incls.items():
        if n + 1 in incls:
            diffs[n] = restrict_codomain(x.d(n) @ i, incls[n + 1])
    sub = ComplexA(x.ctx, terms, diffs, check=False)
    return sub, ChainMap(sub, x, dict(incls), check=False)


# --- total Hom complex --------------------------------------------------------

def _kron_left(d: RepMorphism, src_dims: Sequence[int], p: int) -> np.ndarray:
    """Matrix of phi |-> d @ phi on vectorised phi (per vertex, row-major)."""
    blocks = [FpMatrix._wrap(np.kron(dv.a, np.eye(s, dtype=np.int64)), p) for dv, s in zip(d.comps, src_dims)]
    return block_diag(blocks, p).a


def _kron_right(d: RepMorphism, tgt_dims: Sequence[int], p: int) -> np.ndarray:
    """Matrix of phi |-> phi @ d on vectorised phi."""
    blocks = [FpMatrix._wrap(np.kron(np.eye(t, dtype=np.int64), dv.a.T), p) for dv, t in zip(d.comps, tgt_dims)]
    return block_diag(blocks, p).a


class HomComplex:
    """Degrees -1, 0, 1 of the total Hom complex Hom(X, Y), in reduced coordinates."""

    def __init__(self, x: ComplexA, y: ComplexA):
        if x.ctx != y.ctx:
            raise ValueError("complexes over different contexts")
        self.x, self.y = x, y
        self.p = x.ctx.prime
        self._pieces = {k: self._layout(k) for k in (-1, 0, 1)}

    def _layout(self, k: int):
        pieces, off = {}, 0
        for n, t in self.x.terms.items():
            u = self.y.terms.get(n + k)
            if u is None:
                continue
            hs = hom_space(t, u)
            if hs.dim:
                pieces[n] = (hs, off)
                off += hs.dim
        return pieces, off

    def dim(self, k: int) -> int:
        return self._pieces[k][1]

    def differential(self, k: int) -> np.ndarray:
        return self._differentials[k]

    @cached_property
    def _differentials(self) -> dict[int, np.ndarray]:
        return {k: self._build_differential(k) for k in (-1, 0)}

    def _build_differential(self, k: int) -> np.ndarray:
        src, n_src = self._pieces[k]
        tgt, n_tgt = self._pieces[k + 1]
        p = self.p
        out = np.zeros((n_tgt, n_src), dtype=np.int64)
        sign = -1 if k % 2 else 1  # (-1)^k
        for n, (hs, off) in src.items():
            b = hs.basis
            # d_Y phi : X^n -> Y^{n+k+1}
            if n in tgt and (n + k) in self.y.diffs:
                ths, toff = tgt[n]
                img = _kron_left(self.y.d(n + k), self.x.term(n).dims, p) @ b % p
                out[toff:toff + ths.dim, off:off + hs.dim] += img[ths.free]
            # -(-1)^k phi d_X : X^{n-1} -> Y^{n+k}
            if (n - 1) in tgt and (n - 1) in self.x.diffs:
                ths, toff = tgt[n - 1]
                img = _kron_right(self.x.d(n - 1), self.y.term(n + k).dims, p) @ b % p
                out[toff:toff + ths.dim, off:off + hs.dim] -= sign * img[ths.free]
        return out % p

    # conversions
    def coords(self, maps: Mapping[int, RepMorphism], k: int = 0) -> np.ndarray:
        pieces, total = self._pieces[k]
        v = np.zeros(total, dtype=np.int64)
        for n, (hs, off) in pieces.items():
            f = maps.get(n)
            if f is not None:
                v[off:off + hs.dim] = hs.coords(f)
        return v

    def maps(self, vec: np.ndarray, k: int = 0) -> dict[int, RepMorphism]:
        pieces, _ = self._pieces[k]
        return {n: hs.combination(vec[off:off + hs.dim]) for n, (hs, off) in pieces.items()}

    def chain_map(self, vec: np.ndarray) -> ChainMap:
        return ChainMap(self.x, self.y, self.maps(vec, 0), check=False)

    def chain_coords(self, f: ChainMap) -> np.ndarray:
        return self.coords(f.comps, 0)

    @cached_property
    def cycles(self) -> np.ndarray:
        return nullspace_array(self.differential(0), self.p)

    @property
    def boundaries(self) -> np.ndarray:
        return self.differential(-1)

    @cached_property
    def _h0(self) -> tuple[int, np.ndarray]:
        b, z = self.boundaries, self.cycles
        rb = rank_array(b, self.p)
        if z.shape[1] == 0:
            return 0, z
        _, piv = rref_array(np.hstack([b, z]) % self.p, self.p)
        chosen = [c - b.shape[1] for c in piv if c >= b.shape[1]]
        return z.shape[1] - rb, z[:, chosen]

    @property
    def h0_dim(self) -> int:
        return self._h0[0]

    def h0_basis(self) -> list[ChainMap]:
        reps = self._h0[1]
        return [self.chain_map(reps[:, c]) for c in range(reps.shape[1])]

    def cycle_basis(self) -> list[ChainMap]:
        return [self.chain_map(self.cycles[:, c]) for c in range(self.cycles.shape[1])]

    def null_homotopy(self, f: ChainMap) -> HomotopyWitness | None:
        rhs = self.chain_coords(f)
        if not rhs.any():
            return HomotopyWitness({})
        sol = solve_array(self.boundaries, rhs[:, None], self.p)
        if sol is None:
            return None
        return HomotopyWitness(self.maps(sol[:, 0], -1))


@lru_cache(maxsize=2048)
def hom_complex(x: ComplexA, y: ComplexA) -> HomComplex:
    return HomComplex(x, y)


def homotopic(f: ChainMap, g: ChainMap) -> HomotopyWitness | None:
    """A homotopy f ~ g if one exists."""
    f._same(g)
    return hom_complex(f.source, f.target).null_homotopy(f - g)


def lift_through(f: ChainMap, q: ChainMap) -> ChainMap | None:
    """A chain map g: P -> Z with q g homotopic to f, for f: P -> Y and q: Z -> Y.

    Always solvable when P is a bounded complex of projectives and q is a
    quasi-isomorphism; returns None when the linear system has no solution.
    """
    if f.target != q.target:
        raise ValueError("lift_through needs maps with a common target")
    p = f.source.ctx.prime
    hz = hom_complex(f.source, q.source)
    hy = hom_complex(f.source, f.target)
    gens = hz.cycle_basis()
    cols = [hy.chain_coords(q @ g) for g in gens]
    a = np.column_stack(cols + [hy.boundaries]) if cols else hy.boundaries
    if a.shape[1] == 0:
        a = np.zeros((hy.dim(0), 0), dtype=np.int64)
    rhs = hy.chain_coords(f)
    sol = solve_array(a % p, rhs[:, None], p)
    if sol is None:
        return None
    out = ChainMap.zero(f.source, q.source)
    for c, g in zip(sol[:len(gens), 0], gens):
        if c:
            out = out + g.scale(int(c))
    return out


# --- projective replacement and derived Hom ------------------------------------

@dataclass(frozen=True)
class ProjectiveReplacement:
    complex: ComplexA
    qis: ChainMap


@lru_cache(maxsize=1024)
def proj_replacement(x: ComplexA) -> ProjectiveReplacement:
    """A bounded complex of projectives P with a quasi-isomorphism P -> X.

    Built downward from the top degree: P^n is the projective cover of the
    fibre product of Z^{n+1}(P) and X^n over X^{n+1}.  Over a hereditary
    algebra the process stops one degree below the support of X.
    """
    ctx = x.ctx
    if x.is_zero():
        z = ComplexA.zero(ctx)
        return ProjectiveReplacement(z, ChainMap.zero(z, x))
    a, b = x.lo, x.hi
    zero = ctx.zero_module()
    p_terms: dict[int, Representation] = {}
    p_diffs: dict[int, RepMorphism] = {}
    pis: dict[int, RepMorphism] = {}
    n = b
    while True:
        p1 = p_terms.get(n + 1, zero)
        p2 = p_terms.get(n + 2, zero)
        d1 = p_diffs.get(n + 1, RepMorphism.zero(p1, p2))
        pi1 = pis.get(n + 1, RepMorphism.zero(p1, x.term(n + 1)))
        src = direct_sum([p1, x.term(n)], ctx)
        tgt = direct_sum([p2, x.term(n + 1)], ctx)
        sp, sx = src.projections
        tp, tx = tgt.injections
        phi = tp @ d1 @ sp + tx @ (pi1 @ sp - x.d(n) @ sx)
        k, kin = kernel(phi)
        if k.is_zero() and n < a:
            break
        if n < a - 2:
            raise ArithmeticError("projective replacement did not terminate; algebra not hereditary?")
        cover = projective_cover(k)
        p_terms[n] = cover.source
        p_diffs[n] = sp @ kin @ cover
        pis[n] = sx @ kin @ cover
        n -= 1
    pc = ComplexA(ctx, p_terms, p_diffs, check=False)
    return ProjectiveReplacement(pc, ChainMap(pc, x, pis, check=False))


@dataclass(frozen=True)
class DerivedHom:
    dim: int
    basis: list  # chain maps P(X) -> Y[n], pairwise non-homotopic
    replacement: ProjectiveReplacement


def derived_hom(x: ComplexA, y: ComplexA, n: int = 0,
                replacement: ProjectiveReplacement | None = None) -> DerivedHom:
    """dim Hom_{D^b}(X, Y[n]) as chain maps P(X) -> Y[n] modulo homotopy."""
    rep = replacement or proj_replacement(x)
    hc = hom_complex(rep.complex, shift(y, n))
    return DerivedHom(hc.h0_dim, hc.h0_basis(), rep)


def find_derived_iso(x: ComplexA, y: ComplexA, seed: int = 0, tries: int = 64) -> ChainMap | None:
    """A quasi-isomorphism P(X) -> Y (an iso X ~ Y in D^b) if the search finds one."""
    if cohomology_dims(x) != cohomology_dims(y):
        return None
    dh = derived_hom(x, y, 0)
    if dh.dim == 0:
        return ChainMap.zero(dh.replacement.complex, y) if not cohomology_dims(x) else None
    rng = np.random.default_rng(seed)
    p = x.ctx.prime
    for _ in range(tries):
        cs = rng.integers(0, p, size=dh.dim)
        f = ChainMap.zero(dh.replacement.complex, y)
        for c, g in zip(cs, dh.basis):
            if c:
                f = f + g.scale(int(c))
        if is_quasi_iso(f):
            return f
    return None

"""Finite-dimensional representations of an acyclic quiver over F_p.

Vertices are numbered 0..n-1 in the Python API.  Workspace files and the
named-module expressions of the CLI ("P1", "S2", ...) use 1-based labels.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np

from .linalg import (
    FpMatrix,
    block_diag,
    check_prime,
    column_basis_array,
    hstack,
    is_invertible,
    left_annihilator,
    nullspace_array,
    nullspace_with_free,
    rank,
    rref_array,
    solve,
    vstack,
)


class ContextMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Arrow:
    source: int
    target: int
    name: str


@dataclass(frozen=True)
class Quiver:
    vertex_count: int
    arrows: tuple[Arrow, ...] = ()

    def __post_init__(self):
        if self.vertex_count < 1:
            raise ValueError("a quiver needs at least one vertex")
        arrows = tuple(a if isinstance(a, Arrow) else Arrow(*a) for a in self.arrows)
        object.__setattr__(self, "arrows", arrows)
        names = [a.name for a in arrows]
        if len(set(names)) != len(names):
            raise ValueError(f"arrow names must be unique: {names}")
        for a in arrows:
            for v in (a.source, a.target):
                if not 0 <= v < self.vertex_count:
                    raise ValueError(f"arrow {a.name} has vertex {v} out of range")
        self.topological_order()  # raises on cycles

    def topological_order(self) -> list[int]:
        indeg = [0] * self.vertex_count
        for a in self.arrows:
            indeg[a.target] += 1
        ready = [v for v in range(self.vertex_count) if indeg[v] == 0]
        order = []
        while ready:
            v = ready.pop(0)
            order.append(v)
            for a in self.arrows:
                if a.source == v:
                    indeg[a.target] -= 1
                    if indeg[a.target] == 0:
                        ready.append(a.target)
        if len(order) != self.vertex_count:
            raise ValueError("quiver has an oriented cycle; only acyclic quivers are supported")
        return order

    def arrows_out(self, v: int) -> list[int]:
        return [k for k, a in enumerate(self.arrows) if a.source == v]

    def arrows_in(self, v: int) -> list[int]:
        return [k for k, a in enumerate(self.arrows) if a.target == v]

    @cached_property
    def _paths(self) -> dict[tuple[int, int], list[tuple[int, ...]]]:
        # paths as tuples of arrow indices in traversal order; () is the trivial path
        out: dict[tuple[int, int], list[tuple[int, ...]]] = {}
        for v in range(self.vertex_count):
            stack = [(v, ())]
            while stack:
                w, path = stack.pop()
                out.setdefault((v, w), []).append(path)
                for k in reversed(self.arrows_out(w)):
                    stack.append((self.arrows[k].target, path + (k,)))
        for key in out:
            out[key].sort(key=lambda p: (len(p), p))
        return out

    def paths(self, source: int, target: int) -> list[tuple[int, ...]]:
        return self._paths.get((source, target), [])

    @classmethod
    def linear(cls, n: int) -> "Quiver":
        """The A_n quiver 0 -> 1 -> ... -> n-1."""
        return cls(n, tuple(Arrow(i, i + 1, f"a{i + 1}") for i in range(n - 1)))


@dataclass(frozen=True)
class AlgebraContext:
    quiver: Quiver
    prime: int = 5

    def __post_init__(self):
        check_prime(self.prime)

    @property
    def n(self) -> int:
        return self.quiver.vertex_count

    def zero(self, r: int, c: int) -> FpMatrix:
        return FpMatrix.zeros(r, c, self.prime)

    def eye(self, n: int) -> FpMatrix:
        return FpMatrix.identity(n, self.prime)

    def module(self, dims: Sequence[int], mats: dict | Sequence | None = None) -> "Representation":
        """Build a representation; `mats` maps arrow names (or indices) to matrices."""
        dims = tuple(int(d) for d in dims)
        arrows = self.quiver.arrows
        if mats is None:
            mats = {}
        if not isinstance(mats, dict):
            mats = dict(enumerate(mats))
        by_index = []
        for k, a in enumerate(arrows):
            m = mats.get(a.name, mats.get(k))
            shape = (dims[a.target], dims[a.source])
            if m is None:
                m = self.zero(*shape)
            elif not isinstance(m, FpMatrix):
                m = FpMatrix(m, self.prime, shape=shape if np.size(m) == shape[0] * shape[1] else None)
            by_index.append(m)
        return Representation(self, dims, tuple(by_index))

    def zero_module(self) -> "Representation":
        return self.module((0,) * self.n)

    def simple(self, v: int) -> "Representation":
        return standard_module(self, "S", v)

    def projective(self, v: int) -> "Representation":
        return standard_module(self, "P", v)

    def injective(self, v: int) -> "Representation":
        return standard_module(self, "I", v)


class Representation:
    """A representation: a vector space per vertex and a matrix per arrow.

    The matrix of arrow a: i -> j has shape dims[j] x dims[i] and acts on
    column vectors.  Instances are immutable and compare by content.
    """

    __slots__ = ("ctx", "dims", "mats", "_hash")

    def __init__(self, ctx: AlgebraContext, dims: tuple[int, ...], mats: tuple[FpMatrix, ...]):
        if len(dims) != ctx.n:
            raise ValueError(f"dimension vector {dims} has wrong length for {ctx.n} vertices")
        if any(d < 0 for d in dims):
            raise ValueError(f"negative dimension in {dims}")
        if len(mats) != len(ctx.quiver.arrows):
            raise ValueError("one matrix per arrow required")
        for a, m in zip(ctx.quiver.arrows, mats):
            if m.shape != (dims[a.target], dims[a.source]):
                raise ValueError(
                    f"arrow {a.name}: matrix shape {m.shape} does not match "
                    f"dims {(dims[a.target], dims[a.source])}")
            if m.p != ctx.prime:
                raise ContextMismatch("matrix modulus differs from the context prime")
        self.ctx = ctx
        self.dims = dims
        self.mats = mats
        self._hash = None

    @property
    def dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.dim == 0

    def path_matrix(self, path: Sequence[int], start: int) -> FpMatrix:
        m = self.ctx.eye(self.dims[start])
        for k in path:
            m = self.mats[k] @ m
        return m

    def __eq__(self, other) -> bool:
        if not isinstance(other, Representation):
            return NotImplemented
        return self.ctx == other.ctx and self.dims == other.dims and self.mats == other.mats

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ctx, self.dims, self.mats))
        return self._hash

    def __repr__(self) -> str:
        arrows = ", ".join(f"{a.name}={m.tolist()}" for a, m in zip(self.ctx.quiver.arrows, self.mats))
        return f"Representation(dims={self.dims}{', ' if arrows else ''}{arrows})"

    def same_context(self, other: "Representation") -> None:
        if self.ctx != other.ctx:
            raise ContextMismatch("representations live over different contexts")


class RepMorphism:
    """A family of matrices f_v : M_v -> N_v intertwining the arrow actions."""

    __slots__ = ("source", "target", "comps")

    def __init__(self, source: Representation, target: Representation,
                 comps: Sequence[FpMatrix], check: bool = True):
        source.same_context(target)
        comps = tuple(comps)
        if check:
            if len(comps) != source.ctx.n:
                raise ValueError("one component per vertex required")
            for v, f in enumerate(comps):
                if f.shape != (target.dims[v], source.dims[v]):
                    raise ValueError(f"component at vertex {v} has shape {f.shape}, "
                                     f"expected {(target.dims[v], source.dims[v])}")
            for k, a in enumerate(source.ctx.quiver.arrows):
                if comps[a.target] @ source.mats[k] != target.mats[k] @ comps[a.source]:
                    raise ValueError(f"not a morphism: fails to intertwine arrow {a.name}")
        self.source = source
        self.target = target
        self.comps = comps

    @classmethod
    def identity(cls, m: Representation) -> "RepMorphism":
        return cls(m, m, [m.ctx.eye(d) for d in m.dims], check=False)

    @classmethod
    def zero(cls, m: Representation, n: Representation) -> "RepMorphism":
        return cls(m, n, [m.ctx.zero(n.dims[v], m.dims[v]) for v in range(m.ctx.n)], check=False)

    def __matmul__(self, other: "RepMorphism") -> "RepMorphism":
        if other.target != self.source:
            raise ValueError("composition of non-composable morphisms")
        return RepMorphism(other.source, self.target,
                           [g @ f for g, f in zip(self.comps, other.comps)], check=False)

    def _same_shape(self, other: "RepMorphism") -> None:
        if self.source != other.source or self.target != other.target:
            raise ValueError("morphisms have different source or target")

    def __add__(self, other: "RepMorphism") -> "RepMorphism":
        self._same_shape(other)
        return RepMorphism(self.source, self.target,
                           [f + g for f, g in zip(self.comps, other.comps)], check=False)

    def __sub__(self, other: "RepMorphism") -> "RepMorphism":
        self._same_shape(other)
        return RepMorphism(self.source, self.target,
                           [f - g for f, g in zip(self.comps, other.comps)], check=False)

    def __neg__(self) -> "RepMorphism":
        return RepMorphism(self.source, self.target, [-f for f in self.comps], check=False)

    def scale(self, c: int) -> "RepMorphism":
        return RepMorphism(self.source, self.target, [f.scale(c) for f in self.comps], check=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RepMorphism):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.comps == other.comps

    def __hash__(self) -> int:
        return hash((self.source, self.target, self.comps))

    def __repr__(self) -> str:
        return f"RepMorphism({[c.tolist() for c in self.comps]})"

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.comps)

    def is_mono(self) -> bool:
        return all(rank(f) == f.cols for f in self.comps)

    def is_epi(self) -> bool:
        return all(rank(f) == f.rows for f in self.comps)

    def is_iso(self) -> bool:
        return all(is_invertible(f) for f in self.comps)

    def vec(self) -> np.ndarray:
        if not self.comps:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate([f.a.ravel() for f in self.comps])


# --- Hom spaces ---------------------------------------------------------------

class HomSpace:
    """Hom(M, N) as a subspace of the ambient space of per-vertex matrices.

    Morphisms are vectorised by concatenating their row-major components.
    The basis is the canonical nullspace basis of the intertwining system,
    so the coordinates of a morphism are its entries at `free`.
    """

    def __init__(self, m: Representation, n: Representation):
        m.same_context(n)
        ctx = m.ctx
        p = ctx.prime
        self.source, self.target = m, n
        sizes = [n.dims[v] * m.dims[v] for v in range(ctx.n)]
        self.offsets = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
        self.ambient = int(self.offsets[-1])
        blocks = []
        for k, a in enumerate(ctx.quiver.arrows):
            i, j = a.source, a.target
            r = n.dims[j] * m.dims[i]
            if r == 0:
                continue
            row = np.zeros((r, self.ambient), dtype=np.int64)
            row[:, self.offsets[j]:self.offsets[j + 1]] = np.kron(np.eye(n.dims[j], dtype=np.int64), m.mats[k].a.T)
            row[:, self.offsets[i]:self.offsets[i + 1]] -= np.kron(n.mats[k].a, np.eye(m.dims[i], dtype=np.int64))
            blocks.append(row % p)
        eqs = np.vstack(blocks) if blocks else np.zeros((0, self.ambient), dtype=np.int64)
        self.basis, self.free = nullspace_with_free(eqs, p)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def morphism(self, vec: np.ndarray) -> RepMorphism:
        m, n = self.source, self.target
        p = m.ctx.prime
        comps = []
        for v in range(m.ctx.n):
            block = np.asarray(vec[self.offsets[v]:self.offsets[v + 1]], dtype=np.int64) % p
            comps.append(FpMatrix._wrap(block.reshape(n.dims[v], m.dims[v]), p))
        return RepMorphism(m, n, comps, check=False)

    def combination(self, coeffs: np.ndarray) -> RepMorphism:
        return self.morphism(self.basis @ np.asarray(coeffs, dtype=np.int64) % self.source.ctx.prime)

    def coords(self, f: RepMorphism) -> np.ndarray:
        return f.vec()[self.free]

    def morphisms(self) -> list[RepMorphism]:
        return [self.morphism(self.basis[:, c]) for c in range(self.dim)]


@lru_cache(maxsize=4096)
def hom_space(m: Representation, n: Representation) -> HomSpace:
    return HomSpace(m, n)


def hom_basis(m: Representation, n: Representation) -> list[RepMorphism]:
    """An F_p-basis of Hom(M, N), deterministic."""
    return hom_space(m, n).morphisms()


def hom_dim(m: Representation, n: Representation) -> int:
    return hom_space(m, n).dim


# --- sub, quotient, kernel, cokernel ----------------------------------------

def subrepresentation(m: Representation, bases: Sequence[FpMatrix]) -> tuple[Representation, RepMorphism]:
    """The subrepresentation spanned by the given column bases (assumed invariant)."""
    ctx = m.ctx
    mats = []
    for k, a in enumerate(ctx.quiver.arrows):
        mats.append(solve(bases[a.target], m.mats[k] @ bases[a.source]))
    sub = Representation(ctx, tuple(b.cols for b in bases), tuple(mats))
    return sub, RepMorphism(sub, m, bases, check=False)


def quotient_representation(m: Representation, bases: Sequence[FpMatrix]) -> tuple[Representation, RepMorphism]:
    """M modulo the invariant subspaces spanned by `bases`, with the projection."""
    ctx = m.ctx
    qs = [left_annihilator(b) if b.cols else ctx.eye(m.dims[v]) for v, b in enumerate(bases)]
    mats = []
    for k, a in enumerate(ctx.quiver.arrows):
        # Q_a q_i = q_j M_a ; q_i has full row rank
        qi, rhs = qs[a.source], qs[a.target] @ m.mats[k]
        mats.append(solve(qi.T, rhs.T).T)
    quo = Representation(ctx, tuple(q.rows for q in qs), tuple(mats))
    return quo, RepMorphism(m, quo, qs, check=False)


def kernel(f: RepMorphism) -> tuple[Representation, RepMorphism]:
    p = f.source.ctx.prime
    bases = [FpMatrix._wrap(nullspace_array(c.a, p), p) for c in f.comps]
    return subrepresentation(f.source, bases)


def image_bases(f: RepMorphism) -> list[FpMatrix]:
    p = f.source.ctx.prime
    return [FpMatrix._wrap(column_basis_array(c.a, p), p) for c in f.comps]


def cokernel(f: RepMorphism) -> tuple[Representation, RepMorphism]:
    return quotient_representation(f.target, image_bases(f))


def restrict_codomain(f: RepMorphism, incl: RepMorphism) -> RepMorphism:
    """Factor f through the mono `incl` (im f must lie in its image)."""
    return RepMorphism(f.source, incl.source,
                       [solve(i, c) for i, c in zip(incl.comps, f.comps)], check=False)


def factor_through_epi(f: RepMorphism, epi: RepMorphism) -> RepMorphism:
    """The unique g with g @ epi == f (f must vanish on ker epi)."""
    return RepMorphism(epi.target, f.target,
                       [solve(e.T, c.T).T for e, c in zip(epi.comps, f.comps)], check=False)


@dataclass(frozen=True)
class Factorization:
    kernel: Representation
    kernel_inclusion: RepMorphism
    image: Representation
    coimage_map: RepMorphism  # M ->> im
    image_inclusion: RepMorphism  # im >-> N
    cokernel: Representation
    cokernel_projection: RepMorphism


def factorize(f: RepMorphism) -> Factorization:
    ker, kin = kernel(f)
    im, iin = subrepresentation(f.target, image_bases(f))
    epi = restrict_codomain(f, iin)
    cok, cpr = cokernel(f)
    return Factorization(ker, kin, im, epi, iin, cok, cpr)


def preimage(f: RepMorphism, sub_incl: RepMorphism) -> tuple[Representation, RepMorphism]:
    """f^{-1}(S) as a subrepresentation of the source, for S >-> target."""
    _, q = quotient_representation(f.target, list(sub_incl.comps))
    return kernel(q @ f)


# --- direct sums ------------------------------------------------------------

@dataclass(frozen=True)
class DirectSum:
    obj: Representation
    injections: tuple[RepMorphism, ...]
    projections: tuple[RepMorphism, ...]


def direct_sum(mods: Sequence[Representation], ctx: AlgebraContext | None = None) -> DirectSum:
    if not mods:
        if ctx is None:
            raise ValueError("empty direct sum needs a context")
        z = ctx.zero_module()
        return DirectSum(z, (), ())
    ctx = mods[0].ctx
    p = ctx.prime
    dims = tuple(sum(m.dims[v] for m in mods) for v in range(ctx.n))
    mats = tuple(block_diag([m.mats[k] for m in mods], p) for k in range(len(ctx.quiver.arrows)))
    total = Representation(ctx, dims, mats)
    injs, prjs = [], []
    offs = [0] * ctx.n
    for m in mods:
        inj_c, prj_c = [], []
        for v in range(ctx.n):
            e = np.zeros((dims[v], m.dims[v]), dtype=np.int64)
            e[offs[v]:offs[v] + m.dims[v], :] = np.eye(m.dims[v], dtype=np.int64)
            inj_c.append(FpMatrix._wrap(e, p))
            prj_c.append(FpMatrix._wrap(e.T, p))
            offs[v] += m.dims[v]
        injs.append(RepMorphism(m, total, inj_c, check=False))
        prjs.append(RepMorphism(total, m, prj_c, check=False))
    return DirectSum(total, tuple(injs), tuple(prjs))


def morphism_from_sum(ds: DirectSum, maps: Sequence[RepMorphism]) -> RepMorphism:
    out = None
    for prj, g in zip(ds.projections, maps):
        term = g @ prj
        out = term if out is None else out + term
    return out


def morphism_into_sum(ds: DirectSum, maps: Sequence[RepMorphism]) -> RepMorphism:
    out = None
    for inj, g in zip(ds.injections, maps):
        term = inj @ g
        out = term if out is None else out + term
    return out


# --- standard modules ---------------------------------------------------------

def standard_module(ctx: AlgebraContext, kind: str, v: int) -> Representation:
    """P(v), I(v) or S(v) built on the path basis."""
    q = ctx.quiver
    if not 0 <= v < q.vertex_count:
        raise ValueError(f"vertex {v} out of range")
    p = ctx.prime
    if kind == "S":
        dims = tuple(1 if w == v else 0 for w in range(q.vertex_count))
        return ctx.module(dims)
    if kind == "P":
        bases = [q.paths(v, w) for w in range(q.vertex_count)]
        mats = []
        for k, a in enumerate(q.arrows):
            src, tgt = bases[a.source], bases[a.target]
            m = np.zeros((len(tgt), len(src)), dtype=np.int64)
            for c, path in enumerate(src):
                m[tgt.index(path + (k,)), c] = 1
            mats.append(FpMatrix._wrap(m, p))
        return Representation(ctx, tuple(len(b) for b in bases), tuple(mats))
    if kind == "I":
        bases = [q.paths(w, v) for w in range(q.vertex_count)]
        mats = []
        for k, a in enumerate(q.arrows):
            src, tgt = bases[a.source], bases[a.target]
            m = np.zeros((len(tgt), len(src)), dtype=np.int64)
            for c, path in enumerate(src):
                if path and path[0] == k:
                    m[tgt.index(path[1:]), c] = 1
            mats.append(FpMatrix._wrap(m, p))
        return Representation(ctx, tuple(len(b) for b in bases), tuple(mats))
    raise ValueError(f"unknown standard module kind {kind!r}; use 'P', 'I' or 'S'")


# --- projective covers and injective hulls -----------------------------------

def _complement_positions(basis: FpMatrix) -> list[int]:
    # standard basis vectors outside the pivots of rref(basis^T) complement span(basis)
    n = basis.rows
    if basis.cols == 0:
        return list(range(n))
    piv = set(rref_array(basis.a.T.copy(), basis.p)[1])
    return [k for k in range(n) if k not in piv]


def radical_bases(m: Representation) -> list[FpMatrix]:
    ctx = m.ctx
    out = []
    for w in range(ctx.n):
        ins = ctx.quiver.arrows_in(w)
        span = hstack([m.mats[k] for k in ins], rows=m.dims[w], p=ctx.prime)
        out.append(FpMatrix._wrap(column_basis_array(span.a, ctx.prime), ctx.prime))
    return out


def top_dims(m: Representation) -> tuple[int, ...]:
    return tuple(m.dims[v] - b.cols for v, b in enumerate(radical_bases(m)))


def socle_bases(m: Representation) -> list[FpMatrix]:
    ctx = m.ctx
    out = []
    for v in range(ctx.n):
        outs = ctx.quiver.arrows_out(v)
        stacked = vstack([m.mats[k] for k in outs], cols=m.dims[v], p=ctx.prime)
        out.append(FpMatrix._wrap(nullspace_array(stacked.a, ctx.prime), ctx.prime))
    return out


def projective_cover(m: Representation) -> RepMorphism:
    """Canonical epi from a sum of indecomposable projectives, one per top vector."""
    ctx = m.ctx
    q = ctx.quiver
    summands, gens = [], []
    for v, rad in enumerate(radical_bases(m)):
        for k in _complement_positions(rad):
            summands.append(ctx.projective(v))
            e = np.zeros((m.dims[v], 1), dtype=np.int64)
            e[k, 0] = 1
            gens.append((v, FpMatrix._wrap(e, ctx.prime)))
    ds = direct_sum(summands, ctx)
    maps = []
    for (v, vec), pv in zip(gens, summands):
        comps = []
        for w in range(ctx.n):
            cols = [m.path_matrix(path, v) @ vec for path in q.paths(v, w)]
            comps.append(hstack(cols, rows=m.dims[w], p=ctx.prime))
        maps.append(RepMorphism(pv, m, comps, check=False))
    if not maps:
        return RepMorphism.zero(ds.obj, m)
    return morphism_from_sum(ds, maps)


def is_projective(m: Representation) -> bool:
    return projective_cover(m).source.dim == m.dim


@dataclass(frozen=True)
class Presentation:
    """0 -> Q -> P -> M -> 0 with P a projective cover and Q projective."""
    kernel: Representation
    inclusion: RepMorphism
    projective: Representation
    cover: RepMorphism


def proj_presentation(m: Representation) -> Presentation:
    cover = projective_cover(m)
    k, kin = kernel(cover)
    kc = projective_cover(k)
    if kc.source.dim != k.dim:
        raise ArithmeticError("kernel of a projective cover is not projective; quiver not hereditary?")
    return Presentation(kc.source, kin @ kc, cover.source, cover)


def inj_hull(m: Representation) -> RepMorphism:
    """Canonical mono into a sum of indecomposable injectives, one per socle vector."""
    ctx = m.ctx
    q = ctx.quiver
    p = ctx.prime
    summands, maps = [], []
    for v, soc in enumerate(socle_bases(m)):
        if soc.cols == 0:
            continue
        # functionals phi with phi @ soc = I
        phis = solve(soc.T, ctx.eye(soc.cols)).T
        iv = ctx.injective(v)
        for r in range(phis.rows):
            phi = FpMatrix._wrap(phis.a[r:r + 1], p)
            comps = []
            for w in range(ctx.n):
                rows = [phi @ m.path_matrix(path, w) for path in q.paths(w, v)]
                comps.append(vstack(rows, cols=m.dims[w], p=p))
            summands.append(iv)
            maps.append(RepMorphism(m, iv, comps, check=False))
    ds = direct_sum(summands, ctx)
    if not maps:
        return RepMorphism.zero(m, ds.obj)
    return morphism_into_sum(ds, maps)


def is_isomorphic(m: Representation, n: Representation, seed: int = 0, tries: int = 64) -> RepMorphism | None:
    """An isomorphism M -> N if one is found (randomised search, verified exactly)."""
    m.same_context(n)
    if m.dims != n.dims:
        return None
    if m == n:
        return RepMorphism.identity(m)
    hs = hom_space(m, n)
    if hs.dim == 0:
        return None
    rng = np.random.default_rng(seed)
    p = m.ctx.prime
    for _ in range(tries):
        f = hs.combination(rng.integers(0, p, size=hs.dim))
        if f.is_iso():
            return f
    return None

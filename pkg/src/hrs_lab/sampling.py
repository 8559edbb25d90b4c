"""Random modules, complexes, heart objects and heart morphisms for the property suites.

Every generator takes a numpy Generator and is deterministic given its state.
Dimension caps keep the linear systems desk-sized.
"""
from __future__ import annotations

import numpy as np

from .complexes import ComplexA
from .heart import (
    HeartMorphism,
    HeartObject,
    compose,
    heart_hom_basis,
    linear_combination,
    make_heart_object,
    shifted_object,
    split_object,
    stalk_object,
)
from .linalg import FpMatrix, inverse, is_invertible, random_matrix
from .quiver import (
    AlgebraContext,
    Representation,
    RepMorphism,
    cokernel,
    direct_sum,
    hom_space,
    inj_hull,
    morphism_from_sum,
)
from .torsion import TorsionPair, is_torsion, torsion_quotient, torsion_radical


def random_dims(ctx: AlgebraContext, rng: np.random.Generator, max_dim: int, min_dim: int = 0) -> tuple[int, ...]:
    total = int(rng.integers(min_dim, max_dim + 1))
    dims = [0] * ctx.n
    for _ in range(total):
        dims[int(rng.integers(ctx.n))] += 1
    return tuple(dims)


def random_module(ctx: AlgebraContext, rng: np.random.Generator, max_dim: int = 4, min_dim: int = 0) -> Representation:
    dims = random_dims(ctx, rng, max_dim, min_dim)
    p = ctx.prime
    mats = tuple(random_matrix(rng, dims[a.target], dims[a.source], p) for a in ctx.quiver.arrows)
    return Representation(ctx, dims, mats)


def random_invertible(rng: np.random.Generator, n: int, p: int) -> FpMatrix:
    while True:
        m = random_matrix(rng, n, n, p)
        if is_invertible(m):
            return m


def random_conjugate(m: Representation, rng: np.random.Generator) -> tuple[Representation, RepMorphism, RepMorphism]:
    """A random isomorphic copy of M with the isomorphism M -> copy and its inverse."""
    ctx, p = m.ctx, m.ctx.prime
    gs = [random_invertible(rng, d, p) for d in m.dims]
    inv = [inverse(g) for g in gs]
    mats = tuple(gs[a.target] @ m.mats[k] @ inv[a.source] for k, a in enumerate(ctx.quiver.arrows))
    copy = Representation(ctx, m.dims, mats)
    return copy, RepMorphism(m, copy, gs, check=False), RepMorphism(copy, m, inv, check=False)


def random_hom(m: Representation, n: Representation, rng: np.random.Generator) -> RepMorphism:
    hs = hom_space(m, n)
    return hs.combination(rng.integers(0, m.ctx.prime, size=hs.dim))


def _torsion_pieces(tp: TorsionPair) -> list[Representation]:
    ctx = tp.context
    pieces = [ctx.injective(v) for v in range(ctx.n) if is_torsion(tp, ctx.injective(v))]
    if not tp.generator.is_zero():
        pieces.append(tp.generator)
    return pieces


def random_torsion(tp: TorsionPair, rng: np.random.Generator, max_dim: int = 4, allow_zero: bool = True) -> Representation:
    """A random torsion module: a sum of random quotients of torsion pieces, or t(X)."""
    ctx = tp.context
    pieces = _torsion_pieces(tp)
    if not pieces or (allow_zero and rng.random() < 0.05):
        return ctx.zero_module()
    if rng.random() < 0.2:
        t = torsion_radical(tp, random_module(ctx, rng, max_dim)).source
        if not t.is_zero() or allow_zero:
            return random_conjugate(t, rng)[0]
    mods, budget = [], max_dim
    for _ in range(8):
        piece = pieces[int(rng.integers(len(pieces)))]
        k = random_module(ctx, rng, 2)
        q = cokernel(random_hom(k, piece, rng))[0]
        if 0 < q.dim <= budget:
            mods.append(q)
            budget -= q.dim
        if mods and (budget == 0 or rng.random() < 0.5):
            break
    if not mods:
        return ctx.zero_module()
    return random_conjugate(direct_sum(mods, ctx).obj, rng)[0]


def random_torsion_free(tp: TorsionPair, rng: np.random.Generator, max_dim: int = 3) -> Representation:
    x = random_module(tp.context, rng, max_dim)
    return torsion_quotient(tp, x).target


def random_heart_object(tp: TorsionPair, rng: np.random.Generator, max_dim: int = 2) -> HeartObject:
    """[F (+) K --(g, iota)--> I(K) (+) T] with F torsion-free, iota an injective hull, T torsion.

    The kernel embeds into F, so it is torsion-free; the cokernel is a quotient
    of a torsion module, so it is torsion.
    """
    ctx = tp.context
    f = random_torsion_free(tp, rng, max_dim)
    k = random_module(ctx, rng, max(1, max_dim - 1))
    t = random_torsion(tp, rng, max_dim)
    iota = inj_hull(k)
    e = direct_sum([iota.target, t], ctx)
    src = direct_sum([f, k], ctx)
    g = random_hom(f, e.obj, rng)
    d = morphism_from_sum(src, [g, e.injections[0] @ iota])
    return make_heart_object(tp, ComplexA.two_term(d, -1))


def random_stalk_or_shift(tp: TorsionPair, rng: np.random.Generator, max_dim: int = 3) -> HeartObject:
    if rng.random() < 0.5:
        return stalk_object(tp, random_torsion(tp, rng, max_dim))
    return shifted_object(tp, random_torsion_free(tp, rng, max_dim))


def random_heart_morphism(b1: HeartObject, b2: HeartObject, rng: np.random.Generator) -> HeartMorphism:
    basis = heart_hom_basis(b1, b2)
    c = rng.integers(0, b1.pair.context.prime, size=len(basis))
    return linear_combination(basis, c, b1, b2)


def ext_component(f: HeartMorphism) -> HeartMorphism:
    """The H^0(B1) -> H^-1(B2)[1] block of f in the splittings of source and target."""
    s1, s2 = split_object(f.source), split_object(f.target)
    return compose(s2.retraction, compose(f, s1.section))


def morphism_with_ext(b1: HeartObject, b2: HeartObject, rng: np.random.Generator) -> HeartMorphism | None:
    """A random morphism whose Ext block is a chosen nonzero class, if Ext^1(H^0 B1, H^-1 B2) != 0."""
    s1, s2 = split_object(b1), split_object(b2)
    t1, f2 = s1.decomposition.right, s2.decomposition.left
    ext = heart_hom_basis(t1, f2)
    if not ext:
        return None
    p = b1.pair.context.prime
    c = rng.integers(0, p, size=len(ext))
    if not c.any():
        c[0] = 1
    e = linear_combination(ext, c, t1, f2)
    core = compose(s2.decomposition.mono, compose(e, s1.decomposition.epi))
    # add a random morphism with zero Ext block so the result is not purely the class
    rest = random_heart_morphism(b1, b2, rng)
    rest = rest - compose(s2.decomposition.mono, compose(ext_component(rest), s1.decomposition.epi))
    return core + rest


# --- complexes ------------------------------------------------------------------

def _extend(terms, diffs, nxt: Representation, rng: np.random.Generator):
    """Append nxt with a differential killing the previous image (d d = 0)."""
    if not terms:
        return [nxt], []
    last = terms[-1]
    if diffs:
        q, qpr = cokernel(diffs[-1])
    else:
        q, qpr = last, RepMorphism.identity(last)
    return terms + [nxt], diffs + [random_hom(q, nxt, rng) @ qpr]


def random_complex_from(term_fn, rng: np.random.Generator, length: int, lo: int = 0) -> ComplexA:
    terms, diffs = [], []
    for _ in range(length):
        terms, diffs = _extend(terms, diffs, term_fn(), rng)
    ctx = terms[0].ctx
    return ComplexA(ctx, {lo + i: t for i, t in enumerate(terms)}, {lo + i: d for i, d in enumerate(diffs)})


def random_complex(ctx: AlgebraContext, rng: np.random.Generator, max_len: int = 3, max_dim: int = 3,
                   lo_range: tuple[int, int] = (-2, 1)) -> ComplexA:
    length = int(rng.integers(1, max_len + 1))
    lo = int(rng.integers(lo_range[0], lo_range[1] + 1))
    return random_complex_from(lambda: random_module(ctx, rng, max_dim), rng, length, lo)


def split_exact_complex(mods: list[Representation], rng: np.random.Generator) -> tuple[list, list]:
    """0 -> A0 -> A0+A1 -> ... -> A_{m-2}+A_{m-1} -> A_{m-1} -> 0, scrambled by random isos."""
    ctx = mods[0].ctx
    chunks = [[mods[0]]] + [[mods[i], mods[i + 1]] for i in range(len(mods) - 1)] + [[mods[-1]]]
    sums = [direct_sum(ch, ctx) for ch in chunks]
    copies = [random_conjugate(s.obj, rng) for s in sums]
    diffs = []
    for i in range(len(sums) - 1):
        # project onto the last summand, include as the first summand of the next term
        d = sums[i + 1].injections[0] @ sums[i].projections[-1]
        diffs.append(copies[i + 1][1] @ d @ copies[i][2])
    return [c[0] for c in copies], diffs


def torsion_complex_sample(tp: TorsionPair, rng: np.random.Generator, max_len: int = 4, max_dim: int = 3) -> tuple[str, list, list]:
    """A torsion-term complex (terms, module differentials) and the construction used.

    Constructions: generic random, split exact, injective-hull coresolution
    (exact), stalk (never exact unless zero) and a zero differential in the
    middle of a generic complex (usually not exact).
    """
    kind = ["generic", "split-exact", "coresolution", "stalk", "broken"][int(rng.integers(5))]
    length = int(rng.integers(1, max_len + 1))
    if kind == "split-exact":
        m = max(1, length - 1)
        mods = [random_torsion(tp, rng, max(1, max_dim // 2), allow_zero=False) for _ in range(m)]
        terms, diffs = split_exact_complex(mods, rng)
        return kind, terms, diffs
    if kind == "coresolution":
        t = random_torsion(tp, rng, max_dim, allow_zero=False)
        u = inj_hull(t)
        q, qpr = cokernel(u)
        return kind, [t, u.target, q], [u, qpr]
    if kind == "stalk":
        return kind, [random_torsion(tp, rng, max_dim, allow_zero=False)], []
    terms, diffs = [], []
    for _ in range(length):
        terms, diffs = _extend(terms, diffs, random_torsion(tp, rng, max_dim), rng)
    if kind == "broken" and diffs:
        i = int(rng.integers(len(diffs)))
        diffs[i] = RepMorphism.zero(terms[i], terms[i + 1])
    return kind, terms, diffs

"""The tilted heart: complexes X with H^0 torsion, H^-1 torsion-free, and no
other cohomology.

Objects are stored as two-term complexes in degrees -1, 0 together with a
projective replacement P -> X.  A morphism B1 -> B2 is a chain map
P(B1) -> B2.cx; two morphisms are equal when the chain maps are homotopic.
Composition lifts the first map through the quasi-isomorphism
P(B2) -> B2.cx, which is a solvable linear system because P(B1) is a
bounded complex of projectives.

The HRS truncation tau'_{<=0} X keeps X^n for n < 0 and replaces X^0 by the
preimage in ker d^0 of the torsion part of H^0(X).  Kernels and cokernels
of a heart morphism are read off the cone C of its representative:
ker = H'^0(C[-1]) and coker = H'^0(C).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .complexes import (
    ChainMap,
    ComplexA,
    ComplexSum,
    ProjectiveReplacement,
    cohomology,
    cohomology_dims,
    cone,
    direct_sum_complex,
    hom_complex,
    homotopic,
    is_quasi_iso,
    lift_through,
    map_from_sum,
    map_into_sum,
    proj_replacement,
    quotient_complex,
    shift,
    shift_map,
    subcomplex_from_terms,
    truncate_ge,
    truncate_le,
)
from .linalg import nullspace_array, rank_array, solve_array
from .quiver import (
    Representation,
    direct_sum,
    RepMorphism,
    factor_through_epi,
    image_bases,
    kernel,
    preimage,
    quotient_representation,
    restrict_codomain,
)
from .torsion import Kind, TorsionPair, classify, torsion_radical


class NotInHeart(ValueError):
    """A complex fails one of the heart's cohomology constraints."""


class NotAComplex(ValueError):
    """Consecutive heart morphisms do not compose to zero."""


class SplitFailed(ArithmeticError):
    """No section of the torsion decomposition epi; impossible over a hereditary algebra."""


@dataclass(frozen=True, eq=False)
class HeartObject:
    pair: TorsionPair
    cx: ComplexA
    replacement: ProjectiveReplacement
    h_minus1: Representation
    h0: Representation

    @property
    def P(self) -> ComplexA:
        return self.replacement.complex

    @property
    def qis(self) -> ChainMap:
        return self.replacement.qis

    def is_zero(self) -> bool:
        return self.h0.is_zero() and self.h_minus1.is_zero()

    def is_stalk(self) -> bool:
        """True when cx is a module concentrated in degree 0 (necessarily torsion)."""
        return set(self.cx.degrees) <= {0}

    @property
    def module(self) -> Representation:
        if not self.is_stalk():
            raise ValueError("not a stalk object")
        return self.cx.term(0)

    def __repr__(self) -> str:
        return f"HeartObject(H^-1 dims {self.h_minus1.dims}, H^0 dims {self.h0.dims})"


@dataclass(frozen=True, eq=False)
class HeartMorphism:
    source: HeartObject
    target: HeartObject
    rep: ChainMap  # source.P -> target.cx

    def _same(self, other: "HeartMorphism") -> None:
        if self.source is not other.source or self.target is not other.target:
            if self.rep.source != other.rep.source or self.rep.target != other.rep.target:
                raise ValueError("heart morphisms between different objects")

    def __add__(self, other: "HeartMorphism") -> "HeartMorphism":
        self._same(other)
        return HeartMorphism(self.source, self.target, self.rep + other.rep)

    def __sub__(self, other: "HeartMorphism") -> "HeartMorphism":
        self._same(other)
        return HeartMorphism(self.source, self.target, self.rep - other.rep)

    def __neg__(self) -> "HeartMorphism":
        return HeartMorphism(self.source, self.target, -self.rep)

    def scale(self, c: int) -> "HeartMorphism":
        return HeartMorphism(self.source, self.target, self.rep.scale(c))

    def is_zero(self) -> bool:
        return homotopic(self.rep, ChainMap.zero(self.rep.source, self.rep.target)) is not None

    def equals(self, other: "HeartMorphism") -> bool:
        self._same(other)
        return homotopic(self.rep, other.rep) is not None


# --- objects ----------------------------------------------------------------

def _two_term(cx: ComplexA) -> bool:
    return set(cx.degrees) <= {-1, 0}


@dataclass(frozen=True)
class _Normalized:
    """X >-- sub --> N: sub = tau_{<=0} X includes into X and projects onto N."""
    cx: ComplexA
    incl: ChainMap | None
    proj: ChainMap | None


def _normalize(x: ComplexA) -> _Normalized:
    if _two_term(x):
        return _Normalized(x, None, None)
    sub, incl = truncate_le(x, 0)
    n, proj = truncate_ge(sub, -1)
    return _Normalized(n, incl, proj)


def _into_normalized(f: ChainMap, norm: _Normalized) -> ChainMap:
    """Transport f: P -> X to P -> N along the zigzag."""
    if norm.incl is None:
        return f
    g = lift_through(f, norm.incl)
    if g is None:
        raise ArithmeticError("lifting into the standard truncation failed")
    return norm.proj @ g


def _out_of_normalized(obj: HeartObject, norm: _Normalized) -> ChainMap:
    """A chain map P(N) -> X realising the isomorphism N ~ X."""
    if norm.incl is None:
        return obj.qis
    g = lift_through(obj.qis, norm.proj)
    if g is None:
        raise ArithmeticError("lifting through the standard truncation failed")
    return norm.incl @ g


def _membership(tp: TorsionPair, cx: ComplexA) -> tuple[Representation, Representation]:
    bad = {n: d for n, d in cohomology_dims(cx).items() if n not in (-1, 0)}
    if bad:
        raise NotInHeart(f"cohomology outside degrees -1, 0: {bad}")
    h0 = cohomology(cx, 0).rep
    hm1 = cohomology(cx, -1).rep
    k0 = classify(tp, h0).kind
    if k0 is not Kind.TORSION and not h0.is_zero():
        raise NotInHeart(f"H^0 = {h0!r} is not torsion (classified {k0.value})")
    k1 = classify(tp, hm1).kind
    if k1 is not Kind.TORSION_FREE and not hm1.is_zero():
        raise NotInHeart(f"H^-1 = {hm1!r} is not torsion-free (classified {k1.value})")
    return hm1, h0


def _object(tp: TorsionPair, cx: ComplexA, replacement: ProjectiveReplacement | None = None) -> HeartObject:
    hm1, h0 = _membership(tp, cx)
    return HeartObject(tp, cx, replacement or proj_replacement(cx), hm1, h0)


def make_heart_object(tp: TorsionPair, x: ComplexA) -> HeartObject:
    """Normalise X to a two-term representative and check heart membership."""
    _membership(tp, x)
    return _object(tp, _normalize(x).cx)


def stalk_object(tp: TorsionPair, t: Representation) -> HeartObject:
    """A torsion module T as an object of the heart."""
    return make_heart_object(tp, ComplexA.stalk(t, 0))


def shifted_object(tp: TorsionPair, f: Representation) -> HeartObject:
    """F[1] for a torsion-free module F."""
    return make_heart_object(tp, ComplexA.stalk(f, -1))


def zero_object(tp: TorsionPair) -> HeartObject:
    return _object(tp, ComplexA.zero(tp.context))


# --- morphisms -------------------------------------------------------------

def identity(b: HeartObject) -> HeartMorphism:
    return HeartMorphism(b, b, b.qis)


def zero_morphism(b1: HeartObject, b2: HeartObject) -> HeartMorphism:
    return HeartMorphism(b1, b2, ChainMap.zero(b1.P, b2.cx))


def from_chain_map(b1: HeartObject, b2: HeartObject, g: ChainMap) -> HeartMorphism:
    """The heart morphism induced by an honest chain map g: B1.cx -> B2.cx."""
    return HeartMorphism(b1, b2, g @ b1.qis)


def from_module_map(b1: HeartObject, b2: HeartObject, g: RepMorphism) -> HeartMorphism:
    """A module map between stalk objects, seen in the heart."""
    return from_chain_map(b1, b2, ChainMap(b1.cx, b2.cx, {0: g}, check=False))


def as_module_map(h: HeartMorphism) -> RepMorphism:
    """The module map underlying a heart morphism between stalk objects.

    Between stalks there are no nonzero homotopies, so the degree-0
    component of the representative vanishes on ker(P^0 -> T) and factors
    through the cover.
    """
    if not (h.source.is_stalk() and h.target.is_stalk()):
        raise ValueError("as_module_map needs stalk source and target")
    return factor_through_epi(h.rep.comp(0), h.source.qis.comp(0))


def heart_hom_basis(b1: HeartObject, b2: HeartObject) -> list[HeartMorphism]:
    hc = hom_complex(b1.P, b2.cx)
    return [HeartMorphism(b1, b2, g) for g in hc.h0_basis()]


def heart_hom_dim(b1: HeartObject, b2: HeartObject) -> int:
    return hom_complex(b1.P, b2.cx).h0_dim


def compose(g: HeartMorphism, f: HeartMorphism) -> HeartMorphism:
    """g o f for f: B1 -> B2 and g: B2 -> B3."""
    if f.target.cx != g.source.cx:
        raise ValueError("compose: target of f is not the source of g")
    lifted = lift_through(f.rep, g.source.qis)
    if lifted is None:
        raise ArithmeticError("could not lift through the projective replacement")
    if lifted.target != g.rep.source:
        raise ValueError("compose: replacement mismatch between objects")
    return HeartMorphism(f.source, g.target, g.rep @ lifted)


def linear_combination(basis: Sequence[HeartMorphism], coeffs, b1: HeartObject, b2: HeartObject) -> HeartMorphism:
    out = zero_morphism(b1, b2).rep
    for c, m in zip(coeffs, basis):
        if int(c):
            out = out + m.rep.scale(int(c))
    return HeartMorphism(b1, b2, out)


def _system(equations, n_unknowns: int, p: int):
    """Stack equations sum_i c_i cols[i] ~ rhs modulo boundaries into one matrix."""
    blocks_a, blocks_b, rhs = [], [], []
    for hc, cols, r in equations:
        a = np.column_stack([hc.chain_coords(c) for c in cols]) if cols else np.zeros((hc.dim(0), 0), dtype=np.int64)
        blocks_a.append(a.reshape(hc.dim(0), n_unknowns))
        blocks_b.append(hc.boundaries)
        rhs.append(hc.chain_coords(r) if r is not None else np.zeros(hc.dim(0), dtype=np.int64))
    rows = sum(b.shape[0] for b in blocks_a)
    nb = sum(b.shape[1] for b in blocks_b)
    m = np.zeros((rows, n_unknowns + nb), dtype=np.int64)
    r0, c0 = 0, n_unknowns
    for a, b in zip(blocks_a, blocks_b):
        m[r0:r0 + a.shape[0], :n_unknowns] = a
        m[r0:r0 + b.shape[0], c0:c0 + b.shape[1]] = b
        r0 += a.shape[0]
        c0 += b.shape[1]
    return m % p, (np.concatenate(rhs) if rhs else np.zeros(0, dtype=np.int64)) % p


def solve_in_heart(equations, n_unknowns: int, p: int) -> np.ndarray | None:
    """Coefficients c with sum_i c_i cols[i] homotopic to rhs in every equation.

    `equations` is a list of (HomComplex, [ChainMap per unknown], rhs ChainMap).
    """
    m, r = _system(equations, n_unknowns, p)
    if m.shape[0] == 0:
        return np.zeros(n_unknowns, dtype=np.int64)
    sol = solve_array(m, r[:, None], p)
    return None if sol is None else sol[:n_unknowns, 0]


def solution_space_dim(equations, n_unknowns: int, p: int) -> int:
    """Dimension of the space of c solving the homogeneous system (rhs ignored)."""
    m, _ = _system([(hc, cols, None) for hc, cols, _ in equations], n_unknowns, p)
    if m.shape[0] == 0:
        return n_unknowns
    ns = nullspace_array(m, p)
    return rank_array(ns[:n_unknowns], p)


def _equation(unknowns: Sequence[HeartMorphism], rhs: HeartMorphism):
    hc = hom_complex(rhs.rep.source, rhs.rep.target)
    return hc, [u.rep for u in unknowns], rhs.rep


# --- direct sums -------------------------------------------------------------

@dataclass(frozen=True)
class HeartSum:
    obj: HeartObject
    injections: tuple[HeartMorphism, ...]
    projections: tuple[HeartMorphism, ...]
    summands: tuple[HeartObject, ...]
    cx_sum: ComplexSum
    p_sum: ComplexSum

    def morphism_from(self, maps: Sequence[HeartMorphism], target: HeartObject) -> HeartMorphism:
        """The map out of the sum restricting to maps[i] on summand i."""
        return HeartMorphism(self.obj, target, map_from_sum(self.p_sum, [m.rep for m in maps]))

    def morphism_into(self, maps: Sequence[HeartMorphism], source: HeartObject) -> HeartMorphism:
        """The map into the sum with components maps[i]."""
        return HeartMorphism(source, self.obj, map_into_sum(self.cx_sum, [m.rep for m in maps]))


def heart_direct_sum(objs: Sequence[HeartObject]) -> HeartSum:
    """Direct sum whose replacement is the sum of the summands' replacements."""
    tp = objs[0].pair
    cs = direct_sum_complex([b.cx for b in objs])
    ps = direct_sum_complex([b.P for b in objs])
    qis = map_from_sum(ps, [cs.injections[i] @ b.qis for i, b in enumerate(objs)])
    obj = _object(tp, cs.obj, ProjectiveReplacement(ps.obj, qis))
    injs = tuple(HeartMorphism(b, obj, cs.injections[i] @ b.qis) for i, b in enumerate(objs))
    prjs = tuple(HeartMorphism(obj, b, cs.projections[i] @ qis) for i, b in enumerate(objs))
    return HeartSum(obj, injs, prjs, tuple(objs), cs, ps)


# --- HRS truncations ---------------------------------------------------------

def hrs_truncate_le0(tp: TorsionPair, x: ComplexA) -> tuple[ComplexA, ChainMap]:
    """tau'_{<=0} X as a subcomplex of X, with its inclusion."""
    z0, z0in = kernel(x.d(0))
    b = restrict_codomain(x.d(-1), z0in)
    h, hpr = quotient_representation(z0, image_bases(b))
    t_in = torsion_radical(tp, h)
    _, win = preimage(hpr, t_in)
    incls = {n: RepMorphism.identity(t) for n, t in x.terms.items() if n < 0}
    incls[0] = z0in @ win
    return subcomplex_from_terms(x, incls)


def hrs_truncate_le(tp: TorsionPair, x: ComplexA, k: int) -> tuple[ComplexA, ChainMap]:
    """tau'_{<=k} X = (tau'_{<=0} X[k])[-k]."""
    sub, incl = hrs_truncate_le0(tp, shift(x, k))
    return shift(sub, -k), shift_map(incl, -k)


def hrs_h0(tp: TorsionPair, x: ComplexA) -> HeartObject:
    """The heart cohomology H'^0(X) = tau'_{<=0} tau'_{>=0} X."""
    _, s_in = hrs_truncate_le(tp, x, -1)
    q, _ = quotient_complex(s_in)
    w, _ = hrs_truncate_le0(tp, q)
    return _object(tp, _normalize(w).cx)


def heart_cokernel(f: HeartMorphism) -> tuple[HeartObject, HeartMorphism]:
    tp = f.source.pair
    c = cone(f.rep)
    _, s_in = hrs_truncate_le(tp, c.obj, -1)
    q, q_pr = quotient_complex(s_in)
    w, w_in = hrs_truncate_le0(tp, q)
    norm = _normalize(w)
    obj = _object(tp, norm.cx)
    g = q_pr @ c.inclusion @ f.target.qis
    lifted = lift_through(g, w_in)
    if lifted is None:
        raise ArithmeticError("cokernel map does not factor through tau'_{<=0}")
    return obj, HeartMorphism(f.target, obj, _into_normalized(lifted, norm))


def heart_kernel(f: HeartMorphism) -> tuple[HeartObject, HeartMorphism]:
    tp = f.source.pair
    c = cone(f.rep)
    cm = shift(c.obj, -1)
    pm = shift_map(c.projection, -1)  # C[-1] -> P(B1)
    w, w_in = hrs_truncate_le0(tp, cm)
    norm = _normalize(w)
    obj = _object(tp, norm.cx)
    out = _out_of_normalized(obj, norm)
    return obj, HeartMorphism(obj, f.source, f.source.qis @ pm @ w_in @ out)


def is_mono(f: HeartMorphism) -> bool:
    return heart_kernel(f)[0].is_zero()


def is_epi(f: HeartMorphism) -> bool:
    return heart_cokernel(f)[0].is_zero()


def is_iso(f: HeartMorphism) -> bool:
    return is_mono(f) and is_epi(f)


def factor_through(f: HeartMorphism, epi: HeartMorphism) -> HeartMorphism | None:
    """Some g with g o epi = f, if it exists."""
    basis = heart_hom_basis(epi.target, f.target)
    eq = _equation([compose(b, epi) for b in basis], f)
    c = solve_in_heart([eq], len(basis), f.source.pair.context.prime)
    return None if c is None else linear_combination(basis, c, epi.target, f.target)


def lift_along(f: HeartMorphism, mono: HeartMorphism) -> HeartMorphism | None:
    """Some g with mono o g = f, if it exists."""
    basis = heart_hom_basis(f.source, mono.source)
    eq = _equation([compose(mono, b) for b in basis], f)
    c = solve_in_heart([eq], len(basis), f.source.pair.context.prime)
    return None if c is None else linear_combination(basis, c, f.source, mono.source)


# --- short exact sequences ---------------------------------------------------

@dataclass(frozen=True)
class HeartSES:
    """0 -> left --mono--> mid --epi--> right -> 0."""
    left: HeartObject
    mid: HeartObject
    right: HeartObject
    mono: HeartMorphism
    epi: HeartMorphism

    def triangle_map(self) -> ChainMap | None:
        """The comparison chain map cone(mono~) -> right.cx, or None if epi o mono != 0.

        mono~ : P(left) -> P(mid) lifts the mono; a null-homotopy h of
        epi o mono~ gives the chain map (h, epi) on the cone.
        """
        mono_p = lift_through(self.mono.rep, self.mid.qis)
        comp = self.epi.rep @ mono_p
        h = homotopic(comp, ChainMap.zero(comp.source, comp.target))
        if h is None:
            return None
        c = cone(mono_p)
        x, y = mono_p.source, self.right.cx
        comps = {}
        for n in c.obj.degrees:
            s = c.obj.term(n)
            hx = h.comp(n + 1, x, y)
            g = self.epi.rep.comp(n)
            # C^n = P(left)^{n+1} (+) P(mid)^n
            ds = direct_sum([x.term(n + 1), self.mid.P.term(n)], s.ctx)
            comps[n] = hx @ ds.projections[0] + g @ ds.projections[1]
        return ChainMap(c.obj, y, comps)

    def verify(self) -> bool:
        """The cone test: the mono's cone is quasi-isomorphic to `right` via the epi."""
        t = self.triangle_map()
        return t is not None and is_quasi_iso(t)


def torsion_decomposition(b: HeartObject) -> HeartSES:
    """0 -> H^-1(B)[1] -> B -> H^0(B) -> 0."""
    tp = b.pair
    d = b.cx.d(-1)
    k, kin = kernel(d)
    f_cx = ComplexA.stalk(k, -1)
    f_obj = _object(tp, f_cx)
    mono = from_chain_map(f_obj, b, ChainMap(f_cx, b.cx, {-1: kin}, check=False))
    t, tpr = quotient_representation(b.cx.term(0), image_bases(d))
    t_obj = _object(tp, ComplexA.stalk(t, 0))
    epi = from_chain_map(b, t_obj, ChainMap(b.cx, t_obj.cx, {0: tpr}, check=False))
    return HeartSES(f_obj, b, t_obj, mono, epi)


@dataclass(frozen=True)
class SplitWitness:
    decomposition: HeartSES
    section: HeartMorphism  # T -> B with epi o section = id
    retraction: HeartMorphism  # B -> F[1] with retraction o mono = id, retraction o section = 0
    sum: HeartSum  # F[1] (+) T
    iso: HeartMorphism  # F[1] (+) T -> B


def split_object(b: HeartObject) -> SplitWitness:
    """B ~ H^-1(B)[1] (+) H^0(B); the extension class lives in Ext^2 = 0."""
    dec = torsion_decomposition(b)
    p = b.pair.context.prime
    f1, t = dec.left, dec.right
    basis = heart_hom_basis(t, b)
    c = solve_in_heart([_equation([compose(dec.epi, s) for s in basis], identity(t))], len(basis), p)
    if c is None:
        raise SplitFailed("no section of B -> H^0(B)")
    sec = linear_combination(basis, c, t, b)
    rbasis = heart_hom_basis(b, f1)
    eqs = [_equation([compose(r, dec.mono) for r in rbasis], identity(f1)),
           _equation([compose(r, sec) for r in rbasis], zero_morphism(t, f1))]
    c = solve_in_heart(eqs, len(rbasis), p)
    if c is None:
        raise SplitFailed("no retraction B -> H^-1(B)[1]")
    ret = linear_combination(rbasis, c, b, f1)
    hs = heart_direct_sum([f1, t])
    iso = hs.morphism_from([dec.mono, sec], b)
    return SplitWitness(dec, sec, ret, hs, iso)


# --- exactness and abelian structure -------------------------------------------

def _check_complex(diffs: Sequence[HeartMorphism]) -> None:
    for i in range(len(diffs) - 1):
        if not compose(diffs[i + 1], diffs[i]).is_zero():
            raise NotAComplex(f"d_{i + 1} o d_{i} is nonzero")


def homology_is_zero(d_in: HeartMorphism | None, d_out: HeartMorphism | None, b: HeartObject) -> bool:
    """Exactness at B of  . --d_in--> B --d_out--> .  (either map may be absent)."""
    if d_in is None and d_out is None:
        return b.is_zero()
    if d_in is None:
        return is_mono(d_out)
    if d_out is None:
        return is_epi(d_in)
    coker, pi = heart_cokernel(d_in)
    dbar = factor_through(d_out, pi)
    if dbar is None:
        raise NotAComplex("outgoing map does not vanish on the incoming image")
    return is_mono(dbar)


def is_exact_over_heart(tp: TorsionPair, terms: Sequence[HeartObject], diffs: Sequence[HeartMorphism]) -> bool:
    """Exactness of B_0 -> B_1 -> ... -> B_m in the heart (zero beyond both ends)."""
    if len(diffs) != max(len(terms) - 1, 0):
        raise ValueError("need one differential between each pair of consecutive terms")
    _check_complex(diffs)
    for i, b in enumerate(terms):
        d_in = diffs[i - 1] if i > 0 else None
        d_out = diffs[i] if i < len(diffs) else None
        if not homology_is_zero(d_in, d_out, b):
            return False
    return True


@dataclass(frozen=True)
class AbelianCheck:
    kernel_composite_zero: bool
    cokernel_composite_zero: bool
    kernel_is_mono: bool
    cokernel_is_epi: bool
    coim_to_im_iso: bool

    def passed(self) -> bool:
        return all(vars(self).values())


def abelian_check(f: HeartMorphism) -> AbelianCheck:
    """Kernel/cokernel contracts and the coimage -> image comparison for f."""
    k, kin = heart_kernel(f)
    c, cpr = heart_cokernel(f)
    kz = compose(f, kin).is_zero()
    cz = compose(cpr, f).is_zero()
    coim, coim_pr = heart_cokernel(kin)
    im, im_in = heart_kernel(cpr)
    basis = heart_hom_basis(coim, im)
    eq = _equation([compose(im_in, compose(u, coim_pr)) for u in basis], f)
    sol = solve_in_heart([eq], len(basis), f.source.pair.context.prime)
    iso = False
    if sol is not None:
        u = linear_combination(basis, sol, coim, im)
        iso = is_iso(u)
    return AbelianCheck(kz, cz, is_mono(kin), is_epi(cpr), iso)

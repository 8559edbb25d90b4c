"""Resolutions relating complexes over the module category and over the heart.

Left to right, a bounded complex of modules is replaced by a quasi-isomorphic
complex with torsion terms (pushout sweep along injective hulls).  Right to
left, a bounded complex over the heart is replaced by one whose terms are
torsion stalks (pullback sweep along covers 0 -> T^-1 -> T^0 -> B -> 0).
Between torsion stalks, heart morphisms are module maps, so the result is an
honest complex of modules.

theta compares a heart object B with the two-term complex [T^-1 -> T^0] of
its cover; check_theta_natural tests that these comparisons commute with a
heart morphism.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .complexes import (
    ChainMap,
    ComplexA,
    find_derived_iso,
    lift_through,
)
from .heart import (
    HeartObject,
    HeartMorphism,
    HeartSES,
    HeartSum,
    NotAComplex,
    as_module_map,
    compose,
    from_chain_map,
    from_module_map,
    heart_direct_sum,
    heart_hom_basis,
    heart_kernel,
    identity,
    is_exact_over_heart,
    is_iso,
    lift_along,
    linear_combination,
    make_heart_object,
    solution_space_dim,
    solve_in_heart,
    split_object,
    stalk_object,
    torsion_decomposition,
    zero_morphism,
    zero_object,
    _equation,
)
from .quiver import RepMorphism, cokernel, direct_sum, factor_through_epi
from .torsion import NotTilting, TorsionPair, is_tilting, is_torsion, t_coresolution


def _require_tilting(tp: TorsionPair) -> None:
    if not is_tilting(tp):
        raise NotTilting(f"{tp} is not tilting: some injective is not torsion")


# --- T-resolutions of module complexes ----------------------------------------

@dataclass(frozen=True)
class TResolution:
    original: ComplexA
    resolved: ComplexA
    qis: ChainMap  # original -> resolved

    def support_ok(self) -> bool:
        if self.resolved.is_zero():
            return True
        if self.original.is_zero():
            return False
        return self.original.lo <= self.resolved.lo and self.resolved.hi <= self.original.hi + 1


def _pushout_step(tp: TorsionPair, x: ComplexA, n: int) -> tuple[ComplexA, ChainMap]:
    """Replace X^n by its injective hull T and X^{n+1} by the pushout along d^n."""
    ctx = x.ctx
    u = t_coresolution(tp, x.term(n)).mono
    t = u.target
    ds = direct_sum([t, x.term(n + 1)], ctx)
    it, iy = ds.injections
    e, epr = cokernel(it @ u - iy @ x.d(n))
    terms = dict(x.terms)
    terms[n], terms[n + 1] = t, e
    diffs = dict(x.diffs)
    diffs[n - 1] = u @ x.d(n - 1)
    diffs[n] = epr @ it
    # [(t, y)] -> d y vanishes on the relations (u x, -d x)
    diffs[n + 1] = factor_through_epi(x.d(n + 1) @ ds.projections[1], epr)
    y = ComplexA(ctx, terms, diffs, check=False)
    comps = {m: RepMorphism.identity(s) for m, s in x.terms.items()}
    comps[n] = u
    comps[n + 1] = epr @ iy
    return y, ChainMap(x, y, comps, check=False)


def t_resolve_complex(tp: TorsionPair, x: ComplexA) -> TResolution:
    """A quasi-isomorphism X -> T with every term of T torsion."""
    _require_tilting(tp)
    qis = ChainMap.identity(x)
    cur = x
    if not x.is_zero():
        n = x.lo
        while n <= cur.hi:
            if not is_torsion(tp, cur.term(n)):
                cur, step = _pushout_step(tp, cur, n)
                qis = step @ qis
            n += 1
    return TResolution(x, cur, qis)


# --- covers in the heart ---------------------------------------------------------

@dataclass(frozen=True)
class Cover:
    """0 -> T^-1 -> T^0 -> B -> 0 with T^-1, T^0 torsion stalks."""
    ses: HeartSES

    @property
    def mono(self) -> HeartMorphism:
        return self.ses.mono

    @property
    def epi(self) -> HeartMorphism:
        return self.ses.epi

    @property
    def t_minus1(self) -> HeartObject:
        return self.ses.left

    @property
    def t0(self) -> HeartObject:
        return self.ses.mid

    def differential(self) -> RepMorphism:
        """T^-1 -> T^0 as a module map."""
        return as_module_map(self.mono)


def connecting_map(tp: TorsionPair, u: RepMorphism) -> tuple[HeartObject, HeartObject, HeartMorphism]:
    """For 0 -> F --u--> E -> G -> 0, the heart map G -> F[1] of the rotated triangle."""
    g_mod, v = cokernel(u)
    g = stalk_object(tp, g_mod)
    f1 = make_heart_object(tp, ComplexA.stalk(u.source, -1))
    cx = ComplexA.two_term(u, -1)
    to_g = ChainMap(cx, g.cx, {0: v}, check=False)
    lifted = lift_through(g.qis, to_g)
    if lifted is None:
        raise ArithmeticError("could not lift through [F -> E] ~ G")
    to_f1 = ChainMap(cx, f1.cx, {-1: RepMorphism.identity(u.source)}, check=False)
    return g, f1, HeartMorphism(g, f1, to_f1 @ lifted)


def cover_by_T(tp: TorsionPair, b: HeartObject) -> Cover:
    """0 -> E -> G (+) T_B -> B -> 0 from B ~ F[1] (+) T_B and 0 -> F -> E -> G -> 0."""
    _require_tilting(tp)
    sw = split_object(b)
    dec = sw.decomposition
    f_mod = dec.left.cx.term(-1)
    co = t_coresolution(tp, f_mod)
    e = stalk_object(tp, co.t0)
    g, f1, delta = connecting_map(tp, co.mono)
    # dec.left is F[1] on the nose; f1 has the same complex
    to_b = compose(dec.mono, HeartMorphism(g, dec.left, delta.rep))
    hs = heart_direct_sum([g, dec.right])
    mid = _stalk_sum(tp, hs)
    epi = compose(hs.morphism_from([to_b, sw.section], b), mid[1])
    mono_mod = direct_sum([co.t1, dec.right.cx.term(0)], b.pair.context)
    mono_h = from_module_map(e, mid[0], mono_mod.injections[0] @ co.epi)
    ses = HeartSES(e, mid[0], b, mono_h, epi)
    if not ses.verify():
        raise ArithmeticError("cover failed the cone test")
    return Cover(ses)


def _stalk_sum(tp: TorsionPair, hs: HeartSum) -> tuple[HeartObject, HeartMorphism]:
    """The sum of stalk summands as a plain stalk object, with the iso to hs.obj."""
    s = stalk_object(tp, hs.obj.cx.term(0))
    iso = from_chain_map(s, hs.obj, ChainMap(s.cx, hs.obj.cx, {0: RepMorphism.identity(s.cx.term(0))}, check=False))
    return s, iso


# --- realization of heart complexes ------------------------------------------------

@dataclass(frozen=True)
class SweepWitness:
    """One pullback step: the chain map new -> old of heart complexes, with its cone exactness."""
    degree: int
    new_terms: tuple
    new_diffs: tuple
    components: tuple
    cone_exact: bool


@dataclass(frozen=True)
class Realization:
    complex: ComplexA
    witnesses: tuple[SweepWitness, ...] = field(default=())

    def verified(self) -> bool:
        return all(w.cone_exact for w in self.witnesses)


def _is_torsion_stalk(b: HeartObject) -> bool:
    return b.is_stalk() and b.h_minus1.is_zero()


def heart_map_matrix(src: HeartSum, tgt: HeartSum, entries) -> HeartMorphism:
    """The map src -> tgt with entries[j][i] : summand i -> summand j."""
    cols = []
    for i, s in enumerate(src.summands):
        cols.append(tgt.morphism_into([entries[j][i] for j in range(len(tgt.summands))], s))
    return src.morphism_from(cols, tgt.obj)


def heart_cone_exact(old_terms, old_diffs, new_terms, new_diffs, comps, lo: int) -> bool:
    """Exactness over the heart of the cone of a chain map new -> old.

    Terms are indexed from degree `lo`; cone^n = new^{n+1} (+) old^n with
    differential [[-d_new, 0], [phi, d_old]].
    """
    m = len(old_terms)
    tp = old_terms[0].pair
    z = zero_object(tp)

    def get(ts, i):
        return ts[i] if 0 <= i < len(ts) else z

    def dget(ds, ts, i):
        return ds[i] if 0 <= i < len(ds) else zero_morphism(get(ts, i), get(ts, i + 1))

    def cget(i):
        return comps[i] if 0 <= i < len(comps) else zero_morphism(get(new_terms, i), get(old_terms, i))

    sums = [heart_direct_sum([get(new_terms, i + 1), get(old_terms, i)]) for i in range(-1, m)]
    diffs = []
    for k in range(len(sums) - 1):
        i = k - 1
        a, b = sums[k], sums[k + 1]
        e = [[-dget(new_diffs, new_terms, i + 1), zero_morphism(get(old_terms, i), get(new_terms, i + 2))],
             [cget(i + 1), dget(old_diffs, old_terms, i)]]
        diffs.append(heart_map_matrix(a, b, e))
    try:
        return is_exact_over_heart(tp, [s.obj for s in sums], diffs)
    except NotAComplex:
        return False


def _pullback_step(tp: TorsionPair, terms: list, diffs: list, n: int, verify: bool):
    """Cover terms[n] and pull the incoming differential back along the cover epi."""
    cov = cover_by_T(tp, terms[n])
    eps = cov.epi
    new_terms, new_diffs = list(terms), list(diffs)
    comps = [identity(b) for b in terms]
    new_terms[n] = cov.t0
    comps[n] = eps
    if n + 1 < len(terms):
        new_diffs[n] = compose(diffs[n], eps)
    if n == 0:
        # pulling back 0 -> B^0 along eps gives the cover kernel in a new degree
        new_terms.insert(0, cov.t_minus1)
        new_diffs.insert(0, cov.mono)
        comps.insert(0, zero_morphism(cov.t_minus1, zero_object(tp)))
        shift_by = 1
    else:
        hs = heart_direct_sum([terms[n - 1], cov.t0])
        pair = hs.morphism_from([diffs[n - 1], -eps], terms[n])
        k, kin = heart_kernel(pair)
        to_prev = compose(hs.projections[0], kin)
        to_t0 = compose(hs.projections[1], kin)
        new_terms[n - 1] = k
        new_diffs[n - 1] = to_t0
        comps[n - 1] = to_prev
        if n >= 2:
            into = hs.morphism_into([diffs[n - 2], zero_morphism(terms[n - 2], cov.t0)], terms[n - 2])
            d = lift_along(into, kin)
            if d is None:
                raise NotAComplex(f"differential into degree {n - 1} does not factor through the pullback")
            new_diffs[n - 2] = d
        shift_by = 0
    ok = True
    if verify:
        if shift_by:
            old_t = [zero_object(tp)] + list(terms)
            old_d = [zero_morphism(old_t[0], terms[0])] + list(diffs)
            ok = heart_cone_exact(old_t, old_d, new_terms, new_diffs, comps, 0)
        else:
            ok = heart_cone_exact(terms, diffs, new_terms, new_diffs, comps, 0)
    w = SweepWitness(n, tuple(new_terms), tuple(new_diffs), tuple(comps), ok)
    return new_terms, new_diffs, shift_by, w


def realize_heart_complex(tp: TorsionPair, terms: Sequence[HeartObject], diffs: Sequence[HeartMorphism],
                          lo: int = 0, verify: bool = True) -> Realization:
    """A complex of modules representing the heart complex terms[0] -> ... in degrees lo, lo+1, ...

    The output has torsion terms; viewed in the heart it is joined to the
    input by the recorded sweep quasi-isomorphisms.
    """
    _require_tilting(tp)
    terms, diffs = list(terms), list(diffs)
    if len(diffs) != max(len(terms) - 1, 0):
        raise ValueError("need one differential between each pair of consecutive terms")
    for i in range(len(diffs) - 1):
        if not compose(diffs[i + 1], diffs[i]).is_zero():
            raise NotAComplex(f"d_{i + 1} o d_{i} is nonzero")
    witnesses = []
    n = len(terms) - 1
    while n >= 0:
        if _is_torsion_stalk(terms[n]):
            n -= 1
            continue
        terms, diffs, s, w = _pullback_step(tp, terms, diffs, n, verify)
        witnesses.append(w)
        lo -= s
        if s:
            break  # the new bottom term is a torsion stalk
        n -= 1
    ctx = tp.context
    cx_terms = {lo + i: b.module for i, b in enumerate(terms)}
    cx_diffs = {lo + i: as_module_map(d) for i, d in enumerate(diffs)}
    return Realization(ComplexA(ctx, cx_terms, cx_diffs), tuple(witnesses))


# --- theta and naturality -------------------------------------------------------------

@dataclass(frozen=True)
class ThetaWitness:
    B: HeartObject
    cover: Cover
    realized: HeartObject  # [T^-1 -> T^0] in degrees -1, 0
    theta: HeartMorphism  # B -> realized
    uniqueness_dim: int
    invertible: bool


def _realized_object(tp: TorsionPair, cov: Cover) -> tuple[HeartObject, HeartMorphism]:
    d = cov.differential()
    cx = ComplexA(tp.context, {-1: d.source, 0: d.target}, {-1: d})
    obj = make_heart_object(tp, cx)
    gamma = from_chain_map(cov.t0, obj, ChainMap(cov.t0.cx, obj.cx, {0: RepMorphism.identity(d.target)}, check=False))
    return obj, gamma


def theta(tp: TorsionPair, b: HeartObject, cover: Cover | None = None) -> ThetaWitness:
    """The iso B -> [T^-1 -> T^0] that commutes with the two epis out of T^0."""
    _require_tilting(tp)
    cov = cover or cover_by_T(tp, b)
    obj, gamma = _realized_object(tp, cov)
    basis = heart_hom_basis(b, obj)
    cols = [compose(t, cov.epi) for t in basis]
    p = tp.context.prime
    c = solve_in_heart([_equation(cols, gamma)], len(basis), p)
    if c is None:
        raise ArithmeticError("no map B -> T compatible with the covers")
    th = linear_combination(basis, c, b, obj)
    hc, chain_cols, _ = _equation(cols + [-gamma], gamma)
    udim = solution_space_dim([(hc, chain_cols, None)], len(basis) + 1, p)
    return ThetaWitness(b, cov, obj, th, udim, is_iso(th))


def _as_stalk(tp: TorsionPair, b: HeartObject) -> tuple[HeartObject, HeartMorphism]:
    """For B with H^-1 = 0: the stalk H^0(B) and the iso B -> H^0(B)."""
    dec = torsion_decomposition(b)
    return dec.right, dec.epi


def _adapted_cover(tp: TorsionPair, cov: Cover, f: HeartMorphism, cov2: Cover) -> Cover:
    """A cover of B through which f o eps lifts along eps'.

    The new T^0 is the pullback of f o eps and eps'; it is a subobject of a
    torsion object in the heart, hence torsion, and it still covers B.
    """
    b = cov.ses.right
    hs = heart_direct_sum([cov.t0, cov2.t0])
    k, kin = heart_kernel(hs.morphism_from([compose(f, cov.epi), -cov2.epi], f.target))
    q, q_iso = _as_stalk(tp, k)
    eps = compose(cov.epi, compose(hs.projections[0], compose(kin, _inverse(q_iso))))
    kk, kkin = heart_kernel(eps)
    kq, kq_iso = _as_stalk(tp, kk)
    mono = compose(kkin, _inverse(kq_iso))
    return Cover(HeartSES(kq, q, b, mono, eps))


def _inverse(iso: HeartMorphism) -> HeartMorphism:
    """The inverse of a heart isomorphism, as a map target -> source."""
    basis = heart_hom_basis(iso.target, iso.source)
    c = solve_in_heart([_equation([compose(iso, b) for b in basis], identity(iso.target))],
                       len(basis), iso.source.pair.context.prime)
    if c is None:
        raise ArithmeticError("map is not invertible")
    return linear_combination(basis, c, iso.target, iso.source)


@dataclass(frozen=True)
class NaturalityWitness:
    holds: bool
    phi: ChainMap  # T_B -> T_B' as complexes of modules
    theta_source: ThetaWitness
    theta_target: ThetaWitness
    adapted: bool


def naturality_witness(tp: TorsionPair, f: HeartMorphism, force_adapted: bool = False) -> NaturalityWitness:
    _require_tilting(tp)
    b, b2 = f.source, f.target
    cov, cov2 = cover_by_T(tp, b), cover_by_T(tp, b2)
    p = tp.context.prime
    phi0 = None
    if not force_adapted:
        phi0 = _lift_phi0(cov, cov2, f, p)
    adapted = phi0 is None
    if adapted:
        cov = _adapted_cover(tp, cov, f, cov2)
        phi0 = _lift_phi0(cov, cov2, f, p)
        if phi0 is None:
            raise ArithmeticError("lift failed on the adapted cover")
    phim1 = lift_along(compose(phi0, cov.mono), cov2.mono)
    if phim1 is None:
        raise ArithmeticError("phi^0 does not restrict to the cover kernels")
    th1, th2 = theta(tp, b, cov), theta(tp, b2, cov2)
    a0, am1 = as_module_map(phi0), as_module_map(phim1)
    phi = ChainMap(th1.realized.cx, th2.realized.cx, {0: a0, -1: am1})
    lhs = compose(th2.theta, f)
    rhs = compose(from_chain_map(th1.realized, th2.realized, phi), th1.theta)
    return NaturalityWitness(lhs.equals(rhs), phi, th1, th2, adapted)


def _lift_phi0(cov: Cover, cov2: Cover, f: HeartMorphism, p: int) -> HeartMorphism | None:
    target = compose(f, cov.epi)
    basis = heart_hom_basis(cov.t0, cov2.t0)
    c = solve_in_heart([_equation([compose(cov2.epi, u) for u in basis], target)], len(basis), p)
    return None if c is None else linear_combination(basis, c, cov.t0, cov2.t0)


def check_theta_natural(tp: TorsionPair, f: HeartMorphism, force_adapted: bool = False) -> bool:
    """theta_B' o f == phi o theta_B up to homotopy, for the chain map phi lifting f."""
    return naturality_witness(tp, f, force_adapted).holds


def realized_matches(tp: TorsionPair, b: HeartObject) -> bool:
    """realize([B]) is isomorphic to B.cx in the derived category."""
    r = realize_heart_complex(tp, [b], [])
    return r.verified() and find_derived_iso(r.complex, b.cx) is not None

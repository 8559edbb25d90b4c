import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hrs_lab.complexes import ChainMap, ComplexA, cohomology_dims, derived_hom, find_derived_iso, is_quasi_iso
from hrs_lab.equivalence import (
    check_theta_natural,
    cover_by_T,
    naturality_witness,
    realize_heart_complex,
    realized_matches,
    t_resolve_complex,
    theta,
)
from hrs_lab.fixtures import fixture_a2, fixture_a3
from hrs_lab.heart import (
    NotAComplex,
    from_module_map,
    heart_cokernel,
    heart_hom_basis,
    identity,
    is_iso,
    make_heart_object,
    shifted_object,
    stalk_object,
    zero_morphism,
)
from hrs_lab.quiver import RepMorphism, cokernel, is_isomorphic
from hrs_lab.sampling import ext_component, morphism_with_ext, random_complex, random_heart_object, torsion_complex_sample
from hrs_lab.torsion import NotTilting, TorsionPair, is_torsion

A2, A3 = fixture_a2(), fixture_a3()
PAIRS = st.sampled_from([A2, A3])
SEEDS = st.integers(0, 2**32 - 1)


def iso(m, n) -> bool:
    return is_isomorphic(m, n) is not None


def mixed(tp):
    ctx = tp.context
    return make_heart_object(tp, ComplexA.two_term(RepMorphism.zero(ctx.simple(1), ctx.simple(0)), -1))


# --- resolutions ------------------------------------------------------------------

def test_resolution_fixed_point(a2):
    x = ComplexA.stalk(a2.context.projective(0), 0)
    r = t_resolve_complex(a2, x)
    assert r.resolved == x and r.qis == ChainMap.identity(x)


def test_resolution_of_s2(a2):
    ctx = a2.context
    r = t_resolve_complex(a2, ComplexA.stalk(ctx.simple(1)))
    assert r.resolved.degrees == [0, 1]
    assert iso(r.resolved.term(0), ctx.projective(0)) and iso(r.resolved.term(1), ctx.simple(0))
    assert is_quasi_iso(r.qis) and r.support_ok()


def test_resolution_of_two_s2(a2):
    s2 = a2.context.simple(1)
    x = ComplexA(a2.context, {0: s2, 1: s2}, {0: RepMorphism.zero(s2, s2)})
    r = t_resolve_complex(a2, x)
    assert is_quasi_iso(r.qis) and r.support_ok()
    assert cohomology_dims(r.resolved) == {0: (0, 1), 1: (0, 1)}
    assert all(is_torsion(a2, t) for t in r.resolved.terms.values())


def test_non_tilting_rejected(a2):
    ctx = a2.context
    bad = TorsionPair(ctx, ctx.zero_module(), "zero")
    with pytest.raises(NotTilting):
        t_resolve_complex(bad, ComplexA.stalk(ctx.simple(1)))
    with pytest.raises(NotTilting):
        cover_by_T(bad, stalk_object(a2, ctx.simple(0)))


@settings(max_examples=25, deadline=None)
@given(PAIRS, SEEDS)
def test_resolution_contract(tp, seed):
    rng = np.random.default_rng(seed)
    x = random_complex(tp.context, rng)
    r = t_resolve_complex(tp, x)
    assert is_quasi_iso(r.qis) and r.support_ok()
    assert all(is_torsion(tp, t) for t in r.resolved.terms.values())
    y = random_complex(tp.context, rng, max_len=2)
    for n in (-1, 0, 1, 2):
        assert derived_hom(x, y, n).dim == derived_hom(r.resolved, y, n).dim


# --- covers ------------------------------------------------------------------------------

def test_cover_examples(a2):
    ctx = a2.context
    t = stalk_object(a2, ctx.projective(0))
    c = cover_by_T(a2, t)
    assert c.t_minus1.is_zero() and iso(c.t0.module, ctx.projective(0))
    c = cover_by_T(a2, shifted_object(a2, ctx.simple(1)))
    assert iso(c.t_minus1.module, ctx.projective(0)) and iso(c.t0.module, ctx.simple(0))
    c = cover_by_T(a2, mixed(a2))
    assert c.t0.module.dims == (2, 0) and iso(c.t_minus1.module, ctx.projective(0))
    assert c.ses.verify()


@settings(max_examples=20, deadline=None)
@given(PAIRS, SEEDS)
def test_cover_contract(tp, seed):
    b = random_heart_object(tp, np.random.default_rng(seed))
    c = cover_by_T(tp, b)
    assert is_torsion(tp, c.t_minus1.module) and is_torsion(tp, c.t0.module)
    assert c.ses.verify()


# --- realization ---------------------------------------------------------------------------

def test_realize_examples(a2):
    ctx = a2.context
    t = stalk_object(a2, ctx.simple(0))
    assert realize_heart_complex(a2, [t], []).complex == t.cx
    s21 = shifted_object(a2, ctx.simple(1))
    r = realize_heart_complex(a2, [s21], [])
    assert r.complex.degrees == [-1, 0] and r.verified()
    assert cohomology_dims(r.complex) == {-1: (0, 1)}
    assert find_derived_iso(r.complex, s21.cx) is not None


def test_realize_short_exact_sequence(a2):
    ctx = a2.context
    p1, s1 = stalk_object(a2, ctx.projective(0)), stalk_object(a2, ctx.simple(0))
    f = from_module_map(p1, s1, cokernel(RepMorphism(ctx.projective(1), ctx.projective(0),
                                                     [ctx.zero(1, 0), ctx.eye(1)]))[1])
    c, pi = heart_cokernel(f)
    r = realize_heart_complex(a2, [p1, s1, c], [f, pi])
    assert r.verified() and r.complex.is_acyclic()
    with pytest.raises(NotAComplex):
        realize_heart_complex(a2, [p1, s1, s1], [f, identity(s1)])


@settings(max_examples=15, deadline=None)
@given(PAIRS, SEEDS)
def test_realize_single_object(tp, seed):
    b = random_heart_object(tp, np.random.default_rng(seed))
    assert realized_matches(tp, b)


# --- theta and naturality ---------------------------------------------------------------------

def test_theta_examples(a2):
    ctx = a2.context
    for b in (stalk_object(a2, ctx.simple(0)), shifted_object(a2, ctx.simple(1)), mixed(a2)):
        w = theta(a2, b)
        assert w.invertible and is_iso(w.theta) and w.uniqueness_dim == 1
        assert set(w.realized.cx.degrees) <= {-1, 0}


def test_naturality_examples(a2):
    ctx = a2.context
    s1, s21 = stalk_object(a2, ctx.simple(0)), shifted_object(a2, ctx.simple(1))
    assert check_theta_natural(a2, identity(s21))
    assert check_theta_natural(a2, zero_morphism(s1, s21))
    (ext,) = heart_hom_basis(s1, s21)
    assert check_theta_natural(a2, ext)
    assert check_theta_natural(a2, ext, force_adapted=True)


@settings(max_examples=15, deadline=None)
@given(PAIRS, SEEDS)
def test_theta_invertible(tp, seed):
    w = theta(tp, random_heart_object(tp, np.random.default_rng(seed)))
    assert w.invertible


@settings(max_examples=12, deadline=None)
@given(PAIRS, SEEDS, st.booleans())
def test_naturality_with_ext_component(tp, seed, force):
    rng = np.random.default_rng(seed)
    f = None
    for _ in range(50):
        f = morphism_with_ext(random_heart_object(tp, rng), random_heart_object(tp, rng), rng)
        if f is not None:
            break
    assert f is not None
    assert not ext_component(f).is_zero()
    w = naturality_witness(tp, f, force_adapted=force)
    assert w.holds
    assert w.adapted or not force


@settings(max_examples=15, deadline=None)
@given(PAIRS, SEEDS)
def test_torsion_complexes_are_fixed_and_hom_is_preserved(tp, seed):
    rng = np.random.default_rng(seed)
    _, terms, diffs = torsion_complex_sample(tp, rng, max_len=3, max_dim=2)
    t = ComplexA(tp.context, dict(enumerate(terms)), dict(enumerate(diffs)))
    r = t_resolve_complex(tp, t)
    assert r.resolved == t
    x = random_complex(tp.context, rng, max_len=2)
    rx = t_resolve_complex(tp, x).resolved
    for n in (-1, 0, 1):
        assert derived_hom(t, x, n).dim == derived_hom(t, rx, n).dim

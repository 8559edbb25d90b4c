import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hrs_lab.complexes import (
    ChainMap,
    ComplexA,
    cohomology_dims,
    cone,
    derived_hom,
    find_derived_iso,
    hom_complex,
    homotopic,
    is_quasi_iso,
    lift_through,
    proj_replacement,
    shift,
    truncate_ge,
    truncate_le,
)
from hrs_lab.quiver import AlgebraContext, Arrow, Quiver, RepMorphism, cokernel, hom_dim, is_projective, kernel
from hrs_lab.sampling import random_complex, random_hom, random_module

A2 = AlgebraContext(Quiver.linear(2), 5)
A3 = AlgebraContext(Quiver.linear(3), 5)
KRON = AlgebraContext(Quiver(2, (Arrow(0, 1, "a"), Arrow(0, 1, "b"))), 3)
CONTEXTS = st.sampled_from([A2, A3, KRON])
SEEDS = st.integers(0, 2**32 - 1)


def euler(ctx, m, n) -> int:
    return (sum(a * b for a, b in zip(m.dims, n.dims))
            - sum(m.dims[a.source] * n.dims[a.target] for a in ctx.quiver.arrows))


def test_d_squared_checked():
    s = A2.projective(0)
    d = RepMorphism.identity(s)
    with pytest.raises(ValueError):
        ComplexA(A2, {0: s, 1: s, 2: s}, {0: d, 1: d})


def test_shift_convention():
    p1, s1 = A2.projective(0), A2.simple(0)
    f = random_hom(p1, s1, np.random.default_rng(1))
    x = ComplexA.two_term(f, 0)
    y = shift(x, 1)
    assert y.degrees == [-1, 0]
    assert y.d(-1) == -f
    assert shift(shift(x, 1), -1) == x


def test_stalk_of_simple_resolution():
    s1 = A2.simple(0)
    rep = proj_replacement(ComplexA.stalk(s1, 0))
    assert rep.complex.degrees == [-1, 0]
    assert all(is_projective(t) for t in rep.complex.terms.values())
    assert is_quasi_iso(rep.qis)


@settings(max_examples=30, deadline=None)
@given(CONTEXTS, SEEDS)
def test_proj_replacement_is_projective_qis(ctx, seed):
    x = random_complex(ctx, np.random.default_rng(seed))
    rep = proj_replacement(x)
    assert all(is_projective(t) for t in rep.complex.terms.values())
    assert is_quasi_iso(rep.qis)
    if not x.is_zero():
        assert rep.complex.lo >= x.lo - 1 and rep.complex.hi <= x.hi


@settings(max_examples=30, deadline=None)
@given(CONTEXTS, SEEDS)
def test_derived_hom_of_modules_matches_euler_form(ctx, seed):
    rng = np.random.default_rng(seed)
    m, n = random_module(ctx, rng, 3), random_module(ctx, rng, 3)
    x, y = ComplexA.stalk(m), ComplexA.stalk(n)
    h0, h1 = derived_hom(x, y, 0).dim, derived_hom(x, y, 1).dim
    assert h0 == hom_dim(m, n)
    assert h0 - h1 == euler(ctx, m, n)
    assert derived_hom(x, y, 2).dim == 0 and derived_hom(x, y, -1).dim == 0


@settings(max_examples=30, deadline=None)
@given(CONTEXTS, SEEDS)
def test_cone_long_exact_sequence(ctx, seed):
    rng = np.random.default_rng(seed)
    m, n = random_module(ctx, rng, 3), random_module(ctx, rng, 3)
    f = random_hom(m, n, rng)
    c = cone(ChainMap(ComplexA.stalk(m), ComplexA.stalk(n), {0: f}))
    h = cohomology_dims(c.obj)
    # H^-1(cone) = ker f and H^0(cone) = coker f
    assert h.get(-1, (0,) * ctx.n) == kernel(f)[0].dims
    assert h.get(0, (0,) * ctx.n) == cokernel(f)[0].dims
    assert c.obj.is_acyclic() == f.is_iso()


@settings(max_examples=25, deadline=None)
@given(CONTEXTS, SEEDS)
def test_homotopy_and_lifting(ctx, seed):
    rng = np.random.default_rng(seed)
    x = random_complex(ctx, rng)
    rep = proj_replacement(x)
    hc = hom_complex(rep.complex, x)
    for g in hc.cycle_basis()[:3]:
        assert homotopic(g, g) is not None
        lifted = lift_through(g, rep.qis)
        assert lifted is not None
        assert homotopic(rep.qis @ lifted, g) is not None


@settings(max_examples=25, deadline=None)
@given(CONTEXTS, SEEDS, st.integers(-1, 2))
def test_truncations(ctx, seed, n):
    x = random_complex(ctx, np.random.default_rng(seed))
    le, inc = truncate_le(x, n)
    ge, prj = truncate_ge(x, n)
    hx, hle, hge = cohomology_dims(x), cohomology_dims(le), cohomology_dims(ge)
    assert is_quasi_iso(ChainMap.identity(le)) and inc.target == x and prj.source == x
    assert hle == {k: v for k, v in hx.items() if k <= n}
    assert hge == {k: v for k, v in hx.items() if k >= n}


@settings(max_examples=20, deadline=None)
@given(CONTEXTS, SEEDS)
def test_derived_iso_to_own_replacement(ctx, seed):
    x = random_complex(ctx, np.random.default_rng(seed))
    rep = proj_replacement(x)
    assert find_derived_iso(rep.complex, x) is not None

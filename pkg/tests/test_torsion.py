import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hrs_lab.fixtures import fixture_a2, fixture_a3
from hrs_lab.quiver import AlgebraContext, Quiver, direct_sum, hom_dim
from hrs_lab.sampling import random_module, random_torsion, random_torsion_free
from hrs_lab.torsion import (
    Kind,
    NotTilting,
    TorsionPair,
    classify,
    is_tilting,
    is_torsion,
    is_torsion_free,
    t_coresolution,
    torsion_quotient,
    torsion_radical,
    trace,
)


PAIRS = st.sampled_from([fixture_a2(), fixture_a3()])
SEEDS = st.integers(0, 2**32 - 1)


def test_a2_classification():
    tp = fixture_a2()
    ctx = tp.context
    kinds = {n: classify(tp, m).kind for n, m in
             {"S1": ctx.simple(0), "S2": ctx.simple(1), "P1": ctx.projective(0)}.items()}
    assert kinds == {"S1": Kind.TORSION, "S2": Kind.TORSION_FREE, "P1": Kind.TORSION}
    mixed = direct_sum([ctx.simple(0), ctx.simple(1)], ctx).obj
    c = classify(tp, mixed)
    assert c.kind is Kind.MIXED and c.radical.dims == (1, 0)


def test_trace_of_generator():
    tp = fixture_a2()
    t, incl = trace(tp.generator, tp.generator)
    assert t.dim == tp.generator.dim and incl.is_iso()


def test_tilting_reports():
    assert is_tilting(fixture_a2()).tilting
    assert is_tilting(fixture_a3()).tilting
    ctx = fixture_a2().context
    assert not is_tilting(TorsionPair(ctx, ctx.zero_module(), "zero"))
    # add(S1) alone misses the injective P1 = I2
    rep = is_tilting(TorsionPair(ctx, ctx.simple(0), "S1"))
    assert not rep and rep.per_vertex[1] is not Kind.TORSION


def test_coresolution_requires_tilting():
    ctx = AlgebraContext(Quiver.linear(2), 5)
    with pytest.raises(NotTilting):
        t_coresolution(TorsionPair(ctx, ctx.zero_module(), "zero"), ctx.simple(1))


@settings(max_examples=40, deadline=None)
@given(PAIRS, SEEDS)
def test_radical_decomposition(tp, seed):
    x = random_module(tp.context, np.random.default_rng(seed), 5)
    incl, pr = torsion_radical(tp, x), torsion_quotient(tp, x)
    assert incl.is_mono() and pr.is_epi() and (pr @ incl).is_zero()
    assert incl.source.dim + pr.target.dim == x.dim
    assert is_torsion(tp, incl.source) and is_torsion_free(tp, pr.target)
    # idempotent: t(t(X)) = t(X)
    assert torsion_radical(tp, incl.source).is_iso()


@settings(max_examples=40, deadline=None)
@given(PAIRS, SEEDS)
def test_no_maps_torsion_to_torsion_free(tp, seed):
    rng = np.random.default_rng(seed)
    t, f = random_torsion(tp, rng, 4), random_torsion_free(tp, rng, 4)
    assert is_torsion(tp, t) and is_torsion_free(tp, f)
    assert hom_dim(t, f) == 0


@settings(max_examples=40, deadline=None)
@given(PAIRS, SEEDS)
def test_coresolution(tp, seed):
    x = random_module(tp.context, np.random.default_rng(seed), 4)
    co = t_coresolution(tp, x)
    assert co.mono.is_mono() and co.epi.is_epi() and (co.epi @ co.mono).is_zero()
    assert x.dim + co.t1.dim == co.t0.dim
    assert is_torsion(tp, co.t0) and is_torsion(tp, co.t1)

"""Torsion pairs presented by a generator module.

The torsion class is the smallest class containing G that is closed under
quotients and extensions; the torsion-free class is everything receiving
no nonzero map from G.  The radical t(X) is the iterated trace of G.

The tilting test only looks at the indecomposable injectives.  If every
I(v) is torsion then X >-> inj_hull(X) embeds X into a torsion object.
Conversely an injective embedded in a torsion object splits off as a
direct summand, and torsion classes are closed under summands.  This is
specific to module categories with enough injectives.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

from .quiver import (
    AlgebraContext,
    ContextMismatch,
    Representation,
    RepMorphism,
    cokernel,
    hom_basis,
    hom_space,
    inj_hull,
    preimage,
    quotient_representation,
    subrepresentation,
)
from .linalg import FpMatrix, column_basis_array, hstack


class NotTilting(ValueError):
    """The torsion pair is not tilting, so 𝒯-coresolutions do not exist."""


@dataclass(frozen=True)
class TorsionPair:
    context: AlgebraContext
    generator: Representation
    label: str = ""

    def __post_init__(self):
        if self.generator.ctx != self.context:
            raise ContextMismatch("generator lives over another context")

    def __str__(self) -> str:
        return self.label or f"TorsionPair(G dims {self.generator.dims})"


class Kind(enum.Enum):
    TORSION = "torsion"
    TORSION_FREE = "torsion-free"
    MIXED = "mixed"


@dataclass(frozen=True)
class TorsionClassification:
    kind: Kind
    radical: Representation
    inclusion: RepMorphism


def trace(g: Representation, x: Representation) -> tuple[Representation, RepMorphism]:
    """Sum of the images of all maps G -> X."""
    p = x.ctx.prime
    maps = hom_basis(g, x)
    bases = []
    for v in range(x.ctx.n):
        cols = hstack([f.comps[v] for f in maps], rows=x.dims[v], p=p)
        bases.append(FpMatrix._wrap(column_basis_array(cols.a, p), p))
    return subrepresentation(x, bases)


@lru_cache(maxsize=4096)
def torsion_radical(tp: TorsionPair, x: Representation) -> RepMorphism:
    """The inclusion t(X) >-> X.

    t_0 = 0 and t_{k+1} is the preimage of the trace of G in X / t_k; the
    dimension grows each round until it stabilises, so at most dim X rounds.
    """
    if x.ctx != tp.context:
        raise ContextMismatch("module lives over another context")
    ctx = x.ctx
    sub, incl = subrepresentation(x, [ctx.zero(d, 0) for d in x.dims])
    while True:
        q, qpr = quotient_representation(x, list(incl.comps))
        _, tin = trace(tp.generator, q)
        if tin.source.is_zero():
            return incl
        sub, incl = preimage(qpr, tin)


def torsion_quotient(tp: TorsionPair, x: Representation) -> RepMorphism:
    """The projection X ->> X / t(X)."""
    return quotient_representation(x, list(torsion_radical(tp, x).comps))[1]


def classify(tp: TorsionPair, x: Representation) -> TorsionClassification:
    incl = torsion_radical(tp, x)
    t = incl.source
    if t.dim == x.dim:
        kind = Kind.TORSION
    elif t.is_zero():
        kind = Kind.TORSION_FREE
    else:
        kind = Kind.MIXED
    return TorsionClassification(kind, t, incl)


def is_torsion(tp: TorsionPair, x: Representation) -> bool:
    return torsion_radical(tp, x).source.dim == x.dim


def is_torsion_free(tp: TorsionPair, x: Representation) -> bool:
    return hom_space(tp.generator, x).dim == 0


@dataclass(frozen=True)
class TiltingReport:
    tilting: bool
    per_vertex: dict  # vertex -> Kind of I(v)

    def __bool__(self) -> bool:
        return self.tilting


@lru_cache(maxsize=256)
def is_tilting(tp: TorsionPair) -> TiltingReport:
    ctx = tp.context
    kinds = {v: classify(tp, ctx.injective(v)).kind for v in range(ctx.n)}
    return TiltingReport(all(k is Kind.TORSION for k in kinds.values()), kinds)


@dataclass(frozen=True)
class Coresolution:
    """0 -> X --mono--> T0 --epi--> T1 -> 0 with T0, T1 torsion."""
    mono: RepMorphism
    epi: RepMorphism

    @property
    def t0(self) -> Representation:
        return self.mono.target

    @property
    def t1(self) -> Representation:
        return self.epi.target


def t_coresolution(tp: TorsionPair, x: Representation) -> Coresolution:
    if not is_tilting(tp):
        raise NotTilting(f"{tp} is not tilting: some injective is not torsion")
    u = inj_hull(x)
    _, q = cokernel(u)
    return Coresolution(u, q)

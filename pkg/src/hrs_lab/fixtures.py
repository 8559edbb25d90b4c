"""The two standard test beds: A2 with generator P1 + S1, and linear A3 with
generator the sum of all indecomposable injectives."""
from __future__ import annotations

from .quiver import AlgebraContext, Quiver, direct_sum
from .torsion import TorsionPair


def fixture_a2(prime: int = 5) -> TorsionPair:
    ctx = AlgebraContext(Quiver.linear(2), prime)
    g = direct_sum([ctx.projective(0), ctx.simple(0)], ctx).obj
    return TorsionPair(ctx, g, "A2, G = P1+S1")


def fixture_a3(prime: int = 5) -> TorsionPair:
    ctx = AlgebraContext(Quiver.linear(3), prime)
    g = direct_sum([ctx.injective(v) for v in range(3)], ctx).obj
    return TorsionPair(ctx, g, "A3, G = I1+I2+I3")


FIXTURES = {"A2": fixture_a2, "A3": fixture_a3}

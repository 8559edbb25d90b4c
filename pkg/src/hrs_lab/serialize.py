"""Plain-dict views of modules, complexes and maps for reports.

Matrices larger than 12 x 12 are summarised by shape and rank unless the
full witness is requested.
"""
from __future__ import annotations

from .complexes import ChainMap, ComplexA
from .linalg import FpMatrix, rank

ELIDE_ABOVE = 12


def matrix_to_json(m: FpMatrix, full: bool = False):
    if not full and (m.rows > ELIDE_ABOVE or m.cols > ELIDE_ABOVE):
        return {"elided": True, "shape": list(m.shape), "rank": rank(m)}
    return m.tolist()


def module_to_dict(m, full: bool = False) -> dict:
    arrows = m.ctx.quiver.arrows
    return {"dims": list(m.dims),
            "arrows": {a.name: matrix_to_json(m.mats[k], full) for k, a in enumerate(arrows)}}


def rep_morphism_to_list(f, full: bool = False) -> list:
    return [matrix_to_json(c, full) for c in f.comps]


def complex_to_dict(x: ComplexA, full: bool = False) -> dict:
    return {"terms": {str(n): module_to_dict(t, full) for n, t in x.terms.items()},
            "differentials": {str(n): rep_morphism_to_list(d, full) for n, d in x.diffs.items()}}


def chain_map_to_dict(f: ChainMap, full: bool = False) -> dict:
    return {"source": complex_to_dict(f.source, full), "target": complex_to_dict(f.target, full),
            "components": {str(n): rep_morphism_to_list(g, full) for n, g in f.comps.items()}}


def morphism_to_dict(f, full: bool = False) -> dict:
    """A heart morphism: the two objects and the representing chain map P(source) -> target."""
    return {"source": complex_to_dict(f.source.cx, full), "target": complex_to_dict(f.target.cx, full),
            "representative": chain_map_to_dict(f.rep, full)}

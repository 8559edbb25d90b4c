from pathlib import Path

import pytest

from hrs_lab.linalg import FpMatrix
from hrs_lab.serialize import ELIDE_ABOVE, matrix_to_json
from hrs_lab.workspace import WorkspaceError, load_workspace, parse_workspace

WS = Path(__file__).resolve().parents[1] / "workspaces"

BASE = """
prime = 5
[quiver]
vertices = 2
arrows = [[1, 2, "a"]]
[torsion]
generator = "P1+S1"
"""


def test_load_a2():
    ws = load_workspace(WS / "a2.toml")
    assert ws.context.n == 2 and ws.context.prime == 5
    assert ws.modules["M"] == ws.module("P1")
    assert ws.module("X").dims == (1, 2)
    assert ws.heart_objects == ["S2[1]", "P1", "S1"]
    assert set(ws.complexes) == {"stalkS2", "twoS2", "torsion", "empty"}
    assert ws.complexes["empty"].is_zero()
    b = ws.heart_object("S2[1]")
    assert b.h_minus1.dims == (0, 1)


def test_expressions():
    ws = parse_workspace(BASE)
    assert ws.module("2*S1 + P2").dims == (2, 1)
    assert ws.module("0").is_zero()
    for bad in ("S3", "Q1", "2*", "", "P1 ++ S1"):
        with pytest.raises(WorkspaceError):
            ws.module(bad)


def test_prime_override():
    ws = parse_workspace(BASE, prime_override=7)
    assert ws.context.prime == 7
    with pytest.raises(WorkspaceError):
        parse_workspace(BASE, prime_override=6)


def test_modules_refer_to_each_other():
    ws = parse_workspace(BASE + '[modules.A]\nexpr = "B+S1"\n[modules.B]\nexpr = "P2"\n')
    assert ws.modules["A"].dims == (1, 1)


@pytest.mark.parametrize("extra, key", [
    ('[modules.A]\nexpr = "B"\n[modules.B]\nexpr = "A"\n', "modules."),
    ('[modules.A]\ndims = [1, 1]\narrows = { b = [[1]] }\n', "modules.A.arrows"),
    ('[modules.A]\ndims = [1, 1]\narrows = { a = [[1, 2]] }\n', "modules.A.arrows.a"),
    ('[modules.A]\ndims = [1]\n', "modules.A.dims"),
    ('[modules.S1]\nexpr = "P1"\n', "modules.S1"),
    ('[complexes.C]\nterms = { "0" = "P1", "1" = "S1" }\ndifferentials = { "0" = [[[1]]] }\n', "complexes.C"),
    ('[complexes.C]\nterms = { "x" = "P1" }\n', "complexes.C.terms"),
    ('[heart]\nobjects = "S1"\n', "heart.objects"),
])
def test_errors_name_the_key(extra, key):
    with pytest.raises(WorkspaceError) as exc:
        parse_workspace(BASE + extra)
    assert exc.value.path.startswith(key)


def test_error_line_numbers():
    text = BASE + '[modules.A]\ndims = [1, 1]\narrows = { a = [[1, 2]] }\n'
    with pytest.raises(WorkspaceError) as exc:
        parse_workspace(text)
    assert exc.value.line == text.splitlines().index("arrows = { a = [[1, 2]] }") + 1


def test_quiver_errors():
    with pytest.raises(WorkspaceError):
        parse_workspace("[quiver]\nvertices = 2\narrows = [[1, 2], [2, 1]]\n[torsion]\ngenerator = \"0\"\n")
    with pytest.raises(WorkspaceError):
        parse_workspace("[quiver]\nvertices = 2\narrows = [[1, 3]]\n[torsion]\ngenerator = \"0\"\n")
    with pytest.raises(WorkspaceError):
        parse_workspace("prime = 4\n[quiver]\nvertices = 1\n[torsion]\ngenerator = \"0\"\n")
    with pytest.raises(WorkspaceError):
        parse_workspace("not toml = = 1")


def test_matrix_elision():
    small = FpMatrix.identity(2, 5)
    assert matrix_to_json(small) == [[1, 0], [0, 1]]
    big = FpMatrix.identity(ELIDE_ABOVE + 1, 5)
    e = matrix_to_json(big)
    assert e["elided"] and e["shape"] == [ELIDE_ABOVE + 1] * 2 and e["rank"] == ELIDE_ABOVE + 1
    assert matrix_to_json(big, full=True) == big.tolist()

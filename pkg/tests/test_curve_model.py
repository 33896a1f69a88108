import json

import pytest

from modulikit import catalog as cat
from modulikit.curve_model import (
    Component,
    CurveGraph,
    MarkedPoint,
    Singularity,
    arithmetic_genus,
    connected_parts,
    delta_invariant,
    glue,
    load_curve,
    normalize_at,
    self_glue,
    shape,
    stabilize_pointed,
    validate,
)
from modulikit.errors import InvalidGraph, SelfGlueSamePoint, Undefined


def graph_betti_genus(c: CurveGraph) -> int:
    """Genus via the first Betti number of the dual graph, odd A_k counted as
    (k+1)/2 parallel edges, plus geometric genera and inner even-k deltas."""
    parent = {x.id: x.id for x in c.components}

    def find(a):
        while parent[a] != a:
            a = parent[a]
        return a

    edges = 0
    for s in c.singularities:
        if s.k % 2:
            edges += (s.k + 1) // 2
            a, b = find(s.branches[0][0]), find(s.branches[1][0])
            parent[a] = b
    verts = len(c.components)
    parts = len({find(x) for x in parent})
    betti = edges - verts + parts
    inner_even = sum(s.k // 2 for s in c.singularities if s.k % 2 == 0)
    return sum(x.genus for x in c.components) + betti + inner_even


def test_delta_invariants():
    assert [delta_invariant(k) for k in (1, 2, 3, 4, 5, 6)] == [1, 1, 2, 2, 3, 3]


def test_genus_smooth():
    c = CurveGraph([Component("X", 2)], [], [MarkedPoint("p", "X", "a")])
    assert arithmetic_genus(c) == 2


def test_genus_cuspidal_atom():
    assert arithmetic_genus(cat.atom_911()) == 1


def test_genus_closed_rosary_against_betti_oracle():
    c = cat.rosary(4, closed=True)
    assert graph_betti_genus(c) == 5
    assert arithmetic_genus(c) == 5


@pytest.mark.parametrize("name", sorted(cat.catalog()))
def test_catalog_genus_matches_oracle(name):
    c = cat.catalog()[name]()
    assert validate(c) == []
    assert arithmetic_genus(c) == graph_betti_genus(c)


def test_validate_ok_atom():
    assert validate(cat.atom_23()) == []


def test_validate_tacnode_one_branch():
    c = CurveGraph([Component("X", 1)], [Singularity("t", 3, (("X", "a"),))], [])
    assert "t: odd-k singularity needs 2 branches" in validate(c)


def test_validate_marking_on_branch():
    c = CurveGraph([Component("X", 1)], [Singularity("c", 2, (("X", "a"),))], [MarkedPoint("p", "X", "a")])
    assert "p: marking not smooth" in validate(c)


def test_validate_disconnected():
    c = CurveGraph([Component("X", 1), Component("Y", 1)], [], [])
    assert any("disconnected" in v for v in validate(c))


def test_normalize_disconnecting_node():
    c = CurveGraph([Component("A", 1), Component("B", 2)], [Singularity("q", 1, (("A", "x"), ("B", "y")))], [])
    n = normalize_at(c, "q")
    assert n.disconnected
    parts = sorted(arithmetic_genus(p) for p in connected_parts(n))
    assert parts == [1, 2]
    assert all(p.n == 1 for p in connected_parts(n))


def test_normalize_nonseparating_node():
    c = CurveGraph([Component("A", 2)], [Singularity("q", 1, (("A", "x"), ("A", "y")))], [])
    n = normalize_at(c, "q")
    assert not n.disconnected
    assert arithmetic_genus(n) == 2 and n.n == 2
    assert arithmetic_genus(c) == 3


def test_normalize_ramphoid_atom():
    n = normalize_at(cat.atom_23(), "xi")
    assert arithmetic_genus(n) == 0
    assert n.n == 2


def test_stabilize_contracts_semistable_tail():
    # K carries a rational component R with one node and one marking
    c = CurveGraph(
        [Component("K", 2), Component("R", 0)],
        [Singularity("q", 1, (("K", "a"), ("R", "b")))],
        [MarkedPoint("p", "R", "m")],
    )
    s = stabilize_pointed(c)
    assert [x.id for x in s.components] == ["K"]
    assert s.n == 1 and s.marked_points[0].component == "K"


def test_stabilize_fixed_point():
    c = cat.alpha_curve_b()
    assert shape(stabilize_pointed(c)) == shape(c)


def test_stabilize_drops_two_pointed_line_after_tacnode_normalization():
    c = CurveGraph(
        [Component("K", 2), Component("R", 0)],
        [Singularity("t", 3, (("K", "a"), ("R", "b"))), Singularity("q", 1, (("K", "c"), ("R", "d")))],
        [],
    )
    n = normalize_at(normalize_at(c, "t"), "q")
    s = stabilize_pointed(n)
    assert [x.id for x in s.components] == ["K"]


def test_stabilize_collapse_raises():
    with pytest.raises(Undefined):
        stabilize_pointed(CurveGraph([Component("R", 0)], [], [MarkedPoint("p", "R", "a")]))


def test_glue_two_elliptic_tails():
    e1 = CurveGraph([Component("E1", 1)], [], [MarkedPoint("p", "E1", "a")])
    e2 = CurveGraph([Component("E2", 1)], [], [MarkedPoint("q", "E2", "a")])
    g = glue(e1, "p", e2, "q", node_id="n")
    assert arithmetic_genus(g) == 2
    assert g.singularity("n").k == 1


def test_self_glue_bridge():
    e = CurveGraph([Component("E", 1)], [], [MarkedPoint("p", "E", "a"), MarkedPoint("q", "E", "b")])
    assert arithmetic_genus(self_glue(e, "p", "q")) == 2
    with pytest.raises(SelfGlueSamePoint):
        self_glue(e, "p", "p")


def test_glue_round_trip():
    e1 = CurveGraph([Component("E1", 1)], [], [MarkedPoint("p", "E1", "a")])
    e2 = CurveGraph([Component("E2", 2)], [], [MarkedPoint("q", "E2", "a"), MarkedPoint("r", "E2", "b")])
    g = glue(e1, "p", e2, "q", node_id="n")
    back = normalize_at(g, "n")
    union = CurveGraph(e1.components + e2.components, (), e1.marked_points + e2.marked_points, disconnected=True)
    assert shape(back) == shape(union)


def test_glue_shared_ids_rejected():
    e = CurveGraph([Component("E", 1)], [], [MarkedPoint("p", "E", "a")])
    with pytest.raises(InvalidGraph):
        glue(e, "p", e, "p")


def test_json_round_trip(tmp_path):
    c = cat.closed_23("C", links=(2,))
    path = tmp_path / "c.json"
    path.write_text(json.dumps(c.to_json()))
    assert shape(load_curve(str(path))) == shape(c)


def test_from_json_malformed():
    with pytest.raises(InvalidGraph):
        CurveGraph.from_json({"components": [{"genus": 1}]})

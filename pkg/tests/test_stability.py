from fractions import Fraction

import pytest

from modulikit import catalog as cat
from modulikit.curve_model import Component, CurveGraph, MarkedPoint, Singularity
from modulikit.errors import OutOfRange
from modulikit.stability import (
    ALL_REGIMES,
    AlphaRegime as R,
    find_elliptic_chains,
    find_elliptic_tails,
    find_weierstrass_chains,
    is_alpha_stable,
    omega_ample,
    regime_of,
    stable_regimes,
)


@pytest.mark.parametrize("alpha,regime", [
    ("1", R.OPEN_911_1), ("9/11", R.AT_911), ("4/5", R.OPEN_710_911), ("7/10", R.AT_710),
    ("69/100", R.OPEN_23_710), ("2/3", R.AT_23), ("2/3-eps", R.OPEN_23MINUS_23),
])
def test_regime_of(alpha, regime):
    assert regime_of(alpha) is regime


def test_regime_of_constant_on_intervals():
    assert regime_of(Fraction(19, 20)) is regime_of(Fraction(5, 6))
    assert regime_of(Fraction(3, 4)) is regime_of(Fraction(4, 5))


@pytest.mark.parametrize("alpha", ["3/5", "11/10", "0"])
def test_regime_of_out_of_range(alpha):
    with pytest.raises(OutOfRange):
        regime_of(alpha)


def test_regime_order():
    assert R.OPEN_911_1 > R.AT_911 > R.AT_23 > R.OPEN_23MINUS_23


def test_ample_bridge_false():
    c = CurveGraph(
        [Component("K", 2), Component("R", 0)],
        [Singularity("a", 1, (("K", "x"), ("R", "x"))), Singularity("b", 1, (("K", "y"), ("R", "y")))],
        [],
    )
    assert not omega_ample(c)


def test_ample_atom_and_smooth():
    assert omega_ample(cat.atom_911())
    assert omega_ample(CurveGraph([Component("X", 2)], [], []))


def test_tails():
    c = CurveGraph([Component("E", 1), Component("K", 2)], [Singularity("q", 1, (("E", "a"), ("K", "a")))], [])
    tails = find_elliptic_tails(c)
    assert len(tails) == 1 and tails[0]["attaching_k"] == 1
    a = find_elliptic_tails(cat.alpha_curve_a())
    assert [t["attaching_k"] for t in a] == [3]
    assert find_elliptic_tails(CurveGraph([Component("X", 3)], [], [])) == []


def test_chain_in_curve_c():
    # sub-bridges are A_3-attached on one side; the A_1/A_1 chain is unique
    ch = find_elliptic_chains(cat.alpha_curve_c())
    a11 = [len(x["links"]) for x in ch if tuple(x["attaching"]) == (1, 1)]
    assert a11 == [2]
    assert sorted(tuple(x["attaching"]) for x in ch if len(x["links"]) == 1) == [(1, 3), (1, 3)]


def test_bridge_in_curve_d():
    ch = find_elliptic_chains(cat.alpha_curve_d())
    assert [(len(x["links"]), tuple(x["attaching"])) for x in ch] == [(1, (1, 4))]


def test_nodal_join_is_not_a_chain():
    c = CurveGraph(
        [Component("K", 2), Component("E1", 1), Component("E2", 1)],
        [Singularity("a", 1, (("K", "a"), ("E1", "a"))), Singularity("b", 1, (("E1", "b"), ("E2", "a"))),
         Singularity("c", 1, (("E2", "b"), ("K", "c")))],
        [],
    )
    lens = sorted(len(x["links"]) for x in find_elliptic_chains(c))
    assert lens == [1, 1]


def test_weierstrass_tail():
    w = find_weierstrass_chains(cat.alpha_curve_b())
    assert [(len(x["links"]), tuple(x["attaching"])) for x in w] == [(1, (1,))]
    unflagged = CurveGraph([Component("X", 2), Component("K", 2)], [Singularity("q", 1, (("X", "q"), ("K", "q")))], [])
    assert find_weierstrass_chains(unflagged) == []


def test_weierstrass_chain_of_length_four():
    w = find_weierstrass_chains(cat.weierstrass_chain(4))
    assert [(len(x["links"]), tuple(x["attaching"])) for x in w if len(x["links"]) == 4] == [(4, (1,))]
    # the shorter ones are its A_3-attached tails
    assert all(tuple(x["attaching"]) == (3,) for x in w if len(x["links"]) < 4)


def test_curve_b_verdicts():
    c = cat.alpha_curve_b()
    assert is_alpha_stable(c, R.AT_23).stable
    v = is_alpha_stable(c, R.OPEN_23MINUS_23)
    assert not v.stable and v.categories() == ["WEIERSTRASS_CHAIN"]


def test_curve_a_never_stable():
    assert stable_regimes(cat.alpha_curve_a()) == []


def test_disallowed_singularity_reported():
    v = is_alpha_stable(cat.atom_23(), R.OPEN_911_1)
    assert "DISALLOWED_SINGULARITY" in v.categories()


def test_verdict_json_shape():
    out = is_alpha_stable(cat.alpha_curve_a(), R.AT_710).to_json()
    assert set(out) == {"stable", "regime", "violations"}
    assert out["violations"][0]["category"] == "ELLIPTIC_TAIL"
    assert out["violations"][0]["attaching"] == [3]


def test_every_regime_has_rules():
    for r in ALL_REGIMES:
        is_alpha_stable(cat.atom_911(), r)


def test_glue_elliptic_tail_to_stable_curve_at_911():
    from modulikit.curve_model import glue
    tail = CurveGraph([Component("T", 1)], [], [MarkedPoint("t", "T", "a")])
    for name, make in cat.catalog().items():
        c = make()
        if not c.marked_points or not is_alpha_stable(c, R.AT_911).stable:
            continue
        g = glue(c, c.marked_points[0].id, tail, "t")
        assert is_alpha_stable(g, R.AT_911).stable, name

from fractions import Fraction

import pytest

from modulikit import catalog as cat
from modulikit import deformation as d
from modulikit.closed_points import classify_closed
from modulikit.errors import NotClosed, UnknownSubgroup
from modulikit.vgit_engine import SupportUnion


def weights(action):
    return {c.name: c.weight for c in action.coordinates}


def test_911_atom_weights():
    a = d.t1_weights(classify_closed(cat.atom_911(), "9/11"))
    assert a.rank == 1 and a.character == (1,)
    assert weights(a) == {"s_0": (-6,), "s_1": (-4,)}


def test_710_type_b_genus_two():
    a = d.t1_weights(classify_closed(cat.closed_710("B", genus=2), "7/10"))
    assert a.rank == 2 and a.character == (1, 1)
    w = weights(a)
    for k in range(3):
        assert w[f"s_1_{k}"] == (k - 4, 0)
        assert w[f"s_2_{k}"] == (0, k - 4)
    assert w["n_1"] == (1, 1)


def test_23_link_length_two():
    a = d.t1_weights(classify_closed(cat.closed_23("A", links=(2,)), "2/3"))
    w = weights(a)
    assert a.rank == 2 and a.character == (0, 1)
    assert w["n_1_0"] == (1, 0) and w["n_1_1"] == (-1, 1) and w["c_1"] == (0, 1)
    for k in range(3):
        assert w[f"r_1_1_{k}"] == (k - 4, 0)
        assert w[f"r'_1_1_{k}"] == (4 - k, 0)
    for k in range(4):
        assert w[f"s_1_{k}"] == (0, 2 * k - 10)
    # zero-weight core block, one coordinate per dimension of the core's moduli
    kblock = [n for n in w if n.startswith("k_")]
    assert kblock and all(w[n] == (0, 0) for n in kblock)


def test_chi_star():
    cl = classify_closed(cat.closed_911("A", 3), "9/11")
    assert d.chi_star(cl) == (1, 1, 1)
    cl = classify_closed(cat.closed_23("A", links=(3,)), "2/3")
    assert d.chi_star(cl) == (0, 0, 1)


def test_chi_star_without_atoms_is_zero():
    from modulikit.curve_model import Component, CurveGraph
    cl = classify_closed(CurveGraph([Component("X", 3)], [], []), "2/3")
    assert cl.closed and cl.atoms == []
    assert not any(d.chi_star(cl))


@pytest.mark.parametrize("crit,make,n", [
    ("9/11", lambda: cat.closed_911("A", 2), 11),
    ("7/10", lambda: cat.closed_710("C", genus=3), 10),
    ("2/3", lambda: cat.closed_23("C", links=(2,)), 39),
])
def test_character_comparison(crit, make, n):
    cl = classify_closed(make(), crit)
    assert d.chi_delta_minus_psi(cl) == tuple(n * x for x in d.chi_star(cl))


def test_pair_character():
    assert d.pair_character(0, 1, "atom_1ps") == 39
    a, b = d.log_canonical_coefficients(Fraction(2, 3))
    assert (a, b) == (13, Fraction(-4, 3))
    assert d.pair_character(a, b, "atom_1ps") == 0
    assert d.pair_character(7, 3, "rosary_1ps") == 0
    with pytest.raises(UnknownSubgroup):
        d.pair_character(1, 1, "other")


@pytest.mark.parametrize("crit", ["9/11", "7/10"])
def test_log_canonical_trivial_at_other_critical_values(crit):
    alpha = Fraction(crit)
    a, b = d.log_canonical_coefficients(alpha)
    assert d.pair_character(a, b, "atom_1ps", crit) == 0


def test_not_closed_raises():
    with pytest.raises(NotClosed):
        d.t1_weights(classify_closed(cat.alpha_curve_b(), "2/3"))


def test_predicted_710_link_length_one():
    assert SupportUnion.of(d.link_710_minus(1)).to_json() == [["n_0", "n_1"]]


def test_predicted_23_link_length_two():
    got = SupportUnion.of(d.link_23_minus(2))
    assert got == SupportUnion.of([{"n_1", "c"}, {"n_0", "r'_1_0", "r'_1_1", "r'_1_2", "c"}])


def test_predicted_23_atom_tail():
    p = d.predicted_ideals(classify_closed(cat.closed_23("A", links=(1,)), "2/3"))
    assert p["plus"].to_json() == [["s_1_0", "s_1_1", "s_1_2", "s_1_3"]]
    assert p["minus"].to_json() == [["c_1", "n_1_0"]]


def test_rank_at_least_atoms():
    for crit, c in [("7/10", cat.closed_710("B", genus=3)), ("9/11", cat.closed_911("B")),
                    ("2/3", cat.closed_23("B", links=(3,)))]:
        cl = classify_closed(c, crit)
        assert d.t1_weights(cl).rank >= len(cl.atoms)

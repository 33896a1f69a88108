from fractions import Fraction as Q
from itertools import combinations
from math import comb

import pytest

from modulikit import divisor_calc as dc
from modulikit.divisor_calc import ClassVector, TransformKind
from modulikit.errors import MissingSideData, OutOfRange, UnknownIdentity


def test_tacnode_jumps():
    j = dc.transform_jumps(TransformKind.TACNODE_NORM, {"psi_new": 2})
    assert j["lambda"] == -1 and j["delta"] == -12
    v = dc.apply_transform(ClassVector.mumford(5, 40), "tacnode", {"psi_new": 2}, direction="up")
    assert v.lam == 4 and v.delta == 28


def test_cusp_zero_is_identity():
    v = ClassVector.mumford(3, 20, 1, psi=2)
    assert dc.apply_transform(v, "cusp", {"psi_new": 0, "iota": 0}) == v


def test_inner_lambda_jump():
    t, d_in, i = 2, 1, 0
    oracle = Q(t, 2) + d_in + i
    j = dc.transform_jumps(TransformKind.INNER_NODE_NORM,
                           {"psi_new": 0, "delta_tacn": t, "delta_inner": d_in, "iota": i})
    assert j["lambda"] == oracle == 2


def test_missing_side_data():
    with pytest.raises(MissingSideData):
        dc.transform_jumps(TransformKind.OUTER_NODE_NORM, {"psi_new": 1})
    with pytest.raises(MissingSideData):
        dc.transform_jumps(TransformKind.CUSP_NORM, {"psi_new": 1, "iota": -1})


@pytest.mark.parametrize("name,expected", [
    ("tacnode-39/4", {"psi_tacn": Q(1, 8)}),
    ("outer-39/4", {"delta_tacn": Q(7, 8)}),
    ("cusp-10", {"psi_cusp": Q(1)}),
    ("cusp-39/4", {"psi_cusp": Q(5, 4), "c_index": Q(-1, 4)}),
    ("outer-10", {}),
    ("inner-10", {}),
    ("inner-39/4", {"delta_tacn": Q(7, 8), "delta_inner": Q(-1, 4), "n_index": Q(-1, 4)}),
])
def test_identities(name, expected):
    p = dc.check_reduction_identity(name)
    assert p.holds
    assert p.residual == expected


def test_outer_10_constraint_is_visible():
    p = dc.check_reduction_identity("outer-10")
    assert p.residual_unconstrained == {"delta_tacn": Q(-2)} or set(p.residual_unconstrained) == {"delta_tacn"}


def test_unknown_identity():
    with pytest.raises(UnknownIdentity):
        dc.check_reduction_identity("nope")


@pytest.mark.parametrize("g,m,value", [(2, None, Q(10)), (3, None, Q(28, 3)), (2, 2, Q(10))])
def test_ch(g, m, value):
    assert dc.ch_coefficient(g, m) == value


def test_ch_m2_by_substitution():
    g, m = 2, 2
    assert Q(8) + Q(4, g) - Q(2 * (g - 1), g * m) + Q(2, g * m * (m - 1)) == dc.ch_coefficient(g, m)


@pytest.mark.parametrize("a", [3, 4, 5, 6])
def test_inner_sections_cases(a):
    assert dc.inner_sections_coeff(0, 1, a - 1) == 4 * (a - 1)
    assert dc.inner_sections_coeff(2, 0, a - 2) == 2 * (a - 2)
    assert dc.inner_sections_coeff(1, 1, a - 2) == 5 * a - 9
    assert dc.inner_sections_check(a)


def keel_oracle(n, r):
    # average psi_i = sum of delta_S over S containing i but not the fixed pair
    pairs = comb(n - 1, 2)
    return Q(r * comb(n - r, 2) + (n - r) * comb(r, 2), pairs)


@pytest.mark.parametrize("n,r,value", [(6, 2, Q(8, 5)), (6, 3, Q(9, 5)), (4, 2, Q(4, 3)), (7, 3, Q(2))])
def test_keel(n, r, value):
    assert dc.keel_psi_coefficient(n, r) == value == keel_oracle(n, r)


@pytest.mark.parametrize("n", range(4, 9))
def test_keel_relation(n):
    assert dc.keel_relation_check(n)
    for r in range(2, n // 2 + 1):
        assert dc.keel_psi_coefficient(n, r) == keel_oracle(n, r)


def test_keel_range():
    with pytest.raises(OutOfRange):
        dc.keel_psi_coefficient(6, 4)


@pytest.mark.parametrize("lam,di,dr,res", [(1, 10, 0, 0), (1, 8, 1, 0), (1, 10, 1, -2)])
def test_genus2_relation(lam, di, dr, res):
    assert dc.genus2_relation_check(ClassVector(lam=Q(lam), delta_irr=Q(di), delta_red=Q(dr))) == res


def test_hodge_bounds():
    b = dc.hodge_bound("cusp_high", 2)
    assert dict(b.rhs) == {"iota": Q(1, 2), "kappa": Q(1, 8)}
    b = dc.hodge_bound("inner_high", 3)
    assert dict(b.rhs)["iota"] == Q(2 * 2, 4) == 1 and dict(b.rhs)["kappa"] == Q(1, 8)
    b = dc.hodge_bound("cusp_g1", 1)
    assert b.relation == "<=" and dict(b.rhs) == {"psi": Q(2), "delta_red": Q(1, 4)}
    g2 = dc.hodge_bound("genus2")
    assert dict(g2.rhs) == {"kappa": Q(1, 8)}
    # cusp_high(2) at iota = 0 is the genus-2 bound
    assert dict(dc.hodge_bound("cusp_high", 2).rhs)["kappa"] == dict(g2.rhs)["kappa"]


@pytest.mark.parametrize("kind,param", [(k, p) for k in dc.HODGE_KINDS for p in (1, 2, 3, 5)
                                        if not (k.endswith("_high") and p < 2)])
def test_hodge_determinants(kind, param):
    assert dc.hodge_determinant_check(kind, param)


def test_high_genus_bound_needs_genus_two():
    with pytest.raises(OutOfRange):
        dc.hodge_bound("cusp_high", 1)


def test_bound_evaluate():
    b = dc.hodge_bound("genus2")
    assert b.evaluate({"psi": 1, "kappa": 8})
    assert not b.evaluate({"psi": 1, "kappa": 9})


def test_class_vector_json_round_trip():
    v = ClassVector.mumford(2, "21/2", 1, psi="3/4")
    assert v.mumford_consistent()
    out = v.to_json()
    assert out["lambda"] == "2/1" and out["delta"] == "23/2"
    assert ClassVector.from_json(out) == v
    w = ClassVector.from_json({"lambda": "1/2", "eta": "3"})
    assert w.extra == (("eta", Q(3)),) and w.to_json()["eta"] == "3/1"

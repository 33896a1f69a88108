"""Randomized invariants, 1000 examples each."""


from hypothesis import assume, given, strategies as st

from conftest import PROPS, actions, curves
from modulikit import catalog as cat
from modulikit import deformation as dfm
from modulikit import divisor_calc as dc
from modulikit.closed_points import aut_torus_rank, classify_closed
from modulikit.curve_model import (
    arithmetic_genus,
    connected_parts,
    glue,
    normalize_at,
    shape,
    stabilize_pointed,
    validate,
)
from modulikit.errors import Undefined
from modulikit.stability import ALL_REGIMES, RULES, is_alpha_stable
from modulikit.vgit_engine import SupportUnion, hm_unstable, vgit_loci

regimes = st.sampled_from(ALL_REGIMES)


# curve_model

@PROPS
@given(curves())
def test_generated_curves_are_valid(c):
    assert validate(c) == []


@PROPS
@given(curves(), st.data())
def test_genus_additivity_under_node_normalization(c, data):
    nodes = [s.id for s in c.singularities if s.k == 1]
    assume(nodes)
    q = data.draw(st.sampled_from(nodes))
    n = normalize_at(c, q)
    parts = connected_parts(n)
    if len(parts) == 1:
        assert arithmetic_genus(n) == arithmetic_genus(c) - 1
    else:
        assert sum(arithmetic_genus(p) for p in parts) == arithmetic_genus(c)


@PROPS
@given(curves(prefix="a"), curves(prefix="b"), st.data())
def test_glue_normalize_round_trip(c1, c2, data):
    assume(c1.marked_points and c2.marked_points)
    p = data.draw(st.sampled_from([m.id for m in c1.marked_points]))
    q = data.draw(st.sampled_from([m.id for m in c2.marked_points]))
    g = glue(c1, p, c2, q, node_id="glued")
    assert arithmetic_genus(g) == arithmetic_genus(c1) + arithmetic_genus(c2)
    back = normalize_at(g, "glued")
    union = type(c1)(c1.components + c2.components, c1.singularities + c2.singularities,
                     c1.marked_points + c2.marked_points, disconnected=True)
    assert shape(back) == shape(union)


@PROPS
@given(curves(), st.data())
def test_self_glue_adds_one(c, data):
    assume(c.n >= 2)
    p, q = data.draw(st.permutations([m.id for m in c.marked_points]))[:2]
    assert arithmetic_genus(glue(c, p, None, q)) == arithmetic_genus(c) + 1


@PROPS
@given(curves())
def test_stabilize_idempotent(c):
    try:
        s = stabilize_pointed(c)
    except Undefined:
        return
    assert shape(stabilize_pointed(s)) == shape(s)


# stability

@PROPS
@given(curves(), regimes)
def test_stable_curves_use_allowed_singularities(c, r):
    if is_alpha_stable(c, r).stable:
        assert set(c.kinds()) <= RULES[r].allowed


@st.composite
def stable_with_node(draw):
    r = draw(regimes)
    c = draw(curves().filter(lambda c: any(s.k == 1 for s in c.singularities)
                             and is_alpha_stable(c, r).stable))
    return c, r


@st.composite
def stable_one_pointed_pair(draw):
    r = draw(regimes)
    ok = lambda c: is_alpha_stable(c, r).stable
    c1 = draw(curves(prefix="a", min_marks=1, max_marks=1).filter(ok))
    c2 = draw(curves(prefix="b", min_marks=1, max_marks=1).filter(ok))
    return c1, c2, r


@PROPS
@given(stable_with_node(), st.data())
def test_normalization_preserves_stability(case, data):
    c, r = case
    q = data.draw(st.sampled_from([s.id for s in c.singularities if s.k == 1]))
    for part in connected_parts(normalize_at(c, q)):
        assert is_alpha_stable(part, r).stable


@PROPS
@given(stable_one_pointed_pair())
def test_gluing_one_pointed_stable_curves(case):
    c1, c2, r = case
    g = glue(c1, c1.marked_points[0].id, c2, c2.marked_points[0].id)
    assert is_alpha_stable(g, r).stable


# vgit_engine

@PROPS
@given(actions(max_coords=6), st.data(), st.sampled_from("+-"))
def test_support_monotonicity(a, data, sign):
    s = set(data.draw(st.sets(st.sampled_from(a.names))))
    sub = set(data.draw(st.sets(st.sampled_from(sorted(s))))) if s else set()
    if hm_unstable(a, s, sign):
        assert hm_unstable(a, sub, sign)


@PROPS
@given(actions(max_coords=6), st.data())
def test_sign_duality(a, data):
    s = data.draw(st.sets(st.sampled_from(a.names)))
    assert hm_unstable(a, s, "-") == hm_unstable(a.negated(), s, "+")


@PROPS
@given(actions(max_coords=6))
def test_zero_weight_supports_unstable_both_sides(a):
    assume(any(a.character))
    zeros = [c.name for c in a.coordinates if not any(c.weight)]
    assert hm_unstable(a, zeros, "+") and hm_unstable(a, zeros, "-")


@PROPS
@given(actions(max_rank=2, max_coords=5), st.data())
def test_restriction_matches_intersection(a, data):
    drop = data.draw(st.sampled_from(a.names))
    full = vgit_loci(a, split=False)
    sub = vgit_loci(a.restrict([drop]), split=False)
    for key in ("plus", "minus"):
        # a support avoiding ``drop`` is unstable in the restriction iff it is in the full locus
        pieces = [frozenset(p) - {drop} for p in getattr(full, key).pieces]
        assert getattr(sub, key) == SupportUnion.of(pieces)


# closed points and deformation

genus = st.integers(3, 12)


def _closed_curves():
    """Closed curves of every type from the fixture builders, with varying cores."""
    return st.one_of(
        st.tuples(st.integers(1, 6), genus).map(lambda t: ("9/11", cat.closed_911("A", *t))),
        st.sampled_from(["B", "C"]).map(lambda k: ("9/11", cat.closed_911(k))),
        st.tuples(st.lists(st.integers(1, 3), max_size=3), st.lists(st.integers(1, 3), max_size=1), genus).filter(
            lambda t: t[0] or t[1]).map(
            lambda t: ("7/10", cat.closed_710("A", links=tuple(t[0]), tails=tuple(t[1]), core_genus=t[2]))),
        st.tuples(st.sampled_from(["B", "C"]), st.integers(2, 8)).map(
            lambda t: ("7/10", cat.closed_710(t[0], genus=t[1]))),
        st.tuples(st.lists(st.integers(1, 4), min_size=1, max_size=3), genus).map(
            lambda t: ("2/3", cat.closed_23("A", links=tuple(t[0]), core_genus=t[1]))),
        st.tuples(st.sampled_from(["B", "C"]), st.integers(1, 5)).map(
            lambda t: ("2/3", cat.closed_23(t[0], links=(t[1],)))),
    )


@PROPS
@given(_closed_curves())
def test_aut_rank_matches_deformation_rank(case):
    crit, c = case
    cls = classify_closed(c, crit)
    assert cls.closed
    a = dfm.t1_weights(cls, crit)
    assert cls.aut_rank == a.rank
    assert aut_torus_rank(c) == a.rank
    assert dfm.chi_delta_minus_psi(cls) == tuple(dfm.CONSTANTS[crit]["N"] * x for x in a.character)


@PROPS
@given(st.lists(st.integers(1, 5), min_size=1, max_size=3), genus)
def test_rosary_weights_antisymmetric(ls, g):
    a = dfm.t1_weights(classify_closed(cat.closed_23("A", links=tuple(ls), core_genus=g), "2/3"))
    w = {c.name: c.weight for c in a.coordinates}
    rs = [n for n in w if n.startswith("r_")]
    assert len(rs) == 3 * sum(x - 1 for x in ls)
    for n in rs:
        assert w["r'" + n[1:]] == tuple(-x for x in w[n])


# divisor_calc

rat = st.fractions(min_value=-20, max_value=20, max_denominator=12)
nonneg = st.fractions(min_value=0, max_value=20, max_denominator=12)


@st.composite
def side_data(draw, kind):
    return {k: draw(rat if k == "psi_new" else nonneg) for k in dc.SIDE_KEYS[kind]}


@PROPS
@given(rat, rat, rat, st.sampled_from(list(dc.TransformKind)), st.data(),
       st.sampled_from(["delta_irr", "delta_red"]), st.sampled_from(["down", "up"]))
def test_transforms_preserve_mumford(lam, di, dr, kind, data, part, direction):
    v = dc.ClassVector.mumford(lam, di, dr)
    side = data.draw(side_data(kind))
    w = dc.apply_transform(v, kind, side, direction=direction, delta_part=part)
    assert w.mumford_consistent()
    back = dc.apply_transform(w, kind, side, direction="up" if direction == "down" else "down", delta_part=part)
    assert back == v


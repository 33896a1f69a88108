"""Fixture curves: atoms, the four alpha-curves, elliptic and Weierstrass chains,
rosaries, links, and closed curves of each combinatorial type."""

from __future__ import annotations

from typing import Callable, Dict, List, Optional, Sequence

from .curve_model import Component, CurveGraph, MarkedPoint, Singularity


def _c(cid, genus=0, weierstrass=()):
    return Component(cid, genus, frozenset(weierstrass))


def _s(sid, k, *branches, crimp=False):
    return Singularity(sid, k, tuple(branches), crimp)


def _m(mid, comp, pt):
    return MarkedPoint(mid, comp, pt)


# atoms

def atom_911(prefix: str = "") -> CurveGraph:
    e = prefix + "E"
    return CurveGraph([_c(e)], [_s(prefix + "xi", 2, (e, "x"), crimp=True)], [_m(prefix + "p", e, "n")])


def atom_710(prefix: str = "") -> CurveGraph:
    a, b = prefix + "E1", prefix + "E2"
    return CurveGraph([_c(a), _c(b)], [_s(prefix + "tau", 3, (a, "t"), (b, "t"))],
                      [_m(prefix + "p1", a, "n"), _m(prefix + "p2", b, "n")])


def atom_23(prefix: str = "") -> CurveGraph:
    e = prefix + "E"
    return CurveGraph([_c(e, 0, ["n"])], [_s(prefix + "xi", 4, (e, "x"), crimp=True)],
                      [_m(prefix + "p", e, "n")])


# the four curves illustrating the stability conditions

def alpha_curve_a() -> CurveGraph:
    """Genus-1 component tacnodally attached to a genus-2 component."""
    return CurveGraph([_c("T", 1), _c("K", 2)], [_s("tau", 3, ("T", "t"), ("K", "t"))], [])


def alpha_curve_b() -> CurveGraph:
    """Genus-2 component attached at a Weierstrass point by a node."""
    return CurveGraph([_c("X", 2, ["q"]), _c("K", 2)], [_s("q", 1, ("X", "q"), ("K", "q"))], [])


def alpha_curve_c() -> CurveGraph:
    """Two genus-1 components joined by a tacnode, one nodal to the core, one marked."""
    return CurveGraph(
        [_c("E1", 1), _c("E2", 1), _c("K", 2)],
        [_s("q", 1, ("E1", "q"), ("K", "q")), _s("tau", 3, ("E1", "t"), ("E2", "t"))],
        [_m("p", "E2", "p")],
    )


def alpha_curve_d() -> CurveGraph:
    """Genus-1 component with a ramphoid cusp, nodally attached to a genus-2 core."""
    return CurveGraph(
        [_c("X", 1), _c("K", 2)],
        [_s("rho", 4, ("X", "r")), _s("q", 1, ("X", "q"), ("K", "q"))],
        [],
    )


# chains

def elliptic_chain(length: int, genus_one: bool = True) -> CurveGraph:
    """Genus-1 bridges E1..Er joined by tacnodes, marked at both ends."""
    comps = [_c(f"E{i}", 1) for i in range(1, length + 1)]
    sings = [_s(f"tau{i}", 3, (f"E{i}", "b"), (f"E{i + 1}", "a")) for i in range(1, length)]
    marks = [_m("p1", "E1", "a"), _m("p2", f"E{length}", "b")]
    return CurveGraph(comps, sings, marks)


def weierstrass_chain(length: int, flagged: bool = True) -> CurveGraph:
    """Bridges E1..E(r-1) and a genus-2 tail joined by tacnodes, marked at E1."""
    comps = [_c(f"E{i}", 1) for i in range(1, length)]
    comps.append(_c(f"E{length}", 2, ["a"] if flagged else []))
    sings = [_s(f"tau{i}", 3, (f"E{i}", "b"), (f"E{i + 1}", "a")) for i in range(1, length)]
    return CurveGraph(comps, sings, [_m("p", "E1", "a")])


# rosaries: rational components R1..Rl, consecutive ones tacnodal

def rosary(length: int, closed: bool = False, marked: bool = True) -> CurveGraph:
    comps = [_c(f"R{i}") for i in range(1, length + 1)]
    sings = [_s(f"tau{i}", 3, (f"R{i}", "b"), (f"R{i + 1}", "a")) for i in range(1, length)]
    marks = []
    if closed:
        sings.append(_s(f"tau{length}", 3, (f"R{length}", "b"), ("R1", "a")))
    elif marked:
        marks = [_m("p1", "R1", "a"), _m("p2", f"R{length}", "b")]
    return CurveGraph(comps, sings, marks)


def figure_catalog() -> Dict[str, Callable[[], CurveGraph]]:
    return {
        "atom-9/11": atom_911,
        "atom-7/10": atom_710,
        "atom-2/3": atom_23,
        "alpha-A": alpha_curve_a,
        "alpha-B": alpha_curve_b,
        "alpha-C": alpha_curve_c,
        "alpha-D": alpha_curve_d,
        "elliptic-chain-4": lambda: elliptic_chain(4),
        "weierstrass-chain-4": lambda: weierstrass_chain(4),
        "rosary-3": lambda: rosary(3),
        "closed-rosary-4": lambda: rosary(4, closed=True),
    }


# closed curves at the critical values

def _node(sid, a, b):
    return _s(sid, 1, a, b)


def closed_911(kind: str, atoms: int = 1, core_genus: int = 2) -> CurveGraph:
    """Type A: a core of genus ``core_genus`` with ``atoms`` cuspidal atoms at nodes;
    Type B: two atoms glued at a node; Type C: a single atom."""
    if kind == "C":
        return atom_911()
    if kind == "B":
        comps = [_c("E1"), _c("E2")]
        sings = [_s("xi1", 2, ("E1", "x"), crimp=True), _s("xi2", 2, ("E2", "x"), crimp=True),
                 _node("q", ("E1", "n"), ("E2", "n"))]
        return CurveGraph(comps, sings, [])
    comps, sings = [_c("K", core_genus)], []
    for i in range(1, atoms + 1):
        comps.append(_c(f"E{i}"))
        sings += [_s(f"xi{i}", 2, (f"E{i}", "x"), crimp=True),
                  _node(f"q{i}", (f"E{i}", "n"), ("K", f"q{i}"))]
    return CurveGraph(comps, sings, [])


def _link_710(i: int, length: int) -> tuple:
    """Atoms E_{i,j} = X_{i,j} + Y_{i,j}; node q_{i,j} joins Y_{i,j} to X_{i,j+1}."""
    comps, sings = [], []
    for j in range(1, length + 1):
        x, y = f"X{i}_{j}", f"Y{i}_{j}"
        comps += [_c(x), _c(y)]
        sings.append(_s(f"tau{i}_{j}", 3, (x, "t"), (y, "t")))
        if j < length:
            sings.append(_node(f"q{i}_{j}", (y, "b"), (f"X{i}_{j + 1}", "a")))
    return comps, sings


def closed_710(kind: str, links: Sequence[int] = (1,), tails: Sequence[int] = (),
               genus: int = 2, core_genus: int = 2) -> CurveGraph:
    """Type A: core K with two-ended links of lengths ``links`` and one-ended links of
    lengths ``tails`` (each ending in a marking); Type B: a link of length ``genus``
    with two markings; Type C: a closed link of ``genus - 1`` atoms."""
    if kind == "B":
        comps, sings = _link_710(1, genus)
        return CurveGraph(comps, sings, [_m("p1", "X1_1", "a"), _m("p2", f"Y1_{genus}", "b")])
    if kind == "C":
        n = genus - 1
        comps, sings = _link_710(1, n)
        sings.append(_node("q1_0", (f"Y1_{n}", "b"), ("X1_1", "a")))
        return CurveGraph(comps, sings, [])
    comps, sings, marks = [_c("K", core_genus)], [], []
    for i, length in enumerate(list(links) + list(tails), start=1):
        lc, ls = _link_710(i, length)
        comps += lc
        sings += ls
        sings.append(_node(f"q{i}_0", ("K", f"a{i}"), (f"X{i}_1", "a")))
        if i <= len(links):
            sings.append(_node(f"q{i}_{length}", (f"Y{i}_{length}", "b"), ("K", f"b{i}")))
        else:
            marks.append(_m(f"p{i}", f"Y{i}_{length}", "b"))
    return CurveGraph(comps, sings, marks)


def _link_23(i: int, length: int, start: str) -> tuple:
    """Rosaries R_{i,j} (j < length) of length 3 then a ramphoid atom E_i; the node
    q_{i,j} joins R_{i,j} to the next piece and ``start`` is the first free point."""
    comps, sings = [], []
    prev = None
    for j in range(1, length):
        names = [f"R{i}_{j}_{k}" for k in (1, 2, 3)]
        comps += [_c(x) for x in names]
        sings += [_s(f"tau{i}_{j}_1", 3, (names[0], "b"), (names[1], "a")),
                  _s(f"tau{i}_{j}_2", 3, (names[1], "b"), (names[2], "a"))]
        if prev is not None:
            sings.append(_node(f"q{i}_{j - 1}", (prev, "b"), (names[0], "a")))
        prev = names[2]
    e = f"E{i}"
    comps.append(_c(e, 0, ["n"]))
    sings.append(_s(f"xi{i}", 4, (e, "x"), crimp=True))
    if prev is not None:
        sings.append(_node(f"q{i}_{length - 1}", (prev, "b"), (e, "n")))
    first = (f"R{i}_1_1", "a") if length > 1 else (e, "n")
    return comps, sings, first


def closed_23(kind: str, links: Sequence[int] = (1,), core_genus: int = 2) -> CurveGraph:
    """Type A: core K with links of lengths ``links``; Type B: one link of length
    ``links[0]`` marked at its start; Type C: two atoms joined through ``links[0] - 1``
    rosaries."""
    if kind == "B":
        comps, sings, first = _link_23(1, links[0], "p")
        return CurveGraph(comps, sings, [_m("p", *first)])
    if kind == "C":
        length = links[0]
        comps, sings, first = _link_23(1, length, "q")
        comps.append(_c("E0", 0, ["n"]))
        sings += [_s("xi0", 4, ("E0", "x"), crimp=True), _node("q1_0", ("E0", "n"), first)]
        return CurveGraph(comps, sings, [])
    comps, sings = [_c("K", core_genus)], []
    for i, length in enumerate(links, start=1):
        lc, ls, first = _link_23(i, length, "q")
        comps += lc
        sings += ls + [_node(f"q{i}_0", ("K", f"a{i}"), first)]
    return CurveGraph(comps, sings, [])


def closed_catalog() -> Dict[str, Callable[[], CurveGraph]]:
    return {
        "closed-9/11-A": lambda: closed_911("A", 2),
        "closed-9/11-B": lambda: closed_911("B"),
        "closed-9/11-C": lambda: closed_911("C"),
        "closed-7/10-A": lambda: closed_710("A", links=(2,), tails=(1,)),
        "closed-7/10-B": lambda: closed_710("B", genus=3),
        "closed-7/10-C": lambda: closed_710("C", genus=3),
        "closed-2/3-A": lambda: closed_23("A", links=(2,)),
        "closed-2/3-B": lambda: closed_23("B", links=(2,)),
        "closed-2/3-C": lambda: closed_23("C", links=(2,)),
    }


def catalog() -> Dict[str, Callable[[], CurveGraph]]:
    out = dict(figure_catalog())
    out.update(closed_catalog())
    return out

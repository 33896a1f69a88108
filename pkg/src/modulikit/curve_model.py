"""Pointed curves with A_k singularities as decorated dual graphs.

A curve is a list of components (geometric genus plus the branch points
flagged as Weierstrass points), a list of singularities (the A_k index and
the branch points it identifies) and a list of marked points. Branch points
are addressed by ``(component_id, point_id)`` pairs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import InvalidGraph, SelfGlueSamePoint, Undefined, UnknownId

Point = Tuple[str, str]


def delta_invariant(k: int) -> int:
    return (k + 1) // 2


def branch_count(k: int) -> int:
    return 2 if k % 2 else 1


@dataclass(frozen=True)
class Component:
    id: str
    genus: int = 0
    weierstrass: frozenset = frozenset()


@dataclass(frozen=True)
class Singularity:
    id: str
    k: int
    branches: Tuple[Point, ...]
    trivial_crimping: bool = False

    @property
    def delta(self) -> int:
        return delta_invariant(self.k)

    @property
    def components(self) -> Tuple[str, ...]:
        return tuple(c for c, _ in self.branches)

    @property
    def inner(self) -> bool:
        return len(set(self.components)) == 1

    @property
    def outer(self) -> bool:
        return not self.inner


@dataclass(frozen=True)
class MarkedPoint:
    id: str
    component: str
    point: str

    @property
    def where(self) -> Point:
        return (self.component, self.point)


@dataclass(frozen=True)
class CurveGraph:
    components: Tuple[Component, ...] = ()
    singularities: Tuple[Singularity, ...] = ()
    marked_points: Tuple[MarkedPoint, ...] = ()
    # Set only on normalization output whose incidence graph falls apart.
    disconnected: bool = False

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "singularities", tuple(self.singularities))
        object.__setattr__(self, "marked_points", tuple(self.marked_points))

    # lookups
    def component(self, cid: str) -> Component:
        for c in self.components:
            if c.id == cid:
                return c
        raise UnknownId(f"no component {cid!r}")

    def singularity(self, sid: str) -> Singularity:
        for s in self.singularities:
            if s.id == sid:
                return s
        raise UnknownId(f"no singularity {sid!r}")

    def marking(self, mid: str) -> MarkedPoint:
        for m in self.marked_points:
            if m.id == mid:
                return m
        raise UnknownId(f"no marked point {mid!r}")

    @property
    def component_ids(self) -> List[str]:
        return [c.id for c in self.components]

    @property
    def n(self) -> int:
        return len(self.marked_points)

    def markings_on(self, cid: str) -> List[MarkedPoint]:
        return [m for m in self.marked_points if m.component == cid]

    def singularities_on(self, cid: str) -> List[Singularity]:
        return [s for s in self.singularities if cid in s.components]

    def singularity_at(self, pt: Point) -> Optional[Singularity]:
        for s in self.singularities:
            if pt in s.branches:
                return s
        return None

    def kinds(self) -> List[int]:
        return sorted({s.k for s in self.singularities})

    # serialization
    def to_json(self) -> dict:
        return {
            "components": [
                {"id": c.id, "genus": c.genus, "weierstrass": sorted(c.weierstrass)}
                for c in self.components
            ],
            "singularities": [
                {"id": s.id, "k": s.k, "branches": [list(b) for b in s.branches],
                 "trivial_crimping": s.trivial_crimping}
                for s in self.singularities
            ],
            "marked_points": [
                {"id": m.id, "component": m.component, "point": m.point}
                for m in self.marked_points
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "CurveGraph":
        try:
            comps = [Component(str(c["id"]), int(c.get("genus", 0)),
                               frozenset(str(w) for w in c.get("weierstrass", [])))
                     for c in data.get("components", [])]
            sings = [Singularity(str(s["id"]), int(s["k"]),
                                 tuple((str(a), str(b)) for a, b in s["branches"]),
                                 bool(s.get("trivial_crimping", False)))
                     for s in data.get("singularities", [])]
            marks = [MarkedPoint(str(m["id"]), str(m["component"]), str(m["point"]))
                     for m in data.get("marked_points", [])]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidGraph(f"malformed curve data: {exc}") from exc
        return cls(tuple(comps), tuple(sings), tuple(marks))


def load_curve(path: str) -> CurveGraph:
    with open(path, encoding="utf-8") as fh:
        return CurveGraph.from_json(json.load(fh))


def connected_groups(c: CurveGraph) -> List[List[str]]:
    """Components grouped by the incidence graph (2-branch singularities as edges)."""
    parent = {cid: cid for cid in c.component_ids}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s in c.singularities:
        comps = [x for x in s.components if x in parent]
        for x in comps[1:]:
            parent[find(x)] = find(comps[0])
    groups: Dict[str, List[str]] = {}
    for cid in c.component_ids:
        groups.setdefault(find(cid), []).append(cid)
    return list(groups.values())


def is_connected(c: CurveGraph) -> bool:
    return len(connected_groups(c)) <= 1


def validate(c: CurveGraph) -> List[str]:
    """Every violated invariant, each naming the offending id. Empty means ok."""
    out: List[str] = []
    ids = [x.id for x in c.components]
    for dup in sorted({i for i in ids if ids.count(i) > 1}):
        out.append(f"duplicate component id {dup}")
    sids = [s.id for s in c.singularities]
    for dup in sorted({i for i in sids if sids.count(i) > 1}):
        out.append(f"duplicate singularity id {dup}")
    mids = [m.id for m in c.marked_points]
    for dup in sorted({i for i in mids if mids.count(i) > 1}):
        out.append(f"duplicate marked point id {dup}")
    known = set(ids)
    for comp in c.components:
        if comp.genus < 0:
            out.append(f"negative genus on {comp.id}")
    used: Dict[Point, str] = {}
    for s in c.singularities:
        if s.k < 1:
            out.append(f"{s.id}: A_k index must be at least 1")
            continue
        if len(s.branches) != branch_count(s.k):
            if s.k % 2:
                out.append(f"{s.id}: odd-k singularity needs 2 branches")
            else:
                out.append(f"{s.id}: even-k singularity needs 1 branch")
        if len(set(s.branches)) != len(s.branches):
            out.append(f"{s.id}: branches coincide")
        for b in s.branches:
            if b[0] not in known:
                out.append(f"{s.id}: unknown component {b[0]}")
            if b in used:
                out.append(f"{s.id}: branch point {b[0]}/{b[1]} already used by {used[b]}")
            used[b] = s.id
    seen_marks: Dict[Point, str] = {}
    for m in c.marked_points:
        if m.component not in known:
            out.append(f"{m.id}: unknown component {m.component}")
        if m.where in used:
            out.append(f"{m.id}: marking not smooth")
        if m.where in seen_marks:
            out.append(f"{m.id}: marking coincides with {seen_marks[m.where]}")
        seen_marks[m.where] = m.id
    if not c.disconnected and c.components and not is_connected(c):
        out.append("incidence graph is disconnected")
    return out


def require_valid(c: CurveGraph, connected: bool = True) -> None:
    bad = validate(c)
    if bad:
        raise InvalidGraph("; ".join(bad))
    if connected and (not c.components or not is_connected(c)):
        raise InvalidGraph("a connected, nonempty curve is required")


def arithmetic_genus(c: CurveGraph) -> int:
    """Sum of genera and delta invariants, minus components, plus connected parts."""
    bad = validate(c)
    if bad:
        raise InvalidGraph("; ".join(bad))
    return (sum(x.genus for x in c.components)
            + sum(s.delta for s in c.singularities)
            - len(c.components)
            + len(connected_groups(c)))


def subgraph(c: CurveGraph, comps: Iterable[str]) -> CurveGraph:
    """The components ``comps`` with singularities and markings entirely on them."""
    keep = set(comps)
    sings = tuple(s for s in c.singularities if set(s.components) <= keep)
    marks = tuple(m for m in c.marked_points if m.component in keep)
    parts = tuple(x for x in c.components if x.id in keep)
    out = CurveGraph(parts, sings, marks, disconnected=True)
    return replace(out, disconnected=not is_connected(out))


def connected_parts(c: CurveGraph) -> List[CurveGraph]:
    out = []
    for grp in connected_groups(c):
        out.append(replace(subgraph(c, grp), disconnected=False))
    return out


def _fresh(base: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    if base not in taken:
        return base
    i = 1
    while f"{base}.{i}" in taken:
        i += 1
    return f"{base}.{i}"


def normalize_at(c: CurveGraph, sid: str) -> CurveGraph:
    """Pointed normalization at one singularity: its branches become markings."""
    sing = c.singularity(sid)
    taken = [m.id for m in c.marked_points]
    new_marks = []
    for i, (comp, pt) in enumerate(sing.branches):
        mid = _fresh(f"{sid}#{i}", taken)
        taken.append(mid)
        new_marks.append(MarkedPoint(mid, comp, pt))
    out = CurveGraph(
        c.components,
        tuple(s for s in c.singularities if s.id != sid),
        c.marked_points + tuple(new_marks),
        disconnected=True,
    )
    return replace(out, disconnected=not is_connected(out))


def _smooth_rational(c: CurveGraph, cid: str) -> bool:
    return c.component(cid).genus == 0 and not any(
        s.inner for s in c.singularities_on(cid))


def _contract_once(c: CurveGraph) -> Optional[CurveGraph]:
    """Contract one semistable smooth rational component, if any."""
    for comp in c.components:
        cid = comp.id
        if not _smooth_rational(c, cid):
            continue
        sings = c.singularities_on(cid)
        marks = c.markings_on(cid)
        nodes = [s for s in sings if s.k == 1 and s.outer]
        if len(sings) != len(nodes):
            continue
        if len(nodes) == 1 and len(marks) <= 1:
            node = nodes[0]
            other = next(b for b in node.branches if b[0] != cid)
            rest_m = tuple(m for m in c.marked_points if m.component != cid)
            if marks:
                rest_m += (MarkedPoint(marks[0].id, other[0], other[1]),)
            return CurveGraph(
                tuple(x for x in c.components if x.id != cid),
                tuple(s for s in c.singularities if s.id != node.id),
                rest_m, disconnected=c.disconnected)
        if len(nodes) == 2 and not marks:
            a = next(b for b in nodes[0].branches if b[0] != cid)
            b = next(b for b in nodes[1].branches if b[0] != cid)
            if a[0] == cid or b[0] == cid:
                continue
            merged = Singularity(nodes[0].id, 1, (a, b))
            return CurveGraph(
                tuple(x for x in c.components if x.id != cid),
                tuple(s for s in c.singularities if s.id not in (nodes[0].id, nodes[1].id))
                + (merged,),
                c.marked_points, disconnected=c.disconnected)
    return None


def _collapses(part: CurveGraph) -> bool:
    # A lone smooth rational component with at most two markings has nothing
    # left after contraction.
    return (len(part.components) == 1 and not part.singularities
            and part.components[0].genus == 0 and part.n <= 2)


def stabilize_pointed(c: CurveGraph) -> CurveGraph:
    """Contract semistable rational components until none remain.

    A connected part that is a smooth 2-pointed rational curve is deleted when
    something else survives; a curve that collapses to a point raises
    Undefined.
    """
    parts = connected_parts(c) if not is_connected(c) else [replace(c, disconnected=False)]
    kept: List[CurveGraph] = []
    dropped = 0
    for part in parts:
        if _collapses(part):
            if part.n == 2:
                dropped += 1
                continue
            raise Undefined("stable pointed normalization collapses to a point")
        while True:
            nxt = _contract_once(part)
            if nxt is None:
                break
            part = nxt
            if _collapses(part):
                raise Undefined("stable pointed normalization collapses to a point")
        kept.append(part)
    if not kept:
        raise Undefined("stable pointed normalization collapses to a point")
    comps, sings, marks = (), (), ()
    for p in kept:
        comps += p.components
        sings += p.singularities
        marks += p.marked_points
    out = CurveGraph(comps, sings, marks, disconnected=True)
    return replace(out, disconnected=len(kept) > 1)


def _check_disjoint(c1: CurveGraph, c2: CurveGraph) -> None:
    for kind, a, b in (
        ("component", c1.component_ids, c2.component_ids),
        ("singularity", [s.id for s in c1.singularities], [s.id for s in c2.singularities]),
        ("marked point", [m.id for m in c1.marked_points], [m.id for m in c2.marked_points]),
    ):
        clash = set(a) & set(b)
        if clash:
            raise InvalidGraph(f"{kind} ids shared by both curves: {sorted(clash)}")


def glue(c1: CurveGraph, p: str, c2: Optional[CurveGraph] = None, q: Optional[str] = None,
         node_id: Optional[str] = None) -> CurveGraph:
    """Identify marking p of c1 with marking q of c2 (or of c1 when c2 is None) in a node."""
    if c2 is None:
        return self_glue(c1, p, q, node_id)
    _check_disjoint(c1, c2)
    mp, mq = c1.marking(p), c2.marking(q)
    both = CurveGraph(c1.components + c2.components,
                      c1.singularities + c2.singularities,
                      c1.marked_points + c2.marked_points, disconnected=True)
    return _join(both, mp, mq, node_id)


def self_glue(c: CurveGraph, p: str, q: Optional[str], node_id: Optional[str] = None) -> CurveGraph:
    if q is None:
        raise UnknownId("second marked point missing")
    if p == q:
        raise SelfGlueSamePoint(f"cannot glue {p} to itself")
    return _join(c, c.marking(p), c.marking(q), node_id)


def _join(c: CurveGraph, mp: MarkedPoint, mq: MarkedPoint, node_id: Optional[str]) -> CurveGraph:
    nid = node_id or _fresh(f"{mp.id}~{mq.id}", [s.id for s in c.singularities])
    out = CurveGraph(
        c.components,
        c.singularities + (Singularity(nid, 1, (mp.where, mq.where)),),
        tuple(m for m in c.marked_points if m.id not in (mp.id, mq.id)),
        disconnected=True,
    )
    return replace(out, disconnected=not is_connected(out))


def shape(c: CurveGraph) -> tuple:
    """Structural fingerprint that ignores marked-point and singularity ids."""
    return (
        tuple(sorted((x.id, x.genus, tuple(sorted(x.weierstrass))) for x in c.components)),
        tuple(sorted((s.k, tuple(sorted(s.branches)), s.trivial_crimping) for s in c.singularities)),
        tuple(sorted(m.where for m in c.marked_points)),
    )

"""Closed curves at a critical alpha: atoms, canonical decomposition, links,
combinatorial type, and the rank of the automorphism torus."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from . import stability as st
from .curve_model import (CurveGraph, MarkedPoint, Singularity, arithmetic_genus,
                          connected_parts, is_connected, require_valid, subgraph)
from .errors import NotStable, InvalidGraph

CRITICAL_VALUES = ("9/11", "7/10", "2/3")


def _check_critical(critical: str) -> str:
    if critical not in CRITICAL_VALUES:
        raise InvalidGraph(f"critical value must be one of {CRITICAL_VALUES}, got {critical!r}")
    return critical


def special_points(c: CurveGraph, cid: str) -> int:
    n = sum(1 for s in c.singularities for b in s.branches if b[0] == cid)
    return n + len(c.markings_on(cid))


# torus rank

def _free_point_ok(c: CurveGraph, cid: str, used: set) -> bool:
    """Whether the special points of cid outside the linking tacnodes let G_m act."""
    for s in c.singularities:
        for b in s.branches:
            if b[0] != cid or s.id in used:
                continue
            if s.k == 1:
                continue
            if s.k == 2:
                continue
            if s.k == 4 and s.trivial_crimping:
                continue
            return False
    return True


def torus_runs(c: CurveGraph) -> List[dict]:
    """Maximal tacnodally linked runs of rational components with two special points.

    Each run reports its components (in order for paths), the linking
    tacnodes, whether it closes up, and whether it carries a G_m.
    """
    cand = []
    for comp in c.components:
        if comp.genus != 0 or special_points(c, comp.id) != 2:
            continue
        inner = [s for s in c.singularities_on(comp.id) if s.inner]
        if any(s.k % 2 for s in inner) and len(c.components) > 1:
            continue
        cand.append(comp.id)
    cset = set(cand)
    adj: Dict[str, List[Tuple[str, str]]] = {x: [] for x in cand}
    for s in c.singularities:
        if s.k == 3 and all(b[0] in cset for b in s.branches):
            a, b = s.branches[0][0], s.branches[1][0]
            adj[a].append((b, s.id))
            if a != b:
                adj[b].append((a, s.id))
    seen = set()
    runs = []
    for start in sorted(cand):
        if start in seen:
            continue
        comp_ids, stack = [], [start]
        seen.add(start)
        while stack:
            x = stack.pop()
            comp_ids.append(x)
            for y, _ in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        links = sorted({sid for x in comp_ids for _, sid in adj[x]})
        cycle = len(links) >= len(comp_ids)
        if cycle:
            order = _cycle_order(comp_ids, adj)
            rank = 1 if len(comp_ids) % 2 == 0 else 0
        else:
            order = _path_order(comp_ids, adj)
            ends = {order[0], order[-1]}
            rank = 1 if all(_free_point_ok(c, x, set(links)) for x in ends) else 0
        runs.append({"components": order, "tacnodes": links, "closed": cycle, "rank": rank})
    return runs


def _path_order(comp_ids, adj):
    if len(comp_ids) == 1:
        return list(comp_ids)
    ends = sorted(x for x in comp_ids if len(adj[x]) == 1)
    order = [ends[0]]
    prev = None
    while True:
        nxt = [y for y, _ in adj[order[-1]] if y != prev and y not in order]
        if not nxt:
            break
        prev = order[-1]
        order.append(nxt[0])
    return order


def _cycle_order(comp_ids, adj):
    start = min(comp_ids)
    order = [start]
    while True:
        nxt = sorted(y for y, _ in adj[order[-1]] if y not in order)
        if not nxt:
            break
        order.append(nxt[0])
    return order


def aut_torus_rank(c: CurveGraph) -> int:
    require_valid(c)
    return sum(r["rank"] for r in torus_runs(c))


# atoms

@dataclass(frozen=True)
class Atom:
    critical: str
    comps: Tuple[str, ...]
    singularity: str
    ports: Tuple[st.Port, ...]
    # the X-Y node when both ports of a 7/10-atom are the same node
    cut: Tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {"components": list(self.comps), "singularity": self.singularity,
                "ports": [p.id for p in self.ports]}


def find_atoms(c: CurveGraph, critical: str) -> List[Atom]:
    """Nodally attached atoms: every port is a node or a marking."""
    _check_critical(critical)
    require_valid(c)
    out: List[Atom] = []
    if critical in ("9/11", "2/3"):
        k = 2 if critical == "9/11" else 4
        for comp in c.components:
            if comp.genus != 0:
                continue
            inner = [s for s in c.singularities_on(comp.id) if s.inner]
            if len(inner) != 1 or inner[0].k != k:
                continue
            if k == 4 and not inner[0].trivial_crimping:
                continue
            ports = st._ports(c, frozenset({comp.id}), frozenset())
            if len(ports) == 1 and ports[0].k == 1:
                out.append(Atom(critical, (comp.id,), inner[0].id, ports))
        return out
    ids = [x.id for x in c.components
           if x.genus == 0 and not any(s.inner for s in c.singularities_on(x.id))]
    for i, x in enumerate(ids):
        for y in ids[i + 1:]:
            joins = [s for s in c.singularities if set(s.components) == {x, y}]
            tac = [s for s in joins if s.k == 3]
            rest = [s for s in joins if s.k != 3]
            if len(tac) != 1 or len(rest) > 1 or any(s.k != 1 for s in rest):
                continue
            cut = frozenset(s.id for s in rest)
            ports = st._ports(c, frozenset({x, y}), cut)
            if len(ports) != 2 or any(p.k != 1 for p in ports):
                continue
            if {p.point[0] for p in ports} != {x, y}:
                continue
            out.append(Atom(critical, (x, y), tac[0].id, ports, tuple(sorted(cut))))
    return out


# classification

@dataclass
class Link:
    atoms: List[Tuple[str, ...]] = field(default_factory=list)
    rosaries: List[List[str]] = field(default_factory=list)
    rosary_tacnodes: List[List[str]] = field(default_factory=list)
    nodes: List[str] = field(default_factory=list)
    atom_singularities: List[str] = field(default_factory=list)
    two_ended: bool = False

    @property
    def length(self) -> int:
        return len(self.atoms) + len(self.rosaries)

    def to_json(self) -> dict:
        return {"atoms": [list(a) for a in self.atoms], "rosaries": self.rosaries,
                "tacnodes": self.rosary_tacnodes, "nodes": self.nodes,
                "singularities": self.atom_singularities, "length": self.length,
                "two_ended": self.two_ended}


@dataclass
class ClosedClassification:
    critical: str
    status: str  # "closed", "not_closed" or "undetermined"
    reason: str = ""
    type: Optional[str] = None
    core: List[str] = field(default_factory=list)
    secondary_core: List[str] = field(default_factory=list)
    atoms: List[Atom] = field(default_factory=list)
    links: List[Link] = field(default_factory=list)
    # (genus, markings, torus rank) of each connected part of the (secondary) core
    core_parts: List[Tuple[int, int, int]] = field(default_factory=list)
    # torus factors of the secondary core that act on no link coordinate
    core_rosaries: int = 0
    aut_rank: int = 0

    @property
    def closed(self) -> bool:
        return self.status == "closed"

    def to_json(self) -> dict:
        return {
            "critical": self.critical,
            "status": self.status,
            "closed": self.closed,
            "reason": self.reason,
            "type": self.type,
            "core": self.core,
            "secondary_core": self.secondary_core,
            "atoms": [a.to_json() for a in self.atoms],
            "links": [l.to_json() for l in self.links],
            "core_parts": [{"genus": g, "n": n, "aut_rank": k} for g, n, k in self.core_parts],
            "aut_rank": self.aut_rank,
        }


def pointed_subcurve(c: CurveGraph, comps: Sequence[str], tag: str = "@") -> CurveGraph:
    """The subcurve on ``comps`` marked with its attaching points to the rest."""
    keep = set(comps)
    base = subgraph(c, keep)
    extra = []
    for s in c.singularities:
        inside = [b for b in s.branches if b[0] in keep]
        if inside and len(inside) < len(s.branches):
            for b in inside:
                extra.append(MarkedPoint(f"{s.id}{tag}{b[0]}", b[0], b[1]))
    return CurveGraph(base.components, base.singularities, base.marked_points + tuple(extra),
                      disconnected=base.disconnected)


def canonical_decomposition(c: CurveGraph, critical: str) -> dict:
    _check_critical(critical)
    verdict = st.is_alpha_stable(c, st.CRITICAL[critical])
    if not verdict.stable:
        raise NotStable(f"not stable at alpha = {critical}: {verdict.categories()}")
    atoms = find_atoms(c, critical)
    used = {x for a in atoms for x in a.comps}
    core = [x for x in c.component_ids if x not in used]
    return {"core": core, "atoms": atoms}


def _parts(c: CurveGraph, comps: Sequence[str]) -> List[CurveGraph]:
    if not comps:
        return []
    return connected_parts(pointed_subcurve(c, comps))


def _has_nodal_tail(part: CurveGraph, critical: str) -> bool:
    if critical == "9/11":
        return any(p.ports[0].k == 1 for p in st.elliptic_tail_pieces(part))
    if critical == "7/10":
        return any(all(q.k == 1 for q in p.ports) for p in st.elliptic_bridge_pieces(part))
    return any(p.ports[0].k == 1 for p in st.weierstrass_tail_pieces(part))


def _a1_rosaries(part: CurveGraph) -> Tuple[List[dict], List[dict]]:
    """(A1/A1-attached open rosaries, closed rosaries) among the torus runs."""
    opened, closed = [], []
    for run in torus_runs(part):
        comps = run["components"]
        if any(part.component(x).genus or any(s.inner for s in part.singularities_on(x))
               for x in comps):
            continue
        if run["closed"]:
            closed.append(run)
            continue
        links = set(run["tacnodes"])
        free = []
        for x in (comps[0], comps[-1]) if len(comps) > 1 else (comps[0],):
            for s in part.singularities:
                free += [s.k for b in s.branches if b[0] == x and s.id not in links]
            free += [1 for _ in part.markings_on(x)]
        if all(k == 1 for k in free):
            opened.append(run)
    return opened, closed


def _core_closedness(part: CurveGraph, critical: str) -> Tuple[str, str]:
    rank = aut_torus_rank(part)
    if critical in ("9/11", "7/10"):
        if rank:
            return "undetermined", "core part carries a torus"
        return "closed", ""
    opened, closed = _a1_rosaries(part)
    if closed:
        return "not_closed", "core contains a closed rosary"
    for run in opened:
        if len(run["components"]) != 3:
            return "not_closed", f"core contains a rosary of length {len(run['components'])}"
    in_rosaries = {t for run in opened for t in run["tacnodes"]}
    if any(s.k == 3 and s.id not in in_rosaries for s in part.singularities):
        return "undetermined", "core has tacnodes outside length-3 rosaries"
    for p in st._irreducible_pieces(part):
        if p.genus == 2 and len(p.ports) == 2 and all(q.k == 1 for q in p.ports):
            return "undetermined", "core has a genus-2 component attached at two points"
    if rank != len(opened):
        return "undetermined", "torus rank not explained by rosaries"
    return "closed", ""


def classify_closed(c: CurveGraph, critical: str) -> ClosedClassification:
    """Decide closedness at a critical value and read off the combinatorial type."""
    dec = canonical_decomposition(c, critical)
    atoms: List[Atom] = dec["atoms"]
    core: List[str] = dec["core"]
    out = ClosedClassification(critical, "not_closed", core=core, atoms=atoms)
    kcrit = st.CRITICAL_K[critical]
    on_atoms = {a.singularity for a in atoms}
    stray = sorted(s.id for s in c.singularities if s.k == kcrit and s.id not in on_atoms)
    if stray:
        out.reason = f"critical singularities outside atoms: {stray}"
        return out
    parts = _parts(c, core)
    for part in parts:
        v = st.is_alpha_stable(part, st.ABOVE[critical])
        if not v.stable:
            out.reason = f"core is not stable just above {critical}: {v.categories()}"
            return out
        if _has_nodal_tail(part, critical):
            out.reason = "core contains a nodally attached tail"
            return out
    status, why = "closed", ""
    for part in parts:
        s, w = _core_closedness(part, critical)
        if s == "not_closed":
            out.reason = w
            return out
        if s == "undetermined":
            status, why = s, w
    out.aut_rank = aut_torus_rank(c)
    builder = {"9/11": _type_911, "7/10": _type_710, "2/3": _type_23}[critical]
    builder(c, out)
    if out.status == "closed" and status != "closed":
        out.status, out.reason = status, why
    return out


def _core_part_data(c: CurveGraph, comps: Sequence[str]) -> List[Tuple[int, int, int]]:
    out = []
    for part in _parts(c, comps):
        out.append((arithmetic_genus(part), part.n, aut_torus_rank(part)))
    return out


def _port_node(port: st.Port) -> Optional[str]:
    return port.id if port.kind == "sing" else None


def _type_911(c: CurveGraph, out: ClosedClassification) -> None:
    out.status = "closed"
    if out.core:
        out.type = "A"
        out.core_parts = _core_part_data(c, out.core)
        for a in sorted(out.atoms, key=lambda a: a.comps):
            out.links.append(Link(atoms=[a.comps], nodes=[a.ports[0].id],
                                  atom_singularities=[a.singularity]))
        return
    if len(out.atoms) == 2 and c.n == 0:
        out.type = "B"
        a1, a2 = sorted(out.atoms, key=lambda a: a.comps)
        out.links.append(Link(atoms=[a1.comps, a2.comps], nodes=[a1.ports[0].id],
                              atom_singularities=[a1.singularity, a2.singularity]))
        return
    if len(out.atoms) == 1 and c.n == 1:
        out.type = "C"
        a = out.atoms[0]
        out.links.append(Link(atoms=[a.comps], atom_singularities=[a.singularity]))
        return
    out.status, out.reason = "undetermined", "no combinatorial type matches"


def _atom_graph(c: CurveGraph, atoms: List[Atom]):
    """For 7/10: for each atom, its ports keyed by what lies across them."""
    comp_atom = {x: i for i, a in enumerate(atoms) for x in a.comps}
    across = []
    for i, a in enumerate(atoms):
        sides = []
        for p in a.ports:
            if p.kind == "mark":
                sides.append(("mark", p.id, None))
                continue
            s = c.singularity(p.id)
            far = next(b for b in s.branches if b != p.point)
            j = comp_atom.get(far[0])
            sides.append(("atom", p.id, j) if j is not None else ("core", p.id, None))
        across.append(sides)
    return across


def _walk_link(start: int, entry_node: Optional[str], across, atoms: List[Atom]):
    """Follow atoms joined by nodes from ``start``; returns (atom order, nodes, exit)."""
    order, nodes = [start], []
    cur, came = start, entry_node
    while True:
        sides = [x for x in across[cur] if x[1] != came or x[0] == "mark"]
        if came is not None and len(sides) == len(across[cur]):
            sides = sides[1:]
        nxt = sides[0] if sides else None
        if nxt is None or nxt[0] != "atom" or nxt[2] in order:
            return order, nodes, nxt
        nodes.append(nxt[1])
        cur, came = nxt[2], nxt[1]
        order.append(cur)


def _type_710(c: CurveGraph, out: ClosedClassification) -> None:
    atoms = sorted(out.atoms, key=lambda a: a.comps)
    out.atoms = atoms
    across = _atom_graph(c, atoms)
    out.status = "closed"
    if out.core:
        out.type = "A"
        out.core_parts = _core_part_data(c, out.core)
        done = set()
        starts = []
        for i, sides in enumerate(across):
            for kind, nid, _ in sides:
                if kind == "core":
                    starts.append((nid, i))
        links = []
        for nid, i in sorted(starts):
            if i in done:
                continue
            order, nodes, exit_ = _walk_link(i, nid, across, atoms)
            done.update(order)
            two = exit_ is not None and exit_[0] == "core"
            ln = Link(atoms=[atoms[j].comps for j in order], nodes=[nid] + nodes + ([exit_[1]] if two else []),
                      atom_singularities=[atoms[j].singularity for j in order], two_ended=two)
            links.append(ln)
        # two-ended links first, then links ending in a marking
        out.links = sorted(links, key=lambda l: (not l.two_ended, l.atoms))
        return
    if c.n == 2:
        ends = [i for i, sides in enumerate(across) if any(k == "mark" for k, _, _ in sides)]
        if len(ends) == 1 and len(atoms) == 1:
            start = ends[0]
        elif len(ends) == 2:
            start = min(ends)
        else:
            out.status, out.reason = "undetermined", "no combinatorial type matches"
            return
        mark_id = next(nid for k, nid, _ in across[start] if k == "mark")
        order, nodes, _ = _walk_link(start, mark_id, across, atoms) if len(atoms) > 1 else ([start], [], None)
        if len(order) != len(atoms):
            out.status, out.reason = "undetermined", "atoms do not form one link"
            return
        out.type = "B"
        out.links = [Link(atoms=[atoms[j].comps for j in order], nodes=nodes,
                          atom_singularities=[atoms[j].singularity for j in order])]
        return
    if c.n == 0:
        if len(atoms) == 1:
            a = atoms[0]
            if a.cut:
                out.type = "C"
                out.links = [Link(atoms=[a.comps], nodes=[a.cut[0]],
                                  atom_singularities=[a.singularity], two_ended=True)]
                return
        else:
            order, nodes, exit_ = _walk_link(0, None, across, atoms)
            if len(order) == len(atoms) and exit_ is not None and exit_[0] == "atom" and exit_[2] == 0:
                out.type = "C"
                # q_0 joins the last atom back to the first
                out.links = [Link(atoms=[atoms[j].comps for j in order], nodes=[exit_[1]] + nodes,
                                  atom_singularities=[atoms[j].singularity for j in order],
                                  two_ended=True)]
                return
    out.status, out.reason = "undetermined", "no combinatorial type matches"


def _rosary_index(c: CurveGraph) -> Dict[str, dict]:
    """Length-3 A1/A1 rosaries of c keyed by each end component."""
    opened, _ = _a1_rosaries(c)
    idx = {}
    for run in opened:
        if len(run["components"]) == 3:
            idx[run["components"][0]] = run
            idx[run["components"][-1]] = run
    return idx


def _end_port(c: CurveGraph, comp: str, links: set) -> List[Tuple[str, str]]:
    """Free special points of an end component: ("mark", id) or ("node", id)."""
    out = []
    for s in c.singularities:
        for b in s.branches:
            if b[0] == comp and s.id not in links:
                out.append(("node", s.id))
    out += [("mark", m.id) for m in c.markings_on(comp)]
    return out


def _type_23(c: CurveGraph, out: ClosedClassification) -> None:
    atoms = sorted(out.atoms, key=lambda a: a.comps)
    out.atoms = atoms
    ros = _rosary_index(c)
    comp_atom = {a.comps[0]: a for a in atoms}
    links: List[Link] = []
    meets_atom: Dict[str, str] = {}
    for a in atoms:
        ln = Link(atoms=[a.comps], atom_singularities=[a.singularity])
        port = a.ports[0]
        used = set(a.comps)
        tail_end = None  # what the link starts from
        nodes_rev = []
        rosaries_rev, tacs_rev = [], []
        cur_port = port
        while True:
            if cur_port.kind == "mark":
                tail_end = ("mark", cur_port.id)
                break
            s = c.singularity(cur_port.id)
            far = next(b for b in s.branches if b != cur_port.point)
            run = ros.get(far[0])
            if far[0] in comp_atom:
                tail_end = ("atom", s.id, comp_atom[far[0]])
                break
            if run is None or set(run["components"]) & used:
                tail_end = ("core", s.id)
                break
            comps = run["components"]
            if comps[0] != far[0]:
                comps = list(reversed(comps))
            # comps now runs from the node just crossed toward the far end
            nodes_rev.append(s.id)
            rosaries_rev.append(list(reversed(comps)))
            tacs_rev.append(_ordered_tacnodes(c, list(reversed(comps))))
            used |= set(comps)
            free = _end_port(c, comps[-1], set(run["tacnodes"]))
            if len(free) != 1:
                tail_end = ("core", None)
                break
            kind, fid = free[0]
            if kind == "mark":
                tail_end = ("mark", fid)
                break
            cur_port = st.Port("sing", fid, 1, next(b for b in c.singularity(fid).branches
                                                     if b[0] == comps[-1]))
        ln.rosaries = list(reversed(rosaries_rev))
        ln.rosary_tacnodes = list(reversed(tacs_rev))
        if tail_end[0] == "core":
            ln.nodes = ([tail_end[1]] if tail_end[1] else []) + list(reversed(nodes_rev))
        elif tail_end[0] == "mark":
            ln.nodes = list(reversed(nodes_rev))
        else:
            meets_atom[a.comps[0]] = tail_end[2].comps[0]
            ln.nodes = [tail_end[1]] + list(reversed(nodes_rev))
        ln.two_ended = tail_end[0] == "core"
        links.append((ln, tail_end))
    in_links = {x for ln, _ in links for x in [y for a in ln.atoms for y in a]
                + [y for r in ln.rosaries for y in r]}
    kprime = [x for x in c.component_ids if x not in in_links]
    out.secondary_core = kprime
    out.status = "closed"
    if kprime:
        if any(te[0] != "core" for _, te in links):
            out.status, out.reason = "undetermined", "link not attached to the secondary core"
            return
        out.type = "A"
        out.links = [ln for ln, _ in links]
        out.core_parts = _core_part_data(c, kprime)
        opened = []
        for part in _parts(c, kprime):
            opened += _a1_rosaries(part)[0]
        out.core_rosaries = len(opened)
        return
    if len(links) == 1 and links[0][1][0] == "mark" and c.n == 1:
        out.type = "B"
        out.links = [links[0][0]]
        return
    if len(links) == 2 and all(te[0] == "atom" for _, te in links) and c.n == 0:
        out.type = "C"
        first = min(links, key=lambda x: x[0].atoms[0])[0]
        other = max(links, key=lambda x: x[0].atoms[0])[0]
        # E_0 is ``other``'s atom at the start, the link of ``first`` ends at E_l
        first.atoms = [other.atoms[0], first.atoms[0]]
        first.atom_singularities = [other.atom_singularities[0], first.atom_singularities[0]]
        out.links = [first]
        return
    out.status, out.reason = "undetermined", "no combinatorial type matches"


def _ordered_tacnodes(c: CurveGraph, comps: List[str]) -> List[str]:
    out = []
    for x, y in zip(comps, comps[1:]):
        s = next(s for s in c.singularities if s.k == 3 and set(s.components) == {x, y})
        out.append(s.id)
    return out

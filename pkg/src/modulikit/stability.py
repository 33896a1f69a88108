"""Alpha-stability of pointed curves with A_1..A_4 singularities.

Forbidden subcurves are searched as *pieces*: a set of components together
with a set of internal singularities that the gluing morphism separates.
The points where a piece meets the rest of the curve (or a marking, or
the other branch of a separated singularity) are its ports. Tails have one
port, bridges two; chains string bridges together along tacnodes.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

from .curve_model import CurveGraph, Point, require_valid
from .errors import OutOfRange
from .rational import parse_rational

EPS_TOKEN = "2/3-eps"


class AlphaRegime(Enum):
    OPEN_911_1 = 6
    AT_911 = 5
    OPEN_710_911 = 4
    AT_710 = 3
    OPEN_23_710 = 2
    AT_23 = 1
    OPEN_23MINUS_23 = 0

    # Comparison follows alpha: a larger value means a larger alpha.
    def __lt__(self, other):
        return self.value < other.value

    def __le__(self, other):
        return self.value <= other.value

    def __gt__(self, other):
        return self.value > other.value

    def __ge__(self, other):
        return self.value >= other.value


R = AlphaRegime
ALL_REGIMES = sorted(R, key=lambda r: -r.value)


@dataclass(frozen=True)
class RegimeRules:
    allowed: FrozenSet[int]
    tails: FrozenSet[int] = frozenset()
    chains: FrozenSet[Tuple[int, int]] = frozenset()
    weierstrass: FrozenSet[int] = frozenset()


_AT23_TAILS = frozenset({1, 3, 4})
_AT23_CHAINS = frozenset({(1, 1), (1, 4), (4, 4)})

RULES: Dict[AlphaRegime, RegimeRules] = {
    R.OPEN_911_1: RegimeRules(frozenset({1})),
    R.AT_911: RegimeRules(frozenset({1, 2})),
    R.OPEN_710_911: RegimeRules(frozenset({1, 2}), frozenset({1})),
    R.AT_710: RegimeRules(frozenset({1, 2, 3}), frozenset({1, 3})),
    R.OPEN_23_710: RegimeRules(frozenset({1, 2, 3}), frozenset({1, 3}), frozenset({(1, 1)})),
    R.AT_23: RegimeRules(frozenset({1, 2, 3, 4}), _AT23_TAILS, _AT23_CHAINS),
    R.OPEN_23MINUS_23: RegimeRules(frozenset({1, 2, 3, 4}), _AT23_TAILS, _AT23_CHAINS,
                                   frozenset({1})),
}

CRITICAL = {"9/11": R.AT_911, "7/10": R.AT_710, "2/3": R.AT_23}
# The open regime just above each critical value.
ABOVE = {"9/11": R.OPEN_911_1, "7/10": R.OPEN_710_911, "2/3": R.OPEN_23_710}
CRITICAL_K = {"9/11": 2, "7/10": 3, "2/3": 4}


def regime_of(alpha: Union[str, Fraction, int]) -> AlphaRegime:
    """The regime containing alpha; 2/3 itself is AT_23, below it only the ``2/3-eps`` token."""
    if isinstance(alpha, str):
        if alpha.strip().replace(" ", "") in (EPS_TOKEN, "2/3-ε"):
            return R.OPEN_23MINUS_23
        alpha = parse_rational(alpha)
    a = Fraction(alpha)
    if a > 1 or a < Fraction(2, 3):
        raise OutOfRange(f"alpha {a} outside [2/3, 1]; use '{EPS_TOKEN}' for the last regime")
    if a > Fraction(9, 11):
        return R.OPEN_911_1
    if a == Fraction(9, 11):
        return R.AT_911
    if a > Fraction(7, 10):
        return R.OPEN_710_911
    if a == Fraction(7, 10):
        return R.AT_710
    if a > Fraction(2, 3):
        return R.OPEN_23_710
    return R.AT_23


def parse_regime(text: str) -> AlphaRegime:
    """Accept a regime tag, a rational, or the epsilon token."""
    if text in R.__members__:
        return R[text]
    return regime_of(text)


# ports and pieces

@dataclass(frozen=True)
class Port:
    kind: str  # "mark" or "sing"
    id: str
    k: int
    point: Point


@dataclass(frozen=True)
class Piece:
    comps: FrozenSet[str]
    cut: FrozenSet[str]
    ports: Tuple[Port, ...]
    genus: int

    def witness(self) -> List[str]:
        return sorted(self.comps | self.cut)


def _branch_mult(k: int) -> int:
    return (k + 1) // 2 if k % 2 else k


def component_degrees(c: CurveGraph) -> Dict[str, int]:
    """Degree of the log dualizing sheaf on each component's normalization."""
    deg = {x.id: 2 * x.genus - 2 for x in c.components}
    for s in c.singularities:
        for comp, _ in s.branches:
            deg[comp] += _branch_mult(s.k)
    for m in c.marked_points:
        deg[m.component] += 1
    return deg


def omega_ample(c: CurveGraph) -> bool:
    require_valid(c)
    return all(d > 0 for d in component_degrees(c).values())


def _ports(c: CurveGraph, comps: FrozenSet[str], cut: FrozenSet[str]) -> Tuple[Port, ...]:
    out: List[Port] = []
    for m in c.marked_points:
        if m.component in comps:
            out.append(Port("mark", m.id, 1, m.where))
    for s in c.singularities:
        inside = [b for b in s.branches if b[0] in comps]
        if not inside:
            continue
        if s.id in cut or len(inside) < len(s.branches):
            out.extend(Port("sing", s.id, s.k, b) for b in inside)
    return tuple(sorted(out, key=lambda p: (p.kind, p.id, p.point)))


def _piece_genus(c: CurveGraph, comps: FrozenSet[str], cut: FrozenSet[str]) -> int:
    internal = [s for s in c.singularities
                if s.id not in cut and all(b[0] in comps for b in s.branches)]
    # callers only build connected pieces
    return (sum(c.component(x).genus for x in comps)
            + sum(s.delta for s in internal) - len(comps) + 1)


def _irreducible_pieces(c: CurveGraph) -> List[Piece]:
    out = []
    for comp in c.components:
        inner = [s for s in c.singularities_on(comp.id) if s.inner]
        for size in range(0, len(inner) + 1):
            for cut in combinations(inner, size):
                cut_ids = frozenset(s.id for s in cut)
                comps = frozenset({comp.id})
                out.append(Piece(comps, cut_ids, _ports(c, comps, cut_ids),
                                 _piece_genus(c, comps, cut_ids)))
    return out


def _smooth_rational(c: CurveGraph, cid: str) -> bool:
    return c.component(cid).genus == 0 and not any(s.inner for s in c.singularities_on(cid))


def _two_rational_bridges(c: CurveGraph) -> List[Piece]:
    out = []
    ids = [x.id for x in c.components if _smooth_rational(c, x.id)]
    for x, y in combinations(ids, 2):
        joins = [s for s in c.singularities if set(s.components) == {x, y}]
        for size in range(0, len(joins) + 1):
            for cut in combinations(joins, size):
                kept = sorted(s.k for s in joins if s not in cut)
                if kept not in ([1, 1], [3]):
                    continue
                cut_ids = frozenset(s.id for s in cut)
                comps = frozenset({x, y})
                ports = _ports(c, comps, cut_ids)
                if len(ports) != 2 or {p.point[0] for p in ports} != {x, y}:
                    continue
                out.append(Piece(comps, cut_ids, ports, 1))
    return out


def _tail_ok(c: CurveGraph, p: Piece) -> bool:
    # A separated unibranch singularity can serve as the attaching point only
    # when nothing else of the component leaves the piece.
    return all(c.singularity(s).k % 2 == 0 for s in p.cut) and len(p.cut) <= 1


def _bridge_ok(c: CurveGraph, p: Piece) -> bool:
    if len(p.comps) != 1:
        return True
    if not p.cut:
        return True
    if len(p.cut) != 1:
        return False
    s = c.singularity(next(iter(p.cut)))
    if s.k % 2:
        # both branches of one separated inner singularity form the two ports
        return all(q.id == s.id for q in p.ports)
    return True


def elliptic_tail_pieces(c: CurveGraph) -> List[Piece]:
    return [p for p in _irreducible_pieces(c)
            if p.genus == 1 and len(p.ports) == 1 and _tail_ok(c, p)]


def weierstrass_tail_pieces(c: CurveGraph) -> List[Piece]:
    out = []
    for p in _irreducible_pieces(c):
        if p.genus != 2 or len(p.ports) != 1 or not _tail_ok(c, p):
            continue
        (port,) = p.ports
        comp = c.component(port.point[0])
        if port.point[1] in comp.weierstrass:
            out.append(p)
    return out


def elliptic_bridge_pieces(c: CurveGraph) -> List[Piece]:
    out = [p for p in _irreducible_pieces(c)
           if p.genus == 1 and len(p.ports) == 2 and _bridge_ok(c, p)]
    return out + _two_rational_bridges(c)


@dataclass(frozen=True)
class Chain:
    links: Tuple[Piece, ...]
    ends: Tuple[Port, ...]
    joins: Tuple[str, ...]

    @property
    def attaching(self) -> Tuple[int, ...]:
        return tuple(sorted(p.k for p in self.ends))

    def witness(self) -> List[str]:
        ids = set(self.joins)
        for p in self.links:
            ids |= p.comps | p.cut
        return sorted(ids)

    def key(self):
        return (frozenset((p.comps, p.cut) for p in self.links),
                frozenset(self.joins), frozenset(self.ends))


def _chains(c: CurveGraph, bridges: List[Piece], tails: List[Piece], max_len: int,
            weierstrass: bool) -> List[Chain]:
    """Bridges joined end to end along tacnodes; optionally capped by a tail."""
    found: Dict[tuple, Chain] = {}

    def other_side(port: Port, current: Piece) -> List[Tuple[Piece, Port]]:
        # Pieces across the tacnode at this port, entering at the other branch.
        if port.kind != "sing" or port.k != 3 or port.id in current.cut:
            return []
        s = c.singularity(port.id)
        far = next(b for b in s.branches if b != port.point)
        out = []
        for q in bridges + tails:
            for qp in q.ports:
                if qp.kind == "sing" and qp.id == s.id and qp.point == far:
                    out.append((q, qp))
        return out

    def extend(links, used_comps, joins, start: Port, exit_port: Port):
        if not weierstrass:
            ch = Chain(tuple(links), (start, exit_port), tuple(joins))
            found.setdefault(ch.key(), ch)
        if len(links) >= max_len:
            return
        for q, entry in other_side(exit_port, links[-1]):
            if q.comps & used_comps or exit_port.id in joins:
                continue
            rest = [p for p in q.ports if p != entry]
            if q in tails:
                if weierstrass and not rest:
                    ch = Chain(tuple(links) + (q,), (start,), tuple(joins) + (exit_port.id,))
                    found.setdefault(ch.key(), ch)
                continue
            if len(rest) != 1:
                continue
            extend(links + [q], used_comps | q.comps, joins + [exit_port.id], start, rest[0])

    for b in bridges:
        for i, start in enumerate(b.ports):
            exit_port = b.ports[1 - i]
            extend([b], b.comps, [], start, exit_port)
    if weierstrass:
        for t in tails:
            ch = Chain((t,), t.ports, ())
            found.setdefault(ch.key(), ch)
    return sorted(found.values(), key=lambda ch: (len(ch.links), ch.witness(), ch.attaching))


def find_elliptic_tails(c: CurveGraph) -> List[dict]:
    require_valid(c)
    return [{"subcurve": p.witness(), "attaching_k": p.ports[0].k}
            for p in elliptic_tail_pieces(c)]


def find_elliptic_chain_objects(c: CurveGraph, max_len: Optional[int] = None) -> List[Chain]:
    require_valid(c)
    max_len = max_len or len(c.components)
    return _chains(c, elliptic_bridge_pieces(c), [], max_len, False)


def find_weierstrass_chain_objects(c: CurveGraph, max_len: Optional[int] = None) -> List[Chain]:
    require_valid(c)
    max_len = max_len or len(c.components)
    return _chains(c, elliptic_bridge_pieces(c), weierstrass_tail_pieces(c), max_len, True)


def _chain_json(ch: Chain) -> dict:
    return {"links": [p.witness() for p in ch.links], "length": len(ch.links),
            "attaching": list(ch.attaching)}


def find_elliptic_chains(c: CurveGraph, max_len: Optional[int] = None) -> List[dict]:
    return [_chain_json(ch) for ch in find_elliptic_chain_objects(c, max_len)]


def find_weierstrass_chains(c: CurveGraph, max_len: Optional[int] = None) -> List[dict]:
    return [_chain_json(ch) for ch in find_weierstrass_chain_objects(c, max_len)]


# verdicts

@dataclass(frozen=True)
class Violation:
    category: str
    witness: Tuple[str, ...]
    attaching: Tuple[int, ...] = ()

    def to_json(self) -> dict:
        return {"category": self.category, "witness": list(self.witness),
                "attaching": list(self.attaching)}


@dataclass(frozen=True)
class StabilityVerdict:
    regime: AlphaRegime
    violations: Tuple[Violation, ...]

    @property
    def stable(self) -> bool:
        return not self.violations

    def categories(self) -> List[str]:
        return sorted({v.category for v in self.violations})

    def to_json(self) -> dict:
        return {"stable": self.stable, "regime": self.regime.name,
                "violations": [v.to_json() for v in self.violations]}


def is_alpha_stable(c: CurveGraph, regime: AlphaRegime) -> StabilityVerdict:
    """Verdict with every violation: singularity kinds, ampleness, forbidden subcurves."""
    require_valid(c)
    rules = RULES[regime]
    found: List[Violation] = []
    for s in c.singularities:
        if s.k not in rules.allowed:
            found.append(Violation("DISALLOWED_SINGULARITY", (s.id,), (s.k,)))
    degs = component_degrees(c)
    bad = tuple(sorted(cid for cid, d in degs.items() if d <= 0))
    if bad:
        found.append(Violation("NOT_AMPLE", bad))
    if rules.tails:
        for p in elliptic_tail_pieces(c):
            k = p.ports[0].k
            if k in rules.tails:
                found.append(Violation("ELLIPTIC_TAIL", tuple(p.witness()), (k,)))
    if rules.chains:
        for ch in find_elliptic_chain_objects(c):
            if ch.attaching in rules.chains:
                found.append(Violation("ELLIPTIC_CHAIN", tuple(ch.witness()), ch.attaching))
    if rules.weierstrass:
        for ch in find_weierstrass_chain_objects(c):
            if ch.attaching[0] in rules.weierstrass:
                found.append(Violation("WEIERSTRASS_CHAIN", tuple(ch.witness()), ch.attaching))
    return StabilityVerdict(regime, tuple(found))


def stable_regimes(c: CurveGraph) -> List[AlphaRegime]:
    return [r for r in ALL_REGIMES if is_alpha_stable(c, r).stable]

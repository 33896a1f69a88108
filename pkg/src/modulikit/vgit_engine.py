"""VGIT chambers of a character-linearized diagonal torus action.

Two routes are implemented and kept independent:

* ``vgit_loci`` decides each support with the affine Hilbert-Mumford
  criterion, posed as an exact rational feasibility problem, and assembles
  the maximal unstable supports.
* ``monomial_ideals`` enumerates semi-invariant monomials up to a degree
  bound and reads the vanishing loci off their supports.

Loci are stored as antichains of vanishing sets: a piece ``{"s_0", "s_1"}``
stands for the coordinate subspace where s_0 and s_1 vanish.
"""

from __future__ import annotations

import json
import os
import threading
from fractions import Fraction
from math import lcm
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from . import exact_lp
from .errors import DimensionMismatch, TooLarge

DEFAULT_COORD_BOUND = 24
DEFAULT_DEGREE_BOUND = 20


@dataclass(frozen=True)
class Coordinate:
    name: str
    weight: Tuple[int, ...]


@dataclass(frozen=True)
class TorusAction:
    """Rank-``rank`` torus acting diagonally on named coordinates."""

    rank: int
    coordinates: Tuple[Coordinate, ...]
    character: Tuple[int, ...]

    def __post_init__(self):
        if len(self.character) != self.rank:
            raise DimensionMismatch("character length differs from rank")
        seen = set()
        for c in self.coordinates:
            if len(c.weight) != self.rank:
                raise DimensionMismatch(f"weight of {c.name} has wrong length")
            if c.name in seen:
                raise DimensionMismatch(f"duplicate coordinate {c.name}")
            seen.add(c.name)

    @classmethod
    def build(cls, rank: int, coords: Iterable[Tuple[str, Sequence[int]]], character: Sequence[int]):
        return cls(
            rank,
            tuple(Coordinate(n, tuple(int(x) for x in w)) for n, w in coords),
            tuple(int(x) for x in character),
        )

    @property
    def names(self) -> List[str]:
        return [c.name for c in self.coordinates]

    def weight_of(self, name: str) -> Tuple[int, ...]:
        for c in self.coordinates:
            if c.name == name:
                return c.weight
        raise KeyError(name)

    def negated(self) -> "TorusAction":
        return TorusAction(self.rank, self.coordinates, tuple(-x for x in self.character))

    def restrict(self, drop: Iterable[str]) -> "TorusAction":
        """Action on the coordinate subspace where ``drop`` vanish."""
        d = set(drop)
        return TorusAction(self.rank, tuple(c for c in self.coordinates if c.name not in d), self.character)

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "coordinates": [{"name": c.name, "weight": list(c.weight)} for c in self.coordinates],
            "character": list(self.character),
        }

    @classmethod
    def from_json(cls, data: dict) -> "TorusAction":
        try:
            rank = int(data["rank"])
            coords = [(str(c["name"]), c["weight"]) for c in data["coordinates"]]
            return cls.build(rank, coords, data["character"])
        except (KeyError, TypeError, ValueError) as exc:
            raise DimensionMismatch(f"malformed torus action: {exc}") from exc


def product_action(a1: TorusAction, a2: TorusAction) -> TorusAction:
    """Diagonal action of the product torus on the product space."""
    z1, z2 = (0,) * a1.rank, (0,) * a2.rank
    coords = [Coordinate(c.name, c.weight + z2) for c in a1.coordinates]
    coords += [Coordinate(c.name, z1 + c.weight) for c in a2.coordinates]
    return TorusAction(a1.rank + a2.rank, tuple(coords), a1.character + a2.character)


# ---------------------------------------------------------------- loci type


@dataclass(frozen=True)
class SupportUnion:
    """Finite union of coordinate subspaces, kept as a sorted antichain."""

    pieces: Tuple[Tuple[str, ...], ...] = ()

    @classmethod
    def of(cls, sets: Iterable[Iterable[str]]) -> "SupportUnion":
        fs = {frozenset(s) for s in sets}
        mins = [s for s in fs if not any(t < s for t in fs)]
        return cls(tuple(sorted((tuple(sorted(s)) for s in mins), key=lambda p: (len(p), p))))

    @property
    def whole_space(self) -> bool:
        return self.pieces == ((),)

    @property
    def empty(self) -> bool:
        return not self.pieces

    def sets(self) -> List[FrozenSet[str]]:
        return [frozenset(p) for p in self.pieces]

    def contains_support(self, nonzero: Iterable[str]) -> bool:
        """True if a point with this set of nonzero coordinates lies in the union."""
        nz = set(nonzero)
        return any(not (set(p) & nz) for p in self.pieces)

    def to_json(self) -> List[List[str]]:
        return [list(p) for p in self.pieces]


@dataclass(frozen=True)
class Loci:
    plus: SupportUnion
    minus: SupportUnion

    def to_json(self) -> dict:
        return {
            "plus": self.plus.to_json(),
            "minus": self.minus.to_json(),
            "whole_space": {"plus": self.plus.whole_space, "minus": self.minus.whole_space},
        }


def minimal_transversals(family: Sequence[FrozenSet[str]]) -> List[FrozenSet[str]]:
    """Minimal hitting sets of ``family`` (Berge's incremental scheme)."""
    trans: List[FrozenSet[str]] = [frozenset()]
    for f in sorted(family, key=lambda s: (len(s), sorted(s))):
        nxt = set()
        for t in trans:
            if t & f:
                nxt.add(t)
            else:
                for x in f:
                    nxt.add(t | {x})
        trans = [t for t in nxt if not any(u < t for u in nxt)]
    return sorted(trans, key=lambda s: (len(s), sorted(s)))


# --------------------------------------------------- Hilbert-Mumford route


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("MODULIKIT_THREADS", "1")))
    except ValueError:
        return 1


def hm_unstable(a: TorusAction, nonzero: Iterable[str], sign: str = "+", method: str = "auto") -> bool:
    """Affine Hilbert-Mumford test for a point with the given nonzero coordinates.

    Unstable for ``+`` iff some rational one-parameter subgroup pairs to at
    least 1 with the character while every nonzero coordinate has a
    nonnegative weight along it (so the limit at 0 exists). ``-`` flips the
    character inequality.
    """
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    nz = set(nonzero)
    unknown = nz - set(a.names)
    if unknown:
        raise DimensionMismatch(f"support names unknown coordinates: {sorted(unknown)}")
    chi = a.character if sign == "+" else tuple(-x for x in a.character)
    rows = [(chi, 1)]
    for c in a.coordinates:
        if c.name in nz and any(c.weight):
            rows.append((c.weight, 0))
    return exact_lp.feasible(rows, a.rank, method=method)


class _Oracle:
    """Memoized support test; safe to share across worker threads."""

    def __init__(self, a: TorusAction, sign: str):
        self.a, self.sign = a, sign
        self.memo: Dict[FrozenSet[str], bool] = {}
        self.lock = threading.Lock()

    def __call__(self, s: FrozenSet[str]) -> bool:
        with self.lock:
            if s in self.memo:
                return self.memo[s]
        v = hm_unstable(self.a, s, self.sign)
        with self.lock:
            self.memo[s] = v
        return v


def _maximal_unstable(names: Sequence[str], unstable, pool: Optional[ThreadPoolExecutor]) -> List[FrozenSet[str]]:
    """All maximal unstable supports, by extend-and-dualize.

    Unstable supports form a down-closed family. A support not below any
    known maximal one must contain a minimal transversal of their
    complements, so testing those transversals finds every missing maximum.
    """
    universe = frozenset(names)
    if not unstable(frozenset()):
        return []

    def extend(s: FrozenSet[str]) -> FrozenSet[str]:
        for n in names:
            if n not in s and unstable(s | {n}):
                s = s | {n}
        return s

    maxima = [extend(frozenset())]
    while True:
        cands = minimal_transversals([universe - u for u in maxima])
        if pool is not None and len(cands) > 1:
            flags = list(pool.map(unstable, cands))
        else:
            flags = []
            for t in cands:
                flags.append(unstable(t))
                if flags[-1]:
                    break
        hit = next((t for t, f in zip(cands, flags) if f), None)
        if hit is None:
            return maxima
        maxima.append(extend(hit))


def blocks(a: TorusAction) -> List[TorusAction]:
    """Split into independent factors (torus directions x coordinates).

    Zero-weight coordinates never constrain a one-parameter subgroup, so they
    are dropped. Torus directions that touch no coordinate but carry a
    nonzero character form their own (coordinate-free) block.
    """
    coords = [c for c in a.coordinates if any(c.weight)]
    parent = list(range(a.rank))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for c in coords:
        idx = [i for i, w in enumerate(c.weight) if w]
        for i in idx[1:]:
            parent[find(i)] = find(idx[0])
    groups: Dict[int, List[int]] = {}
    for i in range(a.rank):
        groups.setdefault(find(i), []).append(i)
    out = []
    for dims in groups.values():
        dset = set(dims)
        bc = [c for c in coords if any(c.weight[i] for i in dims)]
        chi = tuple(a.character[i] for i in dims)
        if not bc and not any(chi):
            continue
        out.append(TorusAction.build(len(dims), [(c.name, [c.weight[i] for i in dims]) for c in bc], chi))
        assert all(all(c.weight[i] == 0 for i in range(a.rank) if i not in dset) for c in bc)
    return out


def _side_locus(a: TorusAction, sign: str, pool) -> List[FrozenSet[str]]:
    oracle = _Oracle(a, sign)
    names = sorted(a.names)
    universe = frozenset(names)
    return [universe - u for u in _maximal_unstable(names, oracle, pool)]


def vgit_loci(a: TorusAction, coord_bound: int = DEFAULT_COORD_BOUND, split: bool = True) -> Loci:
    """V(I+) and V(I-) from the Hilbert-Mumford criterion.

    With ``split`` the action is first factored into independent blocks and
    the pieces of the factors are pooled, which is exact for diagonal
    products; ``split=False`` runs the enumeration on the whole space.
    """
    active = [c for c in a.coordinates if any(c.weight)]
    parts = blocks(a) if split else [a.restrict(c.name for c in a.coordinates if not any(c.weight))]
    for p in parts:
        if len(p.coordinates) > coord_bound:
            raise TooLarge(f"{len(p.coordinates)} active coordinates exceed bound {coord_bound}")
    if not split and len(active) > coord_bound:
        raise TooLarge(f"{len(active)} active coordinates exceed bound {coord_bound}")
    nthreads = _threads()
    pool = ThreadPoolExecutor(max_workers=nthreads) if nthreads > 1 else None
    try:
        out = {}
        for sign in ("+", "-"):
            pieces: List[FrozenSet[str]] = []
            for p in parts:
                pieces.extend(_side_locus(p, sign, pool))
            out[sign] = SupportUnion.of(pieces)
    finally:
        if pool is not None:
            pool.shutdown()
    return Loci(out["+"], out["-"])


# --------------------------------------------------------- monomial route


@dataclass
class MonomialIdeals:
    """Lowest-degree semi-invariant monomial on each minimal support."""

    plus_gens: List[Dict[str, int]] = field(default_factory=list)
    minus_gens: List[Dict[str, int]] = field(default_factory=list)

    def loci(self) -> Loci:
        return Loci(_locus_of(self.plus_gens), _locus_of(self.minus_gens))

    def to_json(self) -> dict:
        return {
            "plus_gens": [_mono_str(m) for m in self.plus_gens],
            "minus_gens": [_mono_str(m) for m in self.minus_gens],
        }


def _mono_str(m: Dict[str, int]) -> str:
    if not m:
        return "1"
    return "*".join(n if e == 1 else f"{n}^{e}" for n, e in sorted(m.items()))


def _locus_of(gens: List[Dict[str, int]]) -> SupportUnion:
    # V of a monomial ideal: minimal sets of coordinates meeting every
    # generator's support. No generators means the zero ideal.
    return SupportUnion.of(minimal_transversals([frozenset(g) for g in gens]))


def _ray_multiple(vec: Tuple[int, ...], chi: Tuple[int, ...]) -> Optional[int]:
    """The integer n with vec == -n * chi, if any (chi nonzero)."""
    n = None
    for v, c in zip(vec, chi):
        if c == 0:
            if v != 0:
                return None
            continue
        if (-v) % c:
            return None
        k = -v // c
        if n is None:
            n = k
        elif n != k:
            return None
    return n


def _support_witnesses(weights, chi, degree_bound):
    """Reachable weight sums using every given weight at least once.

    Returns a map ``sum -> (degree, exponents)`` keeping the lowest degree.
    """
    states = {tuple(0 for _ in chi): (0, ())}
    for w in weights:
        nxt = {}
        for s, (d, ex) in states.items():
            for e in range(1, degree_bound - d + 1):
                t = tuple(x + e * y for x, y in zip(s, w))
                cand = (d + e, ex + (e,))
                if t not in nxt or cand[0] < nxt[t][0]:
                    nxt[t] = cand
        states = nxt
        if not states:
            break
    return states


def monomial_ideals(a: TorusAction, degree_bound: int = DEFAULT_DEGREE_BOUND,
                    coord_bound: int = DEFAULT_COORD_BOUND) -> MonomialIdeals:
    """Semi-invariant monomials of total degree at most ``degree_bound``.

    A monomial x^e lies in A_n when sum(e_i w_i) = -n chi. Supports are
    visited by increasing size; a support that already contains a minimal
    one is skipped for that sign, so only minimal supports are reported,
    each with a lowest-degree monomial.
    """
    if degree_bound < 1:
        raise ValueError("degree bound must be positive")
    names = sorted(a.names)
    if len(names) > coord_bound:
        raise TooLarge(f"{len(names)} coordinates exceed bound {coord_bound}")
    chi = a.character
    out = MonomialIdeals()
    if not any(chi):
        # The constant 1 is a semi-invariant of every degree n.
        out.plus_gens.append({})
        out.minus_gens.append({})
        return out
    wmap = {n: a.weight_of(n) for n in names}
    found = {"+": [], "-": []}
    for k in range(0, min(len(names), degree_bound) + 1):
        for sub in combinations(names, k):
            s = frozenset(sub)
            need = [sg for sg in ("+", "-") if not any(f <= s for f in found[sg])]
            if not need:
                continue
            states = _support_witnesses([wmap[n] for n in sub], chi, degree_bound)
            best: Dict[str, Tuple[int, tuple]] = {}
            for vec, (d, ex) in states.items():
                n = _ray_multiple(vec, chi)
                if n is None or n == 0:
                    continue
                sg = "+" if n > 0 else "-"
                if sg in need and (sg not in best or d < best[sg][0]):
                    best[sg] = (d, ex)
            for sg, (d, ex) in best.items():
                found[sg].append(s)
                gens = out.plus_gens if sg == "+" else out.minus_gens
                gens.append(dict(zip(sub, ex)))
    return out


def _solve_exact(cols: List[Tuple[int, ...]], rhs: Tuple[int, ...]) -> Optional[List[Fraction]]:
    """Unique solution of sum(b_j cols_j) = rhs for independent columns, else None."""
    m, k = len(rhs), len(cols)
    aug = [[Fraction(cols[j][i]) for j in range(k)] + [Fraction(rhs[i])] for i in range(m)]
    piv_rows = []
    r = 0
    for c in range(k):
        p = next((i for i in range(r, m) if aug[i][c] != 0), None)
        if p is None:
            return None
        aug[r], aug[p] = aug[p], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        piv_rows.append(r)
        r += 1
    if any(aug[i][k] != 0 for i in range(r, m)):
        return None
    return [aug[i][k] for i in piv_rows]


def exact_minimal_generators(a: TorusAction) -> MonomialIdeals:
    """Semi-invariant monomials on every minimal support, with no degree cap.

    A minimal support carrying a semi-invariant has linearly independent
    weights, so the exponent ray is the unique solution of ``W_S b = -+chi``;
    clearing denominators gives the lowest-degree monomial. Used to tell
    a degree-bound miss from a genuine disagreement.
    """
    names = sorted(a.names)
    chi = a.character
    out = MonomialIdeals()
    if not any(chi):
        out.plus_gens.append({})
        out.minus_gens.append({})
        return out
    wmap = {n: a.weight_of(n) for n in names}
    for sg, target, gens in (("+", tuple(-c for c in chi), out.plus_gens),
                             ("-", tuple(chi), out.minus_gens)):
        found: List[FrozenSet[str]] = []
        for k in range(1, min(len(names), a.rank) + 1):
            for sub in combinations(names, k):
                s = frozenset(sub)
                if any(f <= s for f in found):
                    continue
                beta = _solve_exact([wmap[n] for n in sub], target)
                if beta is None or any(b <= 0 for b in beta):
                    continue
                den = 1
                for b in beta:
                    den = lcm(den, b.denominator)
                found.append(s)
                gens.append({n: int(b * den) for n, b in zip(sub, beta)})
    return out


def generator_degree(m: Dict[str, int]) -> int:
    return sum(m.values())


def oracle_agrees(a: TorusAction, degree_bound: int = DEFAULT_DEGREE_BOUND) -> Tuple[bool, Loci, Loci]:
    lp = vgit_loci(a)
    mono = monomial_ideals(a, degree_bound).loci()
    return (lp == mono, lp, mono)


def product_decomposition_check(a1: TorusAction, a2: TorusAction) -> bool:
    """Compare the product action's loci with the factorwise union.

    The unstable locus of a product is the union over factors of
    (unstable part of that factor) x (everything else), which in
    vanishing-set form is the pooled antichain of the factors' pieces.
    """
    if set(a1.names) & set(a2.names):
        raise DimensionMismatch("factor coordinate names overlap")
    prod = vgit_loci(product_action(a1, a2), split=False)
    l1, l2 = vgit_loci(a1, split=False), vgit_loci(a2, split=False)
    expect = Loci(
        SupportUnion.of(l1.plus.sets() + l2.plus.sets()),
        SupportUnion.of(l1.minus.sets() + l2.minus.sets()),
    )
    return prod == expect


def load_action(path: str) -> TorusAction:
    with open(path, encoding="utf-8") as fh:
        return TorusAction.from_json(json.load(fh))


@dataclass
class IdealReport:
    match: bool
    computed: Loci
    predicted: Loci
    # pieces present on one side only, per sign
    only_computed: Dict[str, List[List[str]]]
    only_predicted: Dict[str, List[List[str]]]

    def to_json(self) -> dict:
        return {
            "match": self.match,
            "computed": self.computed.to_json(),
            "predicted": self.predicted.to_json(),
            "only_computed": self.only_computed,
            "only_predicted": self.only_predicted,
        }


def compare_loci(computed: Loci, predicted: Loci) -> IdealReport:
    oc, op = {}, {}
    for key in ("plus", "minus"):
        a, b = set(getattr(computed, key).pieces), set(getattr(predicted, key).pieces)
        oc[key] = [list(p) for p in sorted(a - b)]
        op[key] = [list(p) for p in sorted(b - a)]
    return IdealReport(computed == predicted, computed, predicted, oc, op)


def verify_paper_ideals(cls, critical: Optional[str] = None, predicted=None,
                        coord_bound: int = 40) -> IdealReport:
    """Compare Hilbert-Mumford loci of the deformation action with the predicted ones.

    ``predicted`` overrides the predicted table (a dict with "plus" and
    "minus" SupportUnions), which is how a mismatch can be forced.
    """
    from . import deformation

    action = deformation.t1_weights(cls, critical)
    pred = predicted if predicted is not None else deformation.predicted_ideals(cls, critical)
    computed = vgit_loci(action, coord_bound=coord_bound)
    return compare_loci(computed, Loci(pred["plus"], pred["minus"]))

"""Torus weights on first-order deformations of closed curves, the character
chi_star, its comparison with delta - psi, and the predicted chamber loci."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .closed_points import ClosedClassification
from .errors import NotClosed, UnknownSubgroup, InvalidGraph
from .rational import parse_rational
from .vgit_engine import SupportUnion, TorusAction

# Multiple N with chi_{delta-psi} = chi_star^N, and the pairing of lambda with
# an atom one-parameter subgroup. The 9/11 and 7/10 lambda pairings are taken
# from outside this toolkit; the 2/3 one is 4.
CONSTANTS = {
    "9/11": {"N": 11, "lambda_atom": 1, "lambda_external": True},
    "7/10": {"N": 10, "lambda_atom": 1, "lambda_external": True},
    "2/3": {"N": 39, "lambda_atom": 4, "lambda_external": False},
}

SUBGROUPS = ("atom_1ps", "rosary_1ps")

# weights of the singularity coordinates of each atom on its own factor
ATOM_S_WEIGHTS = {"9/11": (-6, -4), "7/10": (-4, -3, -2), "2/3": (-10, -8, -6, -4)}
ROSARY_R = (-4, -3, -2)
ROSARY_R_PRIME = (4, 3, 2)


class _Builder:
    """Accumulates torus factors and coordinates with sparse weight vectors."""

    def __init__(self):
        self.factors: List[Tuple[str, str]] = []  # (kind, label)
        self.coords: List[Tuple[str, Dict[int, int]]] = []

    def factor(self, kind: str, label: str) -> int:
        self.factors.append((kind, label))
        return len(self.factors) - 1

    def coord(self, name: str, w: Dict[int, int]) -> None:
        self.coords.append((name, w))

    def action(self) -> TorusAction:
        rank = len(self.factors)
        coords = []
        for name, w in self.coords:
            vec = [0] * rank
            for i, x in w.items():
                vec[i] += x
            coords.append((name, vec))
        chi = [1 if kind == "atom" else 0 for kind, _ in self.factors]
        return TorusAction.build(rank, coords, chi)


@dataclass
class T1Action:
    """The diagonal action on first-order deformations, with factor labels."""

    action: TorusAction
    factors: List[Tuple[str, str]]

    def to_json(self) -> dict:
        out = self.action.to_json()
        out["factors"] = [{"kind": k, "label": l} for k, l in self.factors]
        return out


def _require_closed(cls: ClosedClassification) -> None:
    if not cls.closed:
        raise NotClosed(f"curve is not closed at {cls.critical}: {cls.status} {cls.reason}".strip())


def _atom_s(b: _Builder, prefix: str, f: int, critical: str) -> None:
    for k, w in enumerate(ATOM_S_WEIGHTS[critical]):
        b.coord(f"s_{prefix}{k}", {f: w})


def _rosary(b: _Builder, idx: str, f: int) -> None:
    for k, w in enumerate(ROSARY_R):
        b.coord(f"r_{idx}_{k}", {f: w})
    for k, w in enumerate(ROSARY_R_PRIME):
        b.coord(f"r'_{idx}_{k}", {f: w})


def _core_block(b: _Builder, cls: ClosedClassification) -> None:
    for _ in range(cls.core_rosaries):
        b.factor("rosary", "secondary core")
    for p, (g, n, aut) in enumerate(cls.core_parts):
        for x in range(3 * g - 3 + n + aut):
            b.coord(f"k_{p}_{x}", {})


def _label(comps) -> str:
    return "+".join(comps)


def _t1_911(b: _Builder, cls: ClosedClassification) -> None:
    if cls.type == "C":
        f = b.factor("atom", _label(cls.links[0].atoms[0]))
        _atom_s(b, "", f, "9/11")
        return
    if cls.type == "B":
        ln = cls.links[0]
        fs = [b.factor("atom", _label(a)) for a in ln.atoms]
        for i, f in enumerate(fs, start=1):
            _atom_s(b, f"{i}_", f, "9/11")
        b.coord("n", {fs[0]: 1, fs[1]: 1})
        return
    for i, ln in enumerate(cls.links, start=1):
        f = b.factor("atom", _label(ln.atoms[0]))
        _atom_s(b, f"{i}_", f, "9/11")
        b.coord(f"n_{i}", {f: 1})
    _core_block(b, cls)


def _t1_710(b: _Builder, cls: ClosedClassification) -> None:
    if cls.type in ("B", "C"):
        ln = cls.links[0]
        fs = [b.factor("atom", _label(a)) for a in ln.atoms]
        for i, f in enumerate(fs, start=1):
            _atom_s(b, f"{i}_", f, "7/10")
        g = len(fs) if cls.type == "B" else len(fs) + 1
        if cls.type == "B":
            for i in range(1, g):
                b.coord(f"n_{i}", {fs[i - 1]: 1, fs[i]: 1})
        else:
            # n_i joins atoms i and i+1, with atom 0 read as atom g-1
            for i in range(0, g - 1):
                w: Dict[int, int] = {}
                for j in (i, i + 1):
                    j = j if j else g - 1
                    w[fs[j - 1]] = w.get(fs[j - 1], 0) + 1
                b.coord(f"n_{i}", w)
        return
    for i, ln in enumerate(cls.links, start=1):
        fs = [b.factor("atom", _label(a)) for a in ln.atoms]
        ell = len(fs)
        for j, f in enumerate(fs, start=1):
            _atom_s(b, f"{i}_{j}_", f, "7/10")
        b.coord(f"n_{i}_0", {fs[0]: 1})
        for j in range(1, ell):
            b.coord(f"n_{i}_{j}", {fs[j - 1]: 1, fs[j]: 1})
        if ln.two_ended:
            b.coord(f"n_{i}_{ell}", {fs[-1]: 1})
    _core_block(b, cls)


def _t1_23_link(b: _Builder, ln, pre: str, with_first_node: bool) -> int:
    """Rosary factors t_1..t_{l-1} then the atom factor t_l; returns the latter."""
    fr = [b.factor("rosary", _label(r)) for r in ln.rosaries]
    fa = b.factor("atom", _label(ln.atoms[-1]))
    chain = fr + [fa]
    for j, f in enumerate(fr, start=1):
        _rosary(b, f"{pre}{j}", f)
    _atom_s(b, pre, fa, "2/3")
    b.coord(f"c{'_' + pre[:-1] if pre else ''}", {fa: 1})
    if with_first_node:
        b.coord(f"n_{pre}0", {chain[0]: 1})
    for j in range(1, len(chain)):
        b.coord(f"n_{pre}{j}", {chain[j - 1]: -1, chain[j]: 1})
    return fa


def _t1_23(b: _Builder, cls: ClosedClassification) -> None:
    if cls.type == "A":
        for i, ln in enumerate(cls.links, start=1):
            _t1_23_link(b, ln, f"{i}_", True)
        _core_block(b, cls)
        return
    ln = cls.links[0]
    if cls.type == "B":
        _t1_23_link(b, ln, "", False)
        return
    ell = len(ln.rosaries) + 1
    f0 = b.factor("atom", _label(ln.atoms[0]))
    fr = [b.factor("rosary", _label(r)) for r in ln.rosaries]
    fl = b.factor("atom", _label(ln.atoms[-1]))
    chain = [f0] + fr + [fl]
    _atom_s(b, "0_", f0, "2/3")
    b.coord("c_0", {f0: 1})
    for j, f in enumerate(fr, start=1):
        _rosary(b, str(j), f)
    _atom_s(b, f"{ell}_", fl, "2/3")
    b.coord(f"c_{ell}", {fl: 1})
    b.coord("n_0", {f0: 1, chain[1]: 1})
    for i in range(1, ell):
        b.coord(f"n_{i}", {chain[i]: -1, chain[i + 1]: 1})


def t1_weights_labeled(cls: ClosedClassification) -> T1Action:
    _require_closed(cls)
    b = _Builder()
    {"9/11": _t1_911, "7/10": _t1_710, "2/3": _t1_23}[cls.critical](b, cls)
    return T1Action(b.action(), list(b.factors))


def t1_weights(cls: ClosedClassification, critical: Optional[str] = None) -> TorusAction:
    """Diagonal torus action on first-order deformations; character chi_star."""
    if critical is not None and critical != cls.critical:
        raise InvalidGraph(f"classification is for {cls.critical}, not {critical}")
    return t1_weights_labeled(cls).action


def chi_star(cls: ClosedClassification) -> Tuple[int, ...]:
    return t1_weights(cls).character


def chi_delta_minus_psi(cls: ClosedClassification) -> Tuple[int, ...]:
    """Character of delta - psi on the automorphism torus: N times chi_star."""
    n = CONSTANTS[cls.critical]["N"]
    return tuple(n * x for x in chi_star(cls))


def pair_character(coeff_lambda, coeff_delta_minus_psi, subgroup: str, critical: str = "2/3") -> Fraction:
    """Pairing of a(lambda) + b(delta - psi) with an atom or rosary subgroup."""
    if subgroup not in SUBGROUPS:
        raise UnknownSubgroup(f"unknown subgroup {subgroup!r}; expected one of {SUBGROUPS}")
    if critical not in CONSTANTS:
        raise InvalidGraph(f"unknown critical value {critical!r}")
    if subgroup == "rosary_1ps":
        return Fraction(0)
    k = CONSTANTS[critical]
    return parse_rational(coeff_lambda) * k["lambda_atom"] + parse_rational(coeff_delta_minus_psi) * k["N"]


def log_canonical_coefficients(alpha_c) -> Tuple[Fraction, Fraction]:
    """(lambda, delta - psi) coefficients of 13 lambda + (alpha - 2)(delta - psi)."""
    return Fraction(13), parse_rational(alpha_c) - 2


# ------------------------------------------------------------ standalone links


def atom_action(critical: str) -> TorusAction:
    """The atom's own G_m on its singularity (and, at 2/3, crimping) coordinates."""
    coords = [(f"s_{k}", [w]) for k, w in enumerate(ATOM_S_WEIGHTS[critical])]
    if critical == "2/3":
        coords.append(("c", [1]))
    return TorusAction.build(1, coords, [1])


def link_action_710(length: int) -> TorusAction:
    """A 7/10-link of ``length`` atoms attached at both ends by nodes n_0, n_l."""
    if length < 1:
        raise InvalidGraph("link length must be positive")
    coords = []
    for j in range(length):
        for k, w in enumerate(ATOM_S_WEIGHTS["7/10"]):
            coords.append((f"s_{j + 1}_{k}", [w if x == j else 0 for x in range(length)]))
    for j in range(length + 1):
        coords.append((f"n_{j}", [1 if x in (j - 1, j) else 0 for x in range(length)]))
    return TorusAction.build(length, coords, [1] * length)


def link_action_23(length: int) -> TorusAction:
    """A 2/3-link: rosaries 1..l-1 then an atom, nodes n_0..n_{l-1}; character t_l."""
    if length < 1:
        raise InvalidGraph("link length must be positive")

    def e(i, w=1):
        return [w if x == i else 0 for x in range(length)]

    coords = []
    for j in range(1, length):
        for k, w in enumerate(ROSARY_R):
            coords.append((f"r_{j}_{k}", e(j - 1, w)))
        for k, w in enumerate(ROSARY_R_PRIME):
            coords.append((f"r'_{j}_{k}", e(j - 1, w)))
    for k, w in enumerate(ATOM_S_WEIGHTS["2/3"]):
        coords.append((f"s_{k}", e(length - 1, w)))
    coords.append(("c", e(length - 1)))
    coords.append(("n_0", e(0)))
    for j in range(1, length):
        v = e(j)
        v[j - 1] = -1
        coords.append((f"n_{j}", v))
    return TorusAction.build(length, coords, e(length - 1))


# ------------------------------------------------------------ predicted loci


def _s(prefix: str, critical: str) -> List[str]:
    return [f"s_{prefix}{k}" for k in range(len(ATOM_S_WEIGHTS[critical]))]


def _r_prime(prefix: str, j: int) -> List[str]:
    return [f"r'_{prefix}{j}_{k}" for k in range(3)]


def _r(prefix: str, j: int) -> List[str]:
    return [f"r_{prefix}{j}_{k}" for k in range(3)]


def _j_pieces(nodes: Dict[int, str], s_of, mu_max: int, nu_range, wrap: Optional[int] = None):
    """Vanishing sets (n_nu, s_{nu+2}, ..., s_{nu+2mu-2}, n_{nu+2mu-1}).

    ``nodes`` maps a node index to its name, or lacks it when that node is
    absent (a marking), in which case it is dropped from the piece.
    """
    out = []
    for mu in range(1, mu_max + 1):
        for nu in nu_range(mu):
            piece = set()
            for idx in (nu, nu + 2 * mu - 1):
                idx = idx % wrap if wrap else idx
                if idx in nodes:
                    piece.add(nodes[idx])
            for a in range(nu + 2, nu + 2 * mu - 1, 2):
                a = a % wrap if wrap else a
                if wrap and a == 0:
                    a = wrap
                piece.update(s_of(a))
            out.append(piece)
    return out


def _ceil_half(x: int) -> int:
    return (x + 1) // 2


def link_710_minus(length: int, two_ended: bool = True, prefix: str = "",
                   node_prefix: Optional[str] = None) -> List[set]:
    """Union of V(J_{mu,nu}) for a link of 7/10-atoms; a missing end node is dropped."""
    npre = prefix if node_prefix is None else node_prefix
    nodes = {j: f"n_{npre}{j}" for j in range(length + (1 if two_ended else 0))}
    return _j_pieces(nodes, lambda a: _s(f"{prefix}{a}_", "7/10"), _ceil_half(length),
                     lambda mu: range(0, length - 2 * mu + 2))


def link_23_minus(length: int, prefix: str = "", with_first_node: bool = True) -> List[set]:
    """Union over j of V(n_j, r'_{j+1}, ..., r'_{l-1}, c)."""
    c = f"c_{prefix[:-1]}" if prefix else "c"
    out = []
    for j in range(0 if with_first_node else 1, length):
        piece = {f"n_{prefix}{j}", c}
        for x in range(j + 1, length):
            piece.update(_r_prime(prefix, x))
        out.append(piece)
    if not with_first_node:
        piece = {c}
        for x in range(1, length):
            piece.update(_r_prime(prefix, x))
        out.append(piece)
    return out


def predicted_ideals(cls: ClosedClassification, critical: Optional[str] = None):
    """Predicted V(I+) and V(I-) as SupportUnions, keyed "plus" and "minus"."""
    _require_closed(cls)
    crit = cls.critical
    t = cls.type
    plus: List[set] = []
    minus: List[set] = []
    if crit == "9/11":
        if t == "A":
            for i in range(1, len(cls.links) + 1):
                plus.append(set(_s(f"{i}_", crit)))
                minus.append({f"n_{i}"})
        elif t == "B":
            plus += [set(_s("1_", crit)), set(_s("2_", crit))]
            minus.append({"n"})
        else:
            plus.append(set(_s("", crit)))
            minus.append(set())
    elif crit == "7/10":
        if t == "A":
            for i, ln in enumerate(cls.links, start=1):
                for j in range(1, ln.length + 1):
                    plus.append(set(_s(f"{i}_{j}_", crit)))
                minus += link_710_minus(ln.length, ln.two_ended, prefix=f"{i}_")
        elif t == "B":
            g = cls.links[0].length
            plus += [set(_s(f"{i}_", crit)) for i in range(1, g + 1)]
            nodes = {j: f"n_{j}" for j in range(1, g)}
            minus += _j_pieces(nodes, lambda a: _s(f"{a}_", crit), _ceil_half(g),
                               lambda mu: range(0, g - 2 * mu + 2))
        else:
            m = cls.links[0].length  # g - 1 atoms
            plus += [set(_s(f"{i}_", crit)) for i in range(1, m + 1)]
            nodes = {j: f"n_{j}" for j in range(m)}
            minus += _j_pieces(nodes, lambda a: _s(f"{a}_", crit), _ceil_half(m),
                               lambda mu: range(0, m), wrap=m)
    else:
        if t == "A":
            for i, ln in enumerate(cls.links, start=1):
                plus.append(set(_s(f"{i}_", crit)))
                minus += link_23_minus(ln.length, prefix=f"{i}_")
        elif t == "B":
            plus.append(set(_s("", crit)))
            minus += link_23_minus(cls.links[0].length, with_first_node=False)
        else:
            ell = len(cls.links[0].rosaries) + 1
            plus += [set(_s("0_", crit)), set(_s(f"{ell}_", crit))]
            for i in range(ell):
                piece = {f"n_{i}", "c_0"}
                for x in range(1, i + 1):
                    piece.update(_r("", x))
                minus.append(piece)
                piece = {f"n_{i}", f"c_{ell}"}
                for x in range(i + 1, ell):
                    piece.update(_r_prime("", x))
                minus.append(piece)
    return {"plus": SupportUnion.of(plus), "minus": SupportUnion.of(minus)}

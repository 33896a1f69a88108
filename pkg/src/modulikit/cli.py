"""Command-line entry point: ``modulikit <group> <command> ...``.

Exit codes: 0 computed, 2 bad input, 3 the two chamber computations (or the
computed and predicted chambers) disagree.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional, Sequence

from . import catalog as cat
from . import closed_points as cp
from . import deformation as dfm
from . import divisor_calc as dc
from . import stability as st
from . import vgit_engine as vg
from .curve_model import load_curve, validate
from .errors import ModuliKitError
from .rational import fmt

EXIT_OK, EXIT_INPUT, EXIT_DISAGREE = 0, 2, 3


class InputError(Exception):
    pass


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _curve(path: str):
    c = load_curve(path)
    problems = validate(c)
    if problems:
        raise InputError("invalid curve: " + "; ".join(problems))
    return c


def _ints(text: Optional[str]) -> List[int]:
    if not text:
        return []
    try:
        out = [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise InputError(f"expected comma-separated integers, got {text!r}") from exc
    if any(x < 1 for x in out):
        raise InputError("lengths must be positive")
    return out


# ------------------------------------------------------------------ handlers


def cmd_stability_check(a) -> int:
    c = _curve(a.curve)
    r = st.regime_of(a.alpha)
    out = st.is_alpha_stable(c, r).to_json()
    _emit(out)
    return EXIT_OK


def cmd_closed_classify(a) -> int:
    c = _curve(a.curve)
    _emit(cp.classify_closed(c, a.critical).to_json())
    return EXIT_OK


def cmd_deform_weights(a) -> int:
    c = _curve(a.curve)
    cls = cp.classify_closed(c, a.critical)
    lab = dfm.t1_weights_labeled(cls)
    if a.json:
        _emit(lab.action.to_json())
        return EXIT_OK
    _emit({
        "action": lab.to_json(),
        "chi_star": list(lab.action.character),
        "chi_delta_minus_psi": list(dfm.chi_delta_minus_psi(cls)),
        "N": dfm.CONSTANTS[cls.critical]["N"],
        "classification": cls.to_json(),
    })
    return EXIT_OK


def cmd_vgit_chambers(a) -> int:
    act = vg.load_action(a.action)
    lp = vg.vgit_loci(act, coord_bound=a.coord_bound)
    mono = vg.monomial_ideals(act, a.degree_bound, coord_bound=max(a.coord_bound, len(act.names)))
    agree = lp == mono.loci()
    _emit({
        "lp": lp.to_json(),
        "monomial": mono.loci().to_json(),
        "generators": mono.to_json(),
        "degree_bound": a.degree_bound,
        "agree": agree,
    })
    if not agree:
        sys.stderr.write("chamber computations disagree\n")
        return EXIT_DISAGREE
    return EXIT_OK


def build_closed(critical: str, kind: str, links: Sequence[int], atoms: Optional[int], tails: Sequence[int],
                 core_genus: Optional[int] = None):
    """A closed curve of the requested type from the fixture builders."""
    if kind not in ("A", "B", "C"):
        raise InputError("type must be A, B or C")
    if critical == "9/11":
        if kind == "A":
            return cat.closed_911("A", atoms or 1, core_genus or 2)
        return cat.closed_911(kind)
    if critical == "7/10":
        if kind == "A":
            if not links and not tails:
                links = [1]
            return cat.closed_710("A", links=tuple(links), tails=tuple(tails), core_genus=core_genus or 2)
        n = links[0] if links else 1
        if kind == "B":
            return cat.closed_710("B", genus=n)
        return cat.closed_710("C", genus=n + 1)
    if critical == "2/3":
        ls = tuple(links) or (1,)
        if kind == "A":
            return cat.closed_23("A", links=ls, core_genus=core_genus or (2 if len(ls) == 1 else 3))
        return cat.closed_23(kind, links=ls[:1])
    raise InputError(f"unknown critical value {critical!r}")


def _read_predicted(path: str):
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    try:
        return {"plus": vg.SupportUnion.of(data["plus"]), "minus": vg.SupportUnion.of(data["minus"])}
    except (KeyError, TypeError) as exc:
        raise InputError(f"predicted table needs 'plus' and 'minus' lists: {exc}") from exc


def cmd_vgit_verify(a) -> int:
    if a.curve:
        c = _curve(a.curve)
    else:
        c = build_closed(a.critical, a.type, _ints(a.links), a.atoms, _ints(a.tails), a.core_genus)
    cls = cp.classify_closed(c, a.critical)
    pred = _read_predicted(a.predicted) if a.predicted else None
    rep = vg.verify_paper_ideals(cls, a.critical, predicted=pred)
    out = rep.to_json()
    out["type"] = cls.type
    _emit(out)
    if not rep.match:
        sys.stderr.write("computed chambers differ from the predicted ones\n")
        return EXIT_DISAGREE
    return EXIT_OK


def cmd_divisor_identity(a) -> int:
    names = sorted(dc.IDENTITIES) if a.all else [a.name]
    if not a.all and not a.name:
        raise InputError("give --name or --all")
    proofs = [dc.check_reduction_identity(n).to_json() for n in names]
    _emit(proofs if a.all else proofs[0])
    return EXIT_OK


def _params(items: Sequence[str]) -> dict:
    out = {}
    for it in items:
        if "=" not in it:
            raise InputError(f"parameter {it!r} is not key=value")
        k, v = it.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _int(p: dict, key: str, default=None) -> int:
    if key not in p:
        if default is None:
            raise InputError(f"missing parameter {key}")
        return default
    try:
        return int(p[key])
    except ValueError as exc:
        raise InputError(f"parameter {key} must be an integer") from exc


def cmd_divisor_coeff(a) -> int:
    p = _params(a.params or [])
    if a.kind == "ch":
        m = p.get("m", "inf")
        mval = None if m in ("inf", "infinity", "oo") else _int(p, "m")
        _emit({"kind": "ch", "g": _int(p, "g"), "m": m, "coefficient": fmt(dc.ch_coefficient(_int(p, "g"), mval))})
    elif a.kind == "keel":
        n = _int(p, "N")
        if "r" in p:
            _emit({"kind": "keel", "N": n, "r": _int(p, "r"), "coefficient": fmt(dc.keel_psi_coefficient(n, _int(p, "r")))})
        else:
            _emit({"kind": "keel", "N": n,
                   "coefficients": {str(r): fmt(dc.keel_psi_coefficient(n, r)) for r in range(2, n // 2 + 1)},
                   "relation_holds": dc.keel_relation_check(n)})
    elif a.kind == "inner":
        x, y, z = _int(p, "x"), _int(p, "y"), _int(p, "z")
        _emit({"kind": "inner", "x": x, "y": y, "z": z, "coefficient": dc.inner_sections_coeff(x, y, z)})
    else:
        kind = p.get("bound", "genus2")
        param = _int(p, "param", 2)
        b = dc.hodge_bound(kind, param)
        out = b.to_json()
        out["param"] = param
        out["determinant_check"] = dc.hodge_determinant_check(kind, param)
        _emit(out)
    return EXIT_OK


def cmd_catalog(a) -> int:
    table = cat.catalog()
    if a.action == "list":
        _emit(sorted(table))
        return EXIT_OK
    if not a.name:
        raise InputError("catalog emit needs a curve name")
    if a.name not in table:
        raise InputError(f"unknown catalog curve {a.name!r}")
    _emit(table[a.name]().to_json())
    return EXIT_OK


# ------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="modulikit", description=__doc__.splitlines()[0])
    top = ap.add_subparsers(dest="group", required=True)

    g = top.add_parser("stability").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("check", help="decide alpha-stability of a curve")
    p.add_argument("--curve", required=True)
    p.add_argument("--alpha", required=True, help="p/q in (2/3, 1] or 2/3-eps")
    p.set_defaults(func=cmd_stability_check)

    g = top.add_parser("closed").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("classify", help="closedness and combinatorial type at a critical value")
    p.add_argument("--curve", required=True)
    p.add_argument("--critical", required=True, choices=cp.CRITICAL_VALUES)
    p.set_defaults(func=cmd_closed_classify)

    g = top.add_parser("deform").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("weights", help="torus weights on first-order deformations")
    p.add_argument("--curve", required=True)
    p.add_argument("--critical", required=True, choices=cp.CRITICAL_VALUES)
    p.add_argument("--json", action="store_true", help="emit only the torus action file")
    p.set_defaults(func=cmd_deform_weights)

    g = top.add_parser("vgit").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("chambers", help="chambers of a torus action by both routes")
    p.add_argument("--action", required=True)
    p.add_argument("--degree-bound", type=int, default=vg.DEFAULT_DEGREE_BOUND)
    p.add_argument("--coord-bound", type=int, default=vg.DEFAULT_COORD_BOUND)
    p.set_defaults(func=cmd_vgit_chambers)
    p = g.add_parser("verify", help="computed chambers of a closed curve against the predicted ones")
    p.add_argument("--critical", required=True, choices=cp.CRITICAL_VALUES)
    p.add_argument("--type", default="A", choices=("A", "B", "C"))
    p.add_argument("--links", help="comma-separated link lengths")
    p.add_argument("--atoms", type=int, help="number of atoms (9/11 type A)")
    p.add_argument("--tails", help="comma-separated lengths of links ending in a marking (7/10 type A)")
    p.add_argument("--core-genus", type=int)
    p.add_argument("--curve", help="classify this curve instead of building one")
    p.add_argument("--predicted", help="JSON file replacing the predicted table")
    p.set_defaults(func=cmd_vgit_verify)

    g = top.add_parser("divisor").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("identity", help="verify a reduction identity")
    p.add_argument("--name", choices=sorted(dc.IDENTITIES))
    p.add_argument("--all", action="store_true")
    p.set_defaults(func=cmd_divisor_identity)
    p = g.add_parser("coeff", help="coefficient formulas")
    p.add_argument("--kind", required=True, choices=("ch", "keel", "inner", "hodge"))
    p.add_argument("--params", nargs="*", help="key=value pairs, e.g. g=2 m=inf")
    p.set_defaults(func=cmd_divisor_coeff)

    p = top.add_parser("catalog", help="fixture curves")
    p.add_argument("action", choices=("list", "emit"))
    p.add_argument("name", nargs="?")
    p.set_defaults(func=cmd_catalog)
    return ap


def run(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (InputError, ModuliKitError, OSError, ValueError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

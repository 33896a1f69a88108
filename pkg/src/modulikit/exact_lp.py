"""Exact rational feasibility for systems ``a . x >= b``.

Two independent solvers live here: Fourier-Motzkin elimination, which is
cheap for a handful of variables, and a dense-tableau simplex (phase one
only, Bland's rule) for larger systems or when elimination blows up.
Nothing here ever touches a float.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, List, Optional, Sequence, Tuple

Row = Tuple[Tuple[int, ...], int]

# Elimination switches to the simplex once the row count passes this.
FM_ROW_LIMIT = 4000


def _as_int_row(coeffs: Sequence, rhs) -> Row:
    vals = [Fraction(c) for c in coeffs] + [Fraction(rhs)]
    den = 1
    for v in vals:
        den = den * v.denominator // gcd(den, v.denominator)
    ints = [int(v * den) for v in vals]
    return _normalize(tuple(ints[:-1]), ints[-1])


def _normalize(a: Tuple[int, ...], b: int) -> Row:
    g = 0
    for x in a:
        g = gcd(g, x)
    if g == 0:
        return a, (1 if b > 0 else (0 if b == 0 else -1))
    if b % g == 0:
        return tuple(x // g for x in a), b // g
    # Scaling by a positive constant keeps the inequality; ceil on b is exact
    # only over integers, so keep the rational bound by scaling instead.
    g2 = gcd(g, abs(b)) if b else g
    return tuple(x // g2 for x in a), b // g2


def fm_feasible(rows: Iterable[Tuple[Sequence, object]], nvars: int) -> Optional[bool]:
    """Decide feasibility of ``{x : a.x >= b for all rows}`` by elimination.

    Returns None if the intermediate system grows past ``FM_ROW_LIMIT`` so the
    caller can fall back to the simplex.
    """
    system = {_as_int_row(a, b) for a, b in rows}
    live = list(range(nvars))
    while True:
        for a, b in system:
            if all(x == 0 for x in a) and b > 0:
                return False
        system = {(a, b) for a, b in system if any(a)}
        if not system:
            return True
        # Pick the variable whose elimination creates the fewest rows.
        best = None
        for j in live:
            pos = sum(1 for a, _ in system if a[j] > 0)
            neg = sum(1 for a, _ in system if a[j] < 0)
            if pos + neg == 0:
                continue
            cost = pos * neg - pos - neg
            if best is None or cost < best[0]:
                best = (cost, j)
        if best is None:
            return True
        j = best[1]
        live.remove(j)
        pos = [(a, b) for a, b in system if a[j] > 0]
        neg = [(a, b) for a, b in system if a[j] < 0]
        rest = {(a, b) for a, b in system if a[j] == 0}
        # A variable bounded on one side only can always be pushed far enough.
        if not pos or not neg:
            system = rest
            continue
        for ap, bp in pos:
            for an, bn in neg:
                cp, cn = -an[j], ap[j]
                a = tuple(cp * x + cn * y for x, y in zip(ap, an))
                rest.add(_normalize(a, cp * bp + cn * bn))
        if len(rest) > FM_ROW_LIMIT:
            return None
        system = rest


def simplex_feasible(rows: Iterable[Tuple[Sequence, object]], nvars: int) -> bool:
    """Phase-one simplex on ``a.(u - v) - s = b`` with u, v, s >= 0."""
    rows = [([Fraction(x) for x in a], Fraction(b)) for a, b in rows]
    m = len(rows)
    if m == 0:
        return True
    n_struct = 2 * nvars
    # columns: u (nvars), v (nvars), surplus (m), artificial (m)
    ncols = n_struct + 2 * m
    tab: List[List[Fraction]] = []
    basis: List[int] = []
    art_cols = []
    for i, (a, b) in enumerate(rows):
        row = [Fraction(0)] * (ncols + 1)
        for j in range(nvars):
            row[j] = a[j]
            row[nvars + j] = -a[j]
        row[n_struct + i] = Fraction(-1)
        row[ncols] = b
        if b < 0 or (b == 0):
            # Negate so the surplus column carries +1 and serves as a basis.
            row = [-x for x in row]
            basis.append(n_struct + i)
        else:
            row[n_struct + m + i] = Fraction(1)
            basis.append(n_struct + m + i)
            art_cols.append(n_struct + m + i)
        tab.append(row)
    if not art_cols:
        return True
    art_set = set(art_cols)
    # Objective: minimize the sum of artificials, expressed in reduced form.
    obj = [Fraction(0)] * (ncols + 1)
    for i, bcol in enumerate(basis):
        if bcol in art_set:
            for j in range(ncols + 1):
                obj[j] -= tab[i][j]
    for c in art_cols:
        obj[c] += 1
    allowed = [j for j in range(ncols) if j < n_struct + m or j in art_set]
    while True:
        enter = next((j for j in allowed if obj[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            if tab[i][enter] > 0:
                ratio = tab[i][ncols] / tab[i][enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            # Unbounded descent cannot happen for a sum of nonnegatives.
            break
        piv = tab[leave][enter]
        tab[leave] = [x / piv for x in tab[leave]]
        for i in range(m):
            if i != leave and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[leave])]
        if obj[enter] != 0:
            f = obj[enter]
            obj = [x - f * y for x, y in zip(obj, tab[leave])]
        basis[leave] = enter
    return -obj[ncols] == 0


def feasible(rows: Sequence[Tuple[Sequence, object]], nvars: int, method: str = "auto") -> bool:
    """Feasibility of ``a.x >= b`` over Q^nvars.

    ``method`` is ``"fm"``, ``"simplex"`` or ``"auto"`` (elimination for up to
    six variables, simplex above or on blow-up).
    """
    rows = list(rows)
    if method == "simplex":
        return simplex_feasible(rows, nvars)
    if method == "fm" or (method == "auto" and nvars <= 6):
        out = fm_feasible(rows, nvars)
        if out is not None:
            return out
        if method == "fm":
            raise RuntimeError("Fourier-Motzkin row limit exceeded")
    return simplex_feasible(rows, nvars)

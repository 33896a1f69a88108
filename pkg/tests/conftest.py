from hypothesis import HealthCheck, settings, strategies as st

from modulikit.curve_model import Component, CurveGraph, MarkedPoint, Singularity
from modulikit.vgit_engine import TorusAction

PROPS = settings(max_examples=1000, deadline=None,
                 suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])


@st.composite
def curves(draw, max_comps=4, prefix="", kinds=(1, 1, 1, 3), inner_kinds=(2, 4), max_marks=3, min_marks=0):
    """Random connected valid curve graphs with unique branch-point ids."""
    n = draw(st.integers(1, max_comps))
    genera = [draw(st.integers(0, 3)) for _ in range(n)]
    counter = [0]

    def pt():
        counter[0] += 1
        return f"b{counter[0]}"

    comps = [f"{prefix}C{i}" for i in range(n)]
    sings = []
    wflags = {c: set() for c in comps}
    for i in range(1, n):
        j = draw(st.integers(0, i - 1))
        k = draw(st.sampled_from(kinds))
        a, b = (comps[i], pt()), (comps[j], pt())
        sings.append(Singularity(f"{prefix}s{len(sings)}", k, (a, b)))
        for end in (a, b):
            if genera[comps.index(end[0])] == 2 and draw(st.booleans()):
                wflags[end[0]].add(end[1])
    for _ in range(draw(st.integers(0, 2))):
        i, j = draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1))
        k = draw(st.sampled_from(kinds))
        sings.append(Singularity(f"{prefix}s{len(sings)}", k, ((comps[i], pt()), (comps[j], pt()))))
    for _ in range(draw(st.integers(0, 1))):
        i = draw(st.integers(0, n - 1))
        k = draw(st.sampled_from(inner_kinds))
        sings.append(Singularity(f"{prefix}s{len(sings)}", k, ((comps[i], pt()),), draw(st.booleans())))
    marks = []
    for m in range(draw(st.integers(min_marks, max_marks))):
        i = draw(st.integers(0, n - 1))
        p = pt()
        marks.append(MarkedPoint(f"{prefix}p{m}", comps[i], p))
        if genera[i] == 2 and draw(st.booleans()):
            wflags[comps[i]].add(p)
    components = [Component(c, g, frozenset(wflags[c])) for c, g in zip(comps, genera)]
    return CurveGraph(components, sings, marks)


@st.composite
def actions(draw, max_rank=3, max_coords=8, bound=6):
    r = draw(st.integers(1, max_rank))
    n = draw(st.integers(1, max_coords))
    w = st.lists(st.integers(-bound, bound), min_size=r, max_size=r)
    coords = [(f"x{i}", draw(w)) for i in range(n)]
    return TorusAction.build(r, coords, draw(w))


# criterion number -> (passed, detail), filled by test_acceptance
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")

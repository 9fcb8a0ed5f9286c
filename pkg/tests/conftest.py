import itertools

import pytest

from twreduce.decomposition import FORGET, INTRODUCE_EDGE


def subtree_contents(nd):
    """Per node: (edges introduced below, vertices forgotten below)."""
    edges, forgotten = [], []
    for nd_ in nd.nodes:
        e, f = set(), set()
        for c in nd_.children:
            e |= edges[c]
            f |= forgotten[c]
        if nd_.kind == INTRODUCE_EDGE:
            e.add(nd_.edge)
        elif nd_.kind == FORGET:
            f.add(nd_.vertex)
        edges.append(e)
        forgotten.append(f)
    return edges, forgotten


def edge_subsets(edges):
    edges = sorted(edges)
    for r in range(len(edges) + 1):
        yield from itertools.combinations(edges, r)


_ACCEPTANCE: dict = {}


@pytest.fixture
def verdict():
    """Record one acceptance line: ``verdict(number, ok, detail)``."""
    def record(number, ok, detail):
        _ACCEPTANCE[number] = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance")
    for k in sorted(_ACCEPTANCE):
        terminalreporter.write_line(_ACCEPTANCE[k])

"""Shared fixtures and brute-force reference helpers.

The brute helpers deliberately avoid the library's optimized paths so that
every probabilistic or combinatorial claim is checked against an independent
implementation.
"""

from __future__ import annotations

from itertools import combinations

import pytest

from hardcore.graphs import Graph, VertexSet


@pytest.fixture
def k3():
    return Graph.complete(3)


@pytest.fixture
def path3():
    return Graph.path(3)


@pytest.fixture
def path4():
    return Graph.path(4)


@pytest.fixture
def c5():
    return Graph.cycle(5)


@pytest.fixture
def empty5():
    return Graph.empty(5)


def vs(n: int, *members: int) -> VertexSet:
    return VertexSet.from_iter(n, members)


def brute_is_independent(g: Graph, members) -> bool:
    return all(not g.edge(u, v) for u, v in combinations(members, 2))


def brute_independent_sets(g: Graph, max_size: int | None = None):
    """All independent sets by raw subset enumeration (n <= ~16)."""
    cap = g.n if max_size is None else max_size
    out = []
    for size in range(cap + 1):
        for comb in combinations(range(g.n), size):
            if brute_is_independent(g, comb):
                out.append(frozenset(comb))
    return out


def brute_mis_size(g: Graph) -> int:
    best = 0
    for bits in range(1 << g.n):
        ok = True
        rem = bits
        while rem:
            low = rem & -rem
            v = low.bit_length() - 1
            rem ^= low
            if g.rows[v] & bits & ~((1 << (v + 1)) - 1):
                ok = False
                break
        if ok:
            best = max(best, bits.bit_count())
    return best

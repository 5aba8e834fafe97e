"""Exact per-piece solvers, cross-checked against subset enumeration."""
from __future__ import annotations

import itertools
import random

import pytest

from partition_oracle import (
    SolverCapError,
    contains_subgraph,
    is_bipartite,
    is_triangle_free,
    maximum_independent_set,
    maximum_matching,
    minimum_dominating_set,
    minimum_vertex_cover,
    two_coloring,
)

from conftest import BRIDGE_EDGES, bridge_graph


# ------------------------------------------------------- brute-force oracles

def brute_matching(vertices, edges):
    edges = list(edges)

    def rec(i, used):
        if i == len(edges):
            return 0
        best = rec(i + 1, used)
        u, v = edges[i]
        if u not in used and v not in used:
            best = max(best, 1 + rec(i + 1, used | {u, v}))
        return best

    return rec(0, set())


def brute_vertex_cover(vertices, edges):
    vertices, edges = list(vertices), list(edges)
    for size in range(len(vertices) + 1):
        for chosen in itertools.combinations(vertices, size):
            cover = set(chosen)
            if all(u in cover or v in cover for u, v in edges):
                return size
    raise AssertionError("unreachable")


def brute_independent_set(vertices, edges):
    vertices, edges = list(vertices), list(edges)
    for size in range(len(vertices), -1, -1):
        for chosen in itertools.combinations(vertices, size):
            inside = set(chosen)
            if all(not (u in inside and v in inside) for u, v in edges):
                return size
    raise AssertionError("unreachable")


def brute_dominating_set(vertices, edges):
    vertices, edges = list(vertices), list(edges)
    closed = {v: {v} for v in vertices}
    for u, v in edges:
        closed[u].add(v)
        closed[v].add(u)
    everything = set(vertices)
    for size in range(len(vertices) + 1):
        for chosen in itertools.combinations(vertices, size):
            dominated = set().union(*(closed[v] for v in chosen)) if chosen else set()
            if dominated == everything:
                return size
    raise AssertionError("unreachable")


def random_sparse_graph(n, extra_edges, seed):
    """A random tree plus a few extra edges: connected, degree-bounded."""
    rng = random.Random(seed)
    edges = {(rng.randrange(v), v) for v in range(1, n)}
    while len(edges) < n - 1 + extra_edges:
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v:
            edges.add((min(u, v), max(u, v)))
    return list(range(n)), sorted(edges)


SMALL_GRAPHS = {
    "path3": (range(3), [(0, 1), (1, 2)]),
    "path4": (range(4), [(0, 1), (1, 2), (2, 3)]),
    "cycle5": (range(5), [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]),
    "cycle6": (range(6), [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)]),
    "star5": (range(6), [(0, i) for i in range(1, 6)]),
    "triangle": (range(3), [(0, 1), (1, 2), (0, 2)]),
    "k4": (range(4), list(itertools.combinations(range(4), 2))),
    "bridge": (range(8), BRIDGE_EDGES),
    "two-parts": (range(5), [(0, 1), (3, 4)]),
    "edgeless": (range(4), []),
    "empty": ([], []),
}


@pytest.mark.parametrize("name", sorted(SMALL_GRAPHS))
def test_solvers_match_brute_force_on_named_graphs(name):
    vertices, edges = SMALL_GRAPHS[name]
    vertices = list(vertices)
    assert maximum_matching(vertices, edges) == brute_matching(vertices, edges)
    assert minimum_vertex_cover(vertices, edges) == brute_vertex_cover(vertices, edges)
    assert maximum_independent_set(vertices, edges) == brute_independent_set(
        vertices, edges
    )
    if vertices:
        assert minimum_dominating_set(vertices, edges) == brute_dominating_set(
            vertices, edges
        )


@pytest.mark.parametrize("seed", [1, 2, 3, 4])
def test_solvers_match_brute_force_on_random_graphs(seed):
    vertices, edges = random_sparse_graph(12, 4, seed)
    assert maximum_matching(vertices, edges) == brute_matching(vertices, edges)
    assert minimum_vertex_cover(vertices, edges) == brute_vertex_cover(vertices, edges)
    assert maximum_independent_set(vertices, edges) == brute_independent_set(
        vertices, edges
    )
    assert minimum_dominating_set(vertices, edges) == brute_dominating_set(
        vertices, edges
    )


@pytest.mark.parametrize("seed", [5, 6, 7])
def test_classic_dualities_hold(seed):
    vertices, edges = random_sparse_graph(11, 5, seed)
    mm = maximum_matching(vertices, edges)
    vc = minimum_vertex_cover(vertices, edges)
    ind = maximum_independent_set(vertices, edges)
    assert mm <= vc <= 2 * mm
    assert ind == len(vertices) - vc
    if is_bipartite(vertices, edges):
        assert mm == vc


def test_known_values():
    assert maximum_matching(range(3), [(0, 1), (1, 2)]) == 1
    assert maximum_matching(range(6), SMALL_GRAPHS["cycle6"][1]) == 3
    assert minimum_vertex_cover(range(3), [(0, 1), (1, 2)]) == 1
    assert maximum_independent_set(range(3), [(0, 1), (1, 2)]) == 2
    assert minimum_dominating_set(range(3), [(0, 1), (1, 2)]) == 1
    assert minimum_dominating_set(range(6), [(0, i) for i in range(1, 6)]) == 1


def test_matching_handles_odd_components():
    # two triangles sharing no vertex: matching 1 per triangle
    edges = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]
    assert maximum_matching(range(6), edges) == 2


def test_two_coloring_and_bipartite():
    vertices, edges = SMALL_GRAPHS["cycle6"]
    coloring = two_coloring(list(vertices), edges)
    assert coloring is not None
    assert all(coloring[u] != coloring[v] for u, v in edges)
    assert is_bipartite(list(vertices), edges)
    assert two_coloring(*map(list, SMALL_GRAPHS["cycle5"])) is None
    assert not is_bipartite(*map(list, SMALL_GRAPHS["cycle5"]))
    assert is_bipartite(*map(list, SMALL_GRAPHS["bridge"]))


def test_triangle_freeness():
    assert not is_triangle_free(*map(list, SMALL_GRAPHS["triangle"]))
    assert is_triangle_free(*map(list, SMALL_GRAPHS["cycle6"]))
    assert is_triangle_free(*map(list, SMALL_GRAPHS["bridge"]))


def test_contains_subgraph_patterns():
    triangle = (3, [(0, 1), (1, 2), (0, 2)])
    square = (4, [(0, 1), (1, 2), (2, 3), (0, 3)])
    g = bridge_graph()
    assert contains_subgraph(list(range(g.n)), g.edges(), *square)
    assert not contains_subgraph(list(range(g.n)), g.edges(), *triangle)
    assert contains_subgraph(
        list(SMALL_GRAPHS["k4"][0]), SMALL_GRAPHS["k4"][1], *triangle
    )
    # a path pattern matches anywhere
    assert contains_subgraph(list(range(3)), [(0, 1), (1, 2)], 3, [(0, 1), (1, 2)])


def test_contains_subgraph_enforces_the_pattern_bound():
    with pytest.raises(ValueError, match="bound is 5"):
        contains_subgraph(range(10), [], 6, [])
    with pytest.raises(ValueError, match="bad pattern edge"):
        contains_subgraph(range(4), [], 3, [(0, 3)])


def test_pattern_larger_than_piece_never_matches():
    assert not contains_subgraph(range(2), [(0, 1)], 3, [(0, 1), (1, 2)])


@pytest.mark.parametrize(
    "solver",
    [
        maximum_matching,
        minimum_vertex_cover,
        maximum_independent_set,
        minimum_dominating_set,
        two_coloring,
        is_bipartite,
        is_triangle_free,
    ],
)
def test_solver_cap_is_a_hard_error(solver):
    vertices = list(range(65))
    with pytest.raises(SolverCapError, match="65"):
        solver(vertices, [])
    with pytest.raises(SolverCapError):
        solver(list(range(5)), [], 4)


def test_contains_subgraph_cap():
    with pytest.raises(SolverCapError):
        contains_subgraph(range(65), [], 3, [(0, 1)])


def test_cap_boundary_is_inclusive():
    vertices = list(range(64))
    assert maximum_matching(vertices, [(i, i + 1) for i in range(0, 64, 2)]) == 32

"""Exact solvers for small induced subgraphs (oracle pieces).

Every solver takes the piece as (vertices, edges) with original labels,
relabels internally to bitmask form, and refuses inputs larger than ``cap``
— a hard error rather than silent truncation, since a truncated value would
silently corrupt an estimate.  Matching, vertex cover, independent set, and
dominating set are implemented as independent searches (no solver is defined
as an algebraic transform of another), so classical identities between them
remain meaningful cross-checks in the test suite.
"""
from __future__ import annotations

from collections import deque
from typing import Iterable, Sequence

DEFAULT_SOLVER_CAP = 64

Edge = tuple[int, int]


class SolverCapError(ValueError):
    """Input exceeds the configured piece-size cap."""


def _relabel(
    vertices: Sequence[int], edges: Iterable[Edge], cap: int, op: str
) -> tuple[int, list[int], list[Edge]]:
    """Map labels to 0..m-1; return (m, neighbor bitmasks, relabeled edges)."""
    verts = sorted(set(vertices))
    m = len(verts)
    if m > cap:
        raise SolverCapError(f"{op}: piece has {m} vertices, cap is {cap}")
    index = {v: i for i, v in enumerate(verts)}
    adj = [0] * m
    relabeled: list[Edge] = []
    for u, v in edges:
        if u == v or u not in index or v not in index:
            raise ValueError(f"{op}: edge ({u}, {v}) is not inside the piece")
        a, b = index[u], index[v]
        adj[a] |= 1 << b
        adj[b] |= 1 << a
        relabeled.append((a, b))
    return m, adj, relabeled


def _components(m: int, adj: list[int]) -> list[int]:
    """Connected components as bitmasks."""
    seen = 0
    out: list[int] = []
    for start in range(m):
        if seen >> start & 1:
            continue
        comp = 1 << start
        queue = deque([start])
        while queue:
            u = queue.popleft()
            fresh = adj[u] & ~comp
            while fresh:
                low = fresh & -fresh
                comp |= low
                queue.append(low.bit_length() - 1)
                fresh ^= low
        seen |= comp
        out.append(comp)
    return out


def _bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def two_coloring(
    vertices: Sequence[int], edges: Iterable[Edge], cap: int = DEFAULT_SOLVER_CAP
) -> dict[int, int] | None:
    """A proper 2-coloring by BFS, or None when none exists."""
    verts = sorted(set(vertices))
    m, adj, _ = _relabel(verts, edges, cap, "two_coloring")
    color = [-1] * m
    for start in range(m):
        if color[start] != -1:
            continue
        color[start] = 0
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in _bits(adj[u]):
                if color[v] == -1:
                    color[v] = color[u] ^ 1
                    queue.append(v)
                elif color[v] == color[u]:
                    return None
    return {verts[i]: color[i] for i in range(m)}


def is_bipartite(
    vertices: Sequence[int], edges: Iterable[Edge], cap: int = DEFAULT_SOLVER_CAP
) -> bool:
    return two_coloring(vertices, edges, cap) is not None


def is_triangle_free(
    vertices: Sequence[int], edges: Iterable[Edge], cap: int = DEFAULT_SOLVER_CAP
) -> bool:
    _, adj, relabeled = _relabel(vertices, edges, cap, "is_triangle_free")
    return all(not adj[a] & adj[b] for a, b in relabeled)


def contains_subgraph(
    vertices: Sequence[int],
    edges: Iterable[Edge],
    h_order: int,
    h_edges: Sequence[Edge],
    cap: int = DEFAULT_SOLVER_CAP,
) -> bool:
    """Whether the piece contains H = ([h_order], h_edges) as a subgraph.

    Plain backtracking over injective maps, pattern vertices in descending
    pattern-degree order; practical only for h_order <= 5, which is enforced.
    """
    if h_order > 5:
        raise ValueError(f"pattern has {h_order} vertices; the bound is 5")
    for a, b in h_edges:
        if not (0 <= a < h_order and 0 <= b < h_order) or a == b:
            raise ValueError(f"bad pattern edge ({a}, {b})")
    m, adj, _ = _relabel(vertices, edges, cap, "contains_subgraph")
    if h_order > m:
        return False
    h_adj = [0] * h_order
    for a, b in h_edges:
        h_adj[a] |= 1 << b
        h_adj[b] |= 1 << a
    order = sorted(range(h_order), key=lambda a: -h_adj[a].bit_count())
    assignment = [-1] * h_order

    def extend(i: int, used: int) -> bool:
        if i == h_order:
            return True
        a = order[i]
        required = [assignment[b] for b in _bits(h_adj[a]) if assignment[b] != -1]
        for u in range(m):
            if used >> u & 1:
                continue
            if any(not adj[u] >> w & 1 for w in required):
                continue
            assignment[a] = u
            if extend(i + 1, used | 1 << u):
                return True
            assignment[a] = -1
        return False

    return extend(0, 0)


def _bipartite_matching(m: int, adj: list[int], color: list[int]) -> int:
    """Maximum matching of a 2-colored graph by augmenting paths."""
    match = [-1] * m
    size = 0
    for u in range(m):
        if color[u] != 0:
            continue
        visited = 0

        def augment(x: int) -> bool:
            nonlocal visited
            for y in _bits(adj[x] & ~visited):
                visited |= 1 << y
                if match[y] == -1 or augment(match[y]):
                    match[y] = x
                    match[x] = y
                    return True
            return False

        if augment(u):
            size += 1
    return size


def _general_matching(comp: int, adj: list[int]) -> int:
    """Maximum matching by branch and bound over vertex bitmasks."""
    memo: dict[int, int] = {}

    def solve(mask: int) -> int:
        if mask == 0:
            return 0
        got = memo.get(mask)
        if got is not None:
            return got
        low = mask & -mask
        u = low.bit_length() - 1
        nbrs = adj[u] & mask
        if not nbrs:
            best = solve(mask ^ low)
        else:
            best = solve(mask ^ low)
            ceiling = mask.bit_count() // 2
            for v in _bits(nbrs):
                if best >= ceiling:
                    break
                best = max(best, 1 + solve(mask ^ low ^ (1 << v)))
        memo[mask] = best
        return best

    return solve(comp)


def maximum_matching(
    vertices: Sequence[int], edges: Iterable[Edge], cap: int = DEFAULT_SOLVER_CAP
) -> int:
    verts = sorted(set(vertices))
    m, adj, relabeled = _relabel(verts, edges, cap, "maximum_matching")
    coloring = two_coloring(verts, [(verts[a], verts[b]) for a, b in relabeled], cap)
    total = 0
    if coloring is not None:
        color = [coloring[v] for v in verts]
        total = _bipartite_matching(m, adj, color)
    else:
        for comp in _components(m, adj):
            total += _general_matching(comp, adj)
    return total


def minimum_vertex_cover(
    vertices: Sequence[int], edges: Iterable[Edge], cap: int = DEFAULT_SOLVER_CAP
) -> int:
    """Minimum vertex cover by branching on an endpoint of some edge."""
    m, adj, _ = _relabel(vertices, edges, cap, "minimum_vertex_cover")
    memo: dict[int, int] = {}

    def solve(mask: int) -> int:
        got = memo.get(mask)
        if got is not None:
            return got
        pick = -1
        for u in _bits(mask):
            if adj[u] & mask:
                pick = u
                break
        if pick == -1:
            memo[mask] = 0
            return 0
        v = (adj[pick] & mask).bit_length() - 1
        best = 1 + min(solve(mask ^ (1 << pick)), solve(mask ^ (1 << v)))
        memo[mask] = best
        return best

    return sum(solve(comp) for comp in _components(m, adj))


def maximum_independent_set(
    vertices: Sequence[int], edges: Iterable[Edge], cap: int = DEFAULT_SOLVER_CAP
) -> int:
    """Maximum independent set, branching on a maximum-degree vertex."""
    m, adj, _ = _relabel(vertices, edges, cap, "maximum_independent_set")
    memo: dict[int, int] = {}

    def solve(mask: int) -> int:
        if mask == 0:
            return 0
        got = memo.get(mask)
        if got is not None:
            return got
        pivot, pivot_deg = -1, -1
        for u in _bits(mask):
            deg = (adj[u] & mask).bit_count()
            if deg > pivot_deg:
                pivot, pivot_deg = u, deg
        if pivot_deg == 0:
            best = mask.bit_count()
        else:
            take = 1 + solve(mask & ~(adj[pivot] | 1 << pivot))
            skip = solve(mask ^ (1 << pivot))
            best = max(take, skip)
        memo[mask] = best
        return best

    return sum(solve(comp) for comp in _components(m, adj))


def minimum_dominating_set(
    vertices: Sequence[int], edges: Iterable[Edge], cap: int = DEFAULT_SOLVER_CAP
) -> int:
    """Minimum dominating set per component, branching over who dominates
    the first undominated vertex."""
    m, adj, _ = _relabel(vertices, edges, cap, "minimum_dominating_set")
    total = 0
    for comp in _components(m, adj):
        closed = {u: (adj[u] | 1 << u) & comp for u in _bits(comp)}
        memo: dict[int, int] = {}
        comp_size = comp.bit_count()

        def solve(dominated: int) -> int:
            if dominated == comp:
                return 0
            got = memo.get(dominated)
            if got is not None:
                return got
            undominated = comp & ~dominated
            u = (undominated & -undominated).bit_length() - 1
            best = comp_size
            for w in _bits(closed[u]):
                best = min(best, 1 + solve(dominated | closed[w]))
            memo[dominated] = best
            return best

        total += solve(0)
    return total

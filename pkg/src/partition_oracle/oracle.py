"""The partition oracle: clustering, local queries, and the global reference.

The same fixed randomness — per-vertex phases and walk lengths derived from
one master seed — drives both the one-shot global partitioning procedure and
the per-vertex local query path, and the two are exactly equivalent: a local
query returns precisely the piece the global procedure would assign.  The
:class:`PartitionOracle` engine memoizes diffusion trajectories, sweep scans,
per-seed clusters, and anchors, so batches of local queries share work; all
public operations are also available as plain functions.
"""
from __future__ import annotations

import threading
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .diffusion import (
    MassVector,
    exact_number,
    lazy_step,
    ranked_vertices,
    truncate,
    truncated_diffusion,
)
from .graphs import BoundedDegreeGraph, VertexSet, connected_components
from .params import (
    MAX_FINDR_PHASES,
    MAX_FINDR_SAMPLES,
    MAX_K_CANDIDATES,
    OracleParams,
)
from .seeds import SeedContext

# Trajectory loops run ell steps; formula-mode ell is astronomically large,
# so desk-scale entry points refuse rather than never terminate.
MAX_DESK_ELL = 1_000_000


class OracleConfigError(RuntimeError):
    """Raised when a configuration is infeasible to execute at desk scale."""


@dataclass(frozen=True)
class PhaseThresholds:
    """Size thresholds k_1..k_h_bar; the final phase is always 0."""

    k: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.k:
            raise ValueError("thresholds must cover at least one phase")
        if self.k[-1] != 0:
            raise ValueError("the final-phase threshold must be 0")
        if any(x < 0 for x in self.k):
            raise ValueError("size thresholds must be nonnegative")

    def for_phase(self, h: int) -> int:
        if not 1 <= h <= len(self.k):
            raise ValueError(f"phase {h} outside [1, {len(self.k)}]")
        return self.k[h - 1]


@dataclass(frozen=True)
class Partition:
    """Vertex-to-anchor assignment; pieces are same-anchor components."""

    anchors: tuple[int, ...]

    def pieces(self, g: BoundedDegreeGraph) -> list[list[int]]:
        """All pieces, each sorted ascending, ordered by smallest member."""
        by_anchor: dict[int, list[int]] = {}
        for v, a in enumerate(self.anchors):
            by_anchor.setdefault(a, []).append(v)
        out: list[list[int]] = []
        for a in sorted(by_anchor):
            out.extend(connected_components(g, by_anchor[a]))
        out.sort(key=lambda piece: piece[0])
        return out

    def piece_containing(self, g: BoundedDegreeGraph, v: int) -> VertexSet:
        """The piece of ``v``: its same-anchor connected component."""
        a = self.anchors[v]
        piece = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for w in g.adjacency[u]:
                if w not in piece and self.anchors[w] == a:
                    piece.add(w)
                    stack.append(w)
        return tuple(sorted(piece))


class SweepScan:
    """Prefix sweep of one diffusion vector, for level-set cluster queries.

    Vertices are ranked by (mass descending, id ascending); prefix cut sizes
    are precomputed so that the cut of ``L(k') ∪ {v}`` for any ``k'`` costs
    O(log d).
    """

    def __init__(self, g: BoundedDegreeGraph, vec: MassVector, v: int):
        self.g = g
        self.v = v
        self.in_support = v in vec
        order = ranked_vertices(vec)
        self.order = order
        self.support_size = len(order)
        pos = {w: i for i, w in enumerate(order)}
        self.pos_v = pos.get(v)
        cutpref = [0]
        cut = 0
        prefix: set[int] = set()
        for w in order:
            inside = sum(1 for x in g.adjacency[w] if x in prefix)
            cut += g.degree(w) - 2 * inside
            prefix.add(w)
            cutpref.append(cut)
        self.cutpref = cutpref
        self.v_nbr_pos = sorted(pos[x] for x in g.adjacency[v] if x in pos)
        self.deg_v = g.degree(v)

    def candidate(self, kp: int) -> tuple[int, int, bool]:
        """(size, cut, v_already_in_prefix) for ``L(kp) ∪ {v}``."""
        if self.pos_v is not None and self.pos_v < kp:
            return kp, self.cutpref[kp], True
        inside = bisect_left(self.v_nbr_pos, kp)
        return kp + 1, self.cutpref[kp] + self.deg_v - 2 * inside, False

    def members(self, kp: int, v_in_prefix: bool) -> VertexSet:
        chosen = self.order[:kp] if v_in_prefix else self.order[:kp] + [self.v]
        return tuple(sorted(chosen))


def _scan_cluster(
    g: BoundedDegreeGraph, phi_cmp: Fraction, scan: SweepScan, k: int
) -> VertexSet | None:
    """First acceptable ``L(k') ∪ {v}`` scanning k' downward from 2k.

    Accepts when the size lands in [k, 2k], the set stays inside the
    support, and its conductance is at most phi.  Returns None when nothing
    qualifies (the caller then falls back to the singleton).  The full vertex
    set has undefined conductance and is never accepted.
    """
    if k <= 0 or not scan.in_support:
        return None
    n = g.n
    for kp in range(min(2 * k, scan.support_size), k - 1, -1):
        size, cut, v_inside = scan.candidate(kp)
        if not k <= size <= 2 * k:
            continue
        if size >= n:
            continue
        if Fraction(cut, 2 * min(size, n - size) * g.d) <= phi_cmp:
            return scan.members(kp, v_inside)
    return None


def cluster(
    g: BoundedDegreeGraph, params: OracleParams, v: int, t: int, k: int
) -> VertexSet:
    """The candidate cluster grown from ``v`` by a ``t``-step diffusion.

    Returns the singleton ``{v}`` when ``k`` is zero, when ``v`` fell out of
    its own truncated diffusion, or when no level set qualifies.
    """
    if not 0 <= t <= params.ell:
        raise ValueError(f"walk length {t} outside [0, {params.ell}]")
    if k < 0:
        raise ValueError(f"size threshold must be >= 0, got {k}")
    if k == 0:
        return (v,)
    vec = truncated_diffusion(g, v, t, params.rho, exact=params.exact)
    scan = SweepScan(g, vec, v)
    found = _scan_cluster(g, exact_number(params.phi), scan, k)
    return found if found is not None else (v,)


def _frontier_ib(
    g: BoundedDegreeGraph,
    ell: int,
    v: int,
    masks_for: Callable[[int], list[int]],
) -> VertexSet:
    """Grow the incoming ball of ``v`` by frontier expansion.

    Round ``t`` admits any pool vertex ``w`` (pool = members plus their
    neighbors) whose truncated diffusion has put mass on ``v`` by step ``t``.
    """
    member = {v}
    first_hit: dict[int, int] = {}
    bit = 1 << v

    def hit_by(w: int, t: int) -> bool:
        fh = first_hit.get(w)
        if fh is None:
            fh = -1
            for tp, mask in enumerate(masks_for(w)):
                if mask & bit:
                    fh = tp
                    break
            first_hit[w] = fh
        return 0 <= fh <= t

    for t in range(1, ell + 1):
        pool: set[int] = set()
        for u in member:
            pool.update(g.adjacency[u])
        pool -= member
        added = False
        for w in sorted(pool):
            if hit_by(w, t):
                member.add(w)
                added = True
        if not added and all(fh <= t for fh in first_hit.values()):
            break
    return tuple(sorted(member))


def ensure_desk_scale(params: OracleParams) -> None:
    if params.ell > MAX_DESK_ELL:
        raise OracleConfigError(
            f"walk-length cap ell={params.ell} is beyond desk scale; "
            "use explicit parameters"
        )


class PartitionOracle:
    """Shared engine behind both the local query path and the global run.

    Thresholds are computed exactly once per (graph, seed, params) — lazily,
    under a lock — after which every query is a read-mostly cache lookup.
    """

    def __init__(
        self,
        g: BoundedDegreeGraph,
        ctx: SeedContext,
        thresholds: PhaseThresholds | None = None,
    ):
        self.g = g
        self.ctx = ctx
        self.params = ctx.params
        self._phi_cmp = exact_number(self.params.phi)
        self._beta = exact_number(self.params.beta)
        self._lock = threading.Lock()
        self._thresholds = thresholds
        self._ks: list[int] | None = list(thresholds.k) if thresholds else None
        self._masks: dict[int, list[int]] = {}
        self._vecs: dict[tuple[int, int], MassVector] = {}
        self._scans: dict[tuple[int, int], SweepScan] = {}
        self._seed_cluster: dict[int, VertexSet] = {}
        self._seed_cluster_set: dict[int, frozenset] = {}
        self._ib: dict[int, VertexSet] = {}
        self._anchor: dict[int, int] = {}
        self._capture: dict[int, tuple[int, int | None]] = {}

    # -- diffusion caches ---------------------------------------------------

    def trajectory_masks(self, w: int) -> list[int]:
        """Support bitmasks of the truncated diffusion from ``w``, t=0..ell."""
        masks = self._masks.get(w)
        if masks is None:
            ensure_desk_scale(self.params)
            exact = self.params.exact
            rho = self.params.rho
            t_w = self.ctx.walk_len_of(w)
            p: MassVector = {w: Fraction(1) if exact else 1.0}
            masks = [1 << w]
            for t in range(1, self.params.ell + 1):
                if p:
                    p = truncate(lazy_step(self.g, p, exact=exact), rho, exact=exact)
                mask = 0
                for u in p:
                    mask |= 1 << u
                masks.append(mask)
                if t == t_w:
                    self._vecs.setdefault((w, t_w), p)
            self._masks[w] = masks
        return masks

    def vec_at(self, s: int, t: int) -> MassVector:
        key = (s, t)
        vec = self._vecs.get(key)
        if vec is None:
            vec = truncated_diffusion(self.g, s, t, self.params.rho, exact=self.params.exact)
            self._vecs[key] = vec
        return vec

    def _scan_at(self, s: int, t: int) -> SweepScan:
        key = (s, t)
        scan = self._scans.get(key)
        if scan is None:
            scan = SweepScan(self.g, self.vec_at(s, t), s)
            self._scans[key] = scan
        return scan

    def cluster_at(self, s: int, t: int, k: int) -> VertexSet:
        """cluster(s, t, k) backed by the per-(s, t) sweep cache."""
        if k <= 0:
            return (s,)
        found = _scan_cluster(self.g, self._phi_cmp, self._scan_at(s, t), k)
        return found if found is not None else (s,)

    # -- thresholds (findr) -------------------------------------------------

    def thresholds(self) -> PhaseThresholds:
        if self._thresholds is None:
            with self._lock:
                if self._thresholds is None:
                    self._thresholds = self._compute_thresholds()
        return self._thresholds

    def _k_of(self, h: int) -> int:
        if self._ks is None or len(self._ks) < h:
            raise RuntimeError(
                f"size threshold for phase {h} requested before it was computed"
            )
        return self._ks[h - 1]

    def phase_sample(self, h: int) -> list[int]:
        """The findr sampling stream for phase ``h`` (uar, with replacement)."""
        n = self.g.n
        return [
            self.ctx.sample_vertex(n, "findr", h, i)
            for i in range(self.params.sample_count)
        ]

    def viable(self, s: int, h: int, k: int, free_test: Callable[[int], bool]) -> bool:
        """findr's viability predicate for seed ``s`` at phase ``h``.

        The candidate cluster must be non-singleton and contain at least
        beta^3 * k vertices passing ``free_test``.
        """
        c = self.cluster_at(s, self.ctx.walk_len_of(s), k)
        if len(c) <= 1:
            return False
        free_members = sum(1 for u in c if free_test(u))
        return Fraction(free_members) >= self._beta ** 3 * k

    def _compute_thresholds(self) -> PhaseThresholds:
        params = self.params
        ensure_desk_scale(params)
        if params.h_bar > MAX_FINDR_PHASES:
            raise OracleConfigError(
                f"h_bar={params.h_bar} phases is beyond desk scale"
            )
        if params.sample_count > MAX_FINDR_SAMPLES:
            raise OracleConfigError(
                f"sample_count={params.sample_count} is beyond desk scale"
            )
        kc = params.k_candidates
        n_candidates = (
            max(0, (kc.stop - kc.start + kc.step - 1) // kc.step)
            if isinstance(kc, range)
            else len(kc)
        )
        if n_candidates > MAX_K_CANDIDATES:
            raise OracleConfigError(
                f"{n_candidates} size-threshold candidates is beyond desk scale"
            )
        ks: list[int] = []
        self._ks = ks
        gate = self._beta * params.sample_count / 2
        for h in range(1, params.h_bar):
            s_h = [v for v in self.phase_sample(h) if self.ctx.phase_of(v) >= h]
            if Fraction(len(s_h)) <= gate:
                ks.append(0)
                continue
            kept = s_h[: params.keep_count]
            quota = 12 * self._beta ** 4 * len(kept)
            free_test = lambda u, _h=h: self.is_free(u, _h)
            best: tuple[int, int] | None = None
            for k in params.k_candidates:
                count = sum(1 for s in kept if self.viable(s, h, k, free_test))
                if Fraction(count) >= quota and (best is None or (count, k) > best):
                    best = (count, k)
            ks.append(best[1] if best is not None else 0)
        ks.append(0)
        return PhaseThresholds(tuple(ks))

    # -- local query path ---------------------------------------------------

    def seed_cluster(self, s: int) -> VertexSet:
        """cluster(s, t_s, k_{h_s}): the cluster ``s`` grows as a seed."""
        c = self._seed_cluster.get(s)
        if c is None:
            c = self.cluster_at(s, self.ctx.walk_len_of(s), self._k_of(self.ctx.phase_of(s)))
            self._seed_cluster[s] = c
            self._seed_cluster_set[s] = frozenset(c)
        return c

    def _seed_captures(self, s: int, u: int) -> bool:
        self.seed_cluster(s)
        return u in self._seed_cluster_set[s]

    def find_ib(self, v: int) -> VertexSet:
        """All vertices whose truncated diffusion ever puts mass on ``v``."""
        got = self._ib.get(v)
        if got is None:
            ensure_desk_scale(self.params)
            got = _frontier_ib(self.g, self.params.ell, v, self.trajectory_masks)
            self._ib[v] = got
        return got

    def is_free(self, u: int, h: int) -> bool:
        """Whether ``u`` is still unclustered when phase ``h`` starts.

        Only seeds of earlier phases can have captured ``u``, and every such
        seed lies in the incoming ball of ``u``, so the check never needs a
        global pass.
        """
        if not 1 <= h <= self.params.h_bar:
            raise ValueError(f"phase {h} outside [1, {self.params.h_bar}]")
        if h == 1:
            return True
        if self._ks is None or len(self._ks) < h - 1:
            # Seeds of phases 1..h-1 need their size thresholds.  During the
            # threshold computation itself the first h-1 entries are already
            # in place, so this never re-enters the findr lock.
            self.thresholds()
        checked, captured = self._capture.get(u, (1, None))
        if captured is not None and captured < h:
            return False
        if checked < h:
            for w in self.find_ib(u):
                hw = self.ctx.phase_of(w)
                if checked <= hw < h and self._seed_captures(w, u):
                    if captured is None or hw < captured:
                        captured = hw
            self._capture[u] = (h, captured)
        return captured is None or captured >= h

    def find_anchor(self, v: int) -> int:
        """The first seed in processing order whose cluster contains ``v``."""
        a = self._anchor.get(v)
        if a is None:
            self.thresholds()
            for s in sorted(self.find_ib(v), key=self.ctx.order_key):
                if self._seed_captures(s, v):
                    a = s
                    break
            if a is None:
                raise RuntimeError(
                    f"no capturing seed found for vertex {v}; "
                    "the incoming-ball search is incomplete"
                )
            self._anchor[v] = a
        return a

    def find_partition(self, v: int) -> VertexSet:
        """The full piece containing ``v``: BFS over same-anchor vertices."""
        a = self.find_anchor(v)
        piece = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for w in self.g.adjacency[u]:
                if w not in piece and self.find_anchor(w) == a:
                    piece.add(w)
                    stack.append(w)
        return tuple(sorted(piece))

    # -- global reference ---------------------------------------------------

    def global_partition(self) -> Partition:
        return self._run_global(None)

    def global_partition_with_free_sets(self) -> tuple[Partition, dict[int, frozenset]]:
        """The global run plus the free set recorded at each phase start."""
        free_sets: dict[int, frozenset] = {}
        return self._run_global(free_sets), free_sets

    def _run_global(self, free_sets: dict[int, frozenset] | None) -> Partition:
        self.thresholds()
        g = self.g
        n = g.n
        order = sorted(range(n), key=self.ctx.order_key)
        free = [True] * n
        anchors = [-1] * n
        phase_cursor = 1

        def snapshot_through(h: int) -> None:
            nonlocal phase_cursor
            if free_sets is not None:
                while phase_cursor <= h:
                    free_sets[phase_cursor] = frozenset(
                        u for u in range(n) if free[u]
                    )
                    phase_cursor += 1

        for v in order:
            snapshot_through(self.ctx.phase_of(v))
            c = self.seed_cluster(v)
            newly = [u for u in c if free[u]]
            if not newly:
                continue
            for comp in connected_components(g, newly):
                for u in comp:
                    anchors[u] = v
            for u in newly:
                free[u] = False
        snapshot_through(self.params.h_bar)
        return Partition(anchors=tuple(anchors))


# -- functional wrappers ----------------------------------------------------


def find_ib(g: BoundedDegreeGraph, params: OracleParams, v: int) -> VertexSet:
    """Standalone incoming-ball computation (no seeds involved)."""
    ensure_desk_scale(params)
    memo: dict[int, list[int]] = {}

    def masks_for(w: int) -> list[int]:
        masks = memo.get(w)
        if masks is None:
            exact = params.exact
            p: MassVector = {w: Fraction(1) if exact else 1.0}
            masks = [1 << w]
            for _ in range(params.ell):
                if p:
                    p = truncate(lazy_step(g, p, exact=exact), params.rho, exact=exact)
                mask = 0
                for u in p:
                    mask |= 1 << u
                masks.append(mask)
            memo[w] = masks
        return masks

    return _frontier_ib(g, params.ell, v, masks_for)


def findr(g: BoundedDegreeGraph, ctx: SeedContext) -> PhaseThresholds:
    return PartitionOracle(g, ctx).thresholds()


def is_free(
    g: BoundedDegreeGraph,
    ctx: SeedContext,
    thresholds: PhaseThresholds,
    u: int,
    h: int,
    engine: PartitionOracle | None = None,
) -> bool:
    if engine is None:
        engine = PartitionOracle(g, ctx, thresholds)
    return engine.is_free(u, h)


def find_anchor(
    g: BoundedDegreeGraph,
    ctx: SeedContext,
    thresholds: PhaseThresholds,
    v: int,
    engine: PartitionOracle | None = None,
) -> int:
    if engine is None:
        engine = PartitionOracle(g, ctx, thresholds)
    return engine.find_anchor(v)


def find_partition(
    g: BoundedDegreeGraph,
    ctx: SeedContext,
    thresholds: PhaseThresholds,
    v: int,
    engine: PartitionOracle | None = None,
) -> VertexSet:
    if engine is None:
        engine = PartitionOracle(g, ctx, thresholds)
    return engine.find_partition(v)


def global_partition(
    g: BoundedDegreeGraph,
    ctx: SeedContext,
    thresholds: PhaseThresholds | None = None,
) -> Partition:
    return PartitionOracle(g, ctx, thresholds).global_partition()

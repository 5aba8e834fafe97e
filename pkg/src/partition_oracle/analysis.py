"""Measurement harness: cut accounting, censuses, and differential audits.

Censuses are exhaustive over their domain (every seed, every size threshold)
rather than sampled — they are the ground truth the sampled search is judged
against — so they are desk-scale tools by construction.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .diffusion import exact_number, lazy_step, truncate
from .graphs import BoundedDegreeGraph, VertexSet
from .oracle import (
    OracleConfigError,
    Partition,
    PartitionOracle,
    PhaseThresholds,
    SweepScan,
    ensure_desk_scale,
)
from .params import MAX_K_CANDIDATES
from .params import OracleParams
from .seeds import SeedContext


def worker_count() -> int:
    """Worker cap from PO_THREADS; defaults to 1 (fully sequential)."""
    raw = os.environ.get("PO_THREADS", "").strip()
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return 1


@dataclass(frozen=True)
class CutReport:
    """Exact cut accounting for one partition of one graph."""

    n: int
    d: int
    cut_edges: int
    cut_fraction: float
    epsilon_equivalent: float
    piece_size_histogram: dict[int, int]
    singleton_fraction: float

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "cut_edges": self.cut_edges,
            "cut_fraction": self.cut_fraction,
            "epsilon_equivalent": self.epsilon_equivalent,
            "piece_size_histogram": {
                str(size): count
                for size, count in sorted(self.piece_size_histogram.items())
            },
            "singleton_fraction": self.singleton_fraction,
        }


@dataclass(frozen=True)
class CensusReport:
    """Generic census container: one row per record plus a summary."""

    kind: str
    rows: tuple[Mapping, ...]
    summary: Mapping


@dataclass(frozen=True)
class DifferentialReport:
    """Local-vs-global audit result."""

    checked: int
    divergences: int
    first_divergence: Mapping | None

    @property
    def ok(self) -> bool:
        return self.divergences == 0


def measure_cut(g: BoundedDegreeGraph, partition: Partition) -> CutReport:
    """Count edges crossing pieces (each once) and piece-size statistics."""
    label = [-1] * g.n
    histogram: dict[int, int] = {}
    singleton_vertices = 0
    for idx, piece in enumerate(partition.pieces(g)):
        size = len(piece)
        histogram[size] = histogram.get(size, 0) + 1
        if size == 1:
            singleton_vertices += 1
        for v in piece:
            label[v] = idx
    cut_edges = sum(1 for u, v in g.edges() if label[u] != label[v])
    dn = g.d * g.n
    fraction = cut_edges / dn if dn else 0.0
    return CutReport(
        n=g.n,
        d=g.d,
        cut_edges=cut_edges,
        cut_fraction=fraction,
        epsilon_equivalent=fraction,
        piece_size_histogram=histogram,
        singleton_fraction=singleton_vertices / g.n if g.n else 0.0,
    )


def viability_census(
    g: BoundedDegreeGraph,
    ctx: SeedContext,
    h: int,
    F: VertexSet,
    k_range: Iterable[int],
    engine: PartitionOracle | None = None,
) -> CensusReport:
    """Replay the threshold search at phase ``h`` against an explicit free set.

    Uses the same sampling stream, retention filter, gate, quota, and
    argmax tie-break as the search itself, so with ``F`` equal to the true
    free set the reported choice is bit-identical to the chosen threshold.
    """
    if engine is None:
        engine = PartitionOracle(g, ctx)
    params = ctx.params
    ensure_desk_scale(params)
    if isinstance(k_range, range):
        span = max(0, (k_range.stop - k_range.start + k_range.step - 1) // k_range.step)
        if span > MAX_K_CANDIDATES:
            raise OracleConfigError(
                f"{span} size-threshold candidates is beyond desk scale"
            )
    beta = exact_number(params.beta)
    free = frozenset(F)
    free_test = free.__contains__

    sample = engine.phase_sample(h)
    retained = [v for v in sample if ctx.phase_of(v) >= h]
    gate = beta * params.sample_count / 2
    gated = Fraction(len(retained)) <= gate
    kept = retained[: params.keep_count]
    quota = 12 * beta ** 4 * len(kept)

    rows: list[dict] = []
    best: tuple[int, int] | None = None
    for k in k_range:
        count = sum(1 for s in kept if engine.viable(s, h, k, free_test))
        meets = Fraction(count) >= quota
        rows.append({"h": h, "k": k, "viable": count, "meets_quota": meets})
        if meets and (best is None or (count, k) > best):
            best = (count, k)
    chosen = 0 if gated else (best[1] if best is not None else 0)
    summary = {
        "h": h,
        "samples": len(sample),
        "retained": len(retained),
        "kept": len(kept),
        "gated": gated,
        "quota": float(quota),
        "chosen_k": chosen,
    }
    return CensusReport(kind="viability", rows=tuple(rows), summary=summary)


def leaky_census(
    g: BoundedDegreeGraph, params: OracleParams, s: int, F: VertexSet
) -> CensusReport:
    """Classify each timestep of the diffusion from ``s`` as leaking or not.

    A timestep is non-leaking when some level set stays within the support,
    keeps at least an alpha^2*k/400 share of free vertices, and has
    conductance below 1/(d * ell^(1/3)); the smallest such k is recorded as
    the certificate.
    """
    ensure_desk_scale(params)
    free = frozenset(F)
    exact = params.exact
    alpha_sq = exact_number(params.alpha) ** 2
    phi_bound = Fraction(1) / (g.d * exact_number(params.ell ** (1 / 3)))
    k_cap = params.k_cap

    rows: list[dict] = []
    non_leaking = 0
    p = {s: Fraction(1) if exact else 1.0}
    for t in range(1, params.ell + 1):
        if p:
            p = truncate(lazy_step(g, p, exact=exact), params.rho, exact=exact)
        scan = SweepScan(g, p, s)
        certificate: int | None = None
        cert_phi: Fraction | None = None
        top = min(k_cap, scan.support_size, g.n - 1)
        for k in range(1, top + 1):
            in_free = sum(1 for u in scan.order[:k] if u in free)
            if Fraction(in_free) < alpha_sq * k / 400:
                continue
            phi = Fraction(scan.cutpref[k], 2 * min(k, g.n - k) * g.d)
            if phi < phi_bound:
                certificate = k
                cert_phi = phi
                break
        leaking = certificate is None
        if not leaking:
            non_leaking += 1
        rows.append(
            {
                "s": s,
                "t": t,
                "leaking": leaking,
                "certificate_k": certificate,
                "conductance": float(cert_phi) if cert_phi is not None else None,
            }
        )
    summary = {
        "s": s,
        "ell": params.ell,
        "non_leaking_timesteps": non_leaking,
        "leaking_timesteps": params.ell - non_leaking,
    }
    return CensusReport(kind="leaky", rows=tuple(rows), summary=summary)


def good_seed_census(
    g: BoundedDegreeGraph, params: OracleParams, F: VertexSet
) -> int:
    """Count seeds in ``F`` whose diffusion keeps mass on ``F`` long enough.

    A seed qualifies when at least beta*ell/8 of the timesteps 1..ell leave
    truncated-diffusion mass at least beta/16 inside ``F``.
    """
    if not F:
        raise ValueError("the free set must contain at least one vertex")
    ensure_desk_scale(params)
    free = frozenset(F)
    exact = params.exact
    beta = exact_number(params.beta)
    mass_bound = beta / 16
    step_quota = beta * params.ell / 8
    count = 0
    for s in sorted(free):
        p = {s: Fraction(1) if exact else 1.0}
        good_steps = 0
        for _ in range(params.ell):
            if p:
                p = truncate(lazy_step(g, p, exact=exact), params.rho, exact=exact)
            mass_in_free = sum(mass for u, mass in p.items() if u in free)
            if Fraction(mass_in_free) >= mass_bound:
                good_steps += 1
        if Fraction(good_steps) >= step_quota:
            count += 1
    return count


def differential_check(
    g: BoundedDegreeGraph,
    ctx: SeedContext,
    thresholds: PhaseThresholds | None = None,
    local_fn: Callable[[int], VertexSet] | None = None,
) -> DifferentialReport:
    """Audit that the local query path reproduces the global partition.

    ``local_fn`` defaults to the oracle's own piece query; tests inject a
    deliberately wrong one to prove the audit can fail.
    """
    engine = PartitionOracle(g, ctx, thresholds)
    reference = engine.global_partition()
    if local_fn is None:
        local_fn = engine.find_partition

    vertices = range(g.n)
    workers = worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            local_pieces = list(pool.map(local_fn, vertices))
    else:
        local_pieces = [local_fn(v) for v in vertices]

    divergences = 0
    first: dict | None = None
    for v in vertices:
        expected = reference.piece_containing(g, v)
        got = tuple(local_pieces[v])
        if got != expected:
            divergences += 1
            if first is None:
                first = {"v": v, "local": got, "global": expected}
    return DifferentialReport(
        checked=g.n, divergences=divergences, first_divergence=first
    )

"""
Round accounting for the distributed pipeline.

Overlay-level searches run level by level: at level L every node settling at
distance L broadcasts one message. A broadcast of m′ messages costs
``D + m′`` rounds in CONGEST (D the hop diameter of the network) and
``2⌈m′/n⌉`` in the congested clique. Base-network steps compute their results
exactly and are charged by their round formulas. Every hidden constant is 1,
and each ledger entry keeps the formula it was charged by.

Charging never changes a value: each primitive here returns exactly what its
sequential counterpart returns.
"""

import heapq
import json
import logging
import math
from collections import Counter
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Mapping, Optional

from .clusters import (
    ClusterMap, PriorityHierarchy, check_range, compute_clusters, compute_priorities,
)
from .constants import INF, WITNESS_PATHS
from .detection import DetectionList, Entry, rtz_phases
from .exceptions import WrongModel
from .graph import Distance, DistanceTable, Graph, hop_diameter
from .hopset import HopSetEdges, SequentialEngine, finish_range, hop_set
from .overlay import (
    CenterSelection, OverlayNetwork, OverlayParams, TypeAssignment, combine,
    compute_types, distances_to_centers, finish_sssp, select_centers,
)
from .ruling import ruling_rounds
from .verify import sample_paths, witness_constant

logger = logging.getLogger(__name__)

LEDGER_MODELS = ("congest", "clique", "streaming")

#: Stages a CONGEST pipeline run may charge, in order. A stage that does no
#: work (no typed nodes, a one-level hierarchy) charges nothing.
PIPELINE_STAGES = ("types", "ruling", "pde", "priorities", "clusters", "finalsssp",
                   "broadcast")


@dataclass
class LedgerEntry:
    stage: str
    formula: str
    units: int


class CostLedger:
    """
    Append-only list of charges for one run.

    Args:
        model: ``congest``, ``clique`` or ``streaming``.
        n: Nodes in the network (the clique formula divides by it).
        D: Hop diameter of the network, used by ``congest``.
    """

    def __init__(self, model: str, n: int, D: int = 0):
        if model not in LEDGER_MODELS:
            raise ValueError(f"unknown cost model {model!r}")
        self.model = model
        self.n = n
        self.D = D
        self.entries: List[LedgerEntry] = []

    def charge(self, stage: str, formula: str, units: int) -> None:
        self.entries.append(LedgerEntry(stage, formula, int(units)))

    @property
    def total(self) -> int:
        return sum(e.units for e in self.entries)

    def stages(self) -> List[str]:
        """Distinct stages in first-charge order."""
        return list(dict.fromkeys(e.stage for e in self.entries))

    def stage_totals(self) -> Dict[str, int]:
        totals: Dict[str, int] = {}
        for e in self.entries:
            totals[e.stage] = totals.get(e.stage, 0) + e.units
        return totals

    def to_dict(self) -> Dict[str, Any]:
        return {
            "model": self.model,
            "n": self.n,
            "D": self.D,
            "entries": [asdict(e) for e in self.entries],
            "totals": {"rounds": self.total, "stages": self.stage_totals()},
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CostLedger):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __repr__(self) -> str:
        return f"CostLedger(model={self.model!r}, entries={len(self.entries)}, total={self.total})"


def _require_rounds(ledger: CostLedger) -> None:
    if ledger.model == "streaming":
        raise WrongModel("streaming ledgers count passes, not broadcast rounds")


def broadcast_cost(ledger: CostLedger, m_prime: int) -> int:
    _require_rounds(ledger)
    if ledger.model == "congest":
        return ledger.D + m_prime
    return 2 * math.ceil(m_prime / ledger.n) if m_prime else 0


def charge_broadcast(ledger: CostLedger, m_prime: int, stage: str = "broadcast") -> None:
    """
    One broadcast of ``m_prime`` messages: ``D + m′`` rounds in CONGEST,
    ``2⌈m′/n⌉`` in the clique.

    Raises:
        WrongModel: For a streaming ledger.
    """
    units = broadcast_cost(ledger, m_prime)
    formula = f"D + m' = {ledger.D} + {m_prime}" if ledger.model == "congest" \
        else f"2*ceil(m'/n) = 2*ceil({m_prime}/{ledger.n})"
    ledger.charge(stage, formula, units)


def charge_levels(
    ledger: CostLedger, stage: str, counts: Mapping[int, int], levels: int,
) -> int:
    """
    A whole level-synchronous search as one entry.

    ``counts[L]`` nodes settle at level L; ``levels`` is R+1. Levels missing
    from ``counts`` are empty and still cost D in CONGEST.
    """
    _require_rounds(ledger)
    messages = sum(counts.values())
    if ledger.model == "congest":
        units = levels * ledger.D + messages
        formula = f"sum_L (D + m_L) = {levels}*{ledger.D} + {messages}"
    else:
        units = sum(broadcast_cost(ledger, m) for m in counts.values())
        formula = f"sum_L 2*ceil(m_L/n) over {levels} levels, {messages} messages"
    ledger.charge(stage, formula, units)
    return units


# ---------------------------------------------------------------------------
# Overlay primitives
# ---------------------------------------------------------------------------

def _levels(R: Distance) -> int:
    check_range(R)
    if R == INF:
        raise ValueError("level-synchronous searches need a finite range")
    return int(R) + 1


def bounded_sssp_overlay(
    G: Graph, roots: Mapping[int, int], R: int, ledger: CostLedger, stage: str = "finalsssp",
) -> DistanceTable:
    """
    Distances up to R by level-synchronous broadcasts.

    At level L the nodes whose tentative distance is L settle and announce it;
    their neighbors relax on receipt. Equal to ``multi_source_dijkstra``.
    """
    if not G.is_integral:
        raise ValueError("level-synchronous searches need integer weights")
    levels = _levels(R)
    n = G.n
    dist: List[Distance] = [INF] * n
    parent: List[Optional[int]] = [None] * n
    settled = [False] * n
    pending: Dict[int, set] = {}
    queue: List[int] = []
    for r in sorted(roots):
        d0 = roots[r]
        if d0 <= R and d0 < dist[r]:
            dist[r] = d0
            if d0 not in pending:
                pending[d0] = set()
                heapq.heappush(queue, d0)
            pending[d0].add(r)
    counts: Dict[int, int] = {}
    while queue:
        L = heapq.heappop(queue)
        settling = sorted(v for v in pending.pop(L) if not settled[v] and dist[v] == L)
        if settling:
            counts[L] = len(settling)
        for u in settling:
            settled[u] = True
        for u in settling:
            for v, w in G.neighbors(u):
                if settled[v]:
                    continue
                nd = L + w
                if nd > R:
                    continue
                if nd < dist[v]:
                    dist[v] = nd
                    parent[v] = u
                    if nd not in pending:
                        pending[nd] = set()
                        heapq.heappush(queue, nd)
                    pending[nd].add(v)
                elif nd == dist[v] and parent[v] is not None and u < parent[v]:
                    parent[v] = u
    assert sum(counts.values()) <= n
    charge_levels(ledger, stage, counts, levels)
    source = tuple(sorted(roots))
    return DistanceTable(source=source[0] if len(source) == 1 else source,
                         dist=dist, parent=parent)


def detect_rtz_overlay(
    G: Graph, S: Iterable[int], gamma: int, sigma: int, ledger: CostLedger,
    stage: str = "priorities",
) -> DetectionList:
    """The phase construction with one charged level-synchronous search per phase."""
    levels = _levels(gamma)
    lists: List[List[Entry]] = [[] for _ in range(G.n)]
    for phase in rtz_phases(G, S, gamma, sigma):
        for y, entry in phase.found.items():
            lists[y].append(entry)
        charge_levels(ledger, stage, phase.levels, levels)
    return DetectionList(lists, gamma, sigma)


def clusters_overlay(
    G: Graph, hierarchy: PriorityHierarchy, R: int, ledger: CostLedger,
    stage: str = "clusters",
) -> ClusterMap:
    """
    Clusters with charged broadcasts.

    Each non-empty level ``A_i`` (i >= 1) costs one multi-source search for
    ``d(·, A_i, R)``; the cluster growth itself costs R+1 broadcasts, where
    level L carries one message per (center, member) pair at distance L.
    """
    levels = _levels(R)
    for level in hierarchy.A[1:]:
        if level:
            bounded_sssp_overlay(G, {a: 0 for a in level}, R, ledger, stage)
    clusters = compute_clusters(G, hierarchy, R)
    counts = Counter(d for members in clusters.clusters.values() for d in members.values())
    assert sum(counts.values()) == clusters.total_size
    charge_levels(ledger, stage, dict(counts), levels)
    return clusters


class LedgerEngine(SequentialEngine):
    """Hop-set primitives that charge a ledger as they run."""

    def __init__(self, ledger: CostLedger):
        self.ledger = ledger
        self.name = ledger.model

    def priorities(self, G: Graph, p: int, R: Distance, q: int) -> PriorityHierarchy:
        ledger = self.ledger
        return compute_priorities(
            G, p, R, q,
            detect=lambda H, S, gamma, sigma: detect_rtz_overlay(H, S, gamma, sigma, ledger),
        )

    def clusters(self, G: Graph, hierarchy: PriorityHierarchy, R: Distance) -> ClusterMap:
        return clusters_overlay(G, hierarchy, R, self.ledger)

    def bounded_sssp(self, G: Graph, roots: Mapping[int, Distance], R: Distance) -> DistanceTable:
        return bounded_sssp_overlay(G, roots, R, self.ledger)

    def scale_done(self, j: int, rho: Fraction, edges: int) -> None:
        logger.debug("%s scale %d done: rho=%s, %d edges, %d rounds so far",
                     self.name, j, rho, edges, self.ledger.total)


# ---------------------------------------------------------------------------
# Pipeline
# ---------------------------------------------------------------------------

def detection_rounds(gamma: int, sigma: int, sources: int, D: int) -> int:
    """min(γ, D) + min(σ, |S|)."""
    return min(gamma, D) + min(sigma, sources)


@dataclass
class PipelineResult:
    """Estimates for every node, the ledger, and the pieces built on the way."""

    source: int
    estimates: List[Distance]
    ledger: CostLedger
    overlay: OverlayNetwork
    types: TypeAssignment
    centers: CenterSelection
    hopset: HopSetEdges
    dtilde: Dict[int, Distance]
    alpha: Fraction
    report: Dict[str, Any] = field(default_factory=dict)


def run_congest_pipeline(
    G: Graph, s: int, params: OverlayParams, p: Optional[int] = None,
    R: Optional[int] = None, seed: int = 0,
) -> PipelineResult:
    """
    The overlay pipeline under CONGEST accounting.

    The report carries the witness constant measured over ``WITNESS_PATHS``
    seeded segments of exactly ell edges, next to the factor c the stretch
    bound assumes. It is 0 when every sampled segment touches a center.

    Raises:
        DisconnectedGraph: If G is not connected.
    """
    D = hop_diameter(G)
    ledger = CostLedger("congest", G.n, D)

    types = compute_types(G, params)
    per_scale = detection_rounds(params.h_prime, params.h, G.n, D)
    for i in range(types.examined):
        ledger.charge("types", f"min(h', D) + min(h, n) at scale {i}", per_scale)

    centers = select_centers(G, types, params, s)
    for i in sorted(centers.per_type):
        ledger.charge("ruling", f"b(c-1) for type {i}",
                      ruling_rounds(G.n, params.separation, params.a))

    overlay = distances_to_centers(G, centers, params, s)
    N = len(centers)
    per_scale = detection_rounds(params.k_prime, N, N, D)
    for i in range(params.pde_scales):
        ledger.charge("pde", f"min(k', D) + min(N, N) at scale {i}", per_scale)

    engine = LedgerEngine(ledger)
    Gp, _ = overlay.as_graph()
    F = hop_set(Gp, params.epsilon, p=p, engine=engine)
    R = finish_range(F.hop_bound, params.epsilon) if R is None else R
    dtilde = finish_sssp(overlay, F, s, F.hop_bound, params.epsilon, engine, R)
    estimates = [combine(overlay, dtilde, u) for u in range(G.n)]
    charge_broadcast(ledger, N, stage="broadcast")

    alpha = params.alpha(F.stretch)
    witness = witness_constant(G, centers, params,
                               sample_paths(G, params.ell, WITNESS_PATHS, seed))
    report = {
        "params": params.to_dict(),
        "centers": N,
        "hopset": F.summary(),
        "alpha": str(alpha),
        "R": R,
        "rounds": ledger.total,
        "witness_factor": str(params.witness_factor),
        "witness_constant": None if witness is None else str(witness),
    }
    logger.info("congest pipeline: n=%d D=%d centers=%d rounds=%d", G.n, D, N, ledger.total)
    return PipelineResult(s, estimates, ledger, overlay, types, centers, F, dtilde, alpha, report)

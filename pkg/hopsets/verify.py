"""
Brute-force oracles and property checkers.

Everything here recomputes from definitions, with networkx as an
independent shortest-path oracle where plain distances suffice. Tests use
these functions directly; the command line uses them under ``--verify``.

Checkers return reports and never raise on a violated property; callers
decide what is fatal.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
import pandas as pd

from .clusters import PriorityHierarchy
from .constants import ALL_PAIRS_LIMIT, INF, SAMPLED_PAIRS
from .graph import Distance, Graph, bellman_ford_hops, bellman_ford_rounds, round_weights
from .hopset import AdditiveStage, HopSetEdges, exponential_inequality
from .numeric import ceil_log2, floor_log2, normalize
from .overlay import CenterSelection, OverlayParams, TypeAssignment

logger = logging.getLogger(__name__)

__all__ = [
    "all_pairs_distances", "brute_clusters", "brute_bunches", "brute_types",
    "check_rounding_bounds", "HopsetCheck", "check_hopset", "check_additive_contract",
    "check_structural_property", "EstimateCheck", "check_estimates",
    "exponential_inequality", "sample_paths", "path_weight", "hitting_path_violations",
    "witness_constant", "weighted_diameter",
]

#: Upper edges of the ratio histogram bins; the last bin is open.
RATIO_BINS = (1.0, 1.01, 1.05, 1.1, 1.25, 1.5, 2.0, math.inf)


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def all_pairs_distances(G: Graph) -> List[List[Distance]]:
    """``d(u, v, G)`` for every pair, INF when unreachable."""
    out: List[List[Distance]] = [[INF] * G.n for _ in range(G.n)]
    for u, row in nx.all_pairs_dijkstra_path_length(G.to_networkx(), weight="weight"):
        for v, d in row.items():
            out[u][v] = normalize(d) if d else 0
    return out


def weighted_diameter(G: Graph, dist: Optional[List[List[Distance]]] = None) -> Distance:
    """Largest finite distance between two nodes."""
    dist = all_pairs_distances(G) if dist is None else dist
    return max((d for row in dist for d in row if d != INF), default=0)


# ---------------------------------------------------------------------------
# Clusters and bunches
# ---------------------------------------------------------------------------

def _distance_to_set(dist: List[List[Distance]], u: int, level) -> Distance:
    return min((dist[u][a] for a in level), default=INF)


def brute_clusters(
    G: Graph, hierarchy: PriorityHierarchy, R: Distance,
    dist: Optional[List[List[Distance]]] = None,
) -> Dict[int, Dict[int, Distance]]:
    """
    ``u ∈ C(v)`` iff ``d(u, v) <= R`` and ``d(u, v) < d(u, A_{i+1})``,
    i the priority of v, straight from all-pairs distances.
    """
    dist = all_pairs_distances(G) if dist is None else dist
    out: Dict[int, Dict[int, Distance]] = {}
    for v in range(G.n):
        higher = hierarchy.A[hierarchy.priority[v] + 1]
        members = [
            (dist[v][u], u) for u in range(G.n)
            if dist[v][u] <= R and dist[v][u] < _distance_to_set(dist, u, higher)
        ]
        out[v] = {u: d for d, u in sorted(members)}
    return out


def brute_bunches(
    G: Graph, hierarchy: PriorityHierarchy, R: Distance,
    dist: Optional[List[List[Distance]]] = None,
) -> List[List[List[int]]]:
    """``bunches[u][i]``: centers of priority i whose cluster holds u."""
    clusters = brute_clusters(G, hierarchy, R, dist)
    bunches: List[List[List[int]]] = [[[] for _ in hierarchy.A] for _ in range(G.n)]
    for v in sorted(clusters):
        for u in clusters[v]:
            bunches[u][hierarchy.priority[v]].append(v)
    return bunches


def brute_types(G: Graph, params: OverlayParams) -> List[Optional[int]]:
    """Smallest i with at least h nodes within h′ of u in the rounded graph."""
    types: List[Optional[int]] = [None] * G.n
    for i in range(params.scales):
        dist = all_pairs_distances(round_weights(G, params.rho(i)))
        for u in range(G.n):
            if types[u] is None and sum(d <= params.h_prime for d in dist[u]) >= params.h:
                types[u] = i
    return types


# ---------------------------------------------------------------------------
# Rounding
# ---------------------------------------------------------------------------

def check_rounding_bounds(G: Graph, epsilon: Fraction, h: int) -> List[Dict[str, Any]]:
    """
    Every pair with ``2^i <= d^h(u, v) <= 2^{i+1}`` against the graph rounded
    by ``ρ_i = ε·2^i/h``.

    Checked for each such i:
    ``ρ_i·d(u, v, G_i) >= d(u, v)``, ``d(u, v, G_i) <= (1+2/ε)h`` and
    ``ρ_i·d(u, v, G_i) <= (1+ε)·d^h(u, v)``.
    """
    epsilon = Fraction(epsilon)
    exact = all_pairs_distances(G)
    rounded: Dict[int, List[List[Distance]]] = {}
    violations = []
    for u in range(G.n):
        hop = bellman_ford_hops(G, u, h).dist
        for v in range(u + 1, G.n):
            dh = hop[v]
            if dh == INF:
                continue
            top = floor_log2(dh)
            scales = [top - 1, top] if top >= 1 and dh == 2 ** top else [top]
            for i in scales:
                rho = epsilon * 2 ** i / h
                if i not in rounded:
                    rounded[i] = all_pairs_distances(round_weights(G, rho))
                di = rounded[i][u][v]
                checks = {
                    "lower": rho * di >= exact[u][v],
                    "range": di <= (1 + 2 / epsilon) * h,
                    "upper": rho * di <= (1 + epsilon) * dh,
                }
                for name, ok in checks.items():
                    if not ok:
                        violations.append({"u": u, "v": v, "i": i, "check": name,
                                           "d": str(exact[u][v]), "dh": str(dh),
                                           "rounded": str(di)})
    return violations


# ---------------------------------------------------------------------------
# Hop sets
# ---------------------------------------------------------------------------

@dataclass
class HopsetCheck:
    """
    The sandwich ``d <= d^{hop_bound}(G ∪ F) <= (1+ε)·d`` over checked pairs.

    ``empirical_hops`` is the most hops any checked pair needed before its
    hop-limited distance first came within the factor.
    """

    pairs_checked: int
    all_pairs: bool
    hop_bound: int
    factor: Fraction
    worst_ratio: Fraction = Fraction(1)
    worst_pair: Optional[Tuple[int, int]] = None
    empirical_hops: int = 0
    violations: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> Dict[str, Any]:
        return {
            "pairs_checked": self.pairs_checked,
            "all_pairs": self.all_pairs,
            "hop_bound": self.hop_bound,
            "factor": str(self.factor),
            "worst_ratio": str(self.worst_ratio),
            "worst_ratio_float": float(self.worst_ratio),
            "worst_pair": list(self.worst_pair) if self.worst_pair else None,
            "empirical_hops": self.empirical_hops,
            "violations": self.violations[:20],
            "violation_count": len(self.violations),
        }


def _checked_pairs(n: int, seed: int, limit: int, samples: int) -> Dict[int, List[int]]:
    """Targets per source: every pair above the diagonal, or a seeded sample."""
    if n <= limit:
        return {u: list(range(u + 1, n)) for u in range(n)}
    rng = _rng(seed)
    chosen: Dict[int, set] = {}
    count = 0
    while count < samples:
        u, v = (int(x) for x in rng.integers(0, n, size=2))
        if u == v:
            continue
        u, v = min(u, v), max(u, v)
        if v not in chosen.setdefault(u, set()):
            chosen[u].add(v)
            count += 1
    return {u: sorted(vs) for u, vs in sorted(chosen.items())}


def check_hopset(
    G: Graph, F: HopSetEdges, hop_bound: Optional[int] = None,
    epsilon: Optional[Fraction] = None, seed: int = 0,
    limit: int = ALL_PAIRS_LIMIT, samples: int = SAMPLED_PAIRS,
) -> HopsetCheck:
    """
    Check a hop set on all pairs (n <= ``limit``) or on ``samples`` seeded
    random pairs.

    The hop bound and ε default to the ones F was certified with.
    """
    hop_bound = F.hop_bound if hop_bound is None else hop_bound
    if hop_bound is None:
        raise ValueError("the hop set carries no certified hop bound; pass one")
    factor = 1 + Fraction(F.epsilon if epsilon is None else epsilon)
    H = G.union(F.weights)
    targets = _checked_pairs(G.n, seed, limit, samples)
    report = HopsetCheck(pairs_checked=sum(len(v) for v in targets.values()),
                         all_pairs=G.n <= limit, hop_bound=hop_bound, factor=factor)
    rounds = min(hop_bound, max(G.n - 1, 0))
    for u, vs in targets.items():
        if not vs:
            continue
        exact = bellman_ford_hops(G, u, G.n).dist
        first_good: Dict[int, int] = {v: 0 for v in vs if exact[v] == 0}
        table: List[Distance] = [INF] * G.n
        table[u] = 0
        for k, table in enumerate(bellman_ford_rounds(H, u, rounds), start=1):
            for v in vs:
                if v not in first_good and table[v] <= factor * exact[v]:
                    first_good[v] = k
        for v in vs:
            d, dh = exact[v], table[v]
            if d == INF:
                if dh != INF:
                    report.violations.append({"u": u, "v": v, "check": "unreachable",
                                              "hop_distance": str(dh)})
                continue
            if dh < d:
                report.violations.append({"u": u, "v": v, "check": "lower",
                                          "d": str(d), "hop_distance": str(dh)})
            if dh > factor * d:
                report.violations.append({"u": u, "v": v, "check": "upper",
                                          "d": str(d), "hop_distance": str(dh)})
                continue
            ratio = Fraction(dh) / Fraction(d)
            if ratio > report.worst_ratio or report.worst_pair is None:
                report.worst_ratio, report.worst_pair = ratio, (u, v)
            report.empirical_hops = max(report.empirical_hops, first_good.get(v, 0))
    logger.info("hop set check: %d pairs, worst ratio %s, %d violations",
                report.pairs_checked, report.worst_ratio, len(report.violations))
    return report


def check_additive_contract(G: Graph, stage: AdditiveStage) -> List[Dict[str, Any]]:
    """
    ``d^{(p+1)⌈d/Δ⌉}(u, v, G ∪ F) <= (1+ε)·d + ε·X·Δ/(p+2)`` and never below
    d, for every connected pair.
    """
    params = stage.params
    H = G.union(stage.edges.weights)
    slack = params.additive_error
    violations = []
    for u in range(G.n):
        exact = bellman_ford_hops(G, u, G.n).dist
        budgets = {v: params.hop_budget(exact[v]) for v in range(u + 1, G.n) if exact[v] != INF}
        if not budgets:
            continue
        tables = [[INF] * G.n]
        tables[0][u] = 0
        tables.extend(bellman_ford_rounds(H, u, min(max(budgets.values()), G.n - 1)))
        for v, budget in budgets.items():
            dh = tables[min(budget, len(tables) - 1)][v]
            if dh < exact[v] or dh > (1 + params.epsilon) * exact[v] + slack:
                violations.append({"u": u, "v": v, "d": str(exact[v]), "budget": budget,
                                   "hop_distance": str(dh)})
    return violations


def check_structural_property(G: Graph, stage: AdditiveStage) -> List[Dict[str, Any]]:
    """
    For u of priority i and every v with ``d(u, v) <= r_i``: either F has
    (u, v) at exactly ``d(u, v)``, or F joins u to some node of higher
    priority with weight at most ``2·r_i``.
    """
    hierarchy, F, r = stage.hierarchy, stage.edges, stage.params.r
    dist = all_pairs_distances(G)
    violations = []
    for u in range(G.n):
        i = hierarchy.priority[u]
        escape = any(
            hierarchy.priority[x] > i and F.weight(u, x) <= 2 * r[i]
            for x in range(G.n) if x != u and F.weight(u, x) is not None
        )
        for v in range(G.n):
            if v == u or dist[u][v] > r[i]:
                continue
            if F.weight(u, v) == dist[u][v] or escape:
                continue
            violations.append({"u": u, "v": v, "priority": i, "d": str(dist[u][v]),
                               "r": r[i]})
    return violations


# ---------------------------------------------------------------------------
# End-to-end estimates
# ---------------------------------------------------------------------------

@dataclass
class EstimateCheck:
    """Estimates from s against exact distances."""

    source: int
    alpha: Fraction
    worst_ratio: Fraction = Fraction(1)
    worst_node: Optional[int] = None
    lower_violations: List[int] = field(default_factory=list)
    upper_violations: List[int] = field(default_factory=list)
    histogram: Dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.lower_violations and not self.upper_violations

    def to_dict(self) -> Dict[str, Any]:
        return {
            "source": self.source,
            "alpha": str(self.alpha),
            "worst_ratio": str(self.worst_ratio),
            "worst_ratio_float": float(self.worst_ratio),
            "worst_node": self.worst_node,
            "lower_violations": self.lower_violations,
            "upper_violations": self.upper_violations,
            "histogram": self.histogram,
        }


def ratio_histogram(ratios: Sequence[Fraction]) -> Dict[str, int]:
    """Counts of ratios per bin of :data:`RATIO_BINS`, every bin listed."""
    bins = pd.cut(pd.Series([float(x) for x in ratios], dtype="float64"),
                  bins=[0.0, *RATIO_BINS], right=True)
    counts = bins.value_counts(sort=False)
    return {str(interval): int(count) for interval, count in counts.items()}


def check_estimates(
    G: Graph, s: int, estimates: Sequence[Distance], alpha: Fraction,
    epsilon: Optional[Fraction] = None,
) -> EstimateCheck:
    """
    ``d(s, u) <= estimate(u) <= α·d(s, u)`` for every u.

    With ``epsilon`` given, a worst ratio above 1+5ε is logged as a warning.
    """
    exact = bellman_ford_hops(G, s, G.n).dist
    report = EstimateCheck(source=s, alpha=Fraction(alpha))
    ratios = []
    for u, (d, e) in enumerate(zip(exact, estimates)):
        if e < d:
            report.lower_violations.append(u)
            continue
        if d == INF or d == 0:
            if d == 0 and e != 0:
                report.upper_violations.append(u)
            continue
        if e > report.alpha * d:
            report.upper_violations.append(u)
            if e == INF:
                continue
        ratio = Fraction(e) / Fraction(d)
        ratios.append(ratio)
        if ratio > report.worst_ratio or report.worst_node is None:
            report.worst_ratio, report.worst_node = ratio, u
    report.histogram = ratio_histogram(ratios)
    if epsilon is not None and report.worst_ratio > 1 + 5 * Fraction(epsilon):
        logger.warning("worst ratio %s exceeds 1+5ε for ε=%s (node %s, alpha %s)",
                       report.worst_ratio, epsilon, report.worst_node, report.alpha)
    return report


# ---------------------------------------------------------------------------
# Paths, types and centers
# ---------------------------------------------------------------------------

def sample_paths(G: Graph, length: int, count: int, seed: int = 0,
                 attempts: int = 20) -> List[List[int]]:
    """
    Up to ``count`` simple paths of exactly ``length`` edges, by seeded
    self-avoiding walks; walks that get stuck are retried.
    """
    rng = _rng(seed)
    paths: List[List[int]] = []
    for _ in range(count * attempts):
        if len(paths) == count:
            break
        walk = [int(rng.integers(0, G.n))]
        seen = {walk[0]}
        while len(walk) <= length:
            options = sorted(v for v, _ in G.neighbors(walk[-1]) if v not in seen)
            if not options:
                break
            nxt = options[int(rng.integers(0, len(options)))]
            walk.append(nxt)
            seen.add(nxt)
        if len(walk) == length + 1:
            paths.append(walk)
    return paths


def path_weight(G: Graph, path: Sequence[int]) -> Distance:
    total = 0
    for x, y in zip(path, path[1:]):
        w = G.weight(x, y)
        if w is None:
            return INF
        total += w
    return normalize(Fraction(total))


def hitting_path_violations(
    G: Graph, types: TypeAssignment, params: OverlayParams, paths: Sequence[Sequence[int]],
) -> List[Dict[str, Any]]:
    """
    Paths of ell edges with no node u of defined type and
    ``2^{t(u)} <= 2ε·w(π)``.

    Only meaningful when ``ε·ell >= 1``; otherwise nothing is reported.
    """
    if params.epsilon * params.ell < 1:
        return []
    out = []
    for path in paths:
        if len(path) != params.ell + 1:
            continue
        weight = path_weight(G, path)
        if not any(types[u] is not None and 2 ** types[u] <= 2 * params.epsilon * weight
                   for u in path):
            out.append({"path": list(path), "weight": str(weight),
                        "types": [types[u] for u in path], "params": params.to_dict()})
    return out


def witness_constant(
    G: Graph, centers: CenterSelection, params: OverlayParams, paths: Sequence[Sequence[int]],
) -> Optional[Fraction]:
    """
    The largest, over paths, of
    ``min_{u ∈ π, v center} d^{h*}(u, v) / (ε·⌈log2 n⌉·w(π))``.

    INF when some path has no center within h* hops; None without paths.
    """
    if not paths:
        return None
    hops = min(params.h_star, max(G.n - 1, 0))
    tables = {v: bellman_ford_hops(G, v, hops).dist for v in centers}
    scale = params.epsilon * max(1, ceil_log2(G.n))
    worst: Optional[Fraction] = None
    for path in paths:
        best = min((tables[v][u] for v in tables for u in path), default=INF)
        if best == INF:
            return INF
        ratio = Fraction(best) / (scale * Fraction(path_weight(G, path)))
        worst = ratio if worst is None else max(worst, ratio)
    return worst

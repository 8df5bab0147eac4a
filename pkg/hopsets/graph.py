"""
Weighted undirected graphs and exact distance oracles.

A :class:`Graph` has nodes ``0..n-1`` and at most one edge per unordered
pair. Input graphs carry integer weights ``1..W``; graphs built inside the
package (a graph joined with its hop set, an overlay graph) may carry exact
rational weights, still at least 1.

Distances are ints or Fractions with :data:`~hopsets.constants.INF` for
"unreachable or out of range". Every search breaks ties by
``(distance, node ID)``, so tables are a pure function of the input.
"""

import heapq
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import (
    Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union,
)

import networkx as nx

from .constants import INF
from .exceptions import DisconnectedGraph, GraphError
from .numeric import Number, normalize
from .workers import ordered_map

logger = logging.getLogger(__name__)

Distance = Union[int, Fraction, float]
Edge = Tuple[int, int, Number]
Pair = Tuple[int, int]


def pair(u: int, v: int) -> Pair:
    """The canonical (smaller, larger) key for an unordered pair."""
    return (u, v) if u < v else (v, u)


class Graph:
    """
    A weighted undirected graph on nodes ``0..n-1``.

    Args:
        n: Node count, at least 1.
        edges: ``(u, v, w)`` triples. A pair may appear once.
        W: Weight bound. Defaults to the largest weight (rounded up), or 1
            for an edgeless graph.

    Raises:
        GraphError: On a self-loop, a repeated pair, an out-of-range ID, or a
            weight outside ``[1, W]``.
    """

    __slots__ = ("n", "W", "_adj", "_m")

    def __init__(self, n: int, edges: Iterable[Edge] = (), W: Optional[Number] = None):
        if not isinstance(n, int) or n < 1:
            raise GraphError(f"node count must be a positive integer, got {n!r}")
        adj: List[Dict[int, Number]] = [dict() for _ in range(n)]
        top: Number = 0
        m = 0
        for u, v, w in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) names a node outside 0..{n - 1}")
            if u == v:
                raise GraphError(f"self-loop at node {u}")
            if v in adj[u]:
                raise GraphError(f"pair ({u}, {v}) appears twice")
            w = normalize(Fraction(w)) if not isinstance(w, int) else w
            if w < 1:
                raise GraphError(f"edge ({u}, {v}) has weight {w} < 1")
            adj[u][v] = w
            adj[v][u] = w
            top = max(top, w)
            m += 1
        if W is None:
            W = max(1, math.ceil(top))
        if top > W:
            raise GraphError(f"edge weight {top} exceeds the bound W={W}")
        self.n = n
        self.W = W
        self._adj = adj
        self._m = m

    @property
    def m(self) -> int:
        return self._m

    def neighbors(self, u: int):
        """``(neighbor, weight)`` pairs of u."""
        return self._adj[u].items()

    def degree(self, u: int) -> int:
        return len(self._adj[u])

    def weight(self, u: int, v: int) -> Optional[Number]:
        return self._adj[u].get(v)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def edges(self) -> Iterator[Edge]:
        """Edges as ``(u, v, w)`` with u < v, in (u, v) order."""
        for u in range(self.n):
            for v in sorted(self._adj[u]):
                if u < v:
                    yield u, v, self._adj[u][v]

    @property
    def max_weight(self) -> Number:
        return max((w for _, _, w in self.edges()), default=0)

    @property
    def is_integral(self) -> bool:
        return all(isinstance(w, int) for _, _, w in self.edges())

    def union(self, extra: Mapping[Pair, Number], W: Optional[Number] = None) -> "Graph":
        """
        This graph joined with ``extra``, keeping the lighter weight per pair.

        The weight bound grows to cover the new edges if it has to.
        """
        merged: Dict[Pair, Number] = {(u, v): w for u, v, w in self.edges()}
        for (u, v), w in extra.items():
            key = pair(u, v)
            if key not in merged or w < merged[key]:
                merged[key] = w
        top = max(extra.values(), default=0)
        bound = max(W if W is not None else self.W, math.ceil(top), 1)
        return Graph(self.n, ((u, v, w) for (u, v), w in sorted(merged.items())), W=bound)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_weighted_edges_from(self.edges())
        return g

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and list(self.edges()) == list(other.edges())

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m}, W={self.W})"


@dataclass
class DistanceTable:
    """
    Distances from a source (or a set of roots) with a deterministic tree.

    ``parent[v]`` is None for the roots and for unreached nodes.
    """

    source: Union[int, Tuple[int, ...]]
    dist: List[Distance]
    parent: List[Optional[int]] = field(repr=False)

    def reachable(self) -> List[int]:
        return [v for v, d in enumerate(self.dist) if d != INF]

    def path_to(self, v: int) -> List[int]:
        """Tree path from the root that reached v, root first."""
        if self.dist[v] == INF:
            return []
        out = [v]
        while self.parent[out[-1]] is not None:
            out.append(self.parent[out[-1]])
        return out[::-1]


@dataclass
class HopDistanceTable:
    """d^h(source, v) for every v: lightest path with at most h edges."""

    source: int
    h: int
    dist: List[Distance]


def multi_source_dijkstra(
    G: Graph, roots: Mapping[int, Distance], R: Distance = INF,
) -> DistanceTable:
    """
    Distances from a set of roots, each starting at its own initial value.

    A node's distance is ``min_r (roots[r] + d(r, v))`` when that is at most
    R, else INF. Among equal-distance parents the smaller ID wins.
    """
    n = G.n
    dist: List[Distance] = [INF] * n
    parent: List[Optional[int]] = [None] * n
    done = [False] * n
    heap: List[Tuple[Distance, int]] = []
    for r in sorted(roots):
        d0 = roots[r]
        if d0 <= R and d0 < dist[r]:
            dist[r] = d0
            heap.append((d0, r))
    heapq.heapify(heap)
    while heap:
        d, u = heapq.heappop(heap)
        if done[u] or d > dist[u]:
            continue
        done[u] = True
        for v, w in G.neighbors(u):
            if done[v]:
                continue
            nd = d + w
            if nd > R:
                continue
            if nd < dist[v]:
                dist[v] = nd
                parent[v] = u
                heapq.heappush(heap, (nd, v))
            elif nd == dist[v] and parent[v] is not None and u < parent[v]:
                parent[v] = u
    source = tuple(sorted(roots))
    return DistanceTable(source=source[0] if len(source) == 1 else source,
                         dist=dist, parent=parent)


def dijkstra_bounded(G: Graph, s: int, R: Distance = INF) -> DistanceTable:
    """d(s, v, G) where it is at most R, INF elsewhere."""
    if not 0 <= s < G.n:
        raise GraphError(f"source {s} is not a node of {G!r}")
    if R < 0:
        raise ValueError(f"range must be non-negative, got {R}")
    return multi_source_dijkstra(G, {s: 0}, R)


def bellman_ford_rounds(G: Graph, s: int, h: int) -> Iterator[List[Distance]]:
    """
    The synchronous Bellman-Ford table after each of rounds 1..h.

    Round k relaxes every edge once against the table of round k-1, so the
    k-th table is exactly d^k(s, .).
    """
    dist: List[Distance] = [INF] * G.n
    dist[s] = 0
    active = {s}
    for _ in range(h):
        new = list(dist)
        changed = set()
        for u in sorted(active):
            du = dist[u]
            for v, w in G.neighbors(u):
                if du + w < new[v]:
                    new[v] = du + w
                    changed.add(v)
        dist = new
        active = changed
        yield list(dist)


def bellman_ford_hops(G: Graph, s: int, h: int) -> HopDistanceTable:
    """Exact d^h(s, v, G) for every v."""
    if h < 0:
        raise ValueError(f"hop bound must be non-negative, got {h}")
    dist: List[Distance] = [INF] * G.n
    dist[s] = 0
    # Past n-1 rounds nothing changes.
    for table in bellman_ford_rounds(G, s, min(h, max(G.n - 1, 0))):
        if table == dist:
            break
        dist = table
    return HopDistanceTable(source=s, h=h, dist=dist)


def round_weights(G: Graph, rho: Union[int, Fraction]) -> Graph:
    """Every weight w replaced by ceil(w / rho); node and edge sets unchanged."""
    rho = Fraction(rho)
    if rho <= 0:
        raise ValueError(f"rounding factor must be positive, got {rho}")
    edges = [(u, v, math.ceil(Fraction(w) / rho)) for u, v, w in G.edges()]
    return Graph(G.n, edges, W=max(1, math.ceil(Fraction(G.W) / rho)))


def hop_diameter(G: Graph) -> int:
    """Largest unweighted (edge-count) distance between two nodes."""
    if G.n == 1:
        return 0
    g = G.to_networkx()
    if not nx.is_connected(g):
        raise DisconnectedGraph(
            f"{G!r} has {nx.number_connected_components(g)} components"
        )
    return nx.diameter(g)


def distance_matrix(G: Graph, sources: Optional[Sequence[int]] = None) -> Dict[int, List[Distance]]:
    """Exact distance rows for the given sources (all nodes by default)."""
    sources = list(range(G.n)) if sources is None else list(sources)
    rows = ordered_map(lambda s: dijkstra_bounded(G, s).dist, sources)
    return dict(zip(sources, rows))

"""
Source detection: for every node, its σ nearest sources within range γ.

A node's list holds the σ lexicographically smallest ``(distance, source)``
pairs over the sources within γ of it. Three routes compute the same lists:

- :func:`detect_brute` runs one bounded search per source and sorts;
- :func:`detect_local` runs one early-stopping search per node;
- :func:`detect_rtz` runs σ phases, each a single search from a super-source
  on a graph augmented with shortcut arcs.

The phase construction works on arcs. Phase j finds, for every node y whose
first j-1 entries are known (call that set U(y)), the next entry. An edge
{y, v} turns into an arc into y: from v itself when U(v) = U(y), or else from
a copy ū of the nearest source u in U(v) \\ U(y), with length w(y,v) + d(v,u).
The copies and the real sources hang off the super-source by 0-length arcs,
and every search breaks ties by source ID, so a node's label is exactly its
next entry.
"""

import heapq
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import (
    AbstractSet, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple,
)

from .constants import INF
from .exceptions import GraphError
from .graph import Distance, Graph, dijkstra_bounded
from .workers import ordered_map

logger = logging.getLogger(__name__)

Entry = Tuple[Distance, int]


@dataclass
class DetectionList:
    """Per-node lists of ``(distance, source)`` entries, sorted, length <= σ."""

    lists: List[List[Entry]]
    gamma: Distance
    sigma: int

    def __getitem__(self, u: int) -> List[Entry]:
        return self.lists[u]

    def __len__(self) -> int:
        return len(self.lists)

    def sources(self, u: int) -> List[int]:
        return [s for _, s in self.lists[u]]

    def is_full(self, u: int) -> bool:
        return len(self.lists[u]) == self.sigma

    def __eq__(self, other) -> bool:
        if not isinstance(other, DetectionList):
            return NotImplemented
        return self.lists == other.lists


def _sources(G: Graph, S: Iterable[int]) -> List[int]:
    out = sorted(set(S))
    for s in out:
        if not 0 <= s < G.n:
            raise GraphError(f"source {s} is not a node of {G!r}")
    return out


def _check_sigma(sigma: int) -> None:
    if sigma < 1:
        raise ValueError(f"sigma must be at least 1, got {sigma}")


def detect_brute(G: Graph, S: Iterable[int], gamma: Distance, sigma: int) -> DetectionList:
    """Exact lists from one bounded Dijkstra per source."""
    _check_sigma(sigma)
    sources = _sources(G, S)
    entries: List[List[Entry]] = [[] for _ in range(G.n)]
    rows = ordered_map(lambda s: dijkstra_bounded(G, s, gamma).dist, sources)
    for s, dist in zip(sources, rows):
        for v, d in enumerate(dist):
            if d != INF:
                entries[v].append((d, s))
    for lst in entries:
        lst.sort()
        del lst[sigma:]
    return DetectionList(entries, gamma, sigma)


def nearest_sources(
    G: Graph, u: int, S: AbstractSet[int], gamma: Distance, sigma: int,
) -> List[Entry]:
    """u's list, from a search that stops at the σ-th source it settles."""
    found: List[Entry] = []
    dist: Dict[int, Distance] = {u: 0}
    done = set()
    heap: List[Tuple[Distance, int]] = [(0, u)]
    while heap and len(found) < sigma:
        d, x = heapq.heappop(heap)
        if x in done:
            continue
        done.add(x)
        if x in S:
            found.append((d, x))
        for y, w in G.neighbors(x):
            nd = d + w
            if nd <= gamma and nd < dist.get(y, INF):
                dist[y] = nd
                heapq.heappush(heap, (nd, y))
    return found


def detect_local(
    G: Graph, S: Iterable[int], gamma: Distance, sigma: int,
    nodes: Optional[Sequence[int]] = None,
) -> DetectionList:
    """
    Lists for ``nodes`` (all by default) from per-node early-stopping searches.

    Lists of nodes not asked for are left empty.
    """
    _check_sigma(sigma)
    source_set = frozenset(_sources(G, S))
    wanted = list(range(G.n)) if nodes is None else sorted(set(nodes))
    entries: List[List[Entry]] = [[] for _ in range(G.n)]
    if source_set:
        found = ordered_map(lambda u: nearest_sources(G, u, source_set, gamma, sigma), wanted)
        for u, lst in zip(wanted, found):
            entries[u] = lst
    return DetectionList(entries, gamma, sigma)


# ---------------------------------------------------------------------------
# Phase construction
# ---------------------------------------------------------------------------

@dataclass
class RTZPhase:
    """
    One phase of the shortcut construction.

    ``labels`` maps every original node the search settled to its
    ``(distance, source)`` key; ``found`` holds the entries appended this
    phase. ``levels`` counts original nodes settled at each distance.
    """

    index: int
    node_count: int
    arc_count: int
    labels: Dict[int, Entry] = field(repr=False)
    found: Dict[int, Entry] = field(repr=False)
    levels: Dict[Distance, int] = field(repr=False)


def incoming_arc(
    known_y: AbstractSet[int], list_v: Sequence[Entry], known_v: AbstractSet[int], w: Distance,
) -> Optional[Tuple[Optional[int], Distance]]:
    """
    What edge {y, v} of weight w becomes, seen as an arc into y.

    Returns ``(None, w)`` for an ordinary arc from v, ``(u, w + d(v, u))``
    for a shortcut from the copy of source u, or None when the edge carries
    nothing into y this phase (U(v) is a proper subset of U(y)).
    """
    if known_v == known_y:
        return None, w
    for d, u in list_v:
        if u not in known_y:
            return u, w + d
    return None


def _labelled_search(
    arcs: Dict[int, List[Tuple[int, Distance]]], roots: List[Tuple[int, int]],
    gamma: Distance,
) -> Dict[int, Entry]:
    """Dijkstra on (distance, label) keys from 0-distance labelled roots."""
    best: Dict[int, Entry] = {}
    settled: Dict[int, Entry] = {}
    heap: List[Tuple[Distance, int, int]] = []
    for node, label in roots:
        key = (0, label)
        if key < best.get(node, (INF, INF)):
            best[node] = key
            heapq.heappush(heap, (0, label, node))
    while heap:
        d, label, x = heapq.heappop(heap)
        if x in settled or (d, label) != best[x]:
            continue
        settled[x] = (d, label)
        for y, length in arcs.get(x, ()):
            nd = d + length
            if nd > gamma or y in settled:
                continue
            key = (nd, label)
            if key < best.get(y, (INF, INF)):
                best[y] = key
                heapq.heappush(heap, (nd, label, y))
    return settled


def rtz_phases(G: Graph, S: Iterable[int], gamma: Distance, sigma: int) -> Iterator[RTZPhase]:
    """
    Run the phases, yielding each as it completes.

    Stops early once no node can gain an entry: every list is either full or
    already holds all sources within γ.
    """
    _check_sigma(sigma)
    sources = _sources(G, S)
    n = G.n
    lists: List[List[Entry]] = [[] for _ in range(n)]
    if not sources:
        return
    copy_of = {u: n + i for i, u in enumerate(sources)}
    for j in range(1, min(sigma, len(sources)) + 1):
        active = [y for y in range(n) if len(lists[y]) == j - 1]
        if not active:
            break
        known = [frozenset(s for _, s in lst) for lst in lists]
        arcs: Dict[int, List[Tuple[int, Distance]]] = defaultdict(list)
        arc_count = 0
        if j == 1:
            node_count = n + 1
            roots = [(u, u) for u in sources]
            for y, v, w in G.edges():
                arcs[v].append((y, w))
                arcs[y].append((v, w))
                arc_count += 2
        else:
            node_count = n + len(sources) + 1
            roots = [(copy_of[u], u) for u in sources]
            for y, v, w in G.edges():
                for a, b in ((y, v), (v, y)):
                    arc = incoming_arc(known[a], lists[b], known[b], w)
                    if arc is None:
                        continue
                    origin, length = arc
                    arcs[b if origin is None else copy_of[origin]].append((a, length))
                    arc_count += 1
        # Super-source arcs, one per source.
        arc_count += len(sources)
        assert node_count <= n + len(sources) + 1
        # Arcs are directed: each undirected edge gives at most two.
        assert arc_count <= 2 * G.m + len(sources)

        settled = _labelled_search(arcs, roots, gamma)
        labels = {x: key for x, key in settled.items() if x < n}
        found: Dict[int, Entry] = {}
        for y in active:
            key = labels.get(y)
            if key is None:
                continue
            assert key[1] not in known[y], f"phase {j} relabelled node {y} with a known source"
            lists[y].append(key)
            found[y] = key
        levels = dict(Counter(d for d, _ in labels.values()))
        logger.debug("phase %d: %d nodes, %d arcs, %d new entries",
                     j, node_count, arc_count, len(found))
        yield RTZPhase(j, node_count, arc_count, labels, found, levels)
        if not found:
            break


def detect_rtz(G: Graph, S: Iterable[int], gamma: Distance, sigma: int) -> DetectionList:
    """Lists from the phase construction; equal to :func:`detect_brute`."""
    _check_sigma(sigma)
    lists: List[List[Entry]] = [[] for _ in range(G.n)]
    for phase in rtz_phases(G, S, gamma, sigma):
        for y, entry in phase.found.items():
            lists[y].append(entry)
    return DetectionList(lists, gamma, sigma)

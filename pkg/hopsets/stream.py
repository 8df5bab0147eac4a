"""
Multi-pass edge streams.

An :class:`EdgeStream` yields a graph's edges in some order, once per pass.
A :class:`StreamView` adds edges held in memory (a hop set) and an optional
rounding factor, and it quacks like a :class:`~hopsets.graph.Graph` for the
hop-set code: ``n``, ``W``, ``max_weight``.

The primitives below are level-synchronous: level L of a search settles
every node whose tentative distance is L, and one pass over the stream relaxes
the edges leaving them. A search to range R is accounted as R+1 passes; the
levels where nothing settles are counted without reading the stream.

Space is counted in words: one word per stored node-distance or edge.
"""

import heapq
import logging
import math
import os
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import (
    Any, Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Tuple, Union,
)

import numpy as np

from .clusters import (
    ClusterMap, PriorityHierarchy, check_range, compute_priorities,
)
from .constants import INF
from .detection import DetectionList, Entry, incoming_arc
from .exceptions import NonRewindableStream
from .graph import Distance, DistanceTable, Pair, pair
from .graphio import iter_edges, read_header
from .hopset import HopSetEdges, SequentialEngine
from .numeric import Number, ceil_log2

logger = logging.getLogger(__name__)

PathLike = Union[str, "os.PathLike[str]"]
StreamEdge = Tuple[int, int, Number]


@dataclass
class StreamLedger:
    """
    Passes and words for one streaming run.

    ``passes`` is the accounted count (R+1 per search to range R);
    ``scans`` counts actual reads of the stream. ``phases`` lists every
    search as ``{"stage", "range", "passes"}``, so ``passes`` is their sum.
    """

    passes: int = 0
    scans: int = 0
    current_space_words: int = 0
    peak_space_words: int = 0
    phases: List[Dict[str, Any]] = field(default_factory=list)
    cluster_words: int = 0
    cluster_peak_words: int = 0

    def account(self, stage: str, R: Optional[int], passes: int) -> None:
        self.passes += passes
        self.phases.append({"stage": stage, "range": R, "passes": passes})

    def alloc(self, words: int) -> None:
        self.current_space_words += words
        self.peak_space_words = max(self.peak_space_words, self.current_space_words)

    def free(self, words: int) -> None:
        self.current_space_words -= words
        assert self.current_space_words >= 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "model": "streaming",
            "passes": self.passes,
            "scans": self.scans,
            "peak_space_words": self.peak_space_words,
            "cluster_words": self.cluster_words,
            "cluster_peak_words": self.cluster_peak_words,
            "phases": list(self.phases),
        }


class EdgeStream:
    """
    A rewindable source of ``(u, v, w)`` edges.

    Args:
        source: An edge-list file path (rewind reopens it), a zero-argument
            callable returning a fresh iterator, or a plain iterable, which
            allows one pass only.
        n: Node count; read from the header for files.
        W: Weight bound; read from the header for files, otherwise the
            largest weight seen.
        ledger: Counts every pass actually read.
        multipass: Refuse a plain iterable up front instead of on its
            second pass.

    Raises:
        NonRewindableStream: For a plain iterable when ``multipass`` is set,
            and on a second pass over a plain iterable otherwise.
    """

    def __init__(
        self, source: Union[PathLike, Callable[[], Iterable[StreamEdge]], Iterable[StreamEdge]],
        n: Optional[int] = None, W: Optional[Number] = None,
        ledger: Optional[StreamLedger] = None, multipass: bool = False,
    ):
        self.ledger = ledger
        self._path: Optional[PathLike] = None
        self._factory: Optional[Callable[[], Iterable[StreamEdge]]] = None
        self._once: Optional[Iterable[StreamEdge]] = None
        self._max_weight: Optional[Number] = None
        self.reads = 0
        if isinstance(source, (str, os.PathLike)):
            self._path = source
            with open(source) as fh:
                (hn, _, hW), _ = read_header(fh)
            n, W = hn, hW if W is None else W
        elif callable(source):
            self._factory = source
        else:
            self._once = source
        if multipass and not self.rewindable:
            raise NonRewindableStream(
                "a multi-pass stream needs a file path or a callable, not a plain iterable"
            )
        if n is None:
            raise ValueError("a stream needs its node count")
        self.n = n
        self._W = W

    @property
    def rewindable(self) -> bool:
        """Whether every pass can be read, not just the first."""
        return self._once is None

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[StreamEdge], W: Optional[Number] = None,
                   seed: Optional[int] = None, ledger: Optional[StreamLedger] = None) -> "EdgeStream":
        """A stream over a fixed edge list, shuffled once by ``seed`` if given."""
        edges = list(edges)
        if seed is not None:
            rng = np.random.Generator(np.random.PCG64(seed))
            edges = [edges[int(i)] for i in rng.permutation(len(edges))]
        return cls(lambda: iter(edges), n=n, W=W, ledger=ledger)

    def scan(self) -> Iterator[StreamEdge]:
        """One pass over the edges."""
        self.reads += 1
        if self.ledger is not None:
            self.ledger.scans += 1
        if self._path is not None:
            with open(self._path) as fh:
                yield from iter_edges(fh)
        elif self._factory is not None:
            yield from self._factory()
        else:
            if self.reads > 1:
                raise NonRewindableStream("this edge stream can be read only once")
            yield from self._once

    def _measure(self) -> None:
        if self.ledger is not None:
            self.ledger.account("scan", None, 1)
        top: Number = 0
        for _, _, w in self.scan():
            top = max(top, w)
        self._max_weight = top
        if self._W is None:
            self._W = max(1, math.ceil(top))

    @property
    def W(self) -> Number:
        if self._W is None:
            self._measure()
        return self._W

    @property
    def max_weight(self) -> Number:
        if self._max_weight is None:
            self._measure()
        return self._max_weight


class StreamView:
    """
    A stream plus in-memory extra edges, optionally rounded by ``rho``.

    Reading it yields every stream edge and then every extra edge; a pair
    in both behaves like the lighter of the two.
    """

    def __init__(self, stream: EdgeStream, extra: Optional[Mapping[Pair, Number]] = None,
                 rho: Optional[Fraction] = None, W: Optional[Number] = None):
        self.stream = stream
        self.extra: Dict[Pair, Number] = dict(extra or {})
        self.rho = rho
        self.n = stream.n
        self._W = W
        self._max_weight: Optional[Number] = None

    def _round(self, w: Number) -> Number:
        if self.rho is None:
            return w
        return math.ceil(Fraction(w) / self.rho)

    def scan(self) -> Iterator[StreamEdge]:
        for u, v, w in self.stream.scan():
            yield u, v, self._round(w)
        for (u, v), w in sorted(self.extra.items()):
            yield u, v, self._round(w)

    @property
    def W(self) -> Number:
        if self._W is None:
            self._W = self.stream.W
        return self._W

    @property
    def max_weight(self) -> Number:
        """Largest weight after merging each pair to its lighter edge."""
        if self._max_weight is None:
            if self.stream.ledger is not None:
                self.stream.ledger.account("scan", None, 1)
            top: Number = 0
            seen = set()
            for u, v, w in self.stream.scan():
                key = pair(u, v)
                if key in self.extra:
                    seen.add(key)
                    w = min(w, self.extra[key])
                top = max(top, w)
            for key, w in self.extra.items():
                if key not in seen:
                    top = max(top, w)
            self._max_weight = self._round(top) if top else 0
        return self._max_weight

    def rounded(self, rho: Fraction) -> "StreamView":
        if self.rho is not None:
            raise ValueError("a rounded view cannot be rounded again")
        rho = Fraction(rho)
        return StreamView(self.stream, self.extra, rho, W=max(1, math.ceil(Fraction(self.W) / rho)))

    def union(self, F: Mapping[Pair, Number], W: Optional[Number] = None) -> "StreamView":
        merged = dict(self.extra)
        for (u, v), w in F.items():
            key = pair(u, v)
            if key not in merged or w < merged[key]:
                merged[key] = w
        top = max(F.values(), default=0)
        bound = max(W if W is not None else self.W, math.ceil(top), 1)
        return StreamView(self.stream, merged, self.rho, W=bound)

    def __repr__(self) -> str:
        return f"StreamView(n={self.n}, extra={len(self.extra)}, rho={self.rho})"


# ---------------------------------------------------------------------------
# Level-synchronous primitives
# ---------------------------------------------------------------------------

def _push(pending: Dict[int, list], queue: List[int], level: int, item) -> None:
    if level not in pending:
        pending[level] = []
        heapq.heappush(queue, level)
    pending[level].append(item)


def stream_bounded_sssp(
    view: StreamView, roots: Mapping[int, Distance], R: int, ledger: StreamLedger,
    stage: str = "finalsssp",
) -> DistanceTable:
    """Distances up to R from the roots; one read per level where something settles."""
    check_range(R)
    n = view.n
    dist: List[Distance] = [INF] * n
    parent: List[Optional[int]] = [None] * n
    settled = [False] * n
    pending: Dict[int, list] = {}
    queue: List[int] = []
    ledger.alloc(n)
    for r in sorted(roots):
        if roots[r] <= R and roots[r] < dist[r]:
            dist[r] = roots[r]
            _push(pending, queue, roots[r], r)
    while queue:
        L = heapq.heappop(queue)
        frontier = {v for v in pending.pop(L) if not settled[v] and dist[v] == L}
        if not frontier:
            continue
        for v in frontier:
            settled[v] = True
        for u, v, w in view.scan():
            for a, b in ((u, v), (v, u)):
                if a not in frontier or settled[b]:
                    continue
                nd = L + w
                if nd > R:
                    continue
                if nd < dist[b]:
                    dist[b] = nd
                    parent[b] = a
                    _push(pending, queue, nd, b)
                elif nd == dist[b] and parent[b] is not None and a < parent[b]:
                    parent[b] = a
    ledger.free(n)
    ledger.account(stage, R, R + 1)
    source = tuple(sorted(roots))
    return DistanceTable(source=source[0] if len(source) == 1 else source,
                         dist=dist, parent=parent)


def stream_detect_rtz(
    view: StreamView, S: Iterable[int], gamma: int, sigma: int, ledger: StreamLedger,
    stage: str = "priorities",
) -> DetectionList:
    """
    The phase construction over the stream.

    Level 0 of a phase reads every arc leaving the super-source and the
    source copies; later levels read the arcs leaving the nodes settled there.
    """
    check_range(gamma)
    n = view.n
    sources = sorted(set(S))
    lists: List[List[Entry]] = [[] for _ in range(n)]
    ledger.alloc(n * sigma)
    for j in range(1, min(sigma, len(sources)) + 1):
        active = [y for y in range(n) if len(lists[y]) == j - 1]
        if not active:
            break
        known = [frozenset(s for _, s in lst) for lst in lists]
        best: Dict[int, Entry] = {}
        settled: Dict[int, Entry] = {}
        pending: Dict[int, list] = {}
        queue: List[int] = []
        if j == 1:
            for u in sources:
                best[u] = (0, u)
                _push(pending, queue, 0, u)
        else:
            # The copies sit at level 0; their arcs are read in the first pass.
            _push(pending, queue, 0, None)
        while queue:
            L = heapq.heappop(queue)
            frontier = {x: best[x] for x in pending.pop(L)
                        if x is not None and x not in settled and best[x][0] == L}
            copies = j > 1 and L == 0
            if not frontier and not copies:
                continue
            settled.update(frontier)
            for u, v, w in view.scan():
                for a, b in ((u, v), (v, u)):
                    if a in settled:
                        continue
                    candidate = None
                    if j == 1:
                        if b in frontier:
                            candidate = (L + w, frontier[b][1])
                    else:
                        arc = incoming_arc(known[a], lists[b], known[b], w)
                        if arc is None:
                            continue
                        origin, length = arc
                        if origin is None and b in frontier:
                            candidate = (L + length, frontier[b][1])
                        elif origin is not None and copies:
                            candidate = (length, origin)
                    if candidate is None or candidate[0] > gamma:
                        continue
                    if candidate < best.get(a, (INF, INF)):
                        best[a] = candidate
                        _push(pending, queue, candidate[0], a)
        ledger.account(stage, gamma, gamma + 1)
        found = 0
        for y in active:
            if y in settled:
                lists[y].append(settled[y])
                found += 1
        if not found:
            break
    ledger.free(n * sigma)
    return DetectionList(lists, gamma, sigma)


def stream_clusters(
    view: StreamView, hierarchy: PriorityHierarchy, R: int, ledger: StreamLedger,
) -> ClusterMap:
    """
    Every cluster grown at once, one read per level.

    A pair (center, node) is stored only once it passes the membership test,
    so the words held never exceed ``Σ|C(v)|`` plus the level distances.
    """
    check_range(R)
    n = view.n
    # limits[i] = d(., A_i, R); level 0 is never a limit.
    limits: List[List[Distance]] = [[]]
    searched = False
    for level in hierarchy.A[1:]:
        if level:
            searched = True
            limits.append(stream_bounded_sssp(view, {a: 0 for a in level}, R, ledger,
                                              stage="clusters").dist)
        else:
            limits.append([INF] * n)
    stored_limits = n * sum(1 for level in hierarchy.A[1:] if level)
    ledger.alloc(stored_limits)

    entries: List[Dict[int, Distance]] = [dict() for _ in range(n)]
    pending: Dict[int, list] = {}
    queue: List[int] = []
    for c in range(n):
        entries[c][c] = 0
        _push(pending, queue, 0, (c, c))
    words = n
    ledger.alloc(words)
    peak = max(n if searched else 0, stored_limits + words)
    while queue:
        L = heapq.heappop(queue)
        joined: Dict[int, List[int]] = defaultdict(list)
        for c, x in pending.pop(L):
            if entries[c].get(x) == L:
                joined[x].append(c)
        if not joined:
            continue
        added = 0
        for u, v, w in view.scan():
            for a, b in ((u, v), (v, u)):
                for c in joined.get(a, ()):
                    nd = L + w
                    if nd > R or not nd < limits[hierarchy.priority[c] + 1][b]:
                        continue
                    old = entries[c].get(b)
                    if old is None:
                        added += 1
                    elif nd >= old:
                        continue
                    entries[c][b] = nd
                    _push(pending, queue, nd, (c, b))
        words += added
        ledger.alloc(added)
        peak = max(peak, stored_limits + words)
    ledger.account("clusters", R, R + 1)

    clusters = {c: dict(sorted(entries[c].items(), key=lambda item: (item[1], item[0])))
                for c in range(n)}
    result = ClusterMap(clusters, R, hierarchy)
    assert words == result.total_size
    assert peak <= result.total_size + hierarchy.p * n
    ledger.cluster_words = result.total_size
    ledger.cluster_peak_words = max(ledger.cluster_peak_words, peak)
    ledger.free(words + stored_limits)
    return result


class StreamEngine(SequentialEngine):
    """Hop-set primitives that read a :class:`StreamView` pass by pass."""

    name = "streaming"

    def __init__(self, ledger: StreamLedger):
        self.ledger = ledger

    def rounded(self, G: StreamView, rho: Fraction) -> StreamView:
        return G.rounded(rho)

    def union(self, G: StreamView, extra: HopSetEdges, W: Optional[Number] = None) -> StreamView:
        view = G.union(extra.weights, W)
        self.ledger.alloc(len(view.extra) - len(G.extra))
        return view

    def priorities(self, G: StreamView, p: int, R: Distance, q: int) -> PriorityHierarchy:
        ledger = self.ledger
        return compute_priorities(
            G, p, R, q,
            detect=lambda H, S, gamma, sigma: stream_detect_rtz(H, S, gamma, sigma, ledger),
        )

    def clusters(self, G: StreamView, hierarchy: PriorityHierarchy, R: Distance) -> ClusterMap:
        return stream_clusters(G, hierarchy, R, self.ledger)

    def bounded_sssp(self, G: StreamView, roots: Mapping[int, Distance], R: Distance) -> DistanceTable:
        return stream_bounded_sssp(G, roots, R, self.ledger)

    def scale_done(self, j: int, rho: Fraction, edges: int) -> None:
        logger.debug("stream scale %d done: %d edges, %d passes so far", j, edges, self.ledger.passes)


def large_weight(n: int, W: Number) -> bool:
    """Whether W exceeds the polylogarithmic range, taken as (log2 n)^2."""
    return W > max(1, ceil_log2(n)) ** 2

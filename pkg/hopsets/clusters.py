"""
Priorities and restricted clusters.

A priority hierarchy is a chain ``V = A_0 ⊇ A_1 ⊇ ... ⊇ A_p = ∅``; a node's
priority is the last level containing it. The cluster of v (priority i) up to
range R is every u with ``d(u, v) <= R`` that is strictly closer to v than to
any node of ``A_{i+1}``. Bunches are the dual view: v is in u's bunch exactly
when u is in v's cluster.

Levels are chosen greedily: ``A_{i+1}`` hits every full list of the q nearest
``A_i`` nodes, so no bunch at level i holds more than q centers.
"""

import heapq
import logging
import math
from dataclasses import dataclass, field
from typing import (
    IO, Callable, Collection, Dict, FrozenSet, Iterable, Iterator, List,
    Optional, Sequence, Tuple,
)

from .constants import INF
from .detection import DetectionList, detect_rtz
from .exceptions import NonIntegralRange, Unhittable
from .graph import Distance, Graph, multi_source_dijkstra
from .numeric import iroot_ceil, is_integer, ln_upper
from .workers import ordered_map

logger = logging.getLogger(__name__)

Detector = Callable[[Graph, Iterable[int], Distance, int], DetectionList]


def list_size(n: int, p: int) -> int:
    """q = ⌈2·n^{1/p}·ln(3n)·(1 + ln n)⌉ with n^{1/p} and ln rounded up."""
    value = 2 * iroot_ceil(n, p) * ln_upper(3 * n) * (1 + ln_upper(n))
    return max(1, math.ceil(value))


def greedy_hitting_set(
    collection: Sequence[Collection[int]], universe: Optional[Collection[int]] = None,
) -> List[int]:
    """
    A set meeting every member of ``collection``, chosen greedily.

    Each step takes the element lying in the most sets not yet hit, the
    smaller ID on ties.

    Raises:
        Unhittable: If some set is empty.
        ValueError: If a set has an element outside ``universe``.
    """
    sets = [frozenset(s) for s in collection]
    allowed = None if universe is None else frozenset(universe)
    containing: Dict[int, List[int]] = {}
    for index, s in enumerate(sets):
        if not s:
            raise Unhittable(f"set {index} of the collection is empty")
        if allowed is not None and not s <= allowed:
            raise ValueError(f"set {index} has elements outside the universe")
        for x in s:
            containing.setdefault(x, []).append(index)

    count = {x: len(ids) for x, ids in containing.items()}
    heap = [(-c, x) for x, c in count.items()]
    heapq.heapify(heap)
    hit = [False] * len(sets)
    remaining = len(sets)
    chosen: List[int] = []
    while remaining:
        neg, x = heapq.heappop(heap)
        if -neg != count[x]:
            heapq.heappush(heap, (-count[x], x))
            continue
        chosen.append(x)
        for index in containing[x]:
            if hit[index]:
                continue
            hit[index] = True
            remaining -= 1
            for y in sets[index]:
                count[y] -= 1
    return sorted(chosen)


@dataclass
class PriorityHierarchy:
    """The chain ``A_0 ⊇ ... ⊇ A_p`` over nodes ``0..n-1``, with its q."""

    n: int
    A: List[FrozenSet[int]]
    q: int
    R: Distance = INF
    priority: List[int] = field(init=False, repr=False)

    def __post_init__(self):
        self.A = [frozenset(level) for level in self.A]
        if len(self.A) < 2:
            raise ValueError("a hierarchy needs at least two levels")
        if self.A[0] != frozenset(range(self.n)):
            raise ValueError("A_0 must be every node")
        if self.A[-1]:
            raise ValueError("the last level must be empty")
        for i in range(len(self.A) - 1):
            if not self.A[i + 1] <= self.A[i]:
                raise ValueError(f"A_{i + 1} is not contained in A_{i}")
        priority = [0] * self.n
        for i, level in enumerate(self.A):
            for v in level:
                priority[v] = i
        self.priority = priority

    @classmethod
    def from_levels(cls, n: int, levels: Sequence[Iterable[int]], q: int = 1,
                    R: Distance = INF) -> "PriorityHierarchy":
        """Hierarchy with ``A_1..A_{p-1}`` given; A_0 and A_p are filled in."""
        return cls(n, [frozenset(range(n))] + [frozenset(x) for x in levels] + [frozenset()],
                   q=q, R=R)

    @property
    def p(self) -> int:
        return len(self.A) - 1

    def shrinkage_report(self) -> List[Dict[str, int]]:
        """Levels where ``|A_i| > n^{1-i/p}``, compared exactly as powers."""
        out = []
        for i, level in enumerate(self.A):
            if len(level) ** self.p > self.n ** (self.p - i):
                out.append({"level": i, "size": len(level), "n": self.n, "p": self.p})
        return out


def compute_priorities(
    G: Graph, p: int, R: Distance, q: Optional[int] = None, detect: Detector = detect_rtz,
) -> PriorityHierarchy:
    """
    Build the hierarchy level by level.

    ``A_{i+1}`` is the greedy hitting set of the full (size exactly q)
    detection lists ``L(v, A_i, R, q)``; once no list is full every later
    level is empty.
    """
    if p < 1:
        raise ValueError(f"p must be at least 1, got {p}")
    q = list_size(G.n, p) if q is None else q
    A: List[FrozenSet[int]] = [frozenset(range(G.n))]
    for i in range(p - 1):
        current = A[-1]
        full: List[List[int]] = []
        if current:
            lists = detect(G, current, R, q)
            full = [lists.sources(v) for v in range(G.n) if len(lists[v]) == q]
        if not full:
            break
        A.append(frozenset(greedy_hitting_set(full, current)))
        logger.debug("level %d: %d full lists, |A_%d| = %d", i, len(full), i + 1, len(A[-1]))
    A.extend(frozenset() for _ in range(p + 1 - len(A)))
    hierarchy = PriorityHierarchy(G.n, A, q=q, R=R)
    for row in hierarchy.shrinkage_report():
        logger.warning("level %(level)d has %(size)d nodes, above n^(1-i/p) for n=%(n)d p=%(p)d",
                       row)
    return hierarchy


@dataclass
class ClusterMap:
    """
    ``clusters[v]`` maps each member u of C(v) to δ(v, u).

    Centers are every node; members appear in increasing (δ, ID) order.
    """

    clusters: Dict[int, Dict[int, Distance]]
    R: Distance
    hierarchy: PriorityHierarchy = field(repr=False)
    _bunches: Optional[List[List[int]]] = field(default=None, init=False, repr=False,
                                                compare=False)

    def members(self, v: int) -> Dict[int, Distance]:
        return self.clusters[v]

    def distance(self, v: int, u: int) -> Optional[Distance]:
        return self.clusters[v].get(u)

    @property
    def total_size(self) -> int:
        return sum(len(c) for c in self.clusters.values())

    def edges(self) -> Iterator[Tuple[int, int, Distance]]:
        """``(center, member, δ)`` for every member other than the center."""
        for v in sorted(self.clusters):
            for u, d in self.clusters[v].items():
                if u != v:
                    yield v, u, d

    def bunch(self, u: int) -> List[int]:
        """Centers whose cluster holds u."""
        if self._bunches is None:
            bunches: List[List[int]] = [[] for _ in range(self.hierarchy.n)]
            for v in sorted(self.clusters):
                for member in self.clusters[v]:
                    bunches[member].append(v)
            self._bunches = bunches
        return self._bunches[u]

    def bunch_at(self, u: int, i: int) -> List[int]:
        return [v for v in self.bunch(u) if self.hierarchy.priority[v] == i]

    def dump(self, fh: IO[str]) -> None:
        for v in sorted(self.clusters):
            for u, d in self.clusters[v].items():
                fh.write(f"{v} {u} {d}\n")

    def __eq__(self, other) -> bool:
        if not isinstance(other, ClusterMap):
            return NotImplemented
        return self.clusters == other.clusters


def level_distances(G: Graph, hierarchy: PriorityHierarchy, R: Distance) -> List[List[Distance]]:
    """``d(v, A_i, R)`` for every level i and node v."""
    out = []
    for level in hierarchy.A:
        if level:
            out.append(multi_source_dijkstra(G, {a: 0 for a in level}, R).dist)
        else:
            out.append([INF] * G.n)
    return out


def check_range(R: Distance) -> None:
    if R != INF and not is_integer(R):
        raise NonIntegralRange(f"cluster range must be an integer or INF, got {R}")


def grow_cluster(
    G: Graph, center: int, limit: Sequence[Distance], R: Distance,
) -> Dict[int, Distance]:
    """
    One pruned search: a node joins while its distance stays below ``limit``.

    Only joined nodes pass the search on; nothing beyond R is explored.
    """
    members: Dict[int, Distance] = {}
    dist: Dict[int, Distance] = {center: 0}
    heap: List[Tuple[Distance, int]] = [(0, center)]
    while heap:
        d, x = heapq.heappop(heap)
        if d > R:
            break
        if x in members or d > dist[x] or not d < limit[x]:
            continue
        members[x] = d
        for y, w in G.neighbors(x):
            nd = d + w
            if nd <= R and y not in members and nd < dist.get(y, INF):
                dist[y] = nd
                heapq.heappush(heap, (nd, y))
    return members


def compute_clusters(G: Graph, hierarchy: PriorityHierarchy, R: Distance) -> ClusterMap:
    """
    C(v) for every v, from one pruned search per center.

    Raises:
        NonIntegralRange: If R is finite and not an integer.
    """
    check_range(R)
    dA = level_distances(G, hierarchy, R)
    centers = list(range(G.n))
    found = ordered_map(
        lambda v: grow_cluster(G, v, dA[hierarchy.priority[v] + 1], R), centers
    )
    result = ClusterMap(dict(zip(centers, found)), R, hierarchy)
    logger.debug("clusters up to %s: total size %d", R, result.total_size)
    return result

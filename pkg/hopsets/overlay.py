"""
Overlay networks: a small set of centers standing in for the whole graph.

Building one takes three steps:

1. **Types.** A node's type is the first rounding scale at which its ball of
   radius h′ holds at least h nodes.
2. **Centers.** A ruling set per type, on that type's rounded graph, plus the
   source.
3. **Distances to centers.** For every node and center, the best scaled
   bounded distance over all scales, which approximates the k-hop distance.

A hop set on the overlay graph then yields center estimates from the
source, and every node combines those with its own distances to centers.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .constants import INF
from .detection import detect_local
from .exceptions import PropertyViolated
from .graph import Distance, Graph, dijkstra_bounded, round_weights
from .hopset import (
    HopSetEdges, SequentialEngine, approximate_distances, finish_range, hop_set,
)
from .numeric import Number, ceil_log2, ceil_sqrt, floor_log2, normalize, parse_epsilon
from .ruling import RulingSetResult, ruling_set
from .workers import ordered_map

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OverlayParams:
    """
    Overlay parameters derived from n, W and ε.

    ``ell`` is the segment length (default ``⌈√n⌉``); ``h = max(1, ⌊ε·ell⌋)``;
    ``h_prime = ⌊(1+2/ε)h⌋``; ``h_star = 9a·ell·⌈log2 n⌉``;
    ``k = 2·h_star + 2·ell``; ``k_prime = ⌊(1+2/ε)k⌋``.
    """

    n: int
    W: int
    epsilon: Fraction
    ell: int
    a: int
    h: int
    h_prime: int
    h_star: int
    k: int
    k_prime: int

    @classmethod
    def derive(cls, n: int, W: Number, epsilon: Fraction, ell: Optional[int] = None,
               a: int = 1) -> "OverlayParams":
        epsilon = parse_epsilon(epsilon)
        ell = max(1, ceil_sqrt(n)) if ell is None else ell
        if ell < 1 or a < 1:
            raise ValueError(f"ell and a must be positive, got ell={ell} a={a}")
        stretch = 1 + 2 / epsilon
        h = max(1, math.floor(epsilon * ell))
        h_star = 9 * a * ell * ceil_log2(n)
        k = 2 * h_star + 2 * ell
        return cls(n=n, W=max(1, math.ceil(W)), epsilon=epsilon, ell=ell, a=a, h=h,
                   h_prime=math.floor(stretch * h), h_star=h_star, k=k,
                   k_prime=math.floor(stretch * k))

    @property
    def scales(self) -> int:
        """Type scales ``0..⌊log2 nW⌋``."""
        return floor_log2(self.n * self.W) + 1

    @property
    def pde_scales(self) -> int:
        """Scales ``0..⌊log2 kW⌋`` for distances to centers."""
        return floor_log2(self.k * self.W) + 1

    @property
    def separation(self) -> int:
        """Ruling-set separation 2h′+1."""
        return 2 * self.h_prime + 1

    def rho(self, i: int) -> Fraction:
        return self.epsilon * 2 ** i / self.h

    def phi(self, i: int) -> Fraction:
        return self.epsilon * 2 ** i / self.k

    @property
    def witness_factor(self) -> Fraction:
        """c = 2ε²·a·⌈log2 n⌉·(2h′+1)/h."""
        return 2 * self.epsilon ** 2 * self.a * ceil_log2(self.n) * self.separation / self.h

    def alpha(self, stretch: Fraction) -> Fraction:
        """
        End-to-end factor for a hop set certified to ``stretch``.

        1+ε when every shortest path has at most k edges, else
        ``(1+ε)²·stretch·(1+2c)``.
        """
        if self.k >= self.n - 1:
            return 1 + self.epsilon
        return (1 + self.epsilon) ** 2 * Fraction(stretch) * (1 + 2 * self.witness_factor)

    def to_dict(self) -> Dict[str, Any]:
        return {"n": self.n, "W": self.W, "epsilon": str(self.epsilon), "ell": self.ell,
                "a": self.a, "h": self.h, "h_prime": self.h_prime, "h_star": self.h_star,
                "k": self.k, "k_prime": self.k_prime}


@dataclass
class TypeAssignment:
    """``types[u]`` is u's type, or None when no scale qualifies."""

    types: List[Optional[int]]
    scales: int
    examined: int = 0

    def __getitem__(self, u: int) -> Optional[int]:
        return self.types[u]

    def of_type(self, i: int) -> List[int]:
        return [u for u, t in enumerate(self.types) if t == i]

    def defined(self) -> List[int]:
        """Types that at least one node has."""
        return sorted({t for t in self.types if t is not None})


def compute_types(G: Graph, params: OverlayParams) -> TypeAssignment:
    """Smallest i with ``|B(u, G_i, h′)| >= h``, scale by scale over untyped nodes."""
    types: List[Optional[int]] = [None] * G.n
    untyped = list(range(G.n))
    examined = 0
    for i in range(params.scales):
        if not untyped:
            break
        examined += 1
        Gi = round_weights(G, params.rho(i))
        lists = detect_local(Gi, range(G.n), params.h_prime, params.h, nodes=untyped)
        for u in untyped:
            if len(lists[u]) == params.h:
                types[u] = i
        untyped = [u for u in untyped if types[u] is None]
        logger.debug("scale %d: %d nodes still untyped", i, len(untyped))
    return TypeAssignment(types, params.scales, examined)


@dataclass
class CenterSelection:
    """Centers (sorted, source included) and the ruling set chosen per type."""

    nodes: Tuple[int, ...]
    source: int
    per_type: Dict[int, RulingSetResult] = field(default_factory=dict, repr=False)

    def __iter__(self):
        return iter(self.nodes)

    def __len__(self) -> int:
        return len(self.nodes)

    def __contains__(self, v: int) -> bool:
        return v in self.nodes


def select_centers(
    G: Graph, types: TypeAssignment, params: OverlayParams, s: int,
) -> CenterSelection:
    """
    A (2h′+1)-ruling set of each type's nodes on that type's rounded graph,
    plus s.

    Raises:
        PropertyViolated: If some type contributes more than n/h centers.
    """
    chosen = {s}
    per_type: Dict[int, RulingSetResult] = {}
    for i in types.defined():
        Gi = round_weights(G, params.rho(i))
        result = ruling_set(Gi, types.of_type(i), params.separation, params.a)
        if len(result.T) * params.h > G.n:
            raise PropertyViolated(
                f"type {i} has {len(result.T)} centers, more than n/h = {G.n}/{params.h}",
                details={"type": i, "centers": len(result.T), "n": G.n, "h": params.h},
            )
        per_type[i] = result
        chosen.update(result.T)
    logger.info("%d centers over %d types", len(chosen), len(per_type))
    return CenterSelection(tuple(sorted(chosen)), s, per_type)


@dataclass
class OverlayNetwork:
    """
    Centers and ``dhat[u][v]`` for every node u and every center v reached.

    The overlay graph joins two centers by their ``dhat`` value.
    """

    n: int
    centers: Tuple[int, ...]
    source: int
    dhat: List[Dict[int, Distance]]
    params: OverlayParams = field(repr=False)

    def estimate(self, u: int, v: int) -> Distance:
        return self.dhat[u].get(v, INF)

    @property
    def index(self) -> Dict[int, int]:
        return {v: i for i, v in enumerate(self.centers)}

    def as_graph(self) -> Tuple[Graph, Dict[int, int]]:
        """The overlay graph on ``0..N-1`` (centers in ID order) and the index map."""
        index = self.index
        edges = []
        for i, u in enumerate(self.centers):
            for v, d in sorted(self.dhat[u].items()):
                if v in index and u < v:
                    edges.append((i, index[v], d))
        return Graph(len(self.centers), edges), index


def distances_to_centers(
    G: Graph, centers: Iterable[int], params: OverlayParams, s: Optional[int] = None,
) -> OverlayNetwork:
    """
    ``dhat(u, v) = min_i φ_i·d(u, v, k′, Ĝ_i)`` with ``φ_i = ε·2^i/k``.

    Every stored value lies between ``d(u, v, G)`` and
    ``(1+ε)·d^k(u, v, G)``.
    """
    nodes = tuple(sorted(set(centers)))
    s = nodes[0] if s is None else s
    dhat: List[Dict[int, Distance]] = [dict() for _ in range(G.n)]
    for i in range(params.pde_scales):
        phi = params.phi(i)
        Gi = round_weights(G, phi)
        rows = ordered_map(lambda v: dijkstra_bounded(Gi, v, params.k_prime).dist, nodes)
        for v, dist in zip(nodes, rows):
            for u, d in enumerate(dist):
                if d == INF:
                    continue
                value = normalize(phi * d)
                if value < dhat[u].get(v, INF):
                    dhat[u][v] = value
    return OverlayNetwork(G.n, nodes, s, dhat, params)


def finish_sssp(
    overlay: OverlayNetwork, F: HopSetEdges, s: int, hop_bound: int, epsilon: Fraction,
    engine: Optional[SequentialEngine] = None, R: Optional[int] = None,
) -> Dict[int, Distance]:
    """
    Center estimates from s on the overlay graph joined with F.

    F is indexed like :meth:`OverlayNetwork.as_graph`.
    """
    engine = engine or SequentialEngine()
    Gp, index = overlay.as_graph()
    H = engine.union(Gp, F)
    values = approximate_distances(H, index[s], hop_bound, epsilon, engine, R)
    return {v: values[i] for v, i in index.items()}


def combine(overlay: OverlayNetwork, dtilde: Mapping[int, Distance], u: int) -> Distance:
    """``min(dhat(u, s), min_v dtilde(v) + dhat(u, v))``."""
    best = overlay.estimate(u, overlay.source)
    for v, d in overlay.dhat[u].items():
        if v in dtilde:
            best = min(best, dtilde[v] + d)
    return normalize(best) if best != INF else INF


@dataclass
class ExtractedPath:
    """
    A walk back from u toward the source.

    ``complete`` is False when the walk stopped at ``stuck_at``, a node with
    no neighbor satisfying the recovery inequality.
    """

    nodes: List[int]
    weight: Number
    complete: bool
    stuck_at: Optional[int] = None


def extract_path(
    G: Graph, estimates: Sequence[Distance], u: int, s: Optional[int] = None,
) -> ExtractedPath:
    """
    Follow neighbors y with ``estimates[y] + w(x, y) <= estimates[x]``
    (smallest ID first) from u until s.

    The path is returned source first.
    """
    if s is None:
        s = min(v for v, d in enumerate(estimates) if d == 0)
    if estimates[u] == INF:
        return ExtractedPath([u], 0, False, u)
    walk = [u]
    weight: Number = 0
    x = u
    while x != s:
        nxt = None
        for y, w in sorted(G.neighbors(x)):
            if estimates[y] + w <= estimates[x]:
                nxt, step = y, w
                break
        if nxt is None:
            logger.debug("path recovery from %d stuck at %d", u, x)
            return ExtractedPath(walk[::-1], weight, False, x)
        walk.append(nxt)
        weight += step
        x = nxt
    return ExtractedPath(walk[::-1], normalize(Fraction(weight)), True)


def approx_weighted_diameter(estimates: Sequence[Distance]) -> Distance:
    """``max_v d′(s, v)``: between WD/2 and α·WD."""
    return max(estimates)


@dataclass
class OverlayResult:
    """Estimates for every node plus everything built to get them."""

    source: int
    estimates: List[Distance]
    overlay: OverlayNetwork
    types: TypeAssignment
    centers: CenterSelection
    hopset: HopSetEdges
    dtilde: Dict[int, Distance]
    alpha: Fraction
    R: int


def overlay_sssp(
    G: Graph, s: int, params: OverlayParams, p: Optional[int] = None,
    engine: Optional[SequentialEngine] = None, R: Optional[int] = None,
) -> OverlayResult:
    """Types, centers, distances to centers, overlay hop set, finish and combine."""
    engine = engine or SequentialEngine()
    types = compute_types(G, params)
    centers = select_centers(G, types, params, s)
    overlay = distances_to_centers(G, centers, params, s)
    Gp, _ = overlay.as_graph()
    F = hop_set(Gp, params.epsilon, p=p, engine=engine)
    R = finish_range(F.hop_bound, params.epsilon) if R is None else R
    dtilde = finish_sssp(overlay, F, s, F.hop_bound, params.epsilon, engine, R)
    estimates = [combine(overlay, dtilde, u) for u in range(G.n)]
    return OverlayResult(s, estimates, overlay, types, centers, F, dtilde,
                         params.alpha(F.stretch), R)

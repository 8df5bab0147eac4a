"""
Hop sets in three stages.

1. The additive stage joins every node to its restricted cluster: one edge
   per (center, member) pair, weighted by their exact distance.
2. The multiplicative stage runs the additive stage on the graph rounded at
   each distance scale and scales the edges back, so every pair's
   h-hop distance is approximated at the scale that matches it.
3. The full construction applies the multiplicative stage level by level,
   each level on the graph joined with everything added so far.

Each stage states what its edges guarantee. A hop-set result carries
``hop_bound``, ``stretch`` and ``bound_kind``: for every pair,
``d^{hop_bound}(u, v, G ∪ F) <= stretch · d(u, v, G)``. The kinds are

- ``direct``: with p = 1 every cluster is a full ball covering the rounded
  distance of every pair, so one hop suffices at the matching scale;
- ``stated`` / ``raw``: the multiplicative guarantee held; the bound is the
  larger of ``⌈(p+2)h/Δ⌉`` and ``(p+1)⌈h/Δ⌉`` and the kind says which;
- ``trivial``: no level could be certified; ``n-1`` hops with stretch 1.

All arithmetic is exact. Edge weights are rationals ``δ·ρ_j``.
"""

import logging
import math
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import (
    IO, Any, Dict, Iterator, List, Mapping, Optional, Tuple, Union,
)

from .clusters import (
    ClusterMap, PriorityHierarchy, compute_clusters, compute_priorities, list_size,
)
from .constants import INF
from .detection import detect_rtz
from .exceptions import ConfigurationError, GraphFormatError, PreconditionViolated
from .graph import (
    Distance, DistanceTable, Graph, Pair, multi_source_dijkstra, pair, round_weights,
)
from .numeric import (
    Number, as_fraction, ceil_log2, ceil_sqrt, floor_log2, iroot_ceil, normalize,
    parse_epsilon, root_exponent,
)

logger = logging.getLogger(__name__)

PathLike = Union[str, "os.PathLike[str]"]


@dataclass
class HopSetEdges:
    """
    Shortcut edges keyed by unordered pair, lighter weight kept on merge.

    ``hop_bound`` and ``stretch`` are None/1 until a construction certifies
    them; ``report`` collects per-scale and per-level details.
    """

    n: int
    epsilon: Fraction
    weights: Dict[Pair, Number] = field(default_factory=dict)
    hop_bound: Optional[int] = None
    stretch: Fraction = Fraction(1)
    bound_kind: Optional[str] = None
    report: Dict[str, Any] = field(default_factory=dict, repr=False)

    def add(self, u: int, v: int, w: Number) -> None:
        if u == v:
            return
        key = pair(u, v)
        w = normalize(Fraction(w))
        if key not in self.weights or w < self.weights[key]:
            self.weights[key] = w

    def merge(self, other: "HopSetEdges") -> None:
        for (u, v), w in other.weights.items():
            self.add(u, v, w)

    def weight(self, u: int, v: int) -> Optional[Number]:
        return self.weights.get(pair(u, v))

    def __contains__(self, key: Pair) -> bool:
        return pair(*key) in self.weights

    def __len__(self) -> int:
        return len(self.weights)

    def __iter__(self) -> Iterator[Tuple[int, int, Number]]:
        for (u, v), w in sorted(self.weights.items()):
            yield u, v, w

    def certify(self, hop_bound: int, stretch: Fraction, kind: str) -> None:
        self.hop_bound = hop_bound
        self.stretch = Fraction(stretch)
        self.bound_kind = kind

    def summary(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "epsilon": str(self.epsilon),
            "size": len(self),
            "hop_bound": self.hop_bound,
            "stretch": str(self.stretch),
            "bound_kind": self.bound_kind,
        }


# ---------------------------------------------------------------------------
# Engines
# ---------------------------------------------------------------------------

class SequentialEngine:
    """
    In-memory primitives for the hop-set stages.

    Other engines run the same stages under a cost model; they must return
    identical values.
    """

    name = "sequential"

    def rounded(self, G: Graph, rho: Fraction) -> Graph:
        return round_weights(G, rho)

    def union(self, G: Graph, extra: HopSetEdges, W: Optional[Number] = None) -> Graph:
        return G.union(extra.weights, W)

    def priorities(self, G: Graph, p: int, R: Distance, q: int) -> PriorityHierarchy:
        return compute_priorities(G, p, R, q, detect=detect_rtz)

    def clusters(self, G: Graph, hierarchy: PriorityHierarchy, R: Distance) -> ClusterMap:
        return compute_clusters(G, hierarchy, R)

    def bounded_sssp(self, G: Graph, roots: Mapping[int, Distance], R: Distance) -> DistanceTable:
        return multi_source_dijkstra(G, roots, R)

    def scale_done(self, j: int, rho: Fraction, edges: int) -> None:
        pass


# ---------------------------------------------------------------------------
# Additive stage
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AdditiveParams:
    """
    Parameters of one additive stage.

    ``X`` is ``⌈n^{1/p}⌉``, enlarged when needed so that
    ``beta <= epsilon·X·Delta/(p+2)``; ``R = X·Delta``. ``q`` is the
    detection list size the hierarchy is built with, :func:`list_size`
    unless overridden.
    """

    n: int
    Delta: int
    epsilon: Fraction
    p: int
    X: int
    R: int
    r: Tuple[int, ...]
    beta: int
    q: int

    @classmethod
    def derive(
        cls, n: int, Delta: int, epsilon: Fraction, p: Optional[int] = None,
        q: Optional[int] = None,
    ) -> "AdditiveParams":
        epsilon = parse_epsilon(epsilon)
        if Delta < 1:
            raise ValueError(f"Delta must be at least 1, got {Delta}")
        if q is not None and q < 1:
            raise ValueError(f"list size must be at least 1, got {q}")
        if p is None:
            p = root_exponent(n, 9 / epsilon)
        r = [Delta]
        for _ in range(1, p):
            r.append(math.ceil((4 + 2 * epsilon) * sum(r) / epsilon))
        beta = 2 * sum(r)
        X = max(iroot_ceil(n, p), math.ceil((p + 2) * beta / (epsilon * Delta)))
        params = cls(n=n, Delta=Delta, epsilon=epsilon, p=p, X=X, R=X * Delta,
                     r=tuple(r), beta=beta, q=list_size(n, p) if q is None else q)
        for row in params.growth_violations():
            logger.warning("r_%(i)d prefix sum %(sum)d exceeds 7^i·Delta/eps^i", row)
        return params

    @property
    def additive_error(self) -> Fraction:
        """epsilon·X·Delta/(p+2)."""
        return self.epsilon * self.X * self.Delta / (self.p + 2)

    def growth_violations(self) -> List[Dict[str, int]]:
        """Indices where ``Σ_{j<=i} r_j > 7^i·Delta/epsilon^i``."""
        out = []
        total = 0
        for i, r_i in enumerate(self.r):
            total += r_i
            if total > Fraction(7 ** i * self.Delta) / self.epsilon ** i:
                out.append({"i": i, "sum": total})
        return out

    def hop_budget(self, distance: Number) -> int:
        """(p+1)·⌈d/Delta⌉ hops for a pair at distance d."""
        return (self.p + 1) * math.ceil(Fraction(distance) / self.Delta)


@dataclass
class AdditiveStage:
    """Everything one additive stage computed."""

    edges: HopSetEdges
    params: AdditiveParams
    hierarchy: PriorityHierarchy
    clusters: ClusterMap


def additive_stage(
    G: Graph, Delta: int, epsilon: Fraction, p: Optional[int] = None,
    engine: Optional[SequentialEngine] = None, q: Optional[int] = None,
) -> AdditiveStage:
    engine = engine or SequentialEngine()
    params = AdditiveParams.derive(G.n, Delta, epsilon, p, q)
    hierarchy = engine.priorities(G, params.p, params.R, params.q)
    clusters = engine.clusters(G, hierarchy, params.R)
    edges = HopSetEdges(G.n, params.epsilon)
    for v, u, d in clusters.edges():
        edges.add(v, u, d)
    edges.report = {"p": params.p, "q": params.q, "X": params.X, "R": params.R,
                    "beta": params.beta, "cluster_size": clusters.total_size}
    return AdditiveStage(edges, params, hierarchy, clusters)


def hop_reduction_additive(
    G: Graph, Delta: int, epsilon: Fraction, p: Optional[int] = None,
    engine: Optional[SequentialEngine] = None,
) -> HopSetEdges:
    """
    Cluster edges with exact weights.

    For every connected pair,
    ``d^{(p+1)⌈d/Δ⌉}(u, v, G ∪ F) <= (1+ε)·d(u, v, G) + ε·X·Δ/(p+2)``.
    """
    return additive_stage(G, Delta, epsilon, p, engine).edges


# ---------------------------------------------------------------------------
# Multiplicative stage
# ---------------------------------------------------------------------------

def hop_reduction(
    G: Graph, Delta: int, h: int, epsilon: Fraction, W: Number,
    p: Optional[int] = None, engine: Optional[SequentialEngine] = None, force: bool = False,
) -> HopSetEdges:
    """
    Scaled additive stages, one per distance scale.

    Args:
        G: Graph with weights at most W.
        Delta: Target hop ratio.
        h: Hop count the result shortens.
        epsilon: Accuracy, in (0, 1].
        W: Weight bound; scales run ``j = 0..⌊log2(n·W)⌋``.
        p: Level count override for the additive stages.
        engine: Primitive provider; in memory by default.
        force: Build even when no hop-bound claim applies.

    Raises:
        PreconditionViolated: If no claim applies to h and ``force`` is off.
    """
    engine = engine or SequentialEngine()
    epsilon = parse_epsilon(epsilon)
    if h < 1:
        raise ValueError(f"hop count must be at least 1, got {h}")
    inner_eps = epsilon / 6
    inner_delta = math.ceil(3 * Delta / inner_eps)
    params = AdditiveParams.derive(G.n, inner_delta, inner_eps, p)
    claim = _reduction_claim(params, Delta, h)
    if claim is None and not force:
        raise PreconditionViolated(
            f"h={h} is below the range where hop reduction is guaranteed "
            f"(n={G.n}, Delta={Delta}, p={params.p}, X={params.X})"
        )

    bound = max(Fraction(W), Fraction(G.W))
    scales = floor_log2(G.n * bound) + 1
    F = HopSetEdges(G.n, epsilon)
    for j in range(scales):
        rho = inner_eps * 2 ** j / h
        Gj = engine.rounded(G, rho)
        stage = additive_stage(Gj, inner_delta, inner_eps, params.p, engine)
        for (u, v), d in stage.edges.weights.items():
            F.add(u, v, d * rho)
        engine.scale_done(j, rho, len(stage.edges))
    F.report = {"h": h, "Delta": Delta, "scales": scales, "p": params.p, "X": params.X,
                "R": params.R, "inner_delta": inner_delta}
    if claim is not None:
        hop_bound, stretch, kind = claim
        F.certify(hop_bound, stretch, kind)
    logger.debug("hop reduction h=%d: %d scales, %d edges, claim %s", h, scales, len(F), claim)
    return F


def _reduction_claim(
    params: AdditiveParams, Delta: int, h: int,
) -> Optional[Tuple[int, Fraction, str]]:
    """(hop bound, stretch, kind) the scaled stages guarantee, if any."""
    inner_eps = params.epsilon
    if params.p == 1 and params.R >= (1 + 2 / inner_eps) * h:
        return 1, 1 + inner_eps, "direct"
    if 3 * (params.p + 2) * h >= inner_eps * params.X * params.Delta:
        stated = math.ceil(Fraction((params.p + 2) * h, Delta))
        raw = (params.p + 1) * math.ceil(Fraction(h, Delta))
        kind = "stated" if stated >= raw else "raw"
        return max(stated, raw), 1 + 6 * inner_eps, kind
    return None


# ---------------------------------------------------------------------------
# Full construction
# ---------------------------------------------------------------------------

def sqrt_log_upper(n: int) -> int:
    """An integer upper bound on sqrt(log2 n), at least 1."""
    return ceil_sqrt(max(1, ceil_log2(n)))


def hopset_parameters(n: int, epsilon: Fraction, p: Optional[int] = None) -> Dict[str, Any]:
    """Level accuracy, p, X, Δ and the per-level hop counts of :func:`hop_set`."""
    epsilon = parse_epsilon(epsilon)
    level_eps = epsilon / (2 * sqrt_log_upper(n))
    if p is None:
        p = root_exponent(n, 54 / level_eps)
    X = iroot_ceil(n, p)
    return {
        "epsilon": epsilon,
        "level_epsilon": level_eps,
        "p": p,
        "X": X,
        "Delta": (p + 2) * X,
        "h": [iroot_ceil(n ** (p - i), p) for i in range(p)],
    }


def hop_set(
    G: Graph, epsilon: Fraction, W: Optional[Number] = None, p: Optional[int] = None,
    engine: Optional[SequentialEngine] = None,
) -> HopSetEdges:
    """
    A hop set for G with a certified hop bound.

    Level i reduces ``h_i = ⌈n^{1-i/p}⌉`` hops on ``H_i = G ∪ F_1 ∪ ... ∪ F_i``.
    A level's claim is taken only when it starts from at least the current
    certified hop count, improves it, and keeps the accumulated stretch
    within 1+ε; the result is then certified with the chained claim.
    """
    engine = engine or SequentialEngine()
    P = hopset_parameters(G.n, epsilon, p)
    epsilon = P["epsilon"]
    W = G.W if W is None else W
    scaled_W = (1 + epsilon) * G.n * W

    F = HopSetEdges(G.n, epsilon)
    H = G
    hop_bound = max(1, G.n - 1)
    stretch = Fraction(1)
    kind = "trivial"
    levels: List[Dict[str, Any]] = []
    for i, h_i in enumerate(P["h"]):
        level = hop_reduction(H, P["Delta"], h_i, P["level_epsilon"], max(scaled_W, H.W),
                              p=P["p"], engine=engine, force=True)
        F.merge(level)
        H = engine.union(H, level)
        taken = (
            level.hop_bound is not None
            and h_i >= hop_bound
            and level.hop_bound < hop_bound
            and stretch * level.stretch <= 1 + epsilon
        )
        if taken:
            hop_bound = level.hop_bound
            stretch *= level.stretch
            kind = level.bound_kind
        elif level.hop_bound is None:
            logger.info("level %d (h=%d) has no hop-bound claim", i, h_i)
        levels.append({"level": i, "h": h_i, "size": len(level), "claim": level.bound_kind,
                       "hop_bound": level.hop_bound, "taken": taken})
    F.certify(hop_bound, stretch, kind)
    F.report = {
        "p": P["p"], "X": P["X"], "Delta": P["Delta"],
        "level_epsilon": str(P["level_epsilon"]), "levels": levels,
    }
    logger.info("hop set: n=%d p=%d |F|=%d hop bound %d (%s)",
                G.n, P["p"], len(F), hop_bound, kind)
    return F


def exponential_inequality(x: Fraction, y: int) -> bool:
    """Whether (1 + x/(2y))^y <= 1 + x, evaluated exactly."""
    x = Fraction(x)
    return (1 + x / (2 * y)) ** y <= 1 + x


# ---------------------------------------------------------------------------
# Distances from a hop set
# ---------------------------------------------------------------------------

def finish_range(hop_bound: int, epsilon: Fraction) -> int:
    """R = ⌈(1+2/ε)·h⌉, the rounded distance of any pair at its own scale."""
    return math.ceil((1 + 2 / Fraction(epsilon)) * hop_bound)


def approximate_distances(
    H: Graph, s: int, hop_bound: int, epsilon: Fraction,
    engine: Optional[SequentialEngine] = None, R: Optional[int] = None,
) -> List[Distance]:
    """
    ``min_i ρ_i·d(s, v, R, H_i)`` over the rounded copies ``H_i``.

    With ``ρ_i = ε·2^i/h`` and i up to ``⌊log2(h·max weight)⌋``, every v
    gets ``d(s, v, H) <= value <= (1+ε)·d^h(s, v, H)``.
    """
    engine = engine or SequentialEngine()
    epsilon = parse_epsilon(epsilon)
    R = finish_range(hop_bound, epsilon) if R is None else R
    top = max(1, math.ceil(H.max_weight))
    best: List[Distance] = [INF] * H.n
    for i in range(floor_log2(hop_bound * top) + 1):
        rho = epsilon * 2 ** i / hop_bound
        table = engine.bounded_sssp(engine.rounded(H, rho), {s: 0}, R)
        for v, d in enumerate(table.dist):
            if d != INF:
                value = normalize(rho * d)
                if value < best[v]:
                    best[v] = value
    best[s] = 0
    return best


@dataclass
class SSSPResult:
    """Estimates from a hop set, with the factor they are certified to."""

    source: int
    estimates: List[Distance]
    hopset: HopSetEdges
    alpha: Fraction
    R: int


def hopset_sssp(
    G: Graph, s: int, epsilon: Fraction, W: Optional[Number] = None,
    p: Optional[int] = None, engine: Optional[SequentialEngine] = None,
) -> SSSPResult:
    """Hop set, then :func:`approximate_distances` on G ∪ F."""
    engine = engine or SequentialEngine()
    epsilon = parse_epsilon(epsilon)
    F = hop_set(G, epsilon, W, p, engine)
    H = engine.union(G, F)
    estimates = approximate_distances(H, s, F.hop_bound, epsilon, engine)
    return SSSPResult(s, estimates, F, (1 + epsilon) * F.stretch,
                      finish_range(F.hop_bound, epsilon))


# ---------------------------------------------------------------------------
# Files
# ---------------------------------------------------------------------------

_HEADER = re.compile(r"#\s*hopset\s+n=(\d+)\s+eps=(\d+)/(\d+)\s*$")
_CLAIM = re.compile(r"#\s*hop_bound=(\d+)\s+stretch=(\S+)\s+kind=(\w+)\s*$")


def write_hopset(F: HopSetEdges, dest: Union[PathLike, IO[str]]) -> None:
    """Header ``# hopset n=<n> eps=<num>/<den>`` then one ``u v w`` line per edge."""
    if hasattr(dest, "write"):
        _write_hopset(F, dest)
        return
    with open(dest, "w") as fh:
        _write_hopset(F, fh)


def _write_hopset(F: HopSetEdges, fh: IO[str]) -> None:
    eps = Fraction(F.epsilon)
    fh.write(f"# hopset n={F.n} eps={eps.numerator}/{eps.denominator}\n")
    if F.hop_bound is not None:
        fh.write(f"# hop_bound={F.hop_bound} stretch={F.stretch} kind={F.bound_kind}\n")
    for u, v, w in F:
        fh.write(f"{u} {v} {w}\n")


def read_hopset(path: PathLike) -> HopSetEdges:
    """Parse a file written by :func:`write_hopset`."""
    with open(path) as fh:
        lines = list(fh)
    if not lines or not _HEADER.match(lines[0].strip()):
        raise GraphFormatError("missing `# hopset n=<n> eps=<num>/<den>` header", line_number=1)
    n, num, den = (int(x) for x in _HEADER.match(lines[0].strip()).groups())
    F = HopSetEdges(n, Fraction(num, den))
    for number, line in enumerate(lines[1:], start=2):
        text = line.strip()
        claim = _CLAIM.match(text)
        if claim:
            F.certify(int(claim.group(1)), as_fraction(claim.group(2)), claim.group(3))
            continue
        if not text or text.startswith("#"):
            continue
        fields = text.split()
        if len(fields) != 3:
            raise GraphFormatError(f"line {number}: expected `u v w`", line_number=number)
        try:
            u, v = int(fields[0]), int(fields[1])
            w = as_fraction(fields[2])
        except (ValueError, ConfigurationError):
            raise GraphFormatError(f"line {number}: bad edge {text!r}", line_number=number) from None
        if not (0 <= u < n and 0 <= v < n) or u == v or w < 1:
            raise GraphFormatError(f"line {number}: edge out of range", line_number=number)
        F.add(u, v, w)
    return F

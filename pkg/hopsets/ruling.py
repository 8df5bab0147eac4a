"""
Deterministic ruling sets by bitwise beeping.

Every node of U writes its ID in b = a·⌈log2 n⌉ bits, most significant bit
first. Iteration j looks at bit j of each survivor: 0-bit survivors stay and
beep to everything within weighted distance c-1; 1-bit survivors stay only if
no beep reached them. After b iterations the survivors are pairwise at
distance >= c and every node of U lies within b·c of one of them.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Mapping, Optional, Tuple

from .constants import INF
from .exceptions import GraphError, IdWidthExceeded, RulingSetViolation
from .graph import Distance, Graph, dijkstra_bounded, multi_source_dijkstra
from .numeric import ceil_log2

logger = logging.getLogger(__name__)


@dataclass
class RulingSetResult:
    """
    A ruling set T of U with its parameters.

    ``beta`` is the coverage bound b·c; ``history`` holds the survivors
    after each iteration (``history[0]`` is U itself).
    """

    T: Tuple[int, ...]
    c: int
    beta: int
    rounds_used: int
    bits: int
    history: List[Tuple[int, ...]] = field(default_factory=list, repr=False)
    report: Dict[str, Any] = field(default_factory=dict, repr=False)

    def __contains__(self, u: int) -> bool:
        return u in self.T

    def __len__(self) -> int:
        return len(self.T)


def id_bits(n: int, a: int) -> int:
    """b = a·⌈log2 n⌉."""
    return a * ceil_log2(n)


def ruling_rounds(n: int, c: int, a: int) -> int:
    """Rounds the beeping schedule takes: b·(c-1)."""
    return id_bits(n, a) * (c - 1)


def ruling_set(
    G: Graph, U: Iterable[int], c: int, a: int = 1,
    ids: Optional[Mapping[int, int]] = None, verify: bool = True,
) -> RulingSetResult:
    """
    Compute a (c, b·c)-ruling set of U on G's weighted metric.

    Args:
        G: The graph whose distances count.
        U: Candidate nodes.
        c: Separation; survivors end pairwise at distance >= c.
        a: ID-width constant.
        ids: Bit patterns to use instead of the node IDs themselves.
        verify: Check both invariants before returning.

    Raises:
        IdWidthExceeded: If some ID needs more than b bits.
        RulingSetViolation: If ``verify`` is set and an invariant fails.
    """
    if c < 1 or a < 1:
        raise ValueError(f"c and a must be positive, got c={c} a={a}")
    members = sorted(set(U))
    for u in members:
        if not 0 <= u < G.n:
            raise GraphError(f"node {u} is not a node of {G!r}")
    b = id_bits(G.n, a)
    ident = (lambda u: u) if ids is None else (lambda u: ids[u])
    for u in members:
        if ident(u) < 0 or ident(u) >= 2 ** b:
            raise IdWidthExceeded(f"ID {ident(u)} of node {u} does not fit in {b} bits")

    survivors = tuple(members)
    history = [survivors]
    for j in range(1, b + 1):
        shift = b - j
        zeros = [u for u in survivors if not (ident(u) >> shift) & 1]
        ones = [u for u in survivors if (ident(u) >> shift) & 1]
        if zeros and ones:
            heard = multi_source_dijkstra(G, {z: 0 for z in zeros}, c).dist
            ones = [u for u in ones if not heard[u] < c]
        survivors = tuple(sorted(zeros + ones))
        history.append(survivors)
        logger.debug("ruling iteration %d/%d: %d survivors", j, b, len(survivors))

    result = RulingSetResult(
        T=survivors, c=c, beta=b * c, rounds_used=ruling_rounds(G.n, c, a),
        bits=b, history=history,
    )
    if verify:
        result.report = check_ruling_set(G, members, result, a=a)
    return result


def check_ruling_set(
    G: Graph, U: Iterable[int], result: RulingSetResult, a: int = 1,
) -> Dict[str, Any]:
    """
    Check separation and coverage exactly.

    Returns the measured coverage radius next to the asserted bound b·c and
    the a·c·log2 n form of the bound.

    Raises:
        RulingSetViolation: On a pair closer than c or a node of U farther
            than b·c from every member.
    """
    T = list(result.T)
    members = set(T)
    c = result.c
    for t in T:
        near = dijkstra_bounded(G, t, c).dist
        for other in T:
            if other != t and near[other] < c:
                raise RulingSetViolation(
                    f"members {t} and {other} are at distance {near[other]} < {c}",
                    details={"u": t, "v": other, "distance": str(near[other]), "c": c},
                )
    radius: Distance = 0
    U = sorted(set(U))
    if T:
        cover = multi_source_dijkstra(G, {t: 0 for t in T}, result.beta).dist
        for u in U:
            if u in members:
                continue
            if cover[u] == INF:
                raise RulingSetViolation(
                    f"node {u} has no member within {result.beta}",
                    details={"u": u, "beta": result.beta, "c": c},
                )
            radius = max(radius, cover[u])
    elif U:
        raise RulingSetViolation("empty ruling set for a non-empty U", details={"U": len(U)})
    return {
        "size": len(T),
        "coverage_radius": str(radius),
        "beta": result.beta,
        "log_bound": a * c * math.log2(G.n) if G.n > 1 else 0.0,
    }

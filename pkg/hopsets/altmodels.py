"""
SSSP in the congested clique and over a multi-pass edge stream.

Both variants build the same hop set as the in-memory code and differ only
in how the work is accounted: clique rounds in a :class:`CostLedger`, stream
passes and words in a :class:`StreamLedger`.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Optional

from .constants import INF
from .exceptions import NonRewindableStream
from .graph import Distance, Graph, HopDistanceTable, bellman_ford_hops
from .hopset import HopSetEdges, approximate_distances, finish_range, hop_set
from .numeric import Number, parse_epsilon
from .simharness import CostLedger, LedgerEngine, charge_broadcast
from .stream import EdgeStream, StreamEngine, StreamLedger, StreamView, large_weight

logger = logging.getLogger(__name__)

__all__ = ["CliqueResult", "StreamResult", "StreamLedger", "clique_sssp", "stream_sssp"]


@dataclass
class CliqueResult:
    """Unpacks as ``(table, ledger)``."""

    table: HopDistanceTable
    ledger: CostLedger
    hopset: HopSetEdges
    alpha: Fraction

    def __iter__(self) -> Iterator:
        return iter((self.table, self.ledger))


@dataclass
class StreamResult:
    """Unpacks as ``(estimates, ledger)``."""

    estimates: List[Distance]
    ledger: StreamLedger
    hopset: HopSetEdges
    alpha: Fraction
    R: int

    def __iter__(self) -> Iterator:
        return iter((self.estimates, self.ledger))


def _broadcast_round(H: Graph, delta: List[Distance]) -> List[Distance]:
    """Every node announces δ(v); each u keeps min(δ(u), δ(v) + w(v, u))."""
    announced = list(delta)
    out = list(delta)
    for v in range(H.n):
        dv = announced[v]
        if dv == INF:
            continue
        for u, w in H.neighbors(v):
            if dv + w < out[u]:
                out[u] = dv + w
    return out


def clique_sssp(
    G: Graph, s: int, epsilon: Fraction, p: Optional[int] = None, rounds: Optional[int] = None,
) -> CliqueResult:
    """
    Hop set under clique charges, then Bellman-Ford on ``G ∪ F``.

    Each Bellman-Ford round is one broadcast of n messages, so it costs 2.
    After round k the table must equal ``d^k(s, ., G ∪ F)``; this is checked
    every round.

    Args:
        rounds: Bellman-Ford rounds to run; the hop set's certified bound
            by default.
    """
    if not 0 <= s < G.n:
        raise ValueError(f"source {s} is not a node")
    epsilon = parse_epsilon(epsilon)
    ledger = CostLedger("clique", G.n)
    engine = LedgerEngine(ledger)
    F = hop_set(G, epsilon, p=p, engine=engine)
    H = engine.union(G, F)
    h = F.hop_bound if rounds is None else rounds

    delta: List[Distance] = [INF] * G.n
    delta[s] = 0
    for k in range(1, h + 1):
        delta = _broadcast_round(H, delta)
        expected = bellman_ford_hops(H, s, k).dist
        assert delta == expected, f"round {k} differs from the {k}-hop distances"
        charge_broadcast(ledger, G.n, stage="bellmanford")
    logger.info("clique sssp: |F|=%d, %d Bellman-Ford rounds, %d rounds total",
                len(F), h, ledger.total)
    return CliqueResult(HopDistanceTable(source=s, h=h, dist=delta), ledger, F,
                        F.stretch)


def stream_sssp(
    stream: EdgeStream, s: int, epsilon: Fraction, W: Optional[Number] = None,
    p: Optional[int] = None,
) -> StreamResult:
    """
    The in-memory :func:`~hopsets.hopset.hopset_sssp` over an edge stream.

    The hop set is held in memory and read after the stream on every pass.
    Results are identical to the in-memory run with the same W and p.

    Raises:
        NonRewindableStream: If the stream can only be read once; raised
            before any pass is read.
    """
    if not 0 <= s < stream.n:
        raise ValueError(f"source {s} is not a node")
    if not stream.rewindable:
        raise NonRewindableStream("shortest paths over a stream need more than one pass")
    epsilon = parse_epsilon(epsilon)
    ledger = StreamLedger()
    stream.ledger = ledger
    view = StreamView(stream)
    bound = view.W if W is None else W
    if large_weight(stream.n, bound):
        logger.warning("W=%s is beyond the polylogarithmic range for n=%d; pass counts grow "
                       "with log W", bound, stream.n)
    engine = StreamEngine(ledger)
    F = hop_set(view, epsilon, W, p, engine)
    H = engine.union(view, F)
    estimates = approximate_distances(H, s, F.hop_bound, epsilon, engine)
    logger.info("stream sssp: |F|=%d, %d passes, %d scans, peak %d words",
                len(F), ledger.passes, ledger.scans, ledger.peak_space_words)
    return StreamResult(estimates, ledger, F, (1 + epsilon) * F.stretch,
                        finish_range(F.hop_bound, epsilon))

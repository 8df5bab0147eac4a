"""
Edge-list files and named graph families.

The file format is a header line ``n m W`` followed by m lines ``u v w``
(0-based IDs, integer weights 1..W). Blank lines and lines starting with
``#`` are ignored anywhere in the file.

Generator specs name a family and its size:

    path:16              unit-weight path on 16 nodes
    path:16,8,3          weights drawn from 1..8 with seed 3
    grid:4x5             4-by-5 grid, unit weights
    grid:4x5,8,3         weights from 1..8, seed 3
    random:64,128,10,7   connected graph: random spanning tree plus extra
                         edges up to m=128, weights 1..10, seed 7

Every random draw goes through one numpy PCG64 generator seeded from the spec,
so a spec always names the same graph.
"""

import logging
import os
from typing import IO, Any, Dict, Iterator, List, Optional, Tuple, Union

import networkx as nx
import numpy as np

from .constants import PRNG_NAME
from .exceptions import ConfigurationError, GraphError, GraphFormatError
from .graph import Graph

logger = logging.getLogger(__name__)

PathLike = Union[str, "os.PathLike[str]"]


def _data_lines(fh: IO[str]) -> Iterator[Tuple[int, List[str]]]:
    """(line number, fields) for every line that is not blank or a comment."""
    for number, line in enumerate(fh, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        yield number, text.split()


def _ints(fields: List[str], count: int, number: int, what: str) -> List[int]:
    if len(fields) != count:
        raise GraphFormatError(
            f"line {number}: expected {count} integers for {what}, got {len(fields)}",
            line_number=number,
        )
    try:
        return [int(f) for f in fields]
    except ValueError:
        raise GraphFormatError(
            f"line {number}: non-integer field in {what}: {' '.join(fields)}",
            line_number=number,
        ) from None


def read_header(fh: IO[str]) -> Tuple[Tuple[int, int, int], Iterator[Tuple[int, List[str]]]]:
    """The ``(n, m, W)`` header and an iterator over the remaining data lines."""
    lines = _data_lines(fh)
    try:
        number, fields = next(lines)
    except StopIteration:
        raise GraphFormatError("empty edge-list file: no `n m W` header") from None
    n, m, W = _ints(fields, 3, number, "the `n m W` header")
    if n < 1 or m < 0 or W < 1:
        raise GraphFormatError(f"line {number}: header out of range: n={n} m={m} W={W}",
                               line_number=number)
    return (n, m, W), lines


def _edge(fields: List[str], number: int, n: int, W: int) -> Tuple[int, int, int]:
    u, v, w = _ints(fields, 3, number, "an edge")
    if not (0 <= u < n and 0 <= v < n):
        raise GraphFormatError(f"line {number}: node outside 0..{n - 1}", line_number=number)
    if u == v:
        raise GraphFormatError(f"line {number}: self-loop at {u}", line_number=number)
    if not 1 <= w <= W:
        raise GraphFormatError(f"line {number}: weight {w} outside 1..{W}", line_number=number)
    return u, v, w


def iter_edges(fh: IO[str]) -> Iterator[Tuple[int, int, int]]:
    """
    Validated ``(u, v, w)`` triples from an open edge-list file.

    Checks IDs, weights and the edge count against the header. Repeated pairs
    are caught by :func:`read_edge_list`, which holds the whole graph; a
    streaming reader holds only one line at a time.
    """
    (n, m, W), lines = read_header(fh)
    seen = 0
    for number, fields in lines:
        yield _edge(fields, number, n, W)
        seen += 1
    if seen != m:
        raise GraphFormatError(f"header promises {m} edges, file has {seen}")


def read_edge_list(path: PathLike) -> Graph:
    """Parse an edge-list file into a :class:`Graph`."""
    edges: List[Tuple[int, int, int]] = []
    seen: Dict[Tuple[int, int], int] = {}
    with open(path) as fh:
        (n, m, W), lines = read_header(fh)
        for number, fields in lines:
            u, v, w = _edge(fields, number, n, W)
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphFormatError(
                    f"line {number}: pair {key} already given on line {seen[key]}",
                    line_number=number,
                )
            seen[key] = number
            edges.append((u, v, w))
    if len(edges) != m:
        raise GraphFormatError(f"header promises {m} edges, file has {len(edges)}")
    logger.debug("read %s: n=%d m=%d W=%d", path, n, m, W)
    return Graph(n, edges, W=W)


def write_edge_list(G: Graph, dest: Union[PathLike, IO[str]], comment: Optional[str] = None) -> None:
    """Write G in edge-list format. Needs integer weights."""
    if not G.is_integral:
        raise GraphError("edge-list files hold integer weights only")
    if hasattr(dest, "write"):
        _write_edges(G, dest, comment)
        return
    with open(dest, "w") as fh:
        _write_edges(G, fh, comment)


def _write_edges(G: Graph, fh: IO[str], comment: Optional[str]) -> None:
    if comment:
        for line in comment.splitlines():
            fh.write(f"# {line}\n")
    fh.write(f"{G.n} {G.m} {G.W}\n")
    for u, v, w in G.edges():
        fh.write(f"{u} {v} {w}\n")


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

def _weights(rng: np.random.Generator, count: int, W: int) -> List[int]:
    if W == 1:
        return [1] * count
    return [int(x) for x in rng.integers(1, W + 1, size=count)]


def path_graph(n: int, W: int = 1, seed: int = 0) -> Graph:
    rng = np.random.Generator(np.random.PCG64(seed))
    pairs = list(nx.path_graph(n).edges())
    return Graph(n, [(u, v, w) for (u, v), w in zip(pairs, _weights(rng, len(pairs), W))], W=W)


def grid_graph(rows: int, cols: int, W: int = 1, seed: int = 0) -> Graph:
    rng = np.random.Generator(np.random.PCG64(seed))
    g = nx.convert_node_labels_to_integers(nx.grid_2d_graph(rows, cols), ordering="sorted")
    pairs = sorted((min(u, v), max(u, v)) for u, v in g.edges())
    return Graph(rows * cols,
                 [(u, v, w) for (u, v), w in zip(pairs, _weights(rng, len(pairs), W))], W=W)


def random_graph(n: int, m: int, W: int, seed: int) -> Graph:
    """
    A connected random graph with exactly m edges.

    A random recursive spanning tree first: nodes are taken in a random
    order and each one after the first attaches to a uniformly chosen
    earlier node. This does not sample spanning trees uniformly; it favours
    shallow trees. Uniformly random extra pairs are then added until there
    are m edges.
    """
    if n < 1:
        raise ConfigurationError("random graph needs n >= 1")
    if not (n - 1) <= m <= n * (n - 1) // 2:
        raise ConfigurationError(
            f"random graph on {n} nodes needs {n - 1} <= m <= {n * (n - 1) // 2}, got m={m}"
        )
    rng = np.random.Generator(np.random.PCG64(seed))
    order = [int(x) for x in rng.permutation(n)]
    chosen = set()
    for i in range(1, n):
        j = int(rng.integers(0, i))
        u, v = order[i], order[j]
        chosen.add((min(u, v), max(u, v)))
    while len(chosen) < m:
        u, v = (int(x) for x in rng.integers(0, n, size=2))
        if u != v:
            chosen.add((min(u, v), max(u, v)))
    pairs = sorted(chosen)
    return Graph(n, [(u, v, w) for (u, v), w in zip(pairs, _weights(rng, len(pairs), W))], W=W)


def _spec_ints(family: str, text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise ConfigurationError(f"bad {family} generator arguments: {text!r}") from None


def parse_generator(spec: str) -> Tuple[Graph, Dict[str, Any]]:
    """
    Build the graph a generator spec names.

    Returns the graph and a description (family, arguments, PRNG) for reports.
    """
    family, _, args = spec.partition(":")
    family = family.strip().lower()
    if not args:
        raise ConfigurationError(f"generator spec {spec!r} has no arguments")
    info: Dict[str, Any] = {"spec": spec, "family": family, "prng": PRNG_NAME}
    if family == "path":
        vals = _spec_ints(family, args)
        if not 1 <= len(vals) <= 3:
            raise ConfigurationError(f"path spec must be path:N[,W[,seed]], got {spec!r}")
        n, W, seed = vals + [1, 0][len(vals) - 1:]
        if n < 1 or W < 1:
            raise ConfigurationError(f"path needs at least one node: {spec!r}")
        info.update(n=n, W=W, seed=seed)
        return path_graph(n, W=W, seed=seed), info
    if family == "grid":
        shape, _, rest = args.partition(",")
        try:
            rows, cols = (int(x) for x in shape.lower().split("x"))
        except ValueError:
            raise ConfigurationError(f"grid spec must look like grid:RxC, got {spec!r}") from None
        vals = _spec_ints(family, rest)
        if len(vals) > 2:
            raise ConfigurationError(f"grid spec must be grid:RxC[,W[,seed]], got {spec!r}")
        W, seed = vals + [1, 0][len(vals):]
        if rows < 1 or cols < 1 or W < 1:
            raise ConfigurationError(f"grid dimensions must be positive: {spec!r}")
        info.update(rows=rows, cols=cols, W=W, seed=seed)
        return grid_graph(rows, cols, W=W, seed=seed), info
    if family == "random":
        vals = _spec_ints(family, args)
        if len(vals) != 4:
            raise ConfigurationError(f"random spec must be random:n,m,W,seed, got {spec!r}")
        n, m, W, seed = vals
        if W < 1:
            raise ConfigurationError(f"weight bound must be at least 1: {spec!r}")
        info.update(n=n, m=m, W=W, seed=seed)
        return random_graph(n, m, W, seed), info
    raise ConfigurationError(f"unknown graph family {family!r} (expected path, grid or random)")

"""
Fuzz campaigns: fast routes against their brute-force definitions.

Each campaign draws a thousand seeded instances with at most 40 nodes.
Run them with ``pytest -m slow``.
"""

from fractions import Fraction

import numpy as np
import pytest

from hopsets.clusters import compute_clusters, compute_priorities
from hopsets.detection import detect_brute, detect_rtz
from hopsets.graph import multi_source_dijkstra
from hopsets.graphio import grid_graph, path_graph
from hopsets.hopset import hop_set
from hopsets.simharness import CostLedger, bounded_sssp_overlay, clusters_overlay
from hopsets.verify import (
    all_pairs_distances, brute_bunches, brute_clusters, check_hopset, check_rounding_bounds,
)
from tests.conftest import random_instance

CAMPAIGN = 1000


def draw(seed: int):
    """A seeded instance: graph, a source set and a finite range."""
    rng = np.random.Generator(np.random.PCG64(seed))
    n = int(rng.integers(4, 41))
    G = random_instance(n, seed, W=int(rng.integers(1, 9)), density=int(rng.integers(1, 4)))
    S = {int(x) for x in rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False)}
    R = int(rng.integers(1, 4 * G.W + 2))
    return G, S, R, rng


@pytest.mark.slow
class TestFuzzDetection:
    """Phase-based detection equals the sorted bounded searches."""

    def test_rtz_matches_brute(self):
        for seed in range(CAMPAIGN):
            G, S, R, rng = draw(seed)
            sigma = int(rng.integers(1, 6))
            assert detect_rtz(G, S, R, sigma) == detect_brute(G, S, R, sigma), seed


@pytest.mark.slow
class TestFuzzClusters:
    """Clusters against the definition, with the bunch bound and duality."""

    def test_clusters_match_definition(self):
        for seed in range(CAMPAIGN):
            G, _, R, rng = draw(seed)
            q = int(rng.integers(2, 5))
            hierarchy = compute_priorities(G, p=3, R=R, q=q)
            clusters = compute_clusters(G, hierarchy, R)
            dist = all_pairs_distances(G)
            assert clusters.clusters == brute_clusters(G, hierarchy, R, dist), seed

            bunches = brute_bunches(G, hierarchy, R, dist)
            for u in range(G.n):
                assert clusters.bunch(u) == sorted(v for level in bunches[u] for v in level)
                for i in range(hierarchy.p - 1):
                    assert len(clusters.bunch_at(u, i)) <= q, (seed, u, i)


@pytest.mark.slow
class TestFuzzChargedPrimitives:
    """Charged searches return the sequential values bit for bit."""

    def test_bounded_sssp(self):
        for seed in range(CAMPAIGN):
            G, S, R, _ = draw(seed)
            roots = {v: i % 3 for i, v in enumerate(sorted(S))}
            table = bounded_sssp_overlay(G, roots, R, CostLedger("congest", G.n, D=G.n))
            expected = multi_source_dijkstra(G, roots, R)
            assert (table.dist, table.parent) == (expected.dist, expected.parent), seed

    def test_clusters(self):
        for seed in range(CAMPAIGN):
            G, _, R, _ = draw(seed)
            hierarchy = compute_priorities(G, p=3, R=R, q=3)
            charged = clusters_overlay(G, hierarchy, R, CostLedger("clique", G.n))
            assert charged == compute_clusters(G, hierarchy, R), seed


@pytest.mark.slow
class TestFuzzDistances:
    """Exhaustive distance guarantees on small graphs."""

    @pytest.mark.parametrize("epsilon", [Fraction(1), Fraction(1, 2), Fraction(1, 4)])
    def test_rounding_bounds(self, epsilon):
        for seed in range(40):
            G = random_instance(4 + seed % 9, seed, W=12)
            for h in (1, 2, 4, G.n - 1):
                assert check_rounding_bounds(G, epsilon, h) == [], (seed, h)

    @pytest.mark.parametrize("epsilon", [Fraction(1), Fraction(1, 2), Fraction(1, 4)])
    @pytest.mark.parametrize("make", [
        lambda: path_graph(24, W=5, seed=1),
        lambda: grid_graph(4, 5, W=3, seed=2),
        lambda: random_instance(20, 3, W=16),
    ])
    def test_hop_set_sandwich(self, epsilon, make):
        G = make()
        F = hop_set(G, epsilon)
        report = check_hopset(G, F)
        assert report.all_pairs
        assert report.ok, report.to_dict()

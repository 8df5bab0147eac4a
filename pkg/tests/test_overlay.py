"""
Tests for types, centers, distances to centers and overlay estimates.
"""

from fractions import Fraction

import pytest

from hopsets.constants import INF
from hopsets.exceptions import PropertyViolated
from hopsets.graph import Graph, bellman_ford_hops, dijkstra_bounded, multi_source_dijkstra
from hopsets.graphio import parse_generator
from hopsets.overlay import (
    OverlayNetwork, OverlayParams, TypeAssignment, approx_weighted_diameter, combine,
    compute_types, distances_to_centers, extract_path, overlay_sssp, select_centers,
)
from hopsets.verify import brute_types, check_estimates, weighted_diameter
from tests.conftest import random_instance


@pytest.fixture
def path16():
    G, _ = parse_generator("path:16")
    return G


class TestOverlayParams:
    """Derived constants."""

    def test_defaults(self):
        params = OverlayParams.derive(16, 1, Fraction(1, 2))
        assert (params.ell, params.h, params.h_prime) == (4, 2, 10)
        assert (params.h_star, params.k, params.k_prime) == (144, 296, 1480)
        assert params.separation == 21
        assert params.rho(0) == Fraction(1, 4)
        assert params.phi(3) == Fraction(4, 296)
        assert params.scales == 5
        assert params.to_dict()["epsilon"] == "1/2"

    def test_alpha_when_k_covers_every_path(self):
        params = OverlayParams.derive(16, 1, Fraction(1, 2))
        assert params.alpha(Fraction(49, 48)) == Fraction(3, 2)

    def test_alpha_in_general(self):
        params = OverlayParams.derive(1000, 1, Fraction(1, 2), ell=1)
        assert (params.h, params.h_prime, params.k) == (1, 5, 182)
        assert params.witness_factor == 55
        assert params.alpha(1) == Fraction(9, 4) * 111

    def test_bad_ell(self):
        with pytest.raises(ValueError):
            OverlayParams.derive(16, 1, Fraction(1, 2), ell=0)


class TestTypes:
    """Type assignment by ball sizes."""

    def test_path_all_type_zero(self, path16):
        params = OverlayParams.derive(16, 1, Fraction(1, 2))
        types = compute_types(path16, params)
        assert types.types == [0] * 16
        assert types.defined() == [0]
        assert types.examined == 1

    def test_isolated_node_has_no_type(self):
        G = Graph(3, [(0, 1, 1)])
        params = OverlayParams.derive(3, 1, Fraction(1, 2), ell=4)
        types = compute_types(G, params)
        assert types[2] is None
        assert types.of_type(0) == [0, 1]

    @pytest.mark.parametrize("seed", range(4))
    def test_matches_definition(self, seed):
        G = random_instance(20, seed, W=9)
        params = OverlayParams.derive(G.n, G.W, Fraction(1, 2), ell=8)
        assert compute_types(G, params).types == brute_types(G, params)


class TestCenters:
    """Ruling sets per type."""

    def test_path_centers(self, path16):
        params = OverlayParams.derive(16, 1, Fraction(1, 2))
        types = compute_types(path16, params)
        centers = select_centers(path16, types, params, s=5)
        assert 5 in centers
        ruling = centers.per_type[0].T
        assert all(abs(a - b) >= 6 for a in ruling for b in ruling if a != b)
        assert len(centers) <= 16 // params.h + 1

    def test_too_many_centers(self, path4):
        params = OverlayParams(n=4, W=1, epsilon=Fraction(1), ell=4, a=1, h=4, h_prime=0,
                               h_star=72, k=152, k_prime=456)
        types = TypeAssignment([0, 0, 0, 0], scales=3)
        with pytest.raises(PropertyViolated) as exc:
            select_centers(path4, types, params, s=0)
        assert exc.value.details["centers"] == 4


class TestDistancesToCenters:
    """The scaled estimates between nodes and centers."""

    @pytest.mark.parametrize("seed", range(3))
    def test_sandwich(self, seed):
        G = random_instance(15, seed, W=7)
        eps = Fraction(1, 2)
        params = OverlayParams.derive(G.n, G.W, eps)
        overlay = distances_to_centers(G, [0, 4, 9], params)
        for v in overlay.centers:
            exact = dijkstra_bounded(G, v).dist
            khop = bellman_ford_hops(G, v, params.k).dist
            for u in range(G.n):
                assert exact[u] <= overlay.estimate(u, v) <= (1 + eps) * khop[u]

    def test_overlay_graph(self, path4):
        params = OverlayParams.derive(4, 1, Fraction(1))
        overlay = distances_to_centers(path4, [3, 1], params, s=1)
        assert overlay.centers == (1, 3)
        Gp, index = overlay.as_graph()
        assert index == {1: 0, 3: 1}
        assert Gp.n == 2
        assert Gp.weight(0, 1) == overlay.estimate(1, 3)


class TestCombine:
    """Estimates through centers."""

    def test_combine(self):
        params = OverlayParams.derive(3, 1, Fraction(1))
        overlay = OverlayNetwork(3, (0, 2), 0, [{0: 0, 2: 5}, {0: 1, 2: 1}, {0: 5, 2: 0}],
                                 params)
        dtilde = {0: 0, 2: 3}
        assert combine(overlay, dtilde, 1) == 1
        assert combine(overlay, dtilde, 2) == 3

    def test_unreached_node(self):
        params = OverlayParams.derive(3, 1, Fraction(1))
        overlay = OverlayNetwork(3, (0,), 0, [{0: 0}, {0: 1}, {}], params)
        assert combine(overlay, {0: 0}, 2) == INF

    def test_approximate_diameter(self):
        assert approx_weighted_diameter([0, 4, 2]) == 4


class TestExtractPath:
    """Walking back to the source."""

    def test_exact_estimates(self, weighted_path):
        estimates = dijkstra_bounded(weighted_path, 0).dist
        path = extract_path(weighted_path, estimates, 5)
        assert path.complete
        assert path.nodes == [0, 1, 2, 3, 4, 5]
        assert path.weight == 14

    def test_parent_ties(self):
        G = Graph(4, [(0, 1, 1), (0, 2, 1), (1, 3, 1), (2, 3, 1)])
        estimates = multi_source_dijkstra(G, {0: 0}).dist
        assert extract_path(G, estimates, 3).nodes == [0, 1, 3]

    def test_stuck(self, path3):
        path = extract_path(path3, [0, 3, 2], 2)
        assert not path.complete
        assert path.stuck_at == 2

    def test_unreachable(self):
        path = extract_path(Graph(3, [(0, 1, 1)]), [0, 1, INF], 2)
        assert not path.complete


class TestOverlaySSSP:
    """End to end in memory."""

    def test_path16(self, path16):
        params = OverlayParams.derive(16, 1, Fraction(1, 2))
        result = overlay_sssp(path16, 0, params)
        assert result.alpha == Fraction(3, 2)
        assert result.estimates[0] == 0
        assert check_estimates(path16, 0, result.estimates, result.alpha).ok

    @pytest.mark.parametrize("seed", range(4))
    def test_random(self, seed):
        G = random_instance(20, seed, W=5)
        params = OverlayParams.derive(G.n, G.W, Fraction(1, 2))
        result = overlay_sssp(G, 2, params)
        check = check_estimates(G, 2, result.estimates, result.alpha)
        assert check.ok, check.to_dict()
        wd = weighted_diameter(G)
        assert Fraction(wd, 2) <= approx_weighted_diameter(result.estimates) <= result.alpha * wd

    @pytest.mark.parametrize("spec, ell", [
        ("path:200", 1), ("path:220,3,5", 1), ("random:200,400,4,3", 1), ("path:400", 2),
    ])
    def test_short_segments_go_through_centers(self, spec, ell):
        G, _ = parse_generator(spec)
        eps = Fraction(1, 2)
        params = OverlayParams.derive(G.n, G.W, eps, ell=ell)
        assert params.k < G.n - 1
        result = overlay_sssp(G, 0, params)
        assert len(result.centers) > 1
        assert 0 in result.centers
        assert result.alpha == (1 + eps) ** 2 * result.hopset.stretch \
            * (1 + 2 * params.witness_factor)
        assert result.alpha > 1 + eps
        check = check_estimates(G, 0, result.estimates, result.alpha)
        assert check.ok, check.to_dict()
        exact = dijkstra_bounded(G, 0).dist
        walks = [extract_path(G, result.estimates, u, 0) for u in range(G.n)]
        assert walks[0].complete
        for u, walk in enumerate(walks):
            if walk.complete:
                assert walk.nodes[0] == 0 and walk.nodes[-1] == u
                assert exact[u] <= walk.weight <= result.estimates[u]

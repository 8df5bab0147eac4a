"""
Tests for the hop-set stages and hop-set based distances.
"""

import io
from fractions import Fraction

import pytest

from hopsets.clusters import list_size
from hopsets.constants import INF
from hopsets.exceptions import GraphFormatError, PreconditionViolated
from hopsets.graph import Graph, bellman_ford_hops, dijkstra_bounded
from hopsets.graphio import parse_generator
from hopsets.hopset import (
    AdditiveParams, HopSetEdges, additive_stage, approximate_distances, exponential_inequality,
    finish_range, hop_reduction, hop_reduction_additive, hop_set, hopset_parameters,
    hopset_sssp, read_hopset, sqrt_log_upper, write_hopset,
)
from hopsets.verify import (
    check_additive_contract, check_estimates, check_hopset, check_structural_property,
)
from tests.conftest import random_instance


class TestHopSetEdges:
    """The edge container."""

    def test_lighter_weight_kept(self):
        F = HopSetEdges(4, Fraction(1, 2))
        F.add(2, 1, 5)
        F.add(1, 2, Fraction(9, 2))
        F.add(1, 2, 7)
        F.add(3, 3, 1)
        assert len(F) == 1
        assert F.weight(2, 1) == Fraction(9, 2)
        assert (2, 1) in F

    def test_integral_fractions_normalised(self):
        F = HopSetEdges(3, Fraction(1))
        F.add(0, 1, Fraction(6, 3))
        assert F.weight(0, 1) == 2
        assert isinstance(F.weight(0, 1), int)

    def test_merge_and_iteration_order(self):
        F = HopSetEdges(4, Fraction(1))
        F.add(2, 3, 4)
        G = HopSetEdges(4, Fraction(1))
        G.add(0, 1, 1)
        G.add(3, 2, 2)
        F.merge(G)
        assert list(F) == [(0, 1, 1), (2, 3, 2)]

    def test_summary(self):
        F = HopSetEdges(4, Fraction(1, 3))
        F.certify(2, Fraction(5, 4), "raw")
        assert F.summary() == {"n": 4, "epsilon": "1/3", "size": 0, "hop_bound": 2,
                               "stretch": "5/4", "bound_kind": "raw"}


class TestAdditiveStage:
    """Cluster edges with exact weights."""

    def test_parameters(self):
        params = AdditiveParams.derive(3, 1, Fraction(1))
        assert (params.p, params.X, params.R, params.beta) == (1, 6, 6, 2)
        assert params.r == (1,)
        assert params.hop_budget(5) == 10

    def test_growth_sequence(self):
        params = AdditiveParams.derive(100, 2, Fraction(1, 2), p=3)
        assert params.r == (2, 20, 220)
        assert params.beta == 484
        assert params.growth_violations() == []

    def test_path_example(self, path3):
        F = hop_reduction_additive(path3, 1, Fraction(1))
        assert F.weights == {(0, 1): 1, (1, 2): 1, (0, 2): 2}
        H = path3.union(F.weights)
        assert bellman_ford_hops(H, 0, 1).dist[2] == 2

    def test_bad_delta(self, path3):
        with pytest.raises(ValueError):
            AdditiveParams.derive(3, 0, Fraction(1))

    @pytest.mark.parametrize("seed", range(4))
    def test_contract_holds(self, seed):
        G = random_instance(16, seed, W=5)
        stage = additive_stage(G, 3, Fraction(1, 2), p=2)
        assert check_additive_contract(G, stage) == []

    @pytest.mark.parametrize("seed", range(4))
    def test_structural_property(self, seed):
        G = random_instance(16, seed, W=5)
        stage = additive_stage(G, 2, Fraction(1), p=2)
        assert check_structural_property(G, stage) == []

    def test_list_size_override(self):
        assert AdditiveParams.derive(16, 3, Fraction(1, 2), p=2).q == list_size(16, 2)
        assert AdditiveParams.derive(16, 3, Fraction(1, 2), p=2, q=3).q == 3
        with pytest.raises(ValueError):
            AdditiveParams.derive(16, 3, Fraction(1, 2), q=0)

    @pytest.mark.parametrize("seed", range(3))
    @pytest.mark.parametrize("q", [2, 3])
    @pytest.mark.parametrize("p", [2, 3])
    def test_lemmas_with_populated_levels(self, seed, q, p):
        G = random_instance(24, seed, W=5)
        stage = additive_stage(G, 2, Fraction(1, 2), p=p, q=q)
        assert stage.hierarchy.A[1]
        assert stage.edges.report["q"] == q
        assert check_additive_contract(G, stage) == []
        assert check_structural_property(G, stage) == []

    def test_edge_weights_are_exact_distances(self, weighted_path):
        stage = additive_stage(weighted_path, 2, Fraction(1), p=2)
        exact = {u: dijkstra_bounded(weighted_path, u).dist for u in range(weighted_path.n)}
        for u, v, w in stage.edges:
            assert w == exact[u][v]


class TestHopReduction:
    """The scaled stages."""

    def test_direct_claim_at_desk_scale(self, path4):
        F = hop_reduction(path4, 3, 3, Fraction(1, 8), 1, p=1)
        assert F.hop_bound == 1
        assert F.bound_kind == "direct"
        assert F.stretch == 1 + Fraction(1, 48)
        assert F.report["inner_delta"] == 3 * 3 * 48

    def test_no_claim(self, path4):
        with pytest.raises(PreconditionViolated):
            hop_reduction(path4, 1, 1, Fraction(1), 1, p=2)

    def test_forced_build_is_uncertified(self, path4):
        F = hop_reduction(path4, 1, 1, Fraction(1), 1, p=2, force=True)
        assert F.hop_bound is None
        assert len(F) > 0

    def test_bad_h(self, path4):
        with pytest.raises(ValueError):
            hop_reduction(path4, 1, 0, Fraction(1), 1)


class TestHopSet:
    """The full construction."""

    def test_parameters(self):
        P = hopset_parameters(16, Fraction(1, 2))
        assert P["level_epsilon"] == Fraction(1, 8)
        assert (P["p"], P["X"], P["Delta"], P["h"]) == (1, 16, 48, [16])
        assert sqrt_log_upper(16) == 2
        assert sqrt_log_upper(1) == 1

    def test_path16(self):
        G, _ = parse_generator("path:16")
        F = hop_set(G, Fraction(1, 2))
        assert F.hop_bound == 1
        assert F.stretch == Fraction(49, 48)
        assert F.bound_kind == "direct"
        assert len(F) == 16 * 15 // 2
        assert F.weight(0, 15) == 15
        report = check_hopset(G, F)
        assert report.ok
        assert report.all_pairs
        assert report.worst_ratio <= Fraction(49, 48)

    @pytest.mark.parametrize("seed", range(3))
    def test_random_graphs_pass_check(self, seed):
        G = random_instance(14, seed, W=8)
        F = hop_set(G, Fraction(1, 2))
        assert F.stretch <= Fraction(3, 2)
        report = check_hopset(G, F)
        assert report.ok, report.to_dict()
        assert report.empirical_hops <= F.hop_bound

    def test_check_flags_bad_hop_set(self, path4):
        F = HopSetEdges(4, Fraction(1, 2))
        F.add(0, 3, 2)
        report = check_hopset(path4, F, hop_bound=1)
        assert not report.ok
        assert {v["check"] for v in report.violations} == {"lower", "upper"}

    def test_sampled_pairs(self, graph_factory):
        G = graph_factory(12, seed=1)
        F = hop_set(G, Fraction(1))
        report = check_hopset(G, F, limit=5, samples=10)
        assert report.pairs_checked == 10
        assert not report.all_pairs
        assert report.ok


class TestDistances:
    """Estimates from G joined with its hop set."""

    def test_finish_range(self):
        assert finish_range(1, Fraction(1, 2)) == 5
        assert finish_range(4, Fraction(1, 3)) == 28

    def test_exponential_inequality(self):
        assert exponential_inequality(Fraction(1), 4)
        assert exponential_inequality(Fraction(1, 2), 1)

    def test_rounded_search_sandwich(self, weighted_path):
        eps = Fraction(1, 2)
        h = weighted_path.n - 1
        estimates = approximate_distances(weighted_path, 0, h, eps)
        exact = dijkstra_bounded(weighted_path, 0).dist
        for d, e in zip(exact, estimates):
            assert d <= e <= (1 + eps) * d

    def test_unreachable_stays_infinite(self):
        G = Graph(3, [(0, 1, 2)])
        estimates = approximate_distances(G, 0, 2, Fraction(1))
        assert estimates[0] == 0
        assert estimates[2] == INF

    def test_sssp_on_path(self):
        G, _ = parse_generator("path:16")
        result = hopset_sssp(G, 0, Fraction(1, 2))
        assert result.alpha == Fraction(3, 2) * Fraction(49, 48)
        assert result.R == 5
        assert check_estimates(G, 0, result.estimates, result.alpha).ok

    @pytest.mark.parametrize("seed", range(3))
    def test_sssp_random(self, seed):
        G = random_instance(14, seed, W=8)
        result = hopset_sssp(G, 3, Fraction(1, 2))
        check = check_estimates(G, 3, result.estimates, result.alpha, epsilon=Fraction(1, 2))
        assert check.ok, check.to_dict()


class TestHopsetFiles:
    """Writing and reading hop-set files."""

    def test_file_contents(self, tmp_path):
        F = HopSetEdges(3, Fraction(1, 2))
        F.add(0, 2, Fraction(5, 2))
        F.certify(1, Fraction(49, 48), "direct")
        path = tmp_path / "f.txt"
        write_hopset(F, path)
        assert path.read_text() == (
            "# hopset n=3 eps=1/2\n# hop_bound=1 stretch=49/48 kind=direct\n0 2 5/2\n"
        )
        back = read_hopset(path)
        assert back.weights == F.weights
        assert (back.hop_bound, back.stretch, back.bound_kind) == (1, Fraction(49, 48), "direct")

    def test_writes_to_handles(self):
        F = HopSetEdges(2, Fraction(1))
        F.add(0, 1, 3)
        fh = io.StringIO()
        write_hopset(F, fh)
        assert fh.getvalue() == "# hopset n=2 eps=1/1\n0 1 3\n"

    @pytest.mark.parametrize("text, line", [
        ("0 1 2\n", 1),
        ("# hopset n=3 eps=1/2\n0 1\n", 2),
        ("# hopset n=3 eps=1/2\n0 1 x\n", 2),
        ("# hopset n=3 eps=1/2\n\n0 5 1\n", 3),
        ("# hopset n=3 eps=1/2\n0 1 1/2\n", 2),
    ])
    def test_malformed(self, tmp_path, text, line):
        path = tmp_path / "bad.txt"
        path.write_text(text)
        with pytest.raises(GraphFormatError) as exc:
            read_hopset(path)
        assert exc.value.line_number == line

# Copyright 2026 The nudcode Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import itertools

import networkx as nx
import pytest

from nudcode import colorgraph, coloring, contamination, flows, netgraph
from nudcode.errors import BudgetError, StructureError
from . import util


def _ghat(name, nbar=None):
    g, d = util.load_instance(name)
    r = contamination.contamination_sets(g, d)
    return colorgraph.build_coloring_graph(d, r, nbar)


def _cross_edges(ghat):
    edges = set()
    for a, b in ghat.graph.edges:
        if ghat.graph.nodes[a]["sink"] != ghat.graph.nodes[b]["sink"]:
            edges.add(tuple(sorted((a, b))))
    return edges


def test_butterfly_coloring_graph_at_n():
    ghat = _ghat("butterfly.net")

    assert ghat.nbar == 2
    assert ghat.names == ["v1.1", "v1.2", "v2.1", "v2.2"]
    assert ghat.stats() == {"vertices": 4, "edges": 2, "fictitious": 0}
    assert colorgraph.max_clique_size(ghat) == 2


def test_butterfly_coloring_graph_with_spare_stream():
    ghat = _ghat("butterfly.net", nbar=3)

    assert [v.name for v in ghat.fictitious(1)] == ["w1.1"]
    assert _cross_edges(ghat) == {
        ("v1.1", "w2.1"),
        ("v1.2", "w2.1"),
        ("v2.1", "w1.1"),
        ("v2.2", "w1.1"),
    }
    assert colorgraph.max_clique_size(ghat) == 3


def test_extended_butterfly_coloring_graph():
    ghat = _ghat("extended_butterfly.net")

    assert ghat.nbar == 3
    assert [v.name for v in ghat.group(1)] == ["v1.1", "v1.2", "w1.1"]
    assert [v.name for v in ghat.regular(2)] == ["v2.1", "v2.2", "v2.3"]
    assert ghat.fictitious(2) == []
    assert _cross_edges(ghat) == {("v2.1", "w1.1"), ("v2.2", "w1.1")}
    assert colorgraph.max_clique_size(ghat) == 3
    assert coloring.chromatic_number_oracle(ghat) == 3


@pytest.mark.parametrize("nbar", [2, 3, 4, 5])
def test_counterexample_clique_exceeds_budget(nbar):
    ghat = _ghat("counterexample.net", nbar=nbar)

    assert colorgraph.max_clique_size(ghat) == nbar + 1
    assert coloring.clique_number(ghat) == nbar + 1


def test_non_berge_coloring_graph():
    ghat = _ghat("non_berge.net", nbar=3)

    assert ghat.names == [
        "v1.1",
        "v1.2",
        "w1.1",
        "v2.1",
        "v2.2",
        "w2.1",
        "v3.1",
        "v3.2",
        "w3.1",
        "v4.1",
        "v4.2",
        "v4.3",
    ]
    assert ghat.stats()["vertices"] == 12
    assert colorgraph.max_clique_size(ghat) == 3


def test_build_rejects_small_budget():
    g, d = util.load_instance("extended_butterfly.net")
    r = contamination.contamination_sets(g, d)
    with pytest.raises(BudgetError):
        colorgraph.build_coloring_graph(d, r, 2)


def test_budget_error_is_a_value_error():
    assert issubclass(BudgetError, ValueError)


@pytest.mark.parametrize("seed", range(40))
def test_pairwise_formula_matches_clique_number(seed):
    g = netgraph.random_network(8, 0.35, 3, seed)
    d = flows.decompose(g)
    r = contamination.contamination_sets(g, d)

    for nbar in (d.n, d.n + 1):
        ghat = colorgraph.build_coloring_graph(d, r, nbar)
        assert colorgraph.max_clique_size(ghat) == coloring.clique_number(ghat)


@pytest.mark.parametrize("seed", range(20))
def test_cliques_stay_within_two_sink_subgraphs(seed):
    g = netgraph.random_network(8, 0.35, 3, seed)
    d = flows.decompose(g)
    r = contamination.contamination_sets(g, d)

    for nbar in (d.n, d.n + 1):
        ghat = colorgraph.build_coloring_graph(d, r, nbar)
        cliques = list(nx.find_cliques(ghat.graph))
        for clique in cliques:
            assert len({ghat.graph.nodes[name]["sink"] for name in clique}) <= 2
        for j in range(1, ghat.sink_count + 1):
            group = {vertex.name for vertex in ghat.group(j)}
            for vertex in ghat.regular(j):
                assert any(
                    vertex.name in clique and group <= set(clique) for clique in cliques
                )
            assert len(group) == nbar


def test_berge_coloring_graphs_color_with_omega_colors():
    graphs = [_ghat(name) for name in ("butterfly.net", "extended_butterfly.net", "chain.net")]
    for seed in range(30):
        g = netgraph.random_network(7, 0.35, 3, seed)
        d = flows.decompose(g)
        graphs.append(
            colorgraph.build_coloring_graph(d, contamination.contamination_sets(g, d), d.n)
        )

    berge_count = 0
    for ghat in graphs:
        berge, _ = colorgraph.is_berge(ghat)
        if berge:
            berge_count += 1
            omega = colorgraph.max_clique_size(ghat)
            assert coloring.chromatic_number_oracle(ghat) == omega
    assert berge_count >= 3


def test_max_clique_size_rejects_foreign_structure():
    ghat = _ghat("butterfly.net", nbar=3)
    broken = ghat.graph.copy()
    broken.remove_edge("v1.1", "v1.2")
    with pytest.raises(StructureError, match="not a clique"):
        colorgraph.max_clique_size(
            colorgraph.ColoringGraph(ghat.vertices, broken, ghat.nbar, ghat.rates)
        )

    broken = ghat.graph.copy()
    broken.add_edge("v1.1", "v2.1")
    with pytest.raises(StructureError, match="two regular"):
        colorgraph.max_clique_size(
            colorgraph.ColoringGraph(ghat.vertices, broken, ghat.nbar, ghat.rates)
        )

    wide = _ghat("butterfly.net", nbar=4)
    broken = wide.graph.copy()
    broken.remove_edge("v1.1", "w2.1")
    with pytest.raises(StructureError, match="reaches 1 of 2"):
        colorgraph.max_clique_size(
            colorgraph.ColoringGraph(wide.vertices, broken, wide.nbar, wide.rates)
        )


def test_non_berge_witness():
    ghat = _ghat("non_berge.net", nbar=3)
    berge, witness = colorgraph.is_berge(ghat)

    assert berge is False
    assert witness.kind == "hole"
    assert witness.length == 5
    assert witness.vertices[0] == "v1.1"
    assert set(witness.vertices) == {"v1.1", "w1.1", "v2.1", "v2.2", "w3.1"}


@pytest.mark.parametrize("name", ["butterfly.net", "extended_butterfly.net", "chain.net"])
def test_small_fixtures_are_berge(name):
    berge, witness = colorgraph.is_berge(_ghat(name))
    assert berge is True
    assert witness is None


def test_five_cycle_is_a_hole():
    witness = colorgraph.find_odd_hole_or_antihole(nx.cycle_graph(5), 5)
    assert witness.kind == "hole"
    assert sorted(witness.vertices) == [0, 1, 2, 3, 4]


def test_seven_antihole():
    graph = nx.complement(nx.cycle_graph(7))
    berge, witness = colorgraph.is_berge(graph)

    assert berge is False
    assert witness.kind == "antihole"
    assert witness.length == 7


def test_max_len_bounds_the_search():
    assert colorgraph.find_odd_hole_or_antihole(nx.cycle_graph(7), 5) is None
    assert colorgraph.find_odd_hole_or_antihole(nx.cycle_graph(7), 7).length == 7


@pytest.mark.parametrize(
    "graph",
    [
        nx.complete_graph(5),
        nx.complete_bipartite_graph(3, 3),
        nx.cycle_graph(6),
        nx.path_graph(6),
        nx.empty_graph(3),
    ],
)
def test_perfect_graphs_are_berge(graph):
    assert colorgraph.is_berge(graph) == (True, None)


def _has_odd_hole_or_antihole(graph):
    nodes = list(graph.nodes)
    complement = nx.complement(graph)
    for size in range(5, len(nodes) + 1, 2):
        for subset in itertools.combinations(nodes, size):
            for candidate in (graph, complement):
                induced = candidate.subgraph(subset)
                degrees = {degree for _, degree in induced.degree}
                if degrees == {2} and nx.is_connected(induced):
                    return True
    return False


@pytest.mark.parametrize("seed", range(40))
def test_berge_test_matches_exhaustive_search(seed):
    graph = nx.gnp_random_graph(8, 0.45, seed=seed)
    berge, witness = colorgraph.is_berge(graph)

    assert berge == (not _has_odd_hole_or_antihole(graph))
    assert colorgraph.is_berge(nx.complement(graph))[0] == berge
    if witness is not None:
        target = graph if witness.kind == "hole" else nx.complement(graph)
        induced = target.subgraph(witness.vertices)
        assert witness.length % 2 == 1
        assert all(degree == 2 for _, degree in induced.degree)
        assert nx.is_connected(induced)


def test_export_coloring_graph_dot():
    dot = colorgraph.export_coloring_graph_dot(_ghat("butterfly.net", nbar=3))

    assert "graph coloring" in dot
    assert "subgraph cluster_1" in dot
    assert "subgraph cluster_2" in dot
    assert dot.count("style=dashed") == 2
    assert dot.count(" -- ") == 10

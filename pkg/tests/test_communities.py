import random
from itertools import combinations

import pytest

from helpers import cpm_oracle, random_multilayer
from ttn import (
    Community,
    LayerLabel,
    MultilayerActorNetwork,
    community_evolution,
    filter_communities,
    kclique_communities,
)
from ttn.communities import communities_from_dicts, communities_to_dicts, evolution_dot
from ttn.errors import BadK


def _ml(*layer_edges):
    """layer_edges: (text_class, bin, [(u, v), ...])"""
    layers = {}
    for text_class, time_bin, edges in layer_edges:
        layers[LayerLabel(text_class, time_bin)] = {
            (min(u, v), max(u, v)): 1 for u, v in edges
        }
    return MultilayerActorNetwork(directed=False, weighted=False, layers=layers)


def _as_triples(communities):
    return {(c.actors, c.layers, c.time_bin) for c in communities}


def test_single_triangle_is_a_community():
    ml = _ml(("ai", 0, [("a", "b"), ("b", "c"), ("a", "c")]))
    found = kclique_communities(ml, 3)
    assert _as_triples(found) == {
        (frozenset("abc"), frozenset({LayerLabel("ai", 0)}), 0)
    }


def test_two_triangles_sharing_an_edge_merge():
    ml = _ml(("ai", 0, [("a", "b"), ("b", "c"), ("a", "c"), ("b", "d"), ("c", "d")]))
    found = kclique_communities(ml, 3)
    assert len(found) == 1
    assert found[0].actors == frozenset("abcd")


def test_disjoint_triangles_stay_apart():
    ml = _ml(("ai", 0, [("a", "b"), ("b", "c"), ("a", "c"), ("x", "y"), ("y", "z"), ("x", "z")]))
    found = kclique_communities(ml, 3)
    assert {c.actors for c in found} == {frozenset("abc"), frozenset("xyz")}


def test_bad_k_and_scope():
    ml = _ml(("ai", 0, []))
    with pytest.raises(BadK):
        kclique_communities(ml, 2)
    with pytest.raises(ValueError):
        kclique_communities(ml, 3, scope="global")


def test_cross_layer_merge_within_a_bin():
    tri1 = [("a", "b"), ("b", "c"), ("a", "c")]
    tri2 = [("b", "c"), ("c", "d"), ("b", "d")]
    ml = _ml(("ai", 0, tri1), ("ar", 0, tri2))
    merged = kclique_communities(ml, 3, scope="per_time_bin")
    assert len(merged) == 1
    assert merged[0].actors == frozenset("abcd")
    assert merged[0].layers == frozenset({LayerLabel("ai", 0), LayerLabel("ar", 0)})
    separate = kclique_communities(ml, 3, scope="per_layer")
    assert {c.actors for c in separate} == {frozenset("abc"), frozenset("bcd")}


def test_no_merge_across_bins():
    tri = [("a", "b"), ("b", "c"), ("a", "c")]
    ml = _ml(("ai", 0, tri), ("ai", 1, tri))
    found = kclique_communities(ml, 3)
    assert len(found) == 2
    assert {c.time_bin for c in found} == {0, 1}


def test_every_k_clique_lands_in_exactly_one_community():
    rng = random.Random(109)
    for _ in range(10):
        ml = random_multilayer(rng, n_bins=1, layers_per_bin=1, n_nodes=9, edge_prob=0.45)
        (label,) = ml.layers
        adj = {}
        for u, v in ml.layers[label]:
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        found = kclique_communities(ml, 3, scope="per_layer")
        for subset in combinations(sorted(adj), 3):
            if all(b in adj[a] for a, b in combinations(subset, 2)):
                owners = [c for c in found if set(subset) <= c.actors]
                assert len(owners) == 1


def test_matches_exhaustive_oracle():
    rng = random.Random(113)
    for _ in range(15):
        ml = random_multilayer(
            rng, n_bins=2, layers_per_bin=2, n_nodes=rng.randint(4, 10), edge_prob=0.4
        )
        for k in (3, 4):
            for scope in ("per_layer", "per_time_bin"):
                assert _as_triples(kclique_communities(ml, k, scope)) == cpm_oracle(ml, k, scope)


def test_communities_have_at_least_k_actors():
    rng = random.Random(127)
    ml = random_multilayer(rng, n_bins=1, layers_per_bin=2, n_nodes=10, edge_prob=0.5)
    for c in kclique_communities(ml, 4):
        assert len(c.actors) >= 4


def _community(actors, time_bin, text_class="ai"):
    return Community(frozenset(actors), frozenset({LayerLabel(text_class, time_bin)}), time_bin)


def test_filter_communities():
    big = _community("abcd", 0)
    small = _community("abc", 0)
    assert filter_communities([big, small], 4) == [big]
    assert filter_communities([], 4) == []
    with pytest.raises(ValueError):
        filter_communities([big], 0)


def test_evolution_threshold():
    c1 = _community(["a", "b", "c"], 1)
    c2 = _community(["a", "x", "y"], 2)
    graph = community_evolution([c1, c2])
    assert graph.edges == [(0, 1, 1)]  # shared 1 >= ceil(3/3)


def test_evolution_requires_enough_overlap():
    c1 = _community(["a", "b", "c"], 1)
    c2 = _community(["a", "x", "y", "z"], 2)  # needs ceil(4/3) = 2 shared
    assert community_evolution([c1, c2]).edges == []
    disjoint = _community(["p", "q", "r"], 2)
    assert community_evolution([c1, disjoint]).edges == []


def test_evolution_only_consecutive_bins():
    c1 = _community(["a", "b", "c"], 1)
    c3 = _community(["a", "b", "c"], 3)
    assert community_evolution([c1, c3]).edges == []


def test_evolution_shared_count_is_exact_intersection():
    rng = random.Random(131)
    pool = [f"u{i}" for i in range(12)]
    communities = []
    for b in range(4):
        for _ in range(3):
            communities.append(_community(rng.sample(pool, rng.randint(3, 7)), b))
    graph = community_evolution(communities)
    for i, j, shared in graph.edges:
        ci, cj = communities[i], communities[j]
        assert cj.time_bin == ci.time_bin + 1
        inter = len(ci.actors & cj.actors)
        assert shared == inter
        assert 3 * shared >= len(cj.actors)


def test_export_round_trip_and_dot():
    communities = [
        _community("abcd", 0),
        Community(frozenset("bcde"), frozenset({LayerLabel("ai", 1), LayerLabel("ar", 1)}), 1),
    ]
    docs = communities_to_dicts(communities)
    assert docs[0]["id"] == "c0" and docs[0]["actors"] == ["a", "b", "c", "d"]
    assert communities_from_dicts(docs) == communities
    dot = evolution_dot(community_evolution(communities))
    assert dot.startswith("digraph evolution {")
    assert "c0 -> c1 [shared=3" in dot
    assert 'actors=4' in dot

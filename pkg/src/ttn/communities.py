"""k-clique percolation over a multilayer actor network, and the
community evolution graph across consecutive time bins.

A community is a connected union of k-cliques, where two k-cliques are
adjacent when they share k-1 actors. Cliques found in different layers of
the same time bin can merge into one community (the default scope), so
communities carry both an actor set and the set of layers they span.
Communities in consecutive bins are linked when the later one inherits at
least one third of its actors from the earlier one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

from .discrete import LayerLabel, MultilayerActorNetwork
from .errors import BadK

SCOPES = ("per_layer", "per_time_bin")


@dataclass(frozen=True)
class Community:
    """Actors and layers of one percolation community."""

    actors: frozenset[str]
    layers: frozenset[LayerLabel]
    time_bin: int | str

    def sort_key(self):
        bin_key = (0, self.time_bin, "") if isinstance(self.time_bin, int) else (1, 0, str(self.time_bin))
        return (bin_key, sorted(self.actors), sorted(l.sort_key() for l in self.layers))


@dataclass
class EvolutionGraph:
    """Succession edges between communities of consecutive time bins.

    Edges are (prev_index, next_index, shared_actor_count) into the
    ``communities`` list.
    """

    communities: list[Community]
    edges: list[tuple[int, int, int]]


def _maximal_cliques(adj: dict[str, set[str]]) -> list[frozenset[str]]:
    """Bron-Kerbosch with pivoting; candidate loops run in sorted order so
    the traversal (not just the result set) is reproducible."""
    cliques: list[frozenset[str]] = []

    def expand(r: set[str], p: set[str], x: set[str]) -> None:
        if not p and not x:
            cliques.append(frozenset(r))
            return
        pivot = max(sorted(p | x), key=lambda u: len(adj[u] & p))
        for v in sorted(p - adj[pivot]):
            expand(r | {v}, p & adj[v], x & adj[v])
            p = p - {v}
            x = x | {v}

    expand(set(), set(adj), set())
    return cliques


def _layer_adjacency(edges) -> dict[str, set[str]]:
    adj: dict[str, set[str]] = {}
    for a, b in edges:
        if a == b:
            continue
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    return adj


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[max(ri, rj)] = min(ri, rj)


def kclique_communities(
    ml: MultilayerActorNetwork, k: int, scope: str = "per_time_bin"
) -> list[Community]:
    """Find all k-clique percolation communities of the multilayer network.

    Per layer, maximal cliques (Bron-Kerbosch with pivoting) are expanded
    into their k-cliques; two k-cliques are adjacent when they share at
    least k-1 actors. With scope ``per_time_bin`` (default) adjacency also
    crosses layers within one time bin, letting communities span several
    topic layers of the same bin; ``per_layer`` keeps every layer separate.
    Edge direction and weights are ignored.
    """
    if k < 3:
        raise BadK(f"clique size must be >= 3, got {k}")
    if scope not in SCOPES:
        raise ValueError(f"scope must be one of {SCOPES}")

    # group key -> distinct k-clique -> labels where it occurs
    groups: dict[object, dict[frozenset[str], set[LayerLabel]]] = {}
    group_bins: dict[object, int | str] = {}
    for label in ml.labels():
        key = label if scope == "per_layer" else label.time_bin
        group_bins[key] = label.time_bin
        bucket = groups.setdefault(key, {})
        adj = _layer_adjacency(ml.layers[label])
        for clique in _maximal_cliques(adj):
            if len(clique) < k:
                continue
            for combo in combinations(sorted(clique), k):
                bucket.setdefault(frozenset(combo), set()).add(label)

    communities = []
    for key, bucket in groups.items():
        items = sorted(bucket, key=sorted)
        uf = _UnionFind(len(items))
        seen_subsets: dict[tuple[str, ...], int] = {}
        for idx, clique in enumerate(items):
            for sub in combinations(sorted(clique), k - 1):
                if sub in seen_subsets:
                    uf.union(idx, seen_subsets[sub])
                else:
                    seen_subsets[sub] = idx
        members: dict[int, list[int]] = {}
        for idx in range(len(items)):
            members.setdefault(uf.find(idx), []).append(idx)
        for indices in members.values():
            actors: set[str] = set()
            labels: set[LayerLabel] = set()
            for idx in indices:
                actors |= items[idx]
                labels |= bucket[items[idx]]
            communities.append(
                Community(frozenset(actors), frozenset(labels), group_bins[key])
            )
    communities.sort(key=Community.sort_key)
    return communities


def filter_communities(communities: list[Community], min_actors: int) -> list[Community]:
    """Keep communities with at least ``min_actors`` actors."""
    if min_actors < 1:
        raise ValueError("min_actors must be >= 1")
    return [c for c in communities if len(c.actors) >= min_actors]


def community_evolution(communities: list[Community]) -> EvolutionGraph:
    """Link communities in consecutive integer bins.

    An edge (c_prev, c_next) exists iff the communities sit in bins b and
    b+1 and share at least ceil(|actors(c_next)| / 3) actors; it carries
    the exact shared count. Communities without an integer bin never get
    edges.
    """
    by_bin: dict[int, list[int]] = {}
    for idx, community in enumerate(communities):
        if isinstance(community.time_bin, int):
            by_bin.setdefault(community.time_bin, []).append(idx)
    edges = []
    for b in sorted(by_bin):
        for i in by_bin[b]:
            for j in by_bin.get(b + 1, ()):
                later = communities[j]
                shared = len(communities[i].actors & later.actors)
                if shared >= math.ceil(len(later.actors) / 3):
                    edges.append((i, j, shared))
    edges.sort()
    return EvolutionGraph(list(communities), edges)


# -- exports ---------------------------------------------------------------

def communities_to_dicts(communities: list[Community]) -> list[dict]:
    docs = []
    for idx, community in enumerate(communities):
        docs.append(
            {
                "id": f"c{idx}",
                "actors": sorted(community.actors),
                "layers": [
                    {"text_class": l.text_class, "time_bin": l.time_bin}
                    for l in sorted(community.layers, key=LayerLabel.sort_key)
                ],
                "bin": community.time_bin,
            }
        )
    return docs


def communities_from_dicts(docs: list[dict]) -> list[Community]:
    return [
        Community(
            frozenset(doc["actors"]),
            frozenset(LayerLabel(l["text_class"], l["time_bin"]) for l in doc["layers"]),
            doc["bin"],
        )
        for doc in docs
    ]


def evolution_dot(graph: EvolutionGraph) -> str:
    """DOT digraph; node size scales with the actor count and edge
    thickness with the shared-actor count."""
    lines = ["digraph evolution {"]
    for idx, community in enumerate(graph.communities):
        classes = ",".join(sorted({l.text_class for l in community.layers}))
        n = len(community.actors)
        label = f"bin {community.time_bin}\\n{{{classes}}}\\n{n} actors"
        width = 0.35 * math.sqrt(n)
        lines.append(
            f'  c{idx} [label="{label}", actors={n}, width={width:.2f}, shape=circle];'
        )
    for i, j, shared in graph.edges:
        lines.append(f"  c{i} -> c{j} [shared={shared}, penwidth={float(shared):.1f}];")
    lines.append("}")
    return "\n".join(lines) + "\n"

"""Shared generators and brute-force oracles for the test suite.

The oracles deliberately re-derive results from first principles
(exhaustive enumeration, naive recomputation) and never call the code
paths they are used to check.
"""

from __future__ import annotations

import random
from itertools import combinations

from ttn import LayerLabel, MultilayerActorNetwork, TemporalTextNetwork

WORDS = [
    "alpha", "beta", "gamma", "delta", "sensor", "cloud", "edge", "data",
    "mesh", "signal", "update", "device", "news", "launch", "secure",
]
TAGS = ["iot", "ai", "ar", "vr", "ml", "sec"]


def random_text(rng: random.Random) -> str:
    parts = rng.sample(WORDS, rng.randint(0, 4))
    parts += [f"#{rng.choice(TAGS)}" for _ in range(rng.randint(0, 2))]
    rng.shuffle(parts)
    return " ".join(parts)


def random_builder_network(
    rng: random.Random,
    n_ops: int,
    n_actors: int = 10,
    t_max: int = 1000,
) -> TemporalTextNetwork:
    """Apply a random sequence of valid builder operations."""
    net = TemporalTextNetwork()
    actors = [f"a{i}" for i in range(n_actors)]
    mids: list[str] = []
    for op in range(n_ops):
        choice = rng.random()
        if choice < 0.45 or not mids:
            mid = f"m{len(mids)}"
            net.add_message(rng.choice(actors), mid, random_text(rng), rng.randrange(t_max))
            mids.append(mid)
        elif choice < 0.85:
            mid = rng.choice(mids)
            actor = rng.choice(actors)
            if actor in {a for a, _ in net.recipients_of(mid)}:
                continue
            t_send = net.production_time(mid)
            net.add_recipient(mid, actor, t_send + rng.randrange(0, 50))
        elif choice < 0.95 and len(mids) >= 2:
            src, dst = rng.sample(mids, 2)
            if rng.random() < 0.5:
                net.add_message_link(src, dst, "reply")
            else:
                if net.production_time(src) < net.production_time(dst):
                    src, dst = dst, src
                if (src, dst, "repost") not in net.message_links and src != dst:
                    net.add_message_link(src, dst, "repost")
        else:
            a, b = rng.choice(actors), rng.choice(actors)
            net.add_actor_link(a, b, "follow")
    return net


def random_message_network(
    rng: random.Random,
    n_actors: int,
    n_messages: int,
    t_max: int = 100,
    max_recipients: int = 3,
) -> TemporalTextNetwork:
    """Random valid network with a bounded number of messages."""
    net = TemporalTextNetwork()
    actors = [f"a{i}" for i in range(n_actors)]
    for a in actors:
        net.add_actor(a)
    for i in range(n_messages):
        mid = f"m{i}"
        t = rng.randrange(t_max)
        net.add_message(rng.choice(actors), mid, random_text(rng), t)
        for actor in rng.sample(actors, rng.randint(0, min(max_recipients, len(actors)))):
            net.add_recipient(mid, actor, t + rng.randrange(0, 20))
    return net


def nets_equal(a: TemporalTextNetwork, b: TemporalTextNetwork) -> bool:
    return (
        a.actors == b.actors
        and a.messages.keys() == b.messages.keys()
        and all(
            a.messages[m].text == b.messages[m].text and a.messages[m].tags == b.messages[m].tags
            for m in a.messages
        )
        and a.production_edges == b.production_edges
        and a.consumption_edges == b.consumption_edges
        and a.message_links == b.message_links
        and a.actor_links == b.actor_links
    )


# -- projection oracle -------------------------------------------------------

def projection_oracle(kp, weighted: bool, directed: bool):
    """Enumerate every (producer, message copy, consumer) triple per layer."""
    net = kp.net
    layers = {}
    for label, mids in kp.partitions.items():
        counts = {}
        for mid in mids:
            prod = net.production_of(mid)
            if prod is None:
                continue
            sender = prod[0]
            for recipient in {actor for actor, _ in net.recipients_of(mid)}:
                if recipient == sender:
                    continue
                if directed:
                    key = (sender, recipient)
                else:
                    key = (min(sender, recipient), max(sender, recipient))
                counts[key] = counts.get(key, 0) + 1
        if not weighted:
            counts = {k: 1 for k in counts}
        layers[label] = counts
    return layers


# -- clique percolation oracle -------------------------------------------------

def cpm_oracle(ml: MultilayerActorNetwork, k: int, scope: str = "per_time_bin"):
    """Exhaustive k-subset CPM: test every k-subset for cliqueness, then
    union k-cliques pairwise on >= k-1 shared actors within each scope
    group. Returns a set of (actors, layers, bin) triples."""
    groups: dict[object, dict[frozenset, set]] = {}
    bins: dict[object, object] = {}
    for label, edges in ml.layers.items():
        adj: dict[str, set[str]] = {}
        for a, b in edges:
            if a == b:
                continue
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)
        key = label if scope == "per_layer" else label.time_bin
        bins[key] = label.time_bin
        bucket = groups.setdefault(key, {})
        for subset in combinations(sorted(adj), k):
            if all(v in adj[u] for u, v in combinations(subset, 2)):
                bucket.setdefault(frozenset(subset), set()).add(label)
    result = set()
    for key, bucket in groups.items():
        cliques = sorted(bucket, key=sorted)
        parent = list(range(len(cliques)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i, j in combinations(range(len(cliques)), 2):
            if len(cliques[i] & cliques[j]) >= k - 1:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
        comps: dict[int, list[int]] = {}
        for i in range(len(cliques)):
            comps.setdefault(find(i), []).append(i)
        for indices in comps.values():
            actors = frozenset().union(*(cliques[i] for i in indices))
            labels = frozenset().union(*(bucket[cliques[i]] for i in indices))
            result.add((actors, labels, bins[key]))
    return result


def random_multilayer(
    rng: random.Random,
    n_bins: int = 2,
    layers_per_bin: int = 2,
    n_nodes: int = 10,
    edge_prob: float = 0.3,
) -> MultilayerActorNetwork:
    classes = ["ai", "ar", "iot", "vr"]
    layers = {}
    nodes = [f"u{i}" for i in range(n_nodes)]
    for b in range(n_bins):
        for c in rng.sample(classes, layers_per_bin):
            edges = {}
            for u, v in combinations(nodes, 2):
                if rng.random() < edge_prob:
                    edges[(u, v)] = 1
            layers[LayerLabel(c, b)] = edges
    return MultilayerActorNetwork(directed=False, weighted=False, layers=layers)

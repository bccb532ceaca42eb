"""Discretization pipeline: text classes, time bins, k-partite network,
and its projection onto a multilayer actor network.

Messages are first mapped to text classes (their hashtags, or matched
keywords) and to time bins. Discretization then copies each message into
one partition per (class, bin) label it carries, and projection collapses
actor -> message -> actor paths within each partition into actor-actor
edges, one layer per label.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

from ._parallel import parallel_map
from .continuous import tokenize
from .errors import BadWidth, EmptyKeywordList, UncoveredMessage
from .model import TemporalTextNetwork

NONE_CLASS = "_none"
ALL_BIN = "_all"


@dataclass(frozen=True)
class LayerLabel:
    """A (text class, time bin) pair naming one layer."""

    text_class: str
    time_bin: int | str = ALL_BIN

    def sort_key(self):
        # integer bins order numerically and precede the reserved "_all"
        if isinstance(self.time_bin, int):
            return (self.text_class, 0, self.time_bin, "")
        return (self.text_class, 1, 0, self.time_bin)


@dataclass
class KPartiteNetwork:
    """Actor partition plus one message-copy partition per layer label.

    Copies keep the original message id; their production/consumption
    edges are those of the source network, duplicated per copy.
    """

    net: TemporalTextNetwork
    partitions: dict[LayerLabel, set[str]] = field(default_factory=dict)

    @property
    def actors(self) -> set[str]:
        return self.net.actors

    def labels(self) -> list[LayerLabel]:
        return sorted(self.partitions, key=LayerLabel.sort_key)

    def message_copy_count(self) -> int:
        return sum(len(mids) for mids in self.partitions.values())


@dataclass
class MultilayerActorNetwork:
    """Per-layer weighted actor-actor edges from projecting a k-partite net.

    Undirected layers store edges with endpoints in sorted order. Weights
    count the witnessing message copies when ``weighted``, else 1.
    """

    directed: bool
    weighted: bool
    layers: dict[LayerLabel, dict[tuple[str, str], int]] = field(default_factory=dict)

    def labels(self) -> list[LayerLabel]:
        return sorted(self.layers, key=LayerLabel.sort_key)

    def layer_nodes(self, label: LayerLabel) -> set[str]:
        nodes = set()
        for src, dst in self.layers.get(label, ()):
            nodes.add(src)
            nodes.add(dst)
        return nodes


def tag_messages(
    net: TemporalTextNetwork, tagger: str, keywords: list[str] | None = None
) -> dict[str, set[str]]:
    """Map every message id to its set of text classes.

    ``hashtags`` uses the message tags; ``keywords`` matches the given
    keywords as whole lowercase tokens of the text. Messages matching
    nothing get the reserved class "_none".
    """
    if tagger == "hashtags":
        classes = {mid: set(msg.tags) for mid, msg in net.messages.items()}
    elif tagger == "keywords":
        if not keywords:
            raise EmptyKeywordList("keyword tagger needs at least one keyword")
        wanted = [k.lower() for k in keywords]
        classes = {}
        for mid, msg in net.messages.items():
            tokens = set(tokenize(msg.text))
            classes[mid] = {k for k in wanted if k in tokens}
    else:
        raise ValueError(f"unknown tagger {tagger!r}")
    return {mid: cls or {NONE_CLASS} for mid, cls in classes.items()}


def time_bins(
    net: TemporalTextNetwork, width: int, anchor: int | None = None
) -> dict[str, int]:
    """Assign each message the floor bin index of its production time.

    ``anchor=None`` anchors at the earliest production time, so the first
    message lands in bin 0.
    """
    if width <= 0:
        raise BadWidth(f"bin width must be positive, got {width}")
    times = {}
    for mid in net.messages:
        prod = net.production_of(mid)
        if prod is not None:
            times[mid] = prod[1]
    if anchor is None:
        if not times:
            return {}
        anchor = min(times.values())
    return {mid: (t - anchor) // width for mid, t in times.items()}


def discretize(
    net: TemporalTextNetwork,
    text_classes: dict[str, set[str]],
    bins: dict[str, int] | None = None,
) -> KPartiteNetwork:
    """Copy each message into one partition per (class, bin) label.

    Without ``bins`` every label uses the reserved bin "_all". Both maps
    must cover every message of the network.
    """
    partitions: dict[LayerLabel, set[str]] = {}
    for mid in net.messages:
        if mid not in text_classes:
            raise UncoveredMessage(f"message {mid!r} missing from the text class map")
        if bins is not None and mid not in bins:
            raise UncoveredMessage(f"message {mid!r} missing from the bin map")
        time_bin = bins[mid] if bins is not None else ALL_BIN
        for text_class in text_classes[mid]:
            partitions.setdefault(LayerLabel(text_class, time_bin), set()).add(mid)
    return KPartiteNetwork(net, partitions)


def project(
    kp: KPartiteNetwork, weighted: bool = True, directed: bool = True
) -> MultilayerActorNetwork:
    """Collapse actor -> message -> actor paths into per-layer actor edges.

    An edge (a_i, a_j) appears in a layer iff some message copy there was
    produced by a_i and consumed by a_j. Weighted layers count witnessing
    copies; undirected layers merge the two directions. Self-loops are
    dropped.
    """
    net = kp.net
    labels = kp.labels()

    def project_layer(label: LayerLabel) -> dict[tuple[str, str], int]:
        edges: dict[tuple[str, str], int] = {}
        for mid in kp.partitions[label]:
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
                edges[key] = edges.get(key, 0) + 1
        if not weighted:
            edges = {key: 1 for key in edges}
        return edges

    projected = parallel_map(project_layer, labels)
    return MultilayerActorNetwork(
        directed, weighted, {label: edges for label, edges in zip(labels, projected)}
    )


# -- exports ---------------------------------------------------------------

def multilayer_csv(ml: MultilayerActorNetwork) -> str:
    """Edge list ``layer_textclass,layer_bin,src,dst,weight``, rows sorted
    lexicographically."""
    rows = []
    for label, edges in ml.layers.items():
        for (src, dst), weight in edges.items():
            rows.append((label.text_class, str(label.time_bin), src, dst, str(weight)))
    rows.sort()
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["layer_textclass", "layer_bin", "src", "dst", "weight"])
    writer.writerows(rows)
    return buf.getvalue()


def kpartite_to_dict(kp: KPartiteNetwork) -> dict:
    doc = kp.net.to_dict()
    doc["layers"] = [
        {
            "text_class": label.text_class,
            "time_bin": label.time_bin,
            "messages": sorted(kp.partitions[label]),
        }
        for label in kp.labels()
    ]
    return doc


def kpartite_from_dict(doc: dict) -> KPartiteNetwork:
    net = TemporalTextNetwork.from_dict(doc)
    partitions = {}
    for entry in doc.get("layers", []):
        label = LayerLabel(entry["text_class"], entry["time_bin"])
        partitions[label] = set(entry["messages"])
    return KPartiteNetwork(net, partitions)

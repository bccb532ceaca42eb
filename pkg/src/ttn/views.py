"""Lossy classical-model views of a temporal text network.

Each view is a pure function: the input network is never modified and
repeated calls give identical output. Information is deliberately thrown
away (message text, container identity, or exact times), which is what
makes the results consumable by contact-sequence, time-slice and memory
graph tooling.
"""

from __future__ import annotations

import csv
import io
from bisect import bisect_right
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import BadCutpoints
from .model import Message, TemporalTextNetwork

SLICE_POLICIES = ("production", "any_consumption", "all_edges")


@dataclass(frozen=True)
class Contact:
    """One timed actor-to-actor delivery, traced back to its message."""

    sender: str
    recipient: str
    t_send: int
    t_recv: int
    message: str


@dataclass
class TimeSlice:
    """Sub-network of messages assigned to the half-open interval [lo, hi)."""

    lo: int
    hi: int
    network: TemporalTextNetwork


@dataclass
class TimeSliceSeries:
    cutpoints: list[int]
    slices: list[TimeSlice]


@dataclass
class MemoryGraph:
    """Graph on ordered actor pairs; edges are time-respecting relays.

    An edge ((j,i),(i,k)) means i relayed within the window: some contact
    into i was received no later than (and at most ``delta`` ticks before)
    a contact i sent.
    """

    nodes: set[tuple[str, str]]
    edges: set[tuple[tuple[str, str], tuple[str, str]]]


def contact_sequence_view(net: TemporalTextNetwork) -> list[Contact]:
    """One contact per (message, recipient) pair.

    Messages with no recipients contribute nothing; the message container
    and its text are dropped. Output is sorted by (t_send, message id,
    recipient id).
    """
    contacts = []
    for mid in net.messages:
        prod = net.production_of(mid)
        if prod is None:
            continue
        sender, t_send = prod
        for actor, t_recv in net.recipients_of(mid):
            contacts.append(Contact(sender, actor, t_send, t_recv, mid))
    contacts.sort(key=lambda c: (c.t_send, c.message, c.recipient))
    return contacts


def _slice_index(cutpoints: Sequence[int], t: int) -> int | None:
    idx = bisect_right(cutpoints, t) - 1
    if 0 <= idx <= len(cutpoints) - 2:
        return idx
    return None


def time_slice_view(
    net: TemporalTextNetwork, cutpoints: Sequence[int], policy: str = "production"
) -> TimeSliceSeries:
    """Distribute messages into half-open interval slices [c_i, c_{i+1}).

    The policy decides assignment:

    * ``production``: by production time; each in-range message lands in
      exactly one slice.
    * ``any_consumption``: wherever at least one consumption edge falls; a
      message can appear in several slices.
    * ``all_edges``: only where all of the message's edge times fall in
      one interval.

    A message enters a slice whole (its production and all consumption
    edges), so every slice is itself a valid network. Actors appear in a
    slice only when incident to one of its messages; extension links are
    kept when both endpoints made it into the slice.
    """
    cutpoints = list(cutpoints)
    if len(cutpoints) < 2:
        raise BadCutpoints("need at least two cutpoints")
    if any(a >= b for a, b in zip(cutpoints, cutpoints[1:])):
        raise BadCutpoints(f"cutpoints must be strictly ascending: {cutpoints}")
    if policy not in SLICE_POLICIES:
        raise ValueError(f"policy must be one of {SLICE_POLICIES}")

    assigned: list[set[str]] = [set() for _ in cutpoints[:-1]]
    for mid in net.messages:
        prod = net.production_of(mid)
        if prod is None:
            continue
        t_send = prod[1]
        recv_times = [t for _, t in net.recipients_of(mid)]
        if policy == "production":
            idx = _slice_index(cutpoints, t_send)
            if idx is not None:
                assigned[idx].add(mid)
        elif policy == "any_consumption":
            for t in recv_times:
                idx = _slice_index(cutpoints, t)
                if idx is not None:
                    assigned[idx].add(mid)
        else:
            indices = {_slice_index(cutpoints, t) for t in [t_send, *recv_times]}
            if len(indices) == 1:
                idx = indices.pop()
                if idx is not None:
                    assigned[idx].add(mid)

    slices = []
    for idx, mids in enumerate(assigned):
        sub = TemporalTextNetwork()
        for mid in sorted(mids):
            msg = net.messages[mid]
            sender, t_send = net.production_of(mid)
            sub._insert_message(Message(mid, msg.text, set(msg.tags)), sender, t_send)
            for actor, t_recv in net.recipients_of(mid):
                sub.add_actor(actor)
                sub._add_consumption_raw(mid, actor, t_recv)
        for src, dst, kind in net.message_links:
            if src in sub.messages and dst in sub.messages:
                sub.message_links.add((src, dst, kind))
        for src, dst, kind in net.actor_links:
            if src in sub.actors and dst in sub.actors:
                sub.actor_links.add((src, dst, kind))
        slices.append(TimeSlice(cutpoints[idx], cutpoints[idx + 1], sub))
    return TimeSliceSeries(cutpoints, slices)


def memory_graph_view(contacts: Sequence[Contact], delta: int | None) -> MemoryGraph:
    """Build the pair-node memory graph of a contact sequence.

    Nodes are the distinct (sender, recipient) pairs. An edge
    ((j,i),(i,k)) exists iff two distinct contacts witness the relay:
    j delivered to i at t1 (receive time) and i sent to k at t2 (send
    time) with t1 <= t2 <= t1 + delta. ``delta=None`` removes the upper
    bound; ``delta=0`` keeps only simultaneous relays.
    """
    if delta is not None and delta < 0:
        raise ValueError("delta must be >= 0")
    nodes = {(c.sender, c.recipient) for c in contacts}
    by_sender: dict[str, list[tuple[int, Contact]]] = {}
    for q, contact in enumerate(contacts):
        by_sender.setdefault(contact.sender, []).append((q, contact))
    edges = set()
    for p, c1 in enumerate(contacts):
        for q, c2 in by_sender.get(c1.recipient, []):
            if p == q:
                continue
            if c1.t_recv <= c2.t_send and (delta is None or c2.t_send <= c1.t_recv + delta):
                edges.add(((c1.sender, c1.recipient), (c2.sender, c2.recipient)))
    return MemoryGraph(nodes, edges)


# -- exports ---------------------------------------------------------------

def contacts_csv(contacts: Iterable[Contact]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["sender", "recipient", "t_send", "t_recv", "message"])
    for c in contacts:
        writer.writerow([c.sender, c.recipient, c.t_send, c.t_recv, c.message])
    return buf.getvalue()


def write_contacts_csv(contacts: Iterable[Contact], path: str | Path) -> None:
    Path(path).write_text(contacts_csv(contacts), encoding="utf-8")


def _pair_label(pair: tuple[str, str]) -> str:
    return f"{pair[0]}>{pair[1]}"


def memory_graph_csv(graph: MemoryGraph) -> str:
    """Edge list ``j>i,i>k``, one edge per line, sorted."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for a, b in sorted(graph.edges):
        writer.writerow([_pair_label(a), _pair_label(b)])
    return buf.getvalue()


def memory_graph_dot(graph: MemoryGraph) -> str:
    def quote(label: str) -> str:
        return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'

    lines = ["digraph memory {"]
    for node in sorted(graph.nodes):
        lines.append(f"  {quote(_pair_label(node))};")
    for a, b in sorted(graph.edges):
        lines.append(f"  {quote(_pair_label(a))} -> {quote(_pair_label(b))};")
    lines.append("}")
    return "\n".join(lines) + "\n"

"""Core temporal text network model.

A network is a directed bipartite graph between actors and messages.
Production edges ``(actor, message, t)`` say who wrote a message and when;
consumption edges ``(message, actor, t)`` say who received it and when.
Two structural constraints hold for well-formed data:

1. every message has exactly one production edge;
2. a message is never received before it was produced.

The builder methods (``add_message``, ``add_recipient``, ...) enforce both
constraints at mutation time. Data loaded from files bypasses the builders,
so :meth:`TemporalTextNetwork.validate` re-checks everything and reports
each violation instead of raising.

Extension edges (message-to-message reply/repost links and actor-to-actor
links such as "follow") live next to the bipartite core and never affect
the two constraints above.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .errors import (
    DuplicateMessageId,
    DuplicateRecipient,
    MalformedRecord,
    NoRecipients,
    RepostTimeViolation,
    SelfLink,
    TimeOrderViolation,
    UnknownMessage,
)

MESSAGE_LINK_KINDS = ("reply", "repost")

# A hashtag is '#' followed by a maximal alphanumeric run, lowercased.
_HASHTAG = re.compile(r"#([0-9A-Za-z]+)")


def extract_hashtags(text: str) -> set[str]:
    """Return the lowercased hashtags found in ``text``."""
    return {m.lower() for m in _HASHTAG.findall(text)}


class ActorRole(Enum):
    PRODUCER = "producer"
    CONSUMER = "consumer"
    PROSUMER = "prosumer"
    ISOLATE = "isolate"


class CommType(Enum):
    UNICAST = "unicast"
    MULTICAST = "multicast"
    BROADCAST = "broadcast"


@dataclass
class Message:
    """A text container node. Tags are lowercase hashtag strings."""

    id: str
    text: str
    tags: set[str] = field(default_factory=set)


@dataclass(frozen=True)
class Violation:
    """One broken invariant, naming the offending element."""

    rule: str
    subject: str
    detail: str

    def __str__(self) -> str:
        return f"{self.rule}: {self.detail}"


class TemporalTextNetwork:
    """Mutable-during-construction bipartite actor/message network.

    All analysis code treats instances as immutable once built; only the
    ``add_*`` methods (and the file loader) write to them.
    """

    def __init__(self) -> None:
        self.actors: set[str] = set()
        self.messages: dict[str, Message] = {}
        # (actor, message_id, t_send)
        self.production_edges: set[tuple[str, str, int]] = set()
        # (message_id, actor, t_recv)
        self.consumption_edges: set[tuple[str, str, int]] = set()
        # (src_message, dst_message, kind) with kind in MESSAGE_LINK_KINDS
        self.message_links: set[tuple[str, str, str]] = set()
        # (src_actor, dst_actor, kind)
        self.actor_links: set[tuple[str, str, str]] = set()
        self._prod_by_mid: dict[str, list[tuple[str, int]]] = {}
        self._cons_by_mid: dict[str, list[tuple[str, int]]] = {}
        self._recipient_pairs: set[tuple[str, str]] = set()

    # -- construction -----------------------------------------------------

    def add_actor(self, actor: str) -> None:
        if not actor:
            raise ValueError("actor id must be non-empty")
        self.actors.add(actor)

    def add_message(self, sender: str, mid: str, text: str, t_send: int) -> None:
        """Store a new message with its single production edge.

        Hashtag tags are extracted from the text. The sender is created
        if it is not an actor yet.

        Raises:
            DuplicateMessageId: if ``mid`` is already present.
        """
        if not mid:
            raise ValueError("message id must be non-empty")
        if mid in self.messages:
            raise DuplicateMessageId(f"message id already present: {mid!r}")
        self.add_actor(sender)
        self._insert_message(Message(mid, text, extract_hashtags(text)), sender, t_send)

    def add_recipient(self, mid: str, recipient: str, t_recv: int) -> None:
        """Add a consumption edge ``(mid, recipient, t_recv)``.

        Raises:
            UnknownMessage: if the message does not exist.
            TimeOrderViolation: if ``t_recv`` precedes the production time.
            DuplicateRecipient: if the recipient already consumes ``mid``.
        """
        if mid not in self.messages:
            raise UnknownMessage(f"no such message: {mid!r}")
        if (mid, recipient) in self._recipient_pairs:
            raise DuplicateRecipient(f"{recipient!r} already receives {mid!r}")
        prods = self._prod_by_mid.get(mid, [])
        if len(prods) == 1 and t_recv < prods[0][1]:
            raise TimeOrderViolation(
                f"message {mid!r} received at {t_recv} before production at {prods[0][1]}"
            )
        self.add_actor(recipient)
        self._add_consumption_raw(mid, recipient, t_recv)

    def add_message_link(self, src: str, dst: str, kind: str) -> None:
        """Link two messages. ``kind`` is ``reply`` or ``repost``.

        Reposts must not precede the message they repost; replies carry no
        time constraint (readership of the replied-to message is often
        uncertain in source data, so their clocks may disagree).
        """
        if kind not in MESSAGE_LINK_KINDS:
            raise ValueError(f"message link kind must be one of {MESSAGE_LINK_KINDS}")
        if src == dst:
            raise SelfLink(f"message {src!r} cannot link to itself")
        for mid in (src, dst):
            if mid not in self.messages:
                raise UnknownMessage(f"no such message: {mid!r}")
        if kind == "repost":
            t_src = self.production_time(src)
            t_dst = self.production_time(dst)
            if t_src is not None and t_dst is not None and t_src < t_dst:
                raise RepostTimeViolation(
                    f"repost {src!r} (t={t_src}) predates its source {dst!r} (t={t_dst})"
                )
        self.message_links.add((src, dst, kind))

    def add_actor_link(self, src: str, dst: str, kind: str) -> None:
        if not kind:
            raise ValueError("actor link kind must be non-empty")
        self.add_actor(src)
        self.add_actor(dst)
        self.actor_links.add((src, dst, kind))

    def _insert_message(self, message: Message, sender: str, t_send: int) -> None:
        # Verbatim insertion path shared with loaders and view builders;
        # callers are responsible for id checks and tag provenance.
        self.messages[message.id] = message
        self.actors.add(sender)
        self._add_production_raw(sender, message.id, t_send)

    def _add_production_raw(self, actor: str, mid: str, t: int) -> None:
        edge = (actor, mid, t)
        if edge not in self.production_edges:
            self.production_edges.add(edge)
            self._prod_by_mid.setdefault(mid, []).append((actor, t))

    def _add_consumption_raw(self, mid: str, actor: str, t: int) -> None:
        edge = (mid, actor, t)
        if edge not in self.consumption_edges:
            self.consumption_edges.add(edge)
            self._cons_by_mid.setdefault(mid, []).append((actor, t))
            self._recipient_pairs.add((mid, actor))

    # -- lookups ----------------------------------------------------------

    def production_of(self, mid: str) -> tuple[str, int] | None:
        """The (sender, t_send) of ``mid``, or None unless exactly one exists."""
        prods = self._prod_by_mid.get(mid, [])
        return prods[0] if len(prods) == 1 else None

    def production_time(self, mid: str) -> int | None:
        prod = self.production_of(mid)
        return None if prod is None else prod[1]

    def recipients_of(self, mid: str) -> list[tuple[str, int]]:
        """All (actor, t_recv) consumption entries of ``mid``."""
        return list(self._cons_by_mid.get(mid, []))

    # -- analysis ---------------------------------------------------------

    def validate(self) -> list[Violation]:
        """Check every model invariant and report all violations found.

        An empty report means the network is well formed. Networks built
        exclusively through the ``add_*`` methods always validate clean.
        """
        report: list[Violation] = []
        for actor in sorted(self.actors):
            if not actor:
                report.append(Violation("empty-id", actor, "empty actor id"))
        for mid in sorted(self.messages):
            if not mid:
                report.append(Violation("empty-id", mid, "empty message id"))
            degree = len(self._prod_by_mid.get(mid, []))
            if degree != 1:
                report.append(
                    Violation(
                        "constraint-1",
                        mid,
                        f"message {mid!r} has {degree} production edges, expected 1",
                    )
                )
        for actor, mid, t_send in sorted(self.production_edges):
            if actor not in self.actors:
                report.append(
                    Violation("dangling-actor", actor, f"production edge from unknown actor {actor!r}")
                )
            if mid not in self.messages:
                report.append(
                    Violation("dangling-message", mid, f"production edge to unknown message {mid!r}")
                )
        for mid, actor, t_recv in sorted(self.consumption_edges):
            if actor not in self.actors:
                report.append(
                    Violation("dangling-actor", actor, f"consumption edge to unknown actor {actor!r}")
                )
            if mid not in self.messages:
                report.append(
                    Violation("dangling-message", mid, f"consumption edge from unknown message {mid!r}")
                )
            for _, t_send in self._prod_by_mid.get(mid, []):
                if t_recv < t_send:
                    report.append(
                        Violation(
                            "constraint-2",
                            mid,
                            f"message {mid!r} consumed by {actor!r} at {t_recv} "
                            f"before production at {t_send}",
                        )
                    )
        pair_times: dict[tuple[str, str], set[int]] = {}
        for mid, actor, t_recv in self.consumption_edges:
            pair_times.setdefault((mid, actor), set()).add(t_recv)
        for (mid, actor), times in sorted(pair_times.items()):
            if len(times) > 1:
                report.append(
                    Violation(
                        "duplicate-consumption",
                        mid,
                        f"message {mid!r} delivered to {actor!r} {len(times)} times",
                    )
                )
        for src, dst, kind in sorted(self.message_links):
            if src == dst:
                report.append(Violation("self-link", src, f"message {src!r} links to itself"))
            for mid in (src, dst):
                if mid not in self.messages:
                    report.append(
                        Violation("dangling-message", mid, f"message link endpoint unknown: {mid!r}")
                    )
            if kind == "repost":
                t_src, t_dst = self.production_time(src), self.production_time(dst)
                if t_src is not None and t_dst is not None and t_src < t_dst:
                    report.append(
                        Violation(
                            "repost-time",
                            src,
                            f"repost {src!r} (t={t_src}) predates its source {dst!r} (t={t_dst})",
                        )
                    )
        for src, dst, kind in sorted(self.actor_links):
            for actor in (src, dst):
                if actor not in self.actors:
                    report.append(
                        Violation("dangling-actor", actor, f"actor link endpoint unknown: {actor!r}")
                    )
        return report

    def actor_roles(self) -> dict[str, ActorRole]:
        """Classify every actor by its production/consumption degrees."""
        out_degree: dict[str, int] = {a: 0 for a in self.actors}
        in_degree: dict[str, int] = {a: 0 for a in self.actors}
        for actor, _, _ in self.production_edges:
            if actor in out_degree:
                out_degree[actor] += 1
        for _, actor, _ in self.consumption_edges:
            if actor in in_degree:
                in_degree[actor] += 1
        roles = {}
        for actor in self.actors:
            produces, consumes = out_degree[actor] > 0, in_degree[actor] > 0
            if produces and consumes:
                roles[actor] = ActorRole.PROSUMER
            elif produces:
                roles[actor] = ActorRole.PRODUCER
            elif consumes:
                roles[actor] = ActorRole.CONSUMER
            else:
                roles[actor] = ActorRole.ISOLATE
        return roles

    def communication_type(self, mid: str) -> CommType:
        """Classify a message as unicast, multicast or broadcast.

        Out-degree 1 is unicast; reaching every actor except the sender is
        broadcast; anything in between is multicast.
        """
        if mid not in self.messages:
            raise UnknownMessage(f"no such message: {mid!r}")
        recipients = {actor for actor, _ in self._cons_by_mid.get(mid, [])}
        if not recipients:
            raise NoRecipients(f"message {mid!r} has no consumption edges")
        if len(recipients) == 1:
            return CommType.UNICAST
        prod = self.production_of(mid)
        sender = {prod[0]} if prod is not None else set()
        if recipients == self.actors - sender:
            return CommType.BROADCAST
        return CommType.MULTICAST

    def stats(self) -> dict[str, int]:
        """Basic size figures, keyed |A|, |M|, |E|, |L|.

        |E| counts production plus consumption edges; extension edges are
        not included. |L| is 2 for a core network (one actor partition,
        one message partition).
        """
        return {
            "|A|": len(self.actors),
            "|M|": len(self.messages),
            "|E|": len(self.production_edges) + len(self.consumption_edges),
            "|L|": 2,
        }

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        """Deterministic plain-dict form (ids sorted lexicographically).

        Messages with several production edges cannot be expressed in this
        schema; only the first recorded edge is written. Loaded tags are
        preserved verbatim so that load/save round-trips are byte-stable.
        """
        messages = []
        for mid in sorted(self.messages):
            msg = self.messages[mid]
            prods = self._prod_by_mid.get(mid, [])
            sender, t_send = prods[0] if prods else (None, None)
            recipients = [
                {"actor": actor, "t_recv": t}
                for actor, t in sorted(self._cons_by_mid.get(mid, []))
            ]
            messages.append(
                {
                    "id": mid,
                    "text": msg.text,
                    "tags": sorted(msg.tags),
                    "sender": sender,
                    "t_send": t_send,
                    "recipients": recipients,
                }
            )
        return {
            "actors": sorted(self.actors),
            "messages": messages,
            "message_links": [
                {"src": s, "dst": d, "kind": k} for s, d, k in sorted(self.message_links)
            ],
            "actor_links": [
                {"src": s, "dst": d, "kind": k} for s, d, k in sorted(self.actor_links)
            ],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "TemporalTextNetwork":
        """Rebuild a network from its dict form without builder checks.

        Violations encoded in the document (duplicate ids, backwards
        delivery times, missing senders) are loaded as-is, never dropped;
        run :meth:`validate` to surface them.
        """
        def id_of(value):
            if not isinstance(value, str):
                raise MalformedRecord(f"not a network document: bad id {value!r}")
            return value

        def tick_of(value):
            if isinstance(value, bool) or not isinstance(value, int):
                raise MalformedRecord(f"not a network document: bad tick {value!r}")
            return value

        net = cls()
        try:
            net.actors.update(id_of(a) for a in doc.get("actors", []))
            for entry in doc.get("messages", []):
                mid = id_of(entry["id"])
                if mid not in net.messages:
                    net.messages[mid] = Message(
                        mid, entry.get("text", ""), set(entry.get("tags", []))
                    )
                sender, t_send = entry.get("sender"), entry.get("t_send")
                if sender is not None and t_send is not None:
                    net._add_production_raw(id_of(sender), mid, tick_of(t_send))
                for rec in entry.get("recipients", []):
                    net._add_consumption_raw(mid, id_of(rec["actor"]), tick_of(rec["t_recv"]))
            for link in doc.get("message_links", []):
                net.message_links.add((id_of(link["src"]), id_of(link["dst"]), id_of(link["kind"])))
            for link in doc.get("actor_links", []):
                net.actor_links.add((id_of(link["src"]), id_of(link["dst"]), id_of(link["kind"])))
        except (KeyError, TypeError, AttributeError) as exc:
            raise MalformedRecord(f"not a network document: {exc!r}") from exc
        return net

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "TemporalTextNetwork":
        return cls.from_dict(json.loads(text))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "TemporalTextNetwork":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))

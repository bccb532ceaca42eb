"""Parsers turning external record formats into temporal text networks.

Three formats are supported:

* JSON-lines event records, carrying explicit recipients with optional
  per-recipient delivery times (email-style data);
* JSON-lines tweet records, where recipients are the users mentioned in
  the text and retweets become repost links;
* contact CSV rows ``src,dst,t[,text]``, each row becoming one message
  with a single recipient (multigraph semantics: duplicate rows make
  distinct messages).

Every error is raised with the offending input line number prepended,
keeping the original exception type. Timestamps may be integer ticks or
ISO-8601 strings (converted to epoch milliseconds); mixing the two in one
file is an error.
"""

from __future__ import annotations

import csv
import json
import logging
import re
from datetime import datetime, timezone
from typing import Iterable

from .errors import DuplicateMessageId, MalformedRecord, UnknownRetweetTarget
from .model import Message, TemporalTextNetwork

logger = logging.getLogger(__name__)

# A mention is '@' followed by a maximal alphanumeric run.
_MENTION = re.compile(r"@([0-9A-Za-z]+)")


def extract_mentions(text: str) -> set[str]:
    """Mentioned actor names in ``text`` (deduplicated, case preserved)."""
    return set(_MENTION.findall(text))


def _iso_to_ms(value: str) -> int:
    raw = value.strip()
    if raw.endswith(("Z", "z")):
        raw = raw[:-1] + "+00:00"
    dt = datetime.fromisoformat(raw)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return round(dt.timestamp() * 1000)


class _TickParser:
    """Convert record timestamps to ticks, rejecting mixed formats."""

    def __init__(self) -> None:
        self.kind: str | None = None

    def __call__(self, value, line_no: int) -> int:
        if isinstance(value, bool) or value is None:
            raise MalformedRecord(f"line {line_no}: bad timestamp {value!r}")
        if isinstance(value, int):
            kind, tick = "int", value
        elif isinstance(value, str):
            kind = "iso"
            try:
                tick = _iso_to_ms(value)
            except ValueError as exc:
                raise MalformedRecord(f"line {line_no}: bad timestamp {value!r}") from exc
        else:
            raise MalformedRecord(f"line {line_no}: bad timestamp {value!r}")
        if self.kind is None:
            self.kind = kind
        elif self.kind != kind:
            raise MalformedRecord(
                f"line {line_no}: mixed timestamp formats in one file ({self.kind} vs {kind})"
            )
        return tick


def _with_line(line_no: int, exc: Exception):
    raise type(exc)(f"line {line_no}: {exc}") from exc


def _json_record(line_no: int, line: str) -> dict:
    try:
        rec = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MalformedRecord(f"line {line_no}: invalid JSON ({exc.msg})") from exc
    if not isinstance(rec, dict):
        raise MalformedRecord(f"line {line_no}: record is not an object")
    return rec


def _require(rec: dict, fields: tuple[str, ...], line_no: int) -> None:
    for name in fields:
        if name not in rec:
            raise MalformedRecord(f"line {line_no}: missing field {name!r}")


def parse_event_stream(lines: Iterable[str]) -> TemporalTextNetwork:
    """Build a network from JSON-lines event records.

    A ``message`` record carries id, sender, text, t_send and a recipients
    list of ``{actor, t_recv?}`` entries; a missing t_recv defaults to
    t_send (instantaneous delivery). A ``follow`` record carries src/dst
    and becomes an actor link. reply_to/repost_of fields become message
    links, resolved after all messages are known.
    """
    net = TemporalTextNetwork()
    ticks = _TickParser()
    pending_links: list[tuple[int, str, str, str]] = []
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        rec = _json_record(line_no, line)
        kind = rec.get("kind")
        if kind == "follow":
            _require(rec, ("src", "dst"), line_no)
            try:
                net.add_actor_link(rec["src"], rec["dst"], "follow")
            except Exception as exc:
                _with_line(line_no, exc)
        elif kind == "message":
            _require(rec, ("id", "sender", "t_send"), line_no)
            t_send = ticks(rec["t_send"], line_no)
            try:
                net.add_message(rec["sender"], rec["id"], rec.get("text", ""), t_send)
            except Exception as exc:
                _with_line(line_no, exc)
            recipients = rec.get("recipients", [])
            if not isinstance(recipients, list):
                raise MalformedRecord(f"line {line_no}: recipients must be a list")
            for entry in recipients:
                if not isinstance(entry, dict) or "actor" not in entry:
                    raise MalformedRecord(f"line {line_no}: bad recipient entry {entry!r}")
                t_recv = ticks(entry["t_recv"], line_no) if "t_recv" in entry else t_send
                try:
                    net.add_recipient(rec["id"], entry["actor"], t_recv)
                except Exception as exc:
                    _with_line(line_no, exc)
            for field, link_kind in (("reply_to", "reply"), ("repost_of", "repost")):
                if rec.get(field) is not None:
                    pending_links.append((line_no, rec["id"], rec[field], link_kind))
        else:
            raise MalformedRecord(f"line {line_no}: unknown record kind {kind!r}")
    for line_no, src, dst, link_kind in pending_links:
        try:
            net.add_message_link(src, dst, link_kind)
        except Exception as exc:
            _with_line(line_no, exc)
    return net


def parse_tweet_records(
    lines: Iterable[str], allow_dangling_retweets: bool = False
) -> TemporalTextNetwork:
    """Build a network from JSON-lines tweet records.

    Tweet records are ``{id, author, text, t, retweet_of?}``. Recipients
    are the users mentioned in the text (one consumption edge per distinct
    mention, received at the posting time); hashtags become message tags;
    ``retweet_of`` becomes a repost link. ``{"kind": "follow", src, dst}``
    records become actor links; followers do not receive consumption edges
    (their indirect exposure stays an actor-level relation).

    Retweet targets absent from the corpus raise UnknownRetweetTarget
    unless ``allow_dangling_retweets`` is set, in which case the link is
    dropped with a warning.
    """
    net = TemporalTextNetwork()
    ticks = _TickParser()
    pending_retweets: list[tuple[int, str, str]] = []
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        rec = _json_record(line_no, line)
        if rec.get("kind") == "follow":
            _require(rec, ("src", "dst"), line_no)
            try:
                net.add_actor_link(rec["src"], rec["dst"], "follow")
            except Exception as exc:
                _with_line(line_no, exc)
            continue
        _require(rec, ("id", "author", "text", "t"), line_no)
        t = ticks(rec["t"], line_no)
        try:
            net.add_message(rec["author"], rec["id"], rec["text"], t)
            for mention in sorted(extract_mentions(rec["text"])):
                net.add_recipient(rec["id"], mention, t)
        except Exception as exc:
            _with_line(line_no, exc)
        if rec.get("retweet_of") is not None:
            pending_retweets.append((line_no, rec["id"], rec["retweet_of"]))
    for line_no, src, dst in pending_retweets:
        if dst not in net.messages:
            if allow_dangling_retweets:
                logger.warning("line %d: retweet target %r not in corpus, link dropped", line_no, dst)
                continue
            raise UnknownRetweetTarget(f"line {line_no}: retweet target {dst!r} not in corpus")
        try:
            net.add_message_link(src, dst, "repost")
        except Exception as exc:
            _with_line(line_no, exc)
    return net


def _looks_like_time(value: str) -> bool:
    try:
        int(value)
        return True
    except ValueError:
        pass
    try:
        _iso_to_ms(value)
        return True
    except ValueError:
        return False


def parse_contact_csv(rows: Iterable[str]) -> TemporalTextNetwork:
    """Build a network from contact rows ``src,dst,t[,text]``.

    Each row becomes a fresh message (ids c0, c1, ... in row order) with
    production at src and consumption at dst, both at time t, so duplicate
    rows yield distinct messages. A header row is skipped when its time
    column does not parse.
    """
    net = TemporalTextNetwork()
    ticks = _TickParser()
    index = 0
    first_data_seen = False
    for line_no, row in enumerate(csv.reader(rows), start=1):
        if not row:
            continue
        if len(row) not in (3, 4):
            raise MalformedRecord(f"line {line_no}: expected src,dst,t[,text], got {len(row)} fields")
        if not first_data_seen and not _looks_like_time(row[2].strip()):
            first_data_seen = True  # header row
            continue
        first_data_seen = True
        src, dst, raw_t = row[0].strip(), row[1].strip(), row[2].strip()
        text = row[3] if len(row) == 4 else ""
        if not src or not dst:
            raise MalformedRecord(f"line {line_no}: empty actor id")
        try:
            t = int(raw_t)
        except ValueError:
            t = None
        t = ticks(raw_t if t is None else t, line_no)
        mid = f"c{index}"
        index += 1
        try:
            net.add_message(src, mid, text, t)
            net.add_recipient(mid, dst, t)
        except Exception as exc:
            _with_line(line_no, exc)
    return net


def merge_networks(nets: Iterable[TemporalTextNetwork]) -> TemporalTextNetwork:
    """Union several networks; message id collisions are a hard error."""
    out = TemporalTextNetwork()
    for net in nets:
        clash = out.messages.keys() & net.messages.keys()
        if clash:
            raise DuplicateMessageId(f"message ids present in more than one input: {sorted(clash)}")
        out.actors |= net.actors
        for mid, msg in net.messages.items():
            out.messages[mid] = Message(mid, msg.text, set(msg.tags))
        for actor, mid, t in net.production_edges:
            out._add_production_raw(actor, mid, t)
        for mid, actor, t in net.consumption_edges:
            out._add_consumption_raw(mid, actor, t)
        out.message_links |= net.message_links
        out.actor_links |= net.actor_links
    return out

import random

import pytest

from helpers import nets_equal, random_builder_network
from ttn import ActorRole, CommType, TemporalTextNetwork, extract_hashtags
from ttn.errors import (
    DuplicateMessageId,
    DuplicateRecipient,
    NoRecipients,
    RepostTimeViolation,
    SelfLink,
    TimeOrderViolation,
    UnknownMessage,
)


def test_add_message_stores_production_edge_and_tags():
    net = TemporalTextNetwork()
    net.add_message("A", "m1", "hello #iot", 5)
    assert net.production_edges == {("A", "m1", 5)}
    assert net.messages["m1"].tags == {"iot"}
    assert net.actors == {"A"}


def test_add_message_twice_rejected():
    net = TemporalTextNetwork()
    net.add_message("A", "m1", "x", 1)
    with pytest.raises(DuplicateMessageId):
        net.add_message("B", "m1", "y", 2)


def test_empty_text_message_is_valid():
    net = TemporalTextNetwork()
    net.add_message("A", "m2", "", 3)
    assert net.messages["m2"].tags == set()
    assert net.validate() == []


def test_hashtag_scanner():
    assert extract_hashtags("love #AI and #ar") == {"ai", "ar"}
    assert extract_hashtags("#a1#B2 c #") == {"a1", "b2"}
    assert extract_hashtags("nothing here") == set()


def test_add_recipient():
    net = TemporalTextNetwork()
    net.add_message("A", "m1", "x", 5)
    net.add_recipient("m1", "B", 7)
    assert net.consumption_edges == {("m1", "B", 7)}


def test_add_recipient_before_production_rejected():
    net = TemporalTextNetwork()
    net.add_message("A", "m1", "x", 5)
    with pytest.raises(TimeOrderViolation):
        net.add_recipient("m1", "B", 4)


def test_add_recipient_at_production_time_allowed():
    net = TemporalTextNetwork()
    net.add_message("A", "m1", "x", 5)
    net.add_recipient("m1", "B", 5)
    assert ("m1", "B", 5) in net.consumption_edges


def test_add_recipient_errors():
    net = TemporalTextNetwork()
    net.add_message("A", "m1", "x", 5)
    net.add_recipient("m1", "B", 6)
    with pytest.raises(DuplicateRecipient):
        net.add_recipient("m1", "B", 9)
    with pytest.raises(UnknownMessage):
        net.add_recipient("nope", "B", 9)


def test_message_links():
    net = TemporalTextNetwork()
    net.add_message("A", "m2", "x", 4)
    net.add_message("B", "m3", "y", 9)
    net.add_message_link("m3", "m2", "repost")
    assert ("m3", "m2", "repost") in net.message_links
    with pytest.raises(SelfLink):
        net.add_message_link("m3", "m3", "repost")
    with pytest.raises(RepostTimeViolation):
        net.add_message_link("m2", "m3", "repost")
    # replies may point forward in time (clocks in source data disagree)
    net.add_message_link("m2", "m3", "reply")
    with pytest.raises(UnknownMessage):
        net.add_message_link("m3", "nope", "reply")
    with pytest.raises(ValueError):
        net.add_message_link("m3", "m2", "quote")


def test_validate_empty_network():
    assert TemporalTextNetwork().validate() == []


def test_validate_flags_double_production():
    doc = {
        "actors": ["A", "B"],
        "messages": [
            {"id": "m1", "text": "", "tags": [], "sender": "A", "t_send": 1, "recipients": []},
            {"id": "m1", "text": "", "tags": [], "sender": "B", "t_send": 2, "recipients": []},
        ],
        "message_links": [],
        "actor_links": [],
    }
    report = TemporalTextNetwork.from_dict(doc).validate()
    assert [v.rule for v in report] == ["constraint-1"]
    assert report[0].subject == "m1"


def test_validate_flags_missing_production():
    doc = {
        "actors": ["A"],
        "messages": [
            {"id": "m1", "text": "", "tags": [], "sender": None, "t_send": None, "recipients": []}
        ],
        "message_links": [],
        "actor_links": [],
    }
    report = TemporalTextNetwork.from_dict(doc).validate()
    assert [v.rule for v in report] == ["constraint-1"]


def test_validate_flags_time_order_and_names_edge():
    doc = {
        "actors": ["A", "B"],
        "messages": [
            {
                "id": "m1",
                "text": "",
                "tags": [],
                "sender": "A",
                "t_send": 5,
                "recipients": [{"actor": "B", "t_recv": 4}],
            }
        ],
        "message_links": [],
        "actor_links": [],
    }
    report = TemporalTextNetwork.from_dict(doc).validate()
    assert len(report) == 1
    assert report[0].rule == "constraint-2"
    assert "m1" in report[0].detail and "B" in report[0].detail


def test_validate_flags_dangling_and_duplicate_consumption():
    doc = {
        "actors": ["A"],
        "messages": [
            {
                "id": "m1",
                "text": "",
                "tags": [],
                "sender": "A",
                "t_send": 1,
                "recipients": [{"actor": "B", "t_recv": 2}, {"actor": "B", "t_recv": 3}],
            }
        ],
        "message_links": [],
        "actor_links": [{"src": "A", "dst": "Z", "kind": "follow"}],
    }
    rules = {v.rule for v in TemporalTextNetwork.from_dict(doc).validate()}
    assert "dangling-actor" in rules  # B receives but is not listed, Z unknown
    assert "duplicate-consumption" in rules


def test_actor_roles():
    net = TemporalTextNetwork()
    net.add_message("A", "m1", "x", 1)
    net.add_recipient("m1", "B", 2)
    net.add_actor("C")
    roles = net.actor_roles()
    assert roles == {"A": ActorRole.PRODUCER, "B": ActorRole.CONSUMER, "C": ActorRole.ISOLATE}
    net.add_message("B", "m2", "y", 3)
    net.add_recipient("m2", "A", 4)
    roles = net.actor_roles()
    assert roles["A"] == ActorRole.PROSUMER and roles["B"] == ActorRole.PROSUMER


def test_actor_roles_partition_and_permutation_invariance():
    rng = random.Random(7)
    for _ in range(20):
        net = random_builder_network(rng, rng.randint(1, 60))
        roles = net.actor_roles()
        assert set(roles) == net.actors
        # renaming actors must keep the role multiset
        doc = net.to_dict()
        rename = lambda a: f"z_{a}"
        doc["actors"] = [rename(a) for a in doc["actors"]]
        for msg in doc["messages"]:
            msg["sender"] = rename(msg["sender"])
            for rec in msg["recipients"]:
                rec["actor"] = rename(rec["actor"])
        for link in doc["actor_links"]:
            link["src"], link["dst"] = rename(link["src"]), rename(link["dst"])
        renamed = TemporalTextNetwork.from_dict(doc)
        original = sorted(r.value for r in roles.values())
        assert sorted(r.value for r in renamed.actor_roles().values()) == original


def _fig4_net(recipients):
    net = TemporalTextNetwork()
    for actor in "ABCD":
        net.add_actor(actor)
    net.add_message("A", "m", "x", 0)
    for r in recipients:
        net.add_recipient("m", r, 1)
    return net


def test_communication_type():
    assert _fig4_net("C").communication_type("m") == CommType.UNICAST
    assert _fig4_net("CD").communication_type("m") == CommType.MULTICAST
    assert _fig4_net("BCD").communication_type("m") == CommType.BROADCAST
    with pytest.raises(NoRecipients):
        _fig4_net("").communication_type("m")
    with pytest.raises(UnknownMessage):
        _fig4_net("C").communication_type("nope")


def test_broadcast_implies_full_outdegree():
    rng = random.Random(11)
    for _ in range(20):
        net = random_builder_network(rng, 40)
        for mid in net.messages:
            if not net.recipients_of(mid):
                continue
            if net.communication_type(mid) == CommType.BROADCAST:
                assert len({a for a, _ in net.recipients_of(mid)}) == len(net.actors) - 1


def test_stats():
    assert TemporalTextNetwork().stats() == {"|A|": 0, "|M|": 0, "|E|": 0, "|L|": 2}
    net = TemporalTextNetwork()
    net.add_message("A", "m1", "x", 1)
    net.add_recipient("m1", "B", 2)
    net.add_recipient("m1", "C", 3)
    assert net.stats() == {"|A|": 3, "|M|": 1, "|E|": 3, "|L|": 2}


def test_builder_sequences_always_validate_clean():
    rng = random.Random(3)
    for _ in range(30):
        net = random_builder_network(rng, rng.randint(0, 200))
        assert net.validate() == []


def test_serialization_round_trip_and_byte_stability():
    rng = random.Random(5)
    for _ in range(10):
        net = random_builder_network(rng, 80)
        text = net.to_json()
        again = TemporalTextNetwork.from_json(text)
        assert nets_equal(net, again)
        assert again.to_json() == text

"""Routing rules: responder selection, room discipline, brush, audio, triggers."""

import base64
import random
from collections import Counter

import pytest

from costudy import BrushQuery, PayloadError, RouterConfig
from costudy.providers import encode_text_wav
from costudy.rooms import GROUP_ROOM, private_room_id
from costudy.router import (
    pick_forward_target,
    pick_group_responders,
    pick_preferring_idle,
    pick_responder_count,
)

from conftest import ROSTER_IDS, make_engine

GOLDEN_SEED11 = ["elena", "diego"]


# --- selection helpers ----------------------------------------------------


def test_group_selection_seed11_golden():
    rng = random.Random(11)
    assert pick_group_responders(rng, RouterConfig(), list(ROSTER_IDS)) == GOLDEN_SEED11


def test_responder_counts_and_uniformity():
    rng = random.Random(5)
    config = RouterConfig()
    counts = Counter()
    ks = Counter()
    trials = 1_000
    for _ in range(trials):
        picked = pick_group_responders(rng, config, list(ROSTER_IDS))
        assert len(set(picked)) == len(picked)
        ks[len(picked)] += 1
        counts.update(picked)
    assert set(ks) == {1, 2, 3}
    expected = sum(ks[k] * k for k in ks) / len(ROSTER_IDS)
    for agent in ROSTER_IDS:
        assert abs(counts[agent] - expected) <= 0.20 * expected


def test_responder_count_clamped_to_roster():
    rng = random.Random(2)
    config = RouterConfig()
    for _ in range(200):
        assert pick_responder_count(rng, config, 2) in (1, 2)


def test_forward_target_never_author():
    rng = random.Random(3)
    for _ in range(200):
        target = pick_forward_target(rng, list(ROSTER_IDS), "ava")
        assert target in ROSTER_IDS and target != "ava"
    assert pick_forward_target(rng, ["solo"], "solo") is None


def test_pick_preferring_idle_excludes_busy_when_possible():
    rng = random.Random(4)
    busy = {"ava", "ben"}
    for _ in range(100):
        assert pick_preferring_idle(rng, list(ROSTER_IDS), busy) not in busy
    # all busy: falls back to the full roster
    assert pick_preferring_idle(rng, ["ava"], {"ava"}) == "ava"


# --- brush query validation ---------------------------------------------------


def test_brush_query_accepts_valid_region():
    BrushQuery((100, 50, 300, 200), b"img", "explain the swap", 0).validate()


def test_brush_query_rejects_degenerate_region():
    with pytest.raises(PayloadError):
        BrushQuery((100, 50, 100, 200), b"img", "q", 0).validate()
    with pytest.raises(PayloadError):
        BrushQuery((-1, 0, 10, 10), b"img", "q", 0).validate()
    with pytest.raises(PayloadError):
        BrushQuery((0, 0, 10, 10), b"img", "   ", 0).validate()


# --- engine-level routing --------------------------------------------------


def test_private_chat_reply_stays_in_own_room():
    engine = make_engine()
    engine.ingest({"kind": "user_chat", "data": {"room": "private:ava", "text": "why O(n^2)?"}}, 1_000)
    room = engine.session.rooms[private_room_id("ava")]
    assert [m.sender for m in room.messages] == ["user", "ava"]
    changes = [e for e in engine.session.event_log if e.kind == "action_change"]
    assert changes and changes[0].data["agent_id"] == "ava"
    # no other private room saw anything
    for agent_id in ROSTER_IDS[1:]:
        assert engine.session.rooms[private_room_id(agent_id)].messages == []


def test_private_chat_empty_text_rejected_before_logging():
    engine = make_engine()
    with pytest.raises(PayloadError):
        engine.ingest({"kind": "user_chat", "data": {"room": "private:ava", "text": "  "}}, 1_000)
    assert engine.session.event_log == []


def test_group_chat_one_to_three_distinct_responders():
    engine = make_engine()
    engine.ingest({"kind": "user_chat", "data": {"room": "group", "text": "thoughts on stacks?"}}, 1_000)
    replies = [e for e in engine.session.event_log
               if e.kind == "agent_chat" and e.data["room"] == GROUP_ROOM]
    senders = [e.data["agent_id"] for e in replies]
    assert 1 <= len(senders) <= 3
    assert len(set(senders)) == len(senders)
    # every responder also got an active action
    active = {e.data["agent_id"] for e in engine.session.event_log
              if e.kind == "action_change" and e.data["phase"] == "starting"}
    assert set(senders) <= active


def test_brush_routes_to_exactly_one_agent_into_group_room():
    engine = make_engine()
    image_b64 = base64.b64encode(b"fake png bytes").decode()
    event = engine.ingest(
        {"kind": "brush_query",
         "data": {"region": [100, 50, 300, 200], "image_b64": image_b64,
                  "question": "explain the swap", "video_ms": 12_000}},
        2_000,
    )
    replies = [e for e in engine.session.event_log if e.kind == "agent_chat"]
    assert len(replies) == 1
    assert replies[0].data["modality"] == "brush_reply"
    assert replies[0].data["room"] == GROUP_ROOM
    assert replies[0].cause == event.seq
    assert engine.session.usage.brush_uses == 1


def test_brush_invalid_region_rejected_before_any_event():
    engine = make_engine()
    image_b64 = base64.b64encode(b"img").decode()
    with pytest.raises(PayloadError):
        engine.ingest(
            {"kind": "brush_query",
             "data": {"region": [100, 50, 100, 200], "image_b64": image_b64,
                      "question": "q", "video_ms": 0}},
            2_000,
        )
    assert engine.session.event_log == []


def test_brush_predefined_prompt_accepted():
    engine = make_engine()
    prompt = engine.config.router.predefined_prompts[0]
    image_b64 = base64.b64encode(b"img").decode()
    engine.ingest(
        {"kind": "brush_query",
         "data": {"region": [0, 0, 10, 10], "image_b64": image_b64,
                  "question": prompt, "video_ms": 0}},
        1_000,
    )
    assert any(e.kind == "agent_chat" for e in engine.session.event_log)


def test_audio_round_trip_private_pair_and_clip():
    engine = make_engine()
    audio = encode_text_wav("how do stacks work")
    engine.ingest(
        {"kind": "user_audio",
         "data": {"agent_id": "ben", "audio_b64": base64.b64encode(audio).decode(),
                  "mime": "audio/wav"}},
        3_000,
    )
    room = engine.session.rooms[private_room_id("ben")]
    assert [m.sender for m in room.messages] == ["user", "ben"]
    assert room.messages[0].text == "how do stacks work"
    audio_events = [e for e in engine.session.event_log if e.kind == "agent_audio"]
    assert len(audio_events) == 1
    clip_ms = audio_events[0].data["duration_ms"]
    continuing = [e for e in engine.session.event_log
                  if e.kind == "action_change" and e.data["phase"] == "continuing"]
    # drive the episode into its continuing phase and check the duration matches
    engine.advance_to(3_000 + engine.config.scheduler.phase_ms)
    continuing = [e for e in engine.session.event_log
                  if e.kind == "action_change" and e.data["phase"] == "continuing"]
    assert continuing[0].data["duration_ms"] == clip_ms
    assert engine.session.usage.audio_uses == 1


def test_audio_undecodable_yields_notice_only():
    engine = make_engine()
    engine.ingest(
        {"kind": "user_audio",
         "data": {"agent_id": "ben", "audio_b64": base64.b64encode(b"not a wav").decode(),
                  "mime": "audio/wav"}},
        3_000,
    )
    room = engine.session.rooms[private_room_id("ben")]
    assert [m.sender for m in room.messages] == ["system"]
    assert not any(e.kind in ("agent_chat", "agent_audio") for e in engine.session.event_log)


def test_forwarded_reply_never_from_source_agent():
    engine = make_engine()
    engine.ingest({"kind": "user_chat", "data": {"room": "group", "text": "hello everyone"}}, 1_000)
    replies = [e for e in engine.session.event_log if e.kind == "agent_chat"]
    first_author = replies[-1].data["agent_id"]
    engine.advance_to(engine.forward_next_ms)
    forwarded = [e for e in engine.session.event_log
                 if e.kind == "agent_chat" and "forwarded_from" in e.data]
    assert forwarded
    for event in forwarded:
        assert event.data["agent_id"] != event.data["forwarded_from"]
    assert forwarded[0].data["forwarded_from"] == first_author


def test_forward_on_empty_group_seeds_opening_remark():
    engine = make_engine()
    engine.advance_to(engine.forward_next_ms)
    group = engine.session.rooms[GROUP_ROOM]
    agent_messages = [m for m in group.messages if m.sender in ROSTER_IDS]
    assert len(agent_messages) == 1


def test_forwarder_disabled_for_single_agent_roster():
    from costudy import DEFAULT_PERSONAS

    engine = make_engine(personas=DEFAULT_PERSONAS[:1], session_id="solo")
    assert engine.forward_next_ms is None
    assert engine.session.roster == ["ava"]
    assert len(engine.session.rooms) == 2  # group + one private


def test_code_idle_trigger_reviews_code_with_digest():
    import hashlib

    engine = make_engine()
    code = "x = [1, 2]\nprint(x[2])"
    engine.ingest({"kind": "code_edit", "data": {"text": code}}, 1_000)
    engine.advance_to(1_000 + 60_001)
    fired = [e for e in engine.session.event_log if e.kind == "trigger_fired"]
    assert [e.data["trigger"] for e in fired] == ["code_idle"]
    reviews = [e for e in engine.session.event_log
               if e.kind == "agent_chat" and e.data["modality"] == "code_review"]
    assert len(reviews) == 1
    digest = hashlib.sha256(code.encode()).hexdigest()[:8]
    assert digest in reviews[0].data["text"]
    assert reviews[0].cause == fired[0].seq


def test_notes_idle_trigger_shares_notes_body():
    engine = make_engine()
    # keep mouse and code fresh so only notes goes idle
    engine.ingest({"kind": "activity_ping", "data": {"channel": "mouse"}}, 150_000)
    engine.ingest({"kind": "code_edit", "data": {"text": "pass"}}, 150_001)
    engine.advance_to(180_001)
    shared = [e for e in engine.session.event_log
              if e.kind == "agent_chat" and e.data["modality"] == "shared_notes"]
    assert len(shared) == 1
    agent = engine.agents[shared[0].data["agent_id"]]
    assert shared[0].data["text"] == agent.notes
    updates = [e for e in engine.session.event_log if e.kind == "notes_update"]
    assert updates and updates[0].data["agent_id"] == shared[0].data["agent_id"]


def test_mouse_idle_trigger_sends_progress_inquiry():
    engine = make_engine()
    engine.ingest({"kind": "code_edit", "data": {"text": "pass"}}, 110_000)
    engine.ingest({"kind": "notes_edit", "data": {"text": "notes"}}, 110_001)
    engine.advance_to(120_001)
    inquiries = [e for e in engine.session.event_log
                 if e.kind == "agent_chat" and e.data["modality"] == "progress_inquiry"]
    assert len(inquiries) == 1
    assert inquiries[0].data["room"].startswith("private:")


def test_baseline_routing_logs_user_message_without_reply(baseline_engine):
    baseline_engine.ingest(
        {"kind": "user_chat", "data": {"room": "private:ava", "text": "anyone there?"}}, 1_000
    )
    room = baseline_engine.session.rooms[private_room_id("ava")]
    assert [m.sender for m in room.messages] == ["user"]
    assert not any(e.kind == "agent_chat" for e in baseline_engine.session.event_log)


def test_baseline_trigger_produces_no_message(baseline_engine):
    baseline_engine.ingest({"kind": "code_edit", "data": {"text": "pass"}}, 1_000)
    baseline_engine.advance_to(400_000)
    assert not any(e.kind in ("trigger_fired", "agent_chat", "gated")
                   for e in baseline_engine.session.event_log)

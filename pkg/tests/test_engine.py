"""Engine runtime: determinism, replay, clock handling, causality, snapshots."""

import base64

import pytest

from costudy import CoStudyError, PayloadError, SessionConfig, replay_log
from costudy.engine import CoStudyEngine, agent_slug
from costudy.events import PERCEIVE_KINDS
from costudy.providers import encode_text_wav

from conftest import SAMPLE_VTT, make_engine


def scripted_run(mode: str = "full", seed: int = 7) -> CoStudyEngine:
    engine = make_engine(mode=mode, seed=seed, session_id="scripted")
    engine.ingest({"kind": "code_edit", "data": {"text": "x = [1,2]\nprint(x[2])"}}, 1_000)
    engine.ingest({"kind": "user_chat", "data": {"room": "private:ava", "text": "why O(n^2)?"}}, 5_000)
    engine.ingest({"kind": "user_chat", "data": {"room": "group", "text": "how do stacks pop?"}}, 20_000)
    engine.ingest(
        {"kind": "brush_query",
         "data": {"region": [10, 10, 60, 60],
                  "image_b64": base64.b64encode(b"diagram").decode(),
                  "question": "explain the swap", "video_ms": 21_000}},
        30_000,
    )
    audio = encode_text_wav("can you give an example")
    engine.ingest(
        {"kind": "user_audio",
         "data": {"agent_id": "ben", "audio_b64": base64.b64encode(audio).decode(),
                  "mime": "audio/wav"}},
        45_000,
    )
    engine.ingest({"kind": "activity_ping", "data": {"channel": "mouse"}}, 60_000)
    engine.advance_to(300_000)
    return engine


def test_same_seed_same_trace_byte_identical_logs():
    assert scripted_run().export_log_bytes() == scripted_run().export_log_bytes()


def test_different_seed_diverges():
    assert scripted_run(seed=7).export_log_bytes() != scripted_run(seed=8).export_log_bytes()


def test_export_replay_export_round_trips():
    original = scripted_run()
    exported = original.export_log_bytes()
    rebuilt = replay_log(SessionConfig(rng_seed=7), SAMPLE_VTT, exported, session_id="scripted")
    assert rebuilt.export_log_bytes() == exported
    # materialized state converges too, not just the log
    rebuilt.advance_to(original.session.clock_ms)
    assert rebuilt.snapshot() == original.snapshot()


def test_replay_includes_usage_endpoint_entries():
    engine = make_engine(session_id="usage")
    engine.ingest({"kind": "activity_ping", "data": {"channel": "mouse"}}, 500)
    engine.advance_to(1_000)
    engine.record_usage("notes")
    engine.record_usage("profile")
    exported = engine.export_log_bytes()
    rebuilt = replay_log(SessionConfig(rng_seed=7), SAMPLE_VTT, exported, session_id="usage")
    assert rebuilt.export_log_bytes() == exported
    assert rebuilt.session.usage.notes_views == 1
    assert rebuilt.session.usage.profile_views == 1


def test_log_density_and_monotone_timestamps():
    engine = scripted_run()
    log = engine.session.event_log
    assert [e.seq for e in log] == list(range(1, len(log) + 1))
    for previous, current in zip(log, log[1:]):
        assert current.at_ms >= previous.at_ms


def test_every_act_event_cause_chain_ends_at_user_or_scheduler():
    engine = scripted_run()
    by_seq = {e.seq: e for e in engine.session.event_log}
    for event in engine.session.event_log:
        if event.kind in PERCEIVE_KINDS and event.cause is None:
            continue
        cause = event.cause
        seen = set()
        while cause is not None:
            assert cause in by_seq and cause not in seen
            seen.add(cause)
            cause = by_seq[cause].cause
        # chain ended at null: either a user perceive event or a scheduler origin


def test_clock_regression_rejected():
    engine = make_engine()
    engine.advance_to(10_000)
    with pytest.raises(CoStudyError):
        engine.advance_to(9_999)


def test_ingest_before_clock_rejected():
    engine = make_engine()
    engine.advance_to(10_000)
    with pytest.raises(CoStudyError):
        engine.ingest({"kind": "activity_ping", "data": {"channel": "mouse"}}, 9_000)


def test_unknown_room_and_agent_rejected():
    engine = make_engine()
    with pytest.raises(PayloadError):
        engine.ingest({"kind": "user_chat", "data": {"room": "private:nobody", "text": "hi"}}, 100)
    with pytest.raises(PayloadError):
        engine.ingest(
            {"kind": "user_audio",
             "data": {"agent_id": "nobody", "audio_b64": "aGk=", "mime": "audio/wav"}}, 100)


def test_unknown_kind_rejected():
    engine = make_engine()
    with pytest.raises(PayloadError):
        engine.ingest({"kind": "telepathy", "data": {}}, 100)


def test_persona_update_regenerates_profile_and_counts_usage():
    engine = make_engine()
    before = engine.agents["ava"].profile
    event = engine.ingest(
        {"kind": "persona_update",
         "data": {"agent_id": "ava", "changes": {"tone": "crisp and dry"}}},
        2_000,
    )
    assert engine.agents["ava"].persona.tone == "crisp and dry"
    assert engine.agents["ava"].profile != before
    kinds = [(e.kind, e.cause) for e in engine.session.event_log]
    assert ("notes_update", event.seq) in kinds
    assert ("profile_update", event.seq) in kinds
    assert engine.session.usage.customization_changes == 1
    reply = engine.ingest(
        {"kind": "user_chat", "data": {"room": "private:ava", "text": "say something new"}}, 3_000
    )
    assert "crisp and dry" in engine.agents["ava"].system_prompt


def test_persona_update_noop_emits_nothing_extra():
    engine = make_engine()
    engine.ingest({"kind": "persona_update", "data": {"agent_id": "ava", "changes": {}}}, 1_000)
    kinds = [e.kind for e in engine.session.event_log]
    assert kinds == ["persona_update"]
    assert engine.session.usage.customization_changes == 0


def test_persona_name_change_rejected_at_validation():
    engine = make_engine()
    with pytest.raises(PayloadError):
        engine.ingest(
            {"kind": "persona_update",
             "data": {"agent_id": "ava", "changes": {"name": "Eve"}}},
            1_000,
        )


def test_snapshot_shape_and_room_counts():
    engine = scripted_run()
    snap = engine.snapshot()
    assert snap["session_id"] == "scripted"
    assert snap["mode"] == "full"
    assert len(snap["roster"]) == 6
    assert set(snap["rooms"]) == {"group"} | {f"private:{a}" for a in engine.session.roster}
    assert snap["usage"]["chat_messages"] >= 2
    assert snap["docs"]["code"]["text"].startswith("x = [1,2]")
    agent_entry = snap["roster"][0]
    assert {"agent_id", "name", "notes", "profile", "action", "shared_screen"} <= set(agent_entry)


def test_rooms_layout_for_default_roster():
    engine = make_engine()
    assert len(engine.session.rooms) == 7  # one group + six private
    assert "group" in engine.session.rooms


def test_agent_slug_normalization():
    assert agent_slug("Ava") == "ava"
    assert agent_slug("Dr. Stack Overflow") == "dr-stack-overflow"
    assert agent_slug("!!!") == "agent"


def test_video_position_tracked_and_counts_as_mouse_activity():
    engine = make_engine()
    engine.ingest({"kind": "video_position", "data": {"position_ms": 90_000}}, 1_000)
    assert engine.video_position_ms == 90_000
    assert engine.activity.channels["mouse"].last_activity_ms == 1_000


def test_duplicate_persona_names_rejected():
    from costudy import ConfigError, DEFAULT_PERSONAS

    personas = (DEFAULT_PERSONAS[0], DEFAULT_PERSONAS[0])
    with pytest.raises(ConfigError):
        make_engine(personas=personas)


def test_malformed_transcript_error_carries_line_number():
    from costudy import TranscriptParseError

    with pytest.raises(TranscriptParseError) as err:
        make_engine(transcript="garbage line\n")
    assert err.value.line_no == 1

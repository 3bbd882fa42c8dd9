"""Session aggregate: append-only event log, baseline gate, and usage counters.

All mutations flow through :func:`append_event`. In baseline mode the gate
replaces agent-authored payloads (chat, audio, triggers, generated content,
and active-action changes) with a ``gated`` marker, so a baseline log can
never contain AI-generated output no matter what upstream code attempts.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from .errors import CoStudyError, UnknownFeatureError
from .events import SessionEvent, encode_line
from .rooms import ChatRoom
from .transcript import Transcript

MODE_FULL = "full"
MODE_BASELINE = "baseline"
MODES = (MODE_FULL, MODE_BASELINE)

USAGE_FEATURES = {
    "notes": "notes_views",
    "chat": "chat_messages",
    "brush": "brush_uses",
    "audio": "audio_uses",
    "profile": "profile_views",
    "customization": "customization_changes",
}

_AGENT_AUTHORED_KINDS = frozenset(
    {"agent_chat", "agent_audio", "trigger_fired", "notes_update", "profile_update"}
)


@dataclass
class Document:
    text: str = ""
    edited_at_ms: int | None = None


@dataclass
class UsageCounters:
    notes_views: int = 0
    chat_messages: int = 0
    brush_uses: int = 0
    audio_uses: int = 0
    profile_views: int = 0
    customization_changes: int = 0

    def as_dict(self) -> dict:
        return {
            "notes_views": self.notes_views,
            "chat_messages": self.chat_messages,
            "brush_uses": self.brush_uses,
            "audio_uses": self.audio_uses,
            "profile_views": self.profile_views,
            "customization_changes": self.customization_changes,
        }


@dataclass
class Session:
    session_id: str
    mode: str
    rng_seed: int
    roster: list[str]
    rooms: dict[str, ChatRoom]
    transcript: Transcript
    notes_doc: Document = field(default_factory=Document)
    code_doc: Document = field(default_factory=Document)
    event_log: list[SessionEvent] = field(default_factory=list)
    usage: UsageCounters = field(default_factory=UsageCounters)
    clock_ms: int = 0


def derive_seed(master: int, label: str) -> int:
    """Stable per-consumer sub-seed; never uses builtin hash (it is randomized)."""
    digest = hashlib.sha256(f"{master}:{label}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def is_gated(mode: str, kind: str, data: dict) -> bool:
    if mode != MODE_BASELINE:
        return False
    if kind in _AGENT_AUTHORED_KINDS:
        return True
    # active-action changes carry a phase; passive playback stays allowed
    return kind == "action_change" and data.get("phase") is not None


def append_event(session: Session, kind: str, data: dict, cause: int | None = None) -> SessionEvent:
    """Append one event at the current session clock; total on valid payloads."""
    if session.event_log and session.clock_ms < session.event_log[-1].at_ms:
        raise CoStudyError("session clock regressed below the last logged event")
    if is_gated(session.mode, kind, data):
        data = {"dropped_kind": kind, "agent_id": data.get("agent_id")}
        kind = "gated"
    event = SessionEvent(len(session.event_log) + 1, session.clock_ms, kind, cause, data)
    session.event_log.append(event)
    return event


def record_usage(session: Session, feature: str, cause: int | None = None) -> UsageCounters:
    counter = USAGE_FEATURES.get(feature)
    if counter is None:
        raise UnknownFeatureError(f"unknown usage feature {feature!r}")
    value = getattr(session.usage, counter) + 1
    setattr(session.usage, counter, value)
    append_event(session, "usage_increment", {"feature": feature, "value": value}, cause)
    return session.usage


def export_log(session: Session) -> bytes:
    """Serialize the event log as JSONL, one event per line."""
    return b"".join(encode_line(e).encode("utf-8") + b"\n" for e in session.event_log)

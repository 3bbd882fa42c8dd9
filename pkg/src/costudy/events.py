"""Session event model, wire encoding, and inbound payload validation.

The JSONL log line and the stream frame share one schema:
``{"seq": int, "at_ms": int, "kind": str, "cause": int|null, "data": {...}}``
(stream frames additionally carry ``protocol_version``). Key order is fixed so
that identical runs export byte-identical logs.
"""

from __future__ import annotations

import base64
import binascii
import json
from dataclasses import dataclass

from .activity import CHANNELS
from .errors import PayloadError

PROTOCOL_VERSION = 1

PERCEIVE_KINDS = (
    "user_chat",
    "user_audio",
    "brush_query",
    "notes_edit",
    "code_edit",
    "activity_ping",
    "video_position",
    "persona_update",
)

ACT_KINDS = (
    "agent_chat",
    "agent_audio",
    "action_change",
    "shared_screen_control",
    "notes_update",
    "profile_update",
    "trigger_fired",
    "usage_increment",
)

GATED_KIND = "gated"
NOTICE_KIND = "system_notice"

PERSONA_MUTABLE_FIELDS = ("tone", "interaction_style", "characteristic")


@dataclass(frozen=True)
class SessionEvent:
    seq: int
    at_ms: int
    kind: str
    cause: int | None
    data: dict

    def to_wire(self) -> dict:
        return {
            "seq": self.seq,
            "at_ms": self.at_ms,
            "kind": self.kind,
            "cause": self.cause,
            "data": self.data,
        }


@dataclass(frozen=True)
class EventDraft:
    """An event description produced by a subsystem before the log assigns a seq."""

    at_ms: int
    kind: str
    data: dict


def encode_line(event: SessionEvent) -> str:
    return json.dumps(event.to_wire(), ensure_ascii=False, separators=(",", ":"))


def decode_line(line: str) -> SessionEvent:
    raw = json.loads(line)
    return SessionEvent(raw["seq"], raw["at_ms"], raw["kind"], raw["cause"], raw["data"])


def _require_str(data: dict, field: str, allow_empty: bool = False) -> str:
    value = data.get(field)
    if not isinstance(value, str):
        raise PayloadError(field, "must be a string")
    if not allow_empty and not value.strip():
        raise PayloadError(field, "must be non-empty")
    return value


def _require_int(data: dict, field: str, minimum: int | None = None) -> int:
    value = data.get(field)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise PayloadError(field, "must be an integer")
    if isinstance(value, float):
        if not value.is_integer():
            raise PayloadError(field, "must be an integer")
        value = int(value)
    if minimum is not None and value < minimum:
        raise PayloadError(field, f"must be >= {minimum}")
    return value


def _require_b64(data: dict, field: str) -> str:
    value = _require_str(data, field)
    try:
        base64.b64decode(value, validate=True)
    except (binascii.Error, ValueError):
        raise PayloadError(field, "must be valid base64") from None
    return value


def _reject_extras(data: dict, allowed: tuple[str, ...]) -> None:
    extras = sorted(set(data) - set(allowed))
    if extras:
        raise PayloadError(extras[0], "unexpected field")


def validate_perceive(body: dict) -> tuple[str, dict]:
    """Validate an inbound perceive payload and return (kind, canonical data).

    The returned data dict is rebuilt with a fixed key order so that logs are
    byte-stable regardless of how the client ordered its JSON.
    """
    if not isinstance(body, dict):
        raise PayloadError("body", "must be a JSON object")
    kind = body.get("kind")
    if kind not in PERCEIVE_KINDS:
        raise PayloadError("kind", f"unknown perceive kind {kind!r}")
    data = body.get("data")
    if not isinstance(data, dict):
        raise PayloadError("data", "must be a JSON object")

    if kind == "user_chat":
        _reject_extras(data, ("room", "text", "transcribed"))
        room = _require_str(data, "room")
        text = _require_str(data, "text")
        canonical = {"room": room, "text": text}
        if data.get("transcribed"):
            canonical["transcribed"] = True
        return kind, canonical

    if kind == "user_audio":
        _reject_extras(data, ("agent_id", "audio_b64", "mime"))
        return kind, {
            "agent_id": _require_str(data, "agent_id"),
            "audio_b64": _require_b64(data, "audio_b64"),
            "mime": _require_str(data, "mime"),
        }

    if kind == "brush_query":
        _reject_extras(data, ("region", "image_b64", "question", "video_ms"))
        region = data.get("region")
        if not isinstance(region, (list, tuple)) or len(region) != 4:
            raise PayloadError("region", "must be a list of 4 integers")
        coords = []
        for value in region:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise PayloadError("region", "must be a list of 4 integers")
            if isinstance(value, float):
                if not value.is_integer():
                    raise PayloadError("region", "coordinates must be integers")
                value = int(value)
            coords.append(value)
        return kind, {
            "region": coords,
            "image_b64": _require_b64(data, "image_b64"),
            "question": _require_str(data, "question"),
            "video_ms": _require_int(data, "video_ms", minimum=0),
        }

    if kind in ("notes_edit", "code_edit"):
        _reject_extras(data, ("text",))
        return kind, {"text": _require_str(data, "text", allow_empty=True)}

    if kind == "activity_ping":
        _reject_extras(data, ("channel",))
        channel = _require_str(data, "channel")
        if channel not in CHANNELS:
            raise PayloadError("channel", f"must be one of {CHANNELS}")
        return kind, {"channel": channel}

    if kind == "video_position":
        _reject_extras(data, ("position_ms",))
        return kind, {"position_ms": _require_int(data, "position_ms", minimum=0)}

    # persona_update
    _reject_extras(data, ("agent_id", "changes"))
    agent_id = _require_str(data, "agent_id")
    changes = data.get("changes")
    if not isinstance(changes, dict):
        raise PayloadError("changes", "must be a JSON object")
    if "name" in changes:
        raise PayloadError("changes.name", "persona names are fixed roster identity")
    canonical_changes = {}
    for field in PERSONA_MUTABLE_FIELDS:
        if field in changes:
            value = changes[field]
            if not isinstance(value, str) or not value.strip():
                raise PayloadError(f"changes.{field}", "must be a non-empty string")
            canonical_changes[field] = value
    extras = sorted(set(changes) - set(PERSONA_MUTABLE_FIELDS))
    if extras:
        raise PayloadError(f"changes.{extras[0]}", "unexpected field")
    return kind, {"agent_id": agent_id, "changes": canonical_changes}

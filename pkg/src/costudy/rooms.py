"""Chat room data model shared by the session aggregate and message routing."""

from __future__ import annotations

from dataclasses import dataclass, field

GROUP_ROOM = "group"

MODALITIES = ("text", "audio", "brush_reply", "shared_notes", "code_review", "progress_inquiry")


def private_room_id(agent_id: str) -> str:
    return f"private:{agent_id}"


def is_private_room(room_id: str) -> bool:
    return room_id.startswith("private:")


@dataclass
class ChatMessage:
    sender: str  # "user", "system", or an agent id
    text: str
    at_ms: int
    modality: str = "text"
    cause: int | None = None
    attachments: dict | None = None


@dataclass
class ChatRoom:
    room_id: str
    messages: list[ChatMessage] = field(default_factory=list)

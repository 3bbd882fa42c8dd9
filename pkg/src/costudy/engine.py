"""Deterministic single-writer runtime wiring every subsystem together.

The engine owns the session aggregate, the per-agent schedulers, the activity
monitor, and the router. The host injects time: ``advance_to`` fires every
timer at its exact due instant (so big jumps and 1 ms stepping produce the
same log), and ``ingest`` applies one perceive event at a given clock value.
Given the same (config, seed, timed input trace) and the stub provider, two
runs export byte-identical logs; :func:`replay_log` rebuilds a session from an
exported log by re-driving exactly the externally-caused entries.
"""

from __future__ import annotations

import base64
import json
import random
import re
import uuid

from .activity import ActivityTrack
from .agents import (
    CoLearner,
    generate_notes,
    generate_profile,
    new_agent,
    update_persona,
)
from .config import SessionConfig
from .errors import CoStudyError, PayloadError
from .events import PERCEIVE_KINDS, SessionEvent, validate_perceive
from .providers import ProviderGateway, build_gateway
from .rooms import GROUP_ROOM, ChatMessage, ChatRoom, is_private_room, private_room_id
from .router import BrushQuery, InteractionRouter
from .scheduler import ActionScheduler
from .session import (
    MODE_FULL,
    Session,
    append_event,
    derive_seed,
    export_log,
    record_usage,
)
from .transcript import Transcript, parse_transcript

# deterministic firing order for timers due at the same instant
_RANK_SCHEDULER = 0
_RANK_FORWARDER = 1
_RANK_ACTIVITY = 2


def agent_slug(name: str) -> str:
    slug = re.sub(r"[^a-z0-9]+", "-", name.lower()).strip("-")
    return slug or "agent"


class CoStudyEngine:
    """One live session: a roster of co-learners plus all interaction state."""

    def __init__(
        self,
        config: SessionConfig,
        transcript: Transcript,
        gateway: ProviderGateway,
        session_id: str,
    ):
        self.config = config
        self.transcript = transcript
        self.gateway = gateway
        self.agents: dict[str, CoLearner] = {}
        self.schedulers: dict[str, ActionScheduler] = {}
        master = config.rng_seed

        rooms: dict[str, ChatRoom] = {GROUP_ROOM: ChatRoom(GROUP_ROOM)}
        roster: list[str] = []
        for index, persona in enumerate(config.personas):
            agent_id = agent_slug(persona.name)
            roster.append(agent_id)
            agent = new_agent(agent_id, persona, transcript, config.memory_token_budget)
            if config.mode == MODE_FULL:
                generate_notes(agent, transcript, gateway)
                generate_profile(agent, gateway)
            self.agents[agent_id] = agent
            self.schedulers[agent_id] = ActionScheduler(
                agent_id,
                config.scheduler,
                random.Random(derive_seed(master, f"scheduler:{index}")),
                now_ms=0,
            )
            rooms[private_room_id(agent_id)] = ChatRoom(private_room_id(agent_id))

        self.session = Session(
            session_id=session_id,
            mode=config.mode,
            rng_seed=master,
            roster=roster,
            rooms=rooms,
            transcript=transcript,
        )
        self.video_position_ms = 0
        self.activity = ActivityTrack()
        self.router = InteractionRouter(
            session=self.session,
            agents=self.agents,
            schedulers=self.schedulers,
            gateway=gateway,
            config=config.router,
            rng=random.Random(derive_seed(master, "router")),
            emit=self._emit,
            transcript=transcript,
            chat_kwargs={
                "temperature": config.provider.temperature,
                "max_reply_tokens": config.provider.max_reply_tokens,
            },
        )
        self._forward_rng = random.Random(derive_seed(master, "forwarder"))
        self.forward_next_ms: int | None = None
        if config.mode == MODE_FULL and len(roster) > 1:
            self.forward_next_ms = self._forward_rng.randint(*config.router.forward_interval_ms)

    # --- construction ------------------------------------------------------

    @classmethod
    def create(
        cls,
        config: SessionConfig,
        transcript_text: str,
        gateway: ProviderGateway | None = None,
        session_id: str | None = None,
    ) -> "CoStudyEngine":
        """Build a session from a config document and a raw transcript."""
        config.validate()
        transcript = parse_transcript(transcript_text)
        if gateway is None:
            gateway = build_gateway(
                config.provider, default_stub_seed=derive_seed(config.rng_seed, "provider")
            )
        sid = session_id or config.session_id or uuid.uuid4().hex[:12]
        return cls(config, transcript, gateway, sid)

    # --- event emission and materialization ---------------------------------

    def _emit(self, kind: str, data: dict, cause: int | None = None) -> SessionEvent:
        event = append_event(self.session, kind, data, cause)
        self._materialize(event)
        return event

    def _materialize(self, event: SessionEvent) -> None:
        kind, data, at = event.kind, event.data, event.at_ms
        if kind == "user_chat":
            modality = "audio" if data.get("transcribed") else "text"
            self.session.rooms[data["room"]].messages.append(
                ChatMessage("user", data["text"], at, modality, event.cause)
            )
        elif kind == "agent_chat":
            room = data["room"]
            if is_private_room(room) and room != private_room_id(data["agent_id"]):
                raise CoStudyError("private rooms admit only their own agent")
            self.session.rooms[room].messages.append(
                ChatMessage(data["agent_id"], data["text"], at, data["modality"], event.cause)
            )
        elif kind == "system_notice":
            self.session.rooms[data["room"]].messages.append(
                ChatMessage("system", data["text"], at, "text", event.cause)
            )
        elif kind == "notes_edit":
            self.session.notes_doc.text = data["text"]
            self.session.notes_doc.edited_at_ms = at
        elif kind == "code_edit":
            self.session.code_doc.text = data["text"]
            self.session.code_doc.edited_at_ms = at
        elif kind == "video_position":
            self.video_position_ms = data["position_ms"]

    # --- time ---------------------------------------------------------------

    def _due_candidates(self) -> list[tuple[int, int, int]]:
        candidates = []
        for index, agent_id in enumerate(self.session.roster):
            due = self.schedulers[agent_id].next_due()
            if due is not None:
                candidates.append((due, _RANK_SCHEDULER, index))
        if self.session.mode == MODE_FULL:
            if self.forward_next_ms is not None:
                candidates.append((self.forward_next_ms, _RANK_FORWARDER, 0))
            idle_due = self.activity.next_due(self.config.idle)
            if idle_due is not None:
                candidates.append((idle_due, _RANK_ACTIVITY, 0))
        return candidates

    def advance_to(self, now_ms: int) -> None:
        """Fire every pending timer with a due time <= now_ms, then set the clock."""
        if now_ms < self.session.clock_ms:
            raise CoStudyError("session clock must be monotone")
        while True:
            candidates = self._due_candidates()
            if not candidates:
                break
            due, rank, index = min(candidates)
            if due > now_ms:
                break
            self.session.clock_ms = due
            if rank == _RANK_SCHEDULER:
                scheduler = self.schedulers[self.session.roster[index]]
                for draft in scheduler.tick(due):
                    self._emit(draft.kind, draft.data, None)
            elif rank == _RANK_FORWARDER:
                delay = self.router.fire_forward(due)
                self.forward_next_ms = due + delay
            else:
                for trigger in self.activity.tick(self.config.idle, due):
                    self.router.dispatch_trigger(trigger, due)
        self.session.clock_ms = now_ms

    # --- perceive ingress -----------------------------------------------------

    def ingest(self, body: dict, at_ms: int) -> SessionEvent:
        """Validate, log, and route one perceive event at the given clock time."""
        kind, data = validate_perceive(body)
        self._precheck(kind, data)
        self.advance_to(at_ms)
        event = self._emit(kind, data, None)
        self._dispatch(event)
        return event

    def _precheck(self, kind: str, data: dict) -> None:
        """Reject semantically invalid payloads before anything is logged."""
        if kind == "user_chat":
            room = data["room"]
            if room != GROUP_ROOM and room not in self.session.rooms:
                raise PayloadError("room", f"unknown room {room!r}")
        elif kind in ("user_audio", "persona_update"):
            if data["agent_id"] not in self.agents:
                raise PayloadError("agent_id", f"unknown agent {data['agent_id']!r}")
        elif kind == "brush_query":
            BrushQuery.from_payload(data)

    def _dispatch(self, event: SessionEvent) -> None:
        kind, data, at, seq = event.kind, event.data, event.at_ms, event.seq
        full = self.session.mode == MODE_FULL
        if kind == "user_chat":
            self.activity.observe("mouse", at)
            record_usage(self.session, "chat", seq)
            if not full or data.get("transcribed"):
                return
            if data["room"] == GROUP_ROOM:
                self.router.route_group(data["text"], seq, at)
            else:
                agent_id = data["room"].removeprefix("private:")
                self.router.route_private(agent_id, data["text"], seq, at)
        elif kind == "user_audio":
            self.activity.observe("mouse", at)
            record_usage(self.session, "audio", seq)
            if full:
                audio = base64.b64decode(data["audio_b64"])
                self.router.route_audio(data["agent_id"], audio, data["mime"], seq, at)
        elif kind == "brush_query":
            self.activity.observe("mouse", at)
            record_usage(self.session, "brush", seq)
            if full:
                self.router.route_brush(BrushQuery.from_payload(data), seq, at)
        elif kind == "notes_edit":
            self.activity.observe("notes", at)
        elif kind == "code_edit":
            self.activity.observe("code", at)
        elif kind == "activity_ping":
            self.activity.observe(data["channel"], at)
        elif kind == "video_position":
            self.activity.observe("mouse", at)
        elif kind == "persona_update":
            agent = self.agents[data["agent_id"]]
            changed = update_persona(
                agent, data["changes"], self.transcript, self.gateway, regenerate=full
            )
            if changed:
                record_usage(self.session, "customization", seq)
                if full:
                    self._emit("notes_update", {"agent_id": agent.agent_id, "notes": agent.notes}, seq)
                    self._emit(
                        "profile_update", {"agent_id": agent.agent_id, "profile": agent.profile}, seq
                    )

    # --- public session operations -----------------------------------------

    def record_usage(self, feature: str):
        return record_usage(self.session, feature, None)

    def export_log_bytes(self) -> bytes:
        return export_log(self.session)

    def snapshot(self) -> dict:
        """Self-contained state view for clients joining or reconnecting."""
        roster = []
        for agent_id in self.session.roster:
            agent = self.agents[agent_id]
            scheduler = self.schedulers[agent_id]
            roster.append(
                {
                    "agent_id": agent_id,
                    "name": agent.persona.name,
                    "tone": agent.persona.tone,
                    "interaction_style": agent.persona.interaction_style,
                    "characteristic": agent.persona.characteristic,
                    "voice_id": agent.persona.voice_id,
                    "notes": agent.notes,
                    "profile": agent.profile,
                    "action": {
                        "action": scheduler.current_action,
                        "phase": scheduler.current_phase,
                        "until_ms": scheduler.until_ms,
                    },
                    "shared_screen": {
                        "playing": scheduler.screen.playing,
                        "position_ms": scheduler.screen.position(self.session.clock_ms),
                    },
                }
            )
        rooms = {
            room_id: [
                {"sender": m.sender, "text": m.text, "at_ms": m.at_ms, "modality": m.modality}
                for m in room.messages
            ]
            for room_id, room in self.session.rooms.items()
        }
        return {
            "session_id": self.session.session_id,
            "protocol_version": 1,
            "mode": self.session.mode,
            "clock_ms": self.session.clock_ms,
            "last_seq": len(self.session.event_log),
            "roster": roster,
            "rooms": rooms,
            "docs": {
                "notes": {"text": self.session.notes_doc.text,
                          "edited_at_ms": self.session.notes_doc.edited_at_ms},
                "code": {"text": self.session.code_doc.text,
                         "edited_at_ms": self.session.code_doc.edited_at_ms},
            },
            "usage": self.session.usage.as_dict(),
        }


def replay_log(
    config: SessionConfig,
    transcript_text: str,
    log_bytes: bytes,
    gateway: ProviderGateway | None = None,
    session_id: str | None = None,
) -> CoStudyEngine:
    """Rebuild a session by re-driving the externally-caused entries of a log.

    External entries are perceive events with a null cause (derived ones, such
    as audio transcriptions, are regenerated) and null-cause usage increments
    recorded through the usage endpoint. With the same config and seed the
    rebuilt engine exports a byte-identical log.
    """
    engine = CoStudyEngine.create(config, transcript_text, gateway, session_id)
    last_at = 0
    for line in log_bytes.splitlines():
        if not line.strip():
            continue
        raw = json.loads(line)
        last_at = raw["at_ms"]
        if raw["kind"] in PERCEIVE_KINDS and raw["cause"] is None:
            engine.ingest({"kind": raw["kind"], "data": raw["data"]}, at_ms=raw["at_ms"])
        elif raw["kind"] == "usage_increment" and raw["cause"] is None:
            engine.advance_to(raw["at_ms"])
            engine.record_usage(raw["data"]["feature"])
    engine.advance_to(last_at)
    return engine

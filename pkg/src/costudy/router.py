"""Interaction rules: private/group chat, agent-to-agent forwarding, brush
queries, the audio loop, and proactive idle triggers.

The router never touches the log directly: it emits events through a callback
supplied by the engine, so the baseline gate and room materialization stay in
one place. All randomness comes from injected seeded generators.
"""

from __future__ import annotations

import base64
import hashlib
import logging
import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .agents import CoLearner, Stimulus, generate_notes, respond
from .errors import PayloadError, ProviderError
from .providers import ProviderGateway
from .rooms import GROUP_ROOM, private_room_id
from .scheduler import ActionScheduler
from .session import Session
from .transcript import Transcript

log = logging.getLogger(__name__)

EmitFn = Callable[..., object]  # (kind, data, cause) -> SessionEvent

NOTICE_REPLY_FAILED = "{name} could not respond right now. Please try again in a moment."
NOTICE_AUDIO_FAILED = "Sorry, that audio message could not be transcribed."
NOTICE_TRIGGER_FAILED = "{name} tried to check in but no reply could be generated."

DEFAULT_PROMPTS = ("Explain this part", "Why is this correct?", "Give an example")


@dataclass(frozen=True)
class RouterConfig:
    group_responders: tuple[int, int] = (1, 3)
    forward_interval_ms: tuple[int, int] = (45_000, 90_000)
    predefined_prompts: tuple[str, ...] = DEFAULT_PROMPTS

    def validate(self) -> None:
        lo, hi = self.group_responders
        if not 1 <= lo <= hi:
            raise PayloadError("group_responders", "must satisfy 1 <= lo <= hi")
        if self.forward_interval_ms[0] > self.forward_interval_ms[1]:
            raise PayloadError("forward_interval_ms", "must satisfy lo <= hi")


@dataclass(frozen=True)
class BrushQuery:
    region: tuple[int, int, int, int]  # (min_x, min_y, max_x, max_y) intrinsic pixels
    image: bytes
    question: str
    video_position_ms: int

    def validate(self) -> None:
        min_x, min_y, max_x, max_y = self.region
        if min_x < 0 or min_y < 0:
            raise PayloadError("region", "coordinates must be non-negative")
        if min_x >= max_x or min_y >= max_y:
            raise PayloadError("region", "selection must have positive width and height")
        if not self.image:
            raise PayloadError("image_b64", "image must be non-empty")
        if not self.question.strip():
            raise PayloadError("question", "question must be non-empty")

    @classmethod
    def from_payload(cls, data: dict) -> "BrushQuery":
        query = cls(
            region=tuple(data["region"]),
            image=base64.b64decode(data["image_b64"]),
            question=data["question"],
            video_position_ms=data["video_ms"],
        )
        query.validate()
        return query


# --- selection helpers (pure, unit-testable) ----------------------------------


def pick_responder_count(rng: random.Random, config: RouterConfig, roster_size: int) -> int:
    lo, hi = config.group_responders
    return min(rng.randint(lo, hi), roster_size)


def pick_group_responders(
    rng: random.Random, config: RouterConfig, roster: Sequence[str]
) -> list[str]:
    count = pick_responder_count(rng, config, len(roster))
    return rng.sample(list(roster), count)


def pick_preferring_idle(rng: random.Random, roster: Sequence[str], busy: set[str]) -> str:
    """Uniform choice, excluding agents mid-speech when any idle agent exists."""
    idle = [a for a in roster if a not in busy]
    return rng.choice(idle or list(roster))


def pick_forward_target(rng: random.Random, roster: Sequence[str], author: str) -> str | None:
    others = [a for a in roster if a != author]
    return rng.choice(others) if others else None


@dataclass
class InteractionRouter:
    session: Session
    agents: dict[str, CoLearner]
    schedulers: dict[str, ActionScheduler]
    gateway: ProviderGateway
    config: RouterConfig
    rng: random.Random
    emit: EmitFn
    transcript: Transcript
    chat_kwargs: dict = field(default_factory=dict)

    def _busy(self) -> set[str]:
        return {aid for aid, sched in self.schedulers.items() if sched.in_active}

    def _respond(self, agent: CoLearner, stimulus: Stimulus):
        return respond(agent, stimulus, self.gateway, **self.chat_kwargs)

    def _emit_reply(
        self,
        agent_id: str,
        room: str,
        reply,
        modality: str,
        cause: int | None,
        extra: dict | None = None,
    ):
        data = {
            "agent_id": agent_id,
            "room": room,
            "text": reply.text,
            "modality": modality,
            "action": reply.action,
        }
        if extra:
            data.update(extra)
        return self.emit("agent_chat", data, cause)

    def _begin_active(
        self,
        agent_id: str,
        action: str,
        now_ms: int,
        cause: int | None,
        *,
        words: int | None = None,
        audio_ms: int | None = None,
    ) -> None:
        drafts = self.schedulers[agent_id].begin_active(
            action, now_ms, words=words, audio_ms=audio_ms
        )
        for draft in drafts:
            self.emit(draft.kind, draft.data, cause)

    def _notice(self, room: str, text: str, cause: int | None) -> None:
        self.emit("system_notice", {"room": room, "text": text}, cause)

    # --- routing operations ---------------------------------------------

    def route_private(self, agent_id: str, text: str, cause: int, now_ms: int) -> None:
        agent = self.agents[agent_id]
        room = private_room_id(agent_id)
        try:
            reply = self._respond(agent, Stimulus("private_chat", text))
        except ProviderError:
            self._notice(room, NOTICE_REPLY_FAILED.format(name=agent.persona.name), cause)
            return
        self._emit_reply(agent_id, room, reply, "text", cause)
        self._begin_active(agent_id, reply.action, now_ms, cause, words=len(reply.text.split()))

    def route_group(self, text: str, cause: int, now_ms: int) -> None:
        responders = pick_group_responders(self.rng, self.config, self.session.roster)
        for agent_id in responders:
            agent = self.agents[agent_id]
            try:
                reply = self._respond(agent, Stimulus("group_chat", text))
            except ProviderError:
                # one failed responder never cancels the others
                self._notice(GROUP_ROOM, NOTICE_REPLY_FAILED.format(name=agent.persona.name), cause)
                continue
            self._emit_reply(agent_id, GROUP_ROOM, reply, "text", cause)
            self._begin_active(agent_id, reply.action, now_ms, cause, words=len(reply.text.split()))

    def route_brush(self, query: BrushQuery, cause: int, now_ms: int) -> None:
        query.validate()
        agent_id = pick_preferring_idle(self.rng, self.session.roster, self._busy())
        agent = self.agents[agent_id]
        try:
            reply = self._respond(agent, Stimulus("brush", query.question, image=query.image))
        except ProviderError:
            self._notice(GROUP_ROOM, NOTICE_REPLY_FAILED.format(name=agent.persona.name), cause)
            return
        self._emit_reply(agent_id, GROUP_ROOM, reply, "brush_reply", cause)

    def route_audio(self, agent_id: str, audio: bytes, mime: str, cause: int, now_ms: int) -> None:
        agent = self.agents[agent_id]
        room = private_room_id(agent_id)
        try:
            text = self.gateway.transcribe(audio, mime)
        except ProviderError:
            self._notice(room, NOTICE_AUDIO_FAILED, cause)
            return
        transcribed = self.emit(
            "user_chat", {"room": room, "text": text, "transcribed": True}, cause
        )
        try:
            reply = self._respond(agent, Stimulus("audio_text", text))
        except ProviderError:
            self._notice(room, NOTICE_REPLY_FAILED.format(name=agent.persona.name), transcribed.seq)
            return
        self._emit_reply(agent_id, room, reply, "audio", transcribed.seq)
        try:
            clip = self.gateway.synthesize(reply.text, agent.persona.voice_id)
        except ProviderError:
            # text-only reply still stands; size the action from the words instead
            self._begin_active(
                agent_id, reply.action, now_ms, transcribed.seq, words=len(reply.text.split())
            )
            return
        self.emit(
            "agent_audio",
            {
                "agent_id": agent_id,
                "audio_b64": base64.b64encode(clip.data).decode("ascii"),
                "mime": clip.mime,
                "duration_ms": clip.duration_ms,
                "text": reply.text,
            },
            transcribed.seq,
        )
        self._begin_active(
            agent_id, reply.action, now_ms, transcribed.seq, audio_ms=clip.duration_ms
        )

    def fire_forward(self, now_ms: int) -> int:
        """Forward the latest agent group message to a different agent.

        Falls back to seeding the group chat with an opening remark about the
        tutorial when no agent has spoken yet. Returns the delay until the
        next forwarding attempt.
        """
        source = None
        for message in reversed(self.session.rooms[GROUP_ROOM].messages):
            if message.sender in self.agents:
                source = message
                break
        if source is None:
            agent_id = self.rng.choice(self.session.roster)
            topic = self.transcript.cues[0].text
            stimulus = Stimulus(
                "group_chat",
                f"Kick off a short group discussion about the tutorial. It covers: {topic}",
                speaker="system",
            )
            try:
                reply = self._respond(self.agents[agent_id], stimulus)
                self._emit_reply(agent_id, GROUP_ROOM, reply, "text", None)
            except ProviderError:
                log.warning("opening remark failed for %s", agent_id)
        else:
            target_id = pick_forward_target(self.rng, self.session.roster, source.sender)
            if target_id is not None:
                author = self.agents[source.sender].persona.name
                stimulus = Stimulus("forwarded_peer_msg", source.text, speaker=author)
                try:
                    reply = self._respond(self.agents[target_id], stimulus)
                    self._emit_reply(
                        target_id,
                        GROUP_ROOM,
                        reply,
                        "text",
                        None,
                        extra={"forwarded_from": source.sender},
                    )
                except ProviderError:
                    log.warning("forwarded reply failed for %s", target_id)
        return self.rng.randint(*self.config.forward_interval_ms)

    def dispatch_trigger(self, trigger: str, now_ms: int) -> None:
        agent_id = pick_preferring_idle(self.rng, self.session.roster, self._busy())
        agent = self.agents[agent_id]
        room = private_room_id(agent_id)
        fired = self.emit("trigger_fired", {"trigger": trigger, "agent_id": agent_id}, None)
        if trigger == "notes_idle":
            try:
                notes = generate_notes(agent, self.transcript, self.gateway)
            except ProviderError:
                self._notice(room, NOTICE_TRIGGER_FAILED.format(name=agent.persona.name), fired.seq)
                return
            self.emit("notes_update", {"agent_id": agent_id, "notes": notes}, fired.seq)
            self.emit(
                "agent_chat",
                {
                    "agent_id": agent_id,
                    "room": room,
                    "text": notes,
                    "modality": "shared_notes",
                    "action": "chatting",
                },
                fired.seq,
            )
            return
        if trigger == "mouse_idle":
            stimulus = Stimulus(
                "idle_probe",
                "The user has been quiet for a while. Check in and ask about their "
                "progress with the tutorial.",
                speaker="system",
            )
            modality = "progress_inquiry"
        else:  # code_idle
            code = self.session.code_doc.text
            digest = hashlib.sha256(code.encode("utf-8")).hexdigest()[:8]
            stimulus = Stimulus(
                "code_review",
                f"Review my code so far (doc {digest}): {code}",
                speaker="system",
            )
            modality = "code_review"
        try:
            reply = self._respond(agent, stimulus)
        except ProviderError:
            self._notice(room, NOTICE_TRIGGER_FAILED.format(name=agent.persona.name), fired.seq)
            return
        self._emit_reply(agent_id, room, reply, modality, fired.seq)

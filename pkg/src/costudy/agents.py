"""Generative co-learner: persona, prompt assembly, replies, notes, and profile."""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field, replace

from .actions import ACTIVE_ACTIONS
from .errors import ConfigError, EmptyReplyError, ProviderError
from .memory import MemoryBuffer, condense
from .providers import ChatRequest, ProviderGateway, ProviderMessage
from .transcript import Transcript

log = logging.getLogger(__name__)

STIMULUS_KINDS = (
    "private_chat",
    "group_chat",
    "brush",
    "audio_text",
    "idle_probe",
    "code_review",
    "forwarded_peer_msg",
)

SYSTEM_PROMPT_TEMPLATE = (
    "Act as if you're a student enrolled in an online Python course focused on "
    "data structures and algorithms. You're currently engaged in watching a "
    "video tutorial on the subject. Your responsibilities include responding "
    "to queries from your peers, participating in discussion groups, and "
    "interacting with other students via chat. During these discussions, you "
    "should proactively engage with the material presented in the tutorial, "
    "contribute to the conversation by discussing the content, and initiate "
    "new topics that are relevant to the tutorial's subject matter. Your "
    "identity in this scenario is defined by the following attributes. "
    "Your name is {name}. Your tone is {tone}. Your interaction style is "
    "{interaction_style}. Your characteristic is {characteristic}. When "
    "responding to a user's prompt, select the most appropriate action from "
    'the following list: "asking", "chatting", "encouraging", "exciting", '
    '"explaining", "welcoming", put the selected action in a <> and append it '
    "at the beginning of your response. Ensure your responses are clear and "
    "to the point. The transcript of the video you are watching is provided "
    "below for reference:\n{transcript}"
)

NOTES_INSTRUCTION = (
    "Write concise study notes for the tutorial transcript you were given: "
    "one short bullet per transcript line, keeping the timestamps."
)

PROFILE_INSTRUCTION = (
    "Introduce yourself to the study group in first person, in a few "
    "sentences, mentioning your name and how you like to study."
)

_TAG_RE = re.compile(r"^\s*<\s*([A-Za-z]+)\s*>")


@dataclass(frozen=True)
class Persona:
    name: str
    tone: str
    interaction_style: str
    characteristic: str
    voice_id: str

    def validate(self) -> None:
        for attr in ("name", "tone", "interaction_style", "characteristic"):
            if not getattr(self, attr).strip():
                raise ConfigError(f"persona {attr} must be non-empty")
        if not self.voice_id:
            raise ConfigError("persona voice_id must be set")


@dataclass(frozen=True)
class AgentReply:
    action: str
    text: str


@dataclass(frozen=True)
class Stimulus:
    kind: str
    text: str
    image: bytes | None = None
    speaker: str = "user"


@dataclass
class CoLearner:
    agent_id: str
    persona: Persona
    memory: MemoryBuffer = field(default_factory=MemoryBuffer)
    system_prompt: str = ""
    notes: str = ""
    profile: str = ""


def assemble_system_prompt(persona: Persona, transcript: Transcript) -> str:
    return SYSTEM_PROMPT_TEMPLATE.format(
        name=persona.name,
        tone=persona.tone,
        interaction_style=persona.interaction_style,
        characteristic=persona.characteristic,
        transcript=transcript.render(),
    )


def parse_action_tag(raw: str) -> AgentReply:
    """Split a completion into (action, body).

    A leading ``<action>`` tag matching the six-action set (case-insensitive)
    is stripped; anything else falls back to the neutral "chatting" action
    with the raw text untouched.
    """
    if not raw or not raw.strip():
        raise EmptyReplyError("completion was empty")
    match = _TAG_RE.match(raw)
    if match and match.group(1).lower() in ACTIVE_ACTIONS:
        body = raw[match.end():].strip()
        if not body:
            raise EmptyReplyError("completion had an action tag but no body")
        return AgentReply(match.group(1).lower(), body)
    return AgentReply("chatting", raw.strip())


def new_agent(
    agent_id: str,
    persona: Persona,
    transcript: Transcript,
    token_budget: int = 2000,
) -> CoLearner:
    persona.validate()
    agent = CoLearner(agent_id, persona, MemoryBuffer(token_budget))
    agent.system_prompt = assemble_system_prompt(persona, transcript)
    return agent


def respond(
    agent: CoLearner,
    stimulus: Stimulus,
    gateway: ProviderGateway,
    *,
    temperature: float = 0.9,
    max_reply_tokens: int = 300,
) -> AgentReply:
    """Generate one reply: provider call, tag parse, and memory recording."""
    if stimulus.kind not in STIMULUS_KINDS:
        raise ValueError(f"unknown stimulus kind {stimulus.kind!r}")
    if not stimulus.text.strip():
        raise ValueError("stimulus text must be non-empty")
    if stimulus.kind == "brush" and stimulus.image is None:
        raise ValueError("brush stimuli require an image")
    messages: list[ProviderMessage] = []
    if agent.memory.running_summary:
        messages.append(
            ProviderMessage("system", f"Conversation so far (summary): {agent.memory.running_summary}")
        )
    for speaker, text in agent.memory.recent_exchanges:
        if speaker == agent.persona.name:
            messages.append(ProviderMessage("assistant", text))
        elif speaker == "user":
            messages.append(ProviderMessage("user", text))
        else:
            messages.append(ProviderMessage("user", f"{speaker}: {text}"))
    if stimulus.speaker in ("user", agent.persona.name):
        stimulus_text = stimulus.text
    else:
        stimulus_text = f"{stimulus.speaker}: {stimulus.text}"
    messages.append(ProviderMessage("user", stimulus_text, image=stimulus.image))
    request = ChatRequest(
        system_prompt=agent.system_prompt,
        messages=tuple(messages),
        temperature=temperature,
        max_reply_tokens=max_reply_tokens,
    )
    raw = gateway.complete(request)
    reply = parse_action_tag(raw)
    agent.memory.add(stimulus.speaker, stimulus.text)
    agent.memory.add(agent.persona.name, reply.text)
    try:
        condense(agent.memory, gateway)
    except ProviderError:
        log.warning("memory condense failed for %s; keeping uncondensed history", agent.agent_id)
    return reply


def condense_memory(agent: CoLearner, gateway: ProviderGateway) -> MemoryBuffer:
    return condense(agent.memory, gateway)


def generate_notes(agent: CoLearner, transcript: Transcript, gateway: ProviderGateway) -> str:
    """Regenerate the agent's study notes from the transcript; stores and returns them."""
    if not transcript.cues:
        raise ValueError("transcript must be non-empty")
    request = ChatRequest(
        system_prompt=f"{agent.system_prompt}\n\n{NOTES_INSTRUCTION}",
        messages=(ProviderMessage("user", transcript.render()),),
        purpose="notes",
    )
    notes = gateway.complete(request)
    agent.notes = notes
    return notes


def generate_profile(agent: CoLearner, gateway: ProviderGateway) -> str:
    request = ChatRequest(
        system_prompt=f"{agent.system_prompt}\n\n{PROFILE_INSTRUCTION}",
        messages=(ProviderMessage("user", "Please introduce yourself to the group."),),
        purpose="profile",
    )
    profile = gateway.complete(request)
    agent.profile = profile
    return profile


def update_persona(
    agent: CoLearner,
    changes: dict,
    transcript: Transcript,
    gateway: ProviderGateway,
    regenerate: bool = True,
) -> bool:
    """Apply customization changes; returns True when anything changed.

    Names are roster identity and cannot change. On a real change the system
    prompt is reassembled and notes/profile are regenerated; memory is kept.
    """
    if "name" in changes:
        raise ConfigError("persona names are fixed roster identity")
    unknown = set(changes) - {"tone", "interaction_style", "characteristic"}
    if unknown:
        raise ConfigError(f"unknown persona fields: {sorted(unknown)}")
    effective = {}
    for fieldname, value in changes.items():
        if not isinstance(value, str) or not value.strip():
            raise ConfigError(f"persona {fieldname} must be a non-empty string")
        if value != getattr(agent.persona, fieldname):
            effective[fieldname] = value
    if not effective:
        return False
    agent.persona = replace(agent.persona, **effective)
    agent.system_prompt = assemble_system_prompt(agent.persona, transcript)
    if regenerate:
        generate_notes(agent, transcript, gateway)
        generate_profile(agent, gateway)
    return True

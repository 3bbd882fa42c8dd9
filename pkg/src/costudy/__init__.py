"""costudy: an orchestration engine that simulates a roster of AI co-learners
for asynchronous study sessions, plus the HTTP host that serves them."""

from .actions import ACTIVE_ACTIONS, BREAK_ACTIONS, PASSIVE_ACTIONS, STUDY_ACTIONS
from .agents import (
    AgentReply,
    CoLearner,
    Persona,
    Stimulus,
    assemble_system_prompt,
    generate_notes,
    generate_profile,
    parse_action_tag,
    respond,
    update_persona,
)
from .config import DEFAULT_PERSONAS, SessionConfig, config_from_dict, load_config
from .engine import CoStudyEngine, replay_log
from .errors import (
    ConfigError,
    CoStudyError,
    EmptyReplyError,
    PayloadError,
    ProviderError,
    TranscriptParseError,
    UnknownFeatureError,
)
from .memory import MemoryBuffer, condense, estimate_tokens
from .providers import (
    ChatRequest,
    HttpProvider,
    ProviderConfig,
    ProviderGateway,
    SpeechClip,
    StubProvider,
    build_gateway,
)
from .router import BrushQuery, RouterConfig
from .scheduler import (
    ActionScheduler,
    SchedulerConfig,
    SharedScreenTrack,
    continuing_ms,
    next_passive_transition,
    shared_screen_position,
)
from .session import Session, append_event, export_log, record_usage
from .transcript import Transcript, parse_transcript, serialize_transcript

__version__ = "0.1.0"

__all__ = [
    "ACTIVE_ACTIONS",
    "BREAK_ACTIONS",
    "PASSIVE_ACTIONS",
    "STUDY_ACTIONS",
    "ActionScheduler",
    "AgentReply",
    "BrushQuery",
    "ChatRequest",
    "CoLearner",
    "CoStudyEngine",
    "CoStudyError",
    "ConfigError",
    "DEFAULT_PERSONAS",
    "EmptyReplyError",
    "HttpProvider",
    "MemoryBuffer",
    "PayloadError",
    "Persona",
    "ProviderConfig",
    "ProviderError",
    "ProviderGateway",
    "RouterConfig",
    "SchedulerConfig",
    "Session",
    "SessionConfig",
    "SharedScreenTrack",
    "SpeechClip",
    "Stimulus",
    "StubProvider",
    "Transcript",
    "TranscriptParseError",
    "UnknownFeatureError",
    "append_event",
    "assemble_system_prompt",
    "build_gateway",
    "condense",
    "config_from_dict",
    "continuing_ms",
    "estimate_tokens",
    "export_log",
    "generate_notes",
    "generate_profile",
    "load_config",
    "next_passive_transition",
    "parse_action_tag",
    "parse_transcript",
    "record_usage",
    "replay_log",
    "respond",
    "serialize_transcript",
    "shared_screen_position",
    "update_persona",
]

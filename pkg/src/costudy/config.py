"""Session configuration document (TOML or JSON) and shipped defaults."""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .activity import IdleThresholds
from .agents import Persona
from .errors import ConfigError
from .providers import ProviderConfig, RetryPolicy
from .router import RouterConfig
from .scheduler import SchedulerConfig
from .session import MODES

DEFAULT_PERSONAS = (
    Persona("Ava", "warm and upbeat", "asks lots of follow-up questions",
            "organized note-taker who loves diagrams", "alloy"),
    Persona("Ben", "calm and precise", "explains with small worked examples",
            "patient debugger who tests everything", "echo"),
    Persona("Chloe", "playful and curious", "thinks out loud and riffs on ideas",
            "fast reader who spots edge cases", "fable"),
    Persona("Diego", "direct and encouraging", "summarizes discussions into takeaways",
            "former study-group lead who quizzes everyone", "onyx"),
    Persona("Elena", "thoughtful and soft-spoken", "relates new topics to earlier lessons",
            "careful planner who studies in sprints", "nova"),
    Persona("Felix", "enthusiastic and chatty", "shares analogies and mnemonics",
            "night-owl coder who benchmarks everything", "shimmer"),
)


@dataclass(frozen=True)
class SessionConfig:
    mode: str = "full"
    rng_seed: int = 0
    session_id: str | None = None
    personas: tuple[Persona, ...] = DEFAULT_PERSONAS
    memory_token_budget: int = 2000
    scheduler: SchedulerConfig = field(default_factory=SchedulerConfig)
    router: RouterConfig = field(default_factory=RouterConfig)
    idle: IdleThresholds = field(default_factory=IdleThresholds)
    provider: ProviderConfig = field(default_factory=ProviderConfig)

    @property
    def roster_size(self) -> int:
        return len(self.personas)

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}")
        if self.roster_size < 1:
            raise ConfigError("roster must contain at least one persona")
        if self.memory_token_budget < 1:
            raise ConfigError("memory_token_budget must be >= 1")
        names = [p.name for p in self.personas]
        if len(set(names)) != len(names):
            raise ConfigError("persona names must be unique across the roster")
        for persona in self.personas:
            persona.validate()
            if persona.voice_id not in self.provider.voices:
                raise ConfigError(
                    f"voice {persona.voice_id!r} is not in the provider voice set"
                )
        # voices must be distinct while the voice set is large enough to allow it
        voices = [p.voice_id for p in self.personas]
        if self.roster_size <= len(self.provider.voices) and len(set(voices)) != len(voices):
            raise ConfigError("persona voices must be distinct where the voice set allows")
        self.scheduler.validate()
        self.router.validate()
        self.idle.validate()
        self.provider.validate()

    def with_overrides(
        self,
        mode: str | None = None,
        seed: int | None = None,
        session_id: str | None = None,
        backend: str | None = None,
    ) -> "SessionConfig":
        config = self
        if mode is not None:
            config = replace(config, mode=mode)
        if seed is not None:
            config = replace(config, rng_seed=seed)
        if session_id is not None:
            config = replace(config, session_id=session_id)
        if backend is not None:
            config = replace(config, provider=replace(config.provider, backend=backend))
        return config


def _check_keys(doc: dict, allowed: tuple[str, ...], context: str) -> None:
    extras = sorted(set(doc) - set(allowed))
    if extras:
        raise ConfigError(f"unknown {context} key {extras[0]!r}")


def _pair(value, context: str) -> tuple[int, int]:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ConfigError(f"{context} must be a [lo, hi] pair")
    return int(value[0]), int(value[1])


def _personas_from(doc: list) -> tuple[Persona, ...]:
    personas = []
    for entry in doc:
        _check_keys(entry, ("name", "tone", "interaction_style", "characteristic", "voice_id"),
                    "persona")
        try:
            personas.append(
                Persona(
                    name=entry["name"],
                    tone=entry["tone"],
                    interaction_style=entry["interaction_style"],
                    characteristic=entry["characteristic"],
                    voice_id=entry["voice_id"],
                )
            )
        except KeyError as exc:
            raise ConfigError(f"persona missing field {exc.args[0]!r}") from None
    return tuple(personas)


def _scheduler_from(doc: dict) -> SchedulerConfig:
    _check_keys(doc, tuple(f.name for f in fields(SchedulerConfig)), "scheduler")
    kwargs: dict = dict(doc)
    for key in ("passive_interval_ms", "active_clamp_ms"):
        if key in kwargs:
            kwargs[key] = _pair(kwargs[key], f"scheduler.{key}")
    return SchedulerConfig(**kwargs)


def _router_from(doc: dict) -> RouterConfig:
    _check_keys(doc, tuple(f.name for f in fields(RouterConfig)), "router")
    kwargs: dict = dict(doc)
    for key in ("group_responders", "forward_interval_ms"):
        if key in kwargs:
            kwargs[key] = _pair(kwargs[key], f"router.{key}")
    if "predefined_prompts" in kwargs:
        kwargs["predefined_prompts"] = tuple(kwargs["predefined_prompts"])
    return RouterConfig(**kwargs)


def _provider_from(doc: dict) -> ProviderConfig:
    if "api_key" in doc:
        raise ConfigError("config files must reference keys by env var name, never inline")
    _check_keys(doc, tuple(f.name for f in fields(ProviderConfig)), "provider")
    kwargs: dict = dict(doc)
    if "retry" in kwargs:
        _check_keys(kwargs["retry"], ("max_attempts", "backoff_ms"), "provider.retry")
        kwargs["retry"] = RetryPolicy(**kwargs["retry"])
    if "voices" in kwargs:
        kwargs["voices"] = tuple(kwargs["voices"])
    return ProviderConfig(**kwargs)


def config_from_dict(doc: dict) -> SessionConfig:
    _check_keys(
        doc,
        ("mode", "rng_seed", "session_id", "personas", "memory_token_budget",
         "scheduler", "router", "idle", "provider"),
        "session config",
    )
    kwargs: dict = {}
    for key in ("mode", "session_id"):
        if key in doc:
            kwargs[key] = doc[key]
    if "rng_seed" in doc:
        kwargs["rng_seed"] = int(doc["rng_seed"])
    if "memory_token_budget" in doc:
        kwargs["memory_token_budget"] = int(doc["memory_token_budget"])
    if "personas" in doc:
        kwargs["personas"] = _personas_from(doc["personas"])
    if "scheduler" in doc:
        kwargs["scheduler"] = _scheduler_from(doc["scheduler"])
    if "router" in doc:
        kwargs["router"] = _router_from(doc["router"])
    if "idle" in doc:
        _check_keys(doc["idle"], tuple(f.name for f in fields(IdleThresholds)), "idle")
        kwargs["idle"] = IdleThresholds(**doc["idle"])
    if "provider" in doc:
        kwargs["provider"] = _provider_from(doc["provider"])
    config = SessionConfig(**kwargs)
    config.validate()
    return config


def load_config(path: str | Path) -> SessionConfig:
    path = Path(path)
    if path.suffix.lower() == ".toml":
        with path.open("rb") as handle:
            doc = tomllib.load(handle)
    elif path.suffix.lower() == ".json":
        doc = json.loads(path.read_text("utf-8"))
    else:
        raise ConfigError(f"unsupported config format {path.suffix!r} (use .toml or .json)")
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a table/object")
    return config_from_dict(doc)

"""Passive/active action state machine and shared-screen playback control.

Pure state machines driven by injected clocks: the host asks for ticks and
no wall time is ever read here. One scheduler instance per co-learner.

Behavior timeline: the default action is continuous typing. At seeded random
intervals the agent performs one non-typing study action or (with configured
probability) a break action, then reverts to typing. Replying to the user
interrupts whatever passive segment is running with a three-phase active
episode (starting / continuing / ending) whose continuing phase is sized to
the reply length. The shared screen plays except during breaks and active
episodes.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass

from .actions import BREAK_ACTIONS, STUDY_ACTIONS, is_break
from .errors import ConfigError
from .events import EventDraft

_NON_TYPING_STUDY = tuple(a for a in STUDY_ACTIONS if a != "typing")


@dataclass(frozen=True)
class SchedulerConfig:
    passive_interval_ms: tuple[int, int] = (90_000, 180_000)
    break_probability: float = 0.3
    active_rate_wps: float = 2.5
    active_clamp_ms: tuple[int, int] = (3_000, 60_000)
    phase_ms: int = 1_000
    passive_action_ms: int = 10_000
    shared_screen_len_ms: int = 900_000

    def validate(self) -> None:
        if self.passive_interval_ms[0] > self.passive_interval_ms[1]:
            raise ConfigError("passive_interval_ms must satisfy lo <= hi")
        if self.passive_interval_ms[0] < 0:
            raise ConfigError("passive_interval_ms must be non-negative")
        if not 0.0 <= self.break_probability <= 1.0:
            raise ConfigError("break_probability must be within [0, 1]")
        if self.active_rate_wps <= 0:
            raise ConfigError("active_rate_wps must be positive")
        if self.active_clamp_ms[0] > self.active_clamp_ms[1]:
            raise ConfigError("active_clamp_ms must satisfy min <= max")
        if self.phase_ms <= 0 or self.passive_action_ms <= 0:
            raise ConfigError("phase and passive action durations must be positive")
        if self.shared_screen_len_ms <= 0:
            raise ConfigError("shared_screen_len_ms must be positive")


def next_passive_transition(rng: random.Random, config: SchedulerConfig) -> tuple[int, str]:
    """Draw (delay_ms, action) for the next spontaneous behavior after typing."""
    lo, hi = config.passive_interval_ms
    delay = rng.randint(lo, hi)
    if rng.random() < config.break_probability:
        action = rng.choice(BREAK_ACTIONS)
    else:
        action = rng.choice(_NON_TYPING_STUDY)
    return delay, action


def continuing_ms(
    config: SchedulerConfig, *, words: int | None = None, audio_ms: int | None = None
) -> int:
    """Continuing-phase duration: audio clips verbatim, text clamped by word rate."""
    if (words is None) == (audio_ms is None):
        raise ValueError("exactly one of words or audio_ms must be given")
    if audio_ms is not None:
        return int(audio_ms)
    lo, hi = config.active_clamp_ms
    return max(lo, min(hi, round(words / config.active_rate_wps * 1000)))


@dataclass
class SharedScreenTrack:
    """Looping playback position; advances only while playing."""

    length_ms: int
    playing: bool = True
    anchor_position_ms: int = 0
    anchor_at_ms: int = 0

    def position(self, now_ms: int) -> int:
        if not self.playing:
            return self.anchor_position_ms
        return (self.anchor_position_ms + (now_ms - self.anchor_at_ms)) % self.length_ms

    def pause(self, now_ms: int) -> None:
        self.anchor_position_ms = self.position(now_ms)
        self.anchor_at_ms = now_ms
        self.playing = False

    def resume(self, now_ms: int) -> None:
        if self.playing:
            return
        self.anchor_at_ms = now_ms
        self.playing = True


def shared_screen_position(track: SharedScreenTrack, now_ms: int) -> int:
    return track.position(now_ms)


@dataclass(frozen=True)
class _Episode:
    action: str
    continuing_ms: int


class ActionScheduler:
    """Drives one co-learner's visible behavior on an injected clock."""

    def __init__(
        self,
        agent_id: str,
        config: SchedulerConfig,
        rng: random.Random,
        now_ms: int = 0,
    ):
        config.validate()
        self.agent_id = agent_id
        self.config = config
        self.rng = rng
        self.screen = SharedScreenTrack(config.shared_screen_len_ms, anchor_at_ms=now_ms)
        self.current_action = "typing"
        self.current_phase: str | None = None  # None while passive
        self._episode: _Episode | None = None
        self._queue: deque[_Episode] = deque()
        delay, upcoming = next_passive_transition(rng, config)
        self._pending_passive = upcoming
        self.until_ms: int | None = now_ms + delay

    # --- engine interface -----------------------------------------------

    @property
    def in_active(self) -> bool:
        return self.current_phase is not None

    def next_due(self) -> int | None:
        return self.until_ms

    def begin_active(
        self,
        action: str,
        now_ms: int,
        *,
        words: int | None = None,
        audio_ms: int | None = None,
    ) -> list[EventDraft]:
        """Start (or queue, if already speaking) a three-phase active episode."""
        episode = _Episode(action, continuing_ms(self.config, words=words, audio_ms=audio_ms))
        if self.in_active:
            self._queue.append(episode)
            return []
        return self._enter_active(episode, now_ms)

    def tick(self, now_ms: int) -> list[EventDraft]:
        """Advance every boundary that elapsed by now_ms, in order."""
        events: list[EventDraft] = []
        while self.until_ms is not None and self.until_ms <= now_ms:
            events.extend(self._advance(self.until_ms))
        return events

    # --- transitions -------------------------------------------------------

    def _action_event(self, at_ms: int, action: str, phase: str | None, duration_ms: int) -> EventDraft:
        return EventDraft(
            at_ms,
            "action_change",
            {"agent_id": self.agent_id, "action": action, "phase": phase, "duration_ms": duration_ms},
        )

    def _screen_event(self, at_ms: int, control: str) -> EventDraft:
        return EventDraft(
            at_ms,
            "shared_screen_control",
            {"agent_id": self.agent_id, "control": control, "position_ms": self.screen.position(at_ms)},
        )

    def _enter_active(self, episode: _Episode, at_ms: int) -> list[EventDraft]:
        self.current_action = episode.action
        self.current_phase = "starting"
        self._episode = episode
        self.until_ms = at_ms + self.config.phase_ms
        events = [self._action_event(at_ms, episode.action, "starting", self.config.phase_ms)]
        if self.screen.playing:
            self.screen.pause(at_ms)
            events.append(self._screen_event(at_ms, "pause"))
        return events

    def _revert_to_typing(self, at_ms: int) -> list[EventDraft]:
        delay, upcoming = next_passive_transition(self.rng, self.config)
        self.current_action = "typing"
        self.current_phase = None
        self._episode = None
        self._pending_passive = upcoming
        self.until_ms = at_ms + delay
        events = [self._action_event(at_ms, "typing", None, delay)]
        if not self.screen.playing:
            self.screen.resume(at_ms)
            events.append(self._screen_event(at_ms, "resume"))
        return events

    def _advance(self, at_ms: int) -> list[EventDraft]:
        if self.current_phase == "starting":
            assert self._episode is not None
            self.current_phase = "continuing"
            self.until_ms = at_ms + self._episode.continuing_ms
            return [
                self._action_event(at_ms, self._episode.action, "continuing", self._episode.continuing_ms)
            ]
        if self.current_phase == "continuing":
            assert self._episode is not None
            self.current_phase = "ending"
            self.until_ms = at_ms + self.config.phase_ms
            return [self._action_event(at_ms, self._episode.action, "ending", self.config.phase_ms)]
        if self.current_phase == "ending":
            events = self._revert_to_typing(at_ms)
            if self._queue:
                events.extend(self._enter_active(self._queue.popleft(), at_ms))
            return events
        if self.current_action == "typing":
            action = self._pending_passive
            self.current_action = action
            self.until_ms = at_ms + self.config.passive_action_ms
            events = [self._action_event(at_ms, action, None, self.config.passive_action_ms)]
            if is_break(action) and self.screen.playing:
                self.screen.pause(at_ms)
                events.append(self._screen_event(at_ms, "pause"))
            return events
        # a non-typing passive segment ran out
        return self._revert_to_typing(at_ms)

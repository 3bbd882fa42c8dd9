"""User-activity channels and debounced idle triggers.

Each channel fires at most once per idle episode: a trigger disarms the
channel, and only fresh activity rearms it. A trigger fires iff the idle
duration *strictly* exceeds the channel threshold.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ConfigError

CHANNELS = ("mouse", "notes", "code")


@dataclass(frozen=True)
class IdleThresholds:
    mouse_idle_ms: int = 120_000
    notes_idle_ms: int = 180_000
    code_idle_ms: int = 60_000

    def validate(self) -> None:
        for channel in CHANNELS:
            if self.for_channel(channel) <= 0:
                raise ConfigError(f"{channel} idle threshold must be positive")

    def for_channel(self, channel: str) -> int:
        return getattr(self, f"{channel}_idle_ms")


@dataclass
class _Channel:
    last_activity_ms: int = 0
    armed: bool = True


@dataclass
class ActivityTrack:
    channels: dict[str, _Channel] = field(
        default_factory=lambda: {c: _Channel() for c in CHANNELS}
    )

    def observe(self, channel: str, at_ms: int) -> None:
        state = self.channels[channel]
        if at_ms < state.last_activity_ms:
            raise ValueError("observations must be monotone in time")
        state.last_activity_ms = at_ms
        state.armed = True

    def tick(self, thresholds: IdleThresholds, now_ms: int) -> list[str]:
        """Return triggers for every armed channel whose idle window elapsed.

        Channels are checked in the fixed order (mouse, notes, code).
        """
        fired = []
        for channel in CHANNELS:
            state = self.channels[channel]
            if state.armed and now_ms - state.last_activity_ms > thresholds.for_channel(channel):
                state.armed = False
                fired.append(f"{channel}_idle")
        return fired

    def next_due(self, thresholds: IdleThresholds) -> int | None:
        """Earliest future time at which some armed channel would fire."""
        dues = [
            state.last_activity_ms + thresholds.for_channel(channel) + 1
            for channel, state in self.channels.items()
            if state.armed
        ]
        return min(dues) if dues else None

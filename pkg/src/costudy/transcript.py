"""Timestamped transcript parsing (WebVTT-compatible cue blocks)."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import TranscriptParseError

_CUE_LINE = re.compile(
    r"^(?:(\d+):)?(\d{1,2}):(\d{2})\.(\d{3})\s*-->\s*(?:(\d+):)?(\d{1,2}):(\d{2})\.(\d{3})\s*$"
)


@dataclass(frozen=True)
class Cue:
    start_ms: int
    end_ms: int
    text: str


@dataclass(frozen=True)
class Transcript:
    cues: tuple[Cue, ...]

    def render(self) -> str:
        """One ``[MM:SS.mmm] text`` line per cue, for prompts and note generation."""
        return "\n".join(f"[{format_timestamp(c.start_ms)}] {c.text}" for c in self.cues)


def _to_ms(hours: str | None, minutes: str, seconds: str, millis: str) -> int:
    total = int(minutes) * 60_000 + int(seconds) * 1_000 + int(millis)
    if hours is not None:
        total += int(hours) * 3_600_000
    return total


def format_timestamp(ms: int) -> str:
    hours, rest = divmod(ms, 3_600_000)
    minutes, rest = divmod(rest, 60_000)
    seconds, millis = divmod(rest, 1_000)
    if hours:
        return f"{hours}:{minutes:02d}:{seconds:02d}.{millis:03d}"
    return f"{minutes:02d}:{seconds:02d}.{millis:03d}"


def parse_transcript(text: str) -> Transcript:
    """Parse WebVTT-style cue blocks into a sorted, validated transcript.

    Accepts an optional leading ``WEBVTT`` header and optional cue identifier
    lines. Cue text lines are joined with single spaces. Raises
    :class:`TranscriptParseError` (with a line number) on malformed input.
    """
    lines = text.splitlines()
    cues: list[Cue] = []
    i = 0
    # optional header block
    while i < len(lines) and not lines[i].strip():
        i += 1
    if i < len(lines) and lines[i].strip().startswith("WEBVTT"):
        i += 1
        while i < len(lines) and lines[i].strip():
            i += 1
    while i < len(lines):
        line = lines[i]
        if not line.strip():
            i += 1
            continue
        match = _CUE_LINE.match(line.strip())
        if match is None:
            # a cue identifier is allowed immediately before a timestamp line
            if i + 1 < len(lines) and _CUE_LINE.match(lines[i + 1].strip()):
                i += 1
                continue
            raise TranscriptParseError("expected a cue timing line", i + 1)
        start = _to_ms(match.group(1), match.group(2), match.group(3), match.group(4))
        end = _to_ms(match.group(5), match.group(6), match.group(7), match.group(8))
        if end < start:
            raise TranscriptParseError("cue end precedes cue start", i + 1)
        timing_line_no = i + 1
        i += 1
        body: list[str] = []
        while i < len(lines) and lines[i].strip():
            body.append(lines[i].strip())
            i += 1
        cue_text = " ".join(body).strip()
        if not cue_text:
            raise TranscriptParseError("cue has no text", timing_line_no)
        cues.append(Cue(start, end, cue_text))
    if not cues:
        raise TranscriptParseError("transcript contains no cues", max(1, len(lines)))
    cues.sort(key=lambda c: c.start_ms)
    return Transcript(tuple(cues))


def serialize_transcript(transcript: Transcript) -> str:
    blocks = [
        f"{format_timestamp(c.start_ms)} --> {format_timestamp(c.end_ms)}\n{c.text}\n"
        for c in transcript.cues
    ]
    return "\n".join(blocks)

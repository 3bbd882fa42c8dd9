"""Provider gateway: chat/vision completion, speech-to-text, and text-to-speech.

Two backends share one interface: an HTTP client for a chat-completions-style
JSON service, and a seeded deterministic stub for offline runs. Every stub
output is a pure function of (seed, request content), which is what makes
whole-session logs replayable byte-for-byte.
"""

from __future__ import annotations

import base64
import hashlib
import io
import os
import random
import re
import threading
import time
import wave
from abc import ABC, abstractmethod
from dataclasses import dataclass, field

import httpx

from .actions import ACTIVE_ACTIONS
from .errors import ConfigError, ProviderError

DEFAULT_VOICES = ("alloy", "echo", "fable", "onyx", "nova", "shimmer")

STUB_SUMMARY_WORDS = 50
STUB_WORDS_PER_SECOND = 2.5  # mirrors the scheduler's default speech rate


@dataclass(frozen=True)
class ProviderMessage:
    role: str  # "system" | "user" | "assistant"
    text: str
    image: bytes | None = None


@dataclass(frozen=True)
class ChatRequest:
    system_prompt: str
    messages: tuple[ProviderMessage, ...]
    temperature: float = 0.9
    max_reply_tokens: int = 300
    purpose: str = "chat"  # chat | summary | notes | profile

    def validate(self) -> None:
        if not any(m.role == "user" for m in self.messages):
            raise ProviderError("chat request needs at least one user message")
        if not 0.0 <= self.temperature <= 2.0:
            raise ProviderError("temperature must be within [0, 2]")


@dataclass(frozen=True)
class SpeechClip:
    data: bytes
    mime: str
    duration_ms: int


@dataclass(frozen=True)
class RetryPolicy:
    max_attempts: int = 3
    backoff_ms: int = 250


@dataclass(frozen=True)
class ProviderConfig:
    backend: str = "stub"  # "http" | "stub"
    base_url: str | None = None
    api_key_env: str | None = None  # name of the env var holding the key, never the key
    chat_model: str = "gpt-4-vision-preview"
    stt_model: str = "whisper-1"
    tts_model: str = "tts-1"
    temperature: float = 0.9
    max_reply_tokens: int = 300
    timeout_ms: int = 30_000
    retry: RetryPolicy = field(default_factory=RetryPolicy)
    max_inflight: int = 4
    stub_seed: int | None = None
    voices: tuple[str, ...] = DEFAULT_VOICES

    def validate(self) -> None:
        if self.backend not in ("http", "stub"):
            raise ConfigError(f"unknown provider backend {self.backend!r}")
        if self.backend == "http" and not self.base_url:
            raise ConfigError("http provider requires base_url")
        if self.backend == "http" and not self.api_key_env:
            raise ConfigError("http provider requires api_key_env (env var name)")
        if not 0.0 <= self.temperature <= 2.0:
            raise ConfigError("temperature must be within [0, 2]")
        if self.retry.max_attempts < 1:
            raise ConfigError("retry.max_attempts must be >= 1")
        if not self.voices:
            raise ConfigError("provider voice set must be non-empty")


class ProviderGateway(ABC):
    """Abstract chat/vision, speech-to-text, and text-to-speech exchange."""

    @abstractmethod
    def complete(self, request: ChatRequest) -> str: ...

    @abstractmethod
    def transcribe(self, audio: bytes, mime: str) -> str: ...

    @abstractmethod
    def synthesize(self, text: str, voice_id: str) -> SpeechClip: ...


# --- text-in-wav helpers -----------------------------------------------------
#
# Stub speech clips are real single-channel WAV files whose frame payload is
# the utf-8 reply text. That lets stub TTS output round-trip through stub STT
# and gives tests a trivial way to build audio fixtures for any sentence.


def encode_text_wav(text: str, framerate: int = 16_000) -> bytes:
    payload = text.encode("utf-8")
    if len(payload) % 2:
        payload += b"\x00"
    buf = io.BytesIO()
    with wave.open(buf, "wb") as writer:
        writer.setnchannels(1)
        writer.setsampwidth(2)
        writer.setframerate(framerate)
        writer.writeframes(payload)
    return buf.getvalue()


def decode_text_wav(data: bytes) -> str | None:
    """Return the embedded utf-8 text, or None if the WAV holds other frames.

    Raises ProviderError when the bytes are not a parseable WAV container.
    """
    try:
        with wave.open(io.BytesIO(data)) as reader:
            frames = reader.readframes(reader.getnframes())
    except (wave.Error, EOFError) as exc:
        raise ProviderError(f"undecodable audio: {exc}") from None
    try:
        return frames.rstrip(b"\x00").decode("utf-8")
    except UnicodeDecodeError:
        return None


# --- deterministic stub -------------------------------------------------------

_NAME_RE = re.compile(r"Your name is ([^.\n]+)\.")
_TONE_RE = re.compile(r"Your tone is ([^.\n]+)\.")
_STYLE_RE = re.compile(r"Your interaction style is ([^.\n]+)\.")
_CHARACTERISTIC_RE = re.compile(r"Your characteristic is ([^.\n]+)\.")

_OPENERS = (
    "Good question about",
    "I was just looking at",
    "Here is how I think about",
    "Let me take a stab at",
    "I ran into this too:",
)

_FILLERS = (
    "the key is to walk through a small example step by step.",
    "it clicked for me once I traced it on paper.",
    "I rewatched that part of the tutorial and it helped a lot.",
    "comparing it with the simpler case makes the pattern obvious.",
    "writing it out in the editor shows what changes on each pass.",
    "I noted this down because it kept tripping me up at first.",
)

_PASTIMES = (
    "sketching out practice problems",
    "tidying up my study notes",
    "racing through coding puzzles",
    "rewatching tricky lecture bits",
    "comparing solutions with friends",
    "building tiny demo projects",
)

_QUESTION_WORDS = frozenset({"why", "how", "what", "explain", "review"})
_GREETING_WORDS = frozenset({"hi", "hello", "hey", "welcome"})
_PRAISE_WORDS = frozenset({"great", "nice", "awesome", "congrats", "thanks"})


def _pick_action(text: str, rng: random.Random) -> str:
    words = set(re.findall(r"[a-z']+", text.lower()))
    if "progress" in words or "stuck" in words:
        return "asking"
    if "?" in text or words & _QUESTION_WORDS:
        return "explaining"
    if words & _GREETING_WORDS:
        return "welcoming"
    if words & _PRAISE_WORDS:
        return "encouraging"
    return rng.choice(ACTIVE_ACTIONS)


class StubProvider(ProviderGateway):
    """Offline backend with fully deterministic, content-addressed outputs."""

    def __init__(self, seed: int, voices: tuple[str, ...] = DEFAULT_VOICES):
        self.seed = seed
        self.voices = voices

    def _content_rng(self, *parts: str) -> random.Random:
        digest = hashlib.sha256("|".join((str(self.seed), *parts)).encode("utf-8")).digest()
        return random.Random(int.from_bytes(digest[:8], "big"))

    @staticmethod
    def _extract(pattern: re.Pattern, prompt: str, fallback: str) -> str:
        match = pattern.search(prompt)
        return match.group(1).strip() if match else fallback

    def complete(self, request: ChatRequest) -> str:
        request.validate()
        last_user = next(m for m in reversed(request.messages) if m.role == "user")
        if request.purpose == "summary":
            words = last_user.text.split()
            return " ".join(words[:STUB_SUMMARY_WORDS])
        if request.purpose == "notes":
            lines = [ln.strip() for ln in last_user.text.splitlines() if ln.strip()]
            return "\n".join(f"- {line}" for line in lines)
        name = self._extract(_NAME_RE, request.system_prompt, "a co-learner")
        if request.purpose == "profile":
            tone = self._extract(_TONE_RE, request.system_prompt, "friendly")
            style = self._extract(_STYLE_RE, request.system_prompt, "casual")
            trait = self._extract(_CHARACTERISTIC_RE, request.system_prompt, "curious")
            rng = self._content_rng("profile", name, tone, style, trait)
            return (
                f"Hi, I'm {name}! I'm working through the same tutorial as you. "
                f"My tone is {tone}, my interaction style is {style}, and I'd "
                f"describe myself as {trait}. Between sessions you'll find me "
                f"{rng.choice(_PASTIMES)}. Ping me in chat any time!"
            )
        # chat / vision
        image_digest = ""
        if last_user.image is not None:
            image_digest = hashlib.sha256(last_user.image).hexdigest()[:8]
        rng = self._content_rng("chat", name, last_user.text, image_digest)
        action = _pick_action(last_user.text, rng)
        snippet = " ".join(last_user.text.split()[:12])
        sentence = f'{rng.choice(_OPENERS)} "{snippet}" -- {rng.choice(_FILLERS)}'
        if image_digest:
            sentence += f" (looking at the highlighted area {image_digest})"
        return f"<{action}> {sentence}"

    def transcribe(self, audio: bytes, mime: str) -> str:
        if not audio:
            raise ProviderError("audio payload is empty")
        text = decode_text_wav(audio)
        if text is not None and text.strip():
            return text
        digest = hashlib.sha256(audio).hexdigest()
        rng = self._content_rng("stt", digest)
        words = [rng.choice(_FILLERS).split()[i % 4] for i in range(rng.randint(4, 8))]
        return " ".join(words)

    def synthesize(self, text: str, voice_id: str) -> SpeechClip:
        if not text.strip():
            raise ProviderError("cannot synthesize empty text")
        if voice_id not in self.voices:
            raise ProviderError(f"unknown voice {voice_id!r}")
        words = len(text.split())
        duration_ms = round(words / STUB_WORDS_PER_SECOND * 1000)
        # voice identity is carried in the frame rate so clips differ per voice
        framerate = 16_000 + self.voices.index(voice_id)
        return SpeechClip(encode_text_wav(text, framerate), "audio/wav", duration_ms)


# --- HTTP backend --------------------------------------------------------------


class HttpProvider(ProviderGateway):
    """JSON-over-HTTP backend for a chat-completions-style service.

    Audio is uploaded as base64 inside the request body. Transient failures
    (transport errors, 408/429/5xx) are retried with exponential backoff up to
    ``retry.max_attempts`` total attempts; anything else is permanent.
    """

    def __init__(self, config: ProviderConfig, transport: httpx.BaseTransport | None = None):
        config.validate()
        self.config = config
        self._inflight = threading.BoundedSemaphore(config.max_inflight)
        self._client = httpx.Client(
            base_url=config.base_url or "",
            timeout=config.timeout_ms / 1000,
            transport=transport,
        )

    def close(self) -> None:
        self._client.close()

    def _api_key(self) -> str:
        key = os.environ.get(self.config.api_key_env or "", "")
        if not key:
            raise ProviderError(
                f"api key environment variable {self.config.api_key_env!r} is not set"
            )
        return key

    def _post(self, path: str, payload: dict) -> dict:
        retry = self.config.retry
        failure = "no attempts made"
        for attempt in range(retry.max_attempts):
            if attempt:
                time.sleep(retry.backoff_ms * (2 ** (attempt - 1)) / 1000)
            try:
                with self._inflight:
                    response = self._client.post(
                        path,
                        json=payload,
                        headers={"Authorization": f"Bearer {self._api_key()}"},
                    )
            except httpx.HTTPError as exc:
                # never interpolate the request (it may embed credentials in headers)
                failure = f"transport failure: {type(exc).__name__}"
                continue
            if response.status_code // 100 == 2:
                try:
                    return response.json()
                except ValueError:
                    raise ProviderError("provider returned non-JSON response") from None
            if response.status_code in (408, 429) or response.status_code >= 500:
                failure = f"status {response.status_code}"
                continue
            raise ProviderError(f"provider rejected request: status {response.status_code}")
        raise ProviderError(f"provider unreachable after {retry.max_attempts} attempts ({failure})")

    def complete(self, request: ChatRequest) -> str:
        request.validate()
        messages: list[dict] = [{"role": "system", "content": request.system_prompt}]
        for message in request.messages:
            if message.image is not None:
                content: object = [
                    {"type": "text", "text": message.text},
                    {
                        "type": "image_url",
                        "image_url": {
                            "url": "data:image/png;base64,"
                            + base64.b64encode(message.image).decode("ascii")
                        },
                    },
                ]
            else:
                content = message.text
            messages.append({"role": message.role, "content": content})
        data = self._post(
            "/chat/completions",
            {
                "model": self.config.chat_model,
                "temperature": request.temperature,
                "max_tokens": request.max_reply_tokens,
                "messages": messages,
            },
        )
        try:
            return str(data["choices"][0]["message"]["content"])
        except (KeyError, IndexError, TypeError):
            raise ProviderError("malformed completion response") from None

    def transcribe(self, audio: bytes, mime: str) -> str:
        if not audio:
            raise ProviderError("audio payload is empty")
        data = self._post(
            "/audio/transcriptions",
            {
                "model": self.config.stt_model,
                "audio_b64": base64.b64encode(audio).decode("ascii"),
                "mime": mime,
            },
        )
        try:
            return str(data["text"])
        except (KeyError, TypeError):
            raise ProviderError("malformed transcription response") from None

    def synthesize(self, text: str, voice_id: str) -> SpeechClip:
        if not text.strip():
            raise ProviderError("cannot synthesize empty text")
        if voice_id not in self.config.voices:
            raise ProviderError(f"unknown voice {voice_id!r}")
        data = self._post(
            "/audio/speech",
            {"model": self.config.tts_model, "voice": voice_id, "input": text},
        )
        try:
            return SpeechClip(
                base64.b64decode(data["audio_b64"]),
                str(data["mime"]),
                int(data["duration_ms"]),
            )
        except (KeyError, TypeError, ValueError):
            raise ProviderError("malformed speech response") from None


def build_gateway(
    config: ProviderConfig,
    default_stub_seed: int = 0,
    transport: httpx.BaseTransport | None = None,
) -> ProviderGateway:
    config.validate()
    if config.backend == "stub":
        seed = config.stub_seed if config.stub_seed is not None else default_stub_seed
        return StubProvider(seed, config.voices)
    return HttpProvider(config, transport=transport)

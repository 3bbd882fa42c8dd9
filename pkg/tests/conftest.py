"""Shared fixtures: sample transcript, configs, and engine factories."""

from __future__ import annotations

import pytest

from costudy import CoStudyEngine, SessionConfig, StubProvider, parse_transcript

SAMPLE_VTT = """WEBVTT

00:00.000 --> 00:05.000
Welcome to the tutorial on stacks in Python.

00:05.000 --> 00:12.000
A stack is a last-in first-out data structure.

00:12.000 --> 00:20.000
We push elements on top and pop them from the top.

00:20.000 --> 00:30.000
Bubble sort compares adjacent elements and swaps them when out of order.

00:30.000 --> 00:40.000
The worst case time complexity of bubble sort is O(n squared).
"""

ROSTER_IDS = ("ava", "ben", "chloe", "diego", "elena", "felix")


@pytest.fixture
def transcript_text() -> str:
    return SAMPLE_VTT


@pytest.fixture
def transcript():
    return parse_transcript(SAMPLE_VTT)


@pytest.fixture
def stub() -> StubProvider:
    return StubProvider(seed=1)


def make_engine(
    mode: str = "full",
    seed: int = 7,
    session_id: str = "test-session",
    transcript: str = SAMPLE_VTT,
    **config_kwargs,
) -> CoStudyEngine:
    config = SessionConfig(mode=mode, rng_seed=seed, **config_kwargs)
    return CoStudyEngine.create(config, transcript, session_id=session_id)


@pytest.fixture
def engine() -> CoStudyEngine:
    return make_engine()


@pytest.fixture
def baseline_engine() -> CoStudyEngine:
    return make_engine(mode="baseline")

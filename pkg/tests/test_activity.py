"""Idle detection: strict thresholds, debounce, deterministic channel order."""

import random

from hypothesis import given, settings, strategies as st

from costudy.activity import ActivityTrack, IdleThresholds, CHANNELS

THRESHOLDS = IdleThresholds()  # mouse 120s, notes 180s, code 60s


def test_no_fire_at_or_below_threshold():
    track = ActivityTrack()
    track.observe("code", 1_000)
    assert track.tick(THRESHOLDS, 59_999) == []
    assert track.tick(THRESHOLDS, 61_000) == []  # delta == threshold exactly: no fire


def test_fires_strictly_after_threshold():
    track = ActivityTrack()
    track.observe("code", 1_000)
    assert track.tick(THRESHOLDS, 61_001) == ["code_idle"]


def test_fire_disarms_until_next_observe():
    thresholds = IdleThresholds(mouse_idle_ms=10**9, notes_idle_ms=10**9, code_idle_ms=60_000)
    track = ActivityTrack()
    track.observe("code", 1_000)
    assert track.tick(thresholds, 61_001) == ["code_idle"]
    assert track.tick(thresholds, 500_000) == []  # still disarmed
    track.observe("code", 501_000)
    assert track.tick(thresholds, 561_001) == ["code_idle"]  # rearmed fire


def test_recent_activity_suppresses_all():
    track = ActivityTrack()
    for channel in CHANNELS:
        track.observe(channel, 10_000)
    assert track.tick(THRESHOLDS, 50_000) == []


def test_multiple_stale_channels_fire_in_fixed_order():
    track = ActivityTrack()
    # both mouse and code overdue at the same tick; notes stays fresh
    track.observe("mouse", 0)
    track.observe("code", 0)
    track.observe("notes", 150_000)
    assert track.tick(THRESHOLDS, 200_000) == ["mouse_idle", "code_idle"]


def test_next_due_is_threshold_plus_one():
    track = ActivityTrack()
    track.observe("code", 1_000)
    track.observe("mouse", 1_000)
    track.observe("notes", 1_000)
    assert track.next_due(THRESHOLDS) == 1_000 + 60_000 + 1
    track.tick(THRESHOLDS, 61_001)
    assert track.next_due(THRESHOLDS) == 1_000 + 120_000 + 1  # code disarmed, mouse next


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**31), st.lists(st.integers(1, 30_000), min_size=1, max_size=60))
def test_debounce_property_over_random_traces(seed, gaps):
    """Between two consecutive fires on a channel there is at least one observe."""
    rng = random.Random(seed)
    thresholds = IdleThresholds(mouse_idle_ms=20_000, notes_idle_ms=25_000, code_idle_ms=15_000)
    track = ActivityTrack()
    now = 0
    observed_since_fire = {c: True for c in CHANNELS}
    for gap in gaps:
        now += gap
        if rng.random() < 0.4:
            channel = rng.choice(CHANNELS)
            track.observe(channel, now)
            observed_since_fire[channel] = True
        for trigger in track.tick(thresholds, now):
            channel = trigger.removesuffix("_idle")
            assert observed_since_fire[channel], "fired twice without fresh activity"
            observed_since_fire[channel] = False


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(1, 10_000), min_size=2, max_size=40))
def test_tick_never_fires_over_window_containing_observe(gaps):
    """Ticks with non-decreasing clocks never fire when activity was recent enough."""
    thresholds = IdleThresholds(mouse_idle_ms=50_000, notes_idle_ms=10**9, code_idle_ms=10**9)
    track = ActivityTrack()
    now = 0
    for gap in gaps:
        now += gap
        track.observe("mouse", now)
        assert track.tick(thresholds, now + 50_000) == []

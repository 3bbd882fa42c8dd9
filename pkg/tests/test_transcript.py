"""Transcript parsing, serialization, and the round-trip property."""

import pytest
from hypothesis import given, strategies as st

from costudy import TranscriptParseError, parse_transcript, serialize_transcript
from costudy.transcript import Cue, Transcript, format_timestamp


def test_single_cue():
    t = parse_transcript("00:00.000 --> 00:05.000\nhello")
    assert [(c.start_ms, c.end_ms, c.text) for c in t.cues] == [(0, 5000, "hello")]


def test_cues_sorted_by_start():
    raw = (
        "00:10.000 --> 00:12.000\nsecond\n"
        "\n"
        "00:01.000 --> 00:03.000\nfirst\n"
    )
    t = parse_transcript(raw)
    assert [c.text for c in t.cues] == ["first", "second"]


def test_end_before_start_rejected():
    with pytest.raises(TranscriptParseError) as err:
        parse_transcript("00:05.000 --> 00:04.000\nbackwards")
    assert err.value.line_no == 1


def test_empty_file_rejected():
    with pytest.raises(TranscriptParseError):
        parse_transcript("")
    with pytest.raises(TranscriptParseError):
        parse_transcript("WEBVTT\n\n")


def test_malformed_timing_line_reports_line_number():
    raw = "00:00.000 --> 00:01.000\nok\n\nnot a timing line\nstill not\n"
    with pytest.raises(TranscriptParseError) as err:
        parse_transcript(raw)
    assert err.value.line_no == 4


def test_cue_without_text_rejected():
    with pytest.raises(TranscriptParseError):
        parse_transcript("00:00.000 --> 00:01.000\n\n")


def test_header_and_identifiers_skipped():
    raw = "WEBVTT\n\n1\n00:00.000 --> 00:01.000\nfirst line\nsecond line\n"
    t = parse_transcript(raw)
    assert t.cues[0].text == "first line second line"


def test_hour_timestamps():
    t = parse_transcript("1:01:01.500 --> 1:01:02.000\nlate cue")
    assert t.cues[0].start_ms == 3_661_500
    assert format_timestamp(3_661_500) == "1:01:01.500"


def test_overlapping_cues_allowed():
    raw = "00:00.000 --> 00:10.000\na\n\n00:05.000 --> 00:08.000\nb\n"
    assert len(parse_transcript(raw).cues) == 2


def test_render_includes_timestamps(transcript):
    rendered = transcript.render()
    assert rendered.splitlines()[0].startswith("[00:00.000] ")
    assert len(rendered.splitlines()) == 5


# cue text is a single line: surrogates, controls, and every splitlines() break
# character (including U+2028/U+2029) are not valid cue-text content
_cue_text = st.text(
    alphabet=st.characters(
        blacklist_categories=("Cs", "Cc", "Zl", "Zp"), blacklist_characters="\n\r"
    ),
    min_size=1,
).filter(lambda s: s.strip() == s and s.strip() != "" and "-->" not in s)


@given(
    st.lists(
        st.tuples(st.integers(0, 3_000_000), st.integers(0, 600_000), _cue_text),
        min_size=1,
        max_size=12,
    )
)
def test_round_trip(raw_cues):
    cues = tuple(Cue(start, start + length, text) for start, length, text in raw_cues)
    cues = tuple(sorted(cues, key=lambda c: c.start_ms))
    transcript = Transcript(cues)
    assert parse_transcript(serialize_transcript(transcript)) == transcript

"""Config documents: TOML/JSON loading, validation, defaults, CLI wiring."""

import json

import pytest

from costudy import ConfigError, DEFAULT_PERSONAS, SessionConfig, config_from_dict, load_config
from costudy.cli import make_server_config, parse_args

from conftest import SAMPLE_VTT

TOML_DOC = """\
mode = "full"
rng_seed = 99
memory_token_budget = 512

[[personas]]
name = "Ada"
tone = "dry"
interaction_style = "socratic"
characteristic = "precise"
voice_id = "alloy"

[[personas]]
name = "Lin"
tone = "bubbly"
interaction_style = "storytelling"
characteristic = "curious"
voice_id = "echo"

[scheduler]
passive_interval_ms = [60000, 120000]
break_probability = 0.5

[router]
forward_interval_ms = [30000, 40000]

[idle]
code_idle_ms = 45000

[provider]
backend = "stub"
stub_seed = 4
"""


def test_default_config_ships_six_personas():
    config = SessionConfig()
    config.validate()
    assert config.roster_size == 6
    assert len({p.voice_id for p in DEFAULT_PERSONAS}) == 6


def test_toml_document_round_trip(tmp_path):
    path = tmp_path / "session.toml"
    path.write_text(TOML_DOC)
    config = load_config(path)
    assert config.rng_seed == 99
    assert config.roster_size == 2
    assert config.scheduler.passive_interval_ms == (60_000, 120_000)
    assert config.scheduler.break_probability == 0.5
    assert config.router.forward_interval_ms == (30_000, 40_000)
    assert config.idle.code_idle_ms == 45_000
    assert config.provider.stub_seed == 4
    assert config.memory_token_budget == 512


def test_json_document_loads(tmp_path):
    doc = {"mode": "baseline", "rng_seed": 3}
    path = tmp_path / "session.json"
    path.write_text(json.dumps(doc))
    config = load_config(path)
    assert config.mode == "baseline"
    assert config.roster_size == 6  # defaults fill everything else


def test_unknown_keys_rejected():
    with pytest.raises(ConfigError):
        config_from_dict({"rngseed": 1})
    with pytest.raises(ConfigError):
        config_from_dict({"scheduler": {"passive_ms": [1, 2]}})


def test_inline_api_key_rejected():
    with pytest.raises(ConfigError):
        config_from_dict({"provider": {"backend": "stub", "api_key": "sk-nope"}})


def test_duplicate_voices_rejected_when_set_allows_distinct():
    personas = [
        {"name": "A", "tone": "t", "interaction_style": "i", "characteristic": "c",
         "voice_id": "alloy"},
        {"name": "B", "tone": "t", "interaction_style": "i", "characteristic": "c",
         "voice_id": "alloy"},
    ]
    with pytest.raises(ConfigError):
        config_from_dict({"personas": personas})


def test_voice_outside_provider_set_rejected():
    personas = [{"name": "A", "tone": "t", "interaction_style": "i",
                 "characteristic": "c", "voice_id": "kazoo"}]
    with pytest.raises(ConfigError):
        config_from_dict({"personas": personas})


def test_http_backend_requires_url_and_key_env():
    with pytest.raises(ConfigError):
        config_from_dict({"provider": {"backend": "http"}})


def test_mode_validated():
    with pytest.raises(ConfigError):
        config_from_dict({"mode": "turbo"})


def test_cli_flags_override_config(tmp_path):
    config_path = tmp_path / "session.toml"
    config_path.write_text(TOML_DOC)
    transcript_path = tmp_path / "lesson.vtt"
    transcript_path.write_text(SAMPLE_VTT)
    args = parse_args([
        "--config", str(config_path),
        "--transcript", str(transcript_path),
        "--mode", "baseline",
        "--seed", "123",
        "--provider", "stub",
        "--port", "9100",
        "--tick-ms", "0",
    ])
    server_config = make_server_config(args)
    assert server_config.session_config.mode == "baseline"
    assert server_config.session_config.rng_seed == 123
    assert server_config.transcript_text == SAMPLE_VTT
    assert server_config.tick_ms == 0
    # placeholder manifest is complete for the configured roster
    assert set(server_config.manifest["agents"]) == {"Ada", "Lin"}


def test_cli_defaults_use_shipped_personas(tmp_path):
    transcript_path = tmp_path / "lesson.vtt"
    transcript_path.write_text(SAMPLE_VTT)
    args = parse_args(["--transcript", str(transcript_path)])
    server_config = make_server_config(args)
    assert server_config.session_config.roster_size == 6
    assert server_config.heartbeat_s == 15.0

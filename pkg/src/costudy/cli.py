"""Command-line entry point for the session server."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import uvicorn

from .assets import load_manifest, placeholder_manifest
from .config import SessionConfig, load_config
from .errors import ConfigError
from .server import ServerConfig, build_app


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="costudy-server",
        description="Host co-learner study sessions over HTTP with a server-push event stream.",
    )
    parser.add_argument("--config", type=Path, help="session config document (.toml or .json)")
    parser.add_argument("--transcript", type=Path, required=True,
                        help="tutorial transcript (WebVTT cue blocks)")
    parser.add_argument("--manifest", type=Path,
                        help="asset manifest JSON; omitted: placeholder paths are assumed")
    parser.add_argument("--assets-root", type=Path, help="directory served under /assets/")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8000)
    parser.add_argument("--seed", type=int, help="override the session rng seed")
    parser.add_argument("--mode", choices=("full", "baseline"), help="override the session mode")
    parser.add_argument("--provider", choices=("http", "stub"), help="override the provider backend")
    parser.add_argument("--log-dir", type=Path, default=Path("./logs"))
    parser.add_argument("--heartbeat", type=float, default=15.0,
                        help="stream heartbeat interval in seconds")
    parser.add_argument("--tick-ms", type=int, default=250,
                        help="scheduler tick interval; 0 means the clock only moves on ingress")
    return parser.parse_args(argv)


def make_server_config(args: argparse.Namespace) -> ServerConfig:
    session_config = load_config(args.config) if args.config else SessionConfig()
    session_config = session_config.with_overrides(
        mode=args.mode, seed=args.seed, backend=args.provider
    )
    transcript_text = args.transcript.read_text("utf-8")
    if args.manifest:
        manifest = load_manifest(args.manifest)
    else:
        manifest = placeholder_manifest(session_config.personas)
    return ServerConfig(
        session_config=session_config,
        transcript_text=transcript_text,
        log_dir=args.log_dir,
        manifest=manifest,
        assets_root=args.assets_root,
        heartbeat_s=args.heartbeat,
        tick_ms=args.tick_ms,
    )


def main(argv: list[str] | None = None) -> int:
    args = parse_args(argv)
    try:
        server_config = make_server_config(args)
        app = build_app(server_config)
    except (ConfigError, OSError) as exc:
        print(f"startup error: {exc}", file=sys.stderr)
        return 2
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


if __name__ == "__main__":
    sys.exit(main())

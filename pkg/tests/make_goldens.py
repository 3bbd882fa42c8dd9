"""Regenerate the protocol golden files from the canonical trace.

Run after an intentional wire-format change: ``python tests/make_goldens.py``.
"""

import json
import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import httpx

from test_server import CANONICAL_TRACE, GOLDEN_DIR, LiveServer, server_config
from costudy.server import build_app


def generate(tmp_path: Path) -> None:
    app = build_app(server_config(tmp_path))
    with LiveServer(app) as live, httpx.Client(base_url=live.base_url) as client:
        client.post("/sessions", json={"session_id": "golden", "seed": 7}).raise_for_status()
        for at_ms, body in CANONICAL_TRACE:
            client.post("/sessions/golden/events", json={**body, "at_ms": at_ms}).raise_for_status()

        log = client.get("/sessions/golden/log")
        (GOLDEN_DIR / "protocol_log.jsonl").write_bytes(log.content)

        snapshot = client.get("/sessions/golden")
        (GOLDEN_DIR / "snapshot.json").write_text(
            json.dumps(snapshot.json(), indent=2, ensure_ascii=False) + "\n"
        )

        total = len(log.content.splitlines())
        frames = []
        with client.stream("GET", "/sessions/golden/stream?from_seq=5", timeout=10) as stream:
            for line in stream.iter_lines():
                if line.startswith("data: "):
                    frames.append(line.removeprefix("data: "))
                    if len(frames) == total - 5:
                        break
        (GOLDEN_DIR / "stream_resume.jsonl").write_text("\n".join(frames) + "\n")


def main() -> None:
    GOLDEN_DIR.mkdir(exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        generate(Path(tmp))
    print(f"goldens written to {GOLDEN_DIR}")


if __name__ == "__main__":
    main()

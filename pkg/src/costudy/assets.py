"""Action-video asset manifest: loading, completeness validation, placeholders.

The manifest maps, per roster persona, every action id to a clip path plus one
shared-screen clip. Action ids are the 10 passive actions and the 6 active
actions crossed with their 3 phases (``asking.starting`` ... ``welcoming.ending``).
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable

from .actions import ACTIVE_ACTIONS, ACTIVE_PHASES, PASSIVE_ACTIONS
from .agents import Persona
from .errors import ConfigError

REQUIRED_ACTION_IDS = PASSIVE_ACTIONS + tuple(
    f"{action}.{phase}" for action in ACTIVE_ACTIONS for phase in ACTIVE_PHASES
)


def load_manifest(path: str | Path) -> dict:
    doc = json.loads(Path(path).read_text("utf-8"))
    if not isinstance(doc, dict):
        raise ConfigError("asset manifest must be a JSON object")
    return doc


def validate_manifest(doc: dict, personas: Iterable[Persona]) -> None:
    """Raise ConfigError naming every gap; a complete manifest passes silently."""
    agents = doc.get("agents")
    if not isinstance(agents, dict):
        raise ConfigError("asset manifest needs an 'agents' object")
    missing: list[str] = []
    for persona in personas:
        entry = agents.get(persona.name)
        if entry is None:
            missing.append(f"{persona.name}: no manifest entry")
            continue
        if not entry.get("shared_screen"):
            missing.append(f"{persona.name}: shared_screen clip missing")
        actions = entry.get("actions") or {}
        for action_id in REQUIRED_ACTION_IDS:
            if not actions.get(action_id):
                missing.append(f"{persona.name}: action clip {action_id!r} missing")
    if missing:
        preview = "; ".join(missing[:5])
        more = f" (+{len(missing) - 5} more)" if len(missing) > 5 else ""
        raise ConfigError(f"asset manifest incomplete: {preview}{more}")


def placeholder_manifest(personas: Iterable[Persona], base: str = "assets") -> dict:
    """Complete manifest pointing at conventional paths; useful for dev setups."""
    agents = {}
    for persona in personas:
        slug = persona.name.lower()
        agents[persona.name] = {
            "shared_screen": f"{base}/{slug}/shared_screen.mp4",
            "actions": {
                action_id: f"{base}/{slug}/{action_id.replace('.', '_')}.mp4"
                for action_id in REQUIRED_ACTION_IDS
            },
        }
    return {"assets_root": base, "agents": agents}

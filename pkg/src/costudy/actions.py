"""Action vocabulary for co-learner behavior."""

STUDY_ACTIONS = ("typing", "watching", "thinking", "taking_notes", "expressing_confusion")
BREAK_ACTIONS = ("stretching", "rubbing_eyes", "eating", "drinking", "checking_phone")
PASSIVE_ACTIONS = STUDY_ACTIONS + BREAK_ACTIONS

ACTIVE_ACTIONS = ("asking", "chatting", "encouraging", "exciting", "explaining", "welcoming")
ACTIVE_PHASES = ("starting", "continuing", "ending")

DEFAULT_ACTION = "typing"


def is_break(action: str) -> bool:
    return action in BREAK_ACTIONS

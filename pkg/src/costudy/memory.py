"""Summary-buffer conversation memory with a whitespace-token budget.

Token counts use a provider-independent heuristic (whitespace words x 4/3,
rounded up) so memory behavior is testable offline. When the buffer exceeds
its budget, the oldest exchanges are folded into a running summary through a
provider summarization call; a final hard word-cut on the summary guarantees
the budget regardless of how verbose the provider is.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .providers import ChatRequest, ProviderGateway, ProviderMessage

SUMMARIZE_PROMPT = (
    "You condense study-session chat history. Merge the existing summary and "
    "the new lines into one short third-person summary that keeps names, open "
    "questions, and conclusions. Reply with the summary text only."
)


def estimate_tokens(text: str) -> int:
    return math.ceil(len(text.split()) * 4 / 3)


@dataclass
class MemoryBuffer:
    token_budget: int = 2000
    running_summary: str = ""
    recent_exchanges: list[tuple[str, str]] = field(default_factory=list)

    @property
    def token_estimate(self) -> int:
        total = estimate_tokens(self.running_summary)
        for _, text in self.recent_exchanges:
            total += estimate_tokens(text)
        return total

    def add(self, speaker: str, text: str) -> None:
        self.recent_exchanges.append((speaker, text))


def _summarize(gateway: ProviderGateway, summary: str, folded: list[tuple[str, str]]) -> str:
    lines = "\n".join(f"{speaker}: {text}" for speaker, text in folded)
    body = f"Current summary:\n{summary or '(none)'}\n\nNew lines:\n{lines}"
    request = ChatRequest(
        system_prompt=SUMMARIZE_PROMPT,
        messages=(ProviderMessage("user", body),),
        purpose="summary",
    )
    return gateway.complete(request).strip()


def condense(memory: MemoryBuffer, gateway: ProviderGateway) -> MemoryBuffer:
    """Fold oldest exchanges into the summary until the buffer fits its budget.

    Mutates (and returns) the buffer only after every provider call succeeded,
    so a provider failure leaves the memory unchanged. Remaining exchanges stay
    in chronological order.
    """
    if memory.token_estimate <= memory.token_budget:
        return memory
    summary = memory.running_summary
    remaining = list(memory.recent_exchanges)

    def over_budget() -> bool:
        total = estimate_tokens(summary) + sum(estimate_tokens(t) for _, t in remaining)
        return total > memory.token_budget

    while remaining and over_budget():
        folded = []
        while remaining and over_budget():
            folded.append(remaining.pop(0))
        summary = _summarize(gateway, summary, folded)
    if not remaining and estimate_tokens(summary) > memory.token_budget:
        keep = memory.token_budget * 3 // 4
        summary = " ".join(summary.split()[:keep])
    memory.running_summary = summary
    memory.recent_exchanges = remaining
    return memory

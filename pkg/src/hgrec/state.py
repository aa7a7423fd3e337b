"""Mutable per-round bookkeeping carried across simulation rounds.

A single writer (the round loop) mutates the state between rounds;
query assembly within a round reads a frozen snapshot. Coverage counts
are slot-based: a recommendation slot whose article lists an author
increments that author's counter by one, and the denominator counts all
slots emitted so far. Everything is recomputable from the append-only
recommendation log, which is what the recount oracle checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from .data import ArticleCatalog


class RecRecord(NamedTuple):
    round_index: int
    user: int
    articles: tuple[int, ...]


@dataclass
class RoundState:
    rounds_completed: int = 0
    author_slot_counts: dict[int, int] = field(default_factory=dict)
    total_slots: int = 0
    topic_history: dict[int, set[int]] = field(default_factory=dict)
    recommendation_log: list[RecRecord] = field(default_factory=list)

    def coverage(self) -> dict[int, float]:
        """Per-author fraction of all slots so far containing the author."""
        if self.total_slots == 0:
            return {a: 0.0 for a in self.author_slot_counts}
        return {a: n / self.total_slots for a, n in sorted(self.author_slot_counts.items())}

    def coverage_of(self, author: int) -> float:
        if self.total_slots == 0:
            return 0.0
        return self.author_slot_counts.get(author, 0) / self.total_slots


def save_state(state: RoundState, path) -> None:
    """Persist the operational snapshot (coverage counts and topic
    histories) as JSON. The recommendation log itself lives in the run's
    ``recommendations.jsonl``, not here."""
    import json

    payload = {
        "rounds_completed": state.rounds_completed,
        "total_slots": state.total_slots,
        "author_slot_counts": {str(a): n for a, n in sorted(state.author_slot_counts.items())},
        "topic_history": {str(u): sorted(ts) for u, ts in sorted(state.topic_history.items())},
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_state(path) -> RoundState:
    import json

    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    return RoundState(
        rounds_completed=int(payload["rounds_completed"]),
        total_slots=int(payload["total_slots"]),
        author_slot_counts={int(a): int(n) for a, n in payload["author_slot_counts"].items()},
        topic_history={int(u): set(ts) for u, ts in payload["topic_history"].items()},
    )


def recount_from_log(
    records: list[RecRecord], catalog: ArticleCatalog
) -> tuple[dict[int, int], int, dict[int, set[int]]]:
    """Brute-force recount of slot counts, total slots and topic history
    from the raw recommendation log. Independent of the incremental
    bookkeeping; used to verify it."""
    slot_counts: dict[int, int] = {}
    topic_history: dict[int, set[int]] = {}
    total = 0
    for record in records:
        for article in record.articles:
            total += 1
            for author in set(catalog.authors[article]):
                slot_counts[author] = slot_counts.get(author, 0) + 1
            topic_history.setdefault(record.user, set()).update(catalog.topics[article])
    return slot_counts, total, topic_history

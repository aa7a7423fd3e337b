"""Evaluation measures: precision@k, group-attention balance, popularity
calibration, covered-topic counts, and the popularity split of authors
into short-head and long-tail groups.

Group counting is slot-author based throughout: a recommendation slot
contributes one count to the group of each author listed on its article,
and the normalizing totals count slot-author pairs. Training-side counts
use the same convention over raw interaction events, so numerator and
denominator of the calibration measure share units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .data import ArticleCatalog, InteractionLog
from .errors import EmptyRecommendationsError, NoEvaluableUsersError

DEFAULT_K = 20
PARETO_SHARE = 0.20


@dataclass(frozen=True)
class AuthorGroups:
    """Popularity split: the smallest prefix of authors (by descending
    training interactions) holding at least 20% of interactions forms
    the short head; everyone else with any interaction is long tail."""

    short_head: frozenset[int]
    long_tail: frozenset[int]

    def group_of(self, author: int) -> int:
        """0 for short-head, 1 for long-tail; authors outside both (no
        training interactions) raise KeyError."""
        if author in self.short_head:
            return 0
        if author in self.long_tail:
            return 1
        raise KeyError(author)


def split_groups(interactions: InteractionLog, catalog: ArticleCatalog) -> AuthorGroups:
    """Pareto-style author split on training interaction counts.

    Sort authors by descending count (ties by ascending id) and take the
    minimal prefix whose cumulative share reaches 20%.
    """
    counts: dict[int, int] = {}
    for a in interactions.article:
        for author in set(catalog.authors[int(a)]):
            counts[author] = counts.get(author, 0) + 1
    if not counts:
        raise ValueError("no author has a training interaction")
    ordered = sorted(counts, key=lambda w: (-counts[w], w))
    total = sum(counts.values())
    short = []
    cumulative = 0
    for author in ordered:
        short.append(author)
        cumulative += counts[author]
        if cumulative / total >= PARETO_SHARE:
            break
    return AuthorGroups(
        short_head=frozenset(short), long_tail=frozenset(ordered[len(short):])
    )


def precision_at_k(
    recommended: dict[int, list[int]],
    held_out: dict[int, set[int]],
    k: int = DEFAULT_K,
) -> float:
    """Mean over evaluable users of |top-k hits| / k.

    Only users with a non-empty held-out set count; raises
    ``NoEvaluableUsersError`` when there are none.
    """
    scores = []
    for user in sorted(held_out):
        truth = held_out[user]
        if not truth:
            continue
        top = recommended.get(user, [])[:k]
        hits = sum(1 for article in top if article in truth)
        scores.append(hits / k)
    if not scores:
        raise NoEvaluableUsersError("no user has a non-empty held-out set")
    return sum(scores) / len(scores)


def eagf(recommended_by_group: dict[int, int]) -> float:
    """Sum over groups of the square root of the group's recommendation
    count. Concave, so balanced attention across groups scores higher."""
    for group, count in recommended_by_group.items():
        if count < 0:
            raise ValueError(f"negative count for group {group}")
    return sum(math.sqrt(count) for _, count in sorted(recommended_by_group.items()))


def spd(
    recommended_by_group: dict[int, int],
    training_by_group: dict[int, int],
) -> float:
    """Mean absolute gap between each group's recommendation share and
    its training share. Zero means exposure calibrated to popularity."""
    total_r = sum(recommended_by_group.values())
    total_d = sum(training_by_group.values())
    if total_r <= 0:
        raise EmptyRecommendationsError("no recommendation slots to evaluate")
    if total_d <= 0:
        raise ValueError("no training interactions to compare against")
    groups = sorted(set(recommended_by_group) | set(training_by_group))
    gap = 0.0
    for group in groups:
        r_share = recommended_by_group.get(group, 0) / total_r
        d_share = training_by_group.get(group, 0) / total_d
        gap += abs(r_share - d_share)
    return gap / len(groups)


def covered_topics(histories: dict[int, set[int]]) -> float:
    """Average number of unique topics shown per user so far."""
    if not histories:
        return 0.0
    return sum(len(topics) for topics in histories.values()) / len(histories)


def group_slot_counts(
    recommendations: list[tuple[int, ...]] | list[list[int]],
    catalog: ArticleCatalog,
    groups: AuthorGroups,
) -> dict[int, int]:
    """Slot-author pair counts per group for recommendation lists.

    Authors without training interactions in the grouping slice are
    skipped (they cannot be attributed to a group).
    """
    counts = {0: 0, 1: 0}
    for articles in recommendations:
        for article in articles:
            for author in set(catalog.authors[int(article)]):
                try:
                    counts[groups.group_of(author)] += 1
                except KeyError:
                    continue
    return counts


def group_training_counts(
    interactions: InteractionLog,
    catalog: ArticleCatalog,
    groups: AuthorGroups,
) -> dict[int, int]:
    """Event-author pair counts per group for a training slice."""
    counts = {0: 0, 1: 0}
    for a in interactions.article:
        for author in set(catalog.authors[int(a)]):
            try:
                counts[groups.group_of(author)] += 1
            except KeyError:
                continue
    return counts

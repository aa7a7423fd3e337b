"""Author-side query adaptation: popularity-vs-coverage weights combined
with per-user relevance.

Each author's round weight is the clamped gap between the author's share
of current training interactions and the author's share of all past
recommendation slots:

    weight = max(0, frequency - coverage)

Authors covered at or beyond their popularity get exactly zero; the rest
get a boost proportional to how far behind their audience share they
are. The fair variant scales these shared weights by the querying user's
normalized author-relevance before placing them in the query vector, so
the correction leans toward authors the user plausibly cares about.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .data import ArticleCatalog, InteractionLog
from .errors import MissingRelevanceError
from .ranking import QueryVector
from .state import RoundState, RecRecord

MODE_PLAIN = "plain"
MODE_COVERAGE_ONLY = "coverage_only"
MODE_FAIR = "fair"


@dataclass
class AuthorStats:
    """Per-author training frequency and historical coverage.

    ``frequency[a]`` is the fraction of training interactions on
    articles listing author ``a`` in the current round; ``coverage[a]``
    is the fraction of past recommendation slots containing the author.
    Multi-author articles count toward each listed author, so the
    frequencies may sum beyond one.
    """

    frequency: dict[int, float] = field(default_factory=dict)
    coverage: dict[int, float] = field(default_factory=dict)


def author_frequencies(interactions: InteractionLog, catalog: ArticleCatalog) -> dict[int, float]:
    """Share of training events on each author's articles.

    An event on a two-author article counts once for each author.
    """
    counts: dict[int, int] = {}
    total = len(interactions)
    for a in interactions.article:
        for author in set(catalog.authors[int(a)]):
            counts[author] = counts.get(author, 0) + 1
    if total == 0:
        return {}
    return {author: counts[author] / total for author in sorted(counts)}


def author_stats(
    interactions: InteractionLog, catalog: ArticleCatalog, state: RoundState
) -> AuthorStats:
    """Stats for the authors present in the current training slice.

    Authors never recommended before have coverage zero.
    """
    freq = author_frequencies(interactions, catalog)
    cov = {author: state.coverage_of(author) for author in freq}
    return AuthorStats(frequency=freq, coverage=cov)


def coverage_weights(stats: AuthorStats) -> dict[int, float]:
    """weight = max(0, frequency - coverage), per author in the slice."""
    return {
        author: max(0.0, p - stats.coverage.get(author, 0.0))
        for author, p in sorted(stats.frequency.items())
    }


def build_adapted_query(
    user: int,
    w: dict[int, float] | None,
    r: dict[int, float] | None,
    mode: str,
    dimension: int,
) -> QueryVector:
    """Assemble the query vector for one user.

    ``plain`` puts a single unit weight at the user vertex. The adapted
    modes add author entries: the shared coverage weight alone
    (``coverage_only``) or its product with the user's relevance for the
    author (``fair``). Zero products are omitted; the user entry stays
    at 1.0 regardless. All keys are vertex global indices.
    """
    entries = {user: 1.0}
    if mode == MODE_PLAIN:
        return QueryVector(dimension=dimension, entries=entries)
    if mode not in (MODE_COVERAGE_ONLY, MODE_FAIR):
        raise ValueError(f"unknown adaptation mode {mode!r}")
    if w is None:
        raise ValueError(f"mode {mode!r} requires coverage weights")
    if mode == MODE_FAIR and r is None:
        raise MissingRelevanceError("fair adaptation requires relevance scores")
    for author in sorted(w):
        weight = w[author]
        if mode == MODE_FAIR:
            weight = weight * r.get(author, 0.0)
        if weight > 0.0:
            entries[author] = float(weight)
    return QueryVector(dimension=dimension, entries=entries)


def update_coverage(
    state: RoundState,
    recommendations: dict[int, list[int]],
    catalog: ArticleCatalog,
    round_index: int,
) -> RoundState:
    """Fold one round of per-user top-k lists into the coverage state.

    Appends to the recommendation log, bumps each listed author's slot
    count once per slot, and advances the slot total. Cumulative across
    rounds by design: coverage ratios compare against all slots ever
    emitted.
    """
    for user in sorted(recommendations):
        articles = tuple(int(a) for a in recommendations[user])
        state.recommendation_log.append(RecRecord(round_index, user, articles))
        for article in articles:
            state.total_slots += 1
            for author in set(catalog.authors[article]):
                state.author_slot_counts[author] = state.author_slot_counts.get(author, 0) + 1
    state.rounds_completed = max(state.rounds_completed, round_index)
    return state


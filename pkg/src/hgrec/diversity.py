"""Per-user query adaptation for topical diversity.

Instead of author weights shared across users, each user's query gets a
fixed weight on a few topics sampled uniformly from the topics never
recommended to that user before. No relevance scaling here: the point is
to surface genuinely new themes, so the injected topics are deliberately
blind to the user's predicted interests.
"""

from __future__ import annotations

import numpy as np

from .data import ArticleCatalog
from .ranking import QueryVector

DEFAULT_N_SAMPLES = 3
DEFAULT_WEIGHT = 0.5


def topic_rng(seed: int, round_index: int, user: int) -> np.random.Generator:
    """Independent per-(round, user) stream so parallel evaluation order
    cannot change what gets sampled."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, round_index, user])))


def sample_uncovered_topics(
    history: set[int],
    all_topics,
    n_samples: int,
    rng: np.random.Generator,
) -> list[int]:
    """Uniform sample, without replacement, of topics not yet shown.

    Returns fewer than ``n_samples`` when the uncovered pool is smaller;
    an exhausted pool returns nothing.
    """
    uncovered = sorted(t for t in all_topics if t not in history)
    if not uncovered or n_samples <= 0:
        return []
    take = min(n_samples, len(uncovered))
    picked = rng.choice(len(uncovered), size=take, replace=False)
    return sorted(uncovered[int(i)] for i in picked)


def build_topic_query(
    user: int,
    topic_vertices: list[int],
    weight: float,
    dimension: int,
) -> QueryVector:
    """Unit user entry plus ``weight`` on each given topic vertex.

    With no topics or zero weight this degrades to the plain single-seed
    query. Keys are vertex global indices.
    """
    if weight < 0:
        raise ValueError("topic weight must be >= 0")
    entries = {user: 1.0}
    if weight > 0:
        for t in topic_vertices:
            entries[t] = float(weight)
    return QueryVector(dimension=dimension, entries=entries)


def diversify_query(
    user: int,
    history: set[int],
    all_topics,
    n_samples: int,
    weight: float,
    rng_seed,
    dimension: int,
) -> QueryVector:
    """Sample uncovered topics under the given seed and assemble the
    adapted query. ``rng_seed`` is anything ``SeedSequence`` accepts, or
    an already-derived generator."""
    if isinstance(rng_seed, np.random.Generator):
        rng = rng_seed
    else:
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(rng_seed)))
    sampled = sample_uncovered_topics(history, all_topics, n_samples, rng)
    return build_topic_query(user, sampled, weight, dimension)


def update_topic_history(
    history: dict[int, set[int]],
    recommendations: dict[int, list[int]],
    catalog: ArticleCatalog,
) -> dict[int, set[int]]:
    """Fold recommended (not clicked) articles' topics into each user's
    covered-topic set. Monotonically non-decreasing across rounds."""
    for user in sorted(recommendations):
        seen = history.setdefault(user, set())
        for article in recommendations[user]:
            seen.update(catalog.topics[int(article)])
    return history

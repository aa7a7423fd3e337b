import numpy as np
import pytest
from hypothesis import given, strategies as st

from hgrec.data import ArticleCatalog, InteractionLog
from hgrec.errors import MissingRelevanceError
from hgrec.fairness import (
    AuthorStats,
    author_frequencies,
    author_stats,
    build_adapted_query,
    coverage_weights,
    update_coverage,
)
from hgrec.state import RoundState, recount_from_log


def catalog_with_authors(author_lists):
    n = len(author_lists)
    all_authors = sorted({a for lst in author_lists for a in lst})
    return ArticleCatalog(
        article_ids=[f"a{i}" for i in range(n)],
        authors=[list(lst) for lst in author_lists],
        topics=[[i % 3] for i in range(n)],
        iptc_tags=[[] for _ in range(n)],
        author_ids=[f"w{a}" for a in all_authors],
        topic_ids=["t0", "t1", "t2"],
        iptc_ids=[],
    )


def log_of(pairs):
    return InteractionLog(
        user=np.array([u for u, _ in pairs], dtype=np.int64),
        article=np.array([a for _, a in pairs], dtype=np.int64),
        timestamp=np.arange(len(pairs), dtype=np.float64),
        user_ids=[f"u{i}" for i in range(1 + max((u for u, _ in pairs), default=0))],
    )


class TestCoverageWeights:
    def test_gap_arithmetic(self):
        stats = AuthorStats(frequency={0: 0.3}, coverage={0: 0.1})
        assert coverage_weights(stats) == {0: pytest.approx(0.2)}

    def test_overcovered_clamps_to_zero(self):
        stats = AuthorStats(frequency={0: 0.1}, coverage={0: 0.3})
        assert coverage_weights(stats) == {0: 0.0}

    def test_first_round_weights_equal_frequencies(self):
        stats = AuthorStats(frequency={0: 0.25, 1: 0.5}, coverage={0: 0.0, 1: 0.0})
        assert coverage_weights(stats) == {0: 0.25, 1: 0.5}

    @given(
        p=st.floats(min_value=0, max_value=1),
        c=st.floats(min_value=0, max_value=1),
    )
    def test_weight_bounded_by_frequency(self, p, c):
        (w,) = coverage_weights(AuthorStats(frequency={0: p}, coverage={0: c})).values()
        assert 0.0 <= w <= p


class TestAuthorFrequencies:
    def test_multi_author_counts_each(self):
        catalog = catalog_with_authors([[0, 1], [1]])
        log = log_of([(0, 0), (0, 1)])
        freq = author_frequencies(log, catalog)
        assert freq == {0: 0.5, 1: 1.0}

    def test_frequencies_sum_may_exceed_one(self):
        catalog = catalog_with_authors([[0, 1]])
        log = log_of([(0, 0)])
        assert sum(author_frequencies(log, catalog).values()) == 2.0

    def test_stats_use_state_coverage(self):
        catalog = catalog_with_authors([[0], [1]])
        log = log_of([(0, 0), (0, 1)])
        state = RoundState()
        update_coverage(state, {0: [0, 0]}, catalog, round_index=1)
        stats = author_stats(log, catalog, state)
        assert stats.coverage[0] == 1.0
        assert stats.coverage[1] == 0.0


class TestAdaptedQuery:
    def test_plain_is_single_seed(self):
        q = build_adapted_query(user=3, w=None, r=None, mode="plain", dimension=10)
        assert q.entries == {3: 1.0}

    def test_fair_multiplies_weight_by_relevance(self):
        q = build_adapted_query(
            user=0, w={5: 0.2}, r={5: 0.5}, mode="fair", dimension=10
        )
        assert q.entries == {0: 1.0, 5: pytest.approx(0.1)}

    def test_coverage_only_drops_zero_entries(self):
        q = build_adapted_query(
            user=0, w={5: 0.2, 6: 0.0}, r=None, mode="coverage_only", dimension=10
        )
        assert q.entries == {0: 1.0, 5: pytest.approx(0.2)}

    def test_fair_without_relevance_raises(self):
        with pytest.raises(MissingRelevanceError):
            build_adapted_query(user=0, w={1: 0.5}, r=None, mode="fair", dimension=4)

    def test_user_weight_stays_unit(self):
        q = build_adapted_query(
            user=2, w={4: 0.9}, r={4: 1.0}, mode="fair", dimension=6
        )
        assert q.entries[2] == 1.0

    def test_unknown_mode_rejected(self):
        with pytest.raises(ValueError):
            build_adapted_query(user=0, w={}, r={}, mode="bogus", dimension=2)


class TestUpdateCoverage:
    def test_slot_fraction(self):
        catalog = catalog_with_authors([[0]] * 20)
        state = RoundState()
        # one user, k=20 slots, 5 by author 0? give 5 slots to author-0
        # articles and 15 to articles by a different author
        catalog = catalog_with_authors([[0]] * 5 + [[1]] * 15)
        recs = {0: list(range(20))}
        update_coverage(state, recs, catalog, round_index=1)
        assert state.coverage_of(0) == pytest.approx(0.25)
        assert state.total_slots == 20

    def test_no_recommendations_means_zero_coverage(self):
        state = RoundState()
        assert state.coverage_of(7) == 0.0
        assert state.coverage() == {}

    def test_multi_author_slot_counts_each_author_once(self):
        catalog = catalog_with_authors([[0, 1]])
        state = RoundState()
        update_coverage(state, {0: [0]}, catalog, round_index=1)
        assert state.author_slot_counts == {0: 1, 1: 1}
        assert state.total_slots == 1

    def test_cumulative_across_rounds(self):
        catalog = catalog_with_authors([[0], [1]])
        state = RoundState()
        update_coverage(state, {0: [0]}, catalog, round_index=1)
        update_coverage(state, {0: [1]}, catalog, round_index=2)
        assert state.total_slots == 2
        assert state.coverage_of(0) == 0.5
        assert state.rounds_completed == 2

    def test_matches_brute_force_recount(self):
        rng = np.random.default_rng(97)
        author_lists = [
            sorted(rng.choice(6, size=rng.integers(1, 3), replace=False).tolist())
            for _ in range(15)
        ]
        catalog = catalog_with_authors(author_lists)
        state = RoundState()
        for t in (1, 2, 3):
            recs = {
                int(u): rng.integers(0, 15, size=8).tolist() for u in range(4)
            }
            update_coverage(state, recs, catalog, round_index=t)
        counts, total, _ = recount_from_log(state.recommendation_log, catalog)
        assert total == state.total_slots
        assert counts == {a: n for a, n in state.author_slot_counts.items() if n}
        for author, c in state.coverage().items():
            assert c == counts.get(author, 0) / total


class TestSelfCorrection:
    def test_overexposed_author_weight_shrinks(self):
        # two authors; author 0 has 60% of training interactions but gets
        # recommended in every slot, so its weight must fall while p < 1
        catalog = catalog_with_authors([[0], [1]])
        log = log_of([(0, 0), (0, 0), (0, 0), (0, 1), (0, 1)])
        state = RoundState()
        w1 = coverage_weights(author_stats(log, catalog, state))
        update_coverage(state, {0: [0] * 10}, catalog, round_index=1)
        w2 = coverage_weights(author_stats(log, catalog, state))
        assert w2[0] < w1[0]
        assert w2[0] == 0.0  # fully saturated coverage clamps at zero
        assert w2[1] == w1[1]

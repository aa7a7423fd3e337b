import numpy as np
import pytest

from hgrec.data import ArticleCatalog
from hgrec.diversity import (
    build_topic_query,
    diversify_query,
    sample_uncovered_topics,
    topic_rng,
    update_topic_history,
)


class TestSampling:
    def test_all_topics_covered_degrades_to_plain(self):
        q = diversify_query(
            user=0, history={1, 2, 3}, all_topics=[1, 2, 3], n_samples=2,
            weight=0.5, rng_seed=1, dimension=10,
        )
        assert q.entries == {0: 1.0}

    def test_forced_sample_set(self):
        q = diversify_query(
            user=0, history=set(), all_topics=[4, 5], n_samples=2,
            weight=0.3, rng_seed=1, dimension=10,
        )
        assert q.entries == {0: 1.0, 4: pytest.approx(0.3), 5: pytest.approx(0.3)}

    def test_seeded_determinism(self):
        kwargs = dict(
            user=2, history={1}, all_topics=[1, 3, 4, 5, 6], n_samples=1,
            weight=0.5, dimension=10,
        )
        q1 = diversify_query(rng_seed=42, **kwargs)
        q2 = diversify_query(rng_seed=42, **kwargs)
        assert q1.entries == q2.entries

    def test_distinct_seeds_explore(self):
        kwargs = dict(history=set(), all_topics=list(range(50)), n_samples=3)
        seen = {
            tuple(sample_uncovered_topics(rng=topic_rng(seed, 1, 0), **kwargs))
            for seed in range(8)
        }
        assert len(seen) > 1

    def test_samples_never_in_history(self):
        rng = np.random.default_rng(5)
        for trial in range(50):
            history = {int(t) for t in rng.choice(30, size=10, replace=False)}
            sampled = sample_uncovered_topics(
                history, list(range(30)), 4, topic_rng(trial, 1, 0)
            )
            assert not (set(sampled) & history)

    def test_sample_capped_by_pool(self):
        sampled = sample_uncovered_topics({0}, [0, 1, 2], 10, topic_rng(0, 1, 0))
        assert sorted(sampled) == [1, 2]

    def test_zero_samples_or_weight_is_plain(self):
        q = diversify_query(
            user=1, history=set(), all_topics=[2, 3], n_samples=0,
            weight=0.5, rng_seed=0, dimension=5,
        )
        assert q.entries == {1: 1.0}
        q = build_topic_query(1, [2, 3], weight=0.0, dimension=5)
        assert q.entries == {1: 1.0}

    def test_negative_weight_rejected(self):
        with pytest.raises(ValueError):
            build_topic_query(0, [1], weight=-0.1, dimension=3)

    def test_per_user_streams_are_independent(self):
        a = sample_uncovered_topics(set(), list(range(100)), 3, topic_rng(7, 1, 0))
        b = sample_uncovered_topics(set(), list(range(100)), 3, topic_rng(7, 1, 1))
        assert a != b


class TestTopicHistory:
    def catalog(self):
        return ArticleCatalog(
            article_ids=["a0", "a1"],
            authors=[[0], [0]],
            topics=[[1, 2], [2, 3]],
            iptc_tags=[[], []],
            author_ids=["w0"],
            topic_ids=["t0", "t1", "t2", "t3"],
            iptc_ids=[],
        )

    def test_union_of_recommended_topics(self):
        history = {}
        update_topic_history(history, {0: [0, 1]}, self.catalog())
        assert history == {0: {1, 2, 3}}

    def test_monotone_across_rounds(self):
        history = {0: {1}}
        before = set(history[0])
        update_topic_history(history, {0: [1]}, self.catalog())
        assert before <= history[0]

    def test_duplicate_exposure_counts_once(self):
        history = {}
        update_topic_history(history, {0: [0, 0, 0]}, self.catalog())
        assert history[0] == {1, 2}

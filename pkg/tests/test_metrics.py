import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hgrec.errors import EmptyRecommendationsError, NoEvaluableUsersError
from hgrec.metrics import (
    covered_topics,
    eagf,
    precision_at_k,
    spd,
    split_groups,
)

from test_fairness import catalog_with_authors, log_of


class TestPrecision:
    def test_five_hits_at_twenty(self):
        recommended = {0: list(range(20))}
        held_out = {0: {0, 1, 2, 3, 4, 100, 101, 102, 103, 104}}
        assert precision_at_k(recommended, held_out, k=20) == pytest.approx(0.25)

    def test_no_hits(self):
        assert precision_at_k({0: [1, 2]}, {0: {99}}, k=20) == 0.0

    def test_capped_when_held_out_smaller_than_k(self):
        held = set(range(10))
        assert precision_at_k({0: list(range(20))}, {0: held}, k=20) == pytest.approx(0.5)

    def test_mean_over_users(self):
        recommended = {0: [0], 1: [9]}
        held_out = {0: {0}, 1: {0}}
        assert precision_at_k(recommended, held_out, k=1) == pytest.approx(0.5)

    def test_no_evaluable_users(self):
        with pytest.raises(NoEvaluableUsersError):
            precision_at_k({0: [1]}, {}, k=5)
        with pytest.raises(NoEvaluableUsersError):
            precision_at_k({0: [1]}, {0: set()}, k=5)

    @given(st.integers(min_value=1, max_value=50))
    def test_bounded_by_one(self, k):
        recommended = {0: list(range(k))}
        held_out = {0: set(range(k))}
        assert 0.0 <= precision_at_k(recommended, held_out, k=k) <= 1.0


class TestEagf:
    def test_hand_value(self):
        assert eagf({0: 16, 1: 9}) == pytest.approx(7.0)

    def test_empty_group_contributes_zero(self):
        assert eagf({0: 0, 1: 25}) == pytest.approx(5.0)

    def test_balance_rewarded_at_fixed_total(self):
        assert eagf({0: 16, 1: 9}) > eagf({0: 25, 1: 0})

    def test_monotone_in_each_count(self):
        base = {0: 9, 1: 4}
        for group in (0, 1):
            bumped = dict(base)
            bumped[group] += 1
            assert eagf(bumped) > eagf(base)

    def test_negative_count_rejected(self):
        with pytest.raises(ValueError):
            eagf({0: -1})


class TestSpd:
    def test_hand_value(self):
        assert spd({0: 8, 1: 2}, {0: 6, 1: 4}) == pytest.approx(0.2)

    def test_calibrated_is_zero(self):
        assert spd({0: 30, 1: 70}, {0: 3, 1: 7}) == pytest.approx(0.0)

    def test_total_concentration(self):
        assert spd({0: 10, 1: 0}, {0: 5, 1: 5}) == pytest.approx(0.5)

    def test_range(self):
        rng = np.random.default_rng(101)
        for _ in range(200):
            r = {0: int(rng.integers(0, 50)), 1: int(rng.integers(0, 50))}
            d = {0: int(rng.integers(0, 50)) + 1, 1: int(rng.integers(0, 50)) + 1}
            if r[0] + r[1] == 0:
                continue
            assert 0.0 <= spd(r, d) <= 1.0

    def test_zero_iff_shares_match(self):
        assert spd({0: 2, 1: 8}, {0: 1, 1: 4}) == 0.0
        assert spd({0: 3, 1: 7}, {0: 1, 1: 4}) > 0.0

    def test_empty_recommendations_rejected(self):
        with pytest.raises(EmptyRecommendationsError):
            spd({0: 0, 1: 0}, {0: 1, 1: 1})


class TestCoveredTopics:
    def test_mean_of_unique_counts(self):
        assert covered_topics({0: {1, 2, 3}, 1: {4, 5, 6, 7, 8}}) == pytest.approx(4.0)

    def test_no_history_yet(self):
        assert covered_topics({}) == 0.0

    def test_set_semantics(self):
        assert covered_topics({0: {1, 1, 2}}) == pytest.approx(2.0)


class TestSplitGroups:
    def test_dominant_author_alone_in_short_head(self):
        catalog = catalog_with_authors([[0], [1], [2]])
        pairs = [(0, 0)] * 50 + [(0, 1)] * 30 + [(0, 2)] * 20
        groups = split_groups(log_of(pairs), catalog)
        assert groups.short_head == {0}
        assert groups.long_tail == {1, 2}

    def test_uniform_counts_prefix_by_id(self):
        catalog = catalog_with_authors([[0], [1], [2], [3], [4]])
        pairs = [(0, a) for a in range(5)]
        groups = split_groups(log_of(pairs), catalog)
        assert groups.short_head == {0}

    def test_single_author(self):
        catalog = catalog_with_authors([[3]])
        groups = split_groups(log_of([(0, 0)]), catalog)
        assert groups.short_head == {3}
        assert groups.long_tail == set()

    def test_partition_covers_interacting_authors_only(self):
        catalog = catalog_with_authors([[0], [1], [2]])
        groups = split_groups(log_of([(0, 0), (0, 1)]), catalog)
        assert groups.short_head | groups.long_tail == {0, 1}
        assert not groups.short_head & groups.long_tail

    def test_boundary_tie_by_ascending_id(self):
        # authors 1 and 2 tie at the 20% boundary; the lower id enters
        catalog = catalog_with_authors([[2], [1], [0]])
        pairs = [(0, 0)] * 2 + [(0, 1)] * 2 + [(0, 2)] * 6
        groups = split_groups(log_of(pairs), catalog)
        assert groups.short_head == {0}

    def test_minimal_prefix_reaches_threshold(self):
        catalog = catalog_with_authors([[0], [1], [2], [3]])
        pairs = [(0, 0)] * 10 + [(0, 1)] * 10 + [(0, 2)] * 40 + [(0, 3)] * 40
        groups = split_groups(log_of(pairs), catalog)
        # sorted: 2 (40), 3 (40), 0 (10), 1 (10); first already >= 20%
        assert groups.short_head == {2}

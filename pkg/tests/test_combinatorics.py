"""Exact urn-model combinatorics against enumeration and big-integer oracles."""

import itertools
import math
from fractions import Fraction

import pytest

from sizebias.combinatorics import (
    BasketSpec,
    PoolSpec,
    count_combinations,
    count_distribution,
    exact_binomial,
    hypergeom_pmf,
    log_binomial,
    log_count_combinations,
    most_likely_black_count,
    share_distribution,
)


def exact_pmf(total_black, total_white, draw, black_drawn) -> Fraction:
    """Independent oracle: exact rational hypergeometric probability."""
    white_drawn = draw - black_drawn
    if black_drawn < 0 or white_drawn < 0 or black_drawn > total_black or white_drawn > total_white:
        return Fraction(0)
    return Fraction(
        math.comb(total_black, black_drawn) * math.comb(total_white, white_drawn),
        math.comb(total_black + total_white, draw),
    )


class TestBinomials:
    def test_exact_matches_math_comb(self):
        for n in range(0, 40):
            for r in range(0, n + 1):
                assert exact_binomial(n, r) == math.comb(n, r)

    def test_log_matches_exact(self):
        # compared in log space: comb(4000, 1333) overflows a float
        for n in (1, 2, 7, 50, 300, 4000):
            for r in (0, 1, n // 3, n // 2, n - 1, n):
                expected = math.comb(n, r)
                if expected == 1:
                    assert log_binomial(n, r) == pytest.approx(0.0, abs=1e-12)
                else:
                    assert log_binomial(n, r) == pytest.approx(math.log(expected), rel=1e-12)

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            log_binomial(3, 4)
        with pytest.raises(ValueError):
            log_binomial(3, -1)
        with pytest.raises(ValueError):
            exact_binomial(3, 4)


class TestCountCombinations:
    def test_product_rule(self):
        pool = PoolSpec(black=6, white=4)
        for k1 in range(0, 7):
            for k2 in range(0, 5):
                expected = math.comb(6, k1) * math.comb(4, k2)
                assert count_combinations(pool, k1, k2) == expected
                assert math.exp(log_count_combinations(pool, k1, k2)) == pytest.approx(
                    expected, rel=1e-10
                )

    def test_overdraw_rejected(self):
        pool = PoolSpec(black=2, white=3)
        with pytest.raises(ValueError):
            count_combinations(pool, 3, 0)
        with pytest.raises(ValueError):
            count_combinations(pool, 0, 4)


class TestHypergeomPmf:
    def test_exhaustive_enumeration_small_pools(self):
        # label balls 0..K-1, the first K1 black; enumerate every basket
        for total in range(1, 9):
            for black in range(0, total + 1):
                pool = PoolSpec(black=black, white=total - black)
                for draw in range(0, total + 1):
                    baskets = list(itertools.combinations(range(total), draw))
                    for k1 in range(0, draw + 1):
                        matching = sum(
                            1 for b in baskets if sum(1 for i in b if i < black) == k1
                        )
                        expected = Fraction(matching, len(baskets))
                        got = hypergeom_pmf(pool, BasketSpec(draw), k1)
                        assert abs(got - float(expected)) <= 1e-12

    def test_rational_oracle_medium_pools(self):
        for black, white, draw in [(20, 30, 15), (100, 1, 50), (1, 100, 50), (63, 64, 40)]:
            pool = PoolSpec(black=black, white=white)
            for k1 in range(0, draw + 1):
                expected = float(exact_pmf(black, white, draw, k1))
                assert hypergeom_pmf(pool, BasketSpec(draw), k1) == pytest.approx(
                    expected, abs=1e-14, rel=1e-11
                )

    def test_large_pool_spot_values(self):
        pool = PoolSpec(black=2120, white=4000 - 2120)
        basket = BasketSpec(100)
        for k1 in (0, 10, 53, 90, 100):
            expected = float(exact_pmf(2120, 1880, 100, k1))
            assert hypergeom_pmf(pool, basket, k1) == pytest.approx(expected, rel=1e-10)

    def test_sums_to_one(self):
        for black, white, draw in [(2120, 1880, 100), (5, 5, 5), (0, 9, 4), (7, 0, 3)]:
            pool = PoolSpec(black=black, white=white)
            total = sum(hypergeom_pmf(pool, BasketSpec(draw), k1) for k1 in range(draw + 1))
            assert total == pytest.approx(1.0, abs=1e-12)

    def test_impossible_splits_are_zero(self):
        pool = PoolSpec(black=2, white=3)
        assert hypergeom_pmf(pool, BasketSpec(4), 3) == 0.0
        assert hypergeom_pmf(pool, BasketSpec(4), 0) == 0.0

    def test_underflow_truncates_to_zero(self):
        pool = PoolSpec(black=2000, white=2000)
        assert hypergeom_pmf(pool, BasketSpec(2000), 0) == 0.0

    def test_draw_larger_than_pool_rejected(self):
        pool = PoolSpec(black=2, white=3)
        with pytest.raises(ValueError):
            hypergeom_pmf(pool, BasketSpec(6), 2)

    def test_black_drawn_out_of_basket_rejected(self):
        pool = PoolSpec(black=5, white=5)
        with pytest.raises(ValueError):
            hypergeom_pmf(pool, BasketSpec(3), 4)
        with pytest.raises(ValueError):
            hypergeom_pmf(pool, BasketSpec(3), -1)


class TestDistributions:
    def test_four_ball_table(self):
        # two black and two white, draw two: exactly (1/6, 2/3, 1/6)
        pool = PoolSpec(black=2, white=2)
        dist = count_distribution(pool, 2)
        assert [k1 for k1, _ in dist] == [0, 1, 2]
        probs = [p for _, p in dist]
        assert probs[0] == pytest.approx(1 / 6, abs=1e-14)
        assert probs[1] == pytest.approx(2 / 3, abs=1e-14)
        assert probs[2] == pytest.approx(1 / 6, abs=1e-14)

    def test_share_distribution_matches_counts(self):
        pool = PoolSpec(black=21, white=19)
        counts = count_distribution(pool, 10)
        shares = share_distribution(pool, 10)
        assert len(counts) == len(shares) == 11
        for (k1, p_count), (share, p_share) in zip(counts, shares):
            assert share == k1 / 10
            assert p_share == p_count

    def test_distribution_sums_to_one(self):
        for black, white, k in [(2120, 1880, 100), (3, 3, 6), (50, 1, 20)]:
            dist = count_distribution(PoolSpec(black=black, white=white), k)
            assert sum(p for _, p in dist) == pytest.approx(1.0, abs=1e-12)

    def test_all_black_pool_single_point(self):
        dist = count_distribution(PoolSpec(black=6, white=0), 4)
        assert [p for _, p in dist] == [0.0, 0.0, 0.0, 0.0, 1.0]

    def test_no_black_pool_single_point(self):
        dist = count_distribution(PoolSpec(black=0, white=6), 4)
        assert dist[0][1] == 1.0
        assert sum(p for _, p in dist[1:]) == 0.0

    def test_share_needs_positive_basket(self):
        with pytest.raises(ValueError):
            share_distribution(PoolSpec(black=2, white=2), 0)


class TestMode:
    def test_paper_scale_mode(self):
        # pool of 4000 with 53% black, basket of 100: mode at 53
        pool = PoolSpec(black=2120, white=1880)
        assert most_likely_black_count(pool, 100) == 53

    def test_mode_matches_exact_argmax(self):
        for black, white, k in [(5, 5, 4), (30, 10, 12), (1, 40, 10), (13, 7, 20)]:
            pool = PoolSpec(black=black, white=white)
            probs = [exact_pmf(black, white, k, k1) for k1 in range(k + 1)]
            best = max(probs)
            expected = min(i for i, p in enumerate(probs) if p == best)
            assert most_likely_black_count(pool, k) == expected

    def test_tie_broken_toward_smaller_count(self):
        # symmetric pool, draw of one: P(0) = P(1) = 1/2, report 0
        pool = PoolSpec(black=2, white=2)
        assert most_likely_black_count(pool, 1) == 0


class TestSpecs:
    def test_pool_requires_a_ball(self):
        with pytest.raises(ValueError):
            PoolSpec(black=0, white=0)

    def test_negative_counts_rejected(self):
        with pytest.raises(ValueError):
            PoolSpec(black=-1, white=5)
        with pytest.raises(ValueError):
            PoolSpec(black=1, white=-5)

    def test_black_share(self):
        assert PoolSpec(black=2120, white=1880).black_share == pytest.approx(0.53)

    def test_basket_nonnegative(self):
        assert BasketSpec(0).size == 0
        with pytest.raises(ValueError):
            BasketSpec(-1)

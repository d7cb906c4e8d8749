#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "blockavg/extremal.hpp"
#include "oracles.hpp"

using namespace blockavg;

TEST_CASE("extremal parameter range") {
    CHECK_NOTHROW(ExtremalParams(4, 3.0));
    CHECK_NOTHROW(ExtremalParams(2, 1.5));
    CHECK_THROWS_AS(ExtremalParams(4, 2.0), error);   // r = sqrt(b) excluded
    CHECK_THROWS_AS(ExtremalParams(4, 1.9), error);   // below sqrt(b)
    CHECK_THROWS_AS(ExtremalParams(4, 4.0), error);   // r = b excluded
    CHECK_THROWS_AS(ExtremalParams(4, 5.0), error);
    CHECK_THROWS_AS(ExtremalParams(1, 0.9), error);
}

TEST_CASE("extremal sequence is block constant") {
    const TruncatedSequence seq = extremal_sequence(ExtremalParams(4, 3.0), 2);
    REQUIRE(seq.size() == 16);
    for (std::size_t j = 0; j < 4; ++j) {
        CHECK(seq[j].real() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    }
    for (std::size_t j = 4; j < 16; ++j) {
        CHECK(seq[j].real() == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
    }

    const TruncatedSequence one_block = extremal_sequence(ExtremalParams(2, 1.5), 1);
    REQUIRE(one_block.size() == 2);
    CHECK(one_block[0].real() == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(one_block[1].real() == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

    // strictly decreasing across blocks
    const TruncatedSequence three = extremal_sequence(ExtremalParams(3, 2.1), 3);
    double prev = 1.0;
    std::size_t boundary = 1;
    for (int k = 1; k <= 3; ++k) {
        boundary *= 3;
        const double value = three[boundary - 1].real();
        CHECK(value < prev);
        prev = value;
    }

    CHECK_THROWS_AS(extremal_sequence(ExtremalParams(4, 3.0), 0), error);
    CHECK_THROWS_AS(extremal_sequence(ExtremalParams(4, 3.0), 40), error); // too long
}

TEST_CASE("closed form of the squared l2 norm") {
    CHECK(extremal_l2_norm_sq(ExtremalParams(4, 3.0)) ==
          doctest::Approx(32.0 / 45.0).epsilon(1e-14));

    // brute-force cross-check; terms decay like (b/r^2)^k so K = 60 leaves
    // a tail far below 1e-12
    const auto sums = oracles::extremal_partial_sums(4.0, 3.0, 60);
    CHECK(extremal_l2_norm_sq(ExtremalParams(4, 3.0)) ==
          doctest::Approx(sums.l2_sq).epsilon(1e-12));

    // pole as r^2 -> b from above: values blow up as the grid descends
    double prev = 0.0;
    for (double r : {2.1, 2.01, 2.001}) {
        const double value = extremal_l2_norm_sq(ExtremalParams(4, r));
        CHECK(value > 9.0 * prev);
        prev = value;
    }
    CHECK(prev > 100.0);
}

TEST_CASE("closed form of the averaged block sums") {
    CHECK(extremal_lhs_sum(ExtremalParams(4, 3.0)) ==
          doctest::Approx(212.0 / 135.0).epsilon(1e-12));

    for (double b : {2.0, 3.0, 4.0}) {
        for (double frac : {0.15, 0.5, 0.85}) {
            const double r = std::sqrt(b) + frac * (b - std::sqrt(b));
            const ExtremalParams params(static_cast<std::int64_t>(b), r);
            const int blocks = oracles::extremal_blocks_for_tail(b, r, 1e-13);
            const auto sums = oracles::extremal_partial_sums(b, r, blocks);
            CHECK(extremal_lhs_sum(params) == doctest::Approx(sums.lhs).epsilon(1e-9));
            CHECK(extremal_l2_norm_sq(params) == doctest::Approx(sums.l2_sq).epsilon(1e-9));
        }
    }
}

TEST_CASE("per-block terms match the three-piece expansion") {
    for (double r : {3.0, 2.5}) {
        double prefix = 4.0 / r; // block 1 covers {1..4}
        double boundary = 4.0;
        CHECK(prefix * prefix / boundary ==
              doctest::Approx(oracles::extremal_block_term_expanded(4.0, r, 1)).epsilon(1e-11));
        for (int k = 2; k <= 10; ++k) {
            const double len = boundary * 3.0; // 4^k - 4^(k-1)
            boundary *= 4.0;
            prefix += len * std::pow(r, -k);
            CHECK(prefix * prefix / boundary ==
                  doctest::Approx(oracles::extremal_block_term_expanded(4.0, r, k)).epsilon(1e-11));
        }
    }
}

TEST_CASE("averaging-operator route reproduces the truncated block sums") {
    const ExtremalParams params(4, 3.0);
    const TruncatedSequence seq = extremal_sequence(params, 8);
    const AveragingConfig cfg(geometric_partition(4, 8), WeightScheme::constant_one(),
                              ExponentPair::from_p(2.0), NormingScheme::root_of_boundary());
    const TruncatedSequence averaged = apply_averaging(seq, cfg);
    REQUIRE(averaged.size() == 8);
    double total = 0.0;
    for (const Complex& b : averaged.values()) {
        total += std::norm(b);
    }
    const auto sums = oracles::extremal_partial_sums(4.0, 3.0, 8);
    CHECK(total == doctest::Approx(sums.lhs).epsilon(1e-12));
}

TEST_CASE("ratio grows as the rate drops toward sqrt(b)") {
    double prev = 0.0;
    for (double r : {2.5, 2.1, 2.01, 2.001}) {
        const ExtremalParams params(4, r);
        const double ratio =
            std::sqrt(extremal_lhs_sum(params) / extremal_l2_norm_sq(params));
        CHECK(ratio > prev);
        CHECK(ratio < std::sqrt(3.0));
        prev = ratio;
    }
}

TEST_CASE("sharpness sweep rows, ordering, and skipping") {
    const double grid4[] = {2.5, 2.1, 2.01, 2.001};
    const SweepResult res = sharpness_sweep(4, grid4);
    REQUIRE(res.rows.size() == 4);
    CHECK(res.skipped.empty());
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
        CHECK(res.rows[i].sharp_constant == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
        CHECK(res.rows[i].gap > 0.0);
        if (i > 0) {
            CHECK(res.rows[i].ratio > res.rows[i - 1].ratio);
            CHECK(res.rows[i].gap < res.rows[i - 1].gap);
        }
    }
    // frozen closed-form values
    CHECK(res.rows[0].ratio == doctest::Approx(1.5735915849388862916).epsilon(1e-12));
    CHECK(res.rows[3].ratio == doctest::Approx(1.7316021371718997396).epsilon(1e-12));
    CHECK(res.rows[3].gap == doctest::Approx(0.0004486703969775539358).epsilon(1e-9));

    const double grid2[] = {1.6, 1.5, 1.43, 1.4143};
    const SweepResult res2 = sharpness_sweep(2, grid2);
    REQUIRE(res2.rows.size() == 4);
    const double sharp2 = 1.0 + std::sqrt(2.0);
    for (std::size_t i = 1; i < res2.rows.size(); ++i) {
        CHECK(res2.rows[i].ratio > res2.rows[i - 1].ratio);
        CHECK(res2.rows[i].ratio < sharp2);
    }
    CHECK(res2.rows[3].ratio == doctest::Approx(2.4140555450084416742).epsilon(1e-12));

    // boundary points are skipped, not evaluated
    const double bad[] = {2.0};
    const SweepResult skipped = sharpness_sweep(4, bad);
    CHECK(skipped.rows.empty());
    REQUIRE(skipped.skipped.size() == 1);
    CHECK(skipped.skipped[0] == 2.0);

    const double mixed[] = {2.5, 4.0, 2.1};
    const SweepResult part = sharpness_sweep(4, mixed);
    CHECK(part.rows.size() == 2);
    CHECK(part.skipped.size() == 1);

    CHECK_THROWS_AS(sharpness_sweep(1, grid4), error);
}

#include <doctest.h>

#include <cmath>
#include <complex>
#include <fstream>
#include <vector>

#include "blockboot/blocks.hpp"
#include "blockboot/estimators.hpp"
#include "blockboot/rng.hpp"

using namespace blockboot;

TEST_CASE("overlapping blocks enumerate every window") {
    const std::vector<double> xs = {1.0, 2.0, 3.0, 4.0};
    const OverlappingBlocks blocks = overlapping_blocks(xs, 2);
    REQUIRE(blocks.size() == 3);
    CHECK(blocks[0][0] == 1.0);
    CHECK(blocks[0][1] == 2.0);
    CHECK(blocks[1][0] == 2.0);
    CHECK(blocks[2][1] == 4.0);

    CHECK(overlapping_blocks(xs, 4).size() == 1);
    CHECK(overlapping_blocks(xs, 1).size() == 4);
    CHECK_THROWS_AS(overlapping_blocks(xs, 5), ValidationError);
}

TEST_CASE("block config geometry") {
    const BlockConfig cfg = BlockConfig::make(10, 3);
    CHECK(cfg.num_overlapping() == 8);
    CHECK(cfg.num_nonoverlapping() == 4);  // ceil(10/3)
    CHECK(cfg.b_tilde() == doctest::Approx(10.0 / 3.0));
    CHECK_FALSE(cfg.divides());
    CHECK(BlockConfig::make(10, 5).divides());
    CHECK_THROWS_AS(BlockConfig::make(0, 1), ValidationError);
}

TEST_CASE("scaled sum functional on a tiny block") {
    const std::vector<double> xs = {1.0, 1.0};
    const BlockVariables bv = eval_block_functional(xs, 2, BlockFunctional::scaled_sum());
    REQUIRE(bv.values.size() == 1);
    CHECK(bv.values[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("periodogram functional basics") {
    const std::vector<double> zeros(16, 0.0);
    for (double v : eval_block_functional(zeros, 4, BlockFunctional::periodogram(0.7)).values)
        CHECK(v == 0.0);

    // alternating series at omega = pi: each block sum has |.|^2 = 4
    const std::vector<double> alt = {1.0, -1.0, 1.0, -1.0};
    const BlockVariables bv = eval_block_functional(alt, 2, BlockFunctional::periodogram(kPi));
    REQUIRE(bv.values.size() == 3);
    for (double v : bv.values) CHECK(v == doctest::Approx(1.0 / kPi).epsilon(1e-12));

    // independent direct evaluation of the complex sum, 1-based absolute index
    for (std::size_t i = 0; i < 3; ++i) {
        std::complex<double> c(0.0, 0.0);
        for (std::size_t m = 0; m < 2; ++m) {
            const double j = static_cast<double>(i + m + 1);
            c += alt[i + m] * std::exp(std::complex<double>(0.0, -j * kPi));
        }
        CHECK(bv.values[i] == doctest::Approx(std::norm(c) / (4.0 * kPi)).epsilon(1e-12));
    }
}

TEST_CASE("sliding fast paths agree with direct per-block evaluation") {
    SplitMix64 rng(5150);
    std::vector<double> xs(400);
    for (auto& v : xs) v = rng.next_normal();
    for (std::size_t ell : {1UL, 3UL, 7UL, 32UL}) {
        for (const BlockFunctional& fn :
             {BlockFunctional::scaled_sum(), BlockFunctional::power_of_scaled_sum(2),
              BlockFunctional::periodogram(1.1)}) {
            const BlockVariables fast = eval_block_functional(xs, ell, fn);
            const OverlappingBlocks blocks = overlapping_blocks(xs, ell);
            REQUIRE(fast.values.size() == blocks.size());
            for (std::size_t i = 0; i < blocks.size(); ++i)
                CHECK(fast.values[i] ==
                      doctest::Approx(fn.evaluate(blocks[i], i)).epsilon(1e-10));
        }
    }
}

TEST_CASE("power with unit index equals scaled_sum exactly") {
    SplitMix64 rng(8);
    std::vector<double> xs(100);
    for (auto& v : xs) v = rng.next_normal();
    const BlockVariables a = eval_block_functional(xs, 5, BlockFunctional::scaled_sum());
    const BlockVariables b =
        eval_block_functional(xs, 5, BlockFunctional::power_of_scaled_sum(1));
    CHECK(a.values == b.values);
    CHECK_THROWS_AS(BlockFunctional::power_of_scaled_sum(0), ValidationError);
}

TEST_CASE("periodogram is sign-invariant and nonnegative") {
    SplitMix64 rng(303);
    std::vector<double> xs(200), neg(200);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        xs[i] = rng.next_normal();
        neg[i] = -xs[i];
    }
    const BlockFunctional fn = BlockFunctional::periodogram(0.9);
    const BlockVariables a = eval_block_functional(xs, 8, fn);
    const BlockVariables b = eval_block_functional(neg, 8, fn);
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        CHECK(a.values[i] >= 0.0);
        CHECK(a.values[i] == doctest::Approx(b.values[i]).epsilon(1e-12));
    }
}

TEST_CASE("weighted cosine functional") {
    const std::vector<double> xs = {2.0, 3.0, 5.0};
    // single weight: Y_i = x_i * w0 * x_i * cos(0)
    const BlockVariables bv =
        eval_block_functional(xs, 2, BlockFunctional::weighted_cosine(0.4, {1.0}));
    REQUIRE(bv.values.size() == 2);
    CHECK(bv.values[0] == doctest::Approx(4.0));
    CHECK(bv.values[1] == doctest::Approx(9.0));
    CHECK_THROWS_AS(
        eval_block_functional(xs, 2, BlockFunctional::weighted_cosine(0.4, {1, 1, 1})),
        ValidationError);
}

TEST_CASE("nonoverlapping block means with a partial final block") {
    const std::vector<double> xs = {2.0, 4.0, 6.0, 8.0, 10.0};
    const BlockVariables bv = eval_block_functional(xs, 2, BlockFunctional::scaled_sum());
    const NonoverlapMeans w = nonoverlap_block_means(xs, bv);
    REQUIRE(w.x_scaled.size() == 3);
    const double root2 = std::sqrt(2.0);
    CHECK(w.x_scaled[0] == doctest::Approx(root2 * 3.0).epsilon(1e-15));
    CHECK(w.x_scaled[1] == doctest::Approx(root2 * 7.0).epsilon(1e-15));
    // final block is partial; divisor stays ell
    CHECK(w.x_scaled[2] == doctest::Approx(root2 * 5.0).epsilon(1e-15));

    // telescoping: sum_k l Xbar_k = sum_i x_i
    double total = 0.0;
    for (double v : w.x_scaled) total += 2.0 * (v / root2);
    CHECK(total == doctest::Approx(30.0).epsilon(1e-14));
}

TEST_CASE("zero block variables give zero nonoverlap means") {
    const std::vector<double> xs = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
    BlockVariables bv = eval_block_functional(xs, 2, BlockFunctional::scaled_sum());
    for (auto& v : bv.values) v = 0.0;
    const NonoverlapMeans w = nonoverlap_block_means(xs, bv);
    for (double v : w.y_mean) CHECK(v == 0.0);
}

TEST_CASE("scaled sum requires centering and satisfies identities") {
    const std::vector<double> xs = {1.0, 2.0, 3.0, 4.0};
    BlockVariables bv = eval_block_functional(xs, 2, BlockFunctional::power_of_scaled_sum(2));
    CHECK_THROWS_AS(scaled_sum(xs, bv), ValidationError);

    const BlockVariables centered = center_block_vars(bv, std::nullopt);
    const ScaledSum s = scaled_sum(xs, centered);
    // s1 = sqrt(n) xbar
    CHECK(s.s1 == doctest::Approx(std::sqrt(4.0) * 2.5).epsilon(1e-14));

    // dual-path: direct sum vs sum_k l Ybar_k / sqrt(n l)
    const NonoverlapMeans w = nonoverlap_block_means(xs, centered);
    double agg = 0.0;
    for (double v : w.y_mean) agg += 2.0 * v;
    agg /= std::sqrt(4.0 * 2.0);
    CHECK(s.s2 == doctest::Approx(agg).epsilon(1e-12));

    // zero Y gives zero s2
    BlockVariables zeros = centered;
    for (auto& v : zeros.values) v = 0.0;
    CHECK(scaled_sum(xs, zeros).s2 == 0.0);
}

TEST_CASE("aggregation identity reproduces the scaled sum on random input") {
    SplitMix64 rng(4242);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 17 + static_cast<std::size_t>(rng.next_unit() * 120);
        const std::size_t ell = 1 + static_cast<std::size_t>(rng.next_unit() * 9);
        std::vector<double> xs(n);
        for (auto& v : xs) v = rng.next_normal();
        BlockVariables bv =
            eval_block_functional(xs, ell, BlockFunctional::power_of_scaled_sum(2));
        const BlockVariables centered = center_block_vars(bv, std::nullopt);
        const ScaledSum s = scaled_sum(xs, centered);
        const NonoverlapMeans w = nonoverlap_block_means(xs, centered);
        const double inv_root_bt = std::sqrt(static_cast<double>(ell) / static_cast<double>(n));
        double s1 = 0.0, s2 = 0.0;
        for (double v : w.x_scaled) s1 += v;
        for (double v : w.y_mean) s2 += v;
        CHECK(inv_root_bt * s1 == doctest::Approx(s.s1).epsilon(1e-12));
        CHECK(inv_root_bt * s2 == doctest::Approx(s.s2).epsilon(1e-12));
    }
}

TEST_CASE("block variables export as csv") {
    const std::vector<double> xs = {1.0, 2.0, 3.0};
    const BlockVariables bv = eval_block_functional(xs, 2, BlockFunctional::scaled_sum());
    const std::string path = "/tmp/blockboot_test_bv.csv";
    export_block_variables_csv(bv, path);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "i,y_1");
    std::string line;
    int count = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++count;
    CHECK(count == 2);
}

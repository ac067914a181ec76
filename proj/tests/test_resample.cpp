#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "blockboot/harness.hpp"
#include "blockboot/procgen.hpp"
#include "blockboot/resample.hpp"

using namespace blockboot;

TEST_CASE("mbb resample basics") {
    const std::vector<double> xs = {1.0, 2.0, 3.0, 4.0};

    SUBCASE("whole-series block reproduces the input") {
        SplitMix64 rng(1);
        CHECK(mbb_resample(xs, 4, rng) == xs);
    }
    SUBCASE("same stream state gives the same draw") {
        SplitMix64 a(42), b(42);
        CHECK(mbb_resample(xs, 2, a) == mbb_resample(xs, 2, b));
    }
    SUBCASE("block length must divide n") {
        SplitMix64 rng(1);
        CHECK_THROWS_AS(mbb_resample(xs, 3, rng), ValidationError);
    }
    SUBCASE("output length is n and blocks are contiguous windows") {
        SplitMix64 rng(7);
        for (int rep = 0; rep < 50; ++rep) {
            const std::vector<double> out = mbb_resample(xs, 2, rng);
            REQUIRE(out.size() == 4);
            for (std::size_t k = 0; k < 2; ++k) {
                const double first = out[2 * k];
                const double second = out[2 * k + 1];
                CHECK(second == first + 1.0);  // series is 1,2,3,4
            }
        }
    }
}

TEST_CASE("mbb start indices are uniform over the observed blocks") {
    const std::vector<double> xs = {1.0, 2.0, 3.0, 4.0};
    SplitMix64 rng(2025);
    std::map<double, int> counts;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) counts[mbb_resample(xs, 2, rng)[0]] += 1;
    REQUIRE(counts.size() == 3);
    // chi-squared goodness of fit against uniform over {1,2,3}; 99% critical
    // value of chi2_2 is 9.21
    const double expected = draws / 3.0;
    double chi2 = 0.0;
    for (const auto& [value, count] : counts)
        chi2 += (count - expected) * (count - expected) / expected;
    CHECK(chi2 < 9.21);
}

TEST_CASE("nbb resample draws whole nonoverlapping blocks") {
    const std::vector<double> xs = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
    SplitMix64 rng(5);
    for (int rep = 0; rep < 30; ++rep) {
        const std::vector<double> out = nbb_resample(xs, 2, rng);
        REQUIRE(out.size() == 6);
        for (std::size_t k = 0; k < 3; ++k)
            CHECK((out[2 * k] == 1.0 || out[2 * k] == 3.0 || out[2 * k] == 5.0));
    }
}

TEST_CASE("exact enumeration of the tiny mean bootstrap") {
    SUBCASE("n=2, l=1: three atoms with probabilities 1/4, 1/2, 1/4") {
        const std::vector<double> xs = {1.0, 3.0};
        const BootstrapDistribution d =
            exact_enumeration(xs, 1, make_statistic("mean", {}));
        REQUIRE(d.is_exact);
        REQUIRE(d.atoms.size() == 3);
        CHECK(d.atoms[0].value == 1.0);
        CHECK(d.atoms[0].prob == doctest::Approx(0.25).epsilon(1e-15));
        CHECK(d.atoms[1].value == 2.0);
        CHECK(d.atoms[1].prob == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(d.atoms[2].value == 3.0);
        CHECK(d.atoms[2].prob == doctest::Approx(0.25).epsilon(1e-15));
    }
    SUBCASE("n=4, l=2: nine equally likely outcomes") {
        const std::vector<double> xs = {1.0, 2.0, 4.0, 8.0};
        const BootstrapDistribution d =
            exact_enumeration(xs, 2, make_statistic("mean", {}));
        double total = 0.0;
        for (const auto& a : d.atoms) {
            total += a.prob;
            // every probability is a multiple of 1/9
            CHECK(a.prob * 9.0 == doctest::Approx(std::round(a.prob * 9.0)).epsilon(1e-12));
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("conditional mean matches the block-mean average in closed form") {
        const std::vector<double> xs = {0.3, -1.2, 2.2, 0.9, -0.4, 1.5};
        const BootstrapDistribution d =
            exact_enumeration(xs, 2, make_statistic("mean", {}));
        double block_mean_avg = 0.0;
        for (std::size_t i = 0; i + 1 < xs.size(); ++i)
            block_mean_avg += 0.5 * (xs[i] + xs[i + 1]);
        block_mean_avg /= 5.0;
        CHECK(d.exact_mean() == doctest::Approx(block_mean_avg).epsilon(1e-12));
    }
    SUBCASE("outcome cap") {
        std::vector<double> xs(40);
        for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = static_cast<double>(i);
        CHECK_THROWS_AS(exact_enumeration(xs, 2, make_statistic("mean", {})),
                        ValidationError);
    }
}

TEST_CASE("mbb variance equals the exact conditional variance of the mean") {
    const std::vector<double> xs = {0.7, -0.3, 1.9, 0.2};
    const BootstrapDistribution d = exact_enumeration(xs, 2, make_statistic("mean", {}));
    CHECK(mbb_variance(xs, 2).value == doctest::Approx(d.exact_variance()).epsilon(1e-12));
}

TEST_CASE("bootstrap distribution machinery") {
    LinearProcessSpec spec;
    spec.coeffs = {1.0, 0.5};
    const TimeSeries ts = gen_linear(spec, 64, 11);

    ResamplePlan plan;
    plan.scheme = ResampleScheme::kMbb;
    plan.block_len = 8;
    plan.replicates = 500;
    plan.master_seed = 77;
    plan.statistic = "mean";

    SUBCASE("replicates are reproducible and thread-count independent") {
        const BootstrapDistribution a = bootstrap_distribution(plan, ts.values, 1);
        const BootstrapDistribution b = bootstrap_distribution(plan, ts.values, 2);
        CHECK(a.samples == b.samples);
    }
    SUBCASE("constant statistic gives a point mass") {
        std::vector<double> constant(64, 3.0);
        const BootstrapDistribution d = bootstrap_distribution(plan, constant, 1);
        for (double v : d.samples) CHECK(v == 3.0);
        CHECK(d.quantile(0.025) == 3.0);
        CHECK(d.quantile(0.975) == 3.0);
    }
    SUBCASE("quantiles are monotone in the level") {
        const BootstrapDistribution d = bootstrap_distribution(plan, ts.values, 1);
        double prev = d.quantile(0.0);
        for (double p : {0.025, 0.05, 0.5, 0.95, 0.975, 1.0}) {
            const double q = d.quantile(p);
            CHECK(q >= prev);
            prev = q;
        }
    }
    SUBCASE("unknown statistic tag is rejected") {
        plan.statistic = "mystery";
        CHECK_THROWS_AS(bootstrap_distribution(plan, ts.values, 1), ValidationError);
    }
}

TEST_CASE("bootstrap CDF converges to the exact enumeration law") {
    const std::vector<double> xs = {0.4, -1.0, 0.9, 2.0};
    const BootstrapDistribution exact = exact_enumeration(xs, 2, make_statistic("mean", {}));

    ResamplePlan plan;
    plan.scheme = ResampleScheme::kMbb;
    plan.block_len = 2;
    plan.replicates = 100000;
    plan.master_seed = 31337;
    plan.statistic = "mean";
    const BootstrapDistribution mc = bootstrap_distribution(plan, xs, 0);

    const double d = ks_vs_atoms(mc.samples, exact.atoms);
    const double bound =
        2.0 * std::sqrt(std::log(static_cast<double>(plan.replicates)) /
                        static_cast<double>(plan.replicates));
    CHECK(d <= bound);
}

TEST_CASE("bobb resampling") {
    LinearProcessSpec spec;
    spec.coeffs = {1.0};
    const TimeSeries ts = gen_linear(spec, 24, 3);
    const BlockVariables bv =
        eval_block_functional(ts.values, 5, BlockFunctional::scaled_sum());  // N = 20

    SUBCASE("identity when l1 = N") {
        SplitMix64 rng(1);
        CHECK(bobb_resample(bv, 20, rng) == bv.values);
    }
    SUBCASE("determinism under a fixed stream") {
        SplitMix64 a(9), b(9);
        CHECK(bobb_resample(bv, 4, a) == bobb_resample(bv, 4, b));
    }
    SUBCASE("divisibility is enforced") {
        SplitMix64 rng(1);
        CHECK_THROWS_AS(bobb_resample(bv, 3, rng), ValidationError);
        CHECK_THROWS_AS(bobb_resample(bv, 21, rng), ValidationError);
    }
    SUBCASE("first entry is uniform over candidate starts") {
        SplitMix64 rng(555);
        std::map<double, int> counts;
        const int draws = 60000;
        for (int i = 0; i < draws; ++i) counts[bobb_resample(bv, 4, rng)[0]] += 1;
        REQUIRE(counts.size() == 17);  // N - l1 + 1 candidates
        const double expected = draws / 17.0;
        double chi2 = 0.0;
        for (const auto& [value, count] : counts)
            chi2 += (count - expected) * (count - expected) / expected;
        CHECK(chi2 < 32.0);  // chi2_16 99% critical value
    }
}

TEST_CASE("bobb conditional mean closed form vs brute force") {
    SplitMix64 rng(8080);
    BlockVariables bv;
    bv.config = BlockConfig::make(40, 5);
    bv.values.resize(36);
    for (auto& v : bv.values) v = rng.next_normal();
    for (std::size_t ell1 : {1UL, 4UL, 9UL, 36UL}) {
        double brute = 0.0;
        const std::size_t candidates = bv.values.size() - ell1 + 1;
        for (std::size_t i = 0; i < candidates; ++i) {
            double s = 0.0;
            for (std::size_t m = 0; m < ell1; ++m) s += bv.values[i + m];
            brute += s / static_cast<double>(ell1);
        }
        brute /= static_cast<double>(candidates);
        CHECK(bobb_conditional_mean(bv, ell1) == doctest::Approx(brute).epsilon(1e-12));
    }
}

TEST_CASE("bobb studentized statistic") {
    SUBCASE("all-equal resample gives zero") {
        const std::vector<double> ystar(12, 2.0);
        const StudentizedStat t = bobb_studentized(ystar, 3, 2.0, 100);
        CHECK(t.value == 0.0);
        CHECK(t.denominator == doctest::Approx(0.1).epsilon(1e-14));
    }
    SUBCASE("length must be a multiple of l1") {
        const std::vector<double> ystar(10, 1.0);
        CHECK_THROWS_AS(bobb_studentized(ystar, 3, 0.0, 100), ValidationError);
    }
}

TEST_CASE("bobb with l1 = 1 matches iid resampling of the block variables") {
    LinearProcessSpec spec;
    spec.coeffs = {1.0, 0.5};
    const TimeSeries ts = gen_linear(spec, 20, 21);
    const BlockVariables bv =
        eval_block_functional(ts.values, 5, BlockFunctional::scaled_sum());  // N = 16

    const std::size_t reps = 20000;
    std::vector<double> bobb_means(reps), iid_means(reps);
    SplitMix64 rng_a(1001), rng_b(2002);
    for (std::size_t r = 0; r < reps; ++r) {
        bobb_means[r] = mean_of(bobb_resample(bv, 1, rng_a));
        double s = 0.0;
        for (std::size_t i = 0; i < bv.values.size(); ++i) {
            const std::size_t pick =
                static_cast<std::size_t>(rng_b.next_unit() * bv.values.size());
            s += bv.values[pick];
        }
        iid_means[r] = s / static_cast<double>(bv.values.size());
    }
    CHECK(ks_two_sample(bobb_means, iid_means) < 0.03);
}

TEST_CASE("bobb studentized law is near normal at scale" * doctest::skip(false)) {
    // held-out realization of a Gaussian linear process, periodogram blocks
    LinearProcessSpec spec;
    spec.coeffs = {1.0, 0.5};
    const std::size_t n = 20000, ell = 14, ell1 = 79;  // N = 19987 = 11*23*79
    const TimeSeries ts = gen_linear(spec, n, 314159);
    const BlockVariables bv =
        eval_block_functional(ts.values, ell, BlockFunctional::periodogram(kPi / 2.0));
    REQUIRE(bv.values.size() % ell1 == 0);
    const double estar = bobb_conditional_mean(bv, ell1);

    const std::size_t reps = 5000;
    std::vector<double> tstar(reps);
    parallel_for_indexed(reps, 0, [&](std::size_t r) {
        SplitMix64 rng(derive_seed(664, seed_domain::kBootstrapReplicate, r));
        tstar[r] = bobb_studentized(bobb_resample(bv, ell1, rng), ell1, estar, n).value;
    });
    const double d = ks_distance(tstar, [](double x) { return normal_cdf(x); });
    CHECK(d < 0.08);
}

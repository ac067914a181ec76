#ifndef BLOCKBOOT_RESAMPLE_HPP_
#define BLOCKBOOT_RESAMPLE_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "blockboot/blocks.hpp"
#include "blockboot/estimators.hpp"
#include "blockboot/rng.hpp"

namespace blockboot {

enum class ResampleScheme { kMbb, kNbb, kBobb };

std::string scheme_name(ResampleScheme s);
ResampleScheme scheme_from_name(const std::string& name);

// A registered statistic maps a resampled series (mbb/nbb) or a resampled
// block-variable sequence (bobb) to a scalar.
using Statistic = std::function<double(std::span<const double>)>;

// Context for parameterized registry entries; unused fields may stay unset.
struct StatisticParams {
    std::size_t ell = 0;        // block length for mbb-var / studentized-mean
    double mu = 0.0;            // centering for studentized-mean
    std::size_t ell1 = 0;       // bobb inner block length
    double bobb_center = 0.0;   // E_* Ybar*_N for bobb-studentized
    std::size_t n = 0;          // original series length (n^{-1} floor)
};

// Tags: mean | mbb-var | studentized-mean | bobb-studentized
Statistic make_statistic(const std::string& tag, const StatisticParams& params);
bool statistic_known(const std::string& tag);

struct ResamplePlan {
    ResampleScheme scheme = ResampleScheme::kMbb;
    std::size_t block_len = 1;   // l for mbb/nbb, l1 for bobb
    std::size_t replicates = 1;  // B
    std::uint64_t master_seed = 0;
    std::string statistic = "mean";
    StatisticParams statistic_params;
    // bobb only: how to form the block variables from the input series
    std::optional<BlockFunctional> functional;
    std::size_t functional_ell = 0;

    void validate() const;
};

struct Atom {
    double value = 0.0;
    double prob = 0.0;
};

struct BootstrapDistribution {
    std::vector<double> samples;  // MC mode, exactly B, ordered by replicate
    std::vector<Atom> atoms;      // exact mode, sorted by value, probs sum to 1
    bool is_exact = false;

    double quantile(double p) const;
    // Right-continuous CDF (exact mode only).
    double cdf_at(double x) const;
    double exact_mean() const;
    double exact_variance() const;
};

// Draws b = n/l block starts i.i.d. uniform on {1..N} and concatenates;
// requires l | n.
std::vector<double> mbb_resample(std::span<const double> xs, std::size_t ell, SplitMix64& rng);

// Same with the b nonoverlapping blocks as the sampling frame.
std::vector<double> nbb_resample(std::span<const double> xs, std::size_t ell, SplitMix64& rng);

// Resamples b1 = N/l1 blocks-of-blocks from the N - l1 + 1 candidates and
// keeps the first N entries; requires l1 | N.
std::vector<double> bobb_resample(const BlockVariables& bv, std::size_t ell1, SplitMix64& rng);

// E_* Ybar*_N: average of the l1-block means over all N - l1 + 1 starts.
double bobb_conditional_mean(const BlockVariables& bv, std::size_t ell1);

// T*_N of the resampled sequence, centered at the conditional mean and
// scaled by max{n^{-1}, b1^{-1} sum (Ybar*_{i,1} - Ybar*_N)^2}^{1/2}.
StudentizedStat bobb_studentized(std::span<const double> ystar, std::size_t ell1,
                                 double conditional_mean, std::size_t n);

// B conditionally i.i.d. statistic evaluations; replicate r uses the child
// stream derive_seed(master, kBootstrapReplicate, r).
BootstrapDistribution bootstrap_distribution(const ResamplePlan& plan,
                                             std::span<const double> xs,
                                             unsigned threads = 1);

// Enumerates all N^b equally likely index tuples (guarded at 10^6) and
// returns the exact conditional law of the statistic.
BootstrapDistribution exact_enumeration(std::span<const double> xs, std::size_t ell,
                                        const Statistic& statistic);

}  // namespace blockboot

#endif  // BLOCKBOOT_RESAMPLE_HPP_

#ifndef BLOCKBOOT_BLOCKS_HPP_
#define BLOCKBOOT_BLOCKS_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "blockboot/common.hpp"

namespace blockboot {

// Shared block geometry: N = n - l + 1 overlapping blocks, b = ceil(n/l)
// nonoverlapping ones, b_tilde = n/l kept exact as the integer pair.
struct BlockConfig {
    std::size_t n = 0;
    std::size_t ell = 0;

    static BlockConfig make(std::size_t n, std::size_t ell);

    std::size_t num_overlapping() const { return n - ell + 1; }               // N
    std::size_t num_nonoverlapping() const { return (n + ell - 1) / ell; }    // b
    double b_tilde() const { return static_cast<double>(n) / static_cast<double>(ell); }
    bool divides() const { return n % ell == 0; }
};

// Non-owning view over the N overlapping blocks of a series.
class OverlappingBlocks {
  public:
    OverlappingBlocks(std::span<const double> xs, std::size_t ell);

    std::size_t size() const { return config_.num_overlapping(); }
    std::span<const double> operator[](std::size_t i) const {
        return xs_.subspan(i, config_.ell);
    }
    const BlockConfig& config() const { return config_; }

    class Iterator {
      public:
        Iterator(const OverlappingBlocks* owner, std::size_t i) : owner_(owner), i_(i) {}
        std::span<const double> operator*() const { return (*owner_)[i_]; }
        Iterator& operator++() { ++i_; return *this; }
        bool operator!=(const Iterator& other) const { return i_ != other.i_; }
      private:
        const OverlappingBlocks* owner_;
        std::size_t i_;
    };
    Iterator begin() const { return Iterator(this, 0); }
    Iterator end() const { return Iterator(this, size()); }

  private:
    std::span<const double> xs_;
    BlockConfig config_;
};

OverlappingBlocks overlapping_blocks(std::span<const double> xs, std::size_t ell);

// Menu of block functionals f(block) -> R:
//   scaled_sum       U_i = (sum of block) / sqrt(l)
//   power(nu)        U_i^nu, nu >= 1
//   periodogram(w)   (2 pi l)^{-1} | sum_j x_j exp(-i j w) |^2
//   weighted_cosine  block[0] * sum_k w_k block[k] cos(k lambda), len(w) <= l
struct BlockFunctional {
    enum class Tag { kScaledSum, kPower, kPeriodogram, kWeightedCosine };

    Tag tag = Tag::kScaledSum;
    int power = 1;
    double omega = 0.0;
    double lambda = 0.0;
    std::vector<double> weights;

    static BlockFunctional scaled_sum();
    static BlockFunctional power_of_scaled_sum(int nu);
    static BlockFunctional periodogram(double omega);
    static BlockFunctional weighted_cosine(double lambda, std::vector<double> weights);

    std::string name() const;
    // Direct one-block evaluation; position is the 0-based start index of the
    // block in the full series (the periodogram phase uses absolute indices).
    double evaluate(std::span<const double> block, std::size_t position) const;
};

struct BlockVariables {
    BlockConfig config;
    std::vector<double> values;  // exactly N entries
    bool centered = false;
    double centering_constant = 0.0;
};

// Evaluates the functional over all N overlapping blocks. scaled_sum, power
// and periodogram run in O(n) via sliding windows; the generic path is
// O(N*l).
BlockVariables eval_block_functional(std::span<const double> xs, std::size_t ell,
                                     const BlockFunctional& fn);

// W_kn components, k = 1..b: x_scaled[k] = sqrt(l) * Xbar_kn and
// y_mean[k] = Ybar_kn, both with divisor l even for a partial final block and
// with Y_in := 0 for i > N.
struct NonoverlapMeans {
    std::vector<double> x_scaled;
    std::vector<double> y_mean;
};

NonoverlapMeans nonoverlap_block_means(std::span<const double> xs, const BlockVariables& bv);

// S_n = (n^{-1/2} sum X_i, (n l)^{-1/2} sum Y_in). Requires centered block
// variables.
struct ScaledSum {
    double s1 = 0.0;
    double s2 = 0.0;
};

ScaledSum scaled_sum(std::span<const double> xs, const BlockVariables& bv);

void export_block_variables_csv(const BlockVariables& bv, const std::string& path);

}  // namespace blockboot

#endif  // BLOCKBOOT_BLOCKS_HPP_

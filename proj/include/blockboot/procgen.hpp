#ifndef BLOCKBOOT_PROCGEN_HPP_
#define BLOCKBOOT_PROCGEN_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "blockboot/common.hpp"

namespace blockboot {

// Innovation menu. All three are normalized to mean 0, variance 1 and then
// scaled by sqrt(innov_variance):
//   normal                -- N(0,1); Cramer's condition holds.
//   centered_exponential  -- Exp(rate 1) - 1; skewed, third cumulant 2.
//   uniform               -- U(-sqrt 3, sqrt 3); bounded, symmetric.
enum class Innovation { kNormal, kCenteredExponential, kUniform };

std::string innovation_name(Innovation innov);
Innovation innovation_from_name(const std::string& name);

// Causal finite-order linear process X_j = sum_{i=0..J} a_i e_{j-i}.
struct LinearProcessSpec {
    std::vector<double> coeffs;  // a_0..a_J
    Innovation innov = Innovation::kNormal;
    double innov_variance = 1.0;

    void validate() const;
};

// Window maps for m-dependent processes X_i = h(e_i,...,e_{i+m0-1}) - E h.
// The menu is chosen so E h is analytic for every entry.
enum class WindowMap { kIdentityFirst, kSum, kProduct, kConstant };

std::string window_map_name(WindowMap h);
WindowMap window_map_from_name(const std::string& name);

struct MDependentSpec {
    int m0 = 1;
    WindowMap h = WindowMap::kIdentityFirst;
    double h_constant = 0.0;  // used by kConstant only
    Innovation innov = Innovation::kNormal;
    double innov_variance = 1.0;

    void validate() const;
};

// Analytic second-order truth of a generated process: lag autocovariances
// gamma(k) with finite support, the long-run variance, the spectral density
// and sum_{k>=1} k*gamma(k).
class ProcessTruth {
  public:
    ProcessTruth() = default;
    explicit ProcessTruth(std::vector<double> gamma_by_lag);

    // gamma(k), symmetric in k, zero beyond the stored support.
    double gamma(long k) const;
    int max_lag() const { return static_cast<int>(gamma_.size()) - 1; }

    // sigma_inf^2 = gamma(0) + 2 sum_{k>=1} gamma(k)
    double sigma_inf_sq() const { return sigma_inf_sq_; }

    // f(omega) = (2 pi)^{-1} [gamma(0) + 2 sum_{k>=1} gamma(k) cos(k omega)]
    double spectral(double omega) const;

    // sum_{k>=1} k gamma(k)
    double weighted_gamma_sum() const { return weighted_gamma_sum_; }

    const std::vector<double>& gamma_vector() const { return gamma_; }

  private:
    std::vector<double> gamma_;  // gamma_[k] = gamma(k), k = 0..J
    double sigma_inf_sq_ = 0.0;
    double weighted_gamma_sum_ = 0.0;
};

struct TimeSeries {
    std::vector<double> values;
    std::optional<ProcessTruth> truth;  // absent for externally loaded data
    std::uint64_t seed = 0;

    std::size_t n() const { return values.size(); }
};

// Generates X_j = sum_i a_i e_{j-i} with a burn-in of exactly J innovations,
// so the output path is strictly stationary. (spec, n, seed) -> values is a
// pure function.
TimeSeries gen_linear(const LinearProcessSpec& spec, std::size_t n, std::uint64_t seed);

// Generates the mean-centered m0-dependent process for the built-in window
// maps. Every menu entry has an analytic centering constant.
TimeSeries gen_m_dependent(const MDependentSpec& spec, std::size_t n, std::uint64_t seed);

// gamma(k) = s_e^2 sum_i a_i a_{i+k};  sigma_inf^2 = s_e^2 (sum a)^2;
// f from gamma;  weighted sum = sum_{k=1..J} k gamma(k).
ProcessTruth derive_truth(const LinearProcessSpec& spec);

// Analytic truth for the m-dependent menu.
ProcessTruth derive_truth(const MDependentSpec& spec);

// E U_11^2 for the scaled block sum of a mean-zero process:
// gamma(0) + 2 sum_{k=1}^{l-1} (1 - k/l) gamma(k).
double expected_scaled_block_second_moment(const ProcessTruth& truth, std::size_t ell);

// E Y for the periodogram block variable at frequency omega, via the
// Fejer-weighted autocovariances:
// (2 pi)^{-1} sum_{|k| < l} (1 - |k|/l) gamma(k) cos(k omega).
double expected_periodogram_mean(const ProcessTruth& truth, std::size_t ell, double omega);

}  // namespace blockboot

#endif  // BLOCKBOOT_PROCGEN_HPP_

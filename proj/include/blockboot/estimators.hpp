#ifndef BLOCKBOOT_ESTIMATORS_HPP_
#define BLOCKBOOT_ESTIMATORS_HPP_

#include <optional>
#include <span>
#include <string>

#include "blockboot/blocks.hpp"

namespace blockboot {

enum class VarianceMethod { kMbb, kNbb, kLagWindow };

std::string variance_method_name(VarianceMethod m);

struct VarianceEstimate {
    double value = 0.0;
    VarianceMethod method = VarianceMethod::kMbb;
    bool truncated = false;  // whether the max{n^{-1}, .} floor was active
};

struct StudentizedStat {
    double value = 0.0;
    double numerator = 0.0;
    double denominator = 0.0;
};

// gamma_hat(k) = n^{-1} sum_{i=1}^{n-k} x_i x_{i+k} - xbar^2; divisor n and
// subtrahend xbar^2 for every k.
double sample_autocov(std::span<const double> xs, std::size_t k);

// f_hat(lambda) = (2 pi)^{-1} sum_{k=0}^{l} w_k gamma_hat(k) cos(k lambda),
// literally as displayed: no implicit factor 2 on k >= 1 terms, so the
// conventional estimator takes w_k = 2 for k >= 1.
double spectral_estimate(std::span<const double> xs, std::size_t ell,
                         std::span<const double> weights, double lambda);

// Subtracts the analytic mean when given, else the sample mean (plug-in), and
// records the constant. Centering twice is an error.
BlockVariables center_block_vars(const BlockVariables& bv,
                                 std::optional<double> population_mean);

// mu_hat(nu) = N^{-1} sum_j U_{1j}^nu
double mbb_moment(std::span<const double> xs, std::size_t ell, int nu);

// sigma_hat^2 = n^{-1} [ N^{-1} sum U^2 - (N^{-1} sum U)^2 ]
VarianceEstimate mbb_variance(std::span<const double> xs, std::size_t ell);

// sigma_tilde^2 = max{ n^{-1}, b^{-1} sum_i (U_{1,(i-1)l+1} - mean)^2 } over
// the b = n/l nonoverlapping starts; requires l | n.
VarianceEstimate nbb_variance(std::span<const double> xs, std::size_t ell);

// T_n = sqrt(n) (xbar - mu) / sigma_tilde
StudentizedStat studentized_mean(std::span<const double> xs, std::size_t ell, double mu);

// sigma_hat^2 = max{ n^{-1}, [g(0) + 2 sum_{k=1}^{2l} (1 - k/N) g(k)] b/N }
// with g(k) = N^{-1} sum_{i=1}^{N-k} (Y_i - Ybar)(Y_{i+k} - Ybar).
// Requires 2l <= N - 1.
VarianceEstimate lag_window_variance(const BlockVariables& bv);

// T_N = sqrt(b) (Ybar_N - true_mean) / sigma_hat
StudentizedStat studentized_block_mean(const BlockVariables& bv, double true_mean);

}  // namespace blockboot

#endif  // BLOCKBOOT_ESTIMATORS_HPP_

#ifndef BLOCKBOOT_EDGEWORTH_HPP_
#define BLOCKBOOT_EDGEWORTH_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "blockboot/common.hpp"

namespace blockboot {

enum class CumulantSource { kAnalytic, kKStatistic, kCentralMoment };

std::string cumulant_source_name(CumulantSource s);

// chi_r for r = 2..order of a scalar statistic; chi_2 > 0.
struct CumulantVector {
    int order = 0;                 // s
    std::vector<double> chi;       // chi[r], indices 0..order; 0 and 1 unused
    CumulantSource source = CumulantSource::kAnalytic;

    static CumulantVector make(std::vector<double> chi_2_to_s, CumulantSource source);
    double at(int r) const;
};

// Sample cumulants: orders 2-4 as unbiased k-statistics, orders 5-6 from the
// central-moment formulas (bias O(1/count)). kCentralMoment mode uses the
// central-moment formulas for every order.
CumulantVector sample_cumulants(std::span<const double> samples, int max_order,
                                CumulantSource mode = CumulantSource::kKStatistic);

// Probabilists' Hermite polynomial He_k(x).
double hermite_he(int k, double x);

// P_r, r = 1..s-2, as coefficient arrays in powers of (it): polys[r-1][j] is
// the coefficient of (it)^j in P_r. Obtained by exact coefficient matching in
// the exponential identity; P_r carries the b_tilde^{r/2} factor.
struct ExpansionPolys {
    int s = 0;
    double b_tilde = 1.0;
    std::vector<std::vector<double>> polys;

    const std::vector<double>& p(int r) const;  // r = 1..s-2
};

ExpansionPolys formal_expansion(const CumulantVector& cumulants, double b_tilde, int s);

// (s-2)-order Edgeworth CDF at x via term-wise Hermite inversion of the
// Fourier-side expansion. The b_tilde^{r/2} factor inside P_r cancels the
// b_tilde^{-r/2} series weight exactly in this scalar specialization.
double ee_cdf(double x, const CumulantVector& cumulants, double b_tilde, int s);

enum class MomentSource { kAnalytic, kMcEstimated };

// Population ingredients of the Studentized-mean polynomials. Moments are
// supplied, not computed here: analytic when the process truth permits,
// otherwise MC-estimated with the provenance recorded.
struct StudentizedEEParams {
    double sigma_inf_sq = 0.0;
    double weighted_gamma_sum = 0.0;  // sum_{k>=1} k gamma(k)
    std::size_t n = 0;
    std::size_t ell = 0;
    double eu11_sq = 0.0;    // E U_11^2
    double ez3 = 0.0;        // E Z_n^3,  Z_n = sqrt(n) (xbar - mu)
    double ezv_scaled = 0.0; // l^{1/2} E Z_n V_n
    double ez2 = 0.0;        // E Z_n^2
    MomentSource moment_source = MomentSource::kAnalytic;
    std::size_t mc_replicates = 0;
    std::uint64_t mc_seed = 0;
};

// p1(y) = (y^2 - 1) [sum_k k gamma(k)] [sigma_inf^{-2}] [n^{1/3}/l]
double studentized_p1(double y, const StudentizedEEParams& params);

// p2(y) = c1 y + c3 (y^3 - 3y), coefficients per the third-order display.
double studentized_p2(double y, const StudentizedEEParams& params);

// Phi(x) + n^{-1/3} int p1 phi + n^{-1/2} int p2 phi, with the phi-weighted
// integrals in closed form; order 1 keeps only the p1 term.
double studentized_ee_cdf(double x, std::size_t n, const StudentizedEEParams& params,
                          int order);

}  // namespace blockboot

#endif  // BLOCKBOOT_EDGEWORTH_HPP_

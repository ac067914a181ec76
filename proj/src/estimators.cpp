#include "blockboot/estimators.hpp"

#include <cmath>

namespace blockboot {

std::string variance_method_name(VarianceMethod m) {
    switch (m) {
        case VarianceMethod::kMbb: return "mbb";
        case VarianceMethod::kNbb: return "nbb";
        case VarianceMethod::kLagWindow: return "lag_window";
    }
    throw ValidationError("variance_method_name: unknown tag");
}

double sample_autocov(std::span<const double> xs, std::size_t k) {
    const std::size_t n = xs.size();
    if (n < 1) throw ValidationError("sample_autocov: empty series");
    if (k >= n) throw ValidationError("sample_autocov: lag k must satisfy k <= n-1");
    const double xbar = mean_of(xs);
    double s = 0.0;
    for (std::size_t i = 0; i + k < n; ++i) s += xs[i] * xs[i + k];
    return s / static_cast<double>(n) - xbar * xbar;
}

double spectral_estimate(std::span<const double> xs, std::size_t ell,
                         std::span<const double> weights, double lambda) {
    if (!(lambda > -kPi && lambda < kPi))
        throw ValidationError("spectral_estimate: lambda must lie in (-pi, pi)");
    if (ell + 1 > xs.size())
        throw ValidationError("spectral_estimate: need ell <= n-1");
    if (weights.size() != ell + 1)
        throw ValidationError("spectral_estimate: weight vector must have ell+1 entries");
    double s = 0.0;
    for (std::size_t k = 0; k <= ell; ++k)
        s += weights[k] * sample_autocov(xs, k) * std::cos(static_cast<double>(k) * lambda);
    return s / (2.0 * kPi);
}

BlockVariables center_block_vars(const BlockVariables& bv,
                                 std::optional<double> population_mean) {
    if (bv.centered) throw ValidationError("center_block_vars: already centered");
    double c;
    if (population_mean) {
        c = *population_mean;
        if (!std::isfinite(c)) throw ValidationError("center_block_vars: non-finite mean");
    } else {
        c = mean_of(bv.values);
    }
    BlockVariables out;
    out.config = bv.config;
    out.values.resize(bv.values.size());
    for (std::size_t i = 0; i < bv.values.size(); ++i) out.values[i] = bv.values[i] - c;
    out.centered = true;
    out.centering_constant = c;
    return out;
}

namespace {

double int_pow(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

}  // namespace

double mbb_moment(std::span<const double> xs, std::size_t ell, int nu) {
    if (nu < 1) throw ValidationError("mbb_moment: |nu| must be >= 1");
    const BlockConfig cfg = BlockConfig::make(xs.size(), ell);
    const std::size_t num = cfg.num_overlapping();
    const double root_ell = std::sqrt(static_cast<double>(ell));

    double acc = 0.0;
    double window = 0.0;
    for (std::size_t i = 0; i < num; ++i) {
        if (i % ell == 0) {
            window = 0.0;
            for (std::size_t m = 0; m < ell; ++m) window += xs[i + m];
        } else {
            window += xs[i + ell - 1] - xs[i - 1];
        }
        acc += int_pow(window / root_ell, nu);
    }
    return acc / static_cast<double>(num);
}

VarianceEstimate mbb_variance(std::span<const double> xs, std::size_t ell) {
    const BlockConfig cfg = BlockConfig::make(xs.size(), ell);
    const std::size_t num = cfg.num_overlapping();
    const double root_ell = std::sqrt(static_cast<double>(ell));

    double s1 = 0.0, s2 = 0.0;
    double window = 0.0;
    for (std::size_t i = 0; i < num; ++i) {
        if (i % ell == 0) {
            window = 0.0;
            for (std::size_t m = 0; m < ell; ++m) window += xs[i + m];
        } else {
            window += xs[i + ell - 1] - xs[i - 1];
        }
        const double u = window / root_ell;
        s1 += u;
        s2 += u * u;
    }
    const double inv_num = 1.0 / static_cast<double>(num);
    const double value = (s2 * inv_num - (s1 * inv_num) * (s1 * inv_num)) /
                         static_cast<double>(cfg.n);
    return VarianceEstimate{value < 0.0 ? 0.0 : value, VarianceMethod::kMbb, false};
}

VarianceEstimate nbb_variance(std::span<const double> xs, std::size_t ell) {
    const BlockConfig cfg = BlockConfig::make(xs.size(), ell);
    if (!cfg.divides())
        throw ValidationError("nbb_variance: block length must divide n");
    const std::size_t b = cfg.n / ell;
    const double root_ell = std::sqrt(static_cast<double>(ell));

    std::vector<double> u(b);
    for (std::size_t i = 0; i < b; ++i) {
        double s = 0.0;
        for (std::size_t m = 0; m < ell; ++m) s += xs[i * ell + m];
        u[i] = s / root_ell;
    }
    const double raw = variance_of(u);
    const double floor = 1.0 / static_cast<double>(cfg.n);
    const bool truncated = raw < floor;
    return VarianceEstimate{truncated ? floor : raw, VarianceMethod::kNbb, truncated};
}

StudentizedStat studentized_mean(std::span<const double> xs, std::size_t ell, double mu) {
    const VarianceEstimate v = nbb_variance(xs, ell);
    const double n = static_cast<double>(xs.size());
    const double num = std::sqrt(n) * (mean_of(xs) - mu);
    const double den = std::sqrt(v.value);
    return StudentizedStat{num / den, num, den};
}

VarianceEstimate lag_window_variance(const BlockVariables& bv) {
    const BlockConfig& cfg = bv.config;
    const std::size_t num = cfg.num_overlapping();
    if (bv.values.size() != num)
        throw ValidationError("lag_window_variance: blockvars inconsistent with config");
    if (2 * cfg.ell > num - 1)
        throw ValidationError("lag_window_variance: need 2*ell <= N-1");

    const double inv_num = 1.0 / static_cast<double>(num);
    const double ybar = mean_of(bv.values);

    auto gamma0 = [&](std::size_t k) {
        double s = 0.0;
        for (std::size_t i = 0; i + k < num; ++i)
            s += (bv.values[i] - ybar) * (bv.values[i + k] - ybar);
        return s * inv_num;
    };

    double bracket = gamma0(0);
    for (std::size_t k = 1; k <= 2 * cfg.ell; ++k)
        bracket += 2.0 * (1.0 - static_cast<double>(k) * inv_num) * gamma0(k);

    const double raw = bracket * static_cast<double>(cfg.num_nonoverlapping()) * inv_num;
    const double floor = 1.0 / static_cast<double>(cfg.n);
    const bool truncated = raw < floor;
    return VarianceEstimate{truncated ? floor : raw, VarianceMethod::kLagWindow, truncated};
}

StudentizedStat studentized_block_mean(const BlockVariables& bv, double true_mean) {
    const VarianceEstimate v = lag_window_variance(bv);
    const double b = static_cast<double>(bv.config.num_nonoverlapping());
    const double num = std::sqrt(b) * (mean_of(bv.values) - true_mean);
    const double den = std::sqrt(v.value);
    return StudentizedStat{num / den, num, den};
}

}  // namespace blockboot

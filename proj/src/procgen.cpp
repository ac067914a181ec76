#include "blockboot/procgen.hpp"

#include <algorithm>
#include <cmath>

#include "blockboot/rng.hpp"

namespace blockboot {

std::string innovation_name(Innovation innov) {
    switch (innov) {
        case Innovation::kNormal: return "normal";
        case Innovation::kCenteredExponential: return "centered_exponential";
        case Innovation::kUniform: return "uniform";
    }
    throw ValidationError("innovation_name: unknown tag");
}

Innovation innovation_from_name(const std::string& name) {
    if (name == "normal") return Innovation::kNormal;
    if (name == "centered_exponential") return Innovation::kCenteredExponential;
    if (name == "uniform") return Innovation::kUniform;
    throw ValidationError("unknown innovation: " + name);
}

std::string window_map_name(WindowMap h) {
    switch (h) {
        case WindowMap::kIdentityFirst: return "identity";
        case WindowMap::kSum: return "sum";
        case WindowMap::kProduct: return "product";
        case WindowMap::kConstant: return "constant";
    }
    throw ValidationError("window_map_name: unknown tag");
}

WindowMap window_map_from_name(const std::string& name) {
    if (name == "identity") return WindowMap::kIdentityFirst;
    if (name == "sum") return WindowMap::kSum;
    if (name == "product") return WindowMap::kProduct;
    if (name == "constant") return WindowMap::kConstant;
    throw ValidationError("unknown window map: " + name);
}

void LinearProcessSpec::validate() const {
    if (coeffs.empty()) throw ValidationError("linear spec: empty coefficient list");
    double sum = 0.0;
    for (double a : coeffs) {
        if (!std::isfinite(a)) throw ValidationError("linear spec: non-finite coefficient");
        sum += a;
    }
    if (sum == 0.0) throw ValidationError("linear spec: coefficients sum to zero");
    if (!(innov_variance > 0.0)) throw ValidationError("linear spec: innov_variance must be > 0");
}

void MDependentSpec::validate() const {
    if (m0 < 1) throw ValidationError("m-dependent spec: m0 must be >= 1");
    if (!(innov_variance > 0.0)) throw ValidationError("m-dependent spec: innov_variance must be > 0");
    if (!std::isfinite(h_constant)) throw ValidationError("m-dependent spec: non-finite h_constant");
}

ProcessTruth::ProcessTruth(std::vector<double> gamma_by_lag) : gamma_(std::move(gamma_by_lag)) {
    if (gamma_.empty()) throw ValidationError("ProcessTruth: empty gamma");
    double tail = 0.0, weighted = 0.0;
    for (std::size_t k = 1; k < gamma_.size(); ++k) {
        tail += gamma_[k];
        weighted += static_cast<double>(k) * gamma_[k];
    }
    sigma_inf_sq_ = gamma_[0] + 2.0 * tail;
    weighted_gamma_sum_ = weighted;
}

double ProcessTruth::gamma(long k) const {
    const std::size_t a = static_cast<std::size_t>(k < 0 ? -k : k);
    return a < gamma_.size() ? gamma_[a] : 0.0;
}

double ProcessTruth::spectral(double omega) const {
    double s = gamma_[0];
    for (std::size_t k = 1; k < gamma_.size(); ++k)
        s += 2.0 * gamma_[k] * std::cos(static_cast<double>(k) * omega);
    return s / (2.0 * kPi);
}

namespace {

double draw_innovation(SplitMix64& rng, Innovation innov, double scale) {
    switch (innov) {
        case Innovation::kNormal: return scale * rng.next_normal();
        case Innovation::kCenteredExponential: return scale * (rng.next_exponential() - 1.0);
        case Innovation::kUniform: return scale * rng.next_uniform_sym();
    }
    throw ValidationError("draw_innovation: unknown tag");
}

}  // namespace

TimeSeries gen_linear(const LinearProcessSpec& spec, std::size_t n, std::uint64_t seed) {
    spec.validate();
    if (n < 1) throw ValidationError("gen_linear: n must be >= 1");

    const std::size_t j_max = spec.coeffs.size() - 1;
    const double scale = std::sqrt(spec.innov_variance);

    SplitMix64 rng(seed);
    // eps[t] holds innovation e_{t - j_max + 1}; the first j_max draws are the
    // burn-in making X_1 already a full-window sum.
    std::vector<double> eps(n + j_max);
    for (auto& e : eps) e = draw_innovation(rng, spec.innov, scale);

    TimeSeries ts;
    ts.seed = seed;
    ts.values.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        double x = 0.0;
        for (std::size_t i = 0; i <= j_max; ++i) x += spec.coeffs[i] * eps[j + j_max - i];
        ts.values[j] = x;
    }
    ts.truth = derive_truth(spec);
    return ts;
}

TimeSeries gen_m_dependent(const MDependentSpec& spec, std::size_t n, std::uint64_t seed) {
    spec.validate();
    if (n < 1) throw ValidationError("gen_m_dependent: n must be >= 1");

    const std::size_t m0 = static_cast<std::size_t>(spec.m0);
    const double scale = std::sqrt(spec.innov_variance);

    SplitMix64 rng(seed);
    std::vector<double> eps(n + m0 - 1);
    for (auto& e : eps) e = draw_innovation(rng, spec.innov, scale);

    // Centering constants are analytic for the whole menu: the innovations
    // have mean zero and are independent, so E h = 0 for identity, sum and
    // product, and E h = c for the constant map.
    double center = 0.0;
    if (spec.h == WindowMap::kConstant) center = spec.h_constant;

    TimeSeries ts;
    ts.seed = seed;
    ts.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double h = 0.0;
        switch (spec.h) {
            case WindowMap::kIdentityFirst:
                h = eps[i];
                break;
            case WindowMap::kSum:
                for (std::size_t j = 0; j < m0; ++j) h += eps[i + j];
                break;
            case WindowMap::kProduct:
                h = 1.0;
                for (std::size_t j = 0; j < m0; ++j) h *= eps[i + j];
                break;
            case WindowMap::kConstant:
                h = spec.h_constant;
                break;
        }
        ts.values[i] = h - center;
    }
    ts.truth = derive_truth(spec);
    return ts;
}

ProcessTruth derive_truth(const LinearProcessSpec& spec) {
    spec.validate();
    const std::size_t j_max = spec.coeffs.size() - 1;
    std::vector<double> gamma(j_max + 1, 0.0);
    for (std::size_t k = 0; k <= j_max; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i + k <= j_max; ++i) s += spec.coeffs[i] * spec.coeffs[i + k];
        gamma[k] = spec.innov_variance * s;
    }
    return ProcessTruth(std::move(gamma));
}

ProcessTruth derive_truth(const MDependentSpec& spec) {
    spec.validate();
    const std::size_t m0 = static_cast<std::size_t>(spec.m0);
    switch (spec.h) {
        case WindowMap::kIdentityFirst:
            return ProcessTruth({spec.innov_variance});
        case WindowMap::kSum: {
            // Same second-order structure as the linear process with
            // coefficients (1,...,1) of length m0.
            std::vector<double> gamma(m0, 0.0);
            for (std::size_t k = 0; k < m0; ++k)
                gamma[k] = spec.innov_variance * static_cast<double>(m0 - k);
            return ProcessTruth(std::move(gamma));
        }
        case WindowMap::kProduct: {
            // Lagged windows share fewer than m0 factors; any unshared factor
            // has mean zero, so gamma(k) = 0 for k >= 1.
            std::vector<double> gamma(1, std::pow(spec.innov_variance, static_cast<double>(m0)));
            return ProcessTruth(std::move(gamma));
        }
        case WindowMap::kConstant:
            return ProcessTruth({0.0});
    }
    throw ValidationError("derive_truth: unknown window map");
}

double expected_scaled_block_second_moment(const ProcessTruth& truth, std::size_t ell) {
    if (ell < 1) throw ValidationError("expected_scaled_block_second_moment: ell >= 1");
    const double ellf = static_cast<double>(ell);
    double s = truth.gamma(0);
    const long top = std::min<long>(static_cast<long>(ell) - 1, truth.max_lag());
    for (long k = 1; k <= top; ++k)
        s += 2.0 * (1.0 - static_cast<double>(k) / ellf) * truth.gamma(k);
    return s;
}

double expected_periodogram_mean(const ProcessTruth& truth, std::size_t ell, double omega) {
    if (ell < 1) throw ValidationError("expected_periodogram_mean: ell >= 1");
    const double ellf = static_cast<double>(ell);
    double s = truth.gamma(0);
    const long top = std::min<long>(static_cast<long>(ell) - 1, truth.max_lag());
    for (long k = 1; k <= top; ++k)
        s += 2.0 * (1.0 - static_cast<double>(k) / ellf) * truth.gamma(k) *
             std::cos(static_cast<double>(k) * omega);
    return s / (2.0 * kPi);
}

}  // namespace blockboot

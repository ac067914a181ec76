#include "blockboot/blocks.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>

namespace blockboot {

BlockConfig BlockConfig::make(std::size_t n, std::size_t ell) {
    if (n < 1) throw ValidationError("BlockConfig: n must be >= 1");
    if (ell < 1 || ell > n) throw ValidationError("BlockConfig: need 1 <= ell <= n");
    return BlockConfig{n, ell};
}

OverlappingBlocks::OverlappingBlocks(std::span<const double> xs, std::size_t ell)
    : xs_(xs), config_(BlockConfig::make(xs.size(), ell)) {}

OverlappingBlocks overlapping_blocks(std::span<const double> xs, std::size_t ell) {
    return OverlappingBlocks(xs, ell);
}

BlockFunctional BlockFunctional::scaled_sum() {
    return BlockFunctional{};
}

BlockFunctional BlockFunctional::power_of_scaled_sum(int nu) {
    if (nu < 1) throw ValidationError("power functional: |nu| must be >= 1");
    BlockFunctional f;
    f.tag = Tag::kPower;
    f.power = nu;
    return f;
}

BlockFunctional BlockFunctional::periodogram(double omega) {
    if (!(omega >= -kPi && omega <= kPi))
        throw ValidationError("periodogram functional: omega must lie in [-pi, pi]");
    BlockFunctional f;
    f.tag = Tag::kPeriodogram;
    f.omega = omega;
    return f;
}

BlockFunctional BlockFunctional::weighted_cosine(double lambda, std::vector<double> weights) {
    if (weights.empty()) throw ValidationError("weighted_cosine functional: empty weights");
    BlockFunctional f;
    f.tag = Tag::kWeightedCosine;
    f.lambda = lambda;
    f.weights = std::move(weights);
    return f;
}

std::string BlockFunctional::name() const {
    switch (tag) {
        case Tag::kScaledSum: return "scaled_sum";
        case Tag::kPower: return "power";
        case Tag::kPeriodogram: return "periodogram";
        case Tag::kWeightedCosine: return "weighted_cosine";
    }
    throw ValidationError("BlockFunctional::name: unknown tag");
}

namespace {

double int_pow(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

}  // namespace

double BlockFunctional::evaluate(std::span<const double> block, std::size_t position) const {
    const std::size_t ell = block.size();
    switch (tag) {
        case Tag::kScaledSum:
        case Tag::kPower: {
            double s = 0.0;
            for (double v : block) s += v;
            const double u = s / std::sqrt(static_cast<double>(ell));
            return tag == Tag::kScaledSum ? u : int_pow(u, power);
        }
        case Tag::kPeriodogram: {
            // 1-based absolute index in the phase, matching the display; the
            // common phase factor drops out of the modulus anyway.
            std::complex<double> c(0.0, 0.0);
            for (std::size_t m = 0; m < ell; ++m) {
                const double j = static_cast<double>(position + m + 1);
                c += block[m] * std::complex<double>(std::cos(j * omega), -std::sin(j * omega));
            }
            return std::norm(c) / (2.0 * kPi * static_cast<double>(ell));
        }
        case Tag::kWeightedCosine: {
            if (weights.size() > ell)
                throw ValidationError("weighted_cosine: more weights than block entries");
            double s = 0.0;
            for (std::size_t k = 0; k < weights.size(); ++k)
                s += weights[k] * block[k] * std::cos(static_cast<double>(k) * lambda);
            return block[0] * s;
        }
    }
    throw ValidationError("BlockFunctional::evaluate: unknown tag");
}

BlockVariables eval_block_functional(std::span<const double> xs, std::size_t ell,
                                     const BlockFunctional& fn) {
    const BlockConfig cfg = BlockConfig::make(xs.size(), ell);
    const std::size_t num = cfg.num_overlapping();

    BlockVariables bv;
    bv.config = cfg;
    bv.values.resize(num);

    switch (fn.tag) {
        case BlockFunctional::Tag::kScaledSum:
        case BlockFunctional::Tag::kPower: {
            // Sliding window; refresh the running sum every ell steps to stop
            // cancellation drift from accumulating.
            const double root_ell = std::sqrt(static_cast<double>(ell));
            double window = 0.0;
            for (std::size_t i = 0; i < num; ++i) {
                if (i % ell == 0) {
                    window = 0.0;
                    for (std::size_t m = 0; m < ell; ++m) window += xs[i + m];
                } else {
                    window += xs[i + ell - 1] - xs[i - 1];
                }
                const double u = window / root_ell;
                bv.values[i] =
                    fn.tag == BlockFunctional::Tag::kScaledSum ? u : int_pow(u, fn.power);
            }
            break;
        }
        case BlockFunctional::Tag::kPeriodogram: {
            const double w = fn.omega;
            const double scale = 1.0 / (2.0 * kPi * static_cast<double>(ell));
            std::complex<double> c(0.0, 0.0);
            auto phase = [w](std::size_t idx0) {
                const double j = static_cast<double>(idx0 + 1);
                return std::complex<double>(std::cos(j * w), -std::sin(j * w));
            };
            for (std::size_t i = 0; i < num; ++i) {
                if (i % ell == 0) {
                    c = {0.0, 0.0};
                    for (std::size_t m = 0; m < ell; ++m) c += xs[i + m] * phase(i + m);
                } else {
                    c += xs[i + ell - 1] * phase(i + ell - 1) - xs[i - 1] * phase(i - 1);
                }
                bv.values[i] = std::norm(c) * scale;
            }
            break;
        }
        case BlockFunctional::Tag::kWeightedCosine: {
            for (std::size_t i = 0; i < num; ++i)
                bv.values[i] = fn.evaluate(xs.subspan(i, ell), i);
            break;
        }
    }
    return bv;
}

NonoverlapMeans nonoverlap_block_means(std::span<const double> xs, const BlockVariables& bv) {
    const BlockConfig& cfg = bv.config;
    if (xs.size() != cfg.n)
        throw ValidationError("nonoverlap_block_means: series/blockvars length mismatch");
    if (bv.values.size() != cfg.num_overlapping())
        throw ValidationError("nonoverlap_block_means: blockvars not built on this config");

    const std::size_t b = cfg.num_nonoverlapping();
    const std::size_t num = cfg.num_overlapping();
    const double ell = static_cast<double>(cfg.ell);
    const double root_ell = std::sqrt(ell);

    NonoverlapMeans out;
    out.x_scaled.resize(b);
    out.y_mean.resize(b);
    for (std::size_t k = 0; k < b; ++k) {
        const std::size_t lo = k * cfg.ell;                       // (k-1)l+1, 0-based
        const std::size_t hi = std::min((k + 1) * cfg.ell, cfg.n);  // kl ^ n
        double sx = 0.0, sy = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            sx += xs[i];
            if (i < num) sy += bv.values[i];  // Y_in = 0 beyond N
        }
        out.x_scaled[k] = root_ell * (sx / ell);
        out.y_mean[k] = sy / ell;
    }
    return out;
}

ScaledSum scaled_sum(std::span<const double> xs, const BlockVariables& bv) {
    const BlockConfig& cfg = bv.config;
    if (xs.size() != cfg.n)
        throw ValidationError("scaled_sum: series/blockvars length mismatch");
    if (!bv.centered)
        throw ValidationError("scaled_sum: block variables must be centered first");

    double sx = 0.0;
    for (double v : xs) sx += v;
    double sy = 0.0;
    for (double v : bv.values) sy += v;

    ScaledSum s;
    s.s1 = sx / std::sqrt(static_cast<double>(cfg.n));
    s.s2 = sy / std::sqrt(static_cast<double>(cfg.n) * static_cast<double>(cfg.ell));
    return s;
}

void export_block_variables_csv(const BlockVariables& bv, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("export_block_variables_csv: cannot open " + path);
    out << "i,y_1\n";
    char buf[40];
    for (std::size_t i = 0; i < bv.values.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", bv.values[i]);
        out << (i + 1) << ',' << buf << '\n';
    }
}

}  // namespace blockboot

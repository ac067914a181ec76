#include "blockboot/resample.hpp"

#include <algorithm>
#include <cmath>

namespace blockboot {

std::string scheme_name(ResampleScheme s) {
    switch (s) {
        case ResampleScheme::kMbb: return "mbb";
        case ResampleScheme::kNbb: return "nbb";
        case ResampleScheme::kBobb: return "bobb";
    }
    throw ValidationError("scheme_name: unknown tag");
}

ResampleScheme scheme_from_name(const std::string& name) {
    if (name == "mbb") return ResampleScheme::kMbb;
    if (name == "nbb") return ResampleScheme::kNbb;
    if (name == "bobb") return ResampleScheme::kBobb;
    throw ValidationError("unknown resampling scheme: " + name);
}

Statistic make_statistic(const std::string& tag, const StatisticParams& params) {
    if (tag == "mean") {
        return [](std::span<const double> xs) { return mean_of(xs); };
    }
    if (tag == "mbb-var") {
        const std::size_t ell = params.ell;
        if (ell < 1) throw ValidationError("statistic mbb-var: needs ell >= 1");
        return [ell](std::span<const double> xs) { return mbb_variance(xs, ell).value; };
    }
    if (tag == "studentized-mean") {
        const std::size_t ell = params.ell;
        const double mu = params.mu;
        if (ell < 1) throw ValidationError("statistic studentized-mean: needs ell >= 1");
        return [ell, mu](std::span<const double> xs) {
            return studentized_mean(xs, ell, mu).value;
        };
    }
    if (tag == "bobb-studentized") {
        const std::size_t ell1 = params.ell1;
        const double center = params.bobb_center;
        const std::size_t n = params.n;
        if (ell1 < 1 || n < 1)
            throw ValidationError("statistic bobb-studentized: needs ell1 and n");
        return [ell1, center, n](std::span<const double> ystar) {
            return bobb_studentized(ystar, ell1, center, n).value;
        };
    }
    throw ValidationError("unknown statistic tag: " + tag);
}

bool statistic_known(const std::string& tag) {
    return tag == "mean" || tag == "mbb-var" || tag == "studentized-mean" ||
           tag == "bobb-studentized";
}

void ResamplePlan::validate() const {
    if (replicates < 1) throw ValidationError("resample plan: B must be >= 1");
    if (block_len < 1) throw ValidationError("resample plan: block length must be >= 1");
    if (!statistic_known(statistic))
        throw ValidationError("resample plan: unknown statistic tag: " + statistic);
    if (scheme == ResampleScheme::kBobb && !functional)
        throw ValidationError("resample plan: bobb needs a block functional");
}

double BootstrapDistribution::quantile(double p) const {
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("quantile: p outside [0,1]");
    if (is_exact) {
        if (atoms.empty()) throw ValidationError("quantile: empty distribution");
        double acc = 0.0;
        for (const Atom& a : atoms) {
            acc += a.prob;
            if (acc >= p - 1e-15) return a.value;
        }
        return atoms.back().value;
    }
    if (samples.empty()) throw ValidationError("quantile: empty distribution");
    std::vector<double> sorted(samples);
    std::sort(sorted.begin(), sorted.end());
    // type-7 interpolation
    const double h = p * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - std::floor(h);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double BootstrapDistribution::cdf_at(double x) const {
    if (!is_exact) throw ValidationError("cdf_at: only available in exact mode");
    double acc = 0.0;
    for (const Atom& a : atoms) {
        if (a.value <= x) acc += a.prob;
        else break;
    }
    return acc;
}

double BootstrapDistribution::exact_mean() const {
    if (!is_exact) throw ValidationError("exact_mean: only available in exact mode");
    double m = 0.0;
    for (const Atom& a : atoms) m += a.value * a.prob;
    return m;
}

double BootstrapDistribution::exact_variance() const {
    const double m = exact_mean();
    double v = 0.0;
    for (const Atom& a : atoms) v += (a.value - m) * (a.value - m) * a.prob;
    return v;
}

namespace {

// Uniform index in {0, ..., bound-1} by scaling; bound is far below 2^53 so
// the bias is < 2^-40 per draw.
std::size_t draw_index(SplitMix64& rng, std::size_t bound) {
    return static_cast<std::size_t>(rng.next_unit() * static_cast<double>(bound));
}

}  // namespace

std::vector<double> mbb_resample(std::span<const double> xs, std::size_t ell, SplitMix64& rng) {
    const BlockConfig cfg = BlockConfig::make(xs.size(), ell);
    if (!cfg.divides()) throw ValidationError("mbb_resample: block length must divide n");
    const std::size_t b = cfg.n / ell;
    const std::size_t num = cfg.num_overlapping();

    std::vector<double> out;
    out.reserve(cfg.n);
    for (std::size_t k = 0; k < b; ++k) {
        const std::size_t start = draw_index(rng, num);
        for (std::size_t m = 0; m < ell; ++m) out.push_back(xs[start + m]);
    }
    return out;
}

std::vector<double> nbb_resample(std::span<const double> xs, std::size_t ell, SplitMix64& rng) {
    const BlockConfig cfg = BlockConfig::make(xs.size(), ell);
    if (!cfg.divides()) throw ValidationError("nbb_resample: block length must divide n");
    const std::size_t b = cfg.n / ell;

    std::vector<double> out;
    out.reserve(cfg.n);
    for (std::size_t k = 0; k < b; ++k) {
        const std::size_t block = draw_index(rng, b);
        for (std::size_t m = 0; m < ell; ++m) out.push_back(xs[block * ell + m]);
    }
    return out;
}

std::vector<double> bobb_resample(const BlockVariables& bv, std::size_t ell1, SplitMix64& rng) {
    const std::size_t num = bv.values.size();
    if (ell1 < 1 || ell1 > num)
        throw ValidationError("bobb_resample: need 1 <= ell1 <= N");
    if (num % ell1 != 0)
        throw ValidationError("bobb_resample: ell1 must divide N");
    const std::size_t b1 = num / ell1;
    const std::size_t candidates = num - ell1 + 1;

    std::vector<double> out;
    out.reserve(num);
    for (std::size_t k = 0; k < b1; ++k) {
        const std::size_t start = draw_index(rng, candidates);
        for (std::size_t m = 0; m < ell1; ++m) out.push_back(bv.values[start + m]);
    }
    return out;
}

double bobb_conditional_mean(const BlockVariables& bv, std::size_t ell1) {
    const std::size_t num = bv.values.size();
    if (ell1 < 1 || ell1 > num)
        throw ValidationError("bobb_conditional_mean: need 1 <= ell1 <= N");
    const std::size_t candidates = num - ell1 + 1;
    // Sliding sum over start positions; O(N).
    double window = 0.0;
    for (std::size_t m = 0; m < ell1; ++m) window += bv.values[m];
    double acc = window;
    for (std::size_t i = 1; i < candidates; ++i) {
        window += bv.values[i + ell1 - 1] - bv.values[i - 1];
        acc += window;
    }
    return acc / (static_cast<double>(candidates) * static_cast<double>(ell1));
}

StudentizedStat bobb_studentized(std::span<const double> ystar, std::size_t ell1,
                                 double conditional_mean, std::size_t n) {
    const std::size_t num = ystar.size();
    if (ell1 < 1 || num % ell1 != 0)
        throw ValidationError("bobb_studentized: length must be a multiple of ell1");
    if (n < 1) throw ValidationError("bobb_studentized: need original n for the floor");
    const std::size_t b1 = num / ell1;

    std::vector<double> block_means(b1);
    for (std::size_t i = 0; i < b1; ++i) {
        double s = 0.0;
        for (std::size_t m = 0; m < ell1; ++m) s += ystar[i * ell1 + m];
        block_means[i] = s / static_cast<double>(ell1);
    }
    const double ybar = mean_of(block_means);
    const double raw = variance_of(block_means);
    const double floor = 1.0 / static_cast<double>(n);
    const double var = raw < floor ? floor : raw;

    const double numer = std::sqrt(static_cast<double>(b1)) * (ybar - conditional_mean);
    const double denom = std::sqrt(var);
    return StudentizedStat{numer / denom, numer, denom};
}

BootstrapDistribution bootstrap_distribution(const ResamplePlan& plan,
                                             std::span<const double> xs,
                                             unsigned threads) {
    plan.validate();
    const Statistic stat = make_statistic(plan.statistic, plan.statistic_params);

    // bobb operates on block variables; build them once from the series.
    BlockVariables bv;
    if (plan.scheme == ResampleScheme::kBobb) {
        if (plan.functional_ell < 1)
            throw ValidationError("bootstrap_distribution: bobb needs functional_ell");
        bv = eval_block_functional(xs, plan.functional_ell, *plan.functional);
    }

    BootstrapDistribution dist;
    dist.is_exact = false;
    dist.samples.resize(plan.replicates);
    parallel_for_indexed(plan.replicates, threads, [&](std::size_t r) {
        SplitMix64 rng(derive_seed(plan.master_seed, seed_domain::kBootstrapReplicate, r));
        switch (plan.scheme) {
            case ResampleScheme::kMbb: {
                const std::vector<double> res = mbb_resample(xs, plan.block_len, rng);
                dist.samples[r] = stat(res);
                break;
            }
            case ResampleScheme::kNbb: {
                const std::vector<double> res = nbb_resample(xs, plan.block_len, rng);
                dist.samples[r] = stat(res);
                break;
            }
            case ResampleScheme::kBobb: {
                const std::vector<double> res = bobb_resample(bv, plan.block_len, rng);
                dist.samples[r] = stat(res);
                break;
            }
        }
    });
    return dist;
}

BootstrapDistribution exact_enumeration(std::span<const double> xs, std::size_t ell,
                                        const Statistic& statistic) {
    const BlockConfig cfg = BlockConfig::make(xs.size(), ell);
    if (!cfg.divides()) throw ValidationError("exact_enumeration: block length must divide n");
    const std::size_t b = cfg.n / ell;
    const std::size_t num = cfg.num_overlapping();

    double outcomes = 1.0;
    for (std::size_t k = 0; k < b; ++k) {
        outcomes *= static_cast<double>(num);
        if (outcomes > 1e6)
            throw ValidationError("exact_enumeration: N^b exceeds the 10^6 cap");
    }
    const std::size_t total = static_cast<std::size_t>(outcomes);

    std::vector<std::size_t> digits(b, 0);
    std::vector<double> resampled(cfg.n);
    std::vector<double> values;
    values.reserve(total);
    for (std::size_t t = 0; t < total; ++t) {
        for (std::size_t k = 0; k < b; ++k) {
            const std::size_t start = digits[k];
            for (std::size_t m = 0; m < ell; ++m) resampled[k * ell + m] = xs[start + m];
        }
        values.push_back(statistic(resampled));
        // odometer increment
        for (std::size_t k = 0; k < b; ++k) {
            if (++digits[k] < num) break;
            digits[k] = 0;
        }
    }

    std::sort(values.begin(), values.end());
    BootstrapDistribution dist;
    dist.is_exact = true;
    const double p_each = 1.0 / static_cast<double>(total);
    for (std::size_t i = 0; i < values.size();) {
        std::size_t j = i;
        while (j < values.size() && values[j] == values[i]) ++j;
        dist.atoms.push_back(Atom{values[i], p_each * static_cast<double>(j - i)});
        i = j;
    }
    return dist;
}

}  // namespace blockboot

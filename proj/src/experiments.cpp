#include <chrono>
#include <cmath>

#include "blockboot/harness.hpp"

namespace blockboot {

namespace {

double elapsed_seconds(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

BlockFunctional functional_for(const ExperimentConfig& cfg) {
    if (cfg.statistic == "periodogram" || cfg.statistic == "periodogram_block_mean")
        return BlockFunctional::periodogram(cfg.omega);
    if (cfg.statistic == "power") return BlockFunctional::power_of_scaled_sum(cfg.nu);
    return BlockFunctional::scaled_sum();
}

// Analytic E Y for the built-in functionals of a mean-zero process.
double analytic_block_mean(const ExperimentConfig& cfg, const ProcessTruth& truth,
                           std::size_t ell) {
    const BlockFunctional fn = functional_for(cfg);
    switch (fn.tag) {
        case BlockFunctional::Tag::kScaledSum:
            return 0.0;
        case BlockFunctional::Tag::kPower:
            if (fn.power == 1) return 0.0;
            if (fn.power == 2) return expected_scaled_block_second_moment(truth, ell);
            throw ValidationError("analytic_block_mean: no closed form for power > 2");
        case BlockFunctional::Tag::kPeriodogram:
            return expected_periodogram_mean(truth, ell, fn.omega);
        default:
            throw ValidationError("analytic_block_mean: unsupported functional");
    }
}

}  // namespace

StudentizedEEParams estimate_studentized_moments(const ProcessConfig& process,
                                                 std::size_t n, std::size_t ell,
                                                 std::size_t replicates,
                                                 std::uint64_t seed, unsigned threads) {
    if (replicates < 2)
        throw ValidationError("estimate_studentized_moments: need >= 2 replicates");
    if (n % ell != 0)
        throw ValidationError("estimate_studentized_moments: ell must divide n");

    const ProcessTruth truth = process.truth();
    const double eu2 = expected_scaled_block_second_moment(truth, ell);
    const std::size_t b = n / ell;
    const double root_ell = std::sqrt(static_cast<double>(ell));

    std::vector<double> z2(replicates), z3(replicates), zv(replicates);
    parallel_for_indexed(replicates, threads, [&](std::size_t r) {
        const TimeSeries ts = process.generate(n, derive_seed(seed, seed_domain::kSideMc, r));
        const double z = std::sqrt(static_cast<double>(n)) * mean_of(ts.values);
        double v = 0.0;
        for (std::size_t i = 0; i < b; ++i) {
            double s = 0.0;
            for (std::size_t m = 0; m < ell; ++m) s += ts.values[i * ell + m];
            const double u = s / root_ell;
            v += u * u - eu2;
        }
        v /= std::sqrt(static_cast<double>(b));
        z2[r] = z * z;
        z3[r] = z * z * z;
        zv[r] = z * v;
    });

    StudentizedEEParams params;
    params.sigma_inf_sq = truth.sigma_inf_sq();
    params.weighted_gamma_sum = truth.weighted_gamma_sum();
    params.n = n;
    params.ell = ell;
    params.eu11_sq = eu2;
    params.ez2 = mean_of(z2);
    params.ez3 = mean_of(z3);
    params.ezv_scaled = root_ell * mean_of(zv);
    params.moment_source = MomentSource::kMcEstimated;
    params.mc_replicates = replicates;
    params.mc_seed = seed;
    return params;
}

double estimated_scalar_ops(const ExperimentConfig& cfg) {
    // Coarse flop-count model: generation ~ n(J+4), sliding functionals ~ 8n
    // (periodogram ~ 40n for the trig), lag-window variance ~ 2 ell N.
    const double gen = cfg.process.is_linear
                           ? static_cast<double>(cfg.process.linear.coeffs.size()) + 4.0
                           : static_cast<double>(cfg.process.mdep.m0) + 4.0;
    const bool periodogram = cfg.statistic.rfind("periodogram", 0) == 0;
    const double fn_cost = periodogram ? 40.0 : 8.0;
    const double groups = static_cast<double>(cfg.seed_groups);
    const double reps = static_cast<double>(cfg.replicates);
    const double inner = static_cast<double>(cfg.bootstrap_replicates);

    double total = 0.0;
    for (std::size_t idx = 0; idx < cfg.n_ladder.size(); ++idx) {
        const double n = static_cast<double>(cfg.n_ladder[idx]);
        switch (cfg.kind) {
            case ExperimentKind::kEe:
                total += groups * reps * n * (gen + 8.0);
                total += static_cast<double>(cfg.side_mc_replicates) * n * (gen + 8.0);
                break;
            case ExperimentKind::kSoc: {
                const LadderGeometry geom = resolve_soc_geometry(cfg, cfg.n_ladder[idx], idx);
                const double lag = 2.0 * static_cast<double>(geom.ell) * n;
                total += groups * (reps * (n * (gen + fn_cost) + lag) + inner * 6.0 * n);
                break;
            }
            case ExperimentKind::kMdev:
            case ExperimentKind::kMbbMoment:
                total += groups * reps * n * (gen + fn_cost);
                break;
        }
    }
    if (cfg.kind == ExperimentKind::kMdev || cfg.kind == ExperimentKind::kMbbMoment) {
        const double n_max = static_cast<double>(cfg.n_ladder.back());
        total += static_cast<double>(cfg.lambda_side_replicates) * n_max * (gen + fn_cost);
    }
    return total;
}

ExperimentResult ee_accuracy_experiment(const ExperimentConfig& cfg) {
    // The pipeline centers at the known population mean (zero for every
    // built-in process).
    const double mu = 0.0;

    ExperimentResult result;
    result.experiment = experiment_kind_name(cfg.kind);
    result.config_text = cfg.canonical_text();
    result.config_hash = cfg.config_hash();

    for (std::size_t idx = 0; idx < cfg.n_ladder.size(); ++idx) {
        const auto row_start = std::chrono::steady_clock::now();
        const std::size_t n = cfg.n_ladder[idx];
        const std::size_t ell = resolve_block_length(cfg, n, idx, /*need_divisor=*/true);

        // p2 ingredients are population constants: one side MC per ladder
        // point, shared by all seed groups, in its own seed namespace.
        StudentizedEEParams params = estimate_studentized_moments(
            cfg.process, n, ell, cfg.side_mc_replicates,
            derive_seed(cfg.master_seed, seed_domain::kSideMc, idx), cfg.threads);

        ExperimentRow row;
        row.n = n;
        row.ell = ell;
        row.center_used = mu;

        for (std::size_t g = 0; g < cfg.seed_groups; ++g) {
            GroupResult gr;
            gr.group_seed = derive_seed(cfg.master_seed, seed_domain::kSeedGroup, g);
            std::vector<double> t_samples(cfg.replicates);
            parallel_for_indexed(cfg.replicates, cfg.threads, [&](std::size_t r) {
                const TimeSeries ts = cfg.process.generate(
                    n, derive_seed(gr.group_seed, seed_domain::kOuterReplicate, r));
                t_samples[r] = studentized_mean(ts.values, ell, mu).value;
            });
            gr.ks_normal = ks_distance(t_samples, [](double x) { return normal_cdf(x); });
            gr.ks_ee = ks_distance(t_samples, [&](double x) {
                return studentized_ee_cdf(x, n, params, cfg.ee_order);
            });
            gr.hs_diag = moment_diagnostic_hs(t_samples, cfg.s);
            row.groups.push_back(gr);
        }
        result.rows.push_back(std::move(row));
        result.row_wall_seconds.push_back(elapsed_seconds(row_start));
    }
    return result;
}

ExperimentResult soc_experiment(const ExperimentConfig& cfg) {
    const ProcessTruth truth = cfg.process.truth();
    const BlockFunctional fn = functional_for(cfg);

    ExperimentResult result;
    result.experiment = experiment_kind_name(cfg.kind);
    result.config_text = cfg.canonical_text();
    result.config_hash = cfg.config_hash();

    // Geometry for the whole ladder is resolved (and validated) before any
    // simulation runs.
    std::vector<LadderGeometry> geometry;
    for (std::size_t idx = 0; idx < cfg.n_ladder.size(); ++idx)
        geometry.push_back(resolve_soc_geometry(cfg, cfg.n_ladder[idx], idx));

    for (std::size_t idx = 0; idx < cfg.n_ladder.size(); ++idx) {
        const auto row_start = std::chrono::steady_clock::now();
        const LadderGeometry geom = geometry[idx];
        const std::size_t n = geom.n;
        const double ey = analytic_block_mean(cfg, truth, geom.ell);
        const double root_b =
            std::sqrt(static_cast<double>(BlockConfig::make(n, geom.ell).num_nonoverlapping()));

        ExperimentRow row;
        row.n = n;
        row.ell = geom.ell;
        row.ell1 = geom.ell1;
        row.center_used = ey;

        for (std::size_t g = 0; g < cfg.seed_groups; ++g) {
            GroupResult gr;
            gr.group_seed = derive_seed(cfg.master_seed, seed_domain::kSeedGroup, g);

            // outer replicates estimate the population law of T_N
            std::vector<double> t_samples(cfg.replicates);
            parallel_for_indexed(cfg.replicates, cfg.threads, [&](std::size_t r) {
                const TimeSeries ts = cfg.process.generate(
                    n, derive_seed(gr.group_seed, seed_domain::kOuterReplicate, r));
                const BlockVariables bv = eval_block_functional(ts.values, geom.ell, fn);
                t_samples[r] = studentized_block_mean(bv, ey).value;
            });

            // BOBB law of T*_N on one held-out realization
            const TimeSeries held = cfg.process.generate(
                n, derive_seed(gr.group_seed, seed_domain::kHeldOut, 0));
            const BlockVariables held_bv = eval_block_functional(held.values, geom.ell, fn);
            const double estar = bobb_conditional_mean(held_bv, geom.ell1);
            std::vector<double> tstar(cfg.bootstrap_replicates);
            parallel_for_indexed(cfg.bootstrap_replicates, cfg.threads, [&](std::size_t r) {
                SplitMix64 rng(
                    derive_seed(gr.group_seed, seed_domain::kBootstrapReplicate, r));
                const std::vector<double> ystar = bobb_resample(held_bv, geom.ell1, rng);
                tstar[r] = bobb_studentized(ystar, geom.ell1, estar, n).value;
            });

            gr.ks_normal = ks_distance(t_samples, [](double x) { return normal_cdf(x); });
            gr.ks_boot = ks_two_sample(t_samples, tstar);
            gr.sqrt_b_ks_boot = root_b * gr.ks_boot;
            gr.hs_diag = moment_diagnostic_hs(t_samples, cfg.s);
            row.groups.push_back(gr);
        }
        result.rows.push_back(std::move(row));
        result.row_wall_seconds.push_back(elapsed_seconds(row_start));
    }
    return result;
}

namespace {

// Shared by mdev and mbbmom: the per-replicate deviation statistic.
struct DeviationPipeline {
    std::function<double(const TimeSeries&)> eval;
    double center = 0.0;  // recorded in the row
};

DeviationPipeline make_mdev_pipeline(const ExperimentConfig& cfg, const ProcessTruth& truth,
                                     std::size_t ell) {
    DeviationPipeline pipe;
    const BlockFunctional fn = functional_for(cfg);
    const double ey = analytic_block_mean(cfg, truth, ell);
    pipe.center = ey;
    pipe.eval = [fn, ell, ey](const TimeSeries& ts) {
        BlockVariables bv = eval_block_functional(ts.values, ell, fn);
        bv = center_block_vars(bv, ey);
        return scaled_sum(ts.values, bv).s2;
    };
    return pipe;
}

// side_salt keeps the centering MC streams of different ladder points in
// disjoint namespaces: seeds come from a per-purpose sub-master.
DeviationPipeline make_mbbmom_pipeline(const ExperimentConfig& cfg,
                                       const ProcessTruth& truth, std::size_t n,
                                       std::size_t ell, std::uint64_t side_salt,
                                       unsigned threads) {
    DeviationPipeline pipe;
    const double root_b =
        std::sqrt(static_cast<double>(BlockConfig::make(n, ell).num_nonoverlapping()));
    const std::uint64_t sub_master =
        derive_seed(cfg.master_seed, seed_domain::kSideMc, side_salt);

    if (cfg.statistic == "mbb_moment") {
        const int nu = cfg.nu;
        double center;
        if (nu == 1) {
            center = 0.0;
        } else if (nu == 2) {
            center = expected_scaled_block_second_moment(truth, ell);
        } else {
            // MC oracle: E mu_hat(nu) = E U^nu by stationarity.
            std::vector<double> vals(cfg.side_mc_replicates);
            parallel_for_indexed(cfg.side_mc_replicates, threads, [&](std::size_t r) {
                const TimeSeries ts = cfg.process.generate(
                    n, derive_seed(sub_master, seed_domain::kSideMc, r));
                vals[r] = mbb_moment(ts.values, ell, nu);
            });
            center = mean_of(vals);
        }
        pipe.center = center;
        pipe.eval = [nu, ell, center, root_b](const TimeSeries& ts) {
            return root_b * (mbb_moment(ts.values, ell, nu) - center);
        };
        return pipe;
    }

    // Corollary 3.1 variant: sqrt(b) * n * (sigma_hat^2 - E sigma_hat^2),
    // the centering constant from a side MC.
    std::vector<double> vals(cfg.side_mc_replicates);
    parallel_for_indexed(cfg.side_mc_replicates, threads, [&](std::size_t r) {
        const TimeSeries ts =
            cfg.process.generate(n, derive_seed(sub_master, seed_domain::kSideMc, r));
        vals[r] = mbb_variance(ts.values, ell).value;
    });
    const double center = mean_of(vals);
    pipe.center = center;
    const double nf = static_cast<double>(n);
    pipe.eval = [ell, center, root_b, nf](const TimeSeries& ts) {
        return root_b * nf * (mbb_variance(ts.values, ell).value - center);
    };
    return pipe;
}

ExperimentResult deviation_experiment(const ExperimentConfig& cfg) {
    const ProcessTruth truth = cfg.process.truth();
    const bool is_mbbmom = cfg.kind == ExperimentKind::kMbbMoment;

    ExperimentResult result;
    result.experiment = experiment_kind_name(cfg.kind);
    result.config_text = cfg.canonical_text();
    result.config_hash = cfg.config_hash();

    // The threshold scale lambda is fixed across the ladder: either the
    // analytic long-run variance or a side-MC estimate of the deviation
    // variance at the largest ladder point.
    const std::size_t n_top = cfg.n_ladder.back();
    const std::size_t ell_top =
        resolve_block_length(cfg, n_top, cfg.n_ladder.size() - 1, false);
    double lambda_hat;
    if (cfg.lambda_scale == "sigma_inf_sq") {
        lambda_hat = truth.sigma_inf_sq();
    } else {
        const DeviationPipeline top_pipe =
            is_mbbmom ? make_mbbmom_pipeline(cfg, truth, n_top, ell_top, 900, cfg.threads)
                      : make_mdev_pipeline(cfg, truth, ell_top);
        const std::uint64_t lambda_master =
            derive_seed(cfg.master_seed, seed_domain::kSideMc, 901);
        std::vector<double> side(cfg.lambda_side_replicates);
        parallel_for_indexed(cfg.lambda_side_replicates, cfg.threads, [&](std::size_t r) {
            const TimeSeries ts = cfg.process.generate(
                n_top, derive_seed(lambda_master, seed_domain::kSideMc, r));
            side[r] = top_pipe.eval(ts);
        });
        lambda_hat = variance_unbiased(side);
    }
    const double lambda = cfg.lambda_multiplier * lambda_hat;

    for (std::size_t idx = 0; idx < cfg.n_ladder.size(); ++idx) {
        const auto row_start = std::chrono::steady_clock::now();
        const std::size_t n = cfg.n_ladder[idx];
        const std::size_t ell = resolve_block_length(cfg, n, idx, false);
        const DeviationPipeline pipe =
            is_mbbmom ? make_mbbmom_pipeline(cfg, truth, n, ell, idx, cfg.threads)
                      : make_mdev_pipeline(cfg, truth, ell);

        ExperimentRow row;
        row.n = n;
        row.ell = ell;
        row.lambda_used = lambda;
        row.center_used = pipe.center;

        for (std::size_t g = 0; g < cfg.seed_groups; ++g) {
            GroupResult gr;
            gr.group_seed = derive_seed(cfg.master_seed, seed_domain::kSeedGroup, g);
            std::vector<double> dev(cfg.replicates);
            parallel_for_indexed(cfg.replicates, cfg.threads, [&](std::size_t r) {
                const TimeSeries ts = cfg.process.generate(
                    n, derive_seed(gr.group_seed, seed_domain::kOuterReplicate, r));
                dev[r] = pipe.eval(ts);
            });
            gr.mdev_stat = moderate_deviation_stat(dev, cfg.s, lambda, n);
            gr.hs_diag = moment_diagnostic_hs(dev, cfg.s);
            row.groups.push_back(gr);
        }
        result.rows.push_back(std::move(row));
        result.row_wall_seconds.push_back(elapsed_seconds(row_start));
    }
    return result;
}

}  // namespace

ExperimentResult mdev_experiment(const ExperimentConfig& cfg) {
    if (cfg.kind != ExperimentKind::kMdev)
        throw ValidationError("mdev_experiment: config kind mismatch");
    return deviation_experiment(cfg);
}

ExperimentResult mbb_moment_deviation_experiment(const ExperimentConfig& cfg) {
    if (cfg.kind != ExperimentKind::kMbbMoment)
        throw ValidationError("mbb_moment_deviation_experiment: config kind mismatch");
    return deviation_experiment(cfg);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, bool allow_large) {
    cfg.validate();
    const double ops = estimated_scalar_ops(cfg);
    if (ops > kOpsBudget && !allow_large) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "experiment refused: estimated %.3g scalar ops exceeds the %.1g "
                      "budget; pass --allow-large to run anyway",
                      ops, kOpsBudget);
        throw BudgetError(buf);
    }
    switch (cfg.kind) {
        case ExperimentKind::kEe: return ee_accuracy_experiment(cfg);
        case ExperimentKind::kSoc: return soc_experiment(cfg);
        case ExperimentKind::kMdev: return mdev_experiment(cfg);
        case ExperimentKind::kMbbMoment: return mbb_moment_deviation_experiment(cfg);
    }
    throw ValidationError("run_experiment: unknown experiment kind");
}

}  // namespace blockboot

// Command-line front end: simulate | estimate | bootstrap | edgeworth |
// experiment. Exit codes: 0 success, 2 validation error, 3 budget refusal.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "blockboot/edgeworth.hpp"
#include "blockboot/harness.hpp"
#include "blockboot/io.hpp"
#include "blockboot/resample.hpp"

namespace bb = blockboot;

namespace {

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t pos = 0;
        out.push_back(std::stod(item, &pos));
        if (pos != item.size())
            throw bb::ValidationError("bad numeric list entry: " + item);
    }
    if (out.empty()) throw bb::ValidationError("empty numeric list");
    return out;
}

void write_text(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw bb::ValidationError("cannot open output file: " + path);
    out << text;
}

struct SimulateOpts {
    std::string process = "linear";
    std::string coeffs = "1";
    std::string innov = "normal";
    double innov_variance = 1.0;
    int m0 = 1;
    std::string h = "identity";
    double h_constant = 0.0;
    std::size_t n = 100;
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "csv";
};

int run_simulate(const SimulateOpts& o) {
    bb::SeriesRecord rec;
    if (o.process == "linear") {
        bb::LinearProcessSpec spec;
        spec.coeffs = parse_double_list(o.coeffs);
        spec.innov = bb::innovation_from_name(o.innov);
        spec.innov_variance = o.innov_variance;
        rec.linear = spec;
        rec.series = bb::gen_linear(spec, o.n, o.seed);
    } else if (o.process == "m_dependent") {
        bb::MDependentSpec spec;
        spec.m0 = o.m0;
        spec.h = bb::window_map_from_name(o.h);
        spec.h_constant = o.h_constant;
        spec.innov = bb::innovation_from_name(o.innov);
        spec.innov_variance = o.innov_variance;
        rec.mdep = spec;
        rec.series = bb::gen_m_dependent(spec, o.n, o.seed);
    } else {
        throw bb::ValidationError("unknown process: " + o.process);
    }
    if (o.format == "csv") {
        if (o.out.empty() || o.out == "-") bb::write_series_csv(rec.series, std::cout);
        else bb::write_series_csv(rec.series, o.out);
    } else if (o.format == "json") {
        write_text(bb::series_to_json(rec), o.out);
    } else {
        throw bb::ValidationError("unknown format: " + o.format);
    }
    return 0;
}

struct EstimateOpts {
    std::string in;
    std::size_t k = 0;
    std::size_t ell = 1;
    std::string weights;
    double lambda = 0.0;
    int nu = 1;
    std::string functional = "scaled_sum";
    double omega = bb::kPi / 2.0;
    std::string out;
};

bb::BlockFunctional functional_from_flags(const EstimateOpts& o) {
    if (o.functional == "scaled_sum") return bb::BlockFunctional::scaled_sum();
    if (o.functional == "power") return bb::BlockFunctional::power_of_scaled_sum(o.nu);
    if (o.functional == "periodogram") return bb::BlockFunctional::periodogram(o.omega);
    if (o.functional == "weighted_cosine")
        return bb::BlockFunctional::weighted_cosine(o.lambda, parse_double_list(o.weights));
    throw bb::ValidationError("unknown functional: " + o.functional);
}

int run_estimate(const std::string& which, const EstimateOpts& o) {
    const bb::TimeSeries ts = bb::read_series_csv(o.in);
    nlohmann::ordered_json j;
    j["estimator"] = which;
    nlohmann::ordered_json params;
    double value = 0.0;
    bool truncated = false;

    if (which == "autocov") {
        params["k"] = o.k;
        value = bb::sample_autocov(ts.values, o.k);
    } else if (which == "spectral") {
        const std::vector<double> w = parse_double_list(o.weights);
        params["ell"] = o.ell;
        params["lambda"] = o.lambda;
        params["weights"] = w;
        value = bb::spectral_estimate(ts.values, o.ell, w, o.lambda);
    } else if (which == "mbb-moment") {
        params["ell"] = o.ell;
        params["nu"] = o.nu;
        value = bb::mbb_moment(ts.values, o.ell, o.nu);
    } else if (which == "mbb-var") {
        params["ell"] = o.ell;
        const bb::VarianceEstimate v = bb::mbb_variance(ts.values, o.ell);
        value = v.value;
        truncated = v.truncated;
    } else if (which == "nbb-var") {
        params["ell"] = o.ell;
        const bb::VarianceEstimate v = bb::nbb_variance(ts.values, o.ell);
        value = v.value;
        truncated = v.truncated;
    } else if (which == "lag-var") {
        params["ell"] = o.ell;
        params["functional"] = o.functional;
        if (o.functional == "periodogram") params["omega"] = o.omega;
        if (o.functional == "power") params["nu"] = o.nu;
        const bb::BlockVariables bv =
            bb::eval_block_functional(ts.values, o.ell, functional_from_flags(o));
        const bb::VarianceEstimate v = bb::lag_window_variance(bv);
        value = v.value;
        truncated = v.truncated;
    } else {
        throw bb::ValidationError("unknown estimator: " + which);
    }

    j["params"] = std::move(params);
    j["value"] = value;
    j["truncated"] = truncated;
    write_text(j.dump(2) + "\n", o.out);
    return 0;
}

struct BootstrapOpts {
    std::string in;
    std::string scheme = "mbb";
    std::size_t ell = 1;
    std::size_t ell1 = 0;
    std::size_t replicates = 1000;
    std::uint64_t seed = 1;
    std::string statistic = "mean";
    double mu = 0.0;
    bool exact = false;
    bool emit_samples = false;
    std::string functional = "scaled_sum";
    double omega = bb::kPi / 2.0;
    int nu = 1;
    std::string out;
    unsigned threads = 0;
};

int run_bootstrap(const BootstrapOpts& o) {
    const bb::TimeSeries ts = bb::read_series_csv(o.in);
    nlohmann::ordered_json j;
    j["scheme"] = o.exact ? "exact" : o.scheme;
    j["statistic"] = o.statistic;

    bb::BootstrapDistribution dist;
    if (o.exact) {
        bb::StatisticParams sp;
        sp.ell = o.ell;
        sp.mu = o.mu;
        sp.n = ts.n();
        dist = bb::exact_enumeration(ts.values, o.ell,
                                     bb::make_statistic(o.statistic, sp));
        j["ell"] = o.ell;
        nlohmann::ordered_json atoms = nlohmann::ordered_json::array();
        for (const auto& a : dist.atoms)
            atoms.push_back({{"value", a.value}, {"prob", a.prob}});
        j["atoms"] = std::move(atoms);
    } else {
        bb::ResamplePlan plan;
        plan.scheme = bb::scheme_from_name(o.scheme);
        plan.replicates = o.replicates;
        plan.master_seed = o.seed;
        plan.statistic = o.statistic;
        plan.statistic_params.ell = o.ell;
        plan.statistic_params.mu = o.mu;
        plan.statistic_params.n = ts.n();
        if (plan.scheme == bb::ResampleScheme::kBobb) {
            if (o.ell1 < 1) throw bb::ValidationError("bootstrap: bobb needs --ell1");
            plan.block_len = o.ell1;
            plan.functional_ell = o.ell;
            EstimateOpts fo;
            fo.functional = o.functional;
            fo.omega = o.omega;
            fo.nu = o.nu;
            plan.functional = functional_from_flags(fo);
            if (o.statistic == "bobb-studentized") {
                const bb::BlockVariables bv =
                    bb::eval_block_functional(ts.values, o.ell, *plan.functional);
                plan.statistic_params.ell1 = o.ell1;
                plan.statistic_params.bobb_center = bb::bobb_conditional_mean(bv, o.ell1);
            }
            j["ell"] = o.ell;
            j["ell1"] = o.ell1;
        } else {
            plan.block_len = o.ell;
            j["ell"] = o.ell;
        }
        j["B"] = o.replicates;
        j["seed"] = o.seed;
        dist = bb::bootstrap_distribution(plan, ts.values, o.threads);
        if (o.emit_samples) j["samples"] = dist.samples;
    }

    nlohmann::ordered_json q;
    const char* levels[] = {"0.025", "0.05", "0.5", "0.95", "0.975"};
    const double plevels[] = {0.025, 0.05, 0.5, 0.95, 0.975};
    for (int i = 0; i < 5; ++i) q[levels[i]] = dist.quantile(plevels[i]);
    j["quantiles"] = std::move(q);
    write_text(j.dump(2) + "\n", o.out);
    return 0;
}

struct EdgeworthOpts {
    std::string params_file;
    double xmin = -4.0;
    double xmax = 4.0;
    std::size_t points = 41;
    std::string out;
};

int run_edgeworth(const EdgeworthOpts& o) {
    std::ifstream in(o.params_file);
    if (!in) throw bb::ValidationError("cannot open params file: " + o.params_file);
    nlohmann::json spec;
    try {
        in >> spec;
    } catch (const nlohmann::json::exception& e) {
        throw bb::ValidationError(std::string("edgeworth params: parse error: ") + e.what());
    }
    if (o.points < 2) throw bb::ValidationError("edgeworth: need at least 2 grid points");

    std::function<double(double)> ee;
    try {
        const std::string mode = spec.value("mode", "cumulant");
        if (mode == "cumulant") {
            const auto chi = spec.at("chi").get<std::vector<double>>();
            const double b_tilde = spec.value("b_tilde", 1.0);
            const auto cum =
                bb::CumulantVector::make(chi, bb::CumulantSource::kAnalytic);
            const int s = spec.value("s", cum.order);
            ee = [cum, b_tilde, s](double x) { return bb::ee_cdf(x, cum, b_tilde, s); };
        } else if (mode == "studentized") {
            bb::StudentizedEEParams p;
            p.sigma_inf_sq = spec.at("sigma_inf_sq").get<double>();
            p.weighted_gamma_sum = spec.at("weighted_gamma_sum").get<double>();
            p.n = spec.at("n").get<std::size_t>();
            p.ell = spec.at("ell").get<std::size_t>();
            p.eu11_sq = spec.value("eu11_sq", p.sigma_inf_sq);
            p.ez2 = spec.value("ez2", p.sigma_inf_sq);
            p.ez3 = spec.value("ez3", 0.0);
            p.ezv_scaled = spec.value("ezv_scaled", 0.0);
            const int order = spec.value("order", 2);
            const std::size_t n = p.n;
            ee = [p, n, order](double x) { return bb::studentized_ee_cdf(x, n, p, order); };
        } else {
            throw bb::ValidationError("edgeworth params: unknown mode: " + mode);
        }
    } catch (const nlohmann::json::exception& e) {
        throw bb::ValidationError(std::string("edgeworth params: bad record: ") + e.what());
    }

    std::ostringstream csv;
    csv << "x,Phi,EE_s\n";
    for (std::size_t i = 0; i < o.points; ++i) {
        const double x = o.xmin + (o.xmax - o.xmin) * static_cast<double>(i) /
                                      static_cast<double>(o.points - 1);
        csv << bb::format_full(x) << ',' << bb::format_full(bb::normal_cdf(x)) << ','
            << bb::format_full(ee(x)) << '\n';
    }
    write_text(csv.str(), o.out);
    return 0;
}

struct ExperimentOpts {
    std::string kind;
    std::string config;
    std::string out_dir = "experiment_out";
    std::uint64_t seed = 0;
    bool seed_given = false;
    unsigned threads = 0;
    bool threads_given = false;
    bool allow_large = false;
};

int run_experiment_cmd(const ExperimentOpts& o) {
    bb::ExperimentConfig cfg = bb::ExperimentConfig::parse_file(o.config);
    if (bb::experiment_kind_name(cfg.kind) != o.kind)
        throw bb::ValidationError("config experiment kind does not match the subcommand");
    if (o.seed_given) cfg.master_seed = o.seed;
    if (o.threads_given) cfg.threads = o.threads;
    const bb::ExperimentResult result = bb::run_experiment(cfg, o.allow_large);
    bb::write_result(result, o.out_dir);
    std::cout << "wrote " << o.out_dir << "/result.json (" << result.rows.size()
              << " rows)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"block-variable sums, block bootstrap and Edgeworth expansion toolkit"};
    app.require_subcommand(1);

    SimulateOpts sim;
    CLI::App* sim_cmd = app.add_subcommand("simulate", "generate a synthetic series");
    sim_cmd->add_option("--process", sim.process, "linear | m_dependent");
    sim_cmd->add_option("--coeffs", sim.coeffs, "linear coefficients a_0..a_J");
    sim_cmd->add_option("--innov", sim.innov, "normal | centered_exponential | uniform");
    sim_cmd->add_option("--innov-variance", sim.innov_variance, "innovation variance");
    sim_cmd->add_option("--m0", sim.m0, "m-dependent window length");
    sim_cmd->add_option("--window", sim.h, "window map: identity | sum | product | constant");
    sim_cmd->add_option("--h-constant", sim.h_constant, "constant for window = constant");
    sim_cmd->add_option("--n", sim.n, "series length")->required();
    sim_cmd->add_option("--seed", sim.seed, "64-bit seed");
    sim_cmd->add_option("--out", sim.out, "output path (- for stdout)");
    sim_cmd->add_option("--format", sim.format, "csv | json");

    EstimateOpts est;
    std::string est_which;
    CLI::App* est_cmd = app.add_subcommand("estimate", "point estimators on a CSV series");
    est_cmd->add_option("which", est_which,
                        "autocov | spectral | mbb-moment | mbb-var | nbb-var | lag-var")
        ->required();
    est_cmd->add_option("--in", est.in, "input series CSV")->required();
    est_cmd->add_option("--k", est.k, "autocovariance lag");
    est_cmd->add_option("--ell", est.ell, "block length / truncation lag");
    est_cmd->add_option("--weights", est.weights, "comma list, length ell+1 for spectral");
    est_cmd->add_option("--lambda", est.lambda, "frequency for spectral / weighted_cosine");
    est_cmd->add_option("--nu", est.nu, "moment index");
    est_cmd->add_option("--functional", est.functional,
                        "scaled_sum | power | periodogram | weighted_cosine (lag-var)");
    est_cmd->add_option("--omega", est.omega, "periodogram frequency");
    est_cmd->add_option("--out", est.out, "output path (- for stdout)");

    BootstrapOpts boot;
    CLI::App* boot_cmd = app.add_subcommand("bootstrap", "bootstrap distribution of a statistic");
    boot_cmd->add_option("--in", boot.in, "input series CSV")->required();
    boot_cmd->add_option("--scheme", boot.scheme, "mbb | nbb | bobb");
    boot_cmd->add_option("--ell", boot.ell, "block length (functional blocks for bobb)");
    boot_cmd->add_option("--ell1", boot.ell1, "bobb resampling block length");
    boot_cmd->add_option("--B", boot.replicates, "bootstrap replicates");
    boot_cmd->add_option("--seed", boot.seed, "64-bit master seed");
    boot_cmd->add_option("--statistic", boot.statistic,
                         "mean | mbb-var | studentized-mean | bobb-studentized");
    boot_cmd->add_option("--mu", boot.mu, "centering for studentized-mean");
    boot_cmd->add_flag("--exact", boot.exact, "exact enumeration instead of Monte Carlo");
    boot_cmd->add_flag("--samples", boot.emit_samples, "include raw samples in the output");
    boot_cmd->add_option("--functional", boot.functional, "bobb block functional");
    boot_cmd->add_option("--omega", boot.omega, "periodogram frequency");
    boot_cmd->add_option("--nu", boot.nu, "power functional index");
    boot_cmd->add_option("--threads", boot.threads, "worker threads (0 = hardware)");
    boot_cmd->add_option("--out", boot.out, "output path (- for stdout)");

    EdgeworthOpts edge;
    CLI::App* edge_cmd =
        app.add_subcommand("edgeworth", "evaluate an expansion CDF on an x-grid");
    edge_cmd->add_option("--params", edge.params_file, "JSON cumulant/params file")
        ->required();
    edge_cmd->add_option("--xmin", edge.xmin, "grid start");
    edge_cmd->add_option("--xmax", edge.xmax, "grid end");
    edge_cmd->add_option("--points", edge.points, "grid size");
    edge_cmd->add_option("--out", edge.out, "output CSV path (- for stdout)");

    ExperimentOpts exp;
    CLI::App* exp_cmd = app.add_subcommand("experiment", "run a Monte Carlo experiment");
    exp_cmd->add_option("kind", exp.kind, "ee | soc | mdev | mbbmom")->required();
    exp_cmd->add_option("--config", exp.config, "flat key = value config file")->required();
    exp_cmd->add_option("--out", exp.out_dir, "output directory");
    CLI::Option* seed_opt = exp_cmd->add_option("--seed", exp.seed, "override master_seed");
    CLI::Option* thr_opt = exp_cmd->add_option("--threads", exp.threads, "override threads");
    exp_cmd->add_flag("--allow-large", exp.allow_large, "bypass the op-count budget guard");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sim_cmd->parsed()) return run_simulate(sim);
        if (est_cmd->parsed()) return run_estimate(est_which, est);
        if (boot_cmd->parsed()) return run_bootstrap(boot);
        if (edge_cmd->parsed()) return run_edgeworth(edge);
        if (exp_cmd->parsed()) {
            exp.seed_given = seed_opt->count() > 0;
            exp.threads_given = thr_opt->count() > 0;
            return run_experiment_cmd(exp);
        }
    } catch (const bb::BudgetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const bb::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

#ifndef BLOCKBOOT_HARNESS_HPP_
#define BLOCKBOOT_HARNESS_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "blockboot/blocks.hpp"
#include "blockboot/edgeworth.hpp"
#include "blockboot/procgen.hpp"
#include "blockboot/resample.hpp"

namespace blockboot {

inline constexpr const char* kCodeVersion = "blockboot 0.1.0";

// Exact sup over the jump points of the empirical CDF against a reference
// CDF: max_i max(|i/R - F(x_(i))|, |(i-1)/R - F(x_(i))|).
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);

// Exact sup-distance between two empirical CDFs.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

// Exact sup-distance between an empirical CDF and a discrete atom law.
double ks_vs_atoms(std::vector<double> samples, const std::vector<Atom>& atoms);

// Sample mean of (1 + |x|^{s0}) 1(|x| > [(s-2) lambda log n]^{1/2}),
// s0 = 2 floor(s/2).
double moderate_deviation_stat(std::span<const double> samples, int s, double lambda,
                               std::size_t n);

// Sample mean of h_s(|v|) with h_s(u) = u^s [log(1+u)]^{2 s^2}.
double moment_diagnostic_hs(std::span<const double> values, int s);

double median_of(std::vector<double> values);

// ---------------------------------------------------------------------------
// Experiment configuration (flat key = value text file, '#' comments)

enum class ExperimentKind { kEe, kSoc, kMdev, kMbbMoment };

std::string experiment_kind_name(ExperimentKind k);
ExperimentKind experiment_kind_from_name(const std::string& name);

enum class BlockRule { kCubeRoot, kFifthRoot, kExplicit };

struct ProcessConfig {
    bool is_linear = true;
    LinearProcessSpec linear;
    MDependentSpec mdep;

    TimeSeries generate(std::size_t n, std::uint64_t seed) const;
    ProcessTruth truth() const;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::kEe;
    ProcessConfig process;
    std::string statistic;  // defaulted per kind in parse()
    std::vector<std::size_t> n_ladder;
    BlockRule block_rule = BlockRule::kCubeRoot;
    double beta0 = 1.0;
    std::vector<std::size_t> ell_list;
    bool adjust_to_divisor = true;
    bool ell1_explicit = false;
    std::vector<std::size_t> ell1_list;
    double ell1_c = 1.5;  // target ell1 ~ c n^{2/5}
    double omega = kPi / 2.0;
    int nu = 2;
    std::size_t replicates = 1000;            // R (outer)
    std::size_t bootstrap_replicates = 1000;  // B (inner)
    std::size_t seed_groups = 5;
    int ee_order = 2;
    int s = 3;
    double lambda_multiplier = 1.5;
    std::string lambda_scale = "estimate";  // estimate | sigma_inf_sq
    std::size_t side_mc_replicates = 100000;
    std::size_t lambda_side_replicates = 2000;
    std::uint64_t master_seed = 1;
    unsigned threads = 0;  // 0 = hardware; never affects results

    static ExperimentConfig parse_file(const std::string& path);
    static ExperimentConfig parse_text(const std::string& text);
    void validate() const;
    // Sorted key = value form; what config.copy holds and what gets hashed.
    std::string canonical_text() const;
    std::uint64_t config_hash() const;  // FNV-1a over canonical_text
};

// Resolved block geometry for one ladder point.
struct LadderGeometry {
    std::size_t n = 0;
    std::size_t ell = 0;
    std::size_t ell1 = 0;  // 0 when unused
};

// Applies the block rule; when adjustment is on, moves ell to the nearest
// divisor of n (ties toward the larger one) and rejects if none lies within
// a factor of two of the target.
std::size_t resolve_block_length(const ExperimentConfig& cfg, std::size_t n,
                                 std::size_t ladder_index, bool need_divisor);

// soc geometry: nudges ell within +-3 of the rule target until N = n-ell+1
// has a divisor ell1 near c n^{2/5} with ell1 >= 3 ell and b1 = N/ell1 >= 30.
LadderGeometry resolve_soc_geometry(const ExperimentConfig& cfg, std::size_t n,
                                    std::size_t ladder_index);

// ---------------------------------------------------------------------------
// Results

struct GroupResult {
    std::uint64_t group_seed = 0;
    double ks_normal = 0.0;
    double ks_ee = 0.0;
    double ks_boot = 0.0;
    double sqrt_b_ks_boot = 0.0;
    double mdev_stat = 0.0;
    double hs_diag = 0.0;
};

struct ExperimentRow {
    std::size_t n = 0;
    std::size_t ell = 0;
    std::size_t ell1 = 0;
    double lambda_used = 0.0;    // mdev/mbbmom
    double center_used = 0.0;    // EU^nu or E Ybar_N actually applied
    std::vector<GroupResult> groups;

    double median_ks_normal() const;
    double median_ks_ee() const;
    double median_ks_boot() const;
    double median_sqrt_b_ks_boot() const;
    double median_mdev() const;
};

struct ExperimentResult {
    std::string experiment;
    std::string code_version = kCodeVersion;
    std::uint64_t config_hash = 0;
    std::string config_text;
    std::vector<ExperimentRow> rows;
    std::vector<double> row_wall_seconds;  // volatile; persisted separately
};

// Coarse scalar-op estimate used by the budget guard.
double estimated_scalar_ops(const ExperimentConfig& cfg);
inline constexpr double kOpsBudget = 1e10;

ExperimentResult run_experiment(const ExperimentConfig& cfg, bool allow_large = false);

ExperimentResult ee_accuracy_experiment(const ExperimentConfig& cfg);
ExperimentResult soc_experiment(const ExperimentConfig& cfg);
ExperimentResult mdev_experiment(const ExperimentConfig& cfg);
ExperimentResult mbb_moment_deviation_experiment(const ExperimentConfig& cfg);

// Side Monte Carlo for the p2 moment ingredients (E Z^2, E Z^3,
// l^{1/2} E Z V) of a given process at (n, l); deterministic in seed.
StudentizedEEParams estimate_studentized_moments(const ProcessConfig& process,
                                                 std::size_t n, std::size_t ell,
                                                 std::size_t replicates,
                                                 std::uint64_t seed, unsigned threads);

// Writes config.copy, result.json, rows.csv (all deterministic) plus
// timings.json (volatile) under out_dir.
void write_result(const ExperimentResult& result, const std::string& out_dir);

std::string result_to_json(const ExperimentResult& result);

}  // namespace blockboot

#endif  // BLOCKBOOT_HARNESS_HPP_

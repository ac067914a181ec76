#include "blockboot/harness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <type_traits>

#include <json.hpp>

namespace blockboot {

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw ValidationError("ks_distance: empty sample");
    std::sort(samples.begin(), samples.end());
    const double r = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        const double hi = static_cast<double>(i + 1) / r - f;
        const double lo = f - static_cast<double>(i) / r;
        d = std::max(d, std::max(std::abs(hi), std::abs(lo)));
    }
    return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw ValidationError("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() || j < b.size()) {
        double v;
        if (i < a.size() && (j >= b.size() || a[i] <= b[j])) v = a[i];
        else v = b[j];
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_vs_atoms(std::vector<double> samples, const std::vector<Atom>& atoms) {
    if (samples.empty() || atoms.empty()) throw ValidationError("ks_vs_atoms: empty input");
    std::sort(samples.begin(), samples.end());
    const double r = static_cast<double>(samples.size());
    std::size_t i = 0, j = 0;
    double acc = 0.0, d = 0.0;
    while (i < samples.size() || j < atoms.size()) {
        double v;
        if (i < samples.size() && (j >= atoms.size() || samples[i] <= atoms[j].value))
            v = samples[i];
        else
            v = atoms[j].value;
        while (i < samples.size() && samples[i] == v) ++i;
        while (j < atoms.size() && atoms[j].value == v) acc += atoms[j++].prob;
        d = std::max(d, std::abs(static_cast<double>(i) / r - acc));
    }
    return d;
}

double moderate_deviation_stat(std::span<const double> samples, int s, double lambda,
                               std::size_t n) {
    if (s < 3) throw ValidationError("moderate_deviation_stat: s must be >= 3");
    if (!(lambda > 0.0)) throw ValidationError("moderate_deviation_stat: lambda must be > 0");
    if (samples.empty()) throw ValidationError("moderate_deviation_stat: empty sample");
    const int s0 = 2 * (s / 2);
    const double threshold =
        std::sqrt(static_cast<double>(s - 2) * lambda * std::log(static_cast<double>(n)));
    double acc = 0.0;
    for (double x : samples) {
        const double a = std::abs(x);
        if (a > threshold) acc += 1.0 + std::pow(a, static_cast<double>(s0));
    }
    return acc / static_cast<double>(samples.size());
}

double moment_diagnostic_hs(std::span<const double> values, int s) {
    if (s < 3) throw ValidationError("moment_diagnostic_hs: s must be >= 3");
    if (values.empty()) throw ValidationError("moment_diagnostic_hs: empty input");
    const double alpha = 2.0 * static_cast<double>(s) * static_cast<double>(s);
    double acc = 0.0;
    for (double v : values) {
        const double u = std::abs(v);
        if (u > 0.0)
            acc += std::pow(u, static_cast<double>(s)) * std::pow(std::log1p(u), alpha);
    }
    return acc / static_cast<double>(values.size());
}

double median_of(std::vector<double> values) {
    if (values.empty()) throw ValidationError("median_of: empty input");
    std::sort(values.begin(), values.end());
    const std::size_t m = values.size() / 2;
    if (values.size() % 2 == 1) return values[m];
    return 0.5 * (values[m - 1] + values[m]);
}

// ---------------------------------------------------------------------------

std::string experiment_kind_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::kEe: return "ee";
        case ExperimentKind::kSoc: return "soc";
        case ExperimentKind::kMdev: return "mdev";
        case ExperimentKind::kMbbMoment: return "mbbmom";
    }
    throw ValidationError("experiment_kind_name: unknown tag");
}

ExperimentKind experiment_kind_from_name(const std::string& name) {
    if (name == "ee") return ExperimentKind::kEe;
    if (name == "soc") return ExperimentKind::kSoc;
    if (name == "mdev") return ExperimentKind::kMdev;
    if (name == "mbbmom") return ExperimentKind::kMbbMoment;
    throw ValidationError("unknown experiment kind: " + name);
}

TimeSeries ProcessConfig::generate(std::size_t n, std::uint64_t seed) const {
    return is_linear ? gen_linear(linear, n, seed) : gen_m_dependent(mdep, n, seed);
}

ProcessTruth ProcessConfig::truth() const {
    return is_linear ? derive_truth(linear) : derive_truth(mdep);
}

namespace {

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing chars");
        return x;
    } catch (const std::exception&) {
        throw ValidationError("config: bad numeric value for " + key + ": " + v);
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const unsigned long long x = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing chars");
        return static_cast<std::uint64_t>(x);
    } catch (const std::exception&) {
        throw ValidationError("config: bad integer value for " + key + ": " + v);
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ValidationError("config: bad boolean value for " + key + ": " + v);
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

template <typename T>
std::string join_list(const std::vector<T>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ',';
        if constexpr (std::is_same_v<T, double>) out += format_double(xs[i]);
        else out += std::to_string(xs[i]);
    }
    return out;
}

std::string default_statistic(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::kEe: return "studentized_mean";
        case ExperimentKind::kSoc: return "periodogram_block_mean";
        case ExperimentKind::kMdev: return "scaled_sum";
        case ExperimentKind::kMbbMoment: return "mbb_moment";
    }
    return "";
}

}  // namespace

ExperimentConfig ExperimentConfig::parse_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config: expected key = value, got: " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ValidationError("config: empty key or value in: " + line);
        if (kv.count(key)) throw ValidationError("config: duplicate key: " + key);
        kv[key] = value;
    }

    ExperimentConfig cfg;
    auto take = [&kv](const std::string& key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };

    if (auto v = take("experiment")) cfg.kind = experiment_kind_from_name(*v);
    else throw ValidationError("config: missing key: experiment");

    const std::string proc = take("process").value_or("linear");
    if (proc == "linear") {
        cfg.process.is_linear = true;
        if (auto v = take("coeffs")) {
            cfg.process.linear.coeffs.clear();
            for (const auto& c : split_list(*v))
                cfg.process.linear.coeffs.push_back(parse_double("coeffs", c));
        } else {
            cfg.process.linear.coeffs = {1.0};
        }
        if (auto v = take("innov"))
            cfg.process.linear.innov = innovation_from_name(*v);
        if (auto v = take("innov_variance"))
            cfg.process.linear.innov_variance = parse_double("innov_variance", *v);
    } else if (proc == "m_dependent") {
        cfg.process.is_linear = false;
        if (auto v = take("m0")) cfg.process.mdep.m0 = static_cast<int>(parse_u64("m0", *v));
        if (auto v = take("h")) cfg.process.mdep.h = window_map_from_name(*v);
        if (auto v = take("h_constant"))
            cfg.process.mdep.h_constant = parse_double("h_constant", *v);
        if (auto v = take("innov")) cfg.process.mdep.innov = innovation_from_name(*v);
        if (auto v = take("innov_variance"))
            cfg.process.mdep.innov_variance = parse_double("innov_variance", *v);
    } else {
        throw ValidationError("config: unknown process: " + proc);
    }

    cfg.statistic = take("statistic").value_or(default_statistic(cfg.kind));

    if (auto v = take("n_ladder")) {
        for (const auto& c : split_list(*v))
            cfg.n_ladder.push_back(static_cast<std::size_t>(parse_u64("n_ladder", c)));
    } else {
        throw ValidationError("config: missing key: n_ladder");
    }

    if (auto v = take("block_rule")) {
        if (*v == "cuberoot") cfg.block_rule = BlockRule::kCubeRoot;
        else if (*v == "fifthroot") cfg.block_rule = BlockRule::kFifthRoot;
        else if (*v == "explicit") cfg.block_rule = BlockRule::kExplicit;
        else throw ValidationError("config: unknown block_rule: " + *v);
    } else {
        cfg.block_rule =
            cfg.kind == ExperimentKind::kSoc ? BlockRule::kFifthRoot : BlockRule::kCubeRoot;
    }
    if (auto v = take("beta0")) cfg.beta0 = parse_double("beta0", *v);
    if (auto v = take("ell_list")) {
        for (const auto& c : split_list(*v))
            cfg.ell_list.push_back(static_cast<std::size_t>(parse_u64("ell_list", c)));
    }
    if (auto v = take("adjust_to_divisor")) cfg.adjust_to_divisor = parse_bool("adjust_to_divisor", *v);

    if (auto v = take("ell1_rule")) {
        if (*v == "auto") cfg.ell1_explicit = false;
        else if (*v == "explicit") cfg.ell1_explicit = true;
        else throw ValidationError("config: unknown ell1_rule: " + *v);
    }
    if (auto v = take("ell1_c")) cfg.ell1_c = parse_double("ell1_c", *v);
    if (auto v = take("ell1_list")) {
        for (const auto& c : split_list(*v))
            cfg.ell1_list.push_back(static_cast<std::size_t>(parse_u64("ell1_list", c)));
    }

    if (auto v = take("omega")) cfg.omega = parse_double("omega", *v);
    if (auto v = take("nu")) cfg.nu = static_cast<int>(parse_u64("nu", *v));
    if (auto v = take("replicates")) cfg.replicates = parse_u64("replicates", *v);
    if (auto v = take("bootstrap_replicates"))
        cfg.bootstrap_replicates = parse_u64("bootstrap_replicates", *v);
    if (auto v = take("seed_groups")) cfg.seed_groups = parse_u64("seed_groups", *v);
    if (auto v = take("ee_order")) cfg.ee_order = static_cast<int>(parse_u64("ee_order", *v));
    if (auto v = take("s")) cfg.s = static_cast<int>(parse_u64("s", *v));
    if (auto v = take("lambda_multiplier"))
        cfg.lambda_multiplier = parse_double("lambda_multiplier", *v);
    if (auto v = take("lambda_scale")) {
        if (*v != "estimate" && *v != "sigma_inf_sq")
            throw ValidationError("config: unknown lambda_scale: " + *v);
        cfg.lambda_scale = *v;
    }
    if (auto v = take("side_mc_replicates")) cfg.side_mc_replicates = parse_u64("side_mc_replicates", *v);
    if (auto v = take("lambda_side_replicates"))
        cfg.lambda_side_replicates = parse_u64("lambda_side_replicates", *v);
    if (auto v = take("master_seed")) cfg.master_seed = parse_u64("master_seed", *v);
    if (auto v = take("threads")) cfg.threads = static_cast<unsigned>(parse_u64("threads", *v));

    if (!kv.empty()) throw ValidationError("config: unknown key: " + kv.begin()->first);
    cfg.validate();
    return cfg;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str());
}

void ExperimentConfig::validate() const {
    if (n_ladder.empty()) throw ValidationError("config: empty n_ladder");
    for (std::size_t i = 1; i < n_ladder.size(); ++i)
        if (n_ladder[i] <= n_ladder[i - 1])
            throw ValidationError("config: n_ladder must be strictly increasing");
    if (replicates < 1 || bootstrap_replicates < 1)
        throw ValidationError("config: R and B must be >= 1");
    if (seed_groups < 1) throw ValidationError("config: seed_groups must be >= 1");
    if (block_rule == BlockRule::kExplicit && ell_list.size() != n_ladder.size())
        throw ValidationError("config: ell_list must match n_ladder length");
    if (ell1_explicit && ell1_list.size() != n_ladder.size())
        throw ValidationError("config: ell1_list must match n_ladder length");
    if (!(beta0 > 0.0)) throw ValidationError("config: beta0 must be > 0");
    if (!(ell1_c > 0.0)) throw ValidationError("config: ell1_c must be > 0");
    if (s < 3) throw ValidationError("config: s must be >= 3");
    if (ee_order < 1 || ee_order > 2) throw ValidationError("config: ee_order must be 1 or 2");
    if (!(lambda_multiplier > 0.0))
        throw ValidationError("config: lambda_multiplier must be > 0");
    if (nu < 1) throw ValidationError("config: nu must be >= 1");
    if (process.is_linear) process.linear.validate();
    else process.mdep.validate();

    const std::string& st = statistic;
    switch (kind) {
        case ExperimentKind::kEe:
            if (st != "studentized_mean")
                throw ValidationError("config: ee experiment requires statistic = studentized_mean");
            break;
        case ExperimentKind::kSoc:
            if (st != "periodogram_block_mean" && st != "scaled_sum_block_mean")
                throw ValidationError("config: soc statistic must be periodogram_block_mean "
                                      "or scaled_sum_block_mean");
            break;
        case ExperimentKind::kMdev:
            if (st != "scaled_sum" && st != "power" && st != "periodogram")
                throw ValidationError("config: mdev statistic must be scaled_sum, power or "
                                      "periodogram");
            break;
        case ExperimentKind::kMbbMoment:
            if (st != "mbb_moment" && st != "mbb_variance")
                throw ValidationError("config: mbbmom statistic must be mbb_moment or "
                                      "mbb_variance");
            break;
    }
}

std::string ExperimentConfig::canonical_text() const {
    std::map<std::string, std::string> kv;
    kv["experiment"] = experiment_kind_name(kind);
    if (process.is_linear) {
        kv["process"] = "linear";
        kv["coeffs"] = join_list(process.linear.coeffs);
        kv["innov"] = innovation_name(process.linear.innov);
        kv["innov_variance"] = format_double(process.linear.innov_variance);
    } else {
        kv["process"] = "m_dependent";
        kv["m0"] = std::to_string(process.mdep.m0);
        kv["h"] = window_map_name(process.mdep.h);
        kv["h_constant"] = format_double(process.mdep.h_constant);
        kv["innov"] = innovation_name(process.mdep.innov);
        kv["innov_variance"] = format_double(process.mdep.innov_variance);
    }
    kv["statistic"] = statistic;
    kv["n_ladder"] = join_list(n_ladder);
    kv["block_rule"] = block_rule == BlockRule::kCubeRoot    ? "cuberoot"
                       : block_rule == BlockRule::kFifthRoot ? "fifthroot"
                                                             : "explicit";
    kv["beta0"] = format_double(beta0);
    if (!ell_list.empty()) kv["ell_list"] = join_list(ell_list);
    kv["adjust_to_divisor"] = adjust_to_divisor ? "true" : "false";
    kv["ell1_rule"] = ell1_explicit ? "explicit" : "auto";
    kv["ell1_c"] = format_double(ell1_c);
    if (!ell1_list.empty()) kv["ell1_list"] = join_list(ell1_list);
    kv["omega"] = format_double(omega);
    kv["nu"] = std::to_string(nu);
    kv["replicates"] = std::to_string(replicates);
    kv["bootstrap_replicates"] = std::to_string(bootstrap_replicates);
    kv["seed_groups"] = std::to_string(seed_groups);
    kv["ee_order"] = std::to_string(ee_order);
    kv["s"] = std::to_string(s);
    kv["lambda_multiplier"] = format_double(lambda_multiplier);
    kv["lambda_scale"] = lambda_scale;
    kv["side_mc_replicates"] = std::to_string(side_mc_replicates);
    kv["lambda_side_replicates"] = std::to_string(lambda_side_replicates);
    kv["master_seed"] = std::to_string(master_seed);
    kv["threads"] = std::to_string(threads);

    std::string out;
    for (const auto& [k, v] : kv) {
        out += k;
        out += " = ";
        out += v;
        out += '\n';
    }
    return out;
}

std::uint64_t ExperimentConfig::config_hash() const {
    // FNV-1a 64 over the canonical text, skipping the threads line (thread
    // count never changes results).
    std::istringstream in(canonical_text());
    std::string line;
    std::uint64_t h = 14695981039346656037ULL;
    while (std::getline(in, line)) {
        if (line.rfind("threads", 0) == 0) continue;
        for (char c : line) {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ULL;
        }
        h ^= static_cast<unsigned char>('\n');
        h *= 1099511628211ULL;
    }
    return h;
}

std::size_t resolve_block_length(const ExperimentConfig& cfg, std::size_t n,
                                 std::size_t ladder_index, bool need_divisor) {
    std::size_t target;
    switch (cfg.block_rule) {
        case BlockRule::kExplicit:
            target = cfg.ell_list.at(ladder_index);
            if (need_divisor && n % target != 0)
                throw ValidationError("block rule: explicit ell does not divide n");
            return target;
        case BlockRule::kCubeRoot:
            target = static_cast<std::size_t>(
                std::ceil(cfg.beta0 * std::cbrt(static_cast<double>(n))));
            break;
        case BlockRule::kFifthRoot:
            target = static_cast<std::size_t>(
                std::ceil(cfg.beta0 * std::pow(static_cast<double>(n), 0.2)));
            break;
        default:
            throw ValidationError("block rule: unknown rule");
    }
    target = std::max<std::size_t>(1, std::min(target, n));
    if (!need_divisor || !cfg.adjust_to_divisor || n % target == 0) {
        if (need_divisor && n % target != 0)
            throw ValidationError("block rule: ell does not divide n and adjustment is off");
        return target;
    }
    // nearest divisor of n; ties toward the larger candidate
    for (std::size_t d = 1; d <= target / 2 + 1; ++d) {
        if (target + d <= n && n % (target + d) == 0) return target + d;
        if (target > d && n % (target - d) == 0) return target - d;
    }
    throw ValidationError("block rule: no divisor of n within a factor of two of the target");
}

LadderGeometry resolve_soc_geometry(const ExperimentConfig& cfg, std::size_t n,
                                    std::size_t ladder_index) {
    LadderGeometry geom;
    geom.n = n;
    if (cfg.block_rule == BlockRule::kExplicit || cfg.ell1_explicit) {
        geom.ell = cfg.block_rule == BlockRule::kExplicit
                       ? cfg.ell_list.at(ladder_index)
                       : resolve_block_length(cfg, n, ladder_index, false);
        if (!cfg.ell1_explicit)
            throw ValidationError("soc geometry: explicit ell requires explicit ell1");
        geom.ell1 = cfg.ell1_list.at(ladder_index);
        const std::size_t num = n - geom.ell + 1;
        if (geom.ell1 < 1 || geom.ell1 > num || num % geom.ell1 != 0)
            throw ValidationError("soc geometry: ell1 must divide N = n - ell + 1");
        return geom;
    }

    const std::size_t ell0 = resolve_block_length(cfg, n, ladder_index, false);
    const double target1 = std::ceil(cfg.ell1_c * std::pow(static_cast<double>(n), 0.4));

    double best_score = 0.0;
    bool found = false;
    const long deltas[] = {0, 1, -1, 2, -2, 3, -3};
    for (long d : deltas) {
        const long ell_signed = static_cast<long>(ell0) + d;
        if (ell_signed < 2) continue;
        const std::size_t ell = static_cast<std::size_t>(ell_signed);
        if (ell > n) continue;
        const std::size_t num = n - ell + 1;
        if (2 * ell > num - 1) continue;
        // scan divisors of N in [2 ell, N/8]
        for (std::size_t lo = 1; lo * lo <= num; ++lo) {
            if (num % lo != 0) continue;
            for (std::size_t div : {lo, num / lo}) {
                if (div < 2 * ell || div * 8 > num) continue;
                const double score =
                    std::abs(std::log(static_cast<double>(div) / target1)) +
                    0.1 * static_cast<double>(d < 0 ? -d : d);
                if (!found || score < best_score) {
                    best_score = score;
                    geom.ell = ell;
                    geom.ell1 = div;
                    found = true;
                }
            }
        }
    }
    if (!found)
        throw ValidationError("soc geometry: no (ell, ell1) with ell1 | N near the rule "
                              "targets; choose n with more composite N");
    return geom;
}

// ---------------------------------------------------------------------------

namespace {

double median_field(const std::vector<GroupResult>& groups,
                    double GroupResult::*field) {
    std::vector<double> vals;
    vals.reserve(groups.size());
    for (const auto& g : groups) vals.push_back(g.*field);
    return median_of(std::move(vals));
}

}  // namespace

double ExperimentRow::median_ks_normal() const { return median_field(groups, &GroupResult::ks_normal); }
double ExperimentRow::median_ks_ee() const { return median_field(groups, &GroupResult::ks_ee); }
double ExperimentRow::median_ks_boot() const { return median_field(groups, &GroupResult::ks_boot); }
double ExperimentRow::median_sqrt_b_ks_boot() const {
    return median_field(groups, &GroupResult::sqrt_b_ks_boot);
}
double ExperimentRow::median_mdev() const { return median_field(groups, &GroupResult::mdev_stat); }

std::string result_to_json(const ExperimentResult& result) {
    nlohmann::ordered_json j;
    j["experiment"] = result.experiment;
    j["code_version"] = result.code_version;
    char hash_buf[24];
    std::snprintf(hash_buf, sizeof(hash_buf), "%016llx",
                  static_cast<unsigned long long>(result.config_hash));
    j["config_hash"] = hash_buf;
    j["note"] = "asymptotic O/o rates are checked as direction/ordering only; "
                "constants and (log n) factors are not separable at these n";
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : result.rows) {
        nlohmann::ordered_json r;
        r["n"] = row.n;
        r["ell"] = row.ell;
        r["ell1"] = row.ell1;
        r["lambda_used"] = row.lambda_used;
        r["center_used"] = row.center_used;
        nlohmann::ordered_json groups = nlohmann::ordered_json::array();
        for (const auto& g : row.groups) {
            nlohmann::ordered_json gj;
            gj["group_seed"] = g.group_seed;
            gj["ks_normal"] = g.ks_normal;
            gj["ks_ee"] = g.ks_ee;
            gj["ks_boot"] = g.ks_boot;
            gj["sqrt_b_ks_boot"] = g.sqrt_b_ks_boot;
            gj["mdev_stat"] = g.mdev_stat;
            gj["hs_diag"] = g.hs_diag;
            groups.push_back(std::move(gj));
        }
        r["groups"] = std::move(groups);
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    return j.dump(2) + "\n";
}

void write_result(const ExperimentResult& result, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    {
        std::ofstream out(fs::path(out_dir) / "config.copy");
        out << result.config_text;
    }
    {
        std::ofstream out(fs::path(out_dir) / "result.json");
        out << result_to_json(result);
    }
    {
        std::ofstream out(fs::path(out_dir) / "rows.csv");
        out << "n,ell,ell1,group,group_seed,ks_normal,ks_ee,ks_boot,sqrt_b_ks_boot,"
               "mdev_stat,hs_diag\n";
        char buf[40];
        auto fmt = [&buf](double v) {
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            return std::string(buf);
        };
        for (const auto& row : result.rows) {
            for (std::size_t g = 0; g < row.groups.size(); ++g) {
                const auto& gr = row.groups[g];
                out << row.n << ',' << row.ell << ',' << row.ell1 << ',' << g << ','
                    << gr.group_seed << ',' << fmt(gr.ks_normal) << ',' << fmt(gr.ks_ee)
                    << ',' << fmt(gr.ks_boot) << ',' << fmt(gr.sqrt_b_ks_boot) << ','
                    << fmt(gr.mdev_stat) << ',' << fmt(gr.hs_diag) << '\n';
            }
        }
    }
    {
        // Wall times are the one non-deterministic output; they live outside
        // result.json so re-runs reproduce result.json bit for bit.
        nlohmann::ordered_json t;
        t["row_wall_seconds"] = result.row_wall_seconds;
        std::ofstream out(fs::path(out_dir) / "timings.json");
        out << t.dump(2) << "\n";
    }
}

}  // namespace blockboot

#include "blockboot/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace blockboot {

std::string format_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_series_csv(const TimeSeries& ts, std::ostream& out) {
    out << "x\n";
    for (double v : ts.values) out << format_full(v) << '\n';
}

void write_series_csv(const TimeSeries& ts, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("write_series_csv: cannot open " + path);
    write_series_csv(ts, out);
}

TimeSeries read_series_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("read_series_csv: empty input");
    if (line == "x\r") line = "x";
    if (line != "x") throw ValidationError("read_series_csv: expected header 'x'");
    TimeSeries ts;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        try {
            std::size_t pos = 0;
            const double v = std::stod(line, &pos);
            if (pos != line.size()) throw std::invalid_argument("trailing chars");
            ts.values.push_back(v);
        } catch (const std::exception&) {
            throw ValidationError("read_series_csv: bad value at line " +
                                  std::to_string(lineno) + ": " + line);
        }
    }
    if (ts.values.empty()) throw ValidationError("read_series_csv: no values");
    return ts;
}

TimeSeries read_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("read_series_csv: cannot open " + path);
    return read_series_csv(in);
}

namespace {

nlohmann::ordered_json spec_to_json(const SeriesRecord& rec) {
    nlohmann::ordered_json spec;
    if (rec.linear) {
        spec["type"] = "linear";
        spec["coeffs"] = rec.linear->coeffs;
        spec["innov"] = innovation_name(rec.linear->innov);
        spec["innov_variance"] = rec.linear->innov_variance;
    } else if (rec.mdep) {
        spec["type"] = "m_dependent";
        spec["m0"] = rec.mdep->m0;
        spec["h"] = window_map_name(rec.mdep->h);
        spec["h_constant"] = rec.mdep->h_constant;
        spec["innov"] = innovation_name(rec.mdep->innov);
        spec["innov_variance"] = rec.mdep->innov_variance;
    } else {
        spec["type"] = "external";
    }
    return spec;
}

}  // namespace

std::string series_to_json(const SeriesRecord& rec) {
    nlohmann::ordered_json j;
    j["spec"] = spec_to_json(rec);
    j["seed"] = rec.series.seed;
    j["n"] = rec.series.n();
    j["values"] = rec.series.values;
    return j.dump(2) + "\n";
}

SeriesRecord series_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("series_from_json: parse error: ") + e.what());
    }
    SeriesRecord rec;
    try {
        const auto& spec = j.at("spec");
        const std::string type = spec.at("type").get<std::string>();
        if (type == "linear") {
            LinearProcessSpec s;
            s.coeffs = spec.at("coeffs").get<std::vector<double>>();
            s.innov = innovation_from_name(spec.at("innov").get<std::string>());
            s.innov_variance = spec.at("innov_variance").get<double>();
            rec.linear = s;
        } else if (type == "m_dependent") {
            MDependentSpec s;
            s.m0 = spec.at("m0").get<int>();
            s.h = window_map_from_name(spec.at("h").get<std::string>());
            s.h_constant = spec.at("h_constant").get<double>();
            s.innov = innovation_from_name(spec.at("innov").get<std::string>());
            s.innov_variance = spec.at("innov_variance").get<double>();
            rec.mdep = s;
        } else if (type != "external") {
            throw ValidationError("series_from_json: unknown spec type: " + type);
        }
        rec.series.seed = j.at("seed").get<std::uint64_t>();
        rec.series.values = j.at("values").get<std::vector<double>>();
        if (rec.series.values.size() != j.at("n").get<std::size_t>())
            throw ValidationError("series_from_json: n does not match values length");
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("series_from_json: bad record: ") + e.what());
    }
    if (rec.linear) rec.series.truth = derive_truth(*rec.linear);
    else if (rec.mdep) rec.series.truth = derive_truth(*rec.mdep);
    return rec;
}

void write_series_json(const SeriesRecord& rec, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("write_series_json: cannot open " + path);
    out << series_to_json(rec);
}

SeriesRecord read_series_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("read_series_json: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return series_from_json(ss.str());
}

}  // namespace blockboot

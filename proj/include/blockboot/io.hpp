#ifndef BLOCKBOOT_IO_HPP_
#define BLOCKBOOT_IO_HPP_

#include <iosfwd>
#include <optional>
#include <string>

#include "blockboot/procgen.hpp"

namespace blockboot {

// Series CSV: header line "x", one value per line, 17 significant digits.
void write_series_csv(const TimeSeries& ts, std::ostream& out);
void write_series_csv(const TimeSeries& ts, const std::string& path);
TimeSeries read_series_csv(std::istream& in);
TimeSeries read_series_csv(const std::string& path);

// JSON record {spec, seed, n, values}; spec is {type: "external"} for data
// that was not generated here.
struct SeriesRecord {
    std::optional<LinearProcessSpec> linear;
    std::optional<MDependentSpec> mdep;
    TimeSeries series;
};

std::string series_to_json(const SeriesRecord& rec);
SeriesRecord series_from_json(const std::string& text);
void write_series_json(const SeriesRecord& rec, const std::string& path);
SeriesRecord read_series_json(const std::string& path);

std::string format_full(double x);  // %.17g

}  // namespace blockboot

#endif  // BLOCKBOOT_IO_HPP_

#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace schro {

using ordered_json = nlohmann::ordered_json;

// Writes via a temp file in the same directory plus rename, so a failed run
// never leaves a partial artifact behind.
void atomic_write_file(const std::string& path, const std::string& content);

// RFC-4180-style CSV: '.' decimal separator, UTF-8, fields quoted only when
// they contain a comma, quote or newline; numbers at full round-trip
// precision so fits can be reproduced from the stored table.
std::string csv_field(const std::string& text);
std::string format_double(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

std::string render_csv(const CsvTable& table);

// Minimal hand-emitted SVG: log-log polyline plot with an optional straight
// fit line per series. Deterministic bytes for identical inputs.
struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool with_fit = false;
    double fit_slope = 0.0;      // in log10(y) = fit_intercept + fit_slope*log10(x)
    double fit_intercept = 0.0;
};

std::string render_loglog_svg(const std::string& title, const std::string& x_label,
                              const std::string& y_label, const std::vector<PlotSeries>& series);

std::string json_to_string(const ordered_json& j);

}  // namespace schro

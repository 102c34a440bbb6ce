#include "schro/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "schro/errors.hpp"

namespace schro {

void atomic_write_file(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
    }
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw config_error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw config_error("short write to " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw config_error("cannot rename into " + target.string());
    }
}

std::string csv_field(const std::string& text) {
    const bool needs_quote = text.find_first_of(",\"\n\r") != std::string::npos;
    if (!needs_quote) return text;
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string render_csv(const CsvTable& table) {
    std::string out;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        if (c) out += ',';
        out += csv_field(table.header[c]);
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += format_double(row[c]);
        }
        out += '\n';
    }
    return out;
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

const char* kSeriesColors[] = {"#1f6fb2", "#b23a1f", "#2e8540", "#7c4fb2", "#b2861f", "#1fb2a3"};

}  // namespace

std::string render_loglog_svg(const std::string& title, const std::string& x_label,
                              const std::string& y_label, const std::vector<PlotSeries>& series) {
    const int width = 640, height = 480;
    const int ml = 70, mr = 20, mt = 40, mb = 50;

    double lx_min = 0.0, lx_max = 0.0, ly_min = 0.0, ly_max = 0.0;
    bool first = true;
    for (const PlotSeries& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0)) continue;
            const double lx = std::log10(s.x[i]), ly = std::log10(s.y[i]);
            if (first) {
                lx_min = lx_max = lx;
                ly_min = ly_max = ly;
                first = false;
            } else {
                lx_min = std::min(lx_min, lx);
                lx_max = std::max(lx_max, lx);
                ly_min = std::min(ly_min, ly);
                ly_max = std::max(ly_max, ly);
            }
        }
    }
    if (first) {
        lx_min = ly_min = -1.0;
        lx_max = ly_max = 1.0;
    }
    if (lx_max - lx_min < 1e-12) lx_max = lx_min + 1.0;
    if (ly_max - ly_min < 1e-12) ly_max = ly_min + 1.0;

    auto px = [&](double lx) {
        return ml + (lx - lx_min) / (lx_max - lx_min) * (width - ml - mr);
    };
    auto py = [&](double ly) {
        return height - mb - (ly - ly_min) / (ly_max - ly_min) * (height - mt - mb);
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
           "\" height=\"" + std::to_string(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + std::to_string(width / 2) + "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"monospace\" font-size=\"14\">" + title + "</text>\n";

    // frame
    svg += "<rect x=\"" + std::to_string(ml) + "\" y=\"" + std::to_string(mt) + "\" width=\"" +
           std::to_string(width - ml - mr) + "\" height=\"" + std::to_string(height - mt - mb) +
           "\" fill=\"none\" stroke=\"#333\"/>\n";

    // decade ticks
    for (int d = static_cast<int>(std::ceil(lx_min)); d <= static_cast<int>(std::floor(lx_max)); ++d) {
        const double x = px(d);
        svg += "<line x1=\"" + fmt(x) + "\" y1=\"" + std::to_string(height - mb) + "\" x2=\"" +
               fmt(x) + "\" y2=\"" + std::to_string(height - mb + 6) + "\" stroke=\"#333\"/>\n";
        svg += "<text x=\"" + fmt(x) + "\" y=\"" + std::to_string(height - mb + 20) +
               "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"11\">1e" +
               std::to_string(d) + "</text>\n";
    }
    for (int d = static_cast<int>(std::ceil(ly_min)); d <= static_cast<int>(std::floor(ly_max)); ++d) {
        const double y = py(d);
        svg += "<line x1=\"" + std::to_string(ml - 6) + "\" y1=\"" + fmt(y) + "\" x2=\"" +
               std::to_string(ml) + "\" y2=\"" + fmt(y) + "\" stroke=\"#333\"/>\n";
        svg += "<text x=\"" + std::to_string(ml - 10) + "\" y=\"" + fmt(y + 4) +
               "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"11\">1e" +
               std::to_string(d) + "</text>\n";
    }

    svg += "<text x=\"" + std::to_string(width / 2) + "\" y=\"" + std::to_string(height - 12) +
           "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"12\">" + x_label +
           "</text>\n";
    svg += "<text x=\"16\" y=\"" + std::to_string(height / 2) +
           "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"12\" "
           "transform=\"rotate(-90 16 " + std::to_string(height / 2) + ")\">" + y_label +
           "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const PlotSeries& s = series[si];
        const char* color = kSeriesColors[si % 6];
        std::string points;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0)) continue;
            if (!points.empty()) points += ' ';
            points += fmt(px(std::log10(s.x[i]))) + "," + fmt(py(std::log10(s.y[i])));
        }
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0)) continue;
            svg += "<circle cx=\"" + fmt(px(std::log10(s.x[i]))) + "\" cy=\"" +
                   fmt(py(std::log10(s.y[i]))) + "\" r=\"2.5\" fill=\"" + color + "\"/>\n";
        }
        if (s.with_fit) {
            const double y0 = s.fit_intercept + s.fit_slope * lx_min;
            const double y1 = s.fit_intercept + s.fit_slope * lx_max;
            svg += "<line x1=\"" + fmt(px(lx_min)) + "\" y1=\"" + fmt(py(y0)) + "\" x2=\"" +
                   fmt(px(lx_max)) + "\" y2=\"" + fmt(py(y1)) + "\" stroke=\"" + color +
                   "\" stroke-dasharray=\"5,4\" stroke-width=\"1\"/>\n";
        }
        svg += "<text x=\"" + std::to_string(width - mr - 6) + "\" y=\"" +
               std::to_string(mt + 16 + 14 * static_cast<int>(si)) +
               "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"11\" fill=\"" +
               color + "\">" + s.label + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

std::string json_to_string(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace schro

#pragma once

// Text exports: geometry and snapshot CSV, SVG polylines, energy traces, and
// the x0,y point CSV read by the boost command. Numbers are written in
// shortest round-trip form with '.' as separator regardless of locale.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "format.hpp"
#include "koch.hpp"
#include "wave.hpp"

namespace nnwave::io {

inline constexpr double kSvgUnitsPerChartUnit = 1000.0;

inline void write_comment_lines(std::ostream& os, std::span<const std::string> header) {
    for (const auto& line : header) os << "# " << line << '\n';
}

/// `y,re,im` rows.
inline void write_geometry_csv(std::ostream& os, std::span<const double> ys, std::span<const koch::PlanePoint> pts,
                               std::span<const std::string> header = {}) {
    write_comment_lines(os, header);
    os << "y,re,im\n";
    for (std::size_t i = 0; i < pts.size(); ++i)
        os << format_double(ys[i]) << ',' << format_double(pts[i].real()) << ',' << format_double(pts[i].imag())
           << '\n';
}

namespace detail {

struct Bounds {
    double min_x = std::numeric_limits<double>::infinity();
    double min_y = std::numeric_limits<double>::infinity();
    double max_x = -std::numeric_limits<double>::infinity();
    double max_y = -std::numeric_limits<double>::infinity();

    void add(double x, double y) {
        min_x = std::min(min_x, x);
        max_x = std::max(max_x, x);
        min_y = std::min(min_y, y);
        max_y = std::max(max_y, y);
    }
};

// Screen coordinates: 1000 units per chart unit, y axis pointing down.
inline std::pair<double, double> to_screen(koch::PlanePoint z) {
    return {z.real() * kSvgUnitsPerChartUnit, -z.imag() * kSvgUnitsPerChartUnit};
}

inline void svg_open(std::ostream& os, const Bounds& b, std::span<const std::string> header) {
    const double margin = 0.02 * std::max(b.max_x - b.min_x, b.max_y - b.min_y) + 1.0;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    for (const auto& line : header) os << "<!-- " << line << " -->\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << format_double(b.min_x - margin) << ' '
       << format_double(b.min_y - margin) << ' ' << format_double(b.max_x - b.min_x + 2 * margin) << ' '
       << format_double(b.max_y - b.min_y + 2 * margin) << "\">\n";
}

inline void svg_polyline(std::ostream& os, std::span<const std::pair<double, double>> pts, std::string_view style) {
    os << "<polyline fill=\"none\" " << style << " points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) os << ' ';
        os << format_double(pts[i].first) << ',' << format_double(pts[i].second);
    }
    os << "\"/>\n";
}

}  // namespace detail

inline void write_polyline_svg(std::ostream& os, std::span<const koch::PlanePoint> pts,
                               std::span<const std::string> header = {}) {
    std::vector<std::pair<double, double>> screen;
    detail::Bounds b;
    for (auto z : pts) {
        screen.push_back(detail::to_screen(z));
        b.add(screen.back().first, screen.back().second);
    }
    detail::svg_open(os, b, header);
    detail::svg_polyline(os, screen, "stroke=\"black\" stroke-width=\"1\"");
    os << "</svg>\n";
}

/// `t,y,re,im,phi` rows.
inline void write_snapshot_csv(std::ostream& os, const wave::Snapshot& s, std::span<const std::string> header = {}) {
    write_comment_lines(os, header);
    os << "t,y,re,im,phi\n";
    const std::string t = format_double(s.t);
    for (const auto& p : s.samples)
        os << t << ',' << format_double(p.y) << ',' << format_double(p.point.real()) << ','
           << format_double(p.point.imag()) << ',' << format_double(p.phi) << '\n';
}

/// The curve in grey and the same curve displaced along its local normal by
/// `offset_scale * phi`, drawn in blue.
inline void write_snapshot_svg(std::ostream& os, const wave::Snapshot& s, double offset_scale,
                               std::span<const std::string> header = {}) {
    const auto& smp = s.samples;
    std::vector<std::pair<double, double>> base, offset;
    detail::Bounds b;
    for (std::size_t i = 0; i < smp.size(); ++i) {
        koch::PlanePoint prev = smp[i == 0 ? 0 : i - 1].point;
        koch::PlanePoint next = smp[i + 1 == smp.size() ? i : i + 1].point;
        koch::PlanePoint tangent = next - prev;
        koch::PlanePoint normal = std::abs(tangent) > 0 ? koch::PlanePoint(-tangent.imag(), tangent.real()) / std::abs(tangent)
                                                        : koch::PlanePoint(0.0, 1.0);
        base.push_back(detail::to_screen(smp[i].point));
        offset.push_back(detail::to_screen(smp[i].point + offset_scale * smp[i].phi * normal));
        b.add(base.back().first, base.back().second);
        b.add(offset.back().first, offset.back().second);
    }
    detail::svg_open(os, b, header);
    detail::svg_polyline(os, base, "stroke=\"#999999\" stroke-width=\"1\"");
    detail::svg_polyline(os, offset, "stroke=\"#1f4fbf\" stroke-width=\"2\"");
    os << "</svg>\n";
}

/// `t,E` rows.
inline void write_energy_csv(std::ostream& os, std::span<const double> times, std::span<const double> energies,
                             std::span<const std::string> header = {}) {
    write_comment_lines(os, header);
    os << "t,E\n";
    for (std::size_t i = 0; i < times.size(); ++i)
        os << format_double(times[i]) << ',' << format_double(energies[i]) << '\n';
}

/// A parsed CSV table; numeric fields are kept as their original text.
struct CsvTable {
    std::vector<std::string> comments;
    std::vector<std::string> columns;
    struct Row {
        std::size_t line = 0;
        std::vector<std::string> fields;
    };
    std::vector<Row> rows;

    std::ptrdiff_t column(std::string_view name) const {
        auto it = std::find(columns.begin(), columns.end(), name);
        return it == columns.end() ? -1 : it - columns.begin();
    }
};

/// Raised for malformed rows; `line` is 1-based.
class CsvError : public Error {
public:
    CsvError(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

inline std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        auto comma = line.find(',', start);
        std::string_view f = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
        while (!f.empty() && (f.back() == ' ' || f.back() == '\t' || f.back() == '\r')) f.remove_suffix(1);
        out.emplace_back(f);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

/// Reads '#' comments, one header row, then rows with the same field count.
inline CsvTable read_csv(std::istream& is) {
    CsvTable t;
    std::string line;
    std::size_t n = 0;
    while (std::getline(is, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            t.comments.push_back(line);
            continue;
        }
        auto fields = split_csv_line(line);
        if (t.columns.empty()) {
            t.columns = std::move(fields);
            continue;
        }
        if (fields.size() != t.columns.size())
            throw CsvError("expected " + std::to_string(t.columns.size()) + " fields, got " +
                               std::to_string(fields.size()),
                           n);
        t.rows.push_back({n, std::move(fields)});
    }
    if (t.columns.empty()) throw CsvError("missing header row", n == 0 ? 1 : n);
    return t;
}

}  // namespace nnwave::io

// SPDX-License-Identifier: Apache-2.0
//
// d2dcache: coverage analysis and cache-energy optimization for clustered
// device-to-device networks.

#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace d2dcache {

/// Locale-independent number formatting (shared by CSV and SVG so reruns are
/// byte-identical).
inline std::string format_double(double value, int precision = 12) {
    std::array<char, 64> buf{};
    auto [ptr, ec] =
        std::to_chars(buf.data(), buf.data() + buf.size(), value,
                      std::chars_format::general, precision);
    if (ec != std::errc{})
        throw std::runtime_error("format_double: conversion failed");
    return std::string(buf.data(), ptr);
}

using Cell = std::variant<double, std::int64_t, std::string>;

inline std::string format_cell(const Cell& cell) {
    if (std::holds_alternative<double>(cell))
        return format_double(std::get<double>(cell));
    if (std::holds_alternative<std::int64_t>(cell))
        return std::to_string(std::get<std::int64_t>(cell));
    return std::get<std::string>(cell);
}

/// Column-ordered result rows; every row echoes the parameters that
/// produced it, so a CSV line is self-describing.
struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

inline void write_csv(std::ostream& out, const ResultTable& table) {
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        out << (c ? "," : "") << table.columns[c];
    out << '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size())
            throw std::invalid_argument("write_csv: row width != column count");
        for (std::size_t c = 0; c < row.size(); ++c)
            out << (c ? "," : "") << format_cell(row[c]);
        out << '\n';
    }
}

struct Series {
    std::string label;
    std::vector<std::array<double, 2>> points; // (x, y)
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
};

namespace detail {

struct Ticks {
    double lo = 0.0, hi = 1.0, step = 0.2;
};

inline Ticks nice_ticks(double lo, double hi) {
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double raw_step = (hi - lo) / 5.0;
    const double magnitude = std::pow(10.0, std::floor(std::log10(raw_step)));
    double step = magnitude;
    for (double mult : {1.0, 2.0, 2.5, 5.0, 10.0}) {
        step = mult * magnitude;
        if (step >= raw_step)
            break;
    }
    Ticks t;
    t.step = step;
    t.lo = std::floor(lo / step) * step;
    t.hi = std::ceil(hi / step) * step;
    return t;
}

} // namespace detail

/// Line chart as a self-contained SVG: axes, ticks, one polyline per series,
/// legend in series order. No external renderer involved.
inline std::string render_svg(const PlotSpec& plot) {
    constexpr double kWidth = 800, kHeight = 520;
    constexpr double kLeft = 80, kRight = 180, kTop = 50, kBottom = 60;
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;

    double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
    double y_min = x_min, y_max = -x_min;
    for (const auto& s : plot.series)
        for (const auto& [x, y] : s.points) {
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
            y_min = std::min(y_min, y);
            y_max = std::max(y_max, y);
        }
    if (!std::isfinite(x_min) || !std::isfinite(y_min))
        throw std::invalid_argument("render_svg: no points");

    const auto xt = detail::nice_ticks(x_min, x_max);
    const auto yt = detail::nice_ticks(y_min, y_max);
    auto sx = [&](double x) { return kLeft + (x - xt.lo) / (xt.hi - xt.lo) * plot_w; };
    auto sy = [&](double y) { return kTop + plot_h - (y - yt.lo) / (yt.hi - yt.lo) * plot_h; };

    static constexpr std::array<const char*, 6> kPalette{
        "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"520\" "
           "viewBox=\"0 0 800 520\">\n";
    svg += "<rect width=\"800\" height=\"520\" fill=\"white\"/>\n";
    svg += "<text x=\"" + format_double(kLeft + plot_w / 2) +
           "\" y=\"28\" text-anchor=\"middle\" font-size=\"18\" "
           "font-family=\"sans-serif\">" +
           plot.title + "</text>\n";

    for (double v = xt.lo; v <= xt.hi + 1e-9 * xt.step; v += xt.step) {
        const double px = sx(v);
        svg += "<line x1=\"" + format_double(px) + "\" y1=\"" + format_double(kTop) +
               "\" x2=\"" + format_double(px) + "\" y2=\"" + format_double(kTop + plot_h) +
               "\" stroke=\"#dddddd\"/>\n";
        svg += "<text x=\"" + format_double(px) + "\" y=\"" +
               format_double(kTop + plot_h + 20) +
               "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">" +
               format_double(v, 6) + "</text>\n";
    }
    for (double v = yt.lo; v <= yt.hi + 1e-9 * yt.step; v += yt.step) {
        const double py = sy(v);
        svg += "<line x1=\"" + format_double(kLeft) + "\" y1=\"" + format_double(py) +
               "\" x2=\"" + format_double(kLeft + plot_w) + "\" y2=\"" + format_double(py) +
               "\" stroke=\"#dddddd\"/>\n";
        svg += "<text x=\"" + format_double(kLeft - 8) + "\" y=\"" + format_double(py + 4) +
               "\" text-anchor=\"end\" font-size=\"12\" font-family=\"sans-serif\">" +
               format_double(v, 6) + "</text>\n";
    }
    svg += "<rect x=\"" + format_double(kLeft) + "\" y=\"" + format_double(kTop) +
           "\" width=\"" + format_double(plot_w) + "\" height=\"" + format_double(plot_h) +
           "\" fill=\"none\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + format_double(kLeft + plot_w / 2) + "\" y=\"" +
           format_double(kHeight - 14) +
           "\" text-anchor=\"middle\" font-size=\"14\" font-family=\"sans-serif\">" +
           plot.x_label + "</text>\n";
    svg += "<text x=\"20\" y=\"" + format_double(kTop + plot_h / 2) +
           "\" text-anchor=\"middle\" font-size=\"14\" font-family=\"sans-serif\" "
           "transform=\"rotate(-90 20 " +
           format_double(kTop + plot_h / 2) + ")\">" + plot.y_label + "</text>\n";

    for (std::size_t s = 0; s < plot.series.size(); ++s) {
        const char* color = kPalette[s % kPalette.size()];
        std::string path;
        for (const auto& [x, y] : plot.series[s].points) {
            path += path.empty() ? "M" : " L";
            path += format_double(sx(x), 8) + " " + format_double(sy(y), 8);
        }
        svg += "<path d=\"" + path + "\" fill=\"none\" stroke=\"";
        svg += color;
        svg += "\" stroke-width=\"2\"/>\n";
        for (const auto& [x, y] : plot.series[s].points)
            svg += "<circle cx=\"" + format_double(sx(x), 8) + "\" cy=\"" +
                   format_double(sy(y), 8) + "\" r=\"3\" fill=\"" + color + "\"/>\n";
        const double ly = kTop + 16 + 22 * static_cast<double>(s);
        svg += "<line x1=\"" + format_double(kWidth - kRight + 16) + "\" y1=\"" +
               format_double(ly) + "\" x2=\"" + format_double(kWidth - kRight + 46) +
               "\" y2=\"" + format_double(ly) + "\" stroke=\"" + color +
               "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + format_double(kWidth - kRight + 52) + "\" y=\"" +
               format_double(ly + 4) + "\" font-size=\"13\" font-family=\"sans-serif\">" +
               plot.series[s].label + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

struct EmitResult {
    std::filesystem::path csv_path;
    std::filesystem::path svg_path;
    bool svg_written = false;
    std::string warning;
};

/// Write results.csv (always) and plot.svg (when there is data) into
/// out_dir. An empty table produces a header-only CSV, no SVG, and a
/// warning.
inline EmitResult emit_outputs(const ResultTable& table, const PlotSpec& plot,
                               const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    EmitResult result;
    result.csv_path = out_dir / "results.csv";
    {
        std::ofstream csv(result.csv_path, std::ios::binary);
        if (!csv)
            throw std::runtime_error("emit_outputs: cannot write " + result.csv_path.string());
        write_csv(csv, table);
    }
    if (table.rows.empty()) {
        result.warning = "empty result table: wrote header-only CSV, skipped SVG";
        return result;
    }
    bool has_points = false;
    for (const auto& s : plot.series)
        has_points |= !s.points.empty();
    if (!has_points)
        return result; // nothing to draw (e.g. validation runs)
    result.svg_path = out_dir / "plot.svg";
    std::ofstream svg(result.svg_path, std::ios::binary);
    if (!svg)
        throw std::runtime_error("emit_outputs: cannot write " + result.svg_path.string());
    svg << render_svg(plot);
    result.svg_written = true;
    return result;
}

} // namespace d2dcache

#include "assure/plot.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace assure {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMargin = 64.0;

const char* kSeriesColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"};

std::string fmt(double v) {
    return format_value(v);
}

struct AxisRange {
    double lo, hi;
    double map(double v, double pix_lo, double pix_hi) const {
        const double t = hi == lo ? 0.5 : (v - lo) / (hi - lo);
        return pix_lo + t * (pix_hi - pix_lo);
    }
};

AxisRange column_range(const ColumnTable& t, std::size_t first_col, std::size_t last_col) {
    double lo = t.rows[0][first_col];
    double hi = lo;
    for (const auto& row : t.rows) {
        for (std::size_t c = first_col; c <= last_col; ++c) {
            lo = std::min(lo, row[c]);
            hi = std::max(hi, row[c]);
        }
    }
    if (lo == hi) {
        lo -= 0.5;
        hi += 0.5;
    }
    return {lo, hi};
}

void open_document(std::ostringstream& svg) {
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
        << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
}

void draw_axes(std::ostringstream& svg, const std::string& x_label, const std::string& y_label) {
    svg << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\""
        << kWidth - kMargin << "\" y2=\"" << kHeight - kMargin
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n"
        << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin
        << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"black\" stroke-width=\"1\"/>\n"
        << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 16
        << "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">" << x_label
        << "</text>\n"
        << "<text x=\"18\" y=\"" << kHeight / 2
        << "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\" "
           "transform=\"rotate(-90 18 "
        << kHeight / 2 << ")\">" << y_label << "</text>\n";
}

void draw_tick_labels(std::ostringstream& svg, const AxisRange& xr, const AxisRange& yr) {
    for (int i = 0; i <= 4; ++i) {
        const double fx = xr.lo + (xr.hi - xr.lo) * i / 4.0;
        const double px = xr.map(fx, kMargin, kWidth - kMargin);
        svg << "<text x=\"" << fmt(px) << "\" y=\"" << kHeight - kMargin + 18
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" << fmt(fx)
            << "</text>\n";
        const double fy = yr.lo + (yr.hi - yr.lo) * i / 4.0;
        const double py = yr.map(fy, kHeight - kMargin, kMargin);
        svg << "<text x=\"" << kMargin - 6 << "\" y=\"" << fmt(py + 4)
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << fmt(fy)
            << "</text>\n";
    }
}

std::string line_or_overlay(const ColumnTable& table, bool overlay) {
    if (table.rows.size() < 2) {
        throw std::domain_error("emit_plot: a line plot needs at least two points");
    }
    if (table.headers.size() < 2) {
        throw std::domain_error("emit_plot: table needs an x column and a value column");
    }
    const std::size_t n_series = overlay ? table.headers.size() - 1 : 1;
    const AxisRange xr = column_range(table, 0, 0);
    const AxisRange yr = column_range(table, 1, n_series);

    std::ostringstream svg;
    open_document(svg);
    draw_axes(svg, table.headers[0], overlay ? "value" : table.headers[1]);
    draw_tick_labels(svg, xr, yr);

    for (std::size_t s = 0; s < n_series; ++s) {
        svg << "<polyline fill=\"none\" stroke=\""
            << kSeriesColors[s % (sizeof(kSeriesColors) / sizeof(kSeriesColors[0]))]
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            if (r) svg << ' ';
            svg << fmt(xr.map(table.rows[r][0], kMargin, kWidth - kMargin)) << ','
                << fmt(yr.map(table.rows[r][s + 1], kHeight - kMargin, kMargin));
        }
        svg << "\"/>\n";
        if (overlay) {
            svg << "<text x=\"" << kWidth - kMargin + 4 << "\" y=\""
                << fmt(yr.map(table.rows.back()[s + 1], kHeight - kMargin, kMargin))
                << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\""
                << kSeriesColors[s % (sizeof(kSeriesColors) / sizeof(kSeriesColors[0]))] << "\">"
                << table.headers[s + 1] << "</text>\n";
        }
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string contour(const ColumnTable& table) {
    if (table.headers.size() < 3) {
        throw std::domain_error("emit_plot: contour needs n1, n2 and a value column");
    }
    std::set<double> xs, ys;
    for (const auto& row : table.rows) {
        xs.insert(row[0]);
        ys.insert(row[1]);
    }
    if (xs.size() < 2 || ys.size() < 2 || table.rows.size() != xs.size() * ys.size()) {
        throw std::domain_error("emit_plot: contour requires a complete rectangular grid");
    }
    std::map<double, std::size_t> xi, yi;
    std::size_t k = 0;
    for (double x : xs) xi[x] = k++;
    k = 0;
    for (double y : ys) yi[y] = k++;

    const AxisRange vr = column_range(table, 2, 2);
    const double cell_w = (kWidth - 2 * kMargin) / static_cast<double>(xs.size());
    const double cell_h = (kHeight - 2 * kMargin) / static_cast<double>(ys.size());

    std::ostringstream svg;
    open_document(svg);
    draw_axes(svg, table.headers[0], table.headers[1]);
    for (const auto& row : table.rows) {
        const double t = vr.hi == vr.lo ? 0.5 : (row[2] - vr.lo) / (vr.hi - vr.lo);
        const int shade = 40 + static_cast<int>(std::lround(t * 215.0));  // lighter = higher
        const double x = kMargin + cell_w * static_cast<double>(xi[row[0]]);
        const double y = kHeight - kMargin - cell_h * static_cast<double>(yi[row[1]] + 1);
        svg << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\"" << fmt(cell_w)
            << "\" height=\"" << fmt(cell_h) << "\" fill=\"rgb(" << shade << ',' << shade << ','
            << shade << ")\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace

std::string emit_plot(const ColumnTable& table, PlotKind kind) {
    if (table.rows.empty()) {
        throw std::domain_error("emit_plot: table is empty");
    }
    switch (kind) {
        case PlotKind::line: return line_or_overlay(table, false);
        case PlotKind::overlay: return line_or_overlay(table, true);
        default: return contour(table);
    }
}

}  // namespace assure

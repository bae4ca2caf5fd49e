#include "magnoblock/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace magnoblock {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0, kRight = 30.0, kTop = 40.0, kBottom = 60.0;

const std::array<const char*, 8> kColors{"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                         "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
        if (hi == lo) lo -= 0.5, hi += 0.5;
    }
};

void header(std::ostream& os, const PlotLabels& labels) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
       << escape(labels.title) << "</text>\n"
       << "<text x=\"" << kLeft + (kWidth - kLeft - kRight) / 2 << "\" y=\"" << kHeight - 15
       << "\" text-anchor=\"middle\">" << escape(labels.x_label) << "</text>\n"
       << "<text x=\"18\" y=\"" << kTop + (kHeight - kTop - kBottom) / 2
       << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << kTop + (kHeight - kTop - kBottom) / 2
       << ")\">" << escape(labels.y_label) << "</text>\n";
}

void axes(std::ostream& os, const Range& xr, const Range& yr) {
    const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
    os << "<rect x=\"" << x0 << "\" y=\"" << y1 << "\" width=\"" << x1 - x0 << "\" height=\"" << y0 - y1
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fx = x0 + (x1 - x0) * i / 4.0;
        const double fy = y0 - (y0 - y1) * i / 4.0;
        os << "<text x=\"" << fx << "\" y=\"" << y0 + 18 << "\" text-anchor=\"middle\">"
           << num(xr.lo + (xr.hi - xr.lo) * i / 4.0) << "</text>\n";
        os << "<text x=\"" << x0 - 6 << "\" y=\"" << fy + 4 << "\" text-anchor=\"end\">"
           << num(yr.lo + (yr.hi - yr.lo) * i / 4.0) << "</text>\n";
    }
}

} // namespace

void write_line_plot_svg(std::ostream& os, const PlotLabels& labels,
                         const std::vector<PlotSeries>& series) {
    Range xr, yr;
    for (const auto& s : series) {
        for (double x : s.x) xr.add(x);
        for (const auto& y : s.y)
            if (y) yr.add(*y);
    }
    xr.pad();
    yr.pad();
    auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * (kWidth - kLeft - kRight); };
    auto py = [&](double y) { return kHeight - kBottom - (y - yr.lo) / (yr.hi - yr.lo) * (kHeight - kTop - kBottom); };

    header(os, labels);
    axes(os, xr, yr);
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = kColors[k % kColors.size()];
        std::string path;
        bool pen_down = false;
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!s.y[i] || !std::isfinite(*s.y[i])) {
                pen_down = false;
                continue;
            }
            path += (pen_down ? " L " : " M ") + num(px(s.x[i])) + " " + num(py(*s.y[i]));
            pen_down = true;
        }
        os << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
        if (!s.label.empty())
            os << "<text x=\"" << kWidth - kRight - 8 << "\" y=\"" << kTop + 16 + 15 * k
               << "\" text-anchor=\"end\" fill=\"" << color << "\">" << escape(s.label) << "</text>\n";
    }
    os << "</svg>\n";
}

void write_heatmap_svg(std::ostream& os, const PlotLabels& labels, const std::vector<double>& x,
                       const std::vector<double>& y,
                       const std::vector<std::vector<std::optional<double>>>& values) {
    Range xr, yr, vr;
    for (double v : x) xr.add(v);
    for (double v : y) yr.add(v);
    for (const auto& row : values)
        for (const auto& v : row)
            if (v) vr.add(*v);
    xr.pad();
    yr.pad();
    vr.pad();

    header(os, labels);
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    const double cw = pw / static_cast<double>(std::max<std::size_t>(1, x.size()));
    const double ch = ph / static_cast<double>(std::max<std::size_t>(1, y.size()));
    for (std::size_t r = 0; r < values.size() && r < y.size(); ++r) {
        for (std::size_t c = 0; c < values[r].size() && c < x.size(); ++c) {
            std::string fill = "#cccccc";
            if (const auto& v = values[r][c]) {
                // Blue (low) to yellow (high).
                const double t = std::clamp((*v - vr.lo) / (vr.hi - vr.lo), 0.0, 1.0);
                char buf[16];
                std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(255 * t),
                              static_cast<int>(40 + 200 * t), static_cast<int>(160 * (1.0 - t) + 40));
                fill = buf;
            }
            os << "<rect x=\"" << num(kLeft + cw * c) << "\" y=\"" << num(kTop + ph - ch * (r + 1))
               << "\" width=\"" << num(cw + 0.5) << "\" height=\"" << num(ch + 0.5) << "\" fill=\"" << fill
               << "\"/>\n";
        }
    }
    axes(os, xr, yr);
    os << "<text x=\"" << kWidth - kRight << "\" y=\"" << kTop - 6 << "\" text-anchor=\"end\">range "
       << num(vr.lo) << " .. " << num(vr.hi) << "</text>\n";
    os << "</svg>\n";
}

} // namespace magnoblock

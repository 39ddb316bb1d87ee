#pragma once

// Static SVG of the empirical survival function P(longest edge >= x), with a
// vertical line at each threshold and a horizontal line at each eps.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "delab/errors.hpp"
#include "delab/harness.hpp"

namespace delab {

struct SvgLayout {
    double width = 640.0;
    double height = 400.0;
    double left = 60.0;
    double right = 20.0;
    double top = 30.0;
    double bottom = 50.0;
};

namespace detail {

inline std::string fmt3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

} // namespace detail

/// Horizontal plot range [0, x_max]: the largest observed edge or finite
/// threshold, padded by 5%.
inline double svg_x_max(const ExperimentSummary& summary, const std::vector<TrialRecord>& records) {
    double hi = 0.0;
    for (const auto& r : records)
        if (!r.failed) hi = std::max(hi, r.longest_edge);
    for (const auto& row : summary.rows)
        if (std::isfinite(row.threshold)) hi = std::max(hi, row.threshold);
    return hi > 0.0 ? hi * 1.05 : 1.0;
}

inline std::string render_svg(const ExperimentSummary& summary, const std::vector<TrialRecord>& records,
                              const SvgLayout& L = {}) {
    std::vector<double> xs;
    for (const auto& r : records)
        if (!r.failed) xs.push_back(r.longest_edge);
    if (xs.empty()) throw ConfigError("render_svg: no completed trial records");
    if (summary.rows.empty()) throw ConfigError("render_svg: summary has no eps rows");
    std::sort(xs.begin(), xs.end());

    const double x_max = svg_x_max(summary, records);
    const double pw = L.width - L.left - L.right;
    const double ph = L.height - L.top - L.bottom;
    auto px = [&](double x) { return L.left + pw * x / x_max; };
    auto py = [&](double p) { return L.top + ph * (1.0 - p); };
    using detail::fmt3;

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt3(L.width) + "\" height=\"" + fmt3(L.height) +
         "\" viewBox=\"0 0 " + fmt3(L.width) + " " + fmt3(L.height) + "\">\n";
    s += "<style>.survival{fill:none;stroke:#1f4e9a;stroke-width:1.5}.threshold{stroke:#b22222;stroke-dasharray:4 3}"
         ".eps{stroke:#555;stroke-dasharray:2 3}.axis{stroke:#000}text{font:11px sans-serif}</style>\n";
    s += "<rect x=\"0\" y=\"0\" width=\"" + fmt3(L.width) + "\" height=\"" + fmt3(L.height) + "\" fill=\"#fff\"/>\n";
    const auto& c = summary.config;
    s += "<text x=\"" + fmt3(L.left) + "\" y=\"18\">" + to_string(c.kind) + " d=" + std::to_string(c.d) +
         " n=" + std::to_string(c.n) + " " + to_string(c.direction) + " " + to_string(c.form) +
         " trials=" + std::to_string(xs.size()) + "</text>\n";

    // axes
    s += "<line class=\"axis\" x1=\"" + fmt3(px(0)) + "\" y1=\"" + fmt3(py(0)) + "\" x2=\"" + fmt3(px(x_max)) +
         "\" y2=\"" + fmt3(py(0)) + "\"/>\n";
    s += "<line class=\"axis\" x1=\"" + fmt3(px(0)) + "\" y1=\"" + fmt3(py(0)) + "\" x2=\"" + fmt3(px(0)) +
         "\" y2=\"" + fmt3(py(1)) + "\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double p = i / 4.0;
        const double x = x_max * p;
        s += "<text x=\"" + fmt3(px(x)) + "\" y=\"" + fmt3(py(0) + 16) + "\" text-anchor=\"middle\">" +
             detail::fmt_number(x, "%.3g") + "</text>\n";
        s += "<text x=\"" + fmt3(px(0) - 6) + "\" y=\"" + fmt3(py(p) + 4) + "\" text-anchor=\"end\">" +
             detail::fmt_number(p, "%.2g") + "</text>\n";
    }
    s += "<text x=\"" + fmt3(L.left + pw / 2) + "\" y=\"" + fmt3(L.height - 8) +
         "\" text-anchor=\"middle\">longest edge x</text>\n";

    // Survival S(x) = #{x_i >= x}/T; it drops by 1/T at each sorted sample.
    const double T = static_cast<double>(xs.size());
    std::string d = "M" + fmt3(px(0)) + "," + fmt3(py(1));
    for (std::size_t i = 0; i < xs.size(); ++i) {
        d += " H" + fmt3(px(xs[i]));
        d += " V" + fmt3(py(static_cast<double>(xs.size() - i - 1) / T));
    }
    s += "<path class=\"survival\" d=\"" + d + "\"/>\n";

    for (std::size_t e = 0; e < summary.rows.size(); ++e) {
        const auto& row = summary.rows[e];
        if (std::isfinite(row.threshold)) {
            s += "<line class=\"threshold\" data-eps=\"" + detail::fmt_number(row.epsilon, "%.6g") + "\" x1=\"" +
                 fmt3(px(row.threshold)) + "\" y1=\"" + fmt3(py(0)) + "\" x2=\"" + fmt3(px(row.threshold)) +
                 "\" y2=\"" + fmt3(py(1)) + "\"/>\n";
        }
        s += "<line class=\"eps\" data-eps=\"" + detail::fmt_number(row.epsilon, "%.6g") + "\" x1=\"" + fmt3(px(0)) +
             "\" y1=\"" + fmt3(py(row.epsilon)) + "\" x2=\"" + fmt3(px(x_max)) + "\" y2=\"" + fmt3(py(row.epsilon)) +
             "\"/>\n";
    }
    s += "</svg>\n";
    return s;
}

} // namespace delab

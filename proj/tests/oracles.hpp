#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library's numeric kernels.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <set>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace oracle {

inline double integrate(auto f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 6, 1e-14);
}

/// Unit-measure radii from the textbook surface/volume formulas.
inline double sphere_radius(int d) {
    const double area = 2.0 * std::pow(std::numbers::pi, (d + 1) / 2.0) / boost::math::tgamma((d + 1) / 2.0);
    return std::pow(area, -1.0 / d);
}
inline double ball_radius(int d) {
    const double vol = std::pow(std::numbers::pi, d / 2.0) / boost::math::tgamma(d / 2.0 + 1.0);
    return std::pow(vol, -1.0 / d);
}

/// Cap area fraction by quadrature of sin^(d-1) over the angular radius.
inline double cap_area(int d, double x) {
    const double theta = x / (2.0 * sphere_radius(d));
    auto f = [d](double p) { return std::pow(std::sin(p), d - 1); };
    return integrate(f, 0.0, theta) / integrate(f, 0.0, std::numbers::pi);
}

/// Minor ball-cap volume fraction by slicing along the axis: each slice at
/// height t is a (d-1)-ball of radius sqrt(R^2 - t^2). Integrated in the
/// polar angle (t = R cos phi) to keep the integrand smooth at the pole.
inline double cap_volume(int d, double x) {
    const double R = ball_radius(d);
    const double slice = std::pow(std::numbers::pi, (d - 1) / 2.0) / boost::math::tgamma((d - 1) / 2.0 + 1.0);
    auto f = [d](double phi) { return std::pow(std::sin(phi), d); };
    return slice * std::pow(R, d) * integrate(f, 0.0, std::asin(std::min(1.0, x / (2.0 * R))));
}

/// P(max gap >= x) for n uniform points on a circle of circumference 1.
inline double max_gap_survival(int n, double x) {
    long double s = 0.0L;
    long double binom = 1.0L;
    for (int j = 1; j <= n && j * x < 1.0; ++j) {
        binom = binom * (n - j + 1) / j;
        const long double term = binom * std::pow(1.0L - static_cast<long double>(j) * x, n - 1);
        s += (j % 2 == 1) ? term : -term;
    }
    return static_cast<double>(std::clamp(s, 0.0L, 1.0L));
}

/// exp(-x/(1-x)) <= 1-x <= exp(-x) on (0, 1).
inline bool inequality_one(double x) { return std::exp(-x / (1.0 - x)) <= 1.0 - x && 1.0 - x <= std::exp(-x); }

using Pairs = std::set<std::pair<std::size_t, std::size_t>>;

/// Planar Delaunay edges by the in-circle determinant over all triples, plus
/// convex-hull edges (empty halfplanes).
inline Pairs planar_delaunay(const std::vector<std::pair<double, double>>& p) {
    const std::size_t n = p.size();
    auto orient = [&](std::size_t a, std::size_t b, std::size_t c) {
        return (p[b].first - p[a].first) * (p[c].second - p[a].second) -
               (p[b].second - p[a].second) * (p[c].first - p[a].first);
    };
    auto incircle = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t q) {
        double m[3][3];
        const std::size_t idx[3] = {a, b, c};
        for (int r = 0; r < 3; ++r) {
            const double dx = p[idx[r]].first - p[q].first;
            const double dy = p[idx[r]].second - p[q].second;
            m[r][0] = dx;
            m[r][1] = dy;
            m[r][2] = dx * dx + dy * dy;
        }
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    };
    Pairs out;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            for (std::size_t c = b + 1; c < n; ++c) {
                const double o = orient(a, b, c);
                if (o == 0.0) continue;
                bool empty = true;
                for (std::size_t q = 0; q < n && empty; ++q) {
                    if (q == a || q == b || q == c) continue;
                    if (incircle(a, b, c, q) * o > 0.0) empty = false;
                }
                if (empty) {
                    out.insert({a, b});
                    out.insert({a, c});
                    out.insert({b, c});
                }
            }
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            int pos = 0, neg = 0;
            for (std::size_t q = 0; q < n; ++q) {
                if (q == a || q == b) continue;
                const double o = orient(a, b, q);
                if (o > 0) ++pos;
                if (o < 0) ++neg;
            }
            if (pos == 0 || neg == 0) out.insert({a, b});
        }
    return out;
}

/// Facets of the convex hull of points in R^3 by checking every triple.
/// Returns the sorted vertex triples.
inline std::set<std::vector<std::size_t>> hull3_facets(const std::vector<std::vector<double>>& p, double tol = 1e-12) {
    const std::size_t n = p.size();
    std::set<std::vector<std::size_t>> out;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            for (std::size_t c = b + 1; c < n; ++c) {
                double u[3], v[3], nrm[3];
                for (int k = 0; k < 3; ++k) {
                    u[k] = p[b][k] - p[a][k];
                    v[k] = p[c][k] - p[a][k];
                }
                nrm[0] = u[1] * v[2] - u[2] * v[1];
                nrm[1] = u[2] * v[0] - u[0] * v[2];
                nrm[2] = u[0] * v[1] - u[1] * v[0];
                int pos = 0, neg = 0;
                for (std::size_t q = 0; q < n; ++q) {
                    if (q == a || q == b || q == c) continue;
                    double s = 0.0;
                    for (int k = 0; k < 3; ++k) s += nrm[k] * (p[q][k] - p[a][k]);
                    if (s > tol) ++pos;
                    if (s < -tol) ++neg;
                }
                if (pos == 0 || neg == 0) out.insert({a, b, c});
            }
    return out;
}

} // namespace oracle

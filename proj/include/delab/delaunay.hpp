#pragma once

// Delaunay graphs of points on the unit-area sphere and in the unit-volume
// ball, built two independent ways:
//
//  * delaunay_graph(): convex-hull lifting. On the sphere an empty cap is the
//    outer side of a hyperplane, so the Delaunay graph is the edge skeleton of
//    the hull in R^(d+1). In the ball an empty ball becomes a hyperplane below
//    the paraboloid p -> (p, |p|^2), so the graph is the skeleton of the lower
//    hull of the lifted points. Input hull edges come out of this naturally:
//    they admit empty halfspaces, the limit of empty balls of infinite radius.
//
//  * certify_edge(): one small LP per pair, searching for a witness function
//    f(p) = s|p|^2 + a.p + t with f(p_i) = f(p_j) = 0 and f(p_k) > 0 for all
//    other k. On the sphere s = 0 (a hyperplane cutting off an empty cap). In
//    the ball s >= 0 covers both empty balls (s > 0) and empty halfspaces
//    (s = 0).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "delab/errors.hpp"
#include "delab/hull.hpp"
#include "delab/lp.hpp"
#include "delab/sample.hpp"

namespace delab {

struct Edge {
    std::size_t i = 0; // i < j
    std::size_t j = 0;
    double length = 0.0;

    friend bool operator==(const Edge& a, const Edge& b) { return a.i == b.i && a.j == b.j; }
};

struct DelaunayGraph {
    std::size_t n = 0;
    std::vector<Edge> edges; // sorted lexicographically by (i, j), no duplicates

    [[nodiscard]] std::vector<std::pair<std::size_t, std::size_t>> index_pairs() const {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        out.reserve(edges.size());
        for (const Edge& e : edges) out.emplace_back(e.i, e.j);
        return out;
    }
};

namespace detail {

inline DelaunayGraph graph_from_pairs(const PointSet& ps, std::vector<std::pair<std::size_t, std::size_t>> pairs) {
    for (auto& p : pairs)
        if (p.first > p.second) std::swap(p.first, p.second);
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    DelaunayGraph g;
    g.n = ps.size();
    g.edges.reserve(pairs.size());
    for (const auto& [i, j] : pairs) g.edges.push_back({i, j, ps.distance(i, j)});
    return g;
}

inline void require_all_vertices(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    std::vector<char> seen(n, 0);
    for (const auto& [i, j] : pairs) seen[i] = seen[j] = 1;
    for (std::size_t i = 0; i < n; ++i)
        if (!seen[i])
            throw DegeneracyError("delaunay_graph: point " + std::to_string(i) +
                                  " is not a hull vertex (coincident or coplanar within tolerance)");
}

inline std::vector<std::pair<std::size_t, std::size_t>> facet_edges(const std::vector<HullFacet>& facets, int last_coord_sign) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (const HullFacet& f : facets) {
        if (last_coord_sign < 0 && !(f.normal.back() < 0.0)) continue;
        for (std::size_t a = 0; a < f.vertices.size(); ++a)
            for (std::size_t b = a + 1; b < f.vertices.size(); ++b) pairs.emplace_back(f.vertices[a], f.vertices[b]);
    }
    return pairs;
}

// Points translated to their centroid; Delaunay structure is translation invariant.
inline std::vector<double> centered(const PointSet& ps, std::vector<double>* centroid_out = nullptr) {
    const std::size_t m = ps.dim();
    std::vector<double> c(m, 0.0);
    for (std::size_t i = 0; i < ps.size(); ++i)
        for (std::size_t k = 0; k < m; ++k) c[k] += ps.point(i)[k];
    for (double& v : c) v /= static_cast<double>(ps.size());
    std::vector<double> q(ps.coords.size());
    for (std::size_t i = 0; i < ps.size(); ++i)
        for (std::size_t k = 0; k < m; ++k) q[i * m + k] = ps.point(i)[k] - c[k];
    if (centroid_out) *centroid_out = std::move(c);
    return q;
}

inline std::vector<double> lifted(const PointSet& ps) {
    const std::size_t m = ps.dim();
    const std::vector<double> q = centered(ps);
    std::vector<double> out(ps.size() * (m + 1));
    for (std::size_t i = 0; i < ps.size(); ++i) {
        double r2 = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            out[i * (m + 1) + k] = q[i * m + k];
            r2 += q[i * m + k] * q[i * m + k];
        }
        out[i * (m + 1) + m] = r2;
    }
    return out;
}

inline DelaunayGraph one_dimensional_graph(const PointSet& ps) {
    const std::size_t n = ps.size();
    std::vector<double> key(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto p = ps.point(i);
        key[i] = ps.spec.kind == DomainKind::SphereNoBoundary ? std::atan2(p[1], p[0]) : p[0];
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key[a] < key[b] || (key[a] == key[b] && a < b); });
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (key[order[k]] == key[order[k + 1]])
            throw DegeneracyError("delaunay_graph: coincident points " + std::to_string(order[k]) + " and " +
                                  std::to_string(order[k + 1]));
        pairs.emplace_back(order[k], order[k + 1]);
    }
    if (ps.spec.kind == DomainKind::SphereNoBoundary) pairs.emplace_back(order[n - 1], order[0]);
    return graph_from_pairs(ps, std::move(pairs));
}

} // namespace detail

/// Delaunay graph by convex-hull lifting (d = 1 handled by sorting).
inline DelaunayGraph delaunay_graph(const PointSet& ps, const HullOptions& opts = {}) {
    const int d = ps.spec.d;
    if (ps.size() <= static_cast<std::size_t>(d) + 1) throw ConfigError("delaunay_graph: need n > d+1 points");
    if (d == 1) return detail::one_dimensional_graph(ps);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    if (ps.spec.kind == DomainKind::SphereNoBoundary) {
        const auto facets = convex_hull(ps.coords, ps.dim(), opts);
        pairs = detail::facet_edges(facets, 0);
    } else {
        const auto lift = detail::lifted(ps);
        const auto facets = convex_hull(lift, ps.dim() + 1, opts);
        pairs = detail::facet_edges(facets, -1);
    }
    detail::require_all_vertices(ps.size(), pairs);
    return detail::graph_from_pairs(ps, std::move(pairs));
}

enum class WitnessKind { None, Ball, Halfspace, Hyperplane };

/// Outcome of the LP test for one pair. When accepted, the witness function
/// f(p) = s|p|^2 + a.p + t vanishes at both endpoints and is positive at all
/// other points: {f < 0} is then an empty ball (s > 0), an empty halfspace
/// (ball domain, s = 0), or an empty cap cut off by a hyperplane (sphere).
struct EdgeCertificate {
    std::size_t i = 0;
    std::size_t j = 0;
    bool accepted = false;
    double margin = 0.0; // optimal LP margin, normalized witness
    WitnessKind kind = WitnessKind::None;
    double s = 0.0;
    std::vector<double> a;
    double t = 0.0;

    [[nodiscard]] double evaluate(std::span<const double> p) const {
        double v = t;
        double r2 = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) {
            v += a[k] * p[k];
            r2 += p[k] * p[k];
        }
        return v + s * r2;
    }

    /// Center of the empty ball (only for kind == Ball).
    [[nodiscard]] std::vector<double> center() const {
        std::vector<double> c(a.size());
        for (std::size_t k = 0; k < a.size(); ++k) c[k] = -a[k] / (2.0 * s);
        return c;
    }
};

/// Tests whether {i, j} is a Delaunay edge by maximizing the emptiness margin
/// of a witness function over a box-normalized family.
inline EdgeCertificate certify_edge(const PointSet& ps, std::size_t i, std::size_t j, double relative_tolerance = 1e-9) {
    const std::size_t n = ps.size();
    if (i == j || i >= n || j >= n) throw PreconditionError("certify_edge: need two distinct valid indices");
    const std::size_t m = ps.dim();
    const bool ball = ps.spec.kind == DomainKind::BallWithBoundary;
    std::vector<double> centroid(m, 0.0);
    const std::vector<double> q = ball ? detail::centered(ps, &centroid) : ps.coords;
    auto qp = [&](std::size_t idx) { return std::span<const double>(q.data() + idx * m, m); };
    auto norm2 = [](std::span<const double> v) {
        double s = 0.0;
        for (double x : v) s += x * x;
        return s;
    };
    const double scale = coordinate_scale(q);
    const double tol = relative_tolerance * scale;

    // Variables: w[0..m), then s (ball only), then the margin.
    const std::size_t nv = m + (ball ? 1 : 0) + 1;
    const std::size_t s_idx = m;
    const std::size_t margin_idx = nv - 1;
    LinearProgram lp(nv);
    for (std::size_t k = 0; k < m; ++k) {
        lp.lower[k] = -1.0;
        lp.upper[k] = 1.0;
    }
    if (ball) {
        lp.lower[s_idx] = 0.0;
        lp.upper[s_idx] = 1.0;
    }
    lp.lower[margin_idx] = 0.0;
    lp.objective[margin_idx] = 1.0;

    // In centered coordinates g(q) = s|q|^2 - 2 w.q + t with g(q_i) = 0,
    // i.e. g(q) = s(|q|^2 - |q_i|^2) - 2 w.(q - q_i).
    const auto qi = qp(i);
    const double qi2 = norm2(qi);
    auto coefficients = [&](std::size_t k) {
        std::vector<double> row(nv, 0.0);
        const auto qk = qp(k);
        for (std::size_t c = 0; c < m; ++c) row[c] = -2.0 * (qk[c] - qi[c]);
        if (ball) row[s_idx] = norm2(qk) - qi2;
        return row;
    };
    lp.add_eq(coefficients(j), 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        // g(q_k) >= margin  <=>  -g(q_k) + margin <= 0
        std::vector<double> row = coefficients(k);
        for (double& v : row) v = -v;
        row[margin_idx] = 1.0;
        lp.add_le(std::move(row), 0.0);
    }
    const LpSolution sol = solve_lp(lp);
    if (sol.status == LpStatus::Unbounded) throw DegeneracyError("certify_edge: unbounded margin LP");
    if (sol.status == LpStatus::Infeasible) throw DegeneracyError("certify_edge: infeasible margin LP");

    EdgeCertificate cert;
    cert.i = std::min(i, j);
    cert.j = std::max(i, j);
    cert.margin = sol.x[margin_idx];
    cert.accepted = cert.margin > tol;
    if (!cert.accepted) return cert;

    // Back to original coordinates: p = q + c.
    const double s = ball ? sol.x[s_idx] : 0.0;
    std::vector<double> w(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(m));
    double t_centered = -s * qi2;
    for (std::size_t c = 0; c < m; ++c) t_centered += 2.0 * w[c] * qi[c];
    cert.s = s;
    cert.a.assign(m, 0.0);
    double c2 = 0.0, wc = 0.0;
    for (std::size_t c = 0; c < m; ++c) {
        cert.a[c] = -2.0 * s * centroid[c] - 2.0 * w[c];
        c2 += centroid[c] * centroid[c];
        wc += w[c] * centroid[c];
    }
    cert.t = t_centered + s * c2 + 2.0 * wc;
    if (!ball)
        cert.kind = WitnessKind::Hyperplane;
    else
        cert.kind = s > relative_tolerance ? WitnessKind::Ball : WitnessKind::Halfspace;
    return cert;
}

/// Direct substitution check of an accepted certificate against all points.
inline bool verify_certificate(const PointSet& ps, const EdgeCertificate& cert, double tolerance = 1e-9) {
    if (!cert.accepted) return false;
    if (std::fabs(cert.evaluate(ps.point(cert.i))) > tolerance) return false;
    if (std::fabs(cert.evaluate(ps.point(cert.j))) > tolerance) return false;
    for (std::size_t k = 0; k < ps.size(); ++k) {
        if (k == cert.i || k == cert.j) continue;
        if (!(cert.evaluate(ps.point(k)) > 0.0)) return false;
    }
    return true;
}

/// Delaunay graph from certify_edge over all pairs. O(n^2) LPs; meant as an
/// oracle for small instances.
inline DelaunayGraph certified_graph(const PointSet& ps) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < ps.size(); ++i)
        for (std::size_t j = i + 1; j < ps.size(); ++j)
            if (certify_edge(ps, i, j).accepted) pairs.emplace_back(i, j);
    return detail::graph_from_pairs(ps, std::move(pairs));
}

/// Longest edge; ties go to the lexicographically smallest (i, j).
inline Edge longest_edge(const DelaunayGraph& g) {
    if (g.edges.empty()) throw std::logic_error("longest_edge: empty edge set");
    Edge best = g.edges.front();
    for (const Edge& e : g.edges)
        if (e.length > best.length) best = e; // edges are sorted, so the first maximum wins ties
    return best;
}

/// CSV dump: `i,j,length`.
inline void write_graph_csv(const DelaunayGraph& g, std::ostream& os) {
    os << "i,j,length\n";
    char buf[32];
    for (const Edge& e : g.edges) {
        std::snprintf(buf, sizeof buf, "%.17g", e.length);
        os << e.i << ',' << e.j << ',' << buf << '\n';
    }
}

} // namespace delab

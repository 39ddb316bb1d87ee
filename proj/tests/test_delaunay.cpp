#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "delab/delaunay.hpp"
#include "delab/sample.hpp"
#include "oracles.hpp"

using namespace delab;

namespace {

constexpr auto S = DomainKind::SphereNoBoundary;
constexpr auto B = DomainKind::BallWithBoundary;

oracle::Pairs as_set(const DelaunayGraph& g) {
    oracle::Pairs out;
    for (const auto& e : g.edges) out.insert({e.i, e.j});
    return out;
}

PointSet quad() { return PointSet::from_coords(DomainSpec::make(B, 2), {0, 0, 1, 0, 0.9, 0.9, 0, 1}); }

// Random orthogonal matrix by Gram-Schmidt on Gaussian columns.
std::vector<double> random_rotation(std::size_t m, std::mt19937_64& gen) {
    std::normal_distribution<double> nd;
    std::vector<double> q(m * m);
    for (double& v : q) v = nd(gen);
    for (std::size_t c = 0; c < m; ++c) {
        for (std::size_t p = 0; p < c; ++p) {
            double dot = 0;
            for (std::size_t r = 0; r < m; ++r) dot += q[r * m + c] * q[r * m + p];
            for (std::size_t r = 0; r < m; ++r) q[r * m + c] -= dot * q[r * m + p];
        }
        double nn = 0;
        for (std::size_t r = 0; r < m; ++r) nn += q[r * m + c] * q[r * m + c];
        for (std::size_t r = 0; r < m; ++r) q[r * m + c] /= std::sqrt(nn);
    }
    return q;
}

PointSet rotated(const PointSet& ps, const std::vector<double>& q) {
    const std::size_t m = ps.dim();
    PointSet out = ps;
    for (std::size_t i = 0; i < ps.size(); ++i)
        for (std::size_t r = 0; r < m; ++r) {
            double v = 0;
            for (std::size_t c = 0; c < m; ++c) v += q[r * m + c] * ps.point(i)[c];
            out.point(i)[r] = v;
        }
    return out;
}

} // namespace

TEST(DelaunayGraph, QuadInstance) {
    const auto ps = quad();
    const auto g = delaunay_graph(ps);
    EXPECT_EQ(as_set(g), (oracle::Pairs{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {2, 3}}));
    const auto e = longest_edge(g);
    EXPECT_EQ(e.i, 0u);
    EXPECT_EQ(e.j, 2u);
    EXPECT_NEAR(e.length, 0.9 * std::sqrt(2.0), 1e-15);
}

TEST(CertifyEdge, QuadInstance) {
    const auto ps = quad();
    EXPECT_FALSE(certify_edge(ps, 1, 3).accepted);
    const auto c = certify_edge(ps, 0, 2);
    EXPECT_TRUE(c.accepted);
    EXPECT_TRUE(verify_certificate(ps, c));
    EXPECT_EQ(as_set(certified_graph(ps)), as_set(delaunay_graph(ps)));
}

TEST(CertifyEdge, BallHullEdgesAreAccepted) {
    const auto ps = sample_ball(2, 40, 6, 0);
    std::vector<std::pair<double, double>> p;
    for (std::size_t i = 0; i < ps.size(); ++i) p.emplace_back(ps.point(i)[0], ps.point(i)[1]);
    // hull edges: all other points strictly on one side
    for (std::size_t a = 0; a < ps.size(); ++a)
        for (std::size_t b = a + 1; b < ps.size(); ++b) {
            int pos = 0, neg = 0;
            for (std::size_t q = 0; q < ps.size(); ++q) {
                if (q == a || q == b) continue;
                const double o = (p[b].first - p[a].first) * (p[q].second - p[a].second) -
                                 (p[b].second - p[a].second) * (p[q].first - p[a].first);
                (o > 0 ? pos : neg)++;
            }
            if (pos && neg) continue;
            const auto c = certify_edge(ps, a, b);
            EXPECT_TRUE(c.accepted);
            EXPECT_TRUE(verify_certificate(ps, c));
            EXPECT_NE(c.kind, WitnessKind::Hyperplane);
        }
}

TEST(CertifyEdge, CircleAdjacency) {
    const auto ps = sample_sphere(1, 12, 4, 0);
    const auto g = delaunay_graph(ps);
    const auto edges = as_set(g);
    for (std::size_t i = 0; i < ps.size(); ++i)
        for (std::size_t j = i + 1; j < ps.size(); ++j) {
            const auto c = certify_edge(ps, i, j);
            EXPECT_EQ(c.accepted, edges.count({i, j}) == 1) << i << "," << j;
            if (c.accepted) {
                EXPECT_EQ(c.kind, WitnessKind::Hyperplane);
                EXPECT_TRUE(verify_certificate(ps, c));
            }
        }
    EXPECT_THROW(certify_edge(ps, 3, 3), PreconditionError);
}

TEST(DelaunayGraph, BallD2MatchesInCircleOracle) {
    for (std::uint64_t t = 0; t < 40; ++t) {
        const auto ps = sample_ball(2, 30, 12, t);
        std::vector<std::pair<double, double>> p;
        for (std::size_t i = 0; i < ps.size(); ++i) p.emplace_back(ps.point(i)[0], ps.point(i)[1]);
        const auto g = delaunay_graph(ps);
        EXPECT_EQ(as_set(g), oracle::planar_delaunay(p)) << "trial " << t;
        EXPECT_LE(g.edges.size(), 3 * ps.size() - 6);
    }
}

TEST(DelaunayGraph, SphereD2EulerCount) {
    for (std::uint64_t t = 0; t < 100; ++t) {
        const auto g = delaunay_graph(sample_sphere(2, 50, 31, t));
        EXPECT_EQ(g.edges.size(), 144u);
    }
}

TEST(DelaunayGraph, SphereD2MatchesBruteForceHull) {
    for (std::uint64_t t = 0; t < 10; ++t) {
        const auto ps = sample_sphere(2, 25, 2, t);
        std::vector<std::vector<double>> p;
        for (std::size_t i = 0; i < ps.size(); ++i) p.emplace_back(ps.point(i).begin(), ps.point(i).end());
        oracle::Pairs expect;
        for (const auto& f : oracle::hull3_facets(p)) {
            expect.insert({f[0], f[1]});
            expect.insert({f[0], f[2]});
            expect.insert({f[1], f[2]});
        }
        EXPECT_EQ(as_set(delaunay_graph(ps)), expect);
    }
}

TEST(DelaunayGraph, OneDimensionalStructure) {
    const auto circle = sample_sphere(1, 40, 3, 0);
    const auto g = delaunay_graph(circle);
    EXPECT_EQ(g.edges.size(), 40u);
    std::vector<int> degree(40, 0);
    for (const auto& e : g.edges) ++degree[e.i], ++degree[e.j];
    for (int deg : degree) EXPECT_EQ(deg, 2);
    double total = 0;
    for (const auto& e : g.edges) total += e.length;
    EXPECT_NEAR(total, 1.0, 1e-12); // arcs of a unit-circumference circle

    const auto seg = sample_ball(1, 40, 3, 0);
    const auto h = delaunay_graph(seg);
    EXPECT_EQ(h.edges.size(), 39u);
    std::vector<std::size_t> order(40);
    for (std::size_t i = 0; i < 40; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return seg.coords[a] < seg.coords[b]; });
    oracle::Pairs path;
    for (std::size_t k = 0; k + 1 < 40; ++k) path.insert(std::minmax(order[k], order[k + 1]));
    EXPECT_EQ(as_set(h), path);
}

TEST(LongestEdge, ThreePointsOnCircle) {
    const auto spec = DomainSpec::make(S, 1);
    const double R = spec.radius;
    const auto ps = PointSet::from_coords(spec, {R, 0, 0, R, -R, 0});
    const auto e = longest_edge(delaunay_graph(ps));
    EXPECT_EQ(e.i, 0u);
    EXPECT_EQ(e.j, 2u);
    EXPECT_NEAR(e.length, 0.5, 1e-15);
}

TEST(LongestEdge, IsMaximumAndTieBreaksLexicographically) {
    const auto g = delaunay_graph(sample_sphere(2, 60, 1, 1));
    double mx = 0;
    for (const auto& e : g.edges) mx = std::max(mx, e.length);
    EXPECT_EQ(longest_edge(g).length, mx);

    DelaunayGraph tie;
    tie.n = 4;
    tie.edges = {{0, 3, 1.0}, {1, 2, 1.0}, {2, 3, 0.5}};
    EXPECT_EQ(longest_edge(tie).i, 0u);
    EXPECT_THROW(longest_edge(DelaunayGraph{}), std::logic_error);
}

TEST(DelaunayGraph, HullAndLpAgree) {
    std::mt19937_64 gen(4);
    for (std::uint64_t t = 0; t < 30; ++t) {
        const std::size_t n = 6 + t % 11;
        for (auto [kind, d] : {std::pair{B, 2}, std::pair{S, 2}, std::pair{B, 3}, std::pair{S, 3}}) {
            const auto ps = sample_points(kind, d, n + (d == 3 ? 2 : 0), 100 + d, t);
            EXPECT_EQ(delaunay_graph(ps).index_pairs(), certified_graph(ps).index_pairs())
                << to_string(kind) << " d=" << d << " trial " << t;
        }
    }
}

TEST(DelaunayGraph, CertificatesVerifyBySubstitution) {
    const auto ps = sample_ball(3, 14, 8, 0);
    for (const auto& e : delaunay_graph(ps).edges) EXPECT_TRUE(verify_certificate(ps, certify_edge(ps, e.i, e.j)));
    const auto sp = sample_sphere(2, 14, 8, 0);
    for (const auto& e : delaunay_graph(sp).edges) EXPECT_TRUE(verify_certificate(sp, certify_edge(sp, e.i, e.j)));
}

TEST(CertifyEdge, TinyPivotInstance) {
    // once produced an accepted witness that broke its own equality row
    const auto ps = sample_points(DomainKind::BallWithBoundary, 3, 11, 9030, 133);
    const auto cert = certify_edge(ps, 6, 7);
    EXPECT_TRUE(cert.accepted);
    EXPECT_TRUE(verify_certificate(ps, cert));
}

TEST(DelaunayGraph, RotationInvariant) {
    std::mt19937_64 gen(10);
    for (auto [kind, d] : {std::pair{B, 2}, std::pair{S, 2}, std::pair{B, 3}}) {
        for (std::uint64_t t = 0; t < 5; ++t) {
            const auto ps = sample_points(kind, d, 40, 6, t);
            const auto g = delaunay_graph(ps);
            const auto rg = delaunay_graph(rotated(ps, random_rotation(ps.dim(), gen)));
            ASSERT_EQ(g.index_pairs(), rg.index_pairs());
            for (std::size_t k = 0; k < g.edges.size(); ++k) EXPECT_NEAR(g.edges[k].length, rg.edges[k].length, 1e-9);
        }
    }
}

TEST(DelaunayGraph, CoincidentPointsAreDegenerate) {
    auto ps = sample_ball(2, 10, 1, 0);
    ps.point(3)[0] = ps.point(7)[0];
    ps.point(3)[1] = ps.point(7)[1];
    EXPECT_THROW(delaunay_graph(ps), DegeneracyError);
    auto line = sample_ball(1, 10, 1, 0);
    line.coords[2] = line.coords[5];
    EXPECT_THROW(delaunay_graph(line), DegeneracyError);
}

TEST(DelaunayGraph, CsvDump) {
    const auto g = delaunay_graph(quad());
    std::ostringstream os;
    write_graph_csv(g, os);
    const std::string text = os.str();
    EXPECT_EQ(text.substr(0, 11), "i,j,length\n");
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 6);
}

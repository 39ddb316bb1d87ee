#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "delab/errors.hpp"
#include "delab/geom.hpp"
#include "delab/rng.hpp"

namespace delab {

/// n points of a unit-measure domain, stored row-major.
struct PointSet {
    DomainSpec spec;
    std::vector<double> coords;
    std::uint64_t seed = 0;
    std::uint64_t stream_index = 0;

    [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(spec.ambient_dim()); }
    [[nodiscard]] std::size_t size() const { return coords.size() / dim(); }
    [[nodiscard]] std::span<const double> point(std::size_t i) const { return {coords.data() + i * dim(), dim()}; }
    [[nodiscard]] std::span<double> point(std::size_t i) { return {coords.data() + i * dim(), dim()}; }

    /// Distance under the domain metric (orthodromic on the sphere).
    [[nodiscard]] double distance(std::size_t i, std::size_t j) const {
        return spec.kind == DomainKind::SphereNoBoundary ? orthodromic_distance(point(i), point(j), spec)
                                                         : euclidean_distance(point(i), point(j));
    }

    /// Wraps explicit coordinates (tests, hand-built instances).
    static PointSet from_coords(DomainSpec spec, std::vector<double> coords) {
        PointSet ps{spec, std::move(coords)};
        if (ps.coords.size() % ps.dim() != 0) throw ConfigError("PointSet: coordinate count not a multiple of the dimension");
        return ps;
    }
};

namespace detail {

inline void check_sample_size(int d, std::size_t n) {
    if (d < 1) throw ConfigError("sample: dimension must be >= 1");
    if (n <= static_cast<std::size_t>(d) + 1) throw ConfigError("sample: need n > d+1 points");
}

// Uniform direction in R^m written into `out`.
inline void random_direction(RngStream& rng, std::span<double> out) {
    for (;;) {
        double norm2 = 0.0;
        for (double& c : out) {
            c = rng.normal();
            norm2 += c * c;
        }
        if (norm2 > 0.0) {
            const double inv = 1.0 / std::sqrt(norm2);
            for (double& c : out) c *= inv;
            return;
        }
    }
}

} // namespace detail

/// n i.i.d. uniform points on the unit-area d-sphere (d+1 coordinates each).
inline PointSet sample_sphere(int d, std::size_t n, std::uint64_t seed, std::uint64_t stream_index) {
    detail::check_sample_size(d, n);
    PointSet ps{DomainSpec::make(DomainKind::SphereNoBoundary, d), {}, seed, stream_index};
    ps.coords.resize(n * ps.dim());
    RngStream rng(seed, stream_index);
    for (std::size_t i = 0; i < n; ++i) {
        auto p = ps.point(i);
        detail::random_direction(rng, p);
        for (double& c : p) c *= ps.spec.radius;
    }
    return ps;
}

/// n i.i.d. uniform points in the unit-volume d-ball: direction times R*U^(1/d).
inline PointSet sample_ball(int d, std::size_t n, std::uint64_t seed, std::uint64_t stream_index) {
    detail::check_sample_size(d, n);
    PointSet ps{DomainSpec::make(DomainKind::BallWithBoundary, d), {}, seed, stream_index};
    ps.coords.resize(n * ps.dim());
    RngStream rng(seed, stream_index);
    for (std::size_t i = 0; i < n; ++i) {
        auto p = ps.point(i);
        detail::random_direction(rng, p);
        const double r = ps.spec.radius * std::pow(rng.uniform(), 1.0 / d);
        for (double& c : p) c *= r;
    }
    return ps;
}

inline PointSet sample_points(DomainKind kind, int d, std::size_t n, std::uint64_t seed, std::uint64_t stream_index) {
    return kind == DomainKind::SphereNoBoundary ? sample_sphere(d, n, seed, stream_index)
                                                : sample_ball(d, n, seed, stream_index);
}

/// Deterministic perturbation of magnitude ~1e-12*R used to break ties after
/// the hull reports a degeneracy. Sphere points are projected back onto the
/// sphere; ball points stay within R + 1e-12.
inline PointSet jittered(const PointSet& ps, double relative_magnitude = 1e-12) {
    PointSet out = ps;
    // A key distinct from the sampling key so the jitter never replays it.
    RngStream rng(ps.seed ^ 0xA5A5A5A5DEADBEEFull, ps.stream_index);
    const double amp = relative_magnitude * ps.spec.radius;
    for (std::size_t i = 0; i < out.size(); ++i) {
        auto p = out.point(i);
        double norm2 = 0.0;
        for (double& c : p) {
            c += amp * (2.0 * rng.uniform() - 1.0);
            norm2 += c * c;
        }
        const double norm = std::sqrt(norm2);
        if (ps.spec.kind == DomainKind::SphereNoBoundary) {
            for (double& c : p) c *= ps.spec.radius / norm;
        } else if (norm > ps.spec.radius) {
            for (double& c : p) c *= ps.spec.radius / norm;
        }
    }
    return out;
}

/// CSV dump: header `idx,x0,...,xm`, 17 significant digits.
inline void write_points_csv(const PointSet& ps, std::ostream& os) {
    os << "idx";
    for (std::size_t k = 0; k < ps.dim(); ++k) os << ",x" << k;
    os << '\n';
    char buf[32];
    for (std::size_t i = 0; i < ps.size(); ++i) {
        os << i;
        for (double c : ps.point(i)) {
            std::snprintf(buf, sizeof buf, "%.17g", c);
            os << ',' << buf;
        }
        os << '\n';
    }
}

} // namespace delab

#pragma once

// Geometry of unit-measure domains: the d-sphere of surface area 1 and the
// d-ball of volume 1. Cap measures are expressed as fractions of the whole
// domain, so they double as probabilities under the uniform distribution.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>

#include "delab/errors.hpp"
#include "delab/special.hpp"

namespace delab {

enum class DomainKind { SphereNoBoundary, BallWithBoundary };

inline std::string to_string(DomainKind kind) {
    return kind == DomainKind::SphereNoBoundary ? "sphere" : "ball";
}

inline DomainKind domain_kind_from_string(const std::string& s) {
    if (s == "sphere") return DomainKind::SphereNoBoundary;
    if (s == "ball") return DomainKind::BallWithBoundary;
    throw ConfigError("unknown domain '" + s + "' (expected sphere|ball)");
}

/// Radius R of the unit-measure d-sphere (S_d R^d = 1) or d-ball (C_d R^d = 1).
inline double domain_radius(DomainKind kind, int d) {
    if (d < 1) throw DomainError("domain_radius: dimension must be >= 1");
    const double dd = d;
    double log_unit_measure; // log of the measure of the radius-1 body
    if (kind == DomainKind::SphereNoBoundary) {
        log_unit_measure = std::log(2.0) + 0.5 * (dd + 1.0) * std::log(std::numbers::pi) -
                           special::log_gamma(0.5 * (dd + 1.0));
    } else {
        log_unit_measure = 0.5 * dd * std::log(std::numbers::pi) - special::log_gamma(0.5 * dd + 1.0);
    }
    return std::exp(-log_unit_measure / dd);
}

struct DomainSpec {
    DomainKind kind = DomainKind::SphereNoBoundary;
    int d = 2;
    double radius = 0.0;

    static DomainSpec make(DomainKind kind, int d) { return DomainSpec{kind, d, domain_radius(kind, d)}; }

    /// Number of coordinates of a point: d+1 on the sphere, d in the ball.
    [[nodiscard]] int ambient_dim() const { return kind == DomainKind::SphereNoBoundary ? d + 1 : d; }

    /// Largest possible distance between two points under the domain metric.
    [[nodiscard]] double metric_max() const {
        return kind == DomainKind::SphereNoBoundary ? std::numbers::pi * radius : 2.0 * radius;
    }

    /// Upper end of the argument range of the domain's cap measure.
    [[nodiscard]] double measure_domain_max() const {
        return kind == DomainKind::SphereNoBoundary ? 2.0 * std::numbers::pi * radius : 2.0 * radius;
    }

    /// Largest value the domain's cap measure takes.
    [[nodiscard]] double measure_max() const { return kind == DomainKind::SphereNoBoundary ? 1.0 : 0.5; }
};

inline double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double t = a[k] - b[k];
        s += t * t;
    }
    return std::sqrt(s);
}

/// Great-circle distance between two points of the sphere described by `spec`.
/// Evaluated as 2R*atan2(|a'-b'|, |a'+b'|) on the normalized points, which is
/// R*arccos(<a,b>/R^2) without the loss of precision arccos has near 0 and pi.
inline double orthodromic_distance(std::span<const double> a, std::span<const double> b, const DomainSpec& spec) {
    if (spec.kind != DomainKind::SphereNoBoundary) throw PreconditionError("orthodromic_distance: domain is not a sphere");
    if (a.size() != b.size() || static_cast<int>(a.size()) != spec.ambient_dim())
        throw PreconditionError("orthodromic_distance: coordinate count does not match the sphere");
    double na = 0.0, nb = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        na += a[k] * a[k];
        nb += b[k] * b[k];
    }
    na = std::sqrt(na);
    nb = std::sqrt(nb);
    if (std::fabs(na - spec.radius) > 1e-9 || std::fabs(nb - spec.radius) > 1e-9)
        throw PreconditionError("orthodromic_distance: point not on the sphere");
    double diff = 0.0, sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double ua = a[k] / na;
        const double ub = b[k] / nb;
        diff += (ua - ub) * (ua - ub);
        sum += (ua + ub) * (ua + ub);
    }
    return 2.0 * spec.radius * std::atan2(std::sqrt(diff), std::sqrt(sum));
}

/// A_d(x): area fraction of a spherical cap of orthodromic diameter x on the
/// unit-area d-sphere. The argument runs up to 2*pi*R (angular radius pi) so
/// that caps larger than a hemisphere are representable; A_d(2*pi*R) = 1.
inline double cap_area(int d, double x) {
    if (d < 1) throw DomainError("cap_area: dimension must be >= 1");
    const double radius = domain_radius(DomainKind::SphereNoBoundary, d);
    const double x_max = 2.0 * std::numbers::pi * radius;
    if (!(x >= 0.0) || x > x_max * (1.0 + 1e-12)) throw DomainError("cap_area: diameter outside [0, 2*pi*R]");
    const double theta = std::min(x / (2.0 * radius), std::numbers::pi);
    if (d == 1) return theta / std::numbers::pi;
    if (d == 2) {
        const double s = std::sin(0.5 * theta);
        return s * s;
    }
    const double s = std::sin(theta);
    const double half = 0.5 * special::incomplete_beta(0.5 * d, 0.5, std::min(1.0, s * s));
    return theta <= 0.5 * std::numbers::pi ? half : 1.0 - half;
}

/// V_d(x): volume fraction of the minor ball cap whose base has diameter x,
/// in the unit-volume d-ball. Ranges over [0, 1/2]; defined for d >= 2 (in
/// one dimension every cap base is a point).
inline double cap_volume(int d, double x) {
    if (d < 2) throw DomainError("cap_volume: base diameter is only meaningful for d >= 2");
    const double radius = domain_radius(DomainKind::BallWithBoundary, d);
    const double x_max = 2.0 * radius;
    if (!(x >= 0.0) || x > x_max * (1.0 + 1e-12)) throw DomainError("cap_volume: base diameter outside [0, 2R]");
    const double half_base = std::min(0.5 * x, radius);
    if (d == 2) {
        const double phi = 2.0 * std::asin(half_base / radius);
        return radius * radius * (phi - std::sin(phi)) / 2.0;
    }
    if (d == 3) {
        const double h = half_base * half_base / (radius + std::sqrt(radius * radius - half_base * half_base));
        return std::numbers::pi * h * h * (radius - h / 3.0);
    }
    const double u = std::min(1.0, half_base * half_base / (radius * radius));
    return 0.5 * special::incomplete_beta(0.5 * (d + 1), 0.5, u);
}

/// Result of inverting a cap measure. `saturated` marks a requested measure at
/// or beyond the top of the range; x is then the end of the argument domain.
struct Inversion {
    double x = 0.0;
    bool saturated = false;
};

/// Argument x with cap_area(d, x) = t (sphere) or cap_volume(d, x) = t (ball),
/// found by bisection.
inline Inversion measure_inverse(DomainKind kind, int d, double t) {
    const auto spec = DomainSpec::make(kind, d);
    const double width = spec.measure_domain_max();
    if (!(t >= 0.0) || t >= spec.measure_max()) return {width, true};
    auto measure = [&](double x) { return kind == DomainKind::SphereNoBoundary ? cap_area(d, x) : cap_volume(d, x); };
    double lo = 0.0;
    double hi = width;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (measure(mid) < t)
            lo = mid;
        else
            hi = mid;
    }
    return {0.5 * (lo + hi), false};
}

/// ln C(n, k). Small k is summed term by term, which stays exact to a few ulp
/// where a difference of log-gammas would cancel badly.
inline double log_binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) throw DomainError("log_binomial: k > n");
    const std::uint64_t m = std::min(k, n - k);
    if (m <= 64) {
        double s = 0.0;
        for (std::uint64_t i = 1; i <= m; ++i) s += std::log(static_cast<double>(n - m + i)) - std::log(static_cast<double>(i));
        return s;
    }
    const double nn = static_cast<double>(n);
    const double mm = static_cast<double>(m);
    return special::log_gamma(nn + 1.0) - special::log_gamma(mm + 1.0) - special::log_gamma(nn - mm + 1.0);
}

} // namespace delab

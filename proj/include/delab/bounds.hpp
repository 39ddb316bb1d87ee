#pragma once

// Thresholds on the longest Delaunay edge of n uniform points.
//
// Upper bounds (sphere and ball): with probability >= 1 - eps no edge (a, b)
// has  M(dist(a, b)) >= ln(C(n,2) C(n-2,d-1) / eps) / (n-d-1),  where M is the
// cap area A_d (sphere, orthodromic distance) or the minor-cap volume V_d
// (ball, Euclidean distance).
//
// Lower bounds: with probability >= eps some edge reaches the threshold.
//   sphere:  A_d(rho1) = L / (n-2+L),  L = ln((e-1)/(e^2 eps)), threshold rho1,
//            valid while A_d(2 rho1) <= 1 - 1/(n-1);
//   ball:    V_d(rho1) = L / (n-2+L),  L = ln(alpha_d/eps), threshold rho1/2,
//            d in {2, 3} only, valid for eps <= alpha_2/e^2 (d=2) or
//            eps <= alpha_3/e (d=3) and V_d(rho1) <= 1/2 - 1/n.
//
// Every threshold is available both as the exact numerical inversion of the
// measure ("inverted") and as the closed-form corollary where one exists.
// Validity is reported, never thrown: a result outside a theorem's range is
// returned with valid = false and a reason.

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "delab/errors.hpp"
#include "delab/geom.hpp"

namespace delab {

enum class Direction { Upper, Lower };
enum class Form { Inverted, ClosedForm };

inline std::string to_string(Direction d) { return d == Direction::Upper ? "upper" : "lower"; }
inline std::string to_string(Form f) { return f == Form::Inverted ? "inverted" : "closed"; }

inline Direction direction_from_string(const std::string& s) {
    if (s == "upper") return Direction::Upper;
    if (s == "lower") return Direction::Lower;
    throw ConfigError("unknown direction '" + s + "' (expected upper|lower)");
}

inline Form form_from_string(const std::string& s) {
    if (s == "inverted") return Form::Inverted;
    if (s == "closed") return Form::ClosedForm;
    throw ConfigError("unknown form '" + s + "' (expected inverted|closed)");
}

struct BoundQuery {
    DomainSpec spec;
    std::size_t n = 0;
    double epsilon = 0.0;
    Direction direction = Direction::Upper;
    Form form = Form::Inverted;

    static BoundQuery make(DomainKind kind, int d, std::size_t n, double eps, Direction dir, Form form) {
        return BoundQuery{DomainSpec::make(kind, d), n, eps, dir, form};
    }
};

struct BoundResult {
    double threshold = std::numeric_limits<double>::quiet_NaN(); // orthodromic (sphere) or Euclidean (ball)
    double rhs = std::numeric_limits<double>::quiet_NaN();       // measure-space right-hand side
    bool valid = false;
    std::string reason;
    bool saturated = false; // rhs beyond the measure range: vacuous, threshold pinned to the metric maximum
    Direction direction = Direction::Upper;
    Form form = Form::Inverted;
    std::optional<double> alternate; // threshold under the other form, when that form exists

    void invalidate(const std::string& why) {
        reason = (valid || reason.empty()) ? why : reason + "; " + why;
        valid = false;
    }
};

/// (1 - e^{-1/16})(1 - e^{-1/32}) e^{-1} for d = 2; (1 - e^{-1/6})(1 - e^{-1/12}) e^{-12} for d = 3.
inline double ball_lower_alpha(int d) {
    if (d == 2) return -std::expm1(-1.0 / 16.0) * -std::expm1(-1.0 / 32.0) * std::exp(-1.0);
    if (d == 3) return -std::expm1(-1.0 / 6.0) * -std::expm1(-1.0 / 12.0) * std::exp(-12.0);
    throw ConfigError("ball lower bound exists only for d in {2, 3}");
}

/// Largest eps for which the ball lower bound holds: alpha_2/e^2 or alpha_3/e.
inline double ball_lower_eps_max(int d) {
    return d == 2 ? ball_lower_alpha(2) * std::exp(-2.0) : ball_lower_alpha(3) * std::exp(-1.0);
}

namespace detail {

inline void check_query_basics(std::size_t n, int d, double eps) {
    if (d < 1) throw ConfigError("dimension must be >= 1");
    if (n <= static_cast<std::size_t>(d) + 1)
        throw ConfigError("n <= d+1: need n > " + std::to_string(d + 1) + " points");
    if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("eps must lie in (0, 1)");
}

inline void check_query(const BoundQuery& q, DomainKind kind, Direction dir) {
    if (q.spec.kind != kind) throw ConfigError("bound query: domain mismatch");
    if (q.direction != dir) throw ConfigError("bound query: direction mismatch");
    check_query_basics(q.n, q.spec.d, q.epsilon);
}

inline double sphere_lower_log_term(double eps) { return std::log((std::numbers::e - 1.0) / (std::numbers::e * std::numbers::e * eps)); }

} // namespace detail

/// [ln C(n,2) + ln C(n-2,d-1) - ln eps] / (n-d-1).
inline double upper_rhs(std::size_t n, int d, double eps) {
    detail::check_query_basics(n, d, eps);
    const double num = log_binomial(n, 2) + log_binomial(n - 2, static_cast<std::uint64_t>(d - 1)) - std::log(eps);
    return num / static_cast<double>(n - static_cast<std::size_t>(d) - 1);
}

inline BoundResult sphere_upper_threshold(const BoundQuery& q) {
    detail::check_query(q, DomainKind::SphereNoBoundary, Direction::Upper);
    const int d = q.spec.d;
    const double max_dist = q.spec.metric_max();
    BoundResult r;
    r.direction = Direction::Upper;
    r.form = q.form;
    r.rhs = upper_rhs(q.n, d, q.epsilon);
    r.valid = true;

    auto pin = [&](double x, bool saturated) {
        return (saturated || x >= max_dist) ? std::make_pair(max_dist, true) : std::make_pair(x, false);
    };
    const Inversion inv = measure_inverse(DomainKind::SphereNoBoundary, d, r.rhs);
    const auto inverted = pin(inv.x, inv.saturated);

    std::optional<std::pair<double, bool>> closed;
    if (d == 1) {
        closed = pin(r.rhs, r.rhs >= 1.0);
    } else if (d == 2) {
        closed = r.rhs >= 1.0 ? pin(max_dist, true) : pin(std::acos(1.0 - 2.0 * r.rhs) / std::sqrt(std::numbers::pi), false);
    }

    if (q.form == Form::Inverted) {
        std::tie(r.threshold, r.saturated) = inverted;
        if (closed) r.alternate = closed->first;
    } else {
        r.alternate = inverted.first;
        if (!closed) {
            r.saturated = false;
            r.invalidate("no closed form for d >= 3");
            return r;
        }
        std::tie(r.threshold, r.saturated) = *closed;
    }
    if (r.saturated) r.reason = "rhs beyond the largest cap between two points: bound vacuous";
    return r;
}

inline BoundResult sphere_lower_threshold(const BoundQuery& q) {
    detail::check_query(q, DomainKind::SphereNoBoundary, Direction::Lower);
    const int d = q.spec.d;
    const double n = static_cast<double>(q.n);
    BoundResult r;
    r.direction = Direction::Lower;
    r.form = q.form;
    r.valid = true;
    const double L = detail::sphere_lower_log_term(q.epsilon);
    if (!(L > 0.0)) {
        r.rhs = 0.0;
        r.threshold = 0.0;
        r.invalidate("eps >= (e-1)/e^2: bound vacuous");
        return r;
    }
    r.rhs = L / (n - 2.0 + L);
    const Inversion inv = measure_inverse(DomainKind::SphereNoBoundary, d, r.rhs);
    const double rho1 = inv.x;

    std::optional<double> closed;
    if (d == 1) closed = r.rhs;
    else if (d == 2) closed = std::acos(1.0 - 2.0 * r.rhs) / std::sqrt(std::numbers::pi);

    if (q.form == Form::Inverted) {
        r.threshold = rho1;
        r.alternate = closed;
    } else {
        r.alternate = rho1;
        if (!closed) {
            r.invalidate("no closed form for d >= 3");
            return r;
        }
        r.threshold = *closed;
        if (d == 1 && q.epsilon < std::exp(1.0 - n - 4.0 / n)) r.invalidate("eps < e^(1-n-4/n)");
        if (d == 2 && q.epsilon < std::exp(-n + 2.0 * std::sqrt(n - 1.0) - 1.0)) r.invalidate("eps < e^(-n+2sqrt(n-1)-1)");
    }
    const double doubled = 2.0 * rho1;
    const double area_doubled = doubled >= q.spec.measure_domain_max() ? 1.0 : cap_area(d, doubled);
    if (area_doubled > 1.0 - 1.0 / (n - 1.0)) r.invalidate("A_d(2 rho1) > 1 - 1/(n-1)");
    return r;
}

inline BoundResult ball_upper_threshold(const BoundQuery& q) {
    detail::check_query(q, DomainKind::BallWithBoundary, Direction::Upper);
    const int d = q.spec.d;
    if (d < 2) throw ConfigError("ball bounds need d >= 2 (cap base diameter is degenerate for d = 1)");
    if (q.form == Form::ClosedForm && d != 2 && d != 3) throw ConfigError("ball upper closed form exists only for d in {2, 3}");
    const double max_dist = q.spec.metric_max();
    BoundResult r;
    r.direction = Direction::Upper;
    r.form = q.form;
    r.rhs = upper_rhs(q.n, d, q.epsilon);
    r.valid = true;

    const Inversion inv = measure_inverse(DomainKind::BallWithBoundary, d, r.rhs);
    const double inverted = inv.saturated ? max_dist : inv.x;

    std::optional<double> closed;
    double log_floor = 0.0;
    const double n = static_cast<double>(q.n);
    if (d == 2) {
        closed = std::cbrt(16.0 / std::sqrt(std::numbers::pi) * r.rhs);
        log_floor = log_binomial(q.n, 2) + std::log(n - 2.0) - std::numbers::sqrt2 * (n - 3.0) / std::numbers::pi;
    } else if (d == 3) {
        closed = std::pow(96.0 / std::pow(std::numbers::pi, 1.5) * r.rhs, 0.25);
        log_floor = log_binomial(q.n, 2) + log_binomial(q.n - 2, 2) - 2.0 * (n - 4.0) / (3.0 * std::sqrt(std::numbers::pi));
    }

    if (q.form == Form::Inverted) {
        r.threshold = inverted;
        r.saturated = inv.saturated;
        if (closed) r.alternate = std::min(*closed, max_dist);
    } else {
        r.alternate = inverted;
        r.saturated = *closed >= max_dist;
        r.threshold = std::min(*closed, max_dist);
        if (!(std::log(q.epsilon) > log_floor))
            r.invalidate(d == 2 ? "eps <= C(n,2)(n-2)e^(-sqrt2(n-3)/pi)" : "eps <= C(n,2)C(n-2,2)e^(-2(n-4)/(3sqrt(pi)))");
    }
    if (r.saturated && r.valid) r.reason = "threshold reaches the ball diameter: bound vacuous";
    return r;
}

inline BoundResult ball_lower_threshold(const BoundQuery& q) {
    detail::check_query(q, DomainKind::BallWithBoundary, Direction::Lower);
    const int d = q.spec.d;
    const double alpha = ball_lower_alpha(d); // throws for d outside {2, 3}
    const double n = static_cast<double>(q.n);
    BoundResult r;
    r.direction = Direction::Lower;
    r.form = q.form;
    r.valid = true;
    const double L = std::log(alpha / q.epsilon);
    if (!(L > 0.0)) {
        r.rhs = 0.0;
        r.threshold = 0.0;
        r.invalidate("eps >= alpha: bound vacuous");
        r.invalidate(d == 2 ? "eps > alpha2/e^2" : "eps > alpha3/e");
        return r;
    }
    r.rhs = L / (n - 2.0 + L);
    const Inversion inv = measure_inverse(DomainKind::BallWithBoundary, d, r.rhs);
    const double half_rho1 = 0.5 * inv.x;
    const double implied = d == 2 ? std::cbrt(r.rhs / (2.0 * std::sqrt(std::numbers::pi)))
                                  : std::pow(std::cbrt(48.0 / std::pow(std::numbers::pi, 4)) * r.rhs, 0.25);
    if (q.form == Form::Inverted) {
        r.threshold = half_rho1;
        r.alternate = implied;
    } else {
        r.threshold = implied;
        r.alternate = half_rho1;
    }
    if (q.epsilon > ball_lower_eps_max(d)) r.invalidate(d == 2 ? "eps > alpha2/e^2" : "eps > alpha3/e");
    if (inv.saturated || r.rhs > 0.5 - 1.0 / n) r.invalidate("V_d(rho1) > 1/2 - 1/n");
    return r;
}

/// Dispatches on (domain, direction).
inline BoundResult compute_bound(const BoundQuery& q) {
    if (q.spec.kind == DomainKind::SphereNoBoundary)
        return q.direction == Direction::Upper ? sphere_upper_threshold(q) : sphere_lower_threshold(q);
    return q.direction == Direction::Upper ? ball_upper_threshold(q) : ball_lower_threshold(q);
}

// ---------------------------------------------------------------------------
// Summary table

struct BoundTableRow {
    std::string name;
    DomainKind kind;
    int d;
    Direction direction;
    Form form;
    BoundResult result;
};

struct BoundTableOptions {
    int general_d = 3;                // dimension of the general-measure rows
    std::optional<Form> form;         // force one form on every row
    std::optional<DomainKind> domain; // restrict to one domain
};

/// One row per cell of the results table: sphere upper/lower for d = 1, 2
/// and the general-measure form, ball upper for d = 2, 3 and general, ball
/// lower for d = 2, 3. Rows whose preconditions fail are kept, marked invalid.
inline std::vector<BoundTableRow> bound_table(std::size_t n, double eps, const BoundTableOptions& opts = {}) {
    struct Cell {
        std::string name;
        DomainKind kind;
        int d;
        Direction dir;
        Form natural;
    };
    const auto S = DomainKind::SphereNoBoundary;
    const auto B = DomainKind::BallWithBoundary;
    const int g = opts.general_d;
    const std::string gs = "d" + std::to_string(g);
    const std::vector<Cell> cells = {
        {"sphere-upper-d1", S, 1, Direction::Upper, Form::ClosedForm},
        {"sphere-upper-d2", S, 2, Direction::Upper, Form::ClosedForm},
        {"sphere-upper-general-" + gs, S, g, Direction::Upper, Form::Inverted},
        {"sphere-lower-d1", S, 1, Direction::Lower, Form::ClosedForm},
        {"sphere-lower-d2", S, 2, Direction::Lower, Form::ClosedForm},
        {"sphere-lower-general-" + gs, S, g, Direction::Lower, Form::Inverted},
        {"ball-upper-d2", B, 2, Direction::Upper, Form::ClosedForm},
        {"ball-upper-d3", B, 3, Direction::Upper, Form::ClosedForm},
        {"ball-upper-general-" + gs, B, g, Direction::Upper, Form::Inverted},
        {"ball-lower-d2", B, 2, Direction::Lower, Form::Inverted},
        {"ball-lower-d3", B, 3, Direction::Lower, Form::Inverted},
    };
    std::vector<BoundTableRow> rows;
    for (const Cell& c : cells) {
        if (opts.domain && *opts.domain != c.kind) continue;
        const Form form = opts.form.value_or(c.natural);
        BoundTableRow row{c.name, c.kind, c.d, c.dir, form, {}};
        try {
            row.result = compute_bound(BoundQuery::make(c.kind, c.d, n, eps, c.dir, form));
        } catch (const std::exception& e) {
            row.result.direction = c.dir;
            row.result.form = form;
            row.result.invalidate(e.what());
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace detail {

inline std::string fmt_number(double v, const char* spec) {
    if (std::isnan(v)) return "-";
    char buf[40];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace detail

/// Aligned text rendering. The `alternate` column shows the threshold under
/// the other form (for ball lower rows: the implied closed form).
inline void render_table_text(const std::vector<BoundTableRow>& rows, std::size_t n, double eps, std::ostream& os) {
    char head[160];
    std::snprintf(head, sizeof head, "n = %zu, eps = %s\n", n, detail::fmt_number(eps, "%.6g").c_str());
    os << head;
    std::snprintf(head, sizeof head, "%-26s %-6s %-3s %-9s %-8s %-12s %-12s %-12s %-7s %s\n", "row", "domain", "d",
                  "direction", "form", "threshold", "rhs", "alternate", "valid", "reason");
    os << head;
    for (const auto& r : rows) {
        const auto& b = r.result;
        char line[512];
        std::snprintf(line, sizeof line, "%-26s %-6s %-3d %-9s %-8s %-12s %-12s %-12s %-7s %s\n", r.name.c_str(),
                      to_string(r.kind).c_str(), r.d, to_string(r.direction).c_str(), to_string(r.form).c_str(),
                      detail::fmt_number(b.threshold, "%.6g").c_str(), detail::fmt_number(b.rhs, "%.6g").c_str(),
                      b.alternate ? detail::fmt_number(*b.alternate, "%.6g").c_str() : "-", b.valid ? "yes" : "NO",
                      b.reason.c_str());
        os << line;
    }
}

/// CSV rendering: `row,domain,d,direction,form,threshold,rhs,valid,reason`.
inline void render_table_csv(const std::vector<BoundTableRow>& rows, std::ostream& os, bool header = true) {
    if (header) os << "row,domain,d,direction,form,threshold,rhs,valid,reason\n";
    for (const auto& r : rows) {
        const auto& b = r.result;
        os << r.name << ',' << to_string(r.kind) << ',' << r.d << ',' << to_string(r.direction) << ','
           << to_string(r.form) << ',' << detail::fmt_number(b.threshold, "%.17g") << ','
           << detail::fmt_number(b.rhs, "%.17g") << ',' << (b.valid ? "true" : "false") << ','
           << detail::csv_field(b.reason) << '\n';
    }
}

} // namespace delab

#pragma once

// Convex hull of a point cloud in R^m (m >= 2) by incremental insertion:
// Quickhull order (furthest outside point first), a breadth-first walk over
// facet adjacency to collect the visible region, and a cone of new facets over
// its horizon. Facets are simplicial; sign tests use a signed distance to
// the facet hyperplane with an absolute tolerance of rel_tol * coordinate
// scale. No exact arithmetic: inputs are expected to be in general position.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "delab/errors.hpp"

namespace delab {

struct HullFacet {
    std::vector<std::size_t> vertices; // m indices into the input
    std::vector<double> normal;        // unit outward normal
    double offset = 0.0;               // normal . x == offset on the facet plane

    [[nodiscard]] double signed_distance(std::span<const double> p) const {
        double s = -offset;
        for (std::size_t k = 0; k < normal.size(); ++k) s += normal[k] * p[k];
        return s;
    }
};

struct HullOptions {
    double relative_tolerance = 1e-9;
};

/// Largest absolute coordinate, the length scale for tolerance tests.
inline double coordinate_scale(std::span<const double> coords) {
    double s = 0.0;
    for (double c : coords) s = std::max(s, std::fabs(c));
    return s > 0.0 ? s : 1.0;
}

namespace detail {

// Determinant of a square row-major matrix (destroys the input).
inline double determinant(std::vector<double>& a, std::size_t n) {
    double det = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(a[r * n + col]) > std::fabs(a[piv * n + col])) piv = r;
        if (a[piv * n + col] == 0.0) return 0.0;
        if (piv != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a[col * n + c], a[piv * n + c]);
            det = -det;
        }
        const double d = a[col * n + col];
        det *= d;
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r * n + col] / d;
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
        }
    }
    return det;
}

inline std::string format_indices(const std::vector<std::size_t>& idx) {
    std::ostringstream os;
    os << '{';
    for (std::size_t k = 0; k < idx.size(); ++k) os << (k ? "," : "") << idx[k];
    os << '}';
    return os.str();
}

class QuickHull {
  public:
    QuickHull(std::span<const double> coords, std::size_t dim, const HullOptions& opts)
        : coords_(coords), m_(dim), n_(coords.size() / dim) {
        tol_ = opts.relative_tolerance * coordinate_scale(coords);
    }

    std::vector<HullFacet> run() {
        if (m_ < 2) throw ConfigError("convex_hull: ambient dimension must be >= 2");
        if (coords_.size() % m_ != 0) throw ConfigError("convex_hull: coordinate count not a multiple of the dimension");
        if (n_ < m_ + 1) throw DegeneracyError("convex_hull: need at least m+1 points");
        build_initial_simplex();
        while (!pending_.empty()) {
            const std::size_t f = pending_.back();
            pending_.pop_back();
            if (!facets_[f].alive || facets_[f].outside.empty()) continue;
            add_point(f);
        }
        std::vector<HullFacet> out;
        for (const Facet& f : facets_) {
            if (!f.alive) continue;
            out.push_back(HullFacet{f.v, f.normal, f.offset});
        }
        return out;
    }

  private:
    static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

    struct Facet {
        std::vector<std::size_t> v;  // vertices
        std::vector<std::size_t> nb; // nb[k]: facet across the ridge opposite v[k]
        std::vector<double> normal;
        double offset = 0.0;
        std::vector<std::size_t> outside;
        std::vector<std::size_t> coplanar;
        std::size_t furthest = kNone;
        double furthest_dist = 0.0;
        bool alive = true;
        std::size_t stamp = 0;
        int state = 0; // per-stamp: 1 visible, 2 not visible
    };

    [[nodiscard]] std::span<const double> pt(std::size_t i) const { return coords_.subspan(i * m_, m_); }

    [[nodiscard]] double dist(const Facet& f, std::size_t i) const {
        const auto p = pt(i);
        double s = -f.offset;
        for (std::size_t k = 0; k < m_; ++k) s += f.normal[k] * p[k];
        return s;
    }

    std::size_t make_facet(std::vector<std::size_t> verts) {
        Facet f;
        f.v = std::move(verts);
        f.nb.assign(m_, kNone);
        f.normal.assign(m_, 0.0);
        // Normal as the generalized cross product of the edge vectors.
        const auto base = pt(f.v[0]);
        std::vector<double> edges((m_ - 1) * m_);
        for (std::size_t r = 1; r < m_; ++r) {
            const auto q = pt(f.v[r]);
            for (std::size_t c = 0; c < m_; ++c) edges[(r - 1) * m_ + c] = q[c] - base[c];
        }
        std::vector<double> minor((m_ - 1) * (m_ - 1));
        double norm2 = 0.0;
        for (std::size_t c = 0; c < m_; ++c) {
            for (std::size_t r = 0; r + 1 < m_; ++r) {
                std::size_t cc = 0;
                for (std::size_t k = 0; k < m_; ++k) {
                    if (k == c) continue;
                    minor[r * (m_ - 1) + cc++] = edges[r * m_ + k];
                }
            }
            const double cof = determinant(minor, m_ - 1);
            f.normal[c] = (c % 2 == 0) ? cof : -cof;
            norm2 += f.normal[c] * f.normal[c];
        }
        const double norm = std::sqrt(norm2);
        if (!(norm > 0.0) || !std::isfinite(norm))
            throw DegeneracyError("convex_hull: affinely dependent facet " + format_indices(f.v));
        double off = 0.0;
        for (std::size_t c = 0; c < m_; ++c) {
            f.normal[c] /= norm;
            off += f.normal[c] * base[c];
        }
        f.offset = off;
        double side = -f.offset;
        for (std::size_t c = 0; c < m_; ++c) side += f.normal[c] * interior_[c];
        if (std::fabs(side) <= tol_)
            throw DegeneracyError("convex_hull: facet " + format_indices(f.v) + " passes through the interior point");
        if (side > 0.0) {
            for (double& c : f.normal) c = -c;
            f.offset = -f.offset;
        }
        facets_.push_back(std::move(f));
        return facets_.size() - 1;
    }

    void build_initial_simplex() {
        std::vector<std::size_t> chosen;
        std::size_t first = 0;
        for (std::size_t i = 1; i < n_; ++i)
            if (pt(i)[0] < pt(first)[0]) first = i;
        chosen.push_back(first);
        std::vector<std::vector<double>> basis;
        const auto origin = pt(first);
        std::vector<double> residual(m_);
        while (chosen.size() < m_ + 1) {
            double best = -1.0;
            std::size_t best_i = kNone;
            std::vector<double> best_res;
            for (std::size_t i = 0; i < n_; ++i) {
                const auto p = pt(i);
                for (std::size_t c = 0; c < m_; ++c) residual[c] = p[c] - origin[c];
                for (const auto& b : basis) {
                    double dot = 0.0;
                    for (std::size_t c = 0; c < m_; ++c) dot += residual[c] * b[c];
                    for (std::size_t c = 0; c < m_; ++c) residual[c] -= dot * b[c];
                }
                double len = 0.0;
                for (double r : residual) len += r * r;
                len = std::sqrt(len);
                if (len > best) {
                    best = len;
                    best_i = i;
                    best_res = residual;
                }
            }
            if (best <= tol_) {
                throw DegeneracyError("convex_hull: input lies in a flat of dimension " +
                                      std::to_string(chosen.size() - 1) + " spanned by " + format_indices(chosen));
            }
            for (double& r : best_res) r /= best;
            basis.push_back(std::move(best_res));
            chosen.push_back(best_i);
        }
        interior_.assign(m_, 0.0);
        for (std::size_t i : chosen) {
            const auto p = pt(i);
            for (std::size_t c = 0; c < m_; ++c) interior_[c] += p[c] / static_cast<double>(m_ + 1);
        }
        // Facet k omits chosen[k]; its ridge opposite chosen[t] is shared with facet t.
        for (std::size_t k = 0; k <= m_; ++k) {
            std::vector<std::size_t> verts;
            for (std::size_t t = 0; t <= m_; ++t)
                if (t != k) verts.push_back(chosen[t]);
            make_facet(std::move(verts));
        }
        for (std::size_t k = 0; k <= m_; ++k) {
            std::size_t slot = 0;
            for (std::size_t t = 0; t <= m_; ++t)
                if (t != k) facets_[k].nb[slot++] = t;
        }
        std::vector<char> in_simplex(n_, 0);
        for (std::size_t i : chosen) in_simplex[i] = 1;
        std::vector<std::size_t> rest;
        for (std::size_t i = 0; i < n_; ++i)
            if (!in_simplex[i]) rest.push_back(i);
        std::vector<std::size_t> all_facets;
        for (std::size_t k = 0; k <= m_; ++k) all_facets.push_back(k);
        assign(rest, all_facets);
    }

    // Distributes points over `targets`: outside the first facet they are
    // strictly above, else coplanar with the first facet within tolerance,
    // else discarded as interior.
    void assign(const std::vector<std::size_t>& points, const std::vector<std::size_t>& targets) {
        for (std::size_t i : points) {
            std::size_t on_facet = kNone;
            bool placed = false;
            for (std::size_t f : targets) {
                const double dd = dist(facets_[f], i);
                if (dd > tol_) {
                    Facet& F = facets_[f];
                    if (F.outside.empty()) pending_.push_back(f);
                    F.outside.push_back(i);
                    if (F.furthest == kNone || dd > F.furthest_dist) {
                        F.furthest = i;
                        F.furthest_dist = dd;
                    }
                    placed = true;
                    break;
                }
                if (on_facet == kNone && dd >= -tol_) on_facet = f;
            }
            if (!placed && on_facet != kNone) facets_[on_facet].coplanar.push_back(i);
        }
    }

    void add_point(std::size_t start) {
        const std::size_t p = facets_[start].furthest;
        ++stamp_;
        std::vector<std::size_t> visible{start};
        facets_[start].stamp = stamp_;
        facets_[start].state = 1;
        struct Horizon {
            std::size_t facet;
            std::size_t slot;
        };
        std::vector<Horizon> horizon;
        for (std::size_t q = 0; q < visible.size(); ++q) {
            const std::size_t f = visible[q];
            for (std::size_t k = 0; k < m_; ++k) {
                const std::size_t g = facets_[f].nb[k];
                Facet& G = facets_[g];
                if (G.stamp != stamp_) {
                    G.stamp = stamp_;
                    G.state = dist(G, p) > tol_ ? 1 : 2;
                    if (G.state == 1) visible.push_back(g);
                }
                if (G.state == 2) horizon.push_back({f, k});
            }
        }

        std::vector<std::size_t> created;
        std::map<std::vector<std::size_t>, std::pair<std::size_t, std::size_t>> open_ridges;
        for (const Horizon& h : horizon) {
            std::vector<std::size_t> verts;
            for (std::size_t k = 0; k < m_; ++k)
                if (k != h.slot) verts.push_back(facets_[h.facet].v[k]);
            verts.push_back(p);
            const std::size_t beyond = facets_[h.facet].nb[h.slot];
            const std::size_t nf = make_facet(std::move(verts));
            created.push_back(nf);
            facets_[nf].nb[m_ - 1] = beyond;
            auto& back = facets_[beyond].nb;
            std::replace(back.begin(), back.end(), h.facet, nf);
            for (std::size_t j = 0; j + 1 < m_; ++j) {
                std::vector<std::size_t> key;
                for (std::size_t k = 0; k < m_; ++k)
                    if (k != j) key.push_back(facets_[nf].v[k]);
                std::sort(key.begin(), key.end());
                auto it = open_ridges.find(key);
                if (it == open_ridges.end()) {
                    open_ridges.emplace(std::move(key), std::make_pair(nf, j));
                } else {
                    const auto [other, other_slot] = it->second;
                    if (facets_[other].nb[other_slot] != kNone)
                        throw DegeneracyError("convex_hull: non-manifold horizon at point " + std::to_string(p));
                    facets_[other].nb[other_slot] = nf;
                    facets_[nf].nb[j] = other;
                }
            }
        }
        for (std::size_t nf : created)
            for (std::size_t nb : facets_[nf].nb)
                if (nb == kNone) throw DegeneracyError("convex_hull: open horizon at point " + std::to_string(p));

        std::vector<std::size_t> orphans;
        for (std::size_t f : visible) {
            Facet& F = facets_[f];
            F.alive = false;
            for (std::size_t i : F.outside)
                if (i != p) orphans.push_back(i);
            orphans.insert(orphans.end(), F.coplanar.begin(), F.coplanar.end());
            F.outside.clear();
            F.coplanar.clear();
        }
        assign(orphans, created);
    }

    std::span<const double> coords_;
    std::size_t m_;
    std::size_t n_;
    double tol_ = 0.0;
    std::vector<double> interior_;
    std::vector<Facet> facets_;
    std::vector<std::size_t> pending_;
    std::size_t stamp_ = 0;
};

} // namespace detail

/// Facets of the convex hull of `coords` (row-major, `dim` coordinates per
/// point). Throws DegeneracyError when the input is not full-dimensional or
/// the tolerance-based sign tests cannot produce a consistent hull.
inline std::vector<HullFacet> convex_hull(std::span<const double> coords, std::size_t dim, const HullOptions& opts = {}) {
    return detail::QuickHull(coords, dim, opts).run();
}

} // namespace delab

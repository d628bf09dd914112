#ifndef POLYSPECTRA_POLYTOPE_HPP
#define POLYSPECTRA_POLYTOPE_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "polyspectra/linalg.hpp"

namespace polyspectra::geom {

using linalg::IndexSet;
using linalg::VolumeResult;

struct Facet {
    Vector normal;               // outward unit normal
    double offset = 0.0;         // supporting value h, <normal, v> <= h
    std::vector<int> vertices;   // incident vertex indices, sorted
};

struct Ridge {
    int facet_s = -1;
    int facet_t = -1;
    std::vector<int> vertices;
    VolumeResult volume;
};

namespace detail {

inline bool lex_less(const Vector& a, const Vector& b) {
    for (int i = 0; i < a.size(); ++i) {
        if (a(i) < b(i) - 1e-12) return true;
        if (a(i) > b(i) + 1e-12) return false;
    }
    return false;
}

inline int affine_rank(const Matrix& points_rows, double eps = 1e-9) {
    const int n = static_cast<int>(points_rows.rows());
    if (n <= 1) return 0;
    Matrix centered = points_rows.bottomRows(n - 1);
    for (int i = 0; i < n - 1; ++i) centered.row(i) -= points_rows.row(0);
    Eigen::JacobiSVD<Matrix> svd(centered);
    double top = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    if (top <= 0) return 0;
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > eps * top) ++rank;
    return rank;
}

// Odometer over k-subsets of [0, n).
inline bool next_combination(std::vector<int>& idx, int n) {
    const int k = static_cast<int>(idx.size());
    for (int i = k - 1; i >= 0; --i) {
        if (idx[i] < n - k + i) {
            ++idx[i];
            for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace detail

/// Full-dimensional polytope given by its vertices (rows of an n x k
/// matrix).  Facets and edges are enumerated once at construction; objects
/// are immutable afterwards and safe to share across threads.
class Polytope {
  public:
    static Polytope build(const Matrix& vertices);

    int dim() const { return static_cast<int>(vertices_.cols()); }
    int vertex_count() const { return static_cast<int>(vertices_.rows()); }
    const Matrix& vertices() const { return vertices_; }
    Vector vertex(int i) const { return vertices_.row(i).transpose(); }

    const std::vector<Facet>& facets() const { return facets_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    const std::vector<int>& facets_of_vertex(int v) const { return vertex_facets_[v]; }

    int degree(int v) const {
        int d = 0;
        for (const auto& e : edges_)
            if (e.first == v || e.second == v) ++d;
        return d;
    }

  private:
    Polytope() = default;
    void enumerate_facets();
    void enumerate_edges();

    Matrix vertices_;
    std::vector<Facet> facets_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> vertex_facets_;
};

inline Polytope Polytope::build(const Matrix& vertices) {
    const int n = static_cast<int>(vertices.rows());
    const int k = static_cast<int>(vertices.cols());
    if (k < 1) throw geometric_error("polytope: ambient dimension must be >= 1");
    if (n < k + 1)
        throw geometric_error("polytope: need at least k+1 points, got " +
                              std::to_string(n));

    double scale = std::max(1.0, vertices.cwiseAbs().maxCoeff());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if ((vertices.row(i) - vertices.row(j)).cwiseAbs().maxCoeff() <= 1e-9 * scale)
                throw geometric_error("polytope: duplicate points " + std::to_string(i) +
                                      " and " + std::to_string(j));

    if (detail::affine_rank(vertices) < k)
        throw geometric_error("polytope: points are not full-dimensional");

    Polytope p;
    p.vertices_ = vertices;
    p.enumerate_facets();
    p.enumerate_edges();
    return p;
}

inline void Polytope::enumerate_facets() {
    const int n = vertex_count();
    const int k = dim();
    const double scale = std::max(1.0, vertices_.cwiseAbs().maxCoeff());

    struct Key {
        std::vector<std::int64_t> q;
        bool operator<(const Key& o) const { return q < o.q; }
    };
    auto quantize = [](const Vector& normal, double offset) {
        Key key;
        key.q.reserve(normal.size() + 1);
        for (int i = 0; i < normal.size(); ++i)
            key.q.push_back(std::llround(normal(i) * 1e12));
        key.q.push_back(std::llround(offset * 1e12));
        return key;
    };

    std::map<Key, int> seen;
    std::vector<std::pair<Vector, double>> planes;

    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    do {
        std::vector<Vector> span;
        span.reserve(k - 1);
        Vector base = vertex(idx[0]);
        for (int i = 1; i < k; ++i) span.push_back(vertex(idx[i]) - base);
        Vector u = (k == 1) ? Vector::Ones(1) : linalg::generalized_cross(span);
        double norm = u.norm();
        if (norm <= 1e-10 * ipow(scale, k - 1)) continue;  // degenerate span
        Vector nrm = u / norm;
        double h = nrm.dot(base);

        bool above = false, below = false;
        const double on_tol = tol::kOn * (1.0 + std::abs(h));
        for (int v = 0; v < n && !(above && below); ++v) {
            double d = nrm.dot(vertex(v)) - h;
            if (d > on_tol) above = true;
            else if (d < -on_tol) below = true;
        }
        if (above && below) continue;  // not supporting
        if (above) {
            nrm = -nrm;
            h = -h;
        }
        Key key = quantize(nrm, h);
        if (seen.emplace(key, static_cast<int>(planes.size())).second)
            planes.emplace_back(nrm, h);
    } while (detail::next_combination(idx, n));

    if (planes.empty()) throw geometric_error("polytope: no supporting hyperplanes found");

    // Quantization can split one geometric hyperplane across two keys when a
    // coordinate sits on a rounding boundary; merge by direct comparison.
    std::vector<bool> dead(planes.size(), false);
    for (std::size_t i = 0; i < planes.size(); ++i) {
        if (dead[i]) continue;
        for (std::size_t j = i + 1; j < planes.size(); ++j) {
            if (dead[j]) continue;
            if ((planes[i].first - planes[j].first).cwiseAbs().maxCoeff() <= 1e-9 &&
                std::abs(planes[i].second - planes[j].second) <=
                    1e-9 * (1.0 + std::abs(planes[i].second)))
                dead[j] = true;
        }
    }

    facets_.clear();
    for (std::size_t i = 0; i < planes.size(); ++i) {
        if (dead[i]) continue;
        Facet f;
        f.normal = planes[i].first;
        f.offset = planes[i].second;
        const double on_tol = tol::kOn * (1.0 + std::abs(f.offset));
        for (int v = 0; v < n; ++v)
            if (std::abs(f.normal.dot(vertex(v)) - f.offset) <= on_tol)
                f.vertices.push_back(v);
        if (static_cast<int>(f.vertices.size()) < k) continue;  // spurious sliver
        Matrix pts(f.vertices.size(), k);
        for (std::size_t v = 0; v < f.vertices.size(); ++v)
            pts.row(v) = vertices_.row(f.vertices[v]);
        if (detail::affine_rank(pts) != k - 1) continue;
        facets_.push_back(std::move(f));
    }

    // canonical facet order: by (normal, offset)
    std::sort(facets_.begin(), facets_.end(), [](const Facet& a, const Facet& b) {
        for (int i = 0; i < a.normal.size(); ++i) {
            if (a.normal(i) < b.normal(i) - 1e-12) return true;
            if (a.normal(i) > b.normal(i) + 1e-12) return false;
        }
        return a.offset < b.offset - 1e-12;
    });

    vertex_facets_.assign(n, {});
    for (int fi = 0; fi < static_cast<int>(facets_.size()); ++fi)
        for (int v : facets_[fi].vertices) vertex_facets_[v].push_back(fi);

    // Every input point must be an actual vertex: the normals of its incident
    // facets span R^k.  Interior or otherwise redundant points fail this.
    std::vector<int> redundant;
    for (int v = 0; v < n; ++v) {
        const auto& fs = vertex_facets_[v];
        if (static_cast<int>(fs.size()) < k) {
            redundant.push_back(v);
            continue;
        }
        Matrix normals(fs.size(), k);
        for (std::size_t i = 0; i < fs.size(); ++i)
            normals.row(i) = facets_[fs[i]].normal;
        Eigen::ColPivHouseholderQR<Matrix> qr(normals);
        qr.setThreshold(1e-8);
        if (qr.rank() < k) redundant.push_back(v);
    }
    if (!redundant.empty()) {
        std::ostringstream msg;
        msg << "polytope: points are not all vertices; redundant indices:";
        for (int v : redundant) msg << ' ' << v;
        throw geometric_error(msg.str());
    }
}

inline void Polytope::enumerate_edges() {
    const int n = vertex_count();
    const int k = dim();
    edges_.clear();
    for (int s = 0; s < n; ++s) {
        for (int t = s + 1; t < n; ++t) {
            std::vector<int> shared;
            std::set_intersection(vertex_facets_[s].begin(), vertex_facets_[s].end(),
                                  vertex_facets_[t].begin(), vertex_facets_[t].end(),
                                  std::back_inserter(shared));
            if (static_cast<int>(shared.size()) < k - 1) continue;

            Matrix normals(shared.size(), k);
            for (std::size_t i = 0; i < shared.size(); ++i)
                normals.row(i) = facets_[shared[i]].normal;
            Eigen::ColPivHouseholderQR<Matrix> qr(normals);
            qr.setThreshold(1e-8);
            if (qr.rank() != k - 1) continue;

            // no third vertex may lie on all shared facets
            std::vector<int> common = facets_[shared[0]].vertices;
            for (std::size_t i = 1; i < shared.size() && common.size() > 2; ++i) {
                std::vector<int> next;
                std::set_intersection(common.begin(), common.end(),
                                      facets_[shared[i]].vertices.begin(),
                                      facets_[shared[i]].vertices.end(),
                                      std::back_inserter(next));
                common = std::move(next);
            }
            if (common.size() == 2) edges_.emplace_back(s, t);
        }
    }
    std::sort(edges_.begin(), edges_.end());
}

/// d-dimensional volume of a convex point set inside its affine hull,
/// decomposed as pyramids over the lexicographically smallest point.
inline double convex_volume(const std::vector<Vector>& points, int d);

namespace detail {

inline double polygon_area(const std::vector<Eigen::Vector2d>& pts) {
    Eigen::Vector2d c = Eigen::Vector2d::Zero();
    for (const auto& p : pts) c += p;
    c /= static_cast<double>(pts.size());
    std::vector<std::pair<double, int>> order;
    for (int i = 0; i < static_cast<int>(pts.size()); ++i)
        order.emplace_back(std::atan2(pts[i].y() - c.y(), pts[i].x() - c.x()), i);
    std::sort(order.begin(), order.end());
    double area = 0.0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto& p = pts[order[i].second];
        const auto& q = pts[order[(i + 1) % order.size()].second];
        area += p.x() * q.y() - q.x() * p.y();
    }
    return std::abs(area) / 2.0;
}

}  // namespace detail

inline double convex_volume(const std::vector<Vector>& points, int d) {
    if (points.empty()) throw input_error("convex_volume: no points");
    if (d == 0) return 1.0;
    if (static_cast<int>(points.size()) == d + 1)
        return linalg::simplex_volume(points).value;

    int base = 0;
    for (int i = 1; i < static_cast<int>(points.size()); ++i)
        if (detail::lex_less(points[i], points[base])) base = i;

    Matrix centered(points.size(), points[0].size());
    for (std::size_t i = 0; i < points.size(); ++i)
        centered.row(i) = (points[i] - points[base]).transpose();
    Eigen::JacobiSVD<Matrix> svd(centered, Eigen::ComputeThinV);
    Matrix basis = svd.matrixV().leftCols(d);  // orthonormal frame of the hull

    std::vector<Vector> proj(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        proj[i] = basis.transpose() * (points[i] - points[base]);

    if (d == 1) {
        double lo = 0, hi = 0;
        for (const auto& p : proj) {
            lo = std::min(lo, p(0));
            hi = std::max(hi, p(0));
        }
        return hi - lo;
    }
    if (d == 2) {
        std::vector<Eigen::Vector2d> flat(proj.size());
        for (std::size_t i = 0; i < proj.size(); ++i) flat[i] = proj[i].head<2>();
        return detail::polygon_area(flat);
    }

    Matrix rows(proj.size(), d);
    for (std::size_t i = 0; i < proj.size(); ++i) rows.row(i) = proj[i].transpose();
    Polytope hull = Polytope::build(rows);
    double vol = 0.0;
    const Vector& apex = proj[base];
    for (const auto& f : hull.facets()) {
        double height = f.offset - f.normal.dot(apex);
        if (std::abs(height) <= 1e-12) continue;  // apex on this facet
        std::vector<Vector> fpts;
        for (int v : f.vertices) fpts.push_back(hull.vertex(v));
        vol += std::abs(height) * convex_volume(fpts, d - 1) / d;
    }
    return vol;
}

/// Polar dual { p : <p,v> <= 1 for all v }.  Requires the origin strictly
/// interior; dual vertices are facet normals rescaled to supporting value 1.
inline Polytope polar_dual(const Polytope& p) {
    const auto& facets = p.facets();
    for (std::size_t i = 0; i < facets.size(); ++i)
        if (facets[i].offset <= tol::kOn * (1.0 + std::abs(facets[i].offset)))
            throw geometric_error(
                "polar_dual: origin not strictly interior, facet " + std::to_string(i) +
                " has supporting value " + format_double(facets[i].offset));
    Matrix dual(facets.size(), p.dim());
    for (std::size_t i = 0; i < facets.size(); ++i)
        dual.row(i) = (facets[i].normal / facets[i].offset).transpose();
    return Polytope::build(dual);
}

/// Ridge (codimension-2 face) between two adjacent facets.
inline Ridge ridge_between(const Polytope& p, int facet_s, int facet_t) {
    const int k = p.dim();
    const auto& fs = p.facets().at(facet_s);
    const auto& ft = p.facets().at(facet_t);
    Ridge r;
    r.facet_s = facet_s;
    r.facet_t = facet_t;
    std::set_intersection(fs.vertices.begin(), fs.vertices.end(), ft.vertices.begin(),
                          ft.vertices.end(), std::back_inserter(r.vertices));
    if (static_cast<int>(r.vertices.size()) < k - 1)
        throw geometric_error("ridge_between: facets " + std::to_string(facet_s) + " and " +
                              std::to_string(facet_t) + " are not adjacent");
    std::vector<Vector> pts;
    for (int v : r.vertices) pts.push_back(p.vertex(v));
    Matrix rows(pts.size(), k);
    for (std::size_t i = 0; i < pts.size(); ++i) rows.row(i) = pts[i].transpose();
    if (detail::affine_rank(rows) != k - 2)
        throw geometric_error("ridge_between: intersection is not (k-2)-dimensional");
    r.volume = {k - 2, convex_volume(pts, k - 2)};
    return r;
}

/// Every vertex has exactly k incident edges.
inline bool is_simple(const Polytope& p) {
    std::vector<int> deg(p.vertex_count(), 0);
    for (const auto& e : p.edges()) {
        ++deg[e.first];
        ++deg[e.second];
    }
    for (int d : deg)
        if (d != p.dim()) return false;
    return true;
}

struct EquilateralCheck {
    bool equilateral = false;
    double spread = 0.0;  // max/min edge length - 1
};

inline EquilateralCheck is_equilateral(const Polytope& p) {
    if (p.edges().empty()) throw geometric_error("is_equilateral: polytope has no edges");
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& e : p.edges()) {
        double len = (p.vertex(e.first) - p.vertex(e.second)).norm();
        lo = std::min(lo, len);
        hi = std::max(hi, len);
    }
    EquilateralCheck c;
    c.spread = hi / lo - 1.0;
    c.equilateral = c.spread <= 1e-9;
    return c;
}

inline Vector centre(const Polytope& p) {
    return p.vertices().colwise().mean().transpose();
}

namespace detail {

// Colour refinement on the bipartite vertex-facet incidence graph.  Node ids:
// vertices are 0..nv-1, facets nv..nv+nf-1.
struct IncidenceGraph {
    int nv = 0, nf = 0;
    std::vector<std::vector<int>> adj;  // size nv + nf
};

inline IncidenceGraph incidence_graph(const Polytope& p) {
    IncidenceGraph g;
    g.nv = p.vertex_count();
    g.nf = static_cast<int>(p.facets().size());
    g.adj.assign(g.nv + g.nf, {});
    for (int f = 0; f < g.nf; ++f)
        for (int v : p.facets()[f].vertices) {
            g.adj[g.nv + f].push_back(v);
            g.adj[v].push_back(g.nv + f);
        }
    return g;
}

// New colour ids are ranks of the sorted (old colour, neighbour multiset)
// keys, which keeps them independent of node numbering.
inline std::vector<int> refine_colors(const IncidenceGraph& g, std::vector<int> color) {
    const int n = g.nv + g.nf;
    for (int round = 0; round < n; ++round) {
        std::vector<std::pair<int, std::vector<int>>> keys(n);
        for (int x = 0; x < n; ++x) {
            std::vector<int> neigh;
            neigh.reserve(g.adj[x].size());
            for (int y : g.adj[x]) neigh.push_back(color[y]);
            std::sort(neigh.begin(), neigh.end());
            keys[x] = {color[x], std::move(neigh)};
        }
        std::map<std::pair<int, std::vector<int>>, int> palette;
        for (const auto& key : keys) palette.emplace(key, 0);
        int rank = 0;
        for (auto& [key, id] : palette) id = rank++;
        std::set<int> old_palette(color.begin(), color.end());
        for (int x = 0; x < n; ++x) color[x] = palette[keys[x]];
        if (static_cast<int>(palette.size()) == static_cast<int>(old_palette.size())) break;
    }
    return color;
}

inline std::vector<int> initial_colors(const IncidenceGraph& g) {
    std::vector<int> color(g.nv + g.nf);
    for (int v = 0; v < g.nv; ++v) color[v] = 0;
    std::map<int, int> sizes;  // facet size -> rank, sorted by size
    for (int f = 0; f < g.nf; ++f) sizes.emplace(static_cast<int>(g.adj[g.nv + f].size()), 0);
    int rank = 0;
    for (auto& [sz, id] : sizes) id = ++rank;
    for (int f = 0; f < g.nf; ++f)
        color[g.nv + f] = sizes[static_cast<int>(g.adj[g.nv + f].size())];
    return refine_colors(g, color);
}

inline bool discrete(const std::vector<int>& color) {
    std::set<int> s(color.begin(), color.end());
    return s.size() == color.size();
}

inline std::string emit_string(const IncidenceGraph& g, const std::vector<int>& color) {
    // order nodes by colour; with a discrete colouring this is a labeling
    const int n = g.nv + g.nf;
    std::vector<int> order(n), pos(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return color[a] < color[b]; });
    for (int i = 0; i < n; ++i) pos[order[i]] = i;
    std::ostringstream out;
    for (int i = 0; i < n; ++i) {
        int x = order[i];
        std::vector<int> neigh;
        for (int y : g.adj[x]) neigh.push_back(pos[y]);
        std::sort(neigh.begin(), neigh.end());
        out << (x < g.nv ? 'v' : 'f');
        for (int y : neigh) out << ',' << y;
        out << ';';
    }
    return out.str();
}

// Individualisation-refinement canonical form; practical for the corpus
// sizes (<= 60 vertices).
inline std::string canonical_string(const IncidenceGraph& g, const std::vector<int>& color,
                                    int depth = 0) {
    std::vector<int> refined = refine_colors(g, color);
    if (discrete(refined)) return emit_string(g, refined);
    if (depth > g.nv + g.nf) return emit_string(g, refined);  // safety stop

    // smallest non-singleton colour class
    std::map<int, std::vector<int>> classes;
    for (int x = 0; x < static_cast<int>(refined.size()); ++x) classes[refined[x]].push_back(x);
    const std::vector<int>* target = nullptr;
    for (const auto& [c, members] : classes)
        if (members.size() > 1 && (!target || members.size() < target->size())) target = &members;

    std::string best;
    int fresh = 0;
    for (int c : refined) fresh = std::max(fresh, c + 1);
    for (int x : *target) {
        std::vector<int> branched = refined;
        branched[x] = fresh;
        std::string s = canonical_string(g, branched, depth + 1);
        if (best.empty() || s < best) best = s;
    }
    return best;
}

}  // namespace detail

/// Canonical invariant of the vertex-facet incidence structure: facet-size
/// multiset, vertex-degree multiset, and a canonical form of the bipartite
/// incidence graph (exact canonical labeling for <= 60 vertices, colour
/// refinement summary above that).
inline std::string combinatorial_signature(const Polytope& p) {
    std::vector<int> fsizes;
    for (const auto& f : p.facets()) fsizes.push_back(static_cast<int>(f.vertices.size()));
    std::sort(fsizes.begin(), fsizes.end());
    std::vector<int> degs(p.vertex_count(), 0);
    for (const auto& e : p.edges()) {
        ++degs[e.first];
        ++degs[e.second];
    }
    std::sort(degs.begin(), degs.end());

    std::ostringstream out;
    out << "F[";
    for (std::size_t i = 0; i < fsizes.size(); ++i) out << (i ? "," : "") << fsizes[i];
    out << "]D[";
    for (std::size_t i = 0; i < degs.size(); ++i) out << (i ? "," : "") << degs[i];
    out << "]";

    auto g = detail::incidence_graph(p);
    auto colors = detail::initial_colors(g);
    if (p.vertex_count() <= 60) {
        out << "C{" << detail::canonical_string(g, colors) << "}";
    } else {
        std::map<int, int> histogram;
        for (int c : colors) ++histogram[c];
        std::vector<int> counts;
        for (const auto& [c, cnt] : histogram) counts.push_back(cnt);
        std::sort(counts.begin(), counts.end());
        out << "R{";
        for (std::size_t i = 0; i < counts.size(); ++i) out << (i ? "," : "") << counts[i];
        out << "}";
    }
    return out.str();
}

}  // namespace polyspectra::geom

#endif

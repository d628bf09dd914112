#ifndef POLYSPECTRA_GROUPS_HPP
#define POLYSPECTRA_GROUPS_HPP

#include <deque>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "polyspectra/polytope.hpp"

namespace polyspectra::groups {

using geom::Polytope;

/// Finite subgroup of O(k) as an explicit element list, identity first,
/// order fixed by breadth-first closure.
class FiniteOrthogonalGroup {
  public:
    static FiniteOrthogonalGroup from_generators(int k, const std::vector<Matrix>& gens,
                                                 int element_cap = 20000);
    static FiniteOrthogonalGroup tetrahedral_rotation();

    int dim() const { return dim_; }
    int order() const { return static_cast<int>(elements_.size()); }
    const Matrix& element(int i) const { return elements_.at(i); }
    const std::vector<Matrix>& elements() const { return elements_; }
    const std::vector<int>& generator_indices() const { return generators_; }

    /// Index of the element closest to m, or -1 if none is within tolerance.
    int find(const Matrix& m, double tolerance = 10 * tol::kGroupDedup) const {
        int best = -1;
        double best_dist = tolerance;
        for (int i = 0; i < order(); ++i) {
            double d = (elements_[i] - m).norm();
            if (d < best_dist) {
                best_dist = d;
                best = i;
            }
        }
        return best;
    }

    int product(int a, int b) const {
        int r = find(elements_.at(a) * elements_.at(b));
        if (r < 0) throw structural_error("group: product escapes the element list");
        return r;
    }

    int inverse(int a) const {
        int r = find(elements_.at(a).transpose());  // orthogonal inverse
        if (r < 0) throw structural_error("group: inverse escapes the element list");
        return r;
    }

    void validate() const;

  private:
    int dim_ = 0;
    std::vector<Matrix> elements_;
    std::vector<int> generators_;
};

inline void FiniteOrthogonalGroup::validate() const {
    for (const auto& g : elements_) {
        if ((g.transpose() * g - Matrix::Identity(dim_, dim_)).cwiseAbs().maxCoeff() > 1e-9)
            throw input_error("group: element is not orthogonal");
    }
    for (int i = 0; i < order(); ++i)
        for (int j = i + 1; j < order(); ++j)
            if ((elements_[i] - elements_[j]).norm() < tol::kGroupDedup)
                throw structural_error("group: elements not pairwise distinct");
    for (int i = 0; i < order(); ++i) {
        for (int g : generators_) {
            Matrix p = elements_[i] * elements_[g];
            bool found = false;
            for (int j = 0; j < order() && !found; ++j)
                if ((elements_[j] - p).norm() < 1e-7) found = true;
            if (!found) throw structural_error("group: not closed under products");
        }
    }
}

inline FiniteOrthogonalGroup FiniteOrthogonalGroup::from_generators(
    int k, const std::vector<Matrix>& gens, int element_cap) {
    if (gens.empty()) throw input_error("group: no generators");
    for (const auto& g : gens) {
        if (g.rows() != k || g.cols() != k)
            throw input_error("group: generator dimension mismatch");
        if ((g.transpose() * g - Matrix::Identity(k, k)).cwiseAbs().maxCoeff() > 1e-9)
            throw input_error("group: generator is not orthogonal");
    }

    FiniteOrthogonalGroup grp;
    grp.dim_ = k;
    grp.elements_.push_back(Matrix::Identity(k, k));

    auto lookup = [&grp](const Matrix& m) {
        for (int i = 0; i < grp.order(); ++i)
            if ((grp.elements_[i] - m).norm() < tol::kGroupDedup) return i;
        return -1;
    };

    std::deque<int> queue{0};
    while (!queue.empty()) {
        int e = queue.front();
        queue.pop_front();
        for (const auto& g : gens) {
            Matrix p = grp.elements_[e] * g;
            if (lookup(p) >= 0) continue;
            if (grp.order() >= element_cap)
                throw geometric_error("group too large or not discrete (cap " +
                                      std::to_string(element_cap) + " exceeded)");
            grp.elements_.push_back(p);
            queue.push_back(grp.order() - 1);
        }
    }

    for (const auto& g : gens) {
        int idx = lookup(g);
        if (idx < 0) throw structural_error("group: generator lost during closure");
        grp.generators_.push_back(idx);
    }
    return grp;
}

/// The 12 rotations preserving the regular tetrahedron: signed permutation
/// matrices with determinant +1 over the three cyclic column patterns, listed
/// pattern-major with sign triples (+++), (+--), (-+-), (--+).
inline FiniteOrthogonalGroup FiniteOrthogonalGroup::tetrahedral_rotation() {
    FiniteOrthogonalGroup grp;
    grp.dim_ = 3;
    const int signs[4][3] = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
    for (int pattern = 0; pattern < 3; ++pattern) {
        for (const auto& s : signs) {
            Matrix m = Matrix::Zero(3, 3);
            if (pattern == 0) {
                m(0, 0) = s[0];
                m(1, 1) = s[1];
                m(2, 2) = s[2];
            } else if (pattern == 1) {
                m(0, 1) = s[0];
                m(1, 2) = s[1];
                m(2, 0) = s[2];
            } else {
                m(0, 2) = s[0];
                m(1, 0) = s[1];
                m(2, 1) = s[2];
            }
            grp.elements_.push_back(m);
        }
    }
    // gamma_1 = diag(1,-1,-1), gamma_2 = cyclic shift, gamma_3 = its signed twin
    grp.generators_ = {1, 4, 5};
    return grp;
}

/// Convex hull of a group orbit together with the element carrying the seed
/// to each vertex.
struct OrbitPolytope {
    FiniteOrthogonalGroup group;
    Vector seed;
    Polytope polytope;
    std::vector<int> vertex_element;  // vertex index -> group element index
    int base_vertex = 0;              // index of the seed among the vertices
};

inline OrbitPolytope orbit_polytope(const FiniteOrthogonalGroup& grp, const Vector& w) {
    if (w.size() != grp.dim()) throw input_error("orbit_polytope: seed dimension mismatch");
    const double dedup = 1e-9 * (1.0 + w.norm());
    std::vector<Vector> points;
    std::vector<int> reps;
    for (int i = 0; i < grp.order(); ++i) {
        Vector p = grp.element(i) * w;
        bool fresh = true;
        for (const auto& q : points)
            if ((p - q).norm() <= dedup) {
                fresh = false;
                break;
            }
        if (fresh) {
            points.push_back(p);
            reps.push_back(i);
        }
    }
    Matrix verts(points.size(), grp.dim());
    for (std::size_t i = 0; i < points.size(); ++i) verts.row(i) = points[i].transpose();

    try {
        // identity is element 0 and is visited first, so the seed is vertex 0
        return OrbitPolytope{grp, w, Polytope::build(verts), std::move(reps), 0};
    } catch (const geometric_error& e) {
        throw geometric_error(std::string("orbit degenerate: ") + e.what());
    }
}

inline bool is_simply_transitive(const FiniteOrthogonalGroup& grp, const Vector& w) {
    const double dedup = 1e-9 * (1.0 + w.norm());
    std::vector<Vector> points;
    for (int i = 0; i < grp.order(); ++i) {
        Vector p = grp.element(i) * w;
        bool fresh = true;
        for (const auto& q : points)
            if ((p - q).norm() <= dedup) {
                fresh = false;
                break;
            }
        if (fresh) points.push_back(p);
    }
    return static_cast<int>(points.size()) == grp.order();
}

/// Neighbour generators of the base vertex, sorted with the order-2 elements
/// first and inverse pairs adjacent; labels every directed edge of the
/// polytope by the generator carrying its tail to its head.
struct CayleyStructure {
    int nu = 0;                        // number of order-2 generators
    int mu = 0;                        // number of inverse pairs
    std::vector<int> generators;       // group element indices, sorted as above
    std::vector<int> neighbor_vertex;  // polytope vertex index per generator slot
    std::map<std::pair<int, int>, int> edge_label;  // directed edge -> generator slot
};

inline CayleyStructure cayley_structure(const OrbitPolytope& op) {
    const auto& grp = op.group;
    if (op.polytope.vertex_count() != grp.order())
        throw geometric_error("cayley_structure: action is not simply transitive");

    const int base = op.base_vertex;
    std::vector<int> neighbors;
    for (const auto& e : op.polytope.edges()) {
        if (e.first == base) neighbors.push_back(e.second);
        if (e.second == base) neighbors.push_back(e.first);
    }

    struct Gen {
        int element;
        int vertex;
        int inverse;
    };
    std::vector<Gen> gens;
    for (int v : neighbors) {
        Gen g;
        g.element = op.vertex_element[v];
        g.vertex = v;
        g.inverse = grp.inverse(g.element);
        gens.push_back(g);
    }
    for (const auto& g : gens) {
        bool closed = false;
        for (const auto& h : gens)
            if (h.element == g.inverse) closed = true;
        if (!closed)
            throw structural_error("cayley_structure: generator set not symmetric");
    }

    CayleyStructure cs;
    std::vector<Gen> order2, rest;
    for (const auto& g : gens)
        (g.element == g.inverse ? order2 : rest).push_back(g);
    std::sort(order2.begin(), order2.end(),
              [](const Gen& a, const Gen& b) { return a.element < b.element; });
    std::sort(rest.begin(), rest.end(),
              [](const Gen& a, const Gen& b) { return a.element < b.element; });

    cs.nu = static_cast<int>(order2.size());
    for (const auto& g : order2) {
        cs.generators.push_back(g.element);
        cs.neighbor_vertex.push_back(g.vertex);
    }
    std::vector<bool> used(rest.size(), false);
    for (std::size_t i = 0; i < rest.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        bool paired = false;
        for (std::size_t j = i + 1; j < rest.size(); ++j) {
            if (!used[j] && rest[j].element == rest[i].inverse) {
                used[j] = true;
                cs.generators.push_back(rest[i].element);
                cs.neighbor_vertex.push_back(rest[i].vertex);
                cs.generators.push_back(rest[j].element);
                cs.neighbor_vertex.push_back(rest[j].vertex);
                ++cs.mu;
                paired = true;
                break;
            }
        }
        if (!paired) throw structural_error("cayley_structure: unpaired generator");
    }

    // label every directed edge; the carrying generator is g_u^{-1} g_v
    std::vector<int> degree(op.polytope.vertex_count(), 0);
    auto slot_of_element = [&cs](int element) {
        for (std::size_t i = 0; i < cs.generators.size(); ++i)
            if (cs.generators[i] == element) return static_cast<int>(i);
        return -1;
    };
    for (const auto& e : op.polytope.edges()) {
        for (auto [u, v] : {std::pair{e.first, e.second}, std::pair{e.second, e.first}}) {
            int gu_inv = grp.inverse(op.vertex_element[u]);
            int s = grp.product(gu_inv, op.vertex_element[v]);
            int slot = slot_of_element(s);
            if (slot < 0)
                throw structural_error(
                    "cayley_structure: edge not labeled by a base generator");
            cs.edge_label[{u, v}] = slot;
        }
        ++degree[e.first];
        ++degree[e.second];
    }
    const int m = cs.nu + 2 * cs.mu;
    for (int d : degree)
        if (d != m)
            throw structural_error("cayley_structure: vertex degrees are not uniform");
    return cs;
}

}  // namespace polyspectra::groups

#endif

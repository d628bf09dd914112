#ifndef POLYSPECTRA_COXETER_HPP
#define POLYSPECTRA_COXETER_HPP

#include <string>
#include <vector>

#include "polyspectra/walk.hpp"

namespace polyspectra::coxeter {

using groups::FiniteOrthogonalGroup;
using groups::OrbitPolytope;

/// Finite Coxeter system realised in R^k: unit simple-root normals n_i as
/// columns of an upper-triangular factor of the Schlafli matrix (so
/// V = det(n_1, ..., n_k) > 0), the generated reflection group, and the dual
/// basis p_j from the multilinear vector product.
struct CoxeterSystem {
    int rank = 0;
    Eigen::MatrixXi coxeter_matrix;
    Matrix schlafli;                  // N_ij = -cos(pi / m_ij)
    Matrix roots;                     // columns n_i
    std::vector<Matrix> reflections;  // sigma_i = Id - 2 n_i n_i^T
    Matrix dual_basis;                // columns p_j, <p_i, n_j> = V delta_ij
    double v = 0.0;                   // det(n_1, ..., n_k)
    FiniteOrthogonalGroup group;
};

inline CoxeterSystem coxeter_system(const Eigen::MatrixXi& m, int element_cap = 20000) {
    const int k = static_cast<int>(m.rows());
    if (m.cols() != k || k < 2) throw input_error("coxeter: matrix must be square, rank >= 2");
    for (int i = 0; i < k; ++i) {
        if (m(i, i) != 1) throw input_error("coxeter: diagonal entries must be 1");
        for (int j = i + 1; j < k; ++j) {
            if (m(i, j) != m(j, i)) throw input_error("coxeter: matrix must be symmetric");
            if (m(i, j) < 2) throw input_error("coxeter: off-diagonal entries must be >= 2");
        }
    }

    CoxeterSystem sys;
    sys.rank = k;
    sys.coxeter_matrix = m;
    sys.schlafli.resize(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            sys.schlafli(i, j) = (i == j) ? 1.0 : -std::cos(M_PI / m(i, j));

    Eigen::SelfAdjointEigenSolver<Matrix> eig(sys.schlafli);
    if (eig.eigenvalues().minCoeff() <= 1e-12)
        throw geometric_error("coxeter: Schlafli matrix not positive definite (not finite type)");
    Eigen::LLT<Matrix> llt(sys.schlafli);
    if (llt.info() != Eigen::Success)
        throw geometric_error("coxeter: Cholesky factorisation failed");
    sys.roots = Matrix(llt.matrixL()).transpose();  // upper triangular, N = R^T R

    for (int i = 0; i < k; ++i) {
        Vector n = sys.roots.col(i);
        sys.reflections.push_back(Matrix::Identity(k, k) - 2.0 * n * n.transpose());
    }
    sys.v = linalg::determinant(sys.roots);
    if (sys.v <= 0) throw structural_error("coxeter: expected positive root determinant");

    sys.dual_basis.resize(k, k);
    for (int j = 0; j < k; ++j) {
        std::vector<Vector> others;
        for (int i = 0; i < k; ++i)
            if (i != j) others.push_back(sys.roots.col(i));
        Vector pj = linalg::generalized_cross(others);
        if (j % 2 == 1) pj = -pj;
        sys.dual_basis.col(j) = pj;
    }
    sys.group = FiniteOrthogonalGroup::from_generators(k, sys.reflections, element_cap);
    return sys;
}

inline CoxeterSystem coxeter_preset(const std::string& name) {
    Eigen::MatrixXi m(3, 3);
    int m12;
    if (name == "A3")
        m12 = 3;
    else if (name == "B3")
        m12 = 4;
    else if (name == "H3")
        m12 = 5;
    else
        throw input_error("coxeter: unknown preset '" + name + "' (expected A3, B3 or H3)");
    m << 1, m12, 2, m12, 1, 3, 2, 3, 1;
    return coxeter_system(m);
}

/// Rescales alpha so that w = sum alpha_j p_j lies on the unit sphere.
inline Vector normalize_alpha(const CoxeterSystem& sys, const Vector& alpha) {
    if (alpha.size() != sys.rank) throw input_error("alpha: dimension mismatch");
    for (int j = 0; j < alpha.size(); ++j)
        if (alpha(j) <= 0) throw input_error("alpha: all entries must be positive");
    double norm = (sys.dual_basis * alpha).norm();
    return alpha / norm;
}

/// Orbit polytope of w = sum alpha_j p_j (normalised to the unit sphere);
/// simple, with one vertex per group element.
inline OrbitPolytope permutahedron(const CoxeterSystem& sys, const Vector& alpha) {
    Vector a = normalize_alpha(sys, alpha);
    Vector w = sys.dual_basis * a;
    OrbitPolytope op = groups::orbit_polytope(sys.group, w);
    if (op.polytope.vertex_count() != sys.group.order())
        throw structural_error("permutahedron: action is not simply transitive");
    if (!geom::is_simple(op.polytope))
        throw structural_error("permutahedron: polytope is not simple");
    return op;
}

/// Closed-form off-diagonal row of M at the base vertex, ordered by the
/// reflections:  M_{k+1,i} = -1 / (2 V^{k+1} (k-2)! alpha_i prod_{j != i}
/// |(N^{-1} alpha)_j|), for unit-sphere alpha.
inline Vector closed_form_row(const CoxeterSystem& sys, const Vector& alpha) {
    const int k = sys.rank;
    Vector a = normalize_alpha(sys, alpha);
    Vector na = sys.schlafli.ldlt().solve(a);
    Vector row(k);
    for (int i = 0; i < k; ++i) {
        double denom = 2.0 * ipow(sys.v, k + 1) * factorial(k - 2) * a(i);
        for (int j = 0; j < k; ++j)
            if (j != i) denom *= std::abs(na(j));
        row(i) = -1.0 / denom;
    }
    return row;
}

/// lambda_1(T(Q_w)) through the full pipeline.
inline double lambda1_of_alpha(const CoxeterSystem& sys, const Vector& alpha) {
    OrbitPolytope op = permutahedron(sys, alpha);
    auto rep = cdv::izmestiev_matrix_geometric(op.polytope);
    auto s = walk::spectrum(walk::transition_matrix(rep));
    return s.lambda1;
}

struct MinimizeResult {
    Vector alpha;       // normalised to sum 1
    double lambda1 = 0.0;
    bool converged = false;
    int evaluations = 0;
};

/// Coarse grid over the open weight simplex followed by a derivative-free
/// reflect/contract simplex search.  lambda_1 has multiplicity k, hence no
/// usable gradients.
inline MinimizeResult minimize_lambda1(const CoxeterSystem& sys, int grid_density = 7,
                                       int max_iterations = 200) {
    const int k = sys.rank;
    int evals = 0;
    auto objective = [&](const Vector& alpha_sum1) {
        for (int j = 0; j < k; ++j)
            if (alpha_sum1(j) <= 1e-6) return std::numeric_limits<double>::infinity();
        ++evals;
        return lambda1_of_alpha(sys, alpha_sum1);
    };

    // grid of interior compositions i/g with sum 1; the centre point is only
    // used as a fallback when the grid is too coarse to exist
    Vector best_alpha;
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> comp(k, 1);
    std::function<void(int, int)> scan = [&](int slot, int remaining) {
        if (slot == k - 1) {
            comp[slot] = remaining;
            Vector a(k);
            for (int j = 0; j < k; ++j) a(j) = static_cast<double>(comp[j]) / grid_density;
            double val = objective(a);
            if (val < best) {
                best = val;
                best_alpha = a;
            }
            return;
        }
        for (int i = 1; i <= remaining - (k - 1 - slot); ++i) {
            comp[slot] = i;
            scan(slot + 1, remaining - i);
        }
    };
    if (grid_density >= k) scan(0, grid_density);
    if (!std::isfinite(best)) {
        best_alpha = Vector::Constant(k, 1.0 / k);
        best = objective(best_alpha);
    }

    // Nelder-Mead on the first k-1 simplex coordinates
    const int d = k - 1;
    auto embed = [&](const Vector& u) {
        Vector a(k);
        double s = 0.0;
        for (int j = 0; j < d; ++j) {
            a(j) = u(j);
            s += u(j);
        }
        a(d) = 1.0 - s;
        return a;
    };
    std::vector<Vector> simplex(d + 1);
    std::vector<double> value(d + 1);
    simplex[0] = best_alpha.head(d);
    value[0] = best;
    double step = 0.05;
    for (int i = 1; i <= d; ++i) {
        simplex[i] = simplex[0];
        simplex[i](i - 1) += step;
        value[i] = objective(embed(simplex[i]));
    }

    MinimizeResult result;
    for (int iter = 0; iter < max_iterations; ++iter) {
        std::vector<int> order(d + 1);
        for (int i = 0; i <= d; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return value[a] < value[b]; });
        std::vector<Vector> sorted_pts(d + 1);
        std::vector<double> sorted_val(d + 1);
        for (int i = 0; i <= d; ++i) {
            sorted_pts[i] = simplex[order[i]];
            sorted_val[i] = value[order[i]];
        }
        simplex = sorted_pts;
        value = sorted_val;

        double diameter = 0.0;
        for (int i = 1; i <= d; ++i)
            diameter = std::max(diameter, (simplex[i] - simplex[0]).norm());
        if (diameter < 1e-6) {
            result.converged = true;
            break;
        }

        Vector centroid = Vector::Zero(d);
        for (int i = 0; i < d; ++i) centroid += simplex[i];
        centroid /= d;

        Vector reflected = centroid + (centroid - simplex[d]);
        double fr = objective(embed(reflected));
        if (fr < value[0]) {
            Vector expanded = centroid + 2.0 * (centroid - simplex[d]);
            double fe = objective(embed(expanded));
            if (fe < fr) {
                simplex[d] = expanded;
                value[d] = fe;
            } else {
                simplex[d] = reflected;
                value[d] = fr;
            }
        } else if (fr < value[d - 1]) {
            simplex[d] = reflected;
            value[d] = fr;
        } else {
            Vector contracted = centroid + 0.5 * (simplex[d] - centroid);
            double fc = objective(embed(contracted));
            if (fc < value[d]) {
                simplex[d] = contracted;
                value[d] = fc;
            } else {
                for (int i = 1; i <= d; ++i) {
                    simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0]);
                    value[i] = objective(embed(simplex[i]));
                }
            }
        }
    }

    int best_i = 0;
    for (int i = 1; i <= d; ++i)
        if (value[i] < value[best_i]) best_i = i;
    result.alpha = embed(simplex[best_i]);
    result.alpha /= result.alpha.sum();
    result.lambda1 = value[best_i];
    result.evaluations = evals;
    return result;
}

}  // namespace polyspectra::coxeter

#endif

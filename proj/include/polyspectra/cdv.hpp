#ifndef POLYSPECTRA_CDV_HPP
#define POLYSPECTRA_CDV_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polyspectra/polytope.hpp"

namespace polyspectra::cdv {

using geom::Polytope;
using linalg::IndexSet;

/// Simplicial cone v0 + pos(eps_1, ..., eps_k) with the origin in its
/// interior.  Generators are the columns of `generators`.
struct SimplicialConeFrame {
    Vector apex;
    Matrix generators;

    int dim() const { return static_cast<int>(generators.cols()); }

    static SimplicialConeFrame create(const Vector& apex, const Matrix& generators) {
        const int k = static_cast<int>(generators.cols());
        if (generators.rows() != k || apex.size() != k)
            throw input_error("cone frame: need k generators of dimension k");
        double det = linalg::determinant(generators);
        double scale = std::max(1.0, generators.cwiseAbs().maxCoeff());
        if (std::abs(det) <= 1e-12 * ipow(scale, k))
            throw geometric_error("cone frame: generators are linearly dependent");
        SimplicialConeFrame f{apex, generators};
        f.interior_coefficients();  // validates the origin position
        return f;
    }

    /// Coefficients c > 0 with v0 + sum c_j eps_j = 0; existence is exactly
    /// the origin-interior condition.
    Vector interior_coefficients() const {
        Vector c = generators.partialPivLu().solve(-apex);
        for (int j = 0; j < c.size(); ++j)
            if (c(j) <= 1e-12)
                throw geometric_error("cone frame: origin not interior (coefficient " +
                                      std::to_string(j + 1) + " is " + format_double(c(j)) +
                                      ")");
        return c;
    }
};

/// Facet normals q_j of the cone, their polar rescalings, and the Gram data
/// used by the rephrased ratio route.
struct DualFrame {
    Matrix q;        // columns q_j = (-1)^{j-1} eps_1 x ... x ^eps_j x ... x eps_k
    Matrix q_tilde;  // columns q_j / <v0, q_j>
    Matrix gram_q;   // (<q_r, q_s>)
    Vector vq;       // (<v0, q_j>)
    double w = 0.0;  // det(eps_1, ..., eps_k)

    static DualFrame of(const SimplicialConeFrame& frame) {
        const int k = frame.dim();
        DualFrame d;
        d.w = linalg::determinant(frame.generators);
        d.q.resize(k, k);
        for (int j = 0; j < k; ++j) {
            std::vector<Vector> others;
            others.reserve(k - 1);
            for (int i = 0; i < k; ++i)
                if (i != j) others.push_back(frame.generators.col(i));
            Vector qj = linalg::generalized_cross(others);
            if (j % 2 == 1) qj = -qj;
            d.q.col(j) = qj;
        }
        d.vq = d.q.transpose() * frame.apex;
        d.q_tilde.resize(k, k);
        for (int j = 0; j < k; ++j) {
            if (std::abs(d.vq(j)) <= 1e-14 * std::max(1.0, d.q.col(j).norm()))
                throw geometric_error("dual frame: <v0, q_j> vanishes");
            d.q_tilde.col(j) = d.q.col(j) / d.vq(j);
        }
        d.gram_q = d.q.transpose() * d.q;
        return d;
    }
};

namespace detail {

inline void check_index_set(const SimplicialConeFrame& frame, const IndexSet& I) {
    if (I.ambient() != frame.dim())
        throw input_error("volume ratio: index set ambient mismatch");
    if (I.size() >= frame.dim())
        throw input_error("volume ratio: need |I| < k");
}

}  // namespace detail

/// vol_{l-1}(Delta_J) / vol_{m+1}(S_I) via the closed form
/// (m+1)!/(l-1)! * vol_k(E)^{l-1} / prod_{j in J} |<v0, q_j>|.
inline double volume_ratio_formula(const SimplicialConeFrame& frame, const IndexSet& I) {
    detail::check_index_set(frame, I);
    const int m = I.size();
    const IndexSet J = I.complement();
    const int ell = J.size();
    DualFrame dual = DualFrame::of(frame);
    double denom = 1.0;
    for (int j = 0; j < ell; ++j) denom *= std::abs(dual.vq(J[j] - 1));
    return factorial(m + 1) / factorial(ell - 1) * ipow(std::abs(dual.w), ell - 1) / denom;
}

/// Same ratio measured directly: both simplices are built vertex by vertex
/// and their volumes taken with the Gram formula.  Serves as the brute-force
/// oracle for the closed form.
inline double volume_ratio_oracle(const SimplicialConeFrame& frame, const IndexSet& I) {
    detail::check_index_set(frame, I);
    const IndexSet J = I.complement();
    DualFrame dual = DualFrame::of(frame);

    std::vector<Vector> s_points;
    s_points.push_back(Vector::Zero(frame.dim()));
    s_points.push_back(frame.apex);
    for (int i = 0; i < I.size(); ++i)
        s_points.push_back(frame.apex + frame.generators.col(I[i] - 1));
    double vol_s = linalg::simplex_volume(s_points).value;
    if (vol_s <= 0)
        throw geometric_error("volume ratio oracle: S_I degenerate");

    std::vector<Vector> d_points;
    for (int j = 0; j < J.size(); ++j) d_points.push_back(dual.q_tilde.col(J[j] - 1));
    double vol_d = linalg::simplex_volume(d_points).value;
    if (J.size() > 1 && vol_d <= 0)
        throw geometric_error("volume ratio oracle: Delta_J degenerate");

    return vol_d / vol_s;
}

/// Third route: (m+1)! / (|W| (l-1)! prod_{j in J} |(E^{-1} beta)_j|) with
/// E the generator Gram matrix and beta_j = <v0, eps_j>.
inline double volume_ratio_rephrased(const SimplicialConeFrame& frame, const IndexSet& I) {
    detail::check_index_set(frame, I);
    const int m = I.size();
    const IndexSet J = I.complement();
    const int ell = J.size();
    Matrix e = frame.generators.transpose() * frame.generators;
    Vector beta = frame.generators.transpose() * frame.apex;
    Vector coeffs = e.ldlt().solve(beta);
    double w = std::abs(linalg::determinant(frame.generators));
    double denom = w * factorial(ell - 1);
    for (int j = 0; j < ell; ++j) denom *= std::abs(coeffs(J[j] - 1));
    return factorial(m + 1) / denom;
}

enum class TriState { True, False, Skipped };

/// Izmestiev matrix of a polytope together with its spectral bookkeeping.
struct CdVReport {
    Matrix m;                        // the Colin de Verdiere matrix
    Vector diagonal;                 // M_ss
    Vector row_sums;
    Matrix kernel;                   // vertex-coordinate columns (n x k)
    Vector eigenvalues;              // ascending
    Vector parallelism_residuals;    // per vertex, from the M_ss defining relation
    std::vector<std::pair<int, int>> edges;
    int dim = 0;
    int corank = 0;
    bool corank_ok = false;
    bool m1 = false;
    bool m2 = false;
    TriState m3 = TriState::Skipped;
    double spectral_norm = 0.0;

    double zero_threshold() const { return tol::kSpectralZero * spectral_norm; }
};

/// M(Q) from the polar-dual construction: for every edge st,
/// M_st = -vol_{k-2}(F_st) / A(w_s, w_t) with F_st the ridge of P = Q*
/// between the facets polar to w_s, w_t and A the area of the parallelogram
/// spanned by w_s, w_t; the diagonal is fixed by M_ss w_s = -sum_t M_st w_t.
inline CdVReport izmestiev_matrix_geometric(const Polytope& q) {
    const int n = q.vertex_count();
    const int k = q.dim();
    Polytope p = geom::polar_dual(q);

    // facet of P polar to each vertex of Q, identified by its outer normal
    std::vector<int> facet_of(n, -1);
    for (int s = 0; s < n; ++s) {
        Vector ws = q.vertex(s);
        if (ws.norm() <= 1e-9)
            throw geometric_error("izmestiev: vertex too close to the origin");
        Vector unit = ws / ws.norm();
        double best = -2.0;
        int arg = -1;
        for (int f = 0; f < static_cast<int>(p.facets().size()); ++f) {
            double d = p.facets()[f].normal.dot(unit);
            if (d > best) {
                best = d;
                arg = f;
            }
        }
        if (arg < 0 || (p.facets()[arg].normal - unit).norm() > 1e-7)
            throw structural_error("izmestiev: dual facet of vertex " + std::to_string(s) +
                                   " not found");
        facet_of[s] = arg;
    }

    CdVReport rep;
    rep.dim = k;
    rep.edges = q.edges();
    rep.m = Matrix::Zero(n, n);
    for (const auto& [s, t] : q.edges()) {
        geom::Ridge ridge = geom::ridge_between(p, facet_of[s], facet_of[t]);
        Vector ws = q.vertex(s), wt = q.vertex(t);
        double area2 = ws.squaredNorm() * wt.squaredNorm() - ipow(ws.dot(wt), 2);
        double area = std::sqrt(std::max(0.0, area2));
        if (area <= 1e-14)
            throw geometric_error("izmestiev: adjacent vertices are parallel");
        double entry = -ridge.volume.value / area;
        rep.m(s, t) = entry;
        rep.m(t, s) = entry;
    }

    rep.diagonal.resize(n);
    rep.parallelism_residuals.resize(n);
    for (int s = 0; s < n; ++s) {
        Vector ws = q.vertex(s);
        Vector acc = Vector::Zero(k);
        for (int t = 0; t < n; ++t)
            if (t != s) acc += rep.m(s, t) * q.vertex(t);
        double mss = -acc.dot(ws) / ws.squaredNorm();
        rep.m(s, s) = mss;
        rep.diagonal(s) = mss;
        rep.parallelism_residuals(s) = (acc + mss * ws).norm();
    }
    rep.row_sums = rep.m.rowwise().sum();
    rep.kernel = q.vertices();

    Eigen::SelfAdjointEigenSolver<Matrix> eig(rep.m);
    rep.eigenvalues = eig.eigenvalues();
    rep.spectral_norm = rep.eigenvalues.cwiseAbs().maxCoeff();
    const double zero = rep.zero_threshold();
    int negatives = 0;
    rep.corank = 0;
    for (int i = 0; i < n; ++i) {
        if (rep.eigenvalues(i) < -zero) ++negatives;
        if (std::abs(rep.eigenvalues(i)) <= zero) ++rep.corank;
    }
    rep.corank_ok = (rep.corank == k);
    rep.m2 = (negatives == 1) && (n >= 2) &&
             (rep.eigenvalues(1) - rep.eigenvalues(0) >= zero);
    rep.m1 = true;
    for (const auto& [s, t] : rep.edges)
        if (!(rep.m(s, t) < 0.0)) rep.m1 = false;
    return rep;
}

/// Closed-form off-diagonal entry for a simple polytope: with v0 = w_s, its
/// k neighbours v_1..v_k (v_r = w_t) and eps_j = v_j - v0,
/// M_st = -1/(k-2)! * vol_k(E)^{k-2} / prod_{j != r} |<w_s, q_j>|.
inline double izmestiev_offdiag_simple(const Polytope& q, int s, int t) {
    const int k = q.dim();
    if (!geom::is_simple(q)) throw geometric_error("offdiag_simple: polytope is not simple");

    std::vector<int> neighbors;
    for (const auto& e : q.edges()) {
        if (e.first == s) neighbors.push_back(e.second);
        if (e.second == s) neighbors.push_back(e.first);
    }
    if (static_cast<int>(neighbors.size()) != k)
        throw structural_error("offdiag_simple: unexpected vertex degree");
    int r = -1;
    for (int j = 0; j < k; ++j)
        if (neighbors[j] == t) r = j;
    if (r < 0) throw input_error("offdiag_simple: vertices do not form an edge");

    Vector v0 = q.vertex(s);
    Matrix eps(k, k);
    for (int j = 0; j < k; ++j) eps.col(j) = q.vertex(neighbors[j]) - v0;
    double vol_e = std::abs(linalg::determinant(eps));

    double denom = factorial(k - 2);
    for (int j = 0; j < k; ++j) {
        if (j == r) continue;
        std::vector<Vector> others;
        for (int i = 0; i < k; ++i)
            if (i != j) others.push_back(eps.col(i));
        Vector qj = linalg::generalized_cross(others);  // sign dropped by |.|
        denom *= std::abs(v0.dot(qj));
    }
    return -ipow(vol_e, k - 2) / denom;
}

struct KernelCheck {
    bool pass = false;
    double residual = 0.0;             // max row norm of M * Phi
    double max_principal_angle = 0.0;  // between numeric kernel and span(Phi)
};

/// The vertex-coordinate columns span the kernel of M.
inline KernelCheck kernel_reconstruction_check(const Polytope& q, const CdVReport& rep) {
    KernelCheck c;
    const int n = q.vertex_count();
    const int k = q.dim();
    Matrix residual_rows = rep.m * rep.kernel;  // n x k
    double max_w = 0.0;
    for (int v = 0; v < n; ++v) max_w = std::max(max_w, q.vertex(v).norm());
    c.residual = residual_rows.rowwise().norm().maxCoeff();

    if (!rep.corank_ok) return c;  // corank failure propagates

    Eigen::SelfAdjointEigenSolver<Matrix> eig(rep.m);
    const double zero = rep.zero_threshold();
    std::vector<int> null_cols;
    for (int i = 0; i < n; ++i)
        if (std::abs(eig.eigenvalues()(i)) <= zero) null_cols.push_back(i);
    if (static_cast<int>(null_cols.size()) != k) return c;

    Matrix numeric(n, k);
    for (int i = 0; i < k; ++i) numeric.col(i) = eig.eigenvectors().col(null_cols[i]);
    Matrix phi_q = Eigen::HouseholderQR<Matrix>(rep.kernel)
                       .householderQ() * Matrix::Identity(n, k);
    Matrix overlap = numeric.transpose() * phi_q;
    Eigen::JacobiSVD<Matrix> svd(overlap);
    double sigma_min = svd.singularValues().minCoeff();
    c.max_principal_angle = std::acos(std::clamp(sigma_min, -1.0, 1.0));
    c.pass = c.residual <= 1e-7 * rep.spectral_norm * max_w &&
             c.max_principal_angle < 1e-6;
    return c;
}

/// Strong Arnold property (M3) as a rank statement: X -> MX on symmetric
/// matrices supported off the diagonal and off edges has trivial kernel.
inline TriState strong_arnold_check(const Polytope& q, const CdVReport& rep, int max_n = 40) {
    const int n = q.vertex_count();
    if (n > max_n) return TriState::Skipped;

    std::vector<std::pair<int, int>> support;
    std::set<std::pair<int, int>> edge_set(rep.edges.begin(), rep.edges.end());
    for (int s = 0; s < n; ++s)
        for (int t = s + 1; t < n; ++t)
            if (!edge_set.count({s, t})) support.emplace_back(s, t);
    if (support.empty()) return TriState::True;  // complete graph: vacuous

    Matrix map(n * n, support.size());
    for (std::size_t c = 0; c < support.size(); ++c) {
        auto [s, t] = support[c];
        Matrix image = Matrix::Zero(n, n);
        image.col(t) = rep.m.col(s);
        image.col(s) += rep.m.col(t);
        map.col(c) = Eigen::Map<Vector>(image.data(), n * n);
    }
    Eigen::JacobiSVD<Matrix> svd(map);
    double smax = svd.singularValues().maxCoeff();
    double smin = svd.singularValues().minCoeff();
    return (smin > 1e-8 * smax) ? TriState::True : TriState::False;
}

}  // namespace polyspectra::cdv

#endif

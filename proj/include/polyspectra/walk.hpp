#ifndef POLYSPECTRA_WALK_HPP
#define POLYSPECTRA_WALK_HPP

#include <optional>
#include <utility>
#include <vector>

#include "polyspectra/cdv.hpp"
#include "polyspectra/groups.hpp"

namespace polyspectra::walk {

using cdv::CdVReport;
using groups::CayleyStructure;

/// Doubly stochastic symmetric matrix; laziness is the common diagonal.
struct StochasticMatrix {
    Matrix t;
    double laziness = 0.0;
};

/// Common diagonal gamma and common row sum delta of a vertex-transitive
/// report; gamma > delta always holds since off-diagonals are non-positive
/// and some are negative.
inline std::pair<double, double> gamma_delta(const CdVReport& rep) {
    const int n = static_cast<int>(rep.m.rows());
    double gamma = rep.diagonal.mean(), delta = rep.row_sums.mean();
    const double scale = std::max(1.0, rep.spectral_norm);
    for (int s = 0; s < n; ++s) {
        if (std::abs(rep.diagonal(s) - gamma) > 1e-8 * scale ||
            std::abs(rep.row_sums(s) - delta) > 1e-8 * scale)
            throw geometric_error(
                "gamma_delta: diagonal or row sums not constant (not vertex transitive)");
    }
    if (!(gamma > delta)) throw structural_error("gamma_delta: expected gamma > delta");
    return {gamma, delta};
}

/// T_tau(M) = (tau Id - M) / (tau - delta); tau = gamma (the default) gives
/// the walk without laziness.
inline StochasticMatrix transition_matrix(const CdVReport& rep,
                                          std::optional<double> tau_opt = {}) {
    auto [gamma, delta] = gamma_delta(rep);
    double tau = tau_opt.value_or(gamma);
    if (tau < gamma - 1e-12 * std::max(1.0, std::abs(gamma)))
        throw input_error("transition_matrix: tau must be >= gamma");
    const int n = static_cast<int>(rep.m.rows());
    StochasticMatrix sm;
    sm.t = (tau * Matrix::Identity(n, n) - rep.m) / (tau - delta);
    // the certified common diagonal makes tau = gamma an exactly lazy-free walk
    sm.laziness = (tau - gamma) / (tau - delta);
    for (int s = 0; s < n; ++s) sm.t(s, s) = sm.laziness;

    if (sm.t.minCoeff() < -1e-12)
        throw structural_error("transition_matrix: negative entry");
    for (int s = 0; s < n; ++s)
        if (std::abs(sm.t.row(s).sum() - 1.0) > 1e-10)
            throw structural_error("transition_matrix: row sum drifts from 1");
    return sm;
}

struct SpectralSummary {
    Vector eigenvalues;  // descending
    Matrix eigenvectors; // columns, same order
    std::vector<std::pair<double, int>> clusters;  // (value, multiplicity)
    double lambda1 = 0.0;   // second entry of the descending list
    double gap = 0.0;       // 1 - lambda1
    bool connected = true;  // eigenvalue 1 is simple
};

/// Full symmetric eigendecomposition, eigenvalues descending, greedy
/// clustering at absolute tolerance 1e-8.  Connectivity of the underlying
/// graph is read off the multiplicity of eigenvalue 1.
inline SpectralSummary spectrum(const StochasticMatrix& sm) {
    const int n = static_cast<int>(sm.t.rows());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sm.t);
    SpectralSummary s;
    s.eigenvalues.resize(n);
    s.eigenvectors.resize(n, n);
    for (int i = 0; i < n; ++i) {
        s.eigenvalues(i) = eig.eigenvalues()(n - 1 - i);
        s.eigenvectors.col(i) = eig.eigenvectors().col(n - 1 - i);
    }
    if (s.eigenvalues(0) > 1.0 + 1e-9 || s.eigenvalues(n - 1) < -1.0 - 1e-9 ||
        std::abs(s.eigenvalues(0) - 1.0) > 1e-9)
        throw structural_error("spectrum: eigenvalues escape [-1, 1]");
    s.connected = n < 2 || s.eigenvalues(1) < 1.0 - tol::kSpectralZero;
    double run_value = s.eigenvalues(0);
    int run_count = 1;
    for (int i = 1; i < n; ++i) {
        double rep_value = run_value / run_count;
        if (std::abs(s.eigenvalues(i) - rep_value) <= 1e-8) {
            run_value += s.eigenvalues(i);
            ++run_count;
        } else {
            s.clusters.emplace_back(rep_value, run_count);
            run_value = s.eigenvalues(i);
            run_count = 1;
        }
    }
    s.clusters.emplace_back(run_value / run_count, run_count);
    s.lambda1 = (n > 1) ? s.eigenvalues(1) : s.eigenvalues(0);
    s.gap = 1.0 - s.lambda1;
    return s;
}

struct Lambda1Check {
    bool pass = false;
    double lambda1_formula = 0.0;  // gamma / (gamma - delta)
    double residual = 0.0;
    int eigenspace_dim = 0;
    double max_principal_angle = 0.0;
};

/// lambda_1 = gamma/(gamma-delta), with eigenspace of dimension k spanned by
/// the vertex-coordinate columns.
inline Lambda1Check lambda1_consistency(const CdVReport& rep, const SpectralSummary& s) {
    auto [gamma, delta] = gamma_delta(rep);
    Lambda1Check c;
    c.lambda1_formula = gamma / (gamma - delta);
    c.residual = std::abs(s.lambda1 - c.lambda1_formula);

    const int n = static_cast<int>(rep.m.rows());
    const int k = rep.dim;
    std::vector<int> cols;
    for (int i = 0; i < n; ++i)
        if (std::abs(s.eigenvalues(i) - s.lambda1) <= 1e-8) cols.push_back(i);
    c.eigenspace_dim = static_cast<int>(cols.size());
    if (c.eigenspace_dim != k) return c;

    Matrix eigvecs(n, k);
    for (int i = 0; i < k; ++i) eigvecs.col(i) = s.eigenvectors.col(cols[i]);
    Matrix phi_q =
        Eigen::HouseholderQR<Matrix>(rep.kernel).householderQ() * Matrix::Identity(n, k);
    Eigen::JacobiSVD<Matrix> svd(eigvecs.transpose() * phi_q);
    double sigma_min = svd.singularValues().minCoeff();
    c.max_principal_angle = std::acos(std::clamp(sigma_min, -1.0, 1.0));
    c.pass = c.residual <= 1e-8 && c.max_principal_angle < 1e-6;
    return c;
}

/// Point of the weight simplex Delta_Gamma: order-2 generators carry x_1..x_nu,
/// each inverse pair shares one weight.
struct WeightSimplexPoint {
    int nu = 0;
    int mu = 0;
    std::vector<double> x;

    double constraint_sum() const {
        double s = 0.0;
        for (int j = 0; j < nu; ++j) s += x[j];
        for (int j = nu; j < nu + mu; ++j) s += 2.0 * x[j];
        return s;
    }
};

/// Reads the base-vertex row of T = T_gamma and groups the entries by
/// generator; inverse pairs must carry equal weights.
inline WeightSimplexPoint extract_weights(const StochasticMatrix& sm,
                                          const CayleyStructure& cs, int base_vertex) {
    WeightSimplexPoint w;
    w.nu = cs.nu;
    w.mu = cs.mu;
    for (int j = 0; j < cs.nu; ++j)
        w.x.push_back(sm.t(base_vertex, cs.neighbor_vertex[j]));
    for (int p = 0; p < cs.mu; ++p) {
        double a = sm.t(base_vertex, cs.neighbor_vertex[cs.nu + 2 * p]);
        double b = sm.t(base_vertex, cs.neighbor_vertex[cs.nu + 2 * p + 1]);
        if (std::abs(a - b) > 1e-9)
            throw structural_error("extract_weights: inverse pair weights differ");
        w.x.push_back(a);
    }
    if (std::abs(w.constraint_sum() - 1.0) > 1e-10)
        throw structural_error("extract_weights: weights violate the simplex constraint");
    return w;
}

}  // namespace polyspectra::walk

#endif

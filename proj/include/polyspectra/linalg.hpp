#ifndef POLYSPECTRA_LINALG_HPP
#define POLYSPECTRA_LINALG_HPP

#include <algorithm>
#include <utility>
#include <vector>

#include "polyspectra/common.hpp"

namespace polyspectra::linalg {

/// Strictly increasing subset of [r], 1-based to match the usual index-set
/// notation.  May be empty.
class IndexSet {
  public:
    IndexSet(int ambient, std::vector<int> members)
        : ambient_(ambient), members_(std::move(members)) {
        if (ambient_ < 0) throw input_error("IndexSet: negative ambient size");
        for (std::size_t i = 0; i < members_.size(); ++i) {
            if (members_[i] < 1 || members_[i] > ambient_)
                throw input_error("IndexSet: index out of range");
            if (i > 0 && members_[i] <= members_[i - 1])
                throw input_error("IndexSet: members must be strictly increasing");
        }
    }

    static IndexSet full(int r) {
        std::vector<int> m(r);
        for (int i = 0; i < r; ++i) m[i] = i + 1;
        return IndexSet(r, std::move(m));
    }

    int ambient() const { return ambient_; }
    int size() const { return static_cast<int>(members_.size()); }
    const std::vector<int>& members() const { return members_; }
    int operator[](int i) const { return members_[i]; }

    IndexSet complement() const {
        std::vector<int> c;
        c.reserve(ambient_ - size());
        std::size_t p = 0;
        for (int v = 1; v <= ambient_; ++v) {
            if (p < members_.size() && members_[p] == v)
                ++p;
            else
                c.push_back(v);
        }
        return IndexSet(ambient_, std::move(c));
    }

  private:
    int ambient_;
    std::vector<int> members_;
};

struct VolumeResult {
    int dimension = 0;
    double value = 0.0;
};

namespace detail {

inline double det_cofactor(const Matrix& a) {
    const int r = static_cast<int>(a.rows());
    if (r == 0) return 1.0;
    if (r == 1) return a(0, 0);
    if (r == 2) return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    if (r == 3)
        return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
               a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
               a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
    double det = 0.0;
    Matrix minor(r - 1, r - 1);
    for (int j = 0; j < r; ++j) {
        for (int i = 1; i < r; ++i) {
            int cc = 0;
            for (int c = 0; c < r; ++c) {
                if (c == j) continue;
                minor(i - 1, cc++) = a(i, c);
            }
        }
        double term = a(0, j) * det_cofactor(minor);
        det += (j % 2 == 0) ? term : -term;
    }
    return det;
}

inline Matrix delete_row_col(const Matrix& a, int row, int col) {
    const int r = static_cast<int>(a.rows());
    Matrix m(r - 1, r - 1);
    int ri = 0;
    for (int i = 0; i < r; ++i) {
        if (i == row) continue;
        int ci = 0;
        for (int j = 0; j < r; ++j) {
            if (j == col) continue;
            m(ri, ci++) = a(i, j);
        }
        ++ri;
    }
    return m;
}

}  // namespace detail

/// det with exact cofactor expansion for r <= 4, LU above.
inline double determinant(const Matrix& a) {
    if (a.rows() != a.cols()) throw input_error("determinant: matrix not square");
    const int r = static_cast<int>(a.rows());
    if (r <= 4) return detail::det_cofactor(a);
    return Eigen::PartialPivLU<Matrix>(a).determinant();
}

/// Transpose of the cofactor matrix: (adj A)_{s,t} = (-1)^{s+t} det(A^{t,s}).
/// Satisfies A * adj A = det(A) * Id for every square A; adj of a 1x1 matrix
/// is Id_1.
inline Matrix adjugate(const Matrix& a) {
    if (a.rows() != a.cols()) throw input_error("adjugate: matrix not square");
    const int r = static_cast<int>(a.rows());
    if (r == 0) return Matrix(0, 0);
    if (r == 1) return Matrix::Identity(1, 1);
    Matrix adj(r, r);
    for (int s = 0; s < r; ++s)
        for (int t = 0; t < r; ++t) {
            double minor = determinant(detail::delete_row_col(a, t, s));
            adj(s, t) = ((s + t) % 2 == 0) ? minor : -minor;
        }
    return adj;
}

/// [A]_I: keep the rows and columns indexed by I.
inline Matrix restriction(const Matrix& a, const IndexSet& I) {
    if (a.rows() != a.cols()) throw input_error("restriction: matrix not square");
    if (I.ambient() != a.rows()) throw input_error("restriction: ambient size mismatch");
    const int s = I.size();
    Matrix b(s, s);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) b(i, j) = a(I[i] - 1, I[j] - 1);
    return b;
}

/// Ext^[r]_I(B): place B at positions I x I, zero elsewhere.
inline Matrix extension(const Matrix& b, int r, const IndexSet& I) {
    if (b.rows() != b.cols()) throw input_error("extension: matrix not square");
    if (I.ambient() != r) throw input_error("extension: ambient size mismatch");
    if (I.size() != b.rows()) throw input_error("extension: |I| != size of B");
    Matrix m = Matrix::Zero(r, r);
    for (int i = 0; i < I.size(); ++i)
        for (int j = 0; j < I.size(); ++j) m(I[i] - 1, I[j] - 1) = b(i, j);
    return m;
}

/// Multilinear vector product of k-1 vectors in R^k: the unique u with
/// <u, x> = det(x, v_1, ..., v_{k-1}) for all x.  Orthogonal to every input.
inline Vector generalized_cross(const std::vector<Vector>& vectors) {
    if (vectors.empty()) throw input_error("generalized_cross: no input vectors");
    const int k = static_cast<int>(vectors[0].size());
    if (k < 2) throw input_error("generalized_cross: dimension must be >= 2");
    if (static_cast<int>(vectors.size()) != k - 1)
        throw input_error("generalized_cross: need exactly k-1 vectors of dimension k");
    for (const auto& v : vectors)
        if (v.size() != k) throw input_error("generalized_cross: dimension mismatch");

    Matrix cols(k, k - 1);
    for (int j = 0; j < k - 1; ++j) cols.col(j) = vectors[j];
    Vector u(k);
    Matrix minor(k - 1, k - 1);
    for (int i = 0; i < k; ++i) {
        int ri = 0;
        for (int row = 0; row < k; ++row) {
            if (row == i) continue;
            minor.row(ri++) = cols.row(row);
        }
        double d = determinant(minor);
        u(i) = (i % 2 == 0) ? d : -d;
    }
    return u;
}

/// d-dimensional volume of conv(p_0, ..., p_d) via Gram's determinant
/// formula, sqrt(det G)/d!.  A single point has vol_0 = 1.
inline VolumeResult simplex_volume(const std::vector<Vector>& points) {
    if (points.empty()) throw input_error("simplex_volume: no points");
    const int d = static_cast<int>(points.size()) - 1;
    if (d == 0) return {0, 1.0};
    const int k = static_cast<int>(points[0].size());
    if (d > k) throw input_error("simplex_volume: more points than dimension allows");
    Matrix diff(k, d);
    for (int i = 0; i < d; ++i) diff.col(i) = points[i + 1] - points[0];
    Matrix gram = diff.transpose() * diff;
    double g = determinant(gram);
    if (g < 0) g = 0;  // roundoff on degenerate input
    return {d, std::sqrt(g) / factorial(d)};
}

/// |det(v_1, ..., v_k)|.
inline VolumeResult parallelepiped_volume(const std::vector<Vector>& vectors) {
    if (vectors.empty()) throw input_error("parallelepiped_volume: no vectors");
    const int k = static_cast<int>(vectors[0].size());
    if (static_cast<int>(vectors.size()) != k)
        throw input_error("parallelepiped_volume: need k vectors of dimension k");
    Matrix m(k, k);
    for (int j = 0; j < k; ++j) {
        if (vectors[j].size() != k)
            throw input_error("parallelepiped_volume: dimension mismatch");
        m.col(j) = vectors[j];
    }
    return {k, std::abs(determinant(m))};
}

struct LemmaCheck {
    bool pass = false;
    double max_deviation = 0.0;
    double scale = 1.0;  // deviations are judged against tol * scale
    double lhs = 0.0;    // filled by the determinant lemma
    double rhs = 0.0;
};

/// adj(D_lambda A D_mu)_{s,t} = prod_i lambda_i prod_j mu_j / (lambda_t mu_s)
/// * (adj A)_{s,t}.  The quotient is evaluated as the product over i != t and
/// j != s, so zero entries of lambda or mu need no special handling.
inline LemmaCheck verify_scaling_lemma(const Matrix& a, const Vector& lambda,
                                       const Vector& mu, double tolerance = tol::kLemma) {
    const int r = static_cast<int>(a.rows());
    if (a.cols() != r) throw input_error("verify_scaling_lemma: matrix not square");
    if (lambda.size() != r || mu.size() != r)
        throw input_error("verify_scaling_lemma: vector length mismatch");

    Matrix scaled = lambda.asDiagonal() * a * mu.asDiagonal();
    Matrix lhs = adjugate(scaled);
    Matrix adj_a = adjugate(a);
    Matrix rhs(r, r);
    for (int s = 0; s < r; ++s)
        for (int t = 0; t < r; ++t) {
            double factor = 1.0;
            for (int i = 0; i < r; ++i)
                if (i != t) factor *= lambda(i);
            for (int j = 0; j < r; ++j)
                if (j != s) factor *= mu(j);
            rhs(s, t) = factor * adj_a(s, t);
        }

    LemmaCheck c;
    c.scale = std::max(1.0, std::max(lhs.cwiseAbs().maxCoeff(), rhs.cwiseAbs().maxCoeff()));
    c.max_deviation = (lhs - rhs).cwiseAbs().maxCoeff();
    c.pass = c.max_deviation <= tolerance * c.scale;
    return c;
}

/// T = (1 | -Id_{r-1}) as an (r-1) x r matrix.
inline Matrix difference_matrix(int r) {
    Matrix t = Matrix::Zero(r - 1, r);
    for (int i = 0; i < r - 1; ++i) {
        t(i, 0) = 1.0;
        t(i, i + 1) = -1.0;
    }
    return t;
}

/// det(T A T^t) = 1^t adj(A) 1, plus the invertible-case corollary
/// det(T A T^t) = det(A) 1^t A^{-1} 1 when det A != 0.
inline LemmaCheck verify_determinant_lemma(const Matrix& a, double tolerance = tol::kLemma) {
    const int r = static_cast<int>(a.rows());
    if (a.cols() != r || r < 2) throw input_error("verify_determinant_lemma: need square r >= 2");
    Matrix t = difference_matrix(r);
    double lhs = determinant(t * a * t.transpose());
    Vector ones = Vector::Ones(r);
    double rhs = ones.dot(adjugate(a) * ones);

    LemmaCheck c;
    c.lhs = lhs;
    c.rhs = rhs;
    c.scale = std::max(1.0, std::max(std::abs(lhs), std::abs(rhs)));
    c.max_deviation = std::abs(lhs - rhs);

    double det_a = determinant(a);
    if (std::abs(det_a) > 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff())) {
        double cor = det_a * ones.dot(a.inverse() * ones);
        c.max_deviation = std::max(c.max_deviation, std::abs(lhs - cor));
        c.scale = std::max(c.scale, std::abs(cor));
    }
    c.pass = c.max_deviation <= tolerance * c.scale;
    return c;
}

/// (det M)^{r-a} (det [M]_I) Id = (det M)^{r-a} Ext_I(adj [M]_I) M
///                               + (det M) N Ext_J(adj [N]_J),
/// with N = adj M, J = [r] \ I, a = |I|.  Holds for singular M and singular
/// restrictions; the degenerate cases a = 0 and a = r reduce to
/// N * adj N = det(N) Id and adj(M) * M = det(M) Id.
inline LemmaCheck verify_extension_lemma(const Matrix& m, const IndexSet& I,
                                         double tolerance = tol::kLemma) {
    const int r = static_cast<int>(m.rows());
    if (m.cols() != r) throw input_error("verify_extension_lemma: matrix not square");
    if (I.ambient() != r) throw input_error("verify_extension_lemma: ambient mismatch");
    const int a = I.size();
    const IndexSet J = I.complement();

    const Matrix n = adjugate(m);
    const double det_m = determinant(m);
    const double det_mi = determinant(restriction(m, I));
    const double pw = ipow(det_m, r - a);

    Matrix lhs = pw * det_mi * Matrix::Identity(r, r);
    Matrix rhs = pw * extension(adjugate(restriction(m, I)), r, I) * m +
                 det_m * n * extension(adjugate(restriction(n, J)), r, J);

    LemmaCheck c;
    c.scale = std::max(1.0, std::max(lhs.cwiseAbs().maxCoeff(), rhs.cwiseAbs().maxCoeff()));
    c.max_deviation = (lhs - rhs).cwiseAbs().maxCoeff();
    c.pass = c.max_deviation <= tolerance * c.scale;
    return c;
}

}  // namespace polyspectra::linalg

#endif

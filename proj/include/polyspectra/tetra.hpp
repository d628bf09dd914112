#ifndef POLYSPECTRA_TETRA_HPP
#define POLYSPECTRA_TETRA_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "polyspectra/walk.hpp"

namespace polyspectra::tetra {

using groups::FiniteOrthogonalGroup;
using groups::OrbitPolytope;
using walk::StochasticMatrix;

inline constexpr double kGoldenRatio = 1.6180339887498948482;

/// Point of the moduli space M = { (a,b,c) : a >= b >= |c| >= 0, a > 0 }.
struct ModuliPoint {
    double a = 1.0, b = 0.0, c = 0.0;

    ModuliPoint(double a_, double b_, double c_) : a(a_), b(b_), c(c_) {
        const double eps = 1e-12 * std::max(1.0, std::abs(a));
        if (!(a > 0) || b < -eps || a < b - eps || b < std::abs(c) - eps)
            throw input_error("moduli point: need a >= b >= |c| >= 0 with a > 0");
    }

    Vector seed() const {
        Vector w(3);
        w << a, b, c;
        return w;
    }
};

enum class Stratum { Icosa, TruncTetraPlus, TruncTetraMinus, Cubocta, Tetra, Octa };

inline std::string stratum_name(Stratum s) {
    switch (s) {
        case Stratum::Icosa: return "Icosa";
        case Stratum::TruncTetraPlus: return "TruncTetraPlus";
        case Stratum::TruncTetraMinus: return "TruncTetraMinus";
        case Stratum::Cubocta: return "Cubocta";
        case Stratum::Tetra: return "Tetra";
        case Stratum::Octa: return "Octa";
    }
    return "?";
}

/// Non-regular points are the tetrahedra a = b = |c| > 0 and the octahedron
/// a > b = c = 0; everywhere else the group acts simply transitively.
inline bool is_regular(const ModuliPoint& p) {
    const double eps = 1e-12 * std::max(1.0, p.a);
    bool tetra = std::abs(p.a - p.b) <= eps && std::abs(p.b - std::abs(p.c)) <= eps &&
                 p.b > eps;
    bool octa = std::abs(p.b) <= eps && std::abs(p.c) <= eps;
    return !tetra && !octa;
}

/// Stratum from the defining (in)equalities at tolerance 1e-12.
inline Stratum classify(const ModuliPoint& p) {
    const double eps = 1e-12 * std::max(1.0, p.a);
    const bool ab = std::abs(p.a - p.b) <= eps;
    const bool b0 = std::abs(p.b) <= eps;
    const bool c0 = std::abs(p.c) <= eps;
    const bool bc = std::abs(p.b - p.c) <= eps;
    const bool bmc = std::abs(p.b + p.c) <= eps;

    if (ab && (bc || bmc) && !b0) return Stratum::Tetra;
    if (b0 && c0) return Stratum::Octa;
    if (ab) return Stratum::Cubocta;
    if (bc && !c0) return Stratum::TruncTetraPlus;
    if (bmc && !c0) return Stratum::TruncTetraMinus;
    return Stratum::Icosa;
}

struct Weights {
    double x1 = 0.0, x2 = 0.0, x3 = 0.0;
    double d = 0.0;  // the positive denominator polynomial
};

/// Closed-form weights; defined on all of the moduli space (used as the
/// continuous extension at non-regular points).
inline Weights weights_limit(const ModuliPoint& p) {
    const double a = p.a, b = p.b, c = p.c;
    Weights w;
    w.d = a * a * a + 5 * a * a * b + 3 * a * b * b - 5 * a * c * c - b * b * b + b * c * c;
    if (!(w.d > 0)) throw structural_error("weights: denominator D is not positive");
    w.x1 = (a - b) * (a + b + c) * (a + b - c) / w.d;
    w.x2 = a * (a + b - c) * (b + c) / w.d;
    w.x3 = a * (a + b + c) * (b - c) / w.d;
    if (std::abs(w.x1 + 2.0 * (w.x2 + w.x3) - 1.0) > 1e-12)
        throw structural_error("weights: simplex constraint violated");
    return w;
}

inline Weights weights(const ModuliPoint& p) {
    if (!is_regular(p)) throw input_error("weights: point is not regular");
    return weights_limit(p);
}

/// Group elements carrying the seed to slots 1..12 of the fixed reference
/// vertex enumeration (the one the hard-coded walk pattern below is written
/// in): slots 1-5 are the neighbours gamma_1 w, gamma_2 w, gamma_2^-1 w,
/// gamma_3 w, gamma_3^-1 w, slot 6 is the seed itself.
inline const std::array<int, 12>& reference_vertex_elements() {
    static const std::array<int, 12> order = {1, 4, 8, 5, 10, 0, 2, 6, 9, 3, 7, 11};
    return order;
}

/// Permutation pipeline-vertex -> reference slot (0-based).
inline std::array<int, 12> reference_slot_of_vertex(const OrbitPolytope& op) {
    if (op.polytope.vertex_count() != 12)
        throw geometric_error("reference enumeration needs a simply transitive orbit");
    const auto& order = reference_vertex_elements();
    std::array<int, 12> slot{};
    for (int v = 0; v < 12; ++v) {
        int element = op.vertex_element[v];
        int found = -1;
        for (int s = 0; s < 12; ++s)
            if (order[s] == element) found = s;
        if (found < 0) throw structural_error("reference enumeration: unknown element");
        slot[v] = found;
    }
    return slot;
}

/// The 12 x 12 random-walk matrix in the reference enumeration; entry codes
/// 0, 1, 2, 3 select 0, x1, x2, x3.
inline StochasticMatrix transition_matrix_pattern(const Weights& w) {
    static const int pattern[12][12] = {
        {0, 3, 0, 2, 0, 1, 0, 0, 2, 0, 0, 3},
        {3, 0, 2, 0, 0, 2, 0, 0, 0, 0, 1, 3},
        {0, 2, 0, 0, 1, 2, 3, 0, 0, 0, 3, 0},
        {2, 0, 0, 0, 3, 3, 0, 1, 2, 0, 0, 0},
        {0, 0, 1, 3, 0, 3, 2, 2, 0, 0, 0, 0},
        {1, 2, 2, 3, 3, 0, 0, 0, 0, 0, 0, 0},
        {0, 0, 3, 0, 2, 0, 0, 2, 0, 1, 3, 0},
        {0, 0, 0, 1, 2, 0, 2, 0, 3, 3, 0, 0},
        {2, 0, 0, 2, 0, 0, 0, 3, 0, 3, 0, 1},
        {0, 0, 0, 0, 0, 0, 1, 3, 3, 0, 2, 2},
        {0, 1, 3, 0, 0, 0, 3, 0, 0, 2, 0, 2},
        {3, 3, 0, 0, 0, 0, 0, 0, 1, 2, 2, 0}};
    const double lookup[4] = {0.0, w.x1, w.x2, w.x3};
    StochasticMatrix sm;
    sm.t.resize(12, 12);
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j) sm.t(i, j) = lookup[pattern[i][j]];
    for (int i = 0; i < 12; ++i) {
        if (std::abs(sm.t.row(i).sum() - 1.0) > 1e-10)
            throw structural_error("transition pattern: row sum drifts from 1");
    }
    if ((sm.t - sm.t.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw structural_error("transition pattern: matrix not symmetric");
    return sm;
}

struct EigenStructure {
    double lambda1 = 0.0, lambda2 = 0.0, lambda3 = 0.0, lambda4 = 0.0;
    std::vector<std::pair<double, int>> clusters;
    double cubic_residual = 0.0;  // max |p(lambda_i)| over the three cubic roots
};

namespace detail {

inline std::array<double, 3> cubic_coefficients(const Weights& w) {
    const double x1 = w.x1, x2 = w.x2, x3 = w.x3;
    double c2 = x1;
    double c1 = -x1 * x1 - 3 * x2 * x2 + 2 * x2 * x3 - 3 * x3 * x3;
    double c0 = -x1 * x1 * x1 - x1 * x2 * x2 - 2 * x1 * x2 * x3 - x1 * x3 * x3 -
                2 * x2 * x2 * x2 + 2 * x2 * x2 * x3 + 2 * x2 * x3 * x3 - 2 * x3 * x3 * x3;
    return {c2, c1, c0};
}

inline double cubic_eval(const std::array<double, 3>& c, double x) {
    return ((x + c[0]) * x + c[1]) * x + c[2];
}

inline std::array<double, 3> cubic_roots(const std::array<double, 3>& c) {
    Matrix companion = Matrix::Zero(3, 3);
    companion(0, 2) = -c[2];
    companion(1, 0) = 1.0;
    companion(1, 2) = -c[1];
    companion(2, 1) = 1.0;
    companion(2, 2) = -c[0];
    Eigen::EigenSolver<Matrix> eig(companion);
    std::array<double, 3> roots{};
    for (int i = 0; i < 3; ++i) roots[i] = eig.eigenvalues()(i).real();
    std::sort(roots.begin(), roots.end(), std::greater<>());
    return roots;
}

}  // namespace detail

/// Spectrum of the 12 x 12 walk at a regular point: eigenvalue 1, the three
/// cubic-factor roots each with multiplicity 3, and x1 - x2 - x3 twice.
inline EigenStructure eigen_structure(const ModuliPoint& p) {
    Weights w = weights(p);
    auto sm = transition_matrix_pattern(w);
    auto s = walk::spectrum(sm);

    auto coeffs = detail::cubic_coefficients(w);
    auto roots = detail::cubic_roots(coeffs);
    double lambda4 = w.x1 - w.x2 - w.x3;

    std::vector<double> expected{1.0};
    for (double r : roots) expected.insert(expected.end(), 3, r);
    expected.insert(expected.end(), 2, lambda4);
    std::sort(expected.begin(), expected.end(), std::greater<>());
    for (int i = 0; i < 12; ++i)
        if (std::abs(expected[i] - s.eigenvalues(i)) > 1e-8)
            throw structural_error(
                "eigen_structure: spectrum does not match the (1,3,3,3,2) pattern");

    EigenStructure e;
    e.lambda1 = roots[0];
    e.lambda2 = roots[1];
    e.lambda3 = roots[2];
    e.lambda4 = lambda4;
    e.clusters = s.clusters;
    for (double r : roots)
        e.cubic_residual = std::max(e.cubic_residual, std::abs(detail::cubic_eval(coeffs, r)));
    if (e.cubic_residual > 1e-8)
        throw structural_error("eigen_structure: cubic factor residual too large");
    return e;
}

/// Independent weight route through the full pipeline; entries are matched to
/// (x1, x2, x3) by generator identity, absent edge classes contribute 0.
inline Weights weights_oracle(const ModuliPoint& p) {
    if (!is_regular(p)) throw input_error("weights_oracle: point is not regular");
    auto grp = FiniteOrthogonalGroup::tetrahedral_rotation();
    auto op = groups::orbit_polytope(grp, p.seed());
    auto rep = cdv::izmestiev_matrix_geometric(op.polytope);
    auto t = walk::transition_matrix(rep);
    auto cs = groups::cayley_structure(op);
    auto x = walk::extract_weights(t, cs, op.base_vertex);

    const int g1 = grp.generator_indices()[0];
    const int g2 = grp.generator_indices()[1];
    const int g3 = grp.generator_indices()[2];
    Weights w;
    w.d = weights_limit(p).d;
    for (int j = 0; j < cs.nu; ++j) {
        if (cs.generators[j] == g1) w.x1 = x.x[j];
    }
    for (int pair = 0; pair < cs.mu; ++pair) {
        int head = cs.generators[cs.nu + 2 * pair];
        int tail = cs.generators[cs.nu + 2 * pair + 1];
        double value = x.x[cs.nu + pair];
        if (head == g2 || tail == g2 || head == grp.inverse(g2)) w.x2 = value;
        if (head == g3 || tail == g3 || head == grp.inverse(g3)) w.x3 = value;
    }
    return w;
}

/// One scanned moduli point.  Regular points carry the pattern eigenvalues;
/// non-regular points additionally carry the small-matrix spectrum values and
/// the continuous extension of lambda_1.
struct ModuliRecord {
    double a = 0, b = 0, c = 0;
    Stratum stratum = Stratum::Icosa;
    bool regular = true;
    Weights w;
    double lambda1 = 0, lambda2 = 0, lambda3 = 0, lambda4 = 0;
    bool equilateral = false;
    double edge_spread = 0.0;
    int vertex_count = 0, edge_count = 0, facet_count = 0;
    // non-regular extras
    double lambda1_small_second = 0.0;  // second largest of the small walk
    double lambda1_small_min = 0.0;     // smallest of the small walk
    double lambda1_extension = 0.0;     // limit of lambda1 within the regular set
};

namespace detail {

struct StratumCounts {
    int v, e, f;
};

inline StratumCounts expected_counts(Stratum s) {
    switch (s) {
        case Stratum::Icosa: return {12, 30, 20};
        case Stratum::Cubocta: return {12, 24, 14};
        case Stratum::TruncTetraPlus:
        case Stratum::TruncTetraMinus: return {12, 18, 8};
        case Stratum::Tetra: return {4, 6, 4};
        case Stratum::Octa: return {6, 12, 8};
    }
    return {0, 0, 0};
}

}  // namespace detail

inline ModuliRecord record_for_point(const ModuliPoint& p) {
    ModuliRecord rec;
    rec.a = p.a;
    rec.b = p.b;
    rec.c = p.c;
    rec.stratum = classify(p);
    rec.regular = is_regular(p);

    auto grp = FiniteOrthogonalGroup::tetrahedral_rotation();
    auto op = groups::orbit_polytope(grp, p.seed());
    rec.vertex_count = op.polytope.vertex_count();
    rec.edge_count = static_cast<int>(op.polytope.edges().size());
    rec.facet_count = static_cast<int>(op.polytope.facets().size());
    auto eq = geom::is_equilateral(op.polytope);
    rec.equilateral = eq.equilateral;
    rec.edge_spread = eq.spread;

    auto counts = detail::expected_counts(rec.stratum);
    if (rec.vertex_count != counts.v || rec.edge_count != counts.e ||
        rec.facet_count != counts.f)
        throw structural_error("moduli record: combinatorial counts disagree with stratum " +
                               stratum_name(rec.stratum));

    rec.w = weights_limit(p);
    if (rec.regular) {
        auto e = eigen_structure(p);
        rec.lambda1 = e.lambda1;
        rec.lambda2 = e.lambda2;
        rec.lambda3 = e.lambda3;
        rec.lambda4 = e.lambda4;
    } else {
        auto small_rep = cdv::izmestiev_matrix_geometric(op.polytope);
        auto s = walk::spectrum(walk::transition_matrix(small_rep));
        rec.lambda1_small_second = s.lambda1;
        rec.lambda1_small_min = s.eigenvalues(s.eigenvalues.size() - 1);
        auto limit = walk::spectrum(transition_matrix_pattern(rec.w));
        rec.lambda1_extension = limit.lambda1;
        // the small-matrix value reported for these points (Table 1 convention)
        rec.lambda1 = rec.lambda1_small_min;
        rec.lambda2 = rec.lambda3 = rec.lambda4 = std::numeric_limits<double>::quiet_NaN();
    }
    return rec;
}

/// Row-major grid over { (1, b, c) : 1 >= b >= |c| >= 0 } at spacing
/// 1/density, skipping the non-regular points.
inline std::vector<ModuliRecord> scan_moduli(int density, int threads = 1) {
    if (density < 2) throw input_error("scan_moduli: density must be >= 2");
    std::vector<std::pair<int, int>> grid;
    for (int i = 0; i <= density; ++i) {
        for (int j = -i; j <= i; ++j) {
            if (i == 0 && j == 0) continue;                       // octahedron corner
            if (i == density && std::abs(j) == density) continue; // tetrahedra corners
            grid.emplace_back(i, j);
        }
    }
    std::vector<ModuliRecord> records(grid.size());
    parallel_for(static_cast<std::int64_t>(grid.size()), threads, [&](std::int64_t idx) {
        auto [i, j] = grid[idx];
        ModuliPoint p(1.0, static_cast<double>(i) / density, static_cast<double>(j) / density);
        records[idx] = record_for_point(p);
    });
    return records;
}

struct TableRow {
    std::string polytope;
    double a, b, c;
    double x1, x2, x3;
    double lambda1;
};

/// The seven landmark moduli points: the moduli-space corners and the
/// equilateral representative of each stratum.
inline std::vector<TableRow> table1() {
    struct Spec {
        const char* name;
        double a, b, c;
    };
    const std::vector<Spec> specs = {
        {"Tetrahedron", 1, 1, -1},           {"Cuboctahedron", 1, 1, 0},
        {"Tetrahedron", 1, 1, 1},            {"Icosahedron", kGoldenRatio, 1, 0},
        {"Truncated Tetrahedron", 3, 1, -1}, {"Truncated Tetrahedron", 3, 1, 1},
        {"Octahedron", 1, 0, 0}};
    std::vector<TableRow> rows;
    for (const auto& s : specs) {
        ModuliPoint p(s.a, s.b, s.c);
        ModuliRecord rec = record_for_point(p);
        rows.push_back({s.name, s.a, s.b, s.c, rec.w.x1, rec.w.x2, rec.w.x3, rec.lambda1});
    }
    return rows;
}

}  // namespace polyspectra::tetra

#endif

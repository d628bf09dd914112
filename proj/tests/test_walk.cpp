#include <catch2/catch_amalgamated.hpp>

#include "polyspectra/walk.hpp"

using namespace polyspectra;
using namespace polyspectra::walk;
using Catch::Approx;

namespace {

groups::OrbitPolytope tetra_orbit(double a, double b, double c) {
    auto grp = groups::FiniteOrthogonalGroup::tetrahedral_rotation();
    Vector w(3);
    w << a, b, c;
    return groups::orbit_polytope(grp, w);
}

Matrix cube_vertices(double half = 2.0) {
    Matrix v(8, 3);
    int r = 0;
    for (int sx : {-1, 1})
        for (int sy : {-1, 1})
            for (int sz : {-1, 1}) v.row(r++) << sx * half, sy * half, sz * half;
    return v;
}

const double kGolden = (1.0 + std::sqrt(5.0)) / 2.0;

}  // namespace

TEST_CASE("tetrahedron walk matrix", "[walk]") {
    auto op = tetra_orbit(1, 1, 1);
    auto rep = cdv::izmestiev_matrix_geometric(op.polytope);
    auto [gamma, delta] = gamma_delta(rep);
    CHECK(gamma == Approx(-1.0).epsilon(1e-10));
    CHECK(delta == Approx(-4.0).epsilon(1e-10));

    auto t = transition_matrix(rep);
    CHECK(t.laziness == Approx(0.0).margin(1e-12));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(t.t(i, j) == Approx(i == j ? 0.0 : 1.0 / 3.0).margin(1e-10));

    auto s = spectrum(t);
    CHECK(s.lambda1 == Approx(-1.0 / 3.0).epsilon(1e-10));
    CHECK(s.clusters.size() == 2);
    CHECK(s.clusters[0].second == 1);
    CHECK(s.clusters[1].second == 3);
}

TEST_CASE("octahedron walk matrix and its antipodal zero pattern", "[walk]") {
    auto op = tetra_orbit(1, 0, 0);
    auto rep = cdv::izmestiev_matrix_geometric(op.polytope);
    auto [gamma, delta] = gamma_delta(rep);
    CHECK(gamma == Approx(0.0).margin(1e-12));
    CHECK(delta == Approx(-8.0).epsilon(1e-10));

    auto t = transition_matrix(rep);
    int zero_offdiag = 0;
    for (int i = 0; i < 6; ++i) {
        CHECK(t.t(i, i) == Approx(0.0).margin(1e-12));
        for (int j = 0; j < 6; ++j) {
            if (i == j) continue;
            double v = t.t(i, j);
            if (std::abs(v) < 1e-12) {
                ++zero_offdiag;
                // zero exactly at the antipodal pair
                CHECK((op.polytope.vertex(i) + op.polytope.vertex(j)).norm() <= 1e-12);
            } else {
                CHECK(v == Approx(0.25).epsilon(1e-10));
            }
        }
    }
    CHECK(zero_offdiag == 6);  // three antipodal pairs, both directions

    auto s = spectrum(t);
    CHECK(s.lambda1 == Approx(0.0).margin(1e-10));
    CHECK(s.eigenvalues(5) == Approx(-0.5).epsilon(1e-10));
    auto consistency = lambda1_consistency(rep, s);
    CHECK(consistency.pass);
    CHECK(consistency.eigenspace_dim == 3);
}

TEST_CASE("laziness for tau above gamma", "[walk]") {
    auto op = tetra_orbit(3, 2, 1);
    auto rep = cdv::izmestiev_matrix_geometric(op.polytope);
    auto [gamma, delta] = gamma_delta(rep);

    auto t = transition_matrix(rep, gamma + 1.0);
    CHECK(t.laziness == Approx(1.0 / (gamma + 1.0 - delta)).epsilon(1e-12));
    for (int i = 0; i < t.t.rows(); ++i) {
        CHECK(t.t(i, i) > 0.0);
        CHECK(t.t.row(i).sum() == Approx(1.0).margin(1e-10));
    }
    CHECK_THROWS_AS(transition_matrix(rep, gamma - 0.5), input_error);
}

TEST_CASE("icosahedral point spectrum clusters", "[walk]") {
    auto op = tetra_orbit(kGolden, 1, 0);
    auto rep = cdv::izmestiev_matrix_geometric(op.polytope);
    auto s = spectrum(transition_matrix(rep));

    REQUIRE(s.clusters.size() == 4);
    CHECK(s.clusters[0].first == Approx(1.0).margin(1e-9));
    CHECK(s.clusters[0].second == 1);
    CHECK(s.clusters[1].first == Approx(1.0 / std::sqrt(5.0)).margin(1e-9));
    CHECK(s.clusters[1].second == 3);
    CHECK(s.clusters[2].first == Approx(-0.2).margin(1e-9));
    CHECK(s.clusters[2].second == 5);
    CHECK(s.clusters[3].first == Approx(-1.0 / std::sqrt(5.0)).margin(1e-9));
    CHECK(s.clusters[3].second == 3);
    CHECK(s.lambda1 == Approx(0.447214).margin(5e-7));
}

TEST_CASE("lambda1 equals gamma over gamma minus delta", "[walk]") {
    struct Case {
        double a, b, c, expect;
    };
    for (const Case& tc : {Case{1, 1, 0, 0.5}, Case{3, 1, 1, 7.0 / 11.0},
                           Case{kGolden, 1, 0, 1.0 / std::sqrt(5.0)}}) {
        auto op = tetra_orbit(tc.a, tc.b, tc.c);
        auto rep = cdv::izmestiev_matrix_geometric(op.polytope);
        auto s = spectrum(transition_matrix(rep));
        auto check = lambda1_consistency(rep, s);
        INFO("point (" << tc.a << "," << tc.b << "," << tc.c << ")");
        CHECK(check.pass);
        CHECK(check.eigenspace_dim == 3);
        CHECK(s.lambda1 == Approx(tc.expect).margin(1e-9));
    }

    auto cube = geom::Polytope::build(cube_vertices());
    auto rep = cdv::izmestiev_matrix_geometric(cube);
    auto s = spectrum(transition_matrix(rep));
    CHECK(s.lambda1 == Approx(1.0 / 3.0).epsilon(1e-10));
    CHECK(lambda1_consistency(rep, s).pass);
}

TEST_CASE("eigenvectors of M transport to T", "[walk]") {
    auto op = tetra_orbit(3, 2, 1);
    auto rep = cdv::izmestiev_matrix_geometric(op.polytope);
    auto [gamma, delta] = gamma_delta(rep);
    double tau = gamma + 0.7;
    auto t = transition_matrix(rep, tau);

    Eigen::SelfAdjointEigenSolver<Matrix> eig(rep.m);
    for (int i = 0; i < rep.m.rows(); ++i) {
        Vector v = eig.eigenvectors().col(i);
        double expect = (tau - eig.eigenvalues()(i)) / (tau - delta);
        CHECK((t.t * v - expect * v).norm() <= 1e-8 * v.norm());
    }
}

TEST_CASE("spectrum is permutation equivariant", "[walk]") {
    auto op = tetra_orbit(3, 2, 1);
    auto rep = cdv::izmestiev_matrix_geometric(op.polytope);
    auto t = transition_matrix(rep);
    auto s = spectrum(t);

    std::vector<int> perm(12);
    for (int i = 0; i < 12; ++i) perm[i] = (5 * i + 3) % 12;
    Matrix pt(12, 12);
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j) pt(i, j) = t.t(perm[i], perm[j]);
    auto s2 = spectrum(StochasticMatrix{pt, 0.0});
    for (int i = 0; i < 12; ++i)
        CHECK(s2.eigenvalues(i) == Approx(s.eigenvalues(i)).margin(1e-10));
}

TEST_CASE("weight extraction", "[walk]") {
    {
        auto op = tetra_orbit(kGolden, 1, 0);
        auto rep = cdv::izmestiev_matrix_geometric(op.polytope);
        auto cs = groups::cayley_structure(op);
        auto w = extract_weights(transition_matrix(rep), cs, op.base_vertex);
        CHECK(w.nu == 1);
        CHECK(w.mu == 2);
        for (double x : w.x) CHECK(x == Approx(0.2).margin(1e-9));
    }
    {
        // truncated tetrahedron: the gamma_3 edges vanish, so nu=1, mu=1
        auto op = tetra_orbit(3, 1, 1);
        auto rep = cdv::izmestiev_matrix_geometric(op.polytope);
        auto cs = groups::cayley_structure(op);
        auto w = extract_weights(transition_matrix(rep), cs, op.base_vertex);
        CHECK(w.nu == 1);
        CHECK(w.mu == 1);
        CHECK(w.x[0] == Approx(5.0 / 11.0).margin(1e-9));
        CHECK(w.x[1] == Approx(3.0 / 11.0).margin(1e-9));
    }
    {
        // cuboctahedron: gamma_1 edges vanish
        auto op = tetra_orbit(1, 1, 0);
        auto rep = cdv::izmestiev_matrix_geometric(op.polytope);
        auto cs = groups::cayley_structure(op);
        auto w = extract_weights(transition_matrix(rep), cs, op.base_vertex);
        CHECK(w.nu == 0);
        CHECK(w.mu == 2);
        CHECK(w.x[0] == Approx(0.25).margin(1e-9));
        CHECK(w.x[1] == Approx(0.25).margin(1e-9));
        CHECK(w.constraint_sum() == Approx(1.0).margin(1e-10));
    }
}

TEST_CASE("gamma_delta rejects non transitive reports", "[walk]") {
    Matrix simplex(4, 3);
    simplex << 2.5, 0.1, -0.2, -0.4, 2.0, 0.3, -0.3, -0.7, 2.2, -0.8, -0.9, -1.0;
    auto q = geom::Polytope::build(simplex);
    auto rep = cdv::izmestiev_matrix_geometric(q);
    CHECK_THROWS_AS(gamma_delta(rep), geometric_error);
}

TEST_CASE("eigendecomposition backward error", "[walk]") {
    auto op = tetra_orbit(3, 2, 1);
    auto rep = cdv::izmestiev_matrix_geometric(op.polytope);
    auto t = transition_matrix(rep);
    auto s = spectrum(t);
    const int n = static_cast<int>(t.t.rows());
    Matrix lambda = s.eigenvalues.asDiagonal();
    double backward = (t.t * s.eigenvectors - s.eigenvectors * lambda).cwiseAbs().maxCoeff();
    CHECK(backward <= 1e-12 * n * t.t.cwiseAbs().maxCoeff() * n);
    CHECK((s.eigenvectors.transpose() * s.eigenvectors - Matrix::Identity(n, n))
              .cwiseAbs()
              .maxCoeff() <= 1e-12);
}

TEST_CASE("connectivity is read off the multiplicity of eigenvalue 1", "[walk]") {
    for (auto [a, b, c] : {std::tuple{3.0, 2.0, 1.0}, std::tuple{1.0, 1.0, 0.0},
                           std::tuple{1.0, 0.0, 0.0}}) {
        auto op = tetra_orbit(a, b, c);
        auto rep = cdv::izmestiev_matrix_geometric(op.polytope);
        auto s = spectrum(transition_matrix(rep));
        CHECK(s.connected);
        CHECK(s.eigenvalues(0) == Approx(1.0).margin(1e-9));
        CHECK(s.eigenvalues(s.eigenvalues.size() - 1) >= -1.0 - 1e-9);
    }
}

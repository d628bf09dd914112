#include <catch2/catch_amalgamated.hpp>

#include "polyspectra/tetra.hpp"

using namespace polyspectra;
using namespace polyspectra::tetra;
using Catch::Approx;

TEST_CASE("closed-form weights at the table points", "[tetra]") {
    auto w311 = weights(ModuliPoint(3, 1, 1));
    CHECK(w311.d == Approx(66.0));
    CHECK(w311.x1 == Approx(5.0 / 11.0).epsilon(1e-12));
    CHECK(w311.x2 == Approx(3.0 / 11.0).epsilon(1e-12));
    CHECK(w311.x3 == Approx(0.0).margin(1e-15));

    auto w110 = weights(ModuliPoint(1, 1, 0));
    CHECK(w110.x1 == Approx(0.0).margin(1e-15));
    CHECK(w110.x2 == Approx(0.25).epsilon(1e-12));
    CHECK(w110.x3 == Approx(0.25).epsilon(1e-12));

    auto wico = weights(ModuliPoint(kGoldenRatio, 1, 0));
    CHECK(wico.x1 == Approx(0.2).epsilon(1e-12));
    CHECK(wico.x2 == Approx(0.2).epsilon(1e-12));
    CHECK(wico.x3 == Approx(0.2).epsilon(1e-12));

    CHECK_THROWS_AS(weights(ModuliPoint(1, 0, 0)), input_error);
}

TEST_CASE("weight reflection symmetry in c", "[tetra]") {
    Rng rng(31);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int rep = 0; rep < 50; ++rep) {
        double b = u(rng);
        double c = u(rng) * b;
        auto plus = weights(ModuliPoint(1, b, c));
        auto minus = weights(ModuliPoint(1, b, -c));
        CHECK(plus.x1 == Approx(minus.x1).margin(1e-12));
        CHECK(plus.x2 == Approx(minus.x3).margin(1e-12));
        CHECK(plus.x3 == Approx(minus.x2).margin(1e-12));
    }
}

TEST_CASE("stratum classification", "[tetra]") {
    CHECK(classify(ModuliPoint(3, 2, 1)) == Stratum::Icosa);
    CHECK(classify(ModuliPoint(2, 2, 1)) == Stratum::Cubocta);
    CHECK(classify(ModuliPoint(3, 1, 1)) == Stratum::TruncTetraPlus);
    CHECK(classify(ModuliPoint(3, 1, -1)) == Stratum::TruncTetraMinus);
    CHECK(classify(ModuliPoint(1, 1, 1)) == Stratum::Tetra);
    CHECK(classify(ModuliPoint(1, 1, -1)) == Stratum::Tetra);
    CHECK(classify(ModuliPoint(1, 0, 0)) == Stratum::Octa);

    CHECK(is_regular(ModuliPoint(3, 2, 1)));
    CHECK(is_regular(ModuliPoint(1, 1, 0)));
    CHECK_FALSE(is_regular(ModuliPoint(1, 1, 1)));
    CHECK_FALSE(is_regular(ModuliPoint(1, 0, 0)));

    CHECK_THROWS_AS(ModuliPoint(1, 2, 0), input_error);
    CHECK_THROWS_AS(ModuliPoint(1, 0.3, 0.5), input_error);
}

TEST_CASE("pattern matrix matches the pipeline walk", "[tetra]") {
    for (auto [a, b, c] : {std::tuple{3.0, 2.0, 1.0}, std::tuple{1.0, 0.6, -0.25},
                           std::tuple{2.0, 1.3, 0.0}}) {
        ModuliPoint p(a, b, c);
        auto sm = transition_matrix_pattern(weights(p));

        auto grp = FiniteOrthogonalGroup::tetrahedral_rotation();
        auto op = groups::orbit_polytope(grp, p.seed());
        auto rep = cdv::izmestiev_matrix_geometric(op.polytope);
        auto pipeline = walk::transition_matrix(rep);
        auto slot = reference_slot_of_vertex(op);

        INFO("point (" << a << "," << b << "," << c << ")");
        for (int u = 0; u < 12; ++u)
            for (int v = 0; v < 12; ++v)
                CHECK(sm.t(slot[u], slot[v]) == Approx(pipeline.t(u, v)).margin(1e-9));
    }
}

TEST_CASE("weights oracle agrees with the closed form", "[tetra]") {
    for (auto [a, b, c] : {std::tuple{3.0, 2.0, 1.0}, std::tuple{1.0, 1.0, 0.3},
                           std::tuple{2.0, 1.5, -1.0}}) {
        ModuliPoint p(a, b, c);
        auto formula = weights(p);
        auto oracle = weights_oracle(p);
        INFO("point (" << a << "," << b << "," << c << ")");
        CHECK(oracle.x1 == Approx(formula.x1).margin(1e-9));
        CHECK(oracle.x2 == Approx(formula.x2).margin(1e-9));
        CHECK(oracle.x3 == Approx(formula.x3).margin(1e-9));
    }
}

TEST_CASE("eigen structure at the icosahedron point", "[tetra]") {
    auto e = eigen_structure(ModuliPoint(kGoldenRatio, 1, 0));
    CHECK(e.lambda1 == Approx(1.0 / std::sqrt(5.0)).margin(1e-10));
    CHECK(e.lambda2 == Approx(-0.2).margin(1e-10));
    CHECK(e.lambda3 == Approx(-1.0 / std::sqrt(5.0)).margin(1e-10));
    CHECK(e.lambda4 == Approx(-0.2).margin(1e-12));  // coincides with lambda2
    REQUIRE(e.clusters.size() == 4);
    CHECK(e.clusters[2].second == 5);  // merged multiplicity
    CHECK(e.cubic_residual <= 1e-8);
}

TEST_CASE("eigen structure at generic points", "[tetra]") {
    // at (3,2,1) the weights are (2/11, 3/11, 3/22); the cubic roots come out
    // as 1/2, -5/22, -5/11 and lambda4 = -5/22 coincides with lambda2
    auto e = eigen_structure(ModuliPoint(3, 2, 1));
    auto w = weights(ModuliPoint(3, 2, 1));
    CHECK(w.x1 == Approx(2.0 / 11.0).margin(1e-12));
    CHECK(w.x2 == Approx(3.0 / 11.0).margin(1e-12));
    CHECK(w.x3 == Approx(3.0 / 22.0).margin(1e-12));
    CHECK(e.lambda1 == Approx(0.5).margin(1e-10));
    CHECK(e.lambda2 == Approx(-5.0 / 22.0).margin(1e-10));
    CHECK(e.lambda3 == Approx(-5.0 / 11.0).margin(1e-10));
    CHECK(e.lambda4 == Approx(w.x1 - w.x2 - w.x3).margin(1e-9));
    CHECK(e.lambda1 > e.lambda4);
    CHECK(e.lambda4 > e.lambda3);
    REQUIRE(e.clusters.size() == 4);  // lambda2 and lambda4 merge
    CHECK(e.clusters[0].second == 1);
    int total = 0;
    for (auto [value, mult] : e.clusters) total += mult;
    CHECK(total == 12);

    // a point with five separated clusters (1, 3, 3, 3, 2)
    auto generic = eigen_structure(ModuliPoint(1, 0.6, -0.25));
    REQUIRE(generic.clusters.size() == 5);
    std::vector<int> mults;
    for (auto [value, mult] : generic.clusters) mults.push_back(mult);
    CHECK(mults == std::vector<int>{1, 3, 2, 3, 3});  // lambda4 above lambda2 here

    // ordering lambda1 > lambda4 > lambda3 on random regular points, and both
    // signs of lambda2 - lambda4 occur over the moduli space
    Rng rng(37);
    std::uniform_real_distribution<double> u(0.02, 0.98);
    bool saw_l2_above = false, saw_l2_below = false;
    for (int rep = 0; rep < 60; ++rep) {
        double b = u(rng);
        double c = (2.0 * u(rng) - 1.0) * b;
        ModuliPoint p(1.0, b, c);
        if (!is_regular(p)) continue;
        auto ee = eigen_structure(p);
        CHECK(ee.lambda1 > ee.lambda4);
        CHECK(ee.lambda4 > ee.lambda3);
        if (ee.lambda2 > ee.lambda4 + 1e-9) saw_l2_above = true;
        if (ee.lambda2 < ee.lambda4 - 1e-9) saw_l2_below = true;
    }
    CHECK(saw_l2_above);
    CHECK(saw_l2_below);
}

TEST_CASE("small-matrix path at non-regular points", "[tetra]") {
    auto tetra = record_for_point(ModuliPoint(1, 1, -1));
    CHECK_FALSE(tetra.regular);
    CHECK(tetra.vertex_count == 4);
    CHECK(tetra.lambda1_small_second == Approx(-1.0 / 3.0).margin(1e-10));
    CHECK(tetra.lambda1 == Approx(-1.0 / 3.0).margin(1e-10));
    CHECK(tetra.lambda1_extension == Approx(1.0).margin(1e-10));
    CHECK(tetra.w.x3 == Approx(0.5).margin(1e-12));

    auto octa = record_for_point(ModuliPoint(1, 0, 0));
    CHECK_FALSE(octa.regular);
    CHECK(octa.vertex_count == 6);
    CHECK(octa.lambda1_small_second == Approx(0.0).margin(1e-10));
    CHECK(octa.lambda1_small_min == Approx(-0.5).margin(1e-10));
    CHECK(octa.lambda1 == Approx(-0.5).margin(1e-10));
    CHECK(octa.lambda1_extension == Approx(1.0).margin(1e-10));
    CHECK(octa.w.x1 == Approx(1.0).margin(1e-12));
}

TEST_CASE("face structure across strata", "[tetra]") {
    auto icosa = record_for_point(ModuliPoint(3, 2, 1));
    CHECK(icosa.vertex_count == 12);
    CHECK(icosa.edge_count == 30);
    CHECK(icosa.facet_count == 20);

    auto cubocta = record_for_point(ModuliPoint(2, 2, 1));
    CHECK(cubocta.facet_count == 14);
    CHECK(cubocta.edge_count == 24);

    auto tt = record_for_point(ModuliPoint(3, 1, 1));
    CHECK(tt.facet_count == 8);
    CHECK(tt.edge_count == 18);

    // (2,2,1): 8 triangles and 6 quadrilaterals; (3,1,1): 4 + 4 hexagons
    auto grp = FiniteOrthogonalGroup::tetrahedral_rotation();
    {
        Vector w(3);
        w << 2, 2, 1;
        auto op = groups::orbit_polytope(grp, w);
        int tri = 0, quad = 0;
        for (const auto& f : op.polytope.facets()) {
            if (f.vertices.size() == 3) ++tri;
            if (f.vertices.size() == 4) ++quad;
        }
        CHECK(tri == 8);
        CHECK(quad == 6);
    }
    {
        Vector w(3);
        w << 3, 1, 1;
        auto op = groups::orbit_polytope(grp, w);
        int tri = 0, hexa = 0;
        for (const auto& f : op.polytope.facets()) {
            if (f.vertices.size() == 3) ++tri;
            if (f.vertices.size() == 6) ++hexa;
        }
        CHECK(tri == 4);
        CHECK(hexa == 4);
    }
}

TEST_CASE("facet list in the reference enumeration", "[tetra]") {
    auto grp = FiniteOrthogonalGroup::tetrahedral_rotation();
    Vector w(3);
    w << 3, 2, 1;
    auto op = groups::orbit_polytope(grp, w);
    auto slot = reference_slot_of_vertex(op);

    std::set<std::array<int, 3>> observed;
    for (const auto& f : op.polytope.facets()) {
        REQUIRE(f.vertices.size() == 3);
        std::array<int, 3> tri{};
        for (int i = 0; i < 3; ++i) tri[i] = slot[f.vertices[i]] + 1;
        std::sort(tri.begin(), tri.end());
        observed.insert(tri);
    }
    const std::set<std::array<int, 3>> expected = {
        {1, 2, 6},   {1, 2, 12},  {1, 4, 6},   {1, 4, 9},   {1, 9, 12},
        {2, 3, 6},   {2, 3, 11},  {2, 11, 12}, {3, 5, 6},   {3, 5, 7},
        {3, 7, 11},  {4, 5, 6},   {4, 5, 8},   {4, 8, 9},   {5, 7, 8},
        {7, 8, 10},  {7, 10, 11}, {8, 9, 10},  {9, 10, 12}, {10, 11, 12}};
    CHECK(observed == expected);
}

TEST_CASE("equilateral points sit on the expected rays", "[tetra]") {
    CHECK(record_for_point(ModuliPoint(kGoldenRatio, 1, 0)).equilateral);
    CHECK(record_for_point(ModuliPoint(2 * kGoldenRatio, 2, 0)).equilateral);
    CHECK(record_for_point(ModuliPoint(3, 1, 1)).equilateral);
    CHECK(record_for_point(ModuliPoint(3, 1, -1)).equilateral);
    CHECK(record_for_point(ModuliPoint(1, 1, 0)).equilateral);
    CHECK_FALSE(record_for_point(ModuliPoint(3, 2, 1)).equilateral);
    CHECK_FALSE(record_for_point(ModuliPoint(1, 0.5, 0)).equilateral);
    CHECK_FALSE(record_for_point(ModuliPoint(4, 1, 1)).equilateral);
}

TEST_CASE("moduli scan determinism and structure", "[tetra]") {
    auto records = scan_moduli(10, 1);
    auto again = scan_moduli(10, 2);
    REQUIRE(records.size() == again.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(records[i].a == again[i].a);
        CHECK(records[i].b == again[i].b);
        CHECK(records[i].c == again[i].c);
        CHECK(records[i].lambda1 == again[i].lambda1);  // bitwise equal
    }
    // (density+1)^2 grid points minus the three non-regular corners
    CHECK(records.size() == 11 * 11 - 3);
    for (const auto& r : records) {
        CHECK(r.regular);
        CHECK(r.w.d > 0);
    }
}

TEST_CASE("table of landmark points", "[tetra]") {
    auto rows = table1();
    REQUIRE(rows.size() == 7);
    const double expected_x[7][3] = {{0, 0, 0.5},          {0, 0.25, 0.25},
                                     {0, 0.5, 0},          {0.2, 0.2, 0.2},
                                     {5.0 / 11, 0, 3.0 / 11}, {5.0 / 11, 3.0 / 11, 0},
                                     {1, 0, 0}};
    const double expected_l1[7] = {-1.0 / 3, 0.5, -1.0 / 3, 0.447214, 7.0 / 11, 7.0 / 11,
                                   -0.5};
    for (int i = 0; i < 7; ++i) {
        INFO("row " << i << " (" << rows[i].polytope << ")");
        CHECK(rows[i].x1 == Approx(expected_x[i][0]).margin(1e-9));
        CHECK(rows[i].x2 == Approx(expected_x[i][1]).margin(1e-9));
        CHECK(rows[i].x3 == Approx(expected_x[i][2]).margin(1e-9));
        CHECK(rows[i].lambda1 == Approx(expected_l1[i]).margin(1e-6));
    }
}

TEST_CASE("signatures identify the icosahedral type across points", "[tetra]") {
    auto grp = FiniteOrthogonalGroup::tetrahedral_rotation();
    Vector w(3);
    w << 3, 2, 1;
    auto a = groups::orbit_polytope(grp, w);
    w << 5, 3, 1;
    auto b = groups::orbit_polytope(grp, w);
    CHECK(geom::combinatorial_signature(a.polytope) ==
          geom::combinatorial_signature(b.polytope));

    w << 2, 2, 1;
    auto cubocta = groups::orbit_polytope(grp, w);
    w << 3, 1, 1;
    auto trunctetra = groups::orbit_polytope(grp, w);
    CHECK(geom::combinatorial_signature(cubocta.polytope) !=
          geom::combinatorial_signature(trunctetra.polytope));
    CHECK(geom::combinatorial_signature(a.polytope) !=
          geom::combinatorial_signature(cubocta.polytope));
}

TEST_CASE("pattern walk disconnects at the limit weights of a tetra corner", "[tetra]") {
    // at (1,1,1) the limit weights are (0, 1/2, 0): only one generator pair
    // survives and the pattern graph splits into cycles
    auto sm = transition_matrix_pattern(weights_limit(ModuliPoint(1, 1, 1)));
    auto s = walk::spectrum(sm);
    CHECK_FALSE(s.connected);
    CHECK(s.lambda1 == Approx(1.0).margin(1e-10));
}

#ifndef POLYSPECTRA_VERIFY_HPP
#define POLYSPECTRA_VERIFY_HPP

#include <functional>
#include <string>
#include <vector>

#include "polyspectra/coxeter.hpp"
#include "polyspectra/tetra.hpp"

namespace polyspectra::verify {

struct SuiteResult {
    explicit SuiteResult(std::string suite_name = {}) : name(std::move(suite_name)) {}

    std::string name;
    bool pass = false;
    long cases = 0;
    double worst = 0.0;  // worst residual relative to the suite's scale
    std::string detail;
};

struct VerifyOptions {
    std::uint64_t seed = 1;
    int lemma_cases = 1000;   // per lemma verifier
    int ratio_frames = 200;   // per dimension k in {3,4,5}
    int weight_samples = 500;
    double tolerance = 1e-8;  // pass threshold for the randomized suites
    bool inject_sign_flip = false;  // negative-control fixture: must fail
};

/// Named test polytope together with the facts the suites rely on.
struct CorpusEntry {
    std::string name;
    geom::Polytope polytope;
    bool simple;
};

inline Matrix corpus_cube() {
    Matrix v(8, 3);
    int r = 0;
    for (int sx : {-1, 1})
        for (int sy : {-1, 1})
            for (int sz : {-1, 1}) v.row(r++) << 2.0 * sx, 2.0 * sy, 2.0 * sz;
    return v;
}

/// The polytopes every cross-check runs against: the landmark solids plus
/// permutahedra at a spread of interior weights.
inline std::vector<CorpusEntry> standard_corpus() {
    std::vector<CorpusEntry> corpus;
    auto add_orbit = [&corpus](const std::string& name, const Vector& seed) {
        auto grp = groups::FiniteOrthogonalGroup::tetrahedral_rotation();
        auto op = groups::orbit_polytope(grp, seed);
        corpus.push_back({name, op.polytope, geom::is_simple(op.polytope)});
    };

    Matrix tetra(4, 3);
    tetra << 1, 1, 1, 1, -1, -1, -1, -1, 1, -1, 1, -1;
    corpus.push_back({"tetrahedron", geom::Polytope::build(tetra), true});
    corpus.push_back({"cube", geom::Polytope::build(corpus_cube()), true});

    Matrix octa(6, 3);
    octa << 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1;
    corpus.push_back({"octahedron", geom::Polytope::build(octa), false});

    Vector w(3);
    w << 3, 2, 1;
    add_orbit("Q(3,2,1)", w);
    w << 2, 2, 1;
    add_orbit("Q(2,2,1)", w);
    w << 3, 1, 1;
    add_orbit("Q(3,1,1)", w);

    const double alphas[5][3] = {
        {1, 1, 1}, {2, 1, 1}, {1, 2, 1}, {1, 1, 2}, {3, 2, 1}};
    for (const char* name : {"A3", "B3"}) {
        auto sys = coxeter::coxeter_preset(name);
        for (int i = 0; i < 5; ++i) {
            Vector alpha(3);
            alpha << alphas[i][0], alphas[i][1], alphas[i][2];
            auto op = coxeter::permutahedron(sys, alpha);
            std::ostringstream label;
            label << name << " permutahedron alpha(" << alphas[i][0] << ","
                  << alphas[i][1] << "," << alphas[i][2] << ")";
            corpus.push_back({label.str(), op.polytope, true});
        }
    }
    return corpus;
}

inline cdv::SimplicialConeFrame random_frame(Rng& rng, int k) {
    std::uniform_real_distribution<double> entry(-1.0, 1.0);
    std::uniform_real_distribution<double> coeff(0.2, 2.0);
    while (true) {
        Matrix gens(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) gens(i, j) = entry(rng);
        if (std::abs(linalg::determinant(gens)) < 0.1) continue;
        Vector c(k);
        for (int j = 0; j < k; ++j) c(j) = coeff(rng);
        return cdv::SimplicialConeFrame::create(Vector(-gens * c), gens);
    }
}

inline std::vector<linalg::IndexSet> proper_subsets(int k) {
    std::vector<linalg::IndexSet> out;
    for (int mask = 0; mask < (1 << k) - 1; ++mask) {
        std::vector<int> members;
        for (int i = 0; i < k; ++i)
            if (mask & (1 << i)) members.push_back(i + 1);
        out.emplace_back(k, members);
    }
    return out;
}

/// Scaling, Determinant and Extension lemma verifiers on random matrices,
/// sizes 2..6, entries uniform in [-1,1], one in four inputs made singular.
inline std::vector<SuiteResult> lemma_suites(const VerifyOptions& opt) {
    Rng rng(opt.seed * 3 + 1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> positive(0.0, 2.0);
    std::uniform_int_distribution<int> size(2, 6);
    std::uniform_int_distribution<int> coin(0, 1);

    SuiteResult scaling("scaling-lemma"), det("determinant-lemma"), ext("extension-lemma");
    scaling.pass = det.pass = ext.pass = true;

    for (int rep = 0; rep < opt.lemma_cases; ++rep) {
        int r = size(rng);
        Matrix a(r, r);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) a(i, j) = u(rng);
        if (rep % 4 == 0) a.row(rep % r).setZero();  // rank-deficient inputs

        Vector lambda(r), mu(r);
        for (int i = 0; i < r; ++i) {
            lambda(i) = positive(rng);
            mu(i) = positive(rng);
        }
        if (rep % 7 == 0) lambda(rep % r) = 0.0;
        auto sc = linalg::verify_scaling_lemma(a, lambda, mu, opt.tolerance);
        scaling.worst = std::max(scaling.worst, sc.max_deviation / sc.scale);
        scaling.pass = scaling.pass && sc.pass;

        auto dc = linalg::verify_determinant_lemma(a, opt.tolerance);
        det.worst = std::max(det.worst, dc.max_deviation / dc.scale);
        det.pass = det.pass && dc.pass;

        std::vector<int> members;
        for (int i = 1; i <= r; ++i)
            if (coin(rng)) members.push_back(i);
        auto ec = linalg::verify_extension_lemma(a, linalg::IndexSet(r, members),
                                                 opt.tolerance);
        ext.worst = std::max(ext.worst, ec.max_deviation / ec.scale);
        ext.pass = ext.pass && ec.pass;
    }
    scaling.cases = det.cases = ext.cases = opt.lemma_cases;
    return {scaling, det, ext};
}

/// Formula = oracle = rephrased on random simplicial cones, k in {3,4,5},
/// every proper index subset.
inline SuiteResult ratio_suite(const VerifyOptions& opt) {
    Rng rng(opt.seed * 5 + 2);
    SuiteResult res("volume-ratio-routes");
    res.pass = true;
    for (int k : {3, 4, 5}) {
        auto subsets = proper_subsets(k);
        for (int rep = 0; rep < opt.ratio_frames; ++rep) {
            auto frame = random_frame(rng, k);
            for (const auto& I : subsets) {
                double a = cdv::volume_ratio_formula(frame, I);
                if (opt.inject_sign_flip) a = -a;  // negative-control fixture
                double b = cdv::volume_ratio_oracle(frame, I);
                double c = cdv::volume_ratio_rephrased(frame, I);
                double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
                double dev = std::max(std::abs(a - b), std::abs(a - c)) / scale;
                res.worst = std::max(res.worst, dev);
                if (dev > opt.tolerance) res.pass = false;
                ++res.cases;
            }
        }
    }
    return res;
}

/// Closed-form simple-polytope entries against the geometric construction on
/// every edge of every simple corpus polytope.
inline SuiteResult dual_route_suite(const std::vector<CorpusEntry>& corpus,
                                    const VerifyOptions& opt) {
    SuiteResult res("cdv-dual-route");
    res.pass = true;
    for (const auto& entry : corpus) {
        if (!entry.simple) continue;
        auto rep = cdv::izmestiev_matrix_geometric(entry.polytope);
        for (const auto& [s, t] : rep.edges) {
            double closed = cdv::izmestiev_offdiag_simple(entry.polytope, s, t);
            double dev = std::abs(closed - rep.m(s, t)) / std::abs(rep.m(s, t));
            res.worst = std::max(res.worst, dev);
            if (dev > opt.tolerance) {
                res.pass = false;
                res.detail = entry.name;
            }
            ++res.cases;
        }
    }
    return res;
}

/// Kernel span, corank, and basic axioms on every corpus polytope.
inline SuiteResult kernel_suite(const std::vector<CorpusEntry>& corpus,
                                const VerifyOptions& opt) {
    (void)opt;
    SuiteResult res("kernel-reconstruction");
    res.pass = true;
    for (const auto& entry : corpus) {
        auto rep = cdv::izmestiev_matrix_geometric(entry.polytope);
        auto check = cdv::kernel_reconstruction_check(entry.polytope, rep);
        double rel = check.residual / std::max(1.0, rep.spectral_norm);
        res.worst = std::max({res.worst, rel, check.max_principal_angle});
        if (!check.pass || !rep.corank_ok || !rep.m1 || !rep.m2) {
            res.pass = false;
            res.detail = entry.name;
        }
        ++res.cases;
    }
    return res;
}

/// Closed-form moduli weights against the full pipeline on random regular
/// points; also asserts D > 0 throughout.
inline SuiteResult weight_suite(const VerifyOptions& opt) {
    Rng rng(opt.seed * 7 + 3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    SuiteResult res("weight-routes");
    res.pass = true;
    int produced = 0;
    while (produced < opt.weight_samples) {
        double b = u(rng);
        double c = (2.0 * u(rng) - 1.0) * b;
        // keep clear of the stratum walls where facet merging is ambiguous
        if (b < 1e-6 || 1.0 - b < 1e-6 || b - std::abs(c) < 1e-6) continue;
        tetra::ModuliPoint p(1.0, b, c);
        if (!tetra::is_regular(p)) continue;
        ++produced;
        auto formula = tetra::weights(p);
        auto oracle = tetra::weights_oracle(p);
        if (!(formula.d > 0)) res.pass = false;
        double dev = std::max({std::abs(formula.x1 - oracle.x1),
                               std::abs(formula.x2 - oracle.x2),
                               std::abs(formula.x3 - oracle.x3)});
        res.worst = std::max(res.worst, dev);
        if (dev > 1e-9) {
            res.pass = false;
            res.detail = "point (1," + format_double(b) + "," + format_double(c) + ")";
        }
        ++res.cases;
    }
    return res;
}

inline std::vector<SuiteResult> run_verification(const VerifyOptions& opt) {
    std::vector<SuiteResult> results = lemma_suites(opt);
    results.push_back(ratio_suite(opt));
    auto corpus = standard_corpus();
    results.push_back(dual_route_suite(corpus, opt));
    results.push_back(kernel_suite(corpus, opt));
    results.push_back(weight_suite(opt));
    return results;
}

}  // namespace polyspectra::verify

#endif

#ifndef POLYSPECTRA_CLI_HPP
#define POLYSPECTRA_CLI_HPP

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "polyspectra/io.hpp"
#include "polyspectra/verify.hpp"

namespace polyspectra::cli {

namespace detail {

inline int default_threads() {
    if (const char* env = std::getenv("POLYSPECTRA_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

inline void emit(const std::string& content, const std::string& out_path, std::ostream& out) {
    if (out_path.empty())
        out << content;
    else
        io::write_text_file(out_path, content);
}

inline std::vector<int> parse_index_list(const std::string& text) {
    std::vector<int> values;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        try {
            values.push_back(std::stoi(token));
        } catch (...) {
            throw input_error("cannot parse index list '" + text + "'");
        }
    }
    return values;
}

inline std::vector<double> parse_double_list(const std::string& text, std::size_t expect) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        try {
            values.push_back(std::stod(token));
        } catch (...) {
            throw input_error("cannot parse number list '" + text + "'");
        }
    }
    if (values.size() != expect)
        throw input_error("expected " + std::to_string(expect) + " comma-separated values");
    return values;
}

}  // namespace detail

struct CommandContext {
    std::ostream& out;
    std::ostream& err;
    int threads = 1;
};

// ---- hull / dual ------------------------------------------------------------

inline int cmd_hull(const std::string& in, const std::string& out_path, CommandContext& ctx) {
    auto p = io::read_polytope(in);
    auto eq = geom::is_equilateral(p);
    io::json j;
    j["facets"] = io::facet_report(p);
    io::json edges = io::json::array();
    for (const auto& [s, t] : p.edges()) edges.push_back({s, t});
    j["edges"] = edges;
    j["signature"] = geom::combinatorial_signature(p);
    j["simple"] = geom::is_simple(p);
    j["equilateral"] = eq.equilateral;
    j["edge_length_spread"] = eq.spread;
    detail::emit(j.dump(2) + "\n", out_path, ctx.out);
    return 0;
}

inline int cmd_dual(const std::string& in, const std::string& out_path, CommandContext& ctx) {
    auto p = io::read_polytope(in);
    auto d = geom::polar_dual(p);
    detail::emit(io::polytope_to_json(d).dump(2) + "\n", out_path, ctx.out);
    return 0;
}

// ---- cdv --------------------------------------------------------------------

inline int cmd_cdv(const std::string& in, const std::string& out_path,
                   std::optional<double> tau, CommandContext& ctx) {
    auto q = io::read_polytope(in);
    auto rep = cdv::izmestiev_matrix_geometric(q);
    rep.m3 = cdv::strong_arnold_check(q, rep);
    io::json j = io::cdv_report_to_json(rep);
    if (tau) {
        auto t = walk::transition_matrix(rep, tau);
        j["transition"] = io::matrix_to_json(t.t);
        j["laziness"] = t.laziness;
    }
    if (geom::is_simple(q)) {
        io::json table = io::json::array();
        double worst = 0.0;
        for (const auto& [s, t] : rep.edges) {
            double closed = cdv::izmestiev_offdiag_simple(q, s, t);
            double dev = std::abs(closed - rep.m(s, t)) / std::abs(rep.m(s, t));
            worst = std::max(worst, dev);
            table.push_back({{"edge", {s, t}},
                             {"geometric", rep.m(s, t)},
                             {"closed_form", closed},
                             {"relative_deviation", dev}});
        }
        j["dual_route"] = {{"entries", table}, {"max_relative_deviation", worst}};
    }
    detail::emit(j.dump(2) + "\n", out_path, ctx.out);
    if (!rep.corank_ok) {
        ctx.err << "cdv: corank " << rep.corank << " differs from dimension " << rep.dim
                << "\n";
        return 4;
    }
    return 0;
}

// ---- ratio ------------------------------------------------------------------

inline int cmd_ratio(const std::string& in, bool random, int dim, std::uint64_t seed,
                     const std::string& subset, const std::string& out_path,
                     CommandContext& ctx) {
    cdv::SimplicialConeFrame frame = [&] {
        if (!in.empty()) return io::read_frame(in);
        if (!random) throw input_error("ratio: need --in FILE or --random");
        Rng rng(seed);
        return verify::random_frame(rng, dim);
    }();

    std::vector<linalg::IndexSet> sets;
    if (!subset.empty()) {
        sets.emplace_back(frame.dim(), detail::parse_index_list(subset));
        if (sets.back().size() >= frame.dim())
            throw input_error("ratio: the index set must be a proper subset");
    } else {
        sets = verify::proper_subsets(frame.dim());
    }

    io::json rows = io::json::array();
    std::ostringstream text;
    for (const auto& I : sets) {
        double formula = cdv::volume_ratio_formula(frame, I);
        double oracle = cdv::volume_ratio_oracle(frame, I);
        double rephrased = cdv::volume_ratio_rephrased(frame, I);
        double scale = std::max({std::abs(formula), std::abs(oracle), std::abs(rephrased)});
        double dev = std::max({std::abs(formula - oracle), std::abs(formula - rephrased),
                               std::abs(oracle - rephrased)}) /
                     scale;
        io::json row;
        row["I"] = I.members();
        row["formula"] = formula;
        row["oracle"] = oracle;
        row["rephrased"] = rephrased;
        row["max_relative_deviation"] = dev;
        rows.push_back(row);

        text << "I={";
        for (int i = 0; i < I.size(); ++i) text << (i ? "," : "") << I[i];
        text << "}: formula=" << format_double(formula) << " oracle=" << format_double(oracle)
             << " rephrased=" << format_double(rephrased)
             << " max_relative_deviation=" << format_double(dev) << "\n";
    }
    if (!out_path.empty())
        io::write_text_file(out_path, rows.dump(2) + "\n");
    else
        ctx.out << text.str();
    return 0;
}

// ---- walk -------------------------------------------------------------------

inline int cmd_walk(const std::string& in, std::optional<double> tau,
                    const std::string& format, const std::string& out_path,
                    CommandContext& ctx) {
    auto q = io::read_polytope(in);
    auto rep = cdv::izmestiev_matrix_geometric(q);
    auto t = walk::transition_matrix(rep, tau);
    auto s = walk::spectrum(t);
    if (format == "csv") {
        std::ostringstream csv;
        csv << "index,eigenvalue\n";
        for (int i = 0; i < s.eigenvalues.size(); ++i)
            csv << i << ',' << format_double(s.eigenvalues(i)) << '\n';
        detail::emit(csv.str(), out_path, ctx.out);
    } else {
        io::json j = io::spectral_summary_to_json(s);
        j["laziness"] = t.laziness;
        detail::emit(j.dump(2) + "\n", out_path, ctx.out);
    }
    return 0;
}

// ---- coxeter ----------------------------------------------------------------

inline coxeter::CoxeterSystem load_system(const std::string& preset, const std::string& in,
                                          bool allow_rank4) {
    auto sys = [&] {
        if (!preset.empty()) return coxeter::coxeter_preset(preset);
        if (!in.empty()) return coxeter::coxeter_system(io::read_coxeter_matrix(in));
        throw input_error("coxeter: need --preset or --in FILE");
    }();
    // facet enumeration cost grows steeply with rank; rank 4 is opt-in
    if (sys.rank > 4 || (sys.rank == 4 && !allow_rank4))
        throw input_error("coxeter: rank " + std::to_string(sys.rank) +
                          " needs --allow-rank4 (ranks above 4 are unsupported)");
    return sys;
}

inline int cmd_coxeter_scan(const coxeter::CoxeterSystem& sys, int density,
                            const std::string& out_path, CommandContext& ctx) {
    if (density < 2) throw input_error("scan: density must be >= 2");
    const int k = sys.rank;
    std::vector<std::vector<int>> compositions;
    std::vector<int> comp(k, 1);
    std::function<void(int, int)> gen = [&](int slot, int remaining) {
        if (slot == k - 1) {
            comp[slot] = remaining;
            compositions.push_back(comp);
            return;
        }
        for (int i = 1; i <= remaining - (k - 1 - slot); ++i) {
            comp[slot] = i;
            gen(slot + 1, remaining - i);
        }
    };
    gen(0, density);

    std::vector<std::pair<double, double>> results(compositions.size());
    parallel_for(static_cast<std::int64_t>(compositions.size()), ctx.threads,
                 [&](std::int64_t idx) {
                     Vector alpha(k);
                     for (int j = 0; j < k; ++j)
                         alpha(j) = static_cast<double>(compositions[idx][j]) / density;
                     auto op = coxeter::permutahedron(sys, alpha);
                     auto rep = cdv::izmestiev_matrix_geometric(op.polytope);
                     auto s = walk::spectrum(walk::transition_matrix(rep));
                     results[idx] = {s.lambda1, geom::is_equilateral(op.polytope).spread};
                 });

    std::ostringstream csv;
    for (int j = 0; j < k; ++j) csv << "alpha_" << (j + 1) << ',';
    csv << "lambda1,equilateral_spread\n";
    for (std::size_t i = 0; i < compositions.size(); ++i) {
        for (int j = 0; j < k; ++j)
            csv << format_double(static_cast<double>(compositions[i][j]) / density) << ',';
        csv << format_double(results[i].first) << ',' << format_double(results[i].second)
            << '\n';
    }
    detail::emit(csv.str(), out_path, ctx.out);
    return 0;
}

inline int cmd_coxeter_min(const coxeter::CoxeterSystem& sys, int density,
                           const std::string& out_path, CommandContext& ctx) {
    auto result = coxeter::minimize_lambda1(sys, std::max(density, sys.rank + 2));
    io::json j;
    j["alpha"] = io::vector_to_json(result.alpha);
    j["lambda1"] = result.lambda1;
    j["converged"] = result.converged;
    j["evaluations"] = result.evaluations;
    detail::emit(j.dump(2) + "\n", out_path, ctx.out);
    return 0;
}

inline int cmd_coxeter_check(const coxeter::CoxeterSystem& sys, std::uint64_t seed,
                             double tolerance, const std::string& out_path,
                             CommandContext& ctx) {
    Rng rng(seed);
    std::uniform_real_distribution<double> u(0.4, 2.0);
    double worst = 0.0;
    io::json rows = io::json::array();
    for (int sample = 0; sample < 6; ++sample) {
        Vector alpha(sys.rank);
        if (sample == 0)
            alpha.setOnes();
        else
            for (int j = 0; j < sys.rank; ++j) alpha(j) = u(rng);
        auto op = coxeter::permutahedron(sys, alpha);
        auto rep = cdv::izmestiev_matrix_geometric(op.polytope);
        Vector row = coxeter::closed_form_row(sys, alpha);
        Vector w = op.polytope.vertex(op.base_vertex);
        io::json entry;
        entry["alpha"] = io::vector_to_json(alpha);
        for (int i = 0; i < sys.rank; ++i) {
            Vector neighbor = sys.reflections[i] * w;
            int idx = -1;
            for (int v = 0; v < op.polytope.vertex_count(); ++v)
                if ((op.polytope.vertex(v) - neighbor).norm() < 1e-9) idx = v;
            if (idx < 0) throw structural_error("check: reflected vertex not found");
            double dev =
                std::abs(row(i) - rep.m(op.base_vertex, idx)) / std::abs(row(i));
            worst = std::max(worst, dev);
        }
        rows.push_back(entry);
    }
    io::json j;
    j["samples"] = rows;
    j["max_relative_deviation"] = worst;
    j["pass"] = worst <= tolerance;
    detail::emit(j.dump(2) + "\n", out_path, ctx.out);
    return worst <= tolerance ? 0 : 1;
}

// ---- tetra ------------------------------------------------------------------

inline int cmd_tetra_table(const std::string& out_path, CommandContext& ctx) {
    auto rows = tetra::table1();
    std::ostringstream csv;
    csv << "polytope,a,b,c,x1,x2,x3,lambda1\n";
    for (const auto& r : rows) {
        csv << r.polytope << ',' << format_double(r.a) << ',' << format_double(r.b) << ','
            << format_double(r.c) << ',' << format_double(r.x1) << ',' << format_double(r.x2)
            << ',' << format_double(r.x3) << ',' << format_double(r.lambda1) << '\n';
    }
    detail::emit(csv.str(), out_path, ctx.out);
    return 0;
}

inline int cmd_tetra_scan(int density, const std::string& out_path, CommandContext& ctx) {
    auto records = tetra::scan_moduli(density, ctx.threads);
    std::ostringstream csv;
    io::write_moduli_csv(csv, records);
    detail::emit(csv.str(), out_path, ctx.out);
    return 0;
}

inline int cmd_tetra_point(const std::string& point, const std::string& out_path,
                           CommandContext& ctx) {
    auto abc = detail::parse_double_list(point, 3);
    tetra::ModuliPoint p(abc[0], abc[1], abc[2]);
    auto rec = tetra::record_for_point(p);
    detail::emit(io::moduli_record_to_json(rec).dump(2) + "\n", out_path, ctx.out);
    return 0;
}

// ---- verify -----------------------------------------------------------------

inline int cmd_verify(const verify::VerifyOptions& opt, CommandContext& ctx) {
    auto results = verify::run_verification(opt);
    bool all_pass = true;
    for (const auto& r : results) {
        ctx.out << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << " cases=" << r.cases
                << " worst_residual=" << format_double(r.worst);
        if (!r.detail.empty()) ctx.out << " (" << r.detail << ")";
        ctx.out << "\n";
        all_pass = all_pass && r.pass;
    }
    ctx.out << (all_pass ? "verification passed" : "verification FAILED")
            << " (seed=" << opt.seed << ")\n";
    return all_pass ? 0 : 1;
}

// ---- app --------------------------------------------------------------------

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"orbit polytopes, their matrices, and random-walk spectra"};
    app.require_subcommand(1);
    app.fallthrough();
    int threads = detail::default_threads();
    app.add_option("--threads", threads, "worker threads for scans");

    // hull
    std::string hull_in, hull_out;
    auto* hull = app.add_subcommand("hull", "facets, edges and predicates of a polytope");
    hull->add_option("--in", hull_in, "polytope JSON")->required();
    hull->add_option("--out", hull_out, "output path (default: stdout)");

    // dual
    std::string dual_in, dual_out;
    auto* dual = app.add_subcommand("dual", "polar dual of a polytope");
    dual->add_option("--in", dual_in, "polytope JSON")->required();
    dual->add_option("--out", dual_out, "output path");

    // cdv
    std::string cdv_in, cdv_out;
    double cdv_tau = std::numeric_limits<double>::quiet_NaN();
    auto* cdvc = app.add_subcommand("cdv", "matrix report for a polytope");
    cdvc->add_option("--in", cdv_in, "polytope JSON")->required();
    cdvc->add_option("--out", cdv_out, "output path");
    cdvc->add_option("--tau", cdv_tau, "also emit the walk matrix at this tau");

    // ratio
    std::string ratio_in, ratio_out, ratio_set;
    bool ratio_random = false;
    int ratio_dim = 3;
    std::uint64_t ratio_seed = 1;
    auto* ratio = app.add_subcommand("ratio", "volume ratios of a simplicial cone");
    ratio->add_option("--in", ratio_in, "frame JSON with apex and generators");
    ratio->add_flag("--random", ratio_random, "use a random frame instead of --in");
    ratio->add_option("--dim", ratio_dim, "dimension for --random")->check(CLI::Range(2, 8));
    ratio->add_option("--seed", ratio_seed, "seed for --random");
    ratio->add_option("--set", ratio_set, "index set, e.g. 1,2 (default: all)");
    ratio->add_option("--out", ratio_out, "output path (JSON)");

    // walk
    std::string walk_in, walk_out, walk_format = "json";
    double walk_tau = std::numeric_limits<double>::quiet_NaN();
    auto* walkc = app.add_subcommand("walk", "random-walk spectrum of a polytope");
    walkc->add_option("--in", walk_in, "polytope JSON")->required();
    walkc->add_option("--tau", walk_tau, "laziness parameter (default: gamma)");
    walkc->add_option("--format", walk_format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    walkc->add_option("--out", walk_out, "output path");

    // coxeter
    std::string cox_preset, cox_in, cox_out, cox_sub;
    int cox_density = 12;
    std::uint64_t cox_seed = 1;
    double cox_tol = 1e-8;
    auto* cox = app.add_subcommand("coxeter", "permutahedron scans and checks");
    cox->add_option("mode", cox_sub, "scan, min or check")
        ->required()
        ->check(CLI::IsMember({"scan", "min", "check"}));
    cox->add_option("--preset", cox_preset, "A3, B3 or H3");
    cox->add_option("--in", cox_in, "Coxeter matrix JSON");
    cox->add_option("--density", cox_density, "grid density");
    cox->add_option("--seed", cox_seed, "seed for check samples");
    bool cox_rank4 = false;
    cox->add_flag("--allow-rank4", cox_rank4, "enable rank-4 systems (slow)");
    cox->add_option("--tol", cox_tol, "pass tolerance for check")->check(CLI::PositiveNumber);
    cox->add_option("--out", cox_out, "output path");

    // tetra
    std::string tetra_sub, tetra_point, tetra_out;
    int tetra_density = 100;
    auto* tet = app.add_subcommand("tetra", "rotational tetrahedral moduli space");
    tet->add_option("mode", tetra_sub, "table, scan or point")
        ->required()
        ->check(CLI::IsMember({"table", "scan", "point"}));
    tet->add_option("--point", tetra_point, "moduli point a,b,c");
    tet->add_option("--density", tetra_density, "scan grid density")->check(CLI::Range(2, 10000));
    tet->add_option("--out", tetra_out, "output path");

    // verify
    verify::VerifyOptions vopt;
    auto* ver = app.add_subcommand("verify", "randomized identity and cross-check suites");
    ver->add_option("--seed", vopt.seed, "PRNG seed");
    ver->add_option("--cases", vopt.lemma_cases, "cases per lemma suite")
        ->check(CLI::PositiveNumber);
    ver->add_option("--frames", vopt.ratio_frames, "cone frames per dimension")
        ->check(CLI::PositiveNumber);
    ver->add_option("--weight-samples", vopt.weight_samples, "moduli weight samples")
        ->check(CLI::PositiveNumber);
    ver->add_option("--tol", vopt.tolerance, "pass tolerance")->check(CLI::PositiveNumber);
    ver->add_flag("--inject-sign-flip", vopt.inject_sign_flip,
                  "negative-control fixture: flips a sign so the suite must fail")
        ->group("");  // hidden

    std::vector<const char*> argv;
    argv.push_back("polyspectra");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 2;
    }

    CommandContext ctx{out, err, threads};
    try {
        if (hull->parsed()) return cmd_hull(hull_in, hull_out, ctx);
        if (dual->parsed()) return cmd_dual(dual_in, dual_out, ctx);
        if (cdvc->parsed()) {
            std::optional<double> tau;
            if (!std::isnan(cdv_tau)) tau = cdv_tau;
            return cmd_cdv(cdv_in, cdv_out, tau, ctx);
        }
        if (ratio->parsed())
            return cmd_ratio(ratio_in, ratio_random, ratio_dim, ratio_seed, ratio_set,
                             ratio_out, ctx);
        if (walkc->parsed()) {
            std::optional<double> tau;
            if (!std::isnan(walk_tau)) tau = walk_tau;
            return cmd_walk(walk_in, tau, walk_format, walk_out, ctx);
        }
        if (cox->parsed()) {
            auto sys = load_system(cox_preset, cox_in, cox_rank4);
            if (cox_sub == "scan") return cmd_coxeter_scan(sys, cox_density, cox_out, ctx);
            if (cox_sub == "min") return cmd_coxeter_min(sys, cox_density, cox_out, ctx);
            return cmd_coxeter_check(sys, cox_seed, cox_tol, cox_out, ctx);
        }
        if (tet->parsed()) {
            if (tetra_sub == "table") return cmd_tetra_table(tetra_out, ctx);
            if (tetra_sub == "scan") return cmd_tetra_scan(tetra_density, tetra_out, ctx);
            if (tetra_point.empty())
                throw input_error("tetra point: need --point a,b,c");
            return cmd_tetra_point(tetra_point, tetra_out, ctx);
        }
        if (ver->parsed()) return cmd_verify(vopt, ctx);
    } catch (const input_error& e) {
        err << "input error: " << e.what() << "\n";
        return 2;
    } catch (const geometric_error& e) {
        err << "geometric error: " << e.what() << "\n";
        return 3;
    } catch (const structural_error& e) {
        err << "structural error: " << e.what() << "\n";
        return 4;
    }
    err << "error: no command executed\n";
    return 2;
}

}  // namespace polyspectra::cli

#endif

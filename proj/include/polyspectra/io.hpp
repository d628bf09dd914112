#ifndef POLYSPECTRA_IO_HPP
#define POLYSPECTRA_IO_HPP

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyspectra/cdv.hpp"
#include "polyspectra/groups.hpp"
#include "polyspectra/tetra.hpp"
#include "polyspectra/walk.hpp"

namespace polyspectra::io {

using json = nlohmann::ordered_json;

inline json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw input_error("invalid JSON in " + path + ": " + e.what());
    }
    return j;
}

inline void reject_unknown_keys(const json& j, const std::vector<std::string>& allowed,
                                const std::string& what) {
    if (!j.is_object()) throw input_error(what + ": expected a JSON object");
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const auto& a : allowed)
            if (key == a) known = true;
        if (!known) throw input_error(what + ": unknown key '" + key + "'");
    }
}

inline Matrix matrix_from_json(const json& rows, const std::string& what) {
    if (!rows.is_array() || rows.empty())
        throw input_error(what + ": expected a non-empty array of rows");
    const std::size_t cols = rows[0].size();
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].is_array() || rows[i].size() != cols)
            throw input_error(what + ": ragged rows");
        for (std::size_t j = 0; j < cols; ++j) {
            if (!rows[i][j].is_number()) throw input_error(what + ": non-numeric entry");
            m(i, j) = rows[i][j].get<double>();
        }
    }
    return m;
}

inline json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

inline json vector_to_json(const Vector& v) {
    json out = json::array();
    for (int i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

// ---- polytope -------------------------------------------------------------

inline geom::Polytope read_polytope(const std::string& path) {
    json j = parse_file(path);
    reject_unknown_keys(j, {"dim", "vertices"}, "polytope");
    if (!j.contains("dim") || !j.contains("vertices"))
        throw input_error("polytope: need keys 'dim' and 'vertices'");
    int dim = j["dim"].get<int>();
    Matrix verts = matrix_from_json(j["vertices"], "polytope vertices");
    if (verts.cols() != dim) throw input_error("polytope: vertex dimension != dim");
    return geom::Polytope::build(verts);
}

inline json polytope_to_json(const geom::Polytope& p) {
    return json{{"dim", p.dim()}, {"vertices", matrix_to_json(p.vertices())}};
}

inline json facet_report(const geom::Polytope& p) {
    json normals = json::array(), offsets = json::array(), incidences = json::array();
    for (const auto& f : p.facets()) {
        normals.push_back(vector_to_json(f.normal));
        offsets.push_back(f.offset);
        incidences.push_back(f.vertices);
    }
    return json{{"normals", normals}, {"offsets", offsets}, {"incidences", incidences}};
}

// ---- groups ---------------------------------------------------------------

inline groups::FiniteOrthogonalGroup read_group(const std::string& path, int cap = 20000) {
    json j = parse_file(path);
    reject_unknown_keys(j, {"dim", "elements", "generators"}, "group");
    if (!j.contains("dim")) throw input_error("group: missing 'dim'");
    int dim = j["dim"].get<int>();
    std::vector<Matrix> gens;
    if (j.contains("generators")) {
        for (const auto& g : j["generators"]) gens.push_back(matrix_from_json(g, "generator"));
    } else if (j.contains("elements")) {
        for (const auto& g : j["elements"]) gens.push_back(matrix_from_json(g, "element"));
    } else {
        throw input_error("group: need 'generators' or 'elements'");
    }
    return groups::FiniteOrthogonalGroup::from_generators(dim, gens, cap);
}

// ---- cone frames ----------------------------------------------------------

inline cdv::SimplicialConeFrame read_frame(const std::string& path) {
    json j = parse_file(path);
    reject_unknown_keys(j, {"apex", "generators"}, "frame");
    if (!j.contains("apex") || !j.contains("generators"))
        throw input_error("frame: need keys 'apex' and 'generators'");
    Matrix gen_rows = matrix_from_json(j["generators"], "frame generators");
    Vector apex(gen_rows.cols());
    if (j["apex"].size() != static_cast<std::size_t>(gen_rows.cols()))
        throw input_error("frame: apex dimension mismatch");
    for (int i = 0; i < apex.size(); ++i) apex(i) = j["apex"][i].get<double>();
    return cdv::SimplicialConeFrame::create(apex, gen_rows.transpose());
}

// ---- reports --------------------------------------------------------------

inline json cdv_report_to_json(const cdv::CdVReport& rep) {
    json j;
    j["M"] = matrix_to_json(rep.m);
    bool constant = true;
    const double scale = std::max(1.0, rep.spectral_norm);
    for (int s = 1; s < rep.diagonal.size(); ++s) {
        if (std::abs(rep.diagonal(s) - rep.diagonal(0)) > 1e-8 * scale ||
            std::abs(rep.row_sums(s) - rep.row_sums(0)) > 1e-8 * scale)
            constant = false;
    }
    if (constant) {
        j["gamma"] = rep.diagonal.mean();
        j["delta"] = rep.row_sums.mean();
    } else {
        j["gamma"] = vector_to_json(rep.diagonal);
        j["delta"] = vector_to_json(rep.row_sums);
    }
    j["corank"] = rep.corank;
    j["kernel"] = matrix_to_json(rep.kernel);
    j["residuals"] = vector_to_json(rep.parallelism_residuals);
    j["axioms"] = {{"M1", rep.m1},
                   {"M2", rep.m2},
                   {"M3", rep.m3 == cdv::TriState::Skipped
                              ? json("skipped")
                              : json(rep.m3 == cdv::TriState::True)}};
    return j;
}

inline json spectral_summary_to_json(const walk::SpectralSummary& s) {
    json clusters = json::array();
    for (auto [value, mult] : s.clusters) clusters.push_back({{"value", value}, {"multiplicity", mult}});
    return json{{"eigenvalues", vector_to_json(s.eigenvalues)},
                {"clusters", clusters},
                {"lambda1", s.lambda1},
                {"gap", s.gap}};
}

// ---- coxeter --------------------------------------------------------------

inline Eigen::MatrixXi read_coxeter_matrix(const std::string& path) {
    json j = parse_file(path);
    reject_unknown_keys(j, {"rank", "m"}, "coxeter matrix");
    if (!j.contains("rank") || !j.contains("m"))
        throw input_error("coxeter matrix: need keys 'rank' and 'm'");
    int rank = j["rank"].get<int>();
    Matrix m = matrix_from_json(j["m"], "coxeter matrix");
    if (m.rows() != rank || m.cols() != rank)
        throw input_error("coxeter matrix: size != rank");
    return m.cast<int>();
}

// ---- CSV ------------------------------------------------------------------

class CsvWriter {
  public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void header(const std::vector<std::string>& cols) { row_strings(cols); }

    void row_strings(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            out_ << (i ? "," : "") << cells[i];
        out_ << '\n';
    }

    std::ostream& out() { return out_; }

  private:
    std::ostream& out_;
};

inline void write_moduli_csv(std::ostream& out, const std::vector<tetra::ModuliRecord>& records) {
    CsvWriter csv(out);
    csv.header({"a", "b", "c", "stratum", "x1", "x2", "x3", "lambda1", "lambda2", "lambda3",
                "lambda4", "equilateral", "V", "E", "F"});
    for (const auto& r : records) {
        csv.row_strings({format_double(r.a), format_double(r.b), format_double(r.c),
                         tetra::stratum_name(r.stratum), format_double(r.w.x1),
                         format_double(r.w.x2), format_double(r.w.x3),
                         format_double(r.lambda1), format_double(r.lambda2),
                         format_double(r.lambda3), format_double(r.lambda4),
                         r.equilateral ? "1" : "0", std::to_string(r.vertex_count),
                         std::to_string(r.edge_count), std::to_string(r.facet_count)});
    }
}

inline json moduli_record_to_json(const tetra::ModuliRecord& r) {
    json j{{"a", r.a},
           {"b", r.b},
           {"c", r.c},
           {"stratum", tetra::stratum_name(r.stratum)},
           {"regular", r.regular},
           {"x1", r.w.x1},
           {"x2", r.w.x2},
           {"x3", r.w.x3},
           {"equilateral", r.equilateral},
           {"edge_spread", r.edge_spread},
           {"V", r.vertex_count},
           {"E", r.edge_count},
           {"F", r.facet_count}};
    if (r.regular) {
        j["lambda1"] = r.lambda1;
        j["lambda2"] = r.lambda2;
        j["lambda3"] = r.lambda3;
        j["lambda4"] = r.lambda4;
    } else {
        j["lambda1"] = r.lambda1;
        j["lambda1_small_second_largest"] = r.lambda1_small_second;
        j["lambda1_small_smallest"] = r.lambda1_small_min;
        j["lambda1_continuous_extension"] = r.lambda1_extension;
    }
    return j;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot write file: " + path);
    out << content;
}

}  // namespace polyspectra::io

#endif

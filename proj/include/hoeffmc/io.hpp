#pragma once

// File formats: chain/function/measure JSON, graph edge lists, and CSV tables whose
// header carries a run manifest and its hash.

#include "hoeffmc/bounds.hpp"
#include "hoeffmc/chain.hpp"
#include "hoeffmc/errors.hpp"
#include "hoeffmc/learnlab.hpp"
#include "hoeffmc/step_function.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace hoeffmc {

inline constexpr const char* kToolVersion = "0.3.0";

using Json = nlohmann::json;

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::ParseError, "cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        fail(ErrorKind::ParseError, path + ": " + e.what());
    }
}

namespace detail {

inline std::vector<double> number_array(const Json& j, const std::string& what) {
    if (!j.is_array()) fail(ErrorKind::ParseError, what + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) fail(ErrorKind::ParseError, what + " must contain only numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

inline Vector json_vector(const Json& j, const std::string& what) {
    const auto xs = number_array(j, what);
    return to_vector(xs);
}

inline Matrix json_matrix(const Json& j, const std::string& what) {
    if (!j.is_array() || j.empty()) fail(ErrorKind::ParseError, what + " must be a non-empty array of rows");
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto row = number_array(j[i], what + " row");
        if (row.size() != cols) fail(ErrorKind::ParseError, what + " rows differ in length");
        for (std::size_t k = 0; k < cols; ++k) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = row[k];
    }
    return m;
}

}  // namespace detail

/// {"P": [[...]], "labels": [...], "pi": [...]}. pi is recomputed from P; a supplied pi is
/// used only when P alone does not determine it (and is then checked against P).
inline FiniteChain chain_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("P")) fail(ErrorKind::ParseError, "chain JSON needs a \"P\" matrix");
    Matrix P = detail::json_matrix(j.at("P"), "P");
    std::vector<std::string> labels;
    if (j.contains("labels")) {
        try {
            labels = j.at("labels").get<std::vector<std::string>>();
        } catch (const Json::exception&) {
            fail(ErrorKind::ParseError, "labels must be strings");
        }
        if (static_cast<Eigen::Index>(labels.size()) != P.rows()) {
            fail(ErrorKind::ParseError, "label count differs from the state count");
        }
    }
    try {
        return build_chain(P, labels);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::DegenerateStationary || !j.contains("pi")) throw;
    }
    return FiniteChain::with_stationary(std::move(P), detail::json_vector(j.at("pi"), "pi"), std::move(labels));
}

inline FiniteChain load_chain(const std::string& path) { return chain_from_json(read_json_file(path)); }

inline Json chain_to_json(const FiniteChain& chain) {
    Json P = Json::array();
    for (Eigen::Index i = 0; i < chain.d(); ++i) P.push_back(to_std(chain.P().row(i).transpose()));
    Json j = {{"P", P}, {"pi", to_std(chain.pi())}};
    if (!chain.labels().empty()) j["labels"] = chain.labels();
    return j;
}

namespace detail {

inline StepFunction step_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("values")) fail(ErrorKind::ParseError, "function entry needs \"values\"");
    Vector v = json_vector(j.at("values"), "values");
    if (j.contains("range")) {
        const auto r = number_array(j.at("range"), "range");
        if (r.size() != 2) fail(ErrorKind::ParseError, "range must be [a, b]");
        return StepFunction(std::move(v), r[0], r[1]);
    }
    return StepFunction::tight(std::move(v));
}

}  // namespace detail

struct FunctionSpec {
    std::vector<StepFunction> steps;
    /// All steps share one function (required by the identical-f theorems).
    bool identical = false;
};

/// Either {"values": [...], "range": [a, b], "n": 10} for one function repeated n times, or
/// {"steps": [{"values": [...], "range": [a, b]}, ...]} for per-step functions.
inline FunctionSpec functions_from_json(const Json& j) {
    FunctionSpec spec;
    if (j.contains("steps")) {
        const auto& steps = j.at("steps");
        if (!steps.is_array() || steps.empty()) fail(ErrorKind::ParseError, "\"steps\" must be a non-empty array");
        for (const auto& s : steps) spec.steps.push_back(detail::step_from_json(s));
        return spec;
    }
    const StepFunction f = detail::step_from_json(j);
    const long n = j.value("n", 1L);
    if (n < 1) fail(ErrorKind::ParseError, "\"n\" must be at least 1");
    spec.steps.assign(static_cast<std::size_t>(n), f);
    spec.identical = true;
    return spec;
}

inline FunctionSpec load_functions(const std::string& path) { return functions_from_json(read_json_file(path)); }

/// {"nu": [...]} or a bare array.
inline Vector load_measure(const std::string& path) {
    const Json j = read_json_file(path);
    if (j.is_object() && j.contains("nu")) return detail::json_vector(j.at("nu"), "nu");
    return detail::json_vector(j, "nu");
}

/// "u v" per line, 0-based; '#' starts a comment. A "# nodes: N" line fixes the node count,
/// otherwise it is one more than the largest endpoint.
inline Graph parse_edge_list(std::istream& in) {
    Graph g;
    int declared = -1;
    int largest = -1;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            const std::string comment = line.substr(hash + 1);
            std::istringstream cs(comment);
            std::string key;
            if (cs >> key && key == "nodes:") cs >> declared;
            line.resize(hash);
        }
        std::istringstream ls(line);
        int u = 0, v = 0;
        if (!(ls >> u)) continue;
        if (!(ls >> v)) fail(ErrorKind::ParseError, "edge list line " + std::to_string(lineno) + " needs two nodes");
        std::string extra;
        if (ls >> extra) fail(ErrorKind::ParseError, "edge list line " + std::to_string(lineno) + " has extra fields");
        if (u < 0 || v < 0) fail(ErrorKind::ParseError, "node ids must be non-negative");
        g.edges.emplace_back(u, v);
        largest = std::max({largest, u, v});
    }
    g.n_nodes = declared >= 0 ? declared : largest + 1;
    if (declared >= 0 && largest >= declared) fail(ErrorKind::ParseError, "edge endpoint exceeds the declared node count");
    return g;
}

inline Graph load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::ParseError, "cannot open " + path);
    return parse_edge_list(in);
}

/// JSON number, with non-finite values written as strings ("inf", "-inf", "nan").
inline Json json_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

inline Json summary_to_json(const SpectralSummary& s) {
    Json j = {{"lambda_abs", s.lambda_abs},
              {"lambda_right", s.lambda_right},
              {"lambda_inf_estimate", s.lambda_inf_estimate},
              {"k_used", s.k_used},
              {"k_sequence", s.k_sequence}};
    j["alpha_abs"] = s.alpha_abs ? Json(*s.alpha_abs) : Json(nullptr);
    j["alpha_right"] = s.alpha_right ? Json(*s.alpha_right) : Json(nullptr);
    return j;
}

inline Json report_to_json(const BoundReport& r) {
    return {{"theorem", std::string(theorem_name(r.theorem))},
            {"variance_proxy", json_number(r.variance_proxy)},
            {"prefactor", json_number(r.prefactor)},
            {"t", r.t},
            {"log_mgf_bound", json_number(r.log_mgf_bound)},
            {"mgf_bound", json_number(r.mgf_bound)},
            {"eps", r.eps},
            {"log_tail_bound", json_number(r.log_tail_bound)},
            {"tail_bound", json_number(r.tail_bound)},
            {"vacuous", r.vacuous},
            {"inputs", r.inputs_echo}};
}

inline Json plan_to_json(const McmcPlan& p) {
    return {{"n0", p.n0},
            {"p", json_number(p.p)},
            {"q", p.q},
            {"c_p", json_number(p.c_p)},
            {"alpha", p.alpha},
            {"n_closed_form", p.n_closed_form},
            {"n_required", p.n_required},
            {"tail_at_n", json_number(p.tail_at_n)},
            {"tail_at_n_minus_1", json_number(p.tail_at_n_minus_1)}};
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

struct RunManifest {
    std::string command;
    Json inputs = Json::object();
    std::uint64_t seed = 0;
    std::vector<std::string> artifacts;
    std::string version = kToolVersion;

    Json to_json() const {
        return {{"command", command}, {"inputs", inputs}, {"seed", seed}, {"artifacts", artifacts}, {"version", version}};
    }

    /// Hash of the compact JSON form.
    std::string hash() const { return hex64(fnv1a64(to_json().dump())); }
};

/// Doubles with 17 significant digits; non-finite values as nan, inf, -inf.
inline std::string cell(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

inline std::string cell(long v) { return std::to_string(v); }
inline std::string cell(int v) { return std::to_string(v); }
inline std::string cell(std::uint64_t v) { return std::to_string(v); }
inline std::string cell(bool v) { return v ? "1" : "0"; }
inline std::string cell(std::string v) { return v; }

/// CSV with a two-line comment header: the manifest JSON and its hash.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, const RunManifest& manifest, std::vector<std::string> columns)
        : out_(out), columns_(std::move(columns)) {
        out_ << "# manifest: " << manifest.to_json().dump() << '\n';
        out_ << "# manifest_hash: " << manifest.hash() << '\n';
        write_fields(columns_);
    }

    void write(const std::vector<std::string>& cells) {
        if (cells.size() != columns_.size()) {
            fail(ErrorKind::InvalidInput, "CSV row has " + std::to_string(cells.size()) + " cells, expected " +
                                              std::to_string(columns_.size()));
        }
        write_fields(cells);
    }

private:
    void write_fields(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ << ',';
            const bool quote = fields[i].find_first_of(",\"\n") != std::string::npos;
            if (quote) {
                out_ << '"';
                for (char c : fields[i]) {
                    if (c == '"') out_ << '"';
                    out_ << c;
                }
                out_ << '"';
            } else {
                out_ << fields[i];
            }
        }
        out_ << '\n';
    }

    std::ostream& out_;
    std::vector<std::string> columns_;
};

}  // namespace hoeffmc

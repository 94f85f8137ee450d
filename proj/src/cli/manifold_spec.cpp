// SPDX-License-Identifier: MIT
#include "statgeom/cli/manifold_spec.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "statgeom/error.hpp"
#include "statgeom/expr/parser.hpp"
#include "statgeom/tensor/tensor.hpp"

namespace statgeom::cli {

using Json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ValidationError(where + ": " + what);
}

const Json& require(const Json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) fail(where, std::string("missing field '") + key + "'");
    return obj.at(key);
}

double as_number(const Json& v, const std::string& where) {
    if (!v.is_number()) fail(where, "expected a number");
    return v.get<double>();
}

std::string as_string(const Json& v, const std::string& where) {
    if (!v.is_string()) fail(where, "expected a string");
    return v.get<std::string>();
}

std::optional<bool> optional_bool(const Json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) return std::nullopt;
    const Json& v = obj.at(key);
    if (!v.is_boolean()) fail(where + "." + key, "expected a boolean");
    return v.get<bool>();
}

std::map<std::string, double> parameter_map(const ManifoldSpec& spec) {
    std::map<std::string, double> out;
    for (const auto& [k, v] : spec.parameters) out[k] = v;
    return out;
}

void check_expression(const ManifoldSpec& spec, const std::string& source, const std::string& where) {
    try {
        (void)expr::parse_expression(source, spec.coordinates, parameter_map(spec));
    } catch (const Error& e) {
        fail(where, e.what());
    }
}

// Decodes a key of 1-based single-digit indices.
std::vector<int> decode_key(const std::string& key, std::size_t arity, int dim, const std::string& where) {
    if (key.size() != arity) fail(where, "key '" + key + "' must have " + std::to_string(arity) + " digits");
    std::vector<int> idx;
    for (char c : key) {
        if (c < '1' || c > '9' || c - '0' > dim) fail(where, "key '" + key + "' has an index outside 1.." + std::to_string(dim));
        idx.push_back(c - '1');
    }
    return idx;
}

void put_optional(Json& obj, const char* key, const std::optional<bool>& v) {
    if (v) obj[key] = *v;
}

}  // namespace

bool ExpectedFlags::empty() const {
    return !codazzi && !ric_symmetric && !conjugate_symmetric && !equiaffine && !semi_equiaffine &&
           !constant_curvature && !tchebychev_parallel && lambda_candidates.empty();
}

std::string metric_key(int i, int j) {
    if (i < j) std::swap(i, j);
    return std::string{static_cast<char>('1' + i), static_cast<char>('1' + j)};
}

std::string cubic_key(int i, int j, int k) {
    std::array<int, 3> idx{i, j, k};
    std::sort(idx.begin(), idx.end());
    return std::string{static_cast<char>('1' + idx[0]), static_cast<char>('1' + idx[1]), static_cast<char>('1' + idx[2])};
}

void validate_spec(const ManifoldSpec& spec) {
    const int m = spec.dim;
    if (m < 1 || m > tensor::kMaxDim) fail("dim", "must be in 1..8");
    if (static_cast<int>(spec.coordinates.size()) != m) fail("coordinates", "expected " + std::to_string(m) + " names");
    std::set<std::string> names;
    for (const auto& c : spec.coordinates)
        if (!names.insert(c).second) fail("coordinates", "duplicate name '" + c + "'");
    for (const auto& [p, v] : spec.parameters)
        if (!names.insert(p).second) fail("parameters", "name '" + p + "' is already used");

    for (const auto& [key, src] : spec.metric) {
        const auto idx = decode_key(key, 2, m, "metric");
        if (idx[0] < idx[1]) fail("metric", "key '" + key + "' is not lower-triangular (use '" + metric_key(idx[0], idx[1]) + "')");
        check_expression(spec, src, "metric." + key);
    }
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= i; ++j)
            if (!spec.metric.contains(metric_key(i, j))) fail("metric", "missing entry '" + metric_key(i, j) + "'");

    for (const auto& [key, src] : spec.cubic) {
        const auto idx = decode_key(key, 3, m, "cubic");
        if (!std::is_sorted(idx.begin(), idx.end()))
            fail("cubic", "key '" + key + "' is not sorted; total symmetry is implied, use '" + cubic_key(idx[0], idx[1], idx[2]) + "'");
        check_expression(spec, src, "cubic." + key);
    }
    if (spec.tchebychev_potential) check_expression(spec, *spec.tchebychev_potential, "tchebychev_potential");
    if (spec.probe) check_expression(spec, *spec.probe, "probe");
    for (std::size_t i = 0; i < spec.eigenfunctions.size(); ++i)
        check_expression(spec, spec.eigenfunctions[i].expression, "eigenfunctions[" + std::to_string(i) + "]");

    if (static_cast<int>(spec.sample.box.size()) != m) fail("sample.box", "expected one interval per coordinate");
    for (const auto& [lo, hi] : spec.sample.box)
        if (!(lo < hi)) fail("sample.box", "intervals must satisfy lo < hi");
    if (spec.sample.count < 1) fail("sample.count", "must be positive");
    if (spec.sample.strategy != "uniform" && spec.sample.strategy != "grid")
        fail("sample.strategy", "must be 'uniform' or 'grid'");
}

ManifoldSpec parse_spec(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ValidationError(std::string("spec is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) fail("spec", "top level must be an object");

    ManifoldSpec spec;
    spec.name = as_string(require(doc, "name", "spec"), "name");
    const Json& dim = require(doc, "dim", "spec");
    if (!dim.is_number_integer()) fail("dim", "expected an integer");
    spec.dim = dim.get<int>();
    for (const auto& c : require(doc, "coordinates", "spec")) spec.coordinates.push_back(as_string(c, "coordinates"));
    if (doc.contains("parameters")) {
        const Json& params = doc.at("parameters");
        if (!params.is_object()) fail("parameters", "expected an object");
        for (const auto& [k, v] : params.items()) spec.parameters.emplace_back(k, as_number(v, "parameters." + k));
    }
    const Json& metric = require(doc, "metric", "spec");
    if (!metric.is_object()) fail("metric", "expected an object");
    for (const auto& [k, v] : metric.items()) spec.metric[k] = as_string(v, "metric." + k);
    if (doc.contains("cubic")) {
        const Json& cubic = doc.at("cubic");
        if (!cubic.is_object()) fail("cubic", "expected an object");
        for (const auto& [k, v] : cubic.items()) spec.cubic[k] = as_string(v, "cubic." + k);
    }
    if (doc.contains("tchebychev_potential"))
        spec.tchebychev_potential = as_string(doc.at("tchebychev_potential"), "tchebychev_potential");
    if (doc.contains("probe")) spec.probe = as_string(doc.at("probe"), "probe");
    if (doc.contains("eigenfunctions")) {
        for (const auto& e : doc.at("eigenfunctions")) {
            Eigenfunction f;
            f.expression = as_string(require(e, "expression", "eigenfunctions"), "eigenfunctions.expression");
            f.eigenvalue = as_number(require(e, "eigenvalue", "eigenfunctions"), "eigenfunctions.eigenvalue");
            spec.eigenfunctions.push_back(std::move(f));
        }
    }
    const Json& sample = require(doc, "sample", "spec");
    for (const auto& iv : require(sample, "box", "sample")) {
        if (!iv.is_array() || iv.size() != 2) fail("sample.box", "each interval must be [lo, hi]");
        spec.sample.box.emplace_back(as_number(iv[0], "sample.box"), as_number(iv[1], "sample.box"));
    }
    if (sample.contains("count")) {
        if (!sample.at("count").is_number_integer()) fail("sample.count", "expected an integer");
        spec.sample.count = sample.at("count").get<int>();
    }
    if (sample.contains("seed")) {
        if (!sample.at("seed").is_number_unsigned()) fail("sample.seed", "expected a non-negative integer");
        spec.sample.seed = sample.at("seed").get<std::uint64_t>();
    }
    if (sample.contains("strategy")) spec.sample.strategy = as_string(sample.at("strategy"), "sample.strategy");

    if (doc.contains("expected")) {
        const Json& ex = doc.at("expected");
        if (!ex.is_object()) fail("expected", "expected an object");
        spec.expected.codazzi = optional_bool(ex, "codazzi", "expected");
        spec.expected.ric_symmetric = optional_bool(ex, "ric_symmetric", "expected");
        spec.expected.conjugate_symmetric = optional_bool(ex, "conjugate_symmetric", "expected");
        spec.expected.equiaffine = optional_bool(ex, "equiaffine", "expected");
        spec.expected.semi_equiaffine = optional_bool(ex, "semi_equiaffine", "expected");
        spec.expected.constant_curvature = optional_bool(ex, "constant_curvature", "expected");
        spec.expected.tchebychev_parallel = optional_bool(ex, "tchebychev_parallel", "expected");
        if (ex.contains("lambda_candidates"))
            for (const auto& v : ex.at("lambda_candidates"))
                spec.expected.lambda_candidates.push_back(as_number(v, "expected.lambda_candidates"));
    }
    validate_spec(spec);
    return spec;
}

ManifoldSpec load_spec(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open spec file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_spec(ss.str());
}

std::string dump_spec(const ManifoldSpec& spec) {
    Json doc;
    doc["name"] = spec.name;
    doc["dim"] = spec.dim;
    doc["coordinates"] = spec.coordinates;
    Json params = Json::object();
    for (const auto& [k, v] : spec.parameters) params[k] = v;
    doc["parameters"] = params;
    Json metric = Json::object();
    for (const auto& [k, v] : spec.metric) metric[k] = v;
    doc["metric"] = metric;
    Json cubic = Json::object();
    for (const auto& [k, v] : spec.cubic) cubic[k] = v;
    doc["cubic"] = cubic;
    if (spec.tchebychev_potential) doc["tchebychev_potential"] = *spec.tchebychev_potential;
    if (spec.probe) doc["probe"] = *spec.probe;
    if (!spec.eigenfunctions.empty()) {
        Json eig = Json::array();
        for (const auto& f : spec.eigenfunctions) eig.push_back({{"expression", f.expression}, {"eigenvalue", f.eigenvalue}});
        doc["eigenfunctions"] = eig;
    }
    Json box = Json::array();
    for (const auto& [lo, hi] : spec.sample.box) box.push_back({lo, hi});
    doc["sample"] = {{"box", box}, {"count", spec.sample.count}, {"seed", spec.sample.seed}, {"strategy", spec.sample.strategy}};
    if (!spec.expected.empty()) {
        Json ex = Json::object();
        put_optional(ex, "codazzi", spec.expected.codazzi);
        put_optional(ex, "ric_symmetric", spec.expected.ric_symmetric);
        put_optional(ex, "conjugate_symmetric", spec.expected.conjugate_symmetric);
        put_optional(ex, "equiaffine", spec.expected.equiaffine);
        put_optional(ex, "semi_equiaffine", spec.expected.semi_equiaffine);
        put_optional(ex, "constant_curvature", spec.expected.constant_curvature);
        put_optional(ex, "tchebychev_parallel", spec.expected.tchebychev_parallel);
        if (!spec.expected.lambda_candidates.empty()) ex["lambda_candidates"] = spec.expected.lambda_candidates;
        doc["expected"] = ex;
    }
    return doc.dump(2) + "\n";
}

void save_spec(const ManifoldSpec& spec, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write spec file '" + path + "'");
    out << dump_spec(spec);
}

}  // namespace statgeom::cli

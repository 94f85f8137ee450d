// SPDX-License-Identifier: MIT
#include "statgeom/cli/diagnostics.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <iomanip>
#include <sstream>
#include <thread>

#include <json.hpp>
#include <openssl/evp.h>

#include "statgeom/cli/sampling.hpp"
#include "statgeom/error.hpp"
#include "statgeom/expr/evaluate.hpp"
#include "statgeom/expr/parser.hpp"

namespace statgeom::cli {

using expr::Jet;
using geometry::GeometryFrame;
using statistical::StatisticalFrame;
using tensor::D;
using tensor::JetTensor;
using tensor::PointTensor;
using tensor::U;
using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Compilation and per-point frames

const std::optional<expr::Expression>& CompiledSpec::cubic_at(int i, int j, int k) const {
    const auto m = static_cast<std::size_t>(spec.dim);
    return cubic[(static_cast<std::size_t>(i) * m + static_cast<std::size_t>(j)) * m + static_cast<std::size_t>(k)];
}

std::string default_probe(const std::vector<std::string>& coordinates) {
    const std::size_t m = coordinates.size();
    std::string out;
    for (std::size_t i = 0; i < m; ++i)
        out += "sin(" + coordinates[i] + ")*cos(" + coordinates[(i + 1) % m] + ")+";
    return out + coordinates.front() + "*" + coordinates.front() + "*" + coordinates.back();
}

CompiledSpec compile_spec(const ManifoldSpec& spec) {
    validate_spec(spec);
    CompiledSpec c;
    c.spec = spec;
    std::map<std::string, double> params(spec.parameters.begin(), spec.parameters.end());
    auto parse = [&](const std::string& src) { return expr::parse_expression(src, spec.coordinates, params); };
    const int m = spec.dim;
    c.metric.assign(static_cast<std::size_t>(m), std::vector<expr::Expression>(static_cast<std::size_t>(m)));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= i; ++j) {
            auto e = parse(spec.metric.at(metric_key(i, j)));
            c.metric[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = e;
            c.metric[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = e;
        }
    c.cubic.assign(static_cast<std::size_t>(m * m * m), std::nullopt);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                const auto it = spec.cubic.find(cubic_key(i, j, k));
                if (it != spec.cubic.end())
                    c.cubic[static_cast<std::size_t>((i * m + j) * m + k)] = parse(it->second);
            }
    if (spec.tchebychev_potential) c.potential = parse(*spec.tchebychev_potential);
    c.probe = parse(spec.probe ? *spec.probe : default_probe(spec.coordinates));
    for (const auto& f : spec.eigenfunctions) c.eigenfunctions.push_back(parse(f.expression));
    return c;
}

namespace {

using JetFn = std::function<Jet(const expr::Expression&)>;

PointFrames frames_from(const CompiledSpec& c, std::span<const double> point, const JetFn& jet) {
    const int m = c.dim();
    JetTensor g(m, {D, D});
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= i; ++j) {
            const Jet v = jet(c.metric[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
            g(i, j) = v;
            g(j, i) = v;
        }
    JetTensor C(m, {D, D, D});
    std::map<std::string, Jet> cache;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                const auto& e = c.cubic_at(i, j, k);
                if (!e) continue;
                const std::string key = cubic_key(i, j, k);
                auto it = cache.find(key);
                if (it == cache.end()) it = cache.emplace(key, jet(*e)).first;
                C(i, j, k) = it->second;
            }
    PointFrames f;
    f.geo = geometry::build_geometry_frame(std::vector<double>(point.begin(), point.end()), std::move(g));
    f.st = statistical::build_statistical_frame(f.geo, std::move(C));
    return f;
}

std::string format_point(std::span<const double> p) {
    std::ostringstream os;
    os << std::setprecision(17) << "(";
    for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
    os << ")";
    return os.str();
}

}  // namespace

PointFrames evaluate_point(const CompiledSpec& spec, std::span<const double> point, int order) {
    return frames_from(spec, point, [&](const expr::Expression& e) { return expr::eval_jet(e, point, order); });
}

PointFrames evaluate_point_fd(const CompiledSpec& spec, std::span<const double> point, double h) {
    return frames_from(spec, point, [&](const expr::Expression& e) { return expr::fd_jet(e, point, 2, h); });
}

// ---------------------------------------------------------------------------
// Per-point measurements

namespace {

struct PointRecord {
    // identities
    double codazzi = 0, metricity = 0, christoffel_symmetry = 0, first_bianchi = 0, cubic_roundtrip = 0;
    double conjugate_duality = 0, levi_civita_mean = 0, conjugation_involution = 0;
    double conjugate_curvature_adjoint = 0, interchange_sum = 0, bochner_gradient = 0;
    double ricci_closedness_identity = 0, tension_identity = 0, difftension = 0, bitension_paths = 0;
    double main1_difference = 0, main1_sum = 0, eigenfunction = 0, parallel_volume = 0, trace_factor = 0;
    // flag inputs
    double ricci_asymmetry = 0, closedness = 0, r_minus_l = 0, r_minus_conjugate = 0, nabla_k_asymmetry = 0;
    double tchebychev = 0, operator_norm = 0, t1 = 0, t2 = 0, bitension = 0;
    // gated quantities
    double lapc = 0, geodesic = 0, tchebychev_norm = 0, ricci_tt = 0, parallel_combination = 0;
    double rho = 0, tt = 0, kk = 0;
    double trace_num = 0, trace_den = 0;
    PointTensor R;
    PointTensor g;
};

double curvature_adjoint_residual(const PointTensor& g, const PointTensor& R, const PointTensor& Rbar) {
    const PointTensor low = tensor::lower_index(R, 0, g);
    const PointTensor low_bar = tensor::lower_index(Rbar, 0, g);
    const int m = g.dim();
    double worst = 0.0;
    for (int w = 0; w < m; ++w)
        for (int x = 0; x < m; ++x)
            for (int y = 0; y < m; ++y)
                for (int z = 0; z < m; ++z)
                    worst = std::max(worst, std::abs(low_bar(w, x, y, z) + low(z, x, y, w)));
    return worst;
}

double bochner_residual(const GeometryFrame& geo, const JetTensor& f) {
    const int m = geo.dim();
    const JetTensor V = geometry::gradient(f, geo.inverse);
    const PointTensor d_div = tensor::values(geometry::partial_derivative(geometry::divergence(V, geo.christoffel)));
    const PointTensor lap = tensor::values(geometry::rough_laplacian(V, geo.christoffel, geo.inverse));
    const PointTensor v = tensor::values(V);
    const PointTensor g = geo.g();
    double worst = 0.0;
    for (int x = 0; x < m; ++x) {
        double glap = 0.0;
        double ric = 0.0;
        for (int a = 0; a < m; ++a) {
            glap += g(x, a) * lap(a);
            ric += geo.ricci(a, x) * v(a);
        }
        worst = std::max(worst, std::abs(d_div(x) - glap + ric));
    }
    return worst;
}

PointRecord measure(const CompiledSpec& c, std::span<const double> point, double tol) {
    const int m = c.dim();
    const PointFrames frames = evaluate_point(c, point, 3);
    const GeometryFrame& geo = frames.geo;
    const StatisticalFrame& st = frames.st;
    PointRecord r;
    const PointTensor g = geo.g();
    const PointTensor g_inv = geo.g_inv();
    const PointTensor R = tensor::values(st.curvature);
    const PointTensor Rbar = tensor::values(st.conjugate_curvature);
    const PointTensor A = tensor::values(st.connection);
    const PointTensor Abar = tensor::values(st.conjugate);
    const PointTensor Gamma = geo.gamma();

    r.codazzi = statistical::codazzi_residual(geo.metric, st.connection);
    r.metricity = geometry::metricity_residual(geo, geo.christoffel);
    r.christoffel_symmetry = tensor::max_asymmetry(Gamma, 1, 2);
    r.first_bianchi = std::max({geometry::first_bianchi_residual(geo.curvature()),
                                geometry::first_bianchi_residual(R), geometry::first_bianchi_residual(Rbar)});
    r.cubic_roundtrip = tensor::max_abs_difference(
        tensor::values(statistical::cubic_from_difference(geo.metric, st.difference)), tensor::values(st.cubic));

    const PointTensor dual = tensor::values(statistical::conjugate_from_duality(geo.metric, geo.inverse, st.connection));
    r.conjugate_duality = tensor::max_abs_difference(dual, Abar);
    PointTensor mean = A + dual;
    mean *= 0.5;
    r.levi_civita_mean = tensor::max_abs_difference(mean, Gamma);
    {
        JetTensor minus_c = st.cubic;
        for (auto& v : minus_c.data()) v = -v;
        const JetTensor flipped = geo.christoffel + statistical::difference_tensor(geo.inverse, minus_c);
        const PointTensor back = tensor::values(statistical::conjugate_from_duality(geo.metric, geo.inverse, flipped));
        r.conjugation_involution = tensor::max_abs_difference(back, A);
    }
    r.conjugate_curvature_adjoint = curvature_adjoint_residual(g, R, Rbar);
    r.interchange_sum = tensor::max_abs_difference(st.interchange + st.conjugate_interchange, R + Rbar);

    {
        JetTensor f = JetTensor::scalar(m, expr::eval_jet(c.probe, point, 3));
        r.bochner_gradient = bochner_residual(geo, f);
    }
    const auto sym = statistical::ricci_symmetry(geo, st);
    r.ricci_closedness_identity = sym.identity_residual;
    r.ricci_asymmetry = sym.ricci_asymmetry;
    r.closedness = sym.closedness_defect;

    const maps::IdentityMapReport id = maps::identity_map_report(geo, st);
    r.tension_identity = id.tension_identity;
    r.difftension = id.difftension;
    r.bitension_paths = id.path_agreement;
    r.main1_difference = id.main1_difference;
    r.main1_sum = id.main1_sum;
    r.t1 = tensor::max_abs(id.t1);
    r.t2 = tensor::max_abs(id.t2);
    r.bitension = std::max(tensor::max_abs(id.bitension), tensor::max_abs(id.conjugate_bitension));

    for (std::size_t e = 0; e < c.eigenfunctions.size(); ++e) {
        const JetTensor f = JetTensor::scalar(m, expr::eval_jet(c.eigenfunctions[e], point, 3));
        const double lap = tensor::values(geometry::laplacian_scalar(f, geo.christoffel, geo.inverse)).data()[0];
        const double value = f.data()[0].value();
        const double lambda = c.spec.eigenfunctions[e].eigenvalue;
        const double scale = lambda != 0.0 ? std::abs(lambda) * (1.0 + std::abs(value)) : 1.0;
        r.eigenfunction = std::max(r.eigenfunction, std::abs(lap - lambda * value) / scale);
    }
    if (c.potential) {
        const JetTensor phi = JetTensor::scalar(m, expr::eval_jet(*c.potential, point, 3));
        r.parallel_volume = statistical::parallel_volume_residual(geo, st, phi);
    }
    const auto trace = statistical::cubic_trace_factor(geo, st);
    r.trace_factor = trace.residual;
    {
        const PointTensor eta = tensor::values(st.tchebychev_form);
        const PointTensor tr = tensor::trace_g(tensor::values(st.cubic), 0, 1, g_inv);
        for (std::size_t i = 0; i < tr.size(); ++i) {
            r.trace_num += eta.data()[i] * tr.data()[i];
            r.trace_den += tr.data()[i] * tr.data()[i];
        }
    }

    const auto cs = statistical::conjugate_symmetry_residuals(st);
    r.r_minus_l = cs.r_minus_l;
    r.r_minus_conjugate = cs.r_minus_conjugate;
    r.nabla_k_asymmetry = cs.nabla_k_asymmetry;
    r.tchebychev = tensor::max_abs(st.T());
    r.operator_norm = tensor::max_abs(tensor::values(st.tchebychev_operator));

    r.lapc = statistical::lapc_terms(geo, st).residual();
    const auto geo_pot = statistical::geodesic_potential_check(geo, st);
    r.tchebychev_norm = geo_pot.tchebychev_norm;
    r.geodesic = geo_pot.tchebychev_norm > tol ? geo_pot.residual : 0.0;
    const auto crit = statistical::parallel_criterion(geo, st);
    r.ricci_tt = crit.ricci_tt;
    r.parallel_combination = std::abs(crit.combination);

    const auto pm = geo.point_metric();
    const PointTensor T = st.T();
    const PointTensor K = st.K();
    r.rho = geo.scalar_curvature;
    r.tt = tensor::inner(pm, T, T);
    r.kk = tensor::inner(pm, K, K);
    r.R = R;
    r.g = g;
    return r;
}

template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
    unsigned workers = threads ? threads : std::max(1U, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) fn(i);
        });
    for (auto& t : pool) t.join();
}

/// Evaluate `fn` at every point; errors are collected per slot and the one
/// with the smallest index is rethrown, so failures are deterministic too.
template <class Record, class Fn>
std::vector<Record> map_points(const std::vector<std::vector<double>>& points, unsigned threads, Fn&& fn) {
    std::vector<Record> out(points.size());
    std::vector<std::exception_ptr> errors(points.size());
    parallel_for(points.size(), threads, [&](std::size_t i) {
        try {
            out[i] = fn(points[i]);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    });
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!errors[i]) continue;
        try {
            std::rethrow_exception(errors[i]);
        } catch (const DomainError& e) {
            throw ValidationError("domain violation at sample point " + format_point(points[i]) + ": " + e.what());
        } catch (const MetricError& e) {
            throw ValidationError("metric is not positive definite at sample point " + format_point(points[i]) + ": " +
                                  e.what());
        }
    }
    return out;
}

struct Reduction {
    double max = 0.0;
    std::size_t argmax = 0;
};

template <class Get>
Reduction reduce(const std::vector<PointRecord>& records, Get&& get) {
    Reduction r;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const double v = get(records[i]);
        if (v > r.max || std::isnan(v)) {
            r.max = v;
            r.argmax = i;
            if (std::isnan(v)) break;
        }
    }
    return r;
}

bool matches(TriState actual, bool expected) {
    return (actual == TriState::True && expected) || (actual == TriState::False && !expected);
}

}  // namespace

// ---------------------------------------------------------------------------
// Report

std::string_view to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "fail";
        case CheckStatus::NotApplicable: return "not-applicable";
    }
    return "not-applicable";
}

const CheckResult* DiagnosticsReport::check(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

std::optional<TriState> DiagnosticsReport::flag(const std::string& name) const {
    for (const auto& [k, v] : flags)
        if (k == name) return v;
    return std::nullopt;
}

bool DiagnosticsReport::passed() const {
    for (const auto& c : checks)
        if (c.status == CheckStatus::Fail) return false;
    for (const auto& e : expected)
        if (!e.matches) return false;
    return true;
}

std::string DiagnosticsReport::to_json(bool include_runtime) const {
    Json doc;
    doc["schema"] = 1;
    doc["spec"] = Json::parse(dump_spec(spec));
    doc["spec_hash"] = spec_hash;
    doc["tolerance"] = tolerance;
    Json box = Json::array();
    for (const auto& [lo, hi] : sample.box) box.push_back({lo, hi});
    doc["samples"] = {{"strategy", sample.strategy}, {"count", sample.count}, {"seed", sample.seed},
                      {"corners", std::size_t{1} << sample.box.size()}, {"points", point_count}, {"box", box}};
    Json checks_json = Json::object();
    for (const auto& c : checks) {
        checks_json[c.name] = {{"max_residual", c.max_residual},
                               {"argmax_point", c.argmax_point},
                               {"status", std::string(to_string(c.status))},
                               {"tolerance", c.tolerance}};
    }
    doc["checks"] = checks_json;
    if (curvature_fit)
        doc["lambda_star"] = {{"value", curvature_fit->lambda}, {"residual", curvature_fit->residual}};
    else
        doc["lambda_star"] = nullptr;
    Json flags_json = Json::object();
    for (const auto& [k, v] : flags) flags_json[k] = std::string(statgeom::to_string(v));
    doc["flags"] = flags_json;
    doc["main1_flag_equivalence"] = {
        {"semi_equiaffine", std::string(statgeom::to_string(semi_equiaffine.semi_equiaffine))},
        {"bitension_vanishing", std::string(statgeom::to_string(semi_equiaffine.bitension_vanishing))},
        {"agree", std::string(statgeom::to_string(semi_equiaffine.equivalence))},
        {"t1_max", semi_equiaffine.t1_max},
        {"t2_max", semi_equiaffine.t2_max},
        {"bitension_max", semi_equiaffine.bitension_max}};
    Json expected_json = Json::object();
    for (const auto& e : expected)
        expected_json[e.flag] = {{"expected", e.expected}, {"actual", e.actual}, {"matches", e.matches}};
    doc["expected"] = expected_json;
    doc["tchebychev_trace_factor"] = trace_factor;
    doc["passed"] = passed();
    if (include_runtime) doc["runtime_seconds"] = runtime_seconds;
    return doc.dump(2) + "\n";
}

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    return os.str();
}

DiagnosticsReport run_diagnostics(const ManifoldSpec& input, const RunOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    const double tol = options.tolerance;
    if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
    const CompiledSpec c = compile_spec(input);

    DiagnosticsReport report;
    report.spec = input;
    report.spec_hash = sha256_hex(dump_spec(input));
    report.tolerance = tol;
    report.sample = input.sample;
    if (options.samples) {
        if (*options.samples < 1) throw ValidationError("sample count must be positive");
        report.sample.count = *options.samples;
    }
    if (options.seed) report.sample.seed = *options.seed;
    const auto points = sample_points(report.sample);
    report.point_count = points.size();

    const auto records = map_points<PointRecord>(points, options.threads,
                                                 [&](const std::vector<double>& p) { return measure(c, p, tol); });

    auto add = [&](const std::string& name, double tolerance, auto get, bool applicable = true) {
        CheckResult cr;
        cr.name = name;
        cr.tolerance = tolerance;
        if (applicable) {
            const Reduction red = reduce(records, get);
            cr.max_residual = red.max;
            cr.argmax_point = points[red.argmax];
            cr.status = red.max <= tolerance ? CheckStatus::Pass : CheckStatus::Fail;
        }
        report.checks.push_back(std::move(cr));
    };
    auto add_agreement = [&](const std::string& name, TriState agreement) {
        CheckResult cr;
        cr.name = name;
        cr.max_residual = agreement == TriState::False ? 1.0 : 0.0;
        cr.status = agreement == TriState::True    ? CheckStatus::Pass
                    : agreement == TriState::False ? CheckStatus::Fail
                                                   : CheckStatus::NotApplicable;
        report.checks.push_back(std::move(cr));
    };
    auto worst = [&](auto get) { return reduce(records, get).max; };

    const double loose = 100.0 * tol;
    add("codazzi", tol, [](const PointRecord& r) { return r.codazzi; });
    add("levi_civita_metricity", tol, [](const PointRecord& r) { return r.metricity; });
    add("christoffel_symmetry", tol, [](const PointRecord& r) { return r.christoffel_symmetry; });
    add("first_bianchi", tol, [](const PointRecord& r) { return r.first_bianchi; });
    add("cubic_roundtrip", tol, [](const PointRecord& r) { return r.cubic_roundtrip; });
    add("conjugate_duality", tol, [](const PointRecord& r) { return r.conjugate_duality; });
    add("levi_civita_mean", tol, [](const PointRecord& r) { return r.levi_civita_mean; });
    add("conjugation_involution", tol, [](const PointRecord& r) { return r.conjugation_involution; });
    add("conjugate_curvature_adjoint", tol, [](const PointRecord& r) { return r.conjugate_curvature_adjoint; });
    add("interchange_sum", tol, [](const PointRecord& r) { return r.interchange_sum; });
    add("bochner_gradient", tol, [](const PointRecord& r) { return r.bochner_gradient; });
    add("ricci_closedness_identity", tol, [](const PointRecord& r) { return r.ricci_closedness_identity; });
    add("tension_identity", tol, [](const PointRecord& r) { return r.tension_identity; });
    add("difftension", 1e-4 * tol, [](const PointRecord& r) { return r.difftension; });
    add("bitension_paths", tol, [](const PointRecord& r) { return r.bitension_paths; });
    add("main1_difference", tol, [](const PointRecord& r) { return r.main1_difference; });
    add("main1_sum", tol, [](const PointRecord& r) { return r.main1_sum; });
    add("eigenfunction", loose, [](const PointRecord& r) { return r.eigenfunction; }, !c.eigenfunctions.empty());
    add("parallel_volume", tol, [](const PointRecord& r) { return r.parallel_volume; }, c.potential.has_value());
    add("tchebychev_trace_factor", tol, [](const PointRecord& r) { return r.trace_factor; });

    // Flags.
    const TriState codazzi = classify(worst([](const PointRecord& r) { return r.codazzi; }), tol);
    const TriState ric_symmetric = classify(worst([](const PointRecord& r) { return r.ricci_asymmetry; }), tol);
    const TriState closed = classify(worst([](const PointRecord& r) { return r.closedness; }), tol);
    const TriState conj_l = classify(worst([](const PointRecord& r) { return r.r_minus_l; }), tol);
    const TriState conj_bar = classify(worst([](const PointRecord& r) { return r.r_minus_conjugate; }), tol);
    const TriState conj_k = classify(worst([](const PointRecord& r) { return r.nabla_k_asymmetry; }), tol);
    const TriState equiaffine = classify(worst([](const PointRecord& r) { return r.tchebychev; }), tol);
    const TriState parallel = classify(worst([](const PointRecord& r) { return r.operator_norm; }), tol);

    report.semi_equiaffine.t1_max = worst([](const PointRecord& r) { return r.t1; });
    report.semi_equiaffine.t2_max = worst([](const PointRecord& r) { return r.t2; });
    report.semi_equiaffine.bitension_max = worst([](const PointRecord& r) { return r.bitension; });
    report.semi_equiaffine.semi_equiaffine =
        classify(std::max(report.semi_equiaffine.t1_max, report.semi_equiaffine.t2_max), tol);
    report.semi_equiaffine.bitension_vanishing = classify(report.semi_equiaffine.bitension_max, tol);
    report.semi_equiaffine.equivalence =
        agree(report.semi_equiaffine.semi_equiaffine, report.semi_equiaffine.bitension_vanishing);
    const TriState semi = report.semi_equiaffine.semi_equiaffine;

    TriState constant = TriState::Inconclusive;
    if (c.dim() >= 2) {
        std::vector<PointTensor> Rs, gs;
        for (const auto& r : records) {
            Rs.push_back(r.R);
            gs.push_back(r.g);
        }
        report.curvature_fit = statistical::constant_curvature_fit(Rs, gs);
        constant = classify(report.curvature_fit->residual, loose * (1.0 + std::abs(report.curvature_fit->lambda)));
    }

    add_agreement("conjugate_symmetry_agreement", both(agree(conj_l, conj_bar), agree(conj_l, conj_k)));
    add_agreement("ricci_symmetry_agreement", agree(ric_symmetric, closed));
    add_agreement("main1_flag_equivalence", report.semi_equiaffine.equivalence);

    // Gated checks: evaluated only where their hypotheses hold numerically.
    const double lambda = report.curvature_fit ? report.curvature_fit->lambda : 0.0;
    const int m = c.dim();
    add("scalar_relation", loose,
        [lambda, m](const PointRecord& r) { return std::abs(lambda * m * (m - 1) - r.rho - r.tt + r.kk); },
        constant == TriState::True);
    add("lapc", loose, [](const PointRecord& r) { return r.lapc; },
        conj_l == TriState::True && parallel == TriState::True);
    const bool has_t = worst([](const PointRecord& r) { return r.tchebychev_norm; }) > tol;
    add("geodesic_potential", tol, [](const PointRecord& r) { return r.geodesic; }, semi == TriState::True && has_t);
    const double max_ric_tt = worst([](const PointRecord& r) { return r.ricci_tt; });
    add("parallel_tchebychev_criterion", loose,
        [](const PointRecord& r) { return std::max(r.parallel_combination, r.operator_norm); },
        semi == TriState::True && ric_symmetric == TriState::True && max_ric_tt <= tol);

    report.flags = {{"codazzi", codazzi},
                    {"ric_symmetric", ric_symmetric},
                    {"conjugate_symmetric", conj_l},
                    {"equiaffine", equiaffine},
                    {"semi_equiaffine", semi},
                    {"constant_curvature", constant},
                    {"tchebychev_parallel", parallel},
                    {"bitension_vanishing", report.semi_equiaffine.bitension_vanishing}};

    const ExpectedFlags& ex = input.expected;
    auto expect = [&](const char* name, const std::optional<bool>& want) {
        if (!want) return;
        const TriState actual = *report.flag(name);
        report.expected.push_back({name, *want ? "true" : "false", std::string(statgeom::to_string(actual)),
                                   matches(actual, *want)});
    };
    expect("codazzi", ex.codazzi);
    expect("ric_symmetric", ex.ric_symmetric);
    expect("conjugate_symmetric", ex.conjugate_symmetric);
    expect("equiaffine", ex.equiaffine);
    expect("semi_equiaffine", ex.semi_equiaffine);
    expect("constant_curvature", ex.constant_curvature);
    expect("tchebychev_parallel", ex.tchebychev_parallel);
    if (!ex.lambda_candidates.empty()) {
        std::ostringstream want;
        for (std::size_t i = 0; i < ex.lambda_candidates.size(); ++i) want << (i ? "|" : "") << ex.lambda_candidates[i];
        bool ok = false;
        std::string actual = "none";
        if (report.curvature_fit) {
            std::ostringstream a;
            a << std::setprecision(17) << lambda;
            actual = a.str();
            for (double cand : ex.lambda_candidates)
                ok = ok || std::abs(lambda - cand) <= loose * (1.0 + std::abs(cand));
        }
        report.expected.push_back({"lambda", want.str(), actual, ok});
    }

    double num = 0.0, den = 0.0;
    for (const auto& r : records) {
        num += r.trace_num;
        den += r.trace_den;
    }
    report.trace_factor = den > 0.0 ? num / den : 0.0;
    report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

// ---------------------------------------------------------------------------
// Cross-check against the finite-difference oracle

bool CrosscheckReport::passed() const {
    for (const auto& q : quantities)
        if (!(q.max_deviation <= tolerance)) return false;
    return true;
}

std::string CrosscheckReport::to_json() const {
    Json doc;
    doc["schema"] = 1;
    doc["spec"] = spec_name;
    doc["step"] = step;
    doc["tolerance"] = tolerance;
    Json qs = Json::object();
    for (const auto& q : quantities) qs[q.name] = {{"max_deviation", q.max_deviation}, {"argmax_point", q.argmax_point}};
    doc["quantities"] = qs;
    doc["passed"] = passed();
    return doc.dump(2) + "\n";
}

namespace {

struct CrossRecord {
    std::vector<double> deviation;
};

double relative_deviation(const PointTensor& jet, const PointTensor& fd) {
    return tensor::max_abs_difference(jet, fd) / std::max(1.0, tensor::max_abs(jet));
}

}  // namespace

CrosscheckReport crosscheck(const ManifoldSpec& spec, double h, double tolerance, unsigned threads) {
    if (!(h > 0.0)) throw ValidationError("finite-difference step must be positive");
    const CompiledSpec c = compile_spec(spec);
    const auto points = sample_points(spec.sample);
    const std::vector<std::string> names = {"christoffel", "riemann", "ricci", "tchebychev",
                                            "rough_laplacian", "scalar_laplacian"};
    const auto records = map_points<CrossRecord>(points, threads, [&](const std::vector<double>& p) {
        const PointFrames jet = evaluate_point(c, p, 3);
        const PointFrames fd = evaluate_point_fd(c, p, h);
        const int m = c.dim();
        const JetTensor f_jet = JetTensor::scalar(m, expr::eval_jet(c.probe, p, 3));
        const JetTensor f_fd = JetTensor::scalar(m, expr::fd_jet(c.probe, p, 2, h));
        auto lap_scalar = [](const PointFrames& fr, const JetTensor& f) {
            return tensor::values(geometry::laplacian_scalar(f, fr.geo.christoffel, fr.geo.inverse));
        };
        auto lap_vector = [](const PointFrames& fr) {
            return tensor::values(geometry::rough_laplacian(fr.st.tchebychev, fr.geo.christoffel, fr.geo.inverse));
        };
        CrossRecord r;
        r.deviation = {relative_deviation(jet.geo.gamma(), fd.geo.gamma()),
                       relative_deviation(jet.geo.curvature(), fd.geo.curvature()),
                       relative_deviation(jet.geo.ricci, fd.geo.ricci),
                       relative_deviation(jet.st.T(), fd.st.T()),
                       relative_deviation(lap_vector(jet), lap_vector(fd)),
                       relative_deviation(lap_scalar(jet, f_jet), lap_scalar(fd, f_fd))};
        return r;
    });
    CrosscheckReport report;
    report.spec_name = spec.name;
    report.step = h;
    report.tolerance = tolerance;
    for (std::size_t q = 0; q < names.size(); ++q) {
        CrosscheckQuantity cq;
        cq.name = names[q];
        std::size_t arg = 0;
        for (std::size_t i = 0; i < records.size(); ++i) {
            const double v = records[i].deviation[q];
            if (v > cq.max_deviation || std::isnan(v)) {
                cq.max_deviation = v;
                arg = i;
                if (std::isnan(v)) break;
            }
        }
        cq.argmax_point = points[arg];
        report.quantities.push_back(std::move(cq));
    }
    return report;
}

}  // namespace statgeom::cli

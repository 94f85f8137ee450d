// SPDX-License-Identifier: MIT
#include "statgeom/builtins/builtins.hpp"

#include <charconv>
#include <cmath>
#include <random>

#include "statgeom/cli/sampling.hpp"
#include "statgeom/error.hpp"

namespace statgeom::builtins {

using tensor::D;
using tensor::U;

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> coordinate_names(int m) {
    std::vector<std::string> out;
    for (int i = 1; i <= m; ++i) out.push_back("x" + std::to_string(i));
    return out;
}

void flat_metric(ManifoldSpec& spec) {
    for (int i = 0; i < spec.dim; ++i)
        for (int j = 0; j <= i; ++j) spec.metric[cli::metric_key(i, j)] = i == j ? "1" : "0";
}

std::string radius_squared(int m) {
    std::string out;
    for (int i = 1; i <= m; ++i) out += (i > 1 ? "+" : "") + std::string("x") + std::to_string(i) + "*x" + std::to_string(i);
    return out;
}

PointTensor flat_metric_oracle(int m, std::span<const double>) {
    PointTensor g(m, {D, D});
    for (int i = 0; i < m; ++i) g(i, i) = 1.0;
    return g;
}

PointTensor zero_connection(int m) { return PointTensor(m, {U, D, D}); }

double parse_number(const std::string& text, const std::string& name) {
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw ValidationError("builtin '" + name + "': '" + text + "' is not a number");
    return v;
}

int parse_int(const std::string& text, const std::string& name) {
    int v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw ValidationError("builtin '" + name + "': '" + text + "' is not an integer");
    return v;
}

void require_dim(int m, int lo) {
    if (m < lo || m > tensor::kMaxDim)
        throw ValidationError("dimension must be in " + std::to_string(lo) + "..8");
}

}  // namespace

BuiltinInstance centroaffine_power_surface(double a1, double a2) {
    if (!(a1 > 0.0) || !(a2 > 0.0)) throw ValidationError("centroaffine parameters must be positive");
    BuiltinInstance b;
    b.name = "centroaffine:" + format_number(a1) + "," + format_number(a2);
    b.description = "centroaffine surface x3 = x1^-a1 x2^-a2";
    ManifoldSpec& s = b.spec;
    s.name = b.name;
    s.dim = 2;
    s.coordinates = coordinate_names(2);
    s.parameters = {{"a1", a1}, {"a2", a2}};
    // g_ij = a_i (a_j + delta_ij) / ((a1 + a2 + 1) x^i x^j)
    auto g = [](int i, int j) {
        const std::string ai = "a" + std::to_string(i + 1);
        const std::string aj = "a" + std::to_string(j + 1);
        const std::string num = i == j ? ai + "*(" + ai + "+1)" : ai + "*" + aj;
        return num + "/((a1+a2+1)*x" + std::to_string(i + 1) + "*x" + std::to_string(j + 1) + ")";
    };
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j <= i; ++j) s.metric[cli::metric_key(i, j)] = g(i, j);
    // C_ijk = -2 g_kl (nabla^l_ij - Gamma^l_ij) with nabla^l_ij = -g_ij x^l and
    // Gamma^l_ij = -delta_ij delta_il / x^i.
    for (int i = 0; i < 2; ++i)
        for (int j = i; j < 2; ++j)
            for (int k = j; k < 2; ++k) {
                std::string c = "2*(" + g(i, j) + ")*((" + g(k, 0) + ")*x1+(" + g(k, 1) + ")*x2)";
                if (i == j) c += "-2*(" + g(k, i) + ")/x" + std::to_string(i + 1);
                s.cubic[cli::cubic_key(i, j, k)] = c;
            }
    s.tchebychev_potential = "(1-a1)*log(x1)+(1-a2)*log(x2)";
    s.sample.box = {{0.5, 3.0}, {0.5, 3.0}};
    s.expected.codazzi = true;
    s.expected.ric_symmetric = true;
    s.expected.conjugate_symmetric = true;
    s.expected.equiaffine = a1 == 1.0 && a2 == 1.0;
    s.expected.semi_equiaffine = true;
    s.expected.constant_curvature = true;
    s.expected.tchebychev_parallel = true;
    s.expected.lambda_candidates = {1.0, -1.0};

    const double a[2] = {a1, a2};
    const double S = a1 + a2 + 1.0;
    auto metric = [a, S](std::span<const double> x) {
        PointTensor out(2, {D, D});
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) out(i, j) = a[i] * (a[j] + (i == j ? 1.0 : 0.0)) / (S * x[i] * x[j]);
        return out;
    };
    b.metric = metric;
    b.christoffel = [](std::span<const double> x) {
        PointTensor out(2, {U, D, D});
        for (int i = 0; i < 2; ++i) out(i, i, i) = -1.0 / x[i];
        return out;
    };
    b.connection = [metric](std::span<const double> x) {
        const PointTensor gx = metric(x);
        PointTensor out(2, {U, D, D});
        for (int k = 0; k < 2; ++k)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) out(k, i, j) = -gx(i, j) * x[k];
        return out;
    };
    b.tchebychev_form = [a](std::span<const double> x) {
        PointTensor out(2, {D});
        for (int k = 0; k < 2; ++k) out(k) = (1.0 - a[k]) / x[k];
        return out;
    };
    return b;
}

BuiltinInstance flat_constant_cubic(int m, const std::vector<std::pair<std::string, double>>& entries, std::string name) {
    require_dim(m, 1);
    BuiltinInstance b;
    b.name = name.empty() ? "flat-constant:" + std::to_string(m) : std::move(name);
    b.description = "Euclidean space with a constant cubic form";
    ManifoldSpec& s = b.spec;
    s.name = b.name;
    s.dim = m;
    s.coordinates = coordinate_names(m);
    flat_metric(s);
    std::vector<double> eta(static_cast<std::size_t>(m), 0.0);
    for (const auto& [key, value] : entries) {
        s.cubic[key] = format_number(value);
        if (key.size() != 3) throw ValidationError("cubic key '" + key + "' must have 3 digits");
        // eta_k = -1/2 sum_i C_iik; count the contributions of each sorted key.
        const int i = key[0] - '1', j = key[1] - '1', k = key[2] - '1';
        if (i == j) eta[static_cast<std::size_t>(k)] -= 0.5 * value;
        if (j == k && i != j) eta[static_cast<std::size_t>(i)] -= 0.5 * value;
    }
    std::string potential;
    bool equiaffine = true;
    for (int k = 0; k < m; ++k) {
        if (eta[static_cast<std::size_t>(k)] == 0.0) continue;
        equiaffine = false;
        if (!potential.empty()) potential += "+";
        potential += "(" + format_number(eta[static_cast<std::size_t>(k)]) + ")*x" + std::to_string(k + 1);
    }
    s.tchebychev_potential = potential.empty() ? "0" : potential;
    s.sample.box.assign(static_cast<std::size_t>(m), {-1.0, 1.0});
    s.expected.codazzi = true;
    s.expected.ric_symmetric = true;
    s.expected.conjugate_symmetric = true;
    s.expected.equiaffine = equiaffine;
    s.expected.semi_equiaffine = true;
    s.expected.tchebychev_parallel = true;
    if (entries.empty()) {
        s.expected.constant_curvature = true;
        s.expected.lambda_candidates = {0.0};
    }
    cli::validate_spec(s);

    b.metric = [m](std::span<const double> x) { return flat_metric_oracle(m, x); };
    b.christoffel = [m](std::span<const double>) { return zero_connection(m); };
    b.tchebychev_form = [eta, m](std::span<const double>) {
        PointTensor out(m, {D});
        for (int k = 0; k < m; ++k) out(k) = eta[static_cast<std::size_t>(k)];
        return out;
    };
    if (entries.empty()) b.lambda = 0.0;
    return b;
}

BuiltinInstance flat_random_constant_cubic(int m, std::uint64_t seed) {
    require_dim(m, 1);
    std::mt19937_64 rng(seed);
    std::vector<std::pair<std::string, double>> entries;
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j)
            for (int k = j; k < m; ++k) entries.emplace_back(cli::cubic_key(i, j, k), -1.0 + 2.0 * cli::unit_uniform(rng));
    return flat_constant_cubic(m, entries, "flat-cubic:" + std::to_string(m) + "," + std::to_string(seed));
}

BuiltinInstance flat_polynomial_cubic(int m, std::uint64_t seed) {
    require_dim(m, 1);
    BuiltinInstance b;
    b.name = "flat-poly:" + std::to_string(m) + "," + std::to_string(seed);
    b.description = "Euclidean space with a random quadratic cubic form";
    ManifoldSpec& s = b.spec;
    s.name = b.name;
    s.dim = m;
    s.coordinates = coordinate_names(m);
    flat_metric(s);
    std::mt19937_64 rng(seed);
    auto coeff = [&rng] { return format_number(-1.0 + 2.0 * cli::unit_uniform(rng)); };
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j)
            for (int k = j; k < m; ++k) {
                std::string c = coeff();
                for (int a = 0; a < m; ++a) c += "+(" + coeff() + ")*x" + std::to_string(a + 1);
                for (int a = 0; a < m; ++a)
                    for (int d = a; d < m; ++d)
                        c += "+(" + coeff() + ")*x" + std::to_string(a + 1) + "*x" + std::to_string(d + 1);
                s.cubic[cli::cubic_key(i, j, k)] = c;
            }
    s.sample.box.assign(static_cast<std::size_t>(m), {-1.0, 1.0});
    s.expected.codazzi = true;
    s.expected.semi_equiaffine = false;
    cli::validate_spec(s);
    b.metric = [m](std::span<const double> x) { return flat_metric_oracle(m, x); };
    b.christoffel = [m](std::span<const double>) { return zero_connection(m); };
    return b;
}

namespace {

BuiltinInstance conformal_model(int m, double c, double half_width, std::string name, std::string description) {
    BuiltinInstance b;
    b.name = std::move(name);
    b.description = std::move(description);
    ManifoldSpec& s = b.spec;
    s.name = b.name;
    s.dim = m;
    s.coordinates = coordinate_names(m);
    s.parameters = {{"c", c}};
    const std::string r2 = radius_squared(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= i; ++j) s.metric[cli::metric_key(i, j)] = i == j ? "4/pow(1+c*(" + r2 + "),2)" : "0";
    s.eigenfunctions = {{"(1-c*(" + r2 + "))/(1+c*(" + r2 + "))", -c * m}, {"x1/(1+c*(" + r2 + "))", -c * m}};
    s.sample.box.assign(static_cast<std::size_t>(m), {-half_width, half_width});
    s.expected.codazzi = true;
    s.expected.ric_symmetric = true;
    s.expected.conjugate_symmetric = true;
    s.expected.equiaffine = true;
    s.expected.semi_equiaffine = true;
    s.expected.constant_curvature = true;
    s.expected.tchebychev_parallel = true;
    s.expected.lambda_candidates = {c};
    cli::validate_spec(s);

    b.metric = [m, c](std::span<const double> x) {
        double r = 0.0;
        for (double v : x) r += v * v;
        PointTensor g(m, {D, D});
        for (int i = 0; i < m; ++i) g(i, i) = 4.0 / ((1.0 + c * r) * (1.0 + c * r));
        return g;
    };
    // g = e^{2 sigma} delta, d_i sigma = -2 c x_i / (1 + c|x|^2).
    b.christoffel = [m, c](std::span<const double> x) {
        double r = 0.0;
        for (double v : x) r += v * v;
        std::vector<double> ds(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) ds[static_cast<std::size_t>(i)] = -2.0 * c * x[static_cast<std::size_t>(i)] / (1.0 + c * r);
        PointTensor out(m, {U, D, D});
        for (int k = 0; k < m; ++k)
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    out(k, i, j) = (i == k ? ds[static_cast<std::size_t>(j)] : 0.0) +
                                   (j == k ? ds[static_cast<std::size_t>(i)] : 0.0) -
                                   (i == j ? ds[static_cast<std::size_t>(k)] : 0.0);
        return out;
    };
    b.tchebychev_form = [m](std::span<const double>) { return PointTensor(m, {D}); };
    b.lambda = c;
    return b;
}

}  // namespace

BuiltinInstance sphere_stereographic(int m, double c) {
    require_dim(m, 2);
    if (!(c > 0.0)) throw ValidationError("sphere curvature must be positive");
    return conformal_model(m, c, 1.0 / std::sqrt(c), "sphere:" + std::to_string(m) + "," + format_number(c),
                           "round sphere in a stereographic chart");
}

BuiltinInstance hyperbolic_ball(int m, double c) {
    require_dim(m, 2);
    if (!(c < 0.0)) throw ValidationError("hyperbolic curvature must be negative");
    // |x|^2 <= m b^2 = 1 / (4|c|) keeps 1 + c|x|^2 >= 3/4.
    return conformal_model(m, c, 0.5 / std::sqrt(m * -c), "hyperbolic:" + std::to_string(m) + "," + format_number(c),
                           "hyperbolic space in the Poincare ball chart");
}

BuiltinInstance make_builtin(const std::string& name) {
    const auto colon = name.find(':');
    const std::string family = name.substr(0, colon);
    std::vector<std::string> args;
    if (colon != std::string::npos) {
        std::string rest = name.substr(colon + 1);
        std::size_t start = 0;
        while (true) {
            const auto comma = rest.find(',', start);
            args.push_back(rest.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    }
    auto need = [&](std::size_t n) {
        if (args.size() != n)
            throw ValidationError("builtin '" + name + "' expects " + std::to_string(n) + " argument(s)");
    };
    if (family == "centroaffine") {
        need(2);
        return centroaffine_power_surface(parse_number(args[0], name), parse_number(args[1], name));
    }
    if (family == "flat") {
        need(1);
        return flat_constant_cubic(parse_int(args[0], name), {}, name);
    }
    if (family == "flat-c111") {
        need(1);
        return flat_constant_cubic(2, {{"111", parse_number(args[0], name)}}, name);
    }
    if (family == "flat-cubic") {
        need(2);
        return flat_random_constant_cubic(parse_int(args[0], name), static_cast<std::uint64_t>(parse_int(args[1], name)));
    }
    if (family == "flat-poly") {
        need(2);
        return flat_polynomial_cubic(parse_int(args[0], name), static_cast<std::uint64_t>(parse_int(args[1], name)));
    }
    if (family == "sphere") {
        need(2);
        return sphere_stereographic(parse_int(args[0], name), parse_number(args[1], name));
    }
    if (family == "hyperbolic") {
        need(2);
        return hyperbolic_ball(parse_int(args[0], name), parse_number(args[1], name));
    }
    throw ValidationError("unknown builtin '" + name + "'");
}

std::vector<std::string> list_builtins() {
    return {"centroaffine:1,1", "centroaffine:1,2", "centroaffine:2,3", "flat:2",      "flat-c111:2",
            "flat-cubic:2,7",   "flat-cubic:3,7",   "flat-poly:2,1",    "sphere:2,1",  "sphere:3,1",
            "sphere:2,4",       "hyperbolic:2,-1",  "hyperbolic:3,-1"};
}

std::vector<std::string> builtin_families() {
    return {"centroaffine:<a1>,<a2>   centroaffine power surface, a1, a2 > 0",
            "flat:<m>                 Euclidean R^m with C = 0",
            "flat-c111:<v>            Euclidean R^2 with C_111 = v",
            "flat-cubic:<m>,<seed>    Euclidean R^m with random constant C",
            "flat-poly:<m>,<seed>     Euclidean R^m with random quadratic C",
            "sphere:<m>,<c>           stereographic sphere of curvature c > 0",
            "hyperbolic:<m>,<c>       Poincare ball of curvature c < 0"};
}

}  // namespace statgeom::builtins

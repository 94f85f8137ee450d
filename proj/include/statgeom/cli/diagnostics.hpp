// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "statgeom/cli/manifold_spec.hpp"
#include "statgeom/expr/ast.hpp"
#include "statgeom/maps/identity_maps.hpp"
#include "statgeom/statistical/statistical_frame.hpp"
#include "statgeom/tristate.hpp"

namespace statgeom::cli {

/// Parsed expressions of a spec, ready for evaluation at points.
struct CompiledSpec {
    ManifoldSpec spec;
    std::vector<std::vector<expr::Expression>> metric;  // [i][j], symmetric
    std::vector<std::optional<expr::Expression>> cubic; // flat (i, j, k), absent = 0
    std::optional<expr::Expression> potential;
    expr::Expression probe;
    std::vector<expr::Expression> eigenfunctions;

    int dim() const { return spec.dim; }
    const std::optional<expr::Expression>& cubic_at(int i, int j, int k) const;
};

CompiledSpec compile_spec(const ManifoldSpec& spec);
/// Fallback scalar for the gradient-field identity when a spec has no probe.
std::string default_probe(const std::vector<std::string>& coordinates);

/// Geometry and statistics at one point.
struct PointFrames {
    geometry::GeometryFrame geo;
    statistical::StatisticalFrame st;
};

/// Frames from forward-mode jets of the given order (2 or 3).
PointFrames evaluate_point(const CompiledSpec& spec, std::span<const double> point, int order = 3);
/// Frames from central-difference jets of order 2 with step h.
PointFrames evaluate_point_fd(const CompiledSpec& spec, std::span<const double> point, double h);

struct RunOptions {
    double tolerance = 1e-8;
    std::optional<int> samples;
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;  // 0 = hardware concurrency
};

enum class CheckStatus { Pass, Fail, NotApplicable };
std::string_view to_string(CheckStatus s);

struct CheckResult {
    std::string name;
    double max_residual = 0.0;
    std::vector<double> argmax_point;
    CheckStatus status = CheckStatus::NotApplicable;
    double tolerance = 0.0;
};

struct ExpectedComparison {
    std::string flag;
    std::string expected;
    std::string actual;
    bool matches = false;
};

struct DiagnosticsReport {
    ManifoldSpec spec;
    std::string spec_hash;
    double tolerance = 0.0;
    SampleSpec sample;
    std::size_t point_count = 0;
    std::vector<CheckResult> checks;
    std::optional<statistical::CurvatureFit> curvature_fit;
    std::vector<std::pair<std::string, TriState>> flags;
    maps::SemiEquiaffine semi_equiaffine;
    std::vector<ExpectedComparison> expected;
    double trace_factor = 0.0;
    double runtime_seconds = 0.0;

    const CheckResult* check(const std::string& name) const;
    std::optional<TriState> flag(const std::string& name) const;
    /// Every applicable check passes and every expected flag matches.
    bool passed() const;
    int exit_code() const { return passed() ? 0 : 2; }
    std::string to_json(bool include_runtime = true) const;
};

/// Run every diagnostic over the sampled points. Throws ValidationError for
/// spec problems, including domain violations at a sampled point.
DiagnosticsReport run_diagnostics(const ManifoldSpec& spec, const RunOptions& options = {});

struct CrosscheckQuantity {
    std::string name;
    double max_deviation = 0.0;  // max |jet - fd| / max(1, max |jet|) over points
    std::vector<double> argmax_point;
};

struct CrosscheckReport {
    std::string spec_name;
    double step = 0.0;
    double tolerance = 0.0;
    std::vector<CrosscheckQuantity> quantities;
    bool passed() const;
    std::string to_json() const;
};

CrosscheckReport crosscheck(const ManifoldSpec& spec, double h = 2e-4, double tolerance = 1e-4, unsigned threads = 0);

/// Lowercase hex SHA-256 digest.
std::string sha256_hex(const std::string& data);

}  // namespace statgeom::cli

// SPDX-License-Identifier: MIT
// Command-line front end: run, export, list, crosscheck.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "statgeom/builtins/builtins.hpp"
#include "statgeom/cli/diagnostics.hpp"
#include "statgeom/error.hpp"

namespace {

constexpr int kExitFail = 2;
constexpr int kExitSpec = 3;

void write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw statgeom::ValidationError("cannot write '" + path + "'");
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace statgeom;
    CLI::App app{"Statistical-manifold diagnostics"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "evaluate every diagnostic on a spec file");
    std::string run_spec;
    double run_tol = 1e-8;
    std::optional<int> run_samples;
    std::optional<std::uint64_t> run_seed;
    std::string run_out;
    unsigned run_threads = 0;
    run->add_option("spec", run_spec, "spec file")->required();
    run->add_option("--tol", run_tol, "tolerance for jet-based residuals");
    run->add_option("--samples", run_samples, "number of uniform sample points");
    run->add_option("--seed", run_seed, "sampling seed");
    run->add_option("--out", run_out, "report path (default: stdout)");
    run->add_option("--threads", run_threads, "worker threads (0 = all cores)");

    auto* exp = app.add_subcommand("export", "write a builtin instance as a spec file");
    std::string exp_name;
    std::string exp_path;
    exp->add_option("builtin", exp_name, "builtin name, e.g. centroaffine:1,2")->required();
    exp->add_option("path", exp_path, "output path")->required();

    auto* list = app.add_subcommand("list", "list builtin instances");

    auto* cross = app.add_subcommand("crosscheck", "compare jet-based quantities with finite differences");
    std::string cross_spec;
    double cross_h = 2e-4;
    double cross_tol = 1e-4;
    std::string cross_out;
    cross->add_option("spec", cross_spec, "spec file")->required();
    cross->add_option("--step", cross_h, "finite-difference step");
    cross->add_option("--tol", cross_tol, "relative deviation threshold");
    cross->add_option("--out", cross_out, "report path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*run) {
            cli::RunOptions opts;
            opts.tolerance = run_tol;
            opts.samples = run_samples;
            opts.seed = run_seed;
            opts.threads = run_threads;
            const auto report = cli::run_diagnostics(cli::load_spec(run_spec), opts);
            write_output(report.to_json(), run_out);
            if (!run_out.empty())
                std::cout << report.spec.name << ": " << (report.passed() ? "pass" : "fail") << "\n";
            return report.exit_code();
        }
        if (*exp) {
            cli::save_spec(builtins::make_builtin(exp_name).spec, exp_path);
            return 0;
        }
        if (*list) {
            for (const auto& name : builtins::list_builtins()) std::cout << name << "\n";
            std::cout << "\nfamilies:\n";
            for (const auto& line : builtins::builtin_families()) std::cout << "  " << line << "\n";
            return 0;
        }
        if (*cross) {
            const auto report = cli::crosscheck(cli::load_spec(cross_spec), cross_h, cross_tol);
            write_output(report.to_json(), cross_out);
            return report.passed() ? 0 : kExitFail;
        }
    } catch (const ValidationError& e) {
        std::cerr << "spec error: " << e.what() << "\n";
        return kExitSpec;
    } catch (const ParseError& e) {
        std::cerr << "spec error: " << e.what() << "\n";
        return kExitSpec;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSpec;
    }
    return 0;
}

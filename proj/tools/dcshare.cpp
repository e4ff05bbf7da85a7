/*
 * Copyright (c) 2026 dcshare contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

// dcshare: run current-sharing scenarios, closed-form analysis and sweeps.
//
// Exit codes: 0 success, 1 I/O failure, 2 invalid input, 3 solver divergence.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"

#include "dcshare/analysis.hpp"
#include "dcshare/report.hpp"
#include "dcshare/scenario.hpp"
#include "dcshare/scenario_file.hpp"

namespace fs = std::filesystem;
using namespace dcshare;

namespace {

constexpr int kExitIo = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitDiverged = 3;

fs::path output_dir(const std::string& flag)
{
    if (!flag.empty())
        return flag;
    if (const char* env = std::getenv("DCSHARE_OUTPUT_DIR"); env && *env)
        return env;
    return ".";
}

int load(const std::string& path, ScenarioConfig& cfg)
{
    if (!std::ifstream(path)) {
        std::cerr << "error: cannot read " << path << '\n';
        return kExitIo;
    }
    try {
        cfg = load_scenario(path);
    } catch (const ScenarioError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    }
    return 0;
}

int cmd_run(const std::string& scenario_path, const std::string& out_flag)
{
    ScenarioConfig cfg;
    if (const int rc = load(scenario_path, cfg); rc != 0)
        return rc;

    const RunResult result = run_scenario(cfg);

    const fs::path dir = output_dir(out_flag);
    std::error_code ec;
    fs::create_directories(dir, ec);
    std::ofstream trace(dir / "trace.csv");
    std::ofstream summary(dir / "summary.yaml");
    if (!trace || !summary) {
        std::cerr << "error: cannot write outputs to " << dir << '\n';
        return kExitIo;
    }
    write_trace_csv(trace, result.trace, cfg.size());
    write_summary(summary, cfg, result.summary);
    write_summary(std::cout, cfg, result.summary);

    if (result.summary.diverged) {
        std::cerr << "error: " << result.summary.diagnostic << '\n';
        return kExitDiverged;
    }
    return 0;
}

int cmd_analyze(const std::vector<double>& v, const std::vector<double>& rl, double rload,
                const std::vector<double>& rd, bool csv)
{
    const double rd1 = rd.empty() ? 0.0 : rd[0];
    const double rd2 = rd.empty() ? 0.0 : rd[1];
    SharingAnalysis a;
    try {
        a = analyze_sharing(v[0], v[1], rl[0], rl[1], rload, rd1, rd2);
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    }
    if (csv) {
        std::printf("I_1,I_2,dI,denominator,ratio_residual\n%.10g,%.10g,%.10g,%.10g,%.10g\n", a.i1, a.i2, a.mismatch,
                    a.denominator, a.ratio_residual);
    } else {
        std::printf("%12s %12s %12s %14s %16s\n", "I_1[A]", "I_2[A]", "dI[A]", "D[ohm^2]", "ratio_residual");
        std::printf("%12.6f %12.6f %12.6f %14.6f %16.6f\n", a.i1, a.i2, a.mismatch, a.denominator, a.ratio_residual);
    }
    return 0;
}

int cmd_vi(double rd, double correction, int points, bool csv)
{
    ConverterParams p;
    std::vector<ViPoint> line;
    try {
        line = vi_characteristic(p, rd, correction, 0.0, p.nominal_current(), static_cast<std::size_t>(points));
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    }
    std::printf(csv ? "I,V\n" : "%10s %10s\n", "I[A]", "V[V]");
    for (const auto& pt : line)
        std::printf(csv ? "%.10g,%.10g\n" : "%10.4f %10.4f\n", pt.current, pt.voltage);
    return 0;
}

int cmd_sweep(const std::string& scenario_path, const std::string& param, double from, double to, int steps,
              unsigned jobs, const std::string& out)
{
    ScenarioConfig cfg;
    if (const int rc = load(scenario_path, cfg); rc != 0)
        return rc;

    std::vector<SweepPoint> points;
    try {
        points = run_sweep(cfg, param, from, to, steps, jobs);
    } catch (const UnknownParameter& e) {
        std::cerr << "error: " << e.what() << "\nknown parameters:\n";
        for (const auto& p : override_paths())
            std::cerr << "  " << p << '\n';
        return kExitInvalid;
    } catch (const DomainError& e) {
        std::cerr << "error: sweep point is invalid: " << e.what() << '\n';
        return kExitInvalid;
    }

    if (out.empty()) {
        write_sweep_csv(std::cout, param, points, cfg.size());
    } else {
        std::ofstream os(out);
        if (!os) {
            std::cerr << "error: cannot write " << out << '\n';
            return kExitIo;
        }
        write_sweep_csv(os, param, points, cfg.size());
    }
    for (const auto& p : points) {
        if (p.summary.diverged)
            return kExitDiverged;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Current sharing among parallel DC/DC converters: scenarios, analysis, sweeps"};
    app.require_subcommand(1);

    std::string scenario;
    std::string out_dir;
    auto* run = app.add_subcommand("run", "Simulate a scenario file; writes trace.csv and summary.yaml");
    run->add_option("scenario", scenario, "Scenario YAML file")->required();
    run->add_option("-o,--output", out_dir, "Output directory (default: $DCSHARE_OUTPUT_DIR or .)");

    std::vector<double> v, rl, rd;
    double rload = 0.0;
    bool csv = false;
    auto* analyze = app.add_subcommand("analyze", "Closed-form two-converter sharing analysis");
    analyze->add_option("--v", v, "Converter voltages V_DC1 V_DC2 [V]")->required()->expected(2);
    analyze->add_option("--rl", rl, "Cable resistances R_L1 R_L2 [ohm]")->required()->expected(2);
    analyze->add_option("--rload", rload, "Load resistance R_L [ohm]")->required();
    analyze->add_option("--rd", rd, "Droop resistances R_d1 R_d2 [ohm]")->expected(2);
    analyze->add_flag("--csv", csv, "Machine-readable output");

    double vi_rd = 0.0, vi_corr = 0.0;
    int vi_points = 11;
    bool vi_csv = false;
    auto* vi = app.add_subcommand("vi", "Droop V-I line of the default converter over [0, I_nom]");
    vi->add_option("--rd", vi_rd, "Droop resistance [ohm]");
    vi->add_option("--correction", vi_corr, "Secondary correction [V]");
    vi->add_option("--points", vi_points, "Number of samples")->check(CLI::PositiveNumber);
    vi->add_flag("--csv", vi_csv, "Machine-readable output");

    std::string param, sweep_out;
    double from = 0.0, to = 0.0;
    int steps = 1;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    auto* sweep = app.add_subcommand("sweep", "Run a scenario over a grid of one parameter; CSV of summaries");
    sweep->add_option("scenario", scenario, "Scenario YAML file")->required();
    sweep->add_option("--param", param, "Dotted parameter path, e.g. adaptive.delta")->required();
    sweep->add_option("--from", from, "First grid value")->required();
    sweep->add_option("--to", to, "Last grid value")->required();
    sweep->add_option("--steps", steps, "Number of grid points")->required()->check(CLI::PositiveNumber);
    sweep->add_option("-j,--jobs", jobs, "Worker threads");
    sweep->add_option("-o,--output", sweep_out, "CSV file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n";
        const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        std::cerr << sub->help();
        return kExitInvalid;
    }

    if (*run)
        return cmd_run(scenario, out_dir);
    if (*analyze)
        return cmd_analyze(v, rl, rload, rd, csv);
    if (*vi)
        return cmd_vi(vi_rd, vi_corr, vi_points, vi_csv);
    if (*sweep)
        return cmd_sweep(scenario, param, from, to, steps, jobs, sweep_out);
    return kExitInvalid;
}

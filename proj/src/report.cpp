/*
 * Copyright (c) 2026 dcshare contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "dcshare/report.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <thread>

#include "dcshare/scenario_file.hpp"

namespace dcshare {

namespace {

std::string num(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string opt(const std::optional<double>& v) { return v ? num(*v) : "null"; }

template <typename T, typename F>
std::string yaml_list(const std::vector<T>& v, F&& f)
{
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            s += ", ";
        s += f(v[i]);
    }
    return s + "]";
}

} // namespace

std::string trace_csv_header(std::size_t n)
{
    std::string h = "time";
    for (std::size_t j = 1; j <= n; ++j)
        h += ",I_" + std::to_string(j);
    for (std::size_t j = 1; j <= n; ++j)
        h += ",V_DC" + std::to_string(j);
    h += ",V_bus";
    for (std::size_t j = 1; j <= n; ++j)
        h += ",R_d" + std::to_string(j);
    for (std::size_t j = 1; j <= n; ++j)
        h += ",mode" + std::to_string(j);
    h += ",dI";
    return h;
}

void write_trace_csv(std::ostream& os, const std::vector<TraceRecord>& trace, std::size_t n)
{
    os << trace_csv_header(n) << '\n';
    std::string line;
    for (const auto& r : trace) {
        line = num(r.time);
        for (double v : r.current)
            line += ',' + num(v);
        for (double v : r.terminal_voltage)
            line += ',' + num(v);
        line += ',' + num(r.bus_voltage);
        for (double v : r.droop)
            line += ',' + num(v);
        for (auto m : r.mode) {
            line += ',';
            line += to_string(m);
        }
        line += ',' + num(r.mismatch);
        os << line << '\n';
    }
}

void write_summary(std::ostream& os, const ScenarioConfig& cfg, const Summary& s)
{
    const double v_nom = cfg.converters.front().params.nominal_output_voltage;
    os << "scenario: \"" << cfg.name << "\"\n"
       << "converged: " << (s.converged ? "true" : "false") << '\n'
       << "convergence_time: " << opt(s.convergence_time) << '\n'
       << "dI_pre_event: " << opt(s.mismatch_pre_event) << '\n'
       << "dI_final: " << num(s.mismatch_final) << '\n'
       << "max_bus_deviation: " << num(s.max_bus_deviation) << '\n'
       << "max_bus_deviation_pct: " << num(100.0 * s.max_bus_deviation / v_nom) << '\n'
       << "steady_bus_deviation: " << num(s.steady_bus_deviation) << '\n'
       << "steady_bus_deviation_pct: " << num(100.0 * s.steady_bus_deviation / v_nom) << '\n'
       << "final_R_d: " << yaml_list(s.final_droop, num) << '\n'
       << "final_I: " << yaml_list(s.final_current, num) << '\n'
       << "final_band_residual: " << yaml_list(s.final_band_residual, num) << '\n'
       << "final_mode: " << yaml_list(s.final_mode, [](ControlMode m) { return std::string(to_string(m)); }) << '\n'
       << "ccm_entries: " << s.ccm_entries << '\n'
       << "diverged: " << (s.diverged ? "true" : "false") << '\n';
    if (!s.diagnostic.empty())
        os << "diagnostic: \"" << s.diagnostic << "\"\n";
}

std::vector<double> sweep_grid(double from, double to, int steps)
{
    if (steps < 1)
        throw DomainError("sweep needs at least one step");
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) {
        const double frac = steps == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(steps - 1);
        grid.push_back(i == steps - 1 && steps > 1 ? to : from + frac * (to - from));
    }
    return grid;
}

std::vector<SweepPoint> run_sweep(const ScenarioConfig& base, const std::string& param, double from, double to,
                                  int steps, unsigned jobs)
{
    const auto grid = sweep_grid(from, to, steps);
    std::vector<ScenarioConfig> configs;
    configs.reserve(grid.size());
    for (double v : grid) {
        ScenarioConfig c = base;
        apply_override(c, param, v);
        c.validate();
        configs.push_back(std::move(c));
    }

    std::vector<SweepPoint> points(grid.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) {
            points[i].index = i;
            points[i].value = grid[i];
            points[i].summary = run_scenario(configs[i]).summary;
        }
    };

    const unsigned n_threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(configs.size())));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < n_threads; ++t)
            pool.emplace_back(worker);
    }
    return points;
}

void write_sweep_csv(std::ostream& os, const std::string& param, const std::vector<SweepPoint>& points,
                     std::size_t n)
{
    os << "index," << param
       << ",converged,convergence_time,dI_pre_event,dI_final,max_bus_deviation,steady_bus_deviation";
    for (std::size_t j = 1; j <= n; ++j)
        os << ",R_d" << j << "_final";
    for (std::size_t j = 1; j <= n; ++j)
        os << ",I_" << j << "_final";
    os << ",ccm_entries,diverged\n";
    for (const auto& p : points) {
        const auto& s = p.summary;
        os << p.index << ',' << num(p.value) << ',' << (s.converged ? 1 : 0) << ',' << opt(s.convergence_time)
           << ',' << opt(s.mismatch_pre_event) << ',' << num(s.mismatch_final) << ',' << num(s.max_bus_deviation)
           << ',' << num(s.steady_bus_deviation);
        for (std::size_t j = 0; j < n; ++j)
            os << ',' << (j < s.final_droop.size() ? num(s.final_droop[j]) : "nan");
        for (std::size_t j = 0; j < n; ++j)
            os << ',' << (j < s.final_current.size() ? num(s.final_current[j]) : "nan");
        os << ',' << s.ccm_entries << ',' << (s.diverged ? 1 : 0) << '\n';
    }
}

} // namespace dcshare

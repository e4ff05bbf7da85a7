/*
 * Copyright (c) 2026 dcshare contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include <algorithm>
#include <sstream>
#include <string>

#include "doctest.h"

#include "dcshare/report.hpp"
#include "dcshare/scenario_file.hpp"

using namespace dcshare;

namespace {

ScenarioConfig short_case()
{
    ScenarioConfig cfg = ScenarioConfig::defaults();
    cfg.network.load_resistance = 10.8;
    cfg.solver.t_end = 0.08;
    cfg.events = {Event::activate(0.04)};
    return cfg;
}

std::string summary_text(const ScenarioConfig& cfg, const Summary& s)
{
    std::ostringstream os;
    write_summary(os, cfg, s);
    return os.str();
}

} // namespace

TEST_CASE("trace header depends only on the converter count")
{
    CHECK(trace_csv_header(2) == "time,I_1,I_2,V_DC1,V_DC2,V_bus,R_d1,R_d2,mode1,mode2,dI");
    CHECK(trace_csv_header(3) == "time,I_1,I_2,I_3,V_DC1,V_DC2,V_DC3,V_bus,R_d1,R_d2,R_d3,mode1,mode2,mode3,dI");
}

TEST_CASE("trace rows have one field per header column and round-trip numbers")
{
    const auto cfg = short_case();
    const RunResult r = run_scenario(cfg);
    std::ostringstream os;
    write_trace_csv(os, r.trace, 2);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    std::size_t rows = 0;
    while (std::getline(is, line)) {
        CHECK(std::count(line.begin(), line.end(), ',') == 10);
        const double t = std::stod(line.substr(0, line.find(',')));
        CHECK(t == r.trace[rows].time);
        ++rows;
    }
    CHECK(rows == r.trace.size());
}

TEST_CASE("summary YAML lists the headline metrics")
{
    const auto cfg = short_case();
    const std::string s = summary_text(cfg, run_scenario(cfg).summary);
    for (const char* key : {"converged:", "convergence_time:", "dI_pre_event:", "dI_final:", "max_bus_deviation:",
                            "steady_bus_deviation:", "final_R_d:", "final_I:", "final_mode:", "ccm_entries:",
                            "diverged: false"})
        CHECK(s.find(key) != std::string::npos);
}

TEST_CASE("sweep grid")
{
    CHECK(sweep_grid(1.0, 2.0, 1) == std::vector<double>{1.0});
    CHECK(sweep_grid(0.0, 1.0, 5) == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    CHECK(sweep_grid(0.005, 0.1, 20).back() == 0.1);
    CHECK_THROWS_AS(sweep_grid(0.0, 1.0, 0), DomainError);
}

TEST_CASE("a one-point sweep reproduces the plain run")
{
    const auto cfg = short_case();
    const auto points = run_sweep(cfg, "adaptive.delta", 0.02, 0.02, 1);
    REQUIRE(points.size() == 1);
    CHECK(summary_text(cfg, points[0].summary) == summary_text(cfg, run_scenario(cfg).summary));
}

TEST_CASE("parallel sweeps match serial ones, in grid order")
{
    const auto cfg = short_case();
    const auto serial = run_sweep(cfg, "adaptive.delta", 0.01, 0.05, 5, 1);
    const auto parallel = run_sweep(cfg, "adaptive.delta", 0.01, 0.05, 5, 4);
    std::ostringstream a, b;
    write_sweep_csv(a, "adaptive.delta", serial, 2);
    write_sweep_csv(b, "adaptive.delta", parallel, 2);
    CHECK(a.str() == b.str());
    for (std::size_t i = 0; i < parallel.size(); ++i)
        CHECK(parallel[i].index == i);
}

TEST_CASE("sweeps reject unknown parameters and invalid points before running")
{
    const auto cfg = short_case();
    CHECK_THROWS_AS(run_sweep(cfg, "adaptive.speed", 0.0, 1.0, 3), UnknownParameter);
    CHECK_THROWS_AS(run_sweep(cfg, "network.load_resistance", -1.0, 1.0, 3), DomainError);
}

/*
 * Copyright (c) 2026 dcshare contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"

#include "dcshare/analysis.hpp"
#include "dcshare/report.hpp"
#include "dcshare/scenario.hpp"
#include "dcshare/scenario_file.hpp"

using namespace dcshare;

namespace {

ScenarioConfig light(double t_end = 0.2)
{
    ScenarioConfig cfg = ScenarioConfig::defaults();
    cfg.network.load_resistance = 10.8;
    cfg.solver.t_end = t_end;
    return cfg;
}

std::string csv(const RunResult& r, std::size_t n)
{
    std::ostringstream os;
    write_trace_csv(os, r.trace, n);
    return os.str();
}

const TraceRecord& at(const std::vector<TraceRecord>& trace, double t)
{
    for (const auto& r : trace) {
        if (r.time >= t - 1e-12)
            return r;
    }
    return trace.back();
}

} // namespace

TEST_CASE("identical converters on identical lines share exactly")
{
    ScenarioConfig cfg = light(0.3);
    cfg.network.cable_resistances = {1.5, 1.5};
    cfg.adaptive_active = true;
    const RunResult r = run_scenario(cfg);
    REQUIRE_FALSE(r.summary.diverged);
    for (const auto& rec : r.trace)
        CHECK(rec.mismatch == 0.0);
}

TEST_CASE("every sample satisfies KCL at the bus")
{
    ScenarioConfig cfg = light(0.3);
    cfg.events = {Event::activate(0.1), Event::load_resistance(0.2, 8.0)};
    const RunResult r = run_scenario(cfg);
    for (const auto& rec : r.trace) {
        double sum = 0.0;
        for (double i : rec.current)
            sum += i;
        CHECK(std::abs(sum - rec.bus_voltage / rec.load_resistance) < 1e-9);
        CHECK(rec.load_current == doctest::Approx(rec.bus_voltage / rec.load_resistance));
    }
}

TEST_CASE("trace timing: fixed decimation, monotone, ends at t_end")
{
    ScenarioConfig cfg = light(0.01);
    cfg.solver.t_end = 0.0101;  // not a multiple of the record interval
    const RunResult r = run_scenario(cfg);
    REQUIRE(r.trace.size() >= 3);
    CHECK(r.trace.front().time == 0.0);
    CHECK(r.trace[1].time == doctest::Approx(0.4e-3));
    CHECK(r.trace.back().time == doctest::Approx(0.0101));
    for (std::size_t k = 1; k < r.trace.size(); ++k)
        CHECK(r.trace[k].time > r.trace[k - 1].time);
}

TEST_CASE("runs are bit-identical, with and without comm dropout")
{
    ScenarioConfig cfg = light(0.15);
    cfg.events = {Event::activate(0.05)};
    CHECK(csv(run_scenario(cfg), 2) == csv(run_scenario(cfg), 2));

    cfg.comm.dropout_probability = 0.4;
    cfg.seed = 17;
    const std::string a = csv(run_scenario(cfg), 2);
    CHECK(a == csv(run_scenario(cfg), 2));
    cfg.seed = 18;
    CHECK(a != csv(run_scenario(cfg), 2));
}

TEST_CASE("cable resistance event applies from its time onward")
{
    ScenarioConfig cfg = light(0.1);
    cfg.events = {Event::cable_resistance(0.05, 1, 3.0)};
    const RunResult r = run_scenario(cfg);
    for (const auto& rec : r.trace)
        CHECK(rec.cable_resistance[1] == (rec.time >= 0.05 - 1e-12 ? 3.0 : 2.0));

    System sys(cfg);
    apply_event(sys, cfg.events[0]);
    CHECK(sys.network().cable_resistances[1] == 3.0);
    CHECK(sys.network().cable_resistances[0] == 1.0);
}

TEST_CASE("disabling droop zeroes the gains and freezes adaptation")
{
    ScenarioConfig cfg = light(0.3);
    cfg.adaptive_active = true;
    cfg.events = {Event::droop_enabled(0.2, false)};
    const RunResult r = run_scenario(cfg);
    const auto& before = at(r.trace, 0.1996);
    CHECK(before.droop[0] != 0.0);
    for (const auto& rec : r.trace) {
        if (rec.time >= 0.2 - 1e-12) {
            CHECK(rec.droop[0] == 0.0);
            CHECK(rec.droop[1] == 0.0);
        }
    }

    System sys(cfg);
    auto& c = sys.controllers()[0];
    const double rd = c.adaptive_state().droop;
    apply_event(sys, Event::droop_enabled(0.0, false));
    CHECK_FALSE(c.adaptive_active());
    c.update(Measurements{36.0, 2.0, 2.0, 35.0, 1.0});
    CHECK(c.adaptive_state().droop == rd);

    // Re-enabling restores the fixed gain but leaves adaptation off.
    apply_event(sys, Event::droop_enabled(0.0, true));
    CHECK(c.droop_gain() == rd);
    CHECK_FALSE(c.adaptive_active());
}

TEST_CASE("events at the same instant apply in listed order")
{
    ScenarioConfig cfg = light(0.02);
    cfg.events = {Event::load_resistance(0.01, 9.0), Event::load_resistance(0.01, 12.0)};
    CHECK(run_scenario(cfg).trace.back().load_resistance == 12.0);
    std::swap(cfg.events[0], cfg.events[1]);
    CHECK(run_scenario(cfg).trace.back().load_resistance == 9.0);
}

TEST_CASE("load factors event retargets the adaptive loop")
{
    ScenarioConfig cfg = light(0.5);
    cfg.adaptive_active = true;
    cfg.events = {Event::load_factors_at(0.2, {1.2, 0.8})};
    const RunResult r = run_scenario(cfg);
    const auto& last = r.trace.back();
    CHECK(last.load_factor == std::vector<double>{1.2, 0.8});
    CHECK(r.summary.converged);
    CHECK(last.current[0] / last.current[1] == doctest::Approx(1.5).epsilon(0.05));
}

TEST_CASE("with the gains frozen the simulator settles on the closed-form currents")
{
    for (bool secondary : {false, true}) {
        CAPTURE(secondary);
        ScenarioConfig cfg = light(0.3);
        cfg.droop_enabled = true;  // fixed at the initial droop gain, no adaptation
        for (auto& c : cfg.converters)
            c.secondary_enabled = secondary;
        const RunResult r = run_scenario(cfg);
        const auto& last = r.trace.back();

        // Each converter acts as its droop source E_j = V* + correction behind R_Lj + R_dj.
        const double e1 = 36.0 + last.correction[0];
        const double e2 = 36.0 + last.correction[1];
        const auto want = steady_state_currents(e1, e2, 1.0 + last.droop[0], 2.0 + last.droop[1], 10.8);
        CHECK(last.current[0] == doctest::Approx(want.i1).epsilon(0.01));
        CHECK(last.current[1] == doctest::Approx(want.i2).epsilon(0.01));
        CHECK(last.mismatch == doctest::Approx(current_mismatch(e1, e2, 1.0, 2.0, 10.8, last.droop[0], last.droop[1]))
                                   .epsilon(0.01));
    }
}

TEST_CASE("secondary loop restores the bus in the bundled first case")
{
    const RunResult r = run_scenario(load_scenario(DCSHARE_SCENARIO_DIR "/case1.yaml"));
    CHECK(std::abs(r.trace.back().bus_voltage - 36.0) < 0.1);
}

TEST_CASE("a scenario without events runs to t_end unchanged")
{
    ScenarioConfig cfg = light(0.05);
    const RunResult r = run_scenario(cfg);
    CHECK(r.trace.back().time == doctest::Approx(0.05));
    CHECK_FALSE(r.summary.mismatch_pre_event.has_value());
    for (const auto& rec : r.trace) {
        CHECK(rec.load_resistance == 10.8);
        CHECK(rec.droop == std::vector<double>{0.0, 0.0});
    }
}

TEST_CASE("summary: convergence time is the start of the final in-band stretch")
{
    ScenarioConfig cfg = light();
    auto rec = [](double t, double i1, double i2) {
        TraceRecord r;
        r.time = t;
        r.current = {i1, i2};
        r.load_factor = {1.0, 1.0};
        r.droop = {0.5, 0.5};
        r.mode = {ControlMode::DroopVcm, ControlMode::DroopVcm};
        r.bus_voltage = 36.0;
        r.mismatch = i1 - i2;
        return r;
    };
    std::vector<TraceRecord> trace{rec(0.0, 2.0, 1.0), rec(0.1, 1.52, 1.5), rec(0.2, 1.7, 1.5),
                                   rec(0.3, 1.53, 1.5), rec(0.4, 1.51, 1.5)};
    Summary s = summarize(cfg, trace);
    CHECK(s.converged);
    CHECK(*s.convergence_time == doctest::Approx(0.3));

    trace.push_back(rec(0.5, 2.0, 1.0));
    s = summarize(cfg, trace);
    CHECK_FALSE(s.converged);
    CHECK_FALSE(s.convergence_time.has_value());
}

TEST_CASE("validation rejects inconsistent scenarios")
{
    ScenarioConfig cfg = ScenarioConfig::defaults();
    CHECK_NOTHROW(cfg.validate());

    auto bad = cfg;
    bad.converters[0].adaptive.load_factor = 1.5;
    CHECK_THROWS_AS(bad.validate(), DomainError);

    bad = cfg;
    bad.events = {Event::activate(0.3), Event::activate(0.1)};
    CHECK_THROWS_AS(bad.validate(), DomainError);

    bad = cfg;
    bad.events = {Event::load_factors_at(0.1, {1.3, 0.8})};
    CHECK_THROWS_AS(bad.validate(), DomainError);

    bad = cfg;
    bad.events = {Event::cable_resistance(0.1, 2, 1.0)};
    CHECK_THROWS_AS(bad.validate(), DomainError);

    bad = cfg;
    bad.network.cable_resistances = {1.0, -2.0};
    CHECK_THROWS_AS(bad.validate(), DomainError);

    bad = cfg;
    bad.solver.dt = 30e-6;
    CHECK_THROWS_AS(bad.validate(), DomainError);

    bad = cfg;
    bad.solver.control_period = 3.5e-5;
    CHECK_THROWS_AS(bad.validate(), DomainError);

    bad = cfg;
    bad.converters.pop_back();
    bad.network.cable_resistances.pop_back();
    CHECK_THROWS_AS(bad.validate(), DomainError);

    CHECK_THROWS_AS(run_scenario(bad), DomainError);
}

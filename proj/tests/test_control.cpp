/*
 * Copyright (c) 2026 dcshare contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"

#include "dcshare/circuit.hpp"
#include "dcshare/control.hpp"

using namespace dcshare;

namespace {

constexpr double kInom = 100.0 / 36.0;

AdaptiveDroopConfig cfg_with(double delta)
{
    AdaptiveDroopConfig c = AdaptiveDroopConfig::for_nominal(36.0);
    c.delta = delta;
    return c;
}

} // namespace

TEST_CASE("pi: proportional, integral and anti-windup")
{
    PiState p{1.0, 0.0};
    CHECK(p.update(2.0, 0.1) == doctest::Approx(2.0));

    PiState i{0.0, 10.0};
    CHECK(i.update(1.0, 0.1) == doctest::Approx(1.0));
    CHECK(i.integrator == doctest::Approx(1.0));

    PiState w{0.5, 1e4, 0.0, 0.0, 1.0};
    for (int k = 0; k < 1000; ++k)
        CHECK(w.update(1.0, 1e-3) == doctest::Approx(1.0));
    CHECK(w.integrator <= 1.0);
    // A clamped integrator recovers on the first sign change.
    CHECK(w.update(-0.1, 1e-3) < 1.0);

    const auto [next, out] = pi_step(PiState{2.0, 3.0}, 1.0, 0.5);
    CHECK(out == doctest::Approx(3.5));
    CHECK(next.integrator == doctest::Approx(1.5));
}

TEST_CASE("droop reference examples")
{
    static_assert(droop_reference(36.0, 0.0, 5.0, 0.0) == 36.0);
    CHECK(droop_reference(36.0, 0.5, 2.0, 0.0) == doctest::Approx(35.0));
    CHECK(droop_reference(36.0, 0.5, 2.0, 0.4) == doctest::Approx(35.4));
}

TEST_CASE("adaptive update: worked examples")
{
    SUBCASE("inside the band")
    {
        const auto c = cfg_with(0.02);
        auto st = AdaptiveDroopState::initial(c);
        const auto next = adaptive_droop_update(c, st, 2.52, 2.5, 36.0, kInom);
        CHECK(next.converged);
        CHECK(next.droop == st.droop);
        CHECK(next.droop_old == st.droop_old);
    }
    SUBCASE("excess current raises the gain")
    {
        auto c = cfg_with(0.05);
        c.initial_droop = 0.5;
        AdaptiveDroopState st;
        st.droop_old = 0.2;
        st.droop = 0.7;
        const auto next = adaptive_droop_update(c, st, 2.5, 2.0, 36.0, kInom);
        CHECK(next.droop == doctest::Approx(0.75));
        CHECK(next.droop_old == doctest::Approx(0.25));
        CHECK_FALSE(next.converged);
    }
    SUBCASE("deficit lowers the gain")
    {
        const auto c = cfg_with(0.05);
        const auto next = adaptive_droop_update(c, AdaptiveDroopState::initial(c), 1.5, 2.0, 36.0, kInom);
        CHECK(next.droop == doctest::Approx(0.45));
    }
    SUBCASE("over-current enters CCM and freezes the gain")
    {
        const auto c = cfg_with(0.02);
        const auto st = AdaptiveDroopState::initial(c);
        const auto next = adaptive_droop_update(c, st, 1.2 * kInom, 1.0, 36.0, kInom);
        CHECK(next.mode == ControlMode::Ccm);
        CHECK(next.droop == st.droop);
        // Stays put while in CCM, whatever the sharing error.
        const auto again = adaptive_droop_update(c, next, 0.5, 2.0, 36.0, kInom);
        CHECK(again.mode == ControlMode::Ccm);
        CHECK(again.droop == st.droop);
    }
    SUBCASE("voltage guard pauses the update")
    {
        const auto c = cfg_with(0.02);
        const auto st = AdaptiveDroopState::initial(c);
        CHECK(adaptive_droop_update(c, st, 2.5, 2.0, 40.0, kInom).droop == st.droop);
        CHECK(adaptive_droop_update(c, st, 2.5, 2.0, 32.0, kInom).droop == st.droop);
        CHECK(adaptive_droop_update(c, st, 2.5, 2.0, 39.0, kInom).droop > st.droop);
    }
    SUBCASE("non-finite measurement raises the fault flag only")
    {
        const auto c = cfg_with(0.02);
        const auto st = AdaptiveDroopState::initial(c);
        const auto next = adaptive_droop_update(c, st, std::numeric_limits<double>::quiet_NaN(), 2.0, 36.0, kInom);
        CHECK(next.fault);
        CHECK(next.droop == st.droop);
        CHECK(next.mode == st.mode);
        CHECK_FALSE(adaptive_droop_update(c, next, 2.0, 2.0, 36.0, kInom).fault);
    }
    SUBCASE("load factor scales the target")
    {
        auto c = cfg_with(0.02);
        c.load_factor = 1.2;
        CHECK(adaptive_droop_update(c, AdaptiveDroopState::initial(c), 2.4, 2.0, 36.0, kInom).converged);
        CHECK_FALSE(adaptive_droop_update(c, AdaptiveDroopState::initial(c), 2.0, 2.0, 36.0, kInom).converged);
    }
}

TEST_CASE("adaptive update: M same-sign steps move the gain by exactly M delta")
{
    for (double delta : {0.005, 0.02, 0.1}) {
        const auto c = cfg_with(delta);
        auto up = AdaptiveDroopState::initial(c);
        auto down = up;
        const int m = 4;
        for (int k = 0; k < m; ++k) {
            up = adaptive_droop_update(c, up, 2.0, 1.5, 36.0, kInom);
            down = adaptive_droop_update(c, down, 1.0, 1.5, 36.0, kInom);
        }
        CHECK(up.droop == doctest::Approx(c.initial_droop + m * delta).epsilon(1e-12));
        CHECK(down.droop == doctest::Approx(c.initial_droop - m * delta).epsilon(1e-12));
    }
}

TEST_CASE("adaptive update: converged gain holds under constant input")
{
    const auto c = cfg_with(0.02);
    auto st = AdaptiveDroopState::initial(c);
    st = adaptive_droop_update(c, st, 2.01, 2.0, 36.0, kInom);
    REQUIRE(st.converged);
    const double held = st.droop;
    for (int k = 0; k < 1000; ++k) {
        st = adaptive_droop_update(c, st, 2.01, 2.0, 36.0, kInom);
        CHECK(st.droop == held);
    }
}

TEST_CASE("adaptive update: gain stays in [0, max] under random input")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> cur(0.0, 1.1 * kInom);
    std::uniform_real_distribution<double> volt(30.0, 42.0);
    std::uniform_real_distribution<double> step(0.005, 0.5);
    for (int run = 0; run < 50; ++run) {
        auto c = cfg_with(step(rng));
        c.max_droop = 2.0;
        auto st = AdaptiveDroopState::initial(c);
        for (int k = 0; k < 2000; ++k) {
            st = adaptive_droop_update(c, st, cur(rng), cur(rng), volt(rng), kInom);
            CHECK(st.droop >= 0.0);
            CHECK(st.droop <= c.max_droop);
            CHECK(st.droop_old == doctest::Approx(st.droop - c.initial_droop));
            st.mode = ControlMode::DroopVcm;  // keep the update running
        }
    }
}

TEST_CASE("adaptive config validation")
{
    auto c = AdaptiveDroopConfig::for_nominal(36.0);
    CHECK(c.voltage_min == doctest::Approx(32.4));
    CHECK(c.voltage_max == doctest::Approx(39.6));
    CHECK_NOTHROW(c.validate(36.0));
    c.delta = 0.0;
    CHECK_THROWS_AS(c.validate(36.0), DomainError);
    c = AdaptiveDroopConfig::for_nominal(36.0);
    c.voltage_max = 35.0;
    CHECK_THROWS_AS(c.validate(36.0), DomainError);
    c = AdaptiveDroopConfig::for_nominal(36.0);
    c.max_droop = c.initial_droop;
    CHECK_THROWS_AS(c.validate(36.0), DomainError);
}

TEST_CASE("secondary loop: zero error holds, saturation at +/-10 %")
{
    auto s = SecondaryState::make(0.2, 100.0, 36.0);
    auto [held, corr] = secondary_step(s, 36.0, 36.0, 4e-5);
    CHECK(corr == 0.0);
    CHECK(held.pi.integrator == 0.0);

    for (int k = 0; k < 100000; ++k)
        s = secondary_step(s, 20.0, 36.0, 4e-5).first;
    CHECK(s.correction == doctest::Approx(3.6));
    for (int k = 0; k < 100000; ++k)
        s = secondary_step(s, 50.0, 36.0, 4e-5).first;
    CHECK(s.correction == doctest::Approx(-3.6));

    auto low = SecondaryState::make(0.2, 100.0, 36.0);
    double last = 0.0;
    for (int k = 0; k < 10; ++k) {
        low = secondary_step(low, 35.0, 36.0, 4e-5).first;
        CHECK(low.correction > last);
        last = low.correction;
    }
}

TEST_CASE("controller: zero input gives zero duty, duty always in [0, 1]")
{
    ControllerConfig cfg;
    cfg.secondary_enabled = false;
    cfg.params.nominal_output_voltage = 36.0;
    ConverterController ctrl(cfg);
    Measurements m;
    m.terminal_voltage = 36.0;  // voltage error zero
    CHECK(ctrl.step(m, 4e-5) == 0.0);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> v(-10.0, 80.0);
    std::uniform_real_distribution<double> i(-5.0, 10.0);
    ConverterController wild(ControllerConfig{});
    wild.activate_adaptive();
    for (int k = 0; k < 20000; ++k) {
        Measurements r{v(rng), i(rng), i(rng), v(rng), std::abs(i(rng))};
        const double d = controller_step(wild, r, 4e-5);
        CHECK(d >= 0.0);
        CHECK(d <= 1.0);
        if (k % 25 == 0)
            wild.update(r);
    }
}

TEST_CASE("controller: CCM pins the current reference at the rated current")
{
    ConverterController ctrl(ControllerConfig{});
    ctrl.activate_adaptive();
    Measurements m{30.0, 1.2 * kInom, 1.2 * kInom, 29.0, 1.0};
    ctrl.update(m);
    REQUIRE(ctrl.mode() == ControlMode::Ccm);
    for (double v : {20.0, 36.0, 45.0}) {
        m.terminal_voltage = v;
        ctrl.step(m, 4e-5);
        CHECK(ctrl.current_reference() == doctest::Approx(kInom));
    }
}

TEST_CASE("controller: over-current on the inductor alone enters CCM, droop off or on")
{
    ConverterController ctrl(ControllerConfig{});
    Measurements m{36.0, 2.0, 1.1 * kInom, 35.0, 2.0};
    ctrl.update(m);
    CHECK(ctrl.mode() == ControlMode::Ccm);
    CHECK(ctrl.droop_gain() == 0.0);
}

TEST_CASE("controller: CCM exits after the hysteresis window")
{
    ControllerConfig cfg;
    cfg.secondary_enabled = false;
    ConverterController ctrl(cfg);
    ctrl.activate_adaptive();
    ctrl.update(Measurements{36.0, 1.2 * kInom, 1.2 * kInom, 35.0, 2.0});
    REQUIRE(ctrl.mode() == ControlMode::Ccm);

    // Terminal voltage far above the reference drives the demand to zero.
    const Measurements high{45.0, 0.5 * kInom, 0.5 * kInom, 44.0, 1.0};
    for (int k = 0; k < 25; ++k)
        ctrl.step(high, 4e-5);
    REQUIRE(ctrl.current_demand() < 0.95 * kInom);
    for (int p = 1; p < cfg.ccm_exit.exit_periods; ++p) {
        ctrl.update(high);
        CHECK(ctrl.mode() == ControlMode::Ccm);
    }
    ctrl.update(high);
    CHECK(ctrl.mode() == ControlMode::DroopVcm);
}

TEST_CASE("controller: disabling droop zeroes the gain and freezes adaptation")
{
    ConverterController ctrl(ControllerConfig{});
    ctrl.activate_adaptive();
    const Measurements m{36.0, 2.0, 2.0, 35.0, 1.5};
    ctrl.update(m);
    const double rd = ctrl.adaptive_state().droop;
    CHECK(ctrl.droop_gain() == rd);

    ctrl.set_droop_enabled(false);
    CHECK(ctrl.droop_gain() == 0.0);
    CHECK_FALSE(ctrl.adaptive_active());
    for (int k = 0; k < 10; ++k)
        ctrl.update(m);
    CHECK(ctrl.adaptive_state().droop == rd);
}

TEST_CASE("controller: closed loop on the averaged plant settles at duty v/Vg")
{
    ControllerConfig cfg;
    cfg.secondary_enabled = false;
    ConverterController ctrl(cfg);

    const std::vector<ConverterParams> params{cfg.params};
    const NetworkConfig network{{1.0}, 12.96};
    PlantState s = PlantState::zeros(1);
    AveragedPlant plant;
    std::vector<double> duty{0.0};
    const double dt = 4e-6;
    for (int k = 0; k < 75000; ++k) {  // 0.3 s
        if (k % 10 == 0) {
            const NetworkSolution sol = solve_network(s.capacitor_voltage, network);
            const Measurements m{s.capacitor_voltage[0], sol.branch_currents[0], s.inductor_current[0],
                                 sol.bus_voltage, sol.branch_currents[0]};
            if (k % 250 == 0)
                ctrl.update(m);
            duty[0] = ctrl.step(m, 4e-5);
        }
        plant.step(s, duty, network, params, dt);
    }
    CHECK(ctrl.mode() == ControlMode::DroopVcm);
    CHECK(s.capacitor_voltage[0] == doctest::Approx(36.0).epsilon(1e-4));
    CHECK(duty[0] == doctest::Approx(s.capacitor_voltage[0] / cfg.params.input_voltage).epsilon(1e-4));
    CHECK(duty[0] == doctest::Approx(0.6).epsilon(1e-3));
}

/*
 * Copyright (c) 2026 dcshare contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "dcshare/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dcshare {

namespace {

constexpr double kTimeSlack = 1e-12;

// Number of plant steps in `period`; throws unless it is a whole number.
long long steps_per(double period, double dt, const char* what)
{
    const double ratio = period / dt;
    const long long n = std::llround(ratio);
    if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-6 * ratio) {
        std::ostringstream os;
        os << what << " (" << period << " s) must be a whole multiple of the plant step (" << dt << " s)";
        throw DomainError(os.str());
    }
    return n;
}

} // namespace

std::string_view to_string(EventKind kind)
{
    switch (kind) {
    case EventKind::ActivateAdaptiveDroop:
        return "activate_adaptive_droop";
    case EventKind::SetLoadFactors:
        return "set_load_factors";
    case EventKind::SetLoadResistance:
        return "set_load_resistance";
    case EventKind::SetCableResistance:
        return "set_cable_resistance";
    case EventKind::SetDroopEnabled:
        return "set_droop_enabled";
    }
    return "?";
}

std::optional<EventKind> event_kind_from_string(std::string_view name)
{
    for (auto k : {EventKind::ActivateAdaptiveDroop, EventKind::SetLoadFactors, EventKind::SetLoadResistance,
                   EventKind::SetCableResistance, EventKind::SetDroopEnabled}) {
        if (to_string(k) == name)
            return k;
    }
    return std::nullopt;
}

ScenarioConfig ScenarioConfig::defaults()
{
    ScenarioConfig cfg;
    cfg.name = "defaults";
    ControllerConfig c;
    c.adaptive = AdaptiveDroopConfig::for_nominal(c.params.nominal_output_voltage);
    c.bus_reference = c.params.nominal_output_voltage;
    cfg.converters = {c, c};
    const std::vector<ConverterParams> params{c.params, c.params};
    cfg.network.cable_resistances = {1.0, 2.0};
    cfg.network.load_resistance = rated_load_resistance(params);
    cfg.solver.control_period = 1.0 / c.params.switching_frequency;
    cfg.solver.dt = 1.0 / (10.0 * c.params.switching_frequency);
    return cfg;
}

void ScenarioConfig::validate() const
{
    const std::size_t n = converters.size();
    if (n < 2)
        throw DomainError("scenario needs at least two converters");
    for (const auto& c : converters)
        c.validate();
    network.validate();
    if (network.size() != n)
        throw DomainError("number of cable resistances does not match number of converters");
    comm.validate();

    if (!(solver.dt > 0.0 && solver.t_end > 0.0))
        throw DomainError("solver dt and t_end must be > 0");
    if (solver.decimation < 1)
        throw DomainError("trace decimation must be >= 1");
    for (const auto& c : converters) {
        if (solver.dt > c.params.max_step() * (1.0 + 1e-12))
            throw DomainError("plant step exceeds half a switching period");
    }
    const long long ctrl = steps_per(solver.control_period, solver.dt, "control period");
    if (steps_per(comm.sample_period, solver.dt, "comm sample period") % ctrl != 0)
        throw DomainError("comm sample period must be a multiple of the control period");
    for (const auto& c : converters) {
        if (steps_per(c.adaptive.update_period, solver.dt, "adaptive update period") % ctrl != 0)
            throw DomainError("adaptive update period must be a multiple of the control period");
    }

    double k_sum = 0.0;
    for (const auto& c : converters)
        k_sum += c.adaptive.load_factor;
    if (std::abs(k_sum - static_cast<double>(n)) > 1e-9)
        throw DomainError("load factors must sum to the number of converters");

    double last = 0.0;
    for (const auto& e : events) {
        if (!(e.time >= 0.0))
            throw DomainError("event times must be >= 0");
        if (e.time < last)
            throw DomainError("events must be sorted by time");
        last = e.time;
        switch (e.kind) {
        case EventKind::SetLoadFactors: {
            if (e.load_factors.size() != n)
                throw DomainError("set_load_factors needs one factor per converter");
            double s = 0.0;
            for (double k : e.load_factors) {
                if (!(k > 0.0))
                    throw DomainError("load factors must be > 0");
                s += k;
            }
            if (std::abs(s - static_cast<double>(n)) > 1e-9)
                throw DomainError("load factors must sum to the number of converters");
            break;
        }
        case EventKind::SetLoadResistance:
            if (!(e.value > 0.0 && std::isfinite(e.value)))
                throw DomainError("load resistance must be > 0");
            break;
        case EventKind::SetCableResistance:
            if (e.converter >= n)
                throw DomainError("set_cable_resistance refers to an unknown converter");
            if (!(e.value > 0.0 && std::isfinite(e.value)))
                throw DomainError("cable resistance must be > 0");
            break;
        case EventKind::ActivateAdaptiveDroop:
        case EventKind::SetDroopEnabled:
            break;
        }
    }
}

double TraceRecord::band_residual(std::size_t j) const
{
    double sum = 0.0;
    for (double i : current)
        sum += i;
    const double avg = sum / static_cast<double>(current.size());
    return current[j] - load_factor[j] * avg;
}

double TraceRecord::band_margin(std::span<const double> gamma) const
{
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < current.size(); ++j)
        worst = std::max(worst, std::abs(band_residual(j)) - gamma[j]);
    return worst;
}

System::System(const ScenarioConfig& cfg)
    : cfg_(cfg),
      network_(cfg.network),
      state_(PlantState::zeros(cfg.size())),
      comm_(cfg.size(), cfg.comm, cfg.seed)
{
    controllers_.reserve(cfg.size());
    params_.reserve(cfg.size());
    for (const auto& c : cfg.converters) {
        controllers_.emplace_back(c);
        params_.push_back(c.params);
        if (cfg.droop_enabled || cfg.adaptive_active)
            controllers_.back().set_droop_enabled(true);
        if (cfg.adaptive_active)
            controllers_.back().activate_adaptive();
    }
    const std::vector<double> zeros(cfg.size(), 0.0);
    comm_.initialize(zeros);
}

NetworkSolution System::solve() const
{
    NetworkSolution sol;
    sol.branch_currents.resize(state_.size());
    sol.bus_voltage = solve_network_unchecked(state_.capacitor_voltage, network_, sol.branch_currents);
    sol.load_current = sol.bus_voltage / network_.load_resistance;
    return sol;
}

Measurements System::measure(std::size_t j, const NetworkSolution& sol, double average_current) const
{
    Measurements m;
    m.terminal_voltage = state_.capacitor_voltage[j];
    m.output_current = sol.branch_currents[j];
    m.inductor_current = state_.inductor_current[j];
    m.bus_voltage = sol.bus_voltage;
    m.average_current = average_current;
    return m;
}

void System::advance_plant(std::span<const double> duties, double dt)
{
    plant_.step(state_, duties, network_, params_, dt);
}

void apply_event(System& system, const Event& event)
{
    auto& ctrls = system.controllers();
    switch (event.kind) {
    case EventKind::ActivateAdaptiveDroop:
        for (auto& c : ctrls)
            c.activate_adaptive();
        break;
    case EventKind::SetLoadFactors:
        for (std::size_t j = 0; j < ctrls.size(); ++j)
            ctrls[j].set_load_factor(event.load_factors.at(j));
        break;
    case EventKind::SetLoadResistance:
        system.set_load_resistance(event.value);
        break;
    case EventKind::SetCableResistance:
        system.set_cable_resistance(event.converter, event.value);
        break;
    case EventKind::SetDroopEnabled:
        for (auto& c : ctrls)
            c.set_droop_enabled(event.enabled);
        break;
    }
}

namespace {

TraceRecord make_record(const System& sys, const NetworkSolution& sol, double t)
{
    const std::size_t n = sys.plant_state().size();
    TraceRecord r;
    r.time = t;
    r.current = sol.branch_currents;
    r.terminal_voltage = sys.plant_state().capacitor_voltage;
    r.inductor_current = sys.plant_state().inductor_current;
    r.bus_voltage = sol.bus_voltage;
    r.load_current = sol.load_current;
    r.load_resistance = sys.network().load_resistance;
    r.cable_resistance = sys.network().cable_resistances;
    r.droop.reserve(n);
    r.mode.reserve(n);
    for (const auto& c : sys.controllers()) {
        r.droop.push_back(c.droop_gain());
        r.mode.push_back(c.mode());
        r.current_reference.push_back(c.current_reference());
        r.voltage_reference.push_back(c.voltage_reference());
        r.correction.push_back(c.secondary_state().correction);
        r.load_factor.push_back(c.config().adaptive.load_factor);
    }
    if (n == 2) {
        r.mismatch = r.current[0] - r.current[1];
    } else {
        const auto [lo, hi] = std::minmax_element(r.current.begin(), r.current.end());
        r.mismatch = *hi - *lo;
    }
    return r;
}

} // namespace

RunResult run_scenario(const ScenarioConfig& cfg)
{
    cfg.validate();

    const std::size_t n = cfg.size();
    const double dt = cfg.solver.dt;
    const long long ctrl_every = steps_per(cfg.solver.control_period, dt, "control period");
    const long long comm_every = steps_per(cfg.comm.sample_period, dt, "comm sample period");
    std::vector<long long> update_every(n);
    for (std::size_t j = 0; j < n; ++j)
        update_every[j] = steps_per(cfg.converters[j].adaptive.update_period, dt, "adaptive update period");
    const long long record_every = ctrl_every * cfg.solver.decimation;
    const long long total = std::llround(cfg.solver.t_end / dt);

    System sys(cfg);
    RunResult result;
    result.trace.reserve(static_cast<std::size_t>(total / record_every + 2));

    std::vector<double> duties(n, 0.0);
    std::size_t next_event = 0;

    for (long long k = 0; k <= total; ++k) {
        const double t = static_cast<double>(k) * dt;

        while (next_event < cfg.events.size() && cfg.events[next_event].time <= t + kTimeSlack)
            apply_event(sys, cfg.events[next_event++]);

        const bool control_tick = k % ctrl_every == 0;
        const bool record_tick = k % record_every == 0 || k == total;
        if (control_tick || record_tick) {
            const NetworkSolution sol = sys.solve();
            if (control_tick) {
                if (k % comm_every == 0) {
                    for (std::size_t j = 0; j < n; ++j)
                        sys.comm().publish(j, sol.branch_currents[j], t);
                }
                for (std::size_t j = 0; j < n; ++j) {
                    if (k % update_every[j] == 0) {
                        const double avg = sys.comm().average_current(t);
                        sys.controllers()[j].update(sys.measure(j, sol, avg));
                    }
                }
                for (std::size_t j = 0; j < n; ++j)
                    duties[j] = sys.controllers()[j].step(sys.measure(j, sol, 0.0), cfg.solver.control_period);
            }
            if (record_tick)
                result.trace.push_back(make_record(sys, sol, t));
        }
        if (k == total)
            break;

        sys.advance_plant(duties, dt);
        if (!sys.plant_state().finite()) {
            std::ostringstream os;
            os << "solver diverged: non-finite plant state after t=" << t << " s";
            result.summary = summarize(cfg, result.trace);
            result.summary.diverged = true;
            result.summary.diagnostic = os.str();
            return result;
        }
    }

    result.summary = summarize(cfg, result.trace);
    return result;
}

Summary summarize(const ScenarioConfig& cfg, const std::vector<TraceRecord>& trace)
{
    Summary s;
    if (trace.empty())
        return s;

    std::vector<double> gamma;
    for (const auto& c : cfg.converters)
        gamma.push_back(c.adaptive.gamma);
    const double v_nom = cfg.converters.front().params.nominal_output_voltage;

    const auto& last = trace.back();
    s.mismatch_final = last.mismatch;
    s.final_droop = last.droop;
    s.final_current = last.current;
    s.final_mode = last.mode;
    for (std::size_t j = 0; j < last.current.size(); ++j)
        s.final_band_residual.push_back(last.band_residual(j));
    s.steady_bus_deviation = std::abs(last.bus_voltage - v_nom);
    s.converged = last.band_margin(gamma) < 0.0;

    if (s.converged) {
        std::size_t first = trace.size() - 1;
        while (first > 0 && trace[first - 1].band_margin(gamma) < 0.0)
            --first;
        s.convergence_time = trace[first].time;
    }

    if (!cfg.events.empty()) {
        const double t0 = cfg.events.front().time;
        for (const auto& r : trace) {
            if (r.time >= t0 - kTimeSlack)
                break;
            s.mismatch_pre_event = r.mismatch;
        }
    }

    std::vector<ControlMode> prev(last.mode.size(), ControlMode::DroopVcm);
    for (const auto& r : trace) {
        if (r.time >= cfg.metrics_start - kTimeSlack)
            s.max_bus_deviation = std::max(s.max_bus_deviation, std::abs(r.bus_voltage - v_nom));
        for (std::size_t j = 0; j < r.mode.size(); ++j) {
            if (r.mode[j] == ControlMode::Ccm && prev[j] != ControlMode::Ccm)
                ++s.ccm_entries;
            prev[j] = r.mode[j];
        }
    }
    return s;
}

} // namespace dcshare

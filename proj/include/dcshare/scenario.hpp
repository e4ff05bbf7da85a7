/*
 * Copyright (c) 2026 dcshare contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dcshare/circuit.hpp"
#include "dcshare/comm.hpp"
#include "dcshare/control.hpp"

namespace dcshare {

enum class EventKind {
    ActivateAdaptiveDroop,
    SetLoadFactors,
    SetLoadResistance,
    SetCableResistance,
    SetDroopEnabled,
};

std::string_view to_string(EventKind kind);
std::optional<EventKind> event_kind_from_string(std::string_view name);

/// Timed change to the running system. Only the payload fields relevant to
/// `kind` are meaningful.
struct Event {
    double time = 0.0;
    EventKind kind = EventKind::ActivateAdaptiveDroop;
    std::vector<double> load_factors;  // SetLoadFactors
    double value = 0.0;                // SetLoadResistance / SetCableResistance [ohm]
    std::size_t converter = 0;         // SetCableResistance, zero-based
    bool enabled = false;              // SetDroopEnabled

    static Event activate(double t) { return {t, EventKind::ActivateAdaptiveDroop, {}, 0.0, 0, false}; }
    static Event load_factors_at(double t, std::vector<double> k) { return {t, EventKind::SetLoadFactors, std::move(k), 0.0, 0, false}; }
    static Event load_resistance(double t, double r) { return {t, EventKind::SetLoadResistance, {}, r, 0, false}; }
    static Event cable_resistance(double t, std::size_t j, double r) { return {t, EventKind::SetCableResistance, {}, r, j, false}; }
    static Event droop_enabled(double t, bool on) { return {t, EventKind::SetDroopEnabled, {}, 0.0, 0, on}; }

    bool operator==(const Event&) const = default;
};

struct SolverConfig {
    double dt = 4e-6;               // plant step [s]
    double control_period = 4e-5;  // one controller sample per switching period [s]
    double t_end = 0.6;             // [s]
    int decimation = 10;            // controller samples per trace record

    bool operator==(const SolverConfig&) const = default;
};

struct ScenarioConfig {
    std::string name = "scenario";
    std::string description;
    std::uint64_t seed = 1;

    std::vector<ControllerConfig> converters;
    NetworkConfig network;
    CommConfig comm;
    SolverConfig solver;

    bool droop_enabled = false;     // droop active from t = 0 (fixed at R_d_int)
    bool adaptive_active = false;   // adaptive algorithm running from t = 0
    double metrics_start = 0.05;    // start-up transient excluded from bus metrics [s]

    std::vector<Event> events;

    std::size_t size() const { return converters.size(); }

    /// Throws DomainError on the first violated constraint.
    void validate() const;

    /// Two converters with the laboratory ratings, 1/2 ohm cables and the
    /// rated load, no events.
    static ScenarioConfig defaults();

    bool operator==(const ScenarioConfig&) const = default;
};

/// One trace sample. The CSV writer emits a fixed subset; the rest is kept
/// for in-process checks.
struct TraceRecord {
    double time = 0.0;
    std::vector<double> current;            // I_j
    std::vector<double> terminal_voltage;   // V_DCj
    std::vector<double> droop;              // effective R_dj
    std::vector<ControlMode> mode;
    double bus_voltage = 0.0;
    double load_current = 0.0;
    double mismatch = 0.0;                  // I_1 - I_2 (max - min when N != 2)

    std::vector<double> inductor_current;
    std::vector<double> current_reference;
    std::vector<double> voltage_reference;
    std::vector<double> correction;         // secondary output
    std::vector<double> load_factor;
    std::vector<double> cable_resistance;
    double load_resistance = 0.0;

    /// max_j |I_j - K_j * I_ave| - gamma_j; negative when every converter is
    /// inside its sharing band.
    double band_margin(std::span<const double> gamma) const;
    double band_residual(std::size_t j) const;
};

struct Summary {
    bool converged = false;
    std::optional<double> convergence_time;
    std::optional<double> mismatch_pre_event;  // sample just before the first event
    double mismatch_final = 0.0;
    double max_bus_deviation = 0.0;            // |V_bus - V_ref*| after metrics_start [V]
    double steady_bus_deviation = 0.0;         // at the final sample [V]
    std::vector<double> final_droop;
    std::vector<double> final_current;
    std::vector<ControlMode> final_mode;
    std::vector<double> final_band_residual;
    int ccm_entries = 0;
    bool diverged = false;
    std::string diagnostic;
};

struct RunResult {
    std::vector<TraceRecord> trace;
    Summary summary;
};

/// Live system: plant, controllers and comm bus at one instant.
class System {
public:
    explicit System(const ScenarioConfig& cfg);

    const ScenarioConfig& config() const { return cfg_; }
    const NetworkConfig& network() const { return network_; }
    const PlantState& plant_state() const { return state_; }
    PlantState& plant_state() { return state_; }
    const std::vector<ConverterController>& controllers() const { return controllers_; }
    std::vector<ConverterController>& controllers() { return controllers_; }
    CommBus& comm() { return comm_; }

    NetworkSolution solve() const;

    void set_load_resistance(double r) { network_.load_resistance = r; }
    void set_cable_resistance(std::size_t j, double r) { network_.cable_resistances.at(j) = r; }

    /// Measurement vector of converter j at the current state.
    Measurements measure(std::size_t j, const NetworkSolution& sol, double average_current) const;

    void advance_plant(std::span<const double> duties, double dt);

private:
    ScenarioConfig cfg_;
    NetworkConfig network_;
    PlantState state_;
    std::vector<ConverterController> controllers_;
    std::vector<ConverterParams> params_;
    CommBus comm_;
    AveragedPlant plant_;
};

/// Applies one event between plant steps. Controller integrators and
/// adaptive state survive the change.
void apply_event(System& system, const Event& event);

/// Runs a validated scenario to t_end. A non-finite plant state stops the run;
/// the trace up to the last good sample is kept and summary.diverged is set.
RunResult run_scenario(const ScenarioConfig& cfg);

/// Recomputes the summary metrics from a trace.
Summary summarize(const ScenarioConfig& cfg, const std::vector<TraceRecord>& trace);

} // namespace dcshare

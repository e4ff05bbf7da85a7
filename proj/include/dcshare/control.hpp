/*
 * Copyright (c) 2026 dcshare contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <limits>
#include <string_view>
#include <utility>

#include "dcshare/circuit.hpp"

namespace dcshare {

/// Discrete PI with clamping anti-windup: the integrator is held inside the
/// output limits, and the output is clamped as well.
struct PiState {
    double kp = 0.0;
    double ki = 0.0;  // per second
    double integrator = 0.0;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    /// Advances the integrator by one sample and returns the output.
    double update(double error, double dt);

    bool operator==(const PiState&) const = default;
};

std::pair<PiState, double> pi_step(PiState state, double error, double dt);

/// Voltage reference of a droop-controlled converter:
/// V_ref* - R_d * I_out + secondary correction.
constexpr double droop_reference(double nominal_voltage, double droop_gain, double output_current,
                                 double secondary_correction)
{
    return nominal_voltage - droop_gain * output_current + secondary_correction;
}

enum class ControlMode { DroopVcm, Ccm };

std::string_view to_string(ControlMode mode);

/// Tuning of the adaptive virtual-resistance algorithm for one converter.
struct AdaptiveDroopConfig {
    double initial_droop = 0.5;    // R_d_int [ohm]
    double delta = 0.02;           // gain step per update [ohm]
    double gamma = 0.05;           // sharing band [A]
    double load_factor = 1.0;      // K_j, target share relative to the average
    double update_period = 1e-3;   // [s]
    double voltage_min = 32.4;     // terminal voltage guard [V]
    double voltage_max = 39.6;
    double max_droop = 10.0;       // R_d_max [ohm]

    /// Guard band of +/-10 % around the nominal output voltage.
    static AdaptiveDroopConfig for_nominal(double nominal_voltage);

    void validate(double nominal_voltage) const;

    bool operator==(const AdaptiveDroopConfig&) const = default;
};

struct AdaptiveDroopState {
    double droop_old = 0.0;  // R_d_old: accumulated correction relative to R_d_int
    double droop = 0.0;      // R_d, effective gain while droop is enabled
    ControlMode mode = ControlMode::DroopVcm;
    bool converged = false;  // band held at the most recent update
    bool fault = false;      // most recent update skipped on a non-finite measurement

    static AdaptiveDroopState initial(const AdaptiveDroopConfig& cfg)
    {
        AdaptiveDroopState st;
        st.droop = cfg.initial_droop;
        return st;
    }

    bool operator==(const AdaptiveDroopState&) const = default;
};

/// One pass of the gain-update state machine, run once per update period.
///
/// Order of checks: over-current (enter CCM), sharing band (converged),
/// terminal voltage guard (pause), then a +delta step when the converter
/// carries more than K_j * I_ave and a -delta step when it carries less. A
/// larger virtual resistance lowers that converter's share, so this is the
/// stabilising sign assignment. While in CCM the algorithm is stopped; the
/// controller owns the exit.
AdaptiveDroopState adaptive_droop_update(const AdaptiveDroopConfig& cfg,
                                         const AdaptiveDroopState& st,
                                         double output_current,
                                         double average_current,
                                         double terminal_voltage,
                                         double nominal_current);

/// Bus-voltage restoration loop. Its output shifts the droop line up or down
/// and is bounded to +/-10 % of the nominal voltage.
struct SecondaryState {
    PiState pi;
    double correction = 0.0;

    static SecondaryState make(double kp, double ki, double nominal_voltage);

    bool operator==(const SecondaryState&) const = default;
};

std::pair<SecondaryState, double> secondary_step(SecondaryState state, double bus_voltage,
                                                 double bus_reference, double dt);

/// Inner loop crosses over near Fs/10 (kp = 2*pi*2.5 kHz * L / Vg), the
/// voltage loop near Fs/100, the secondary loop at a few tens of hertz.
struct ControllerGains {
    double current_kp = 0.52;
    double current_ki = 820.0;
    double voltage_kp = 0.16;
    double voltage_ki = 500.0;
    double secondary_kp = 0.2;
    double secondary_ki = 100.0;
    double current_limit_factor = 1.5;  // voltage-loop output ceiling, in units of I_nom

    bool operator==(const ControllerGains&) const = default;
};

/// CCM leaves once the voltage loop has asked for less than
/// (1 - hysteresis) * I_nom for `exit_periods` consecutive update periods.
struct CcmExitPolicy {
    double hysteresis = 0.05;
    int exit_periods = 10;

    bool operator==(const CcmExitPolicy&) const = default;
};

struct ControllerConfig {
    ConverterParams params;
    ControllerGains gains;
    AdaptiveDroopConfig adaptive;
    CcmExitPolicy ccm_exit;
    bool secondary_enabled = true;
    double bus_reference = 36.0;  // secondary loop set point [V]

    void validate() const;

    bool operator==(const ControllerConfig&) const = default;
};

struct Measurements {
    double terminal_voltage = 0.0;  // V_DCj
    double output_current = 0.0;    // I_j
    double inductor_current = 0.0;  // i_L
    double bus_voltage = 0.0;
    double average_current = 0.0;   // I_ave from the comm layer
};

/// Cascaded voltage/current controller of one converter, plus its droop,
/// secondary and adaptive-gain state.
class ConverterController {
public:
    explicit ConverterController(ControllerConfig cfg);

    /// One control sample (rate Fs). Returns the duty ratio in [0, 1].
    double step(const Measurements& m, double dt);

    /// Slow-rate work at each update instant: adaptive gain update, CCM
    /// entry on over-current (inductor or output) and CCM exit bookkeeping.
    void update(const Measurements& m);

    void activate_adaptive();
    void set_droop_enabled(bool enabled);
    void set_load_factor(double k) { cfg_.adaptive.load_factor = k; }

    const ControllerConfig& config() const { return cfg_; }
    const AdaptiveDroopState& adaptive_state() const { return adaptive_; }
    const SecondaryState& secondary_state() const { return secondary_; }
    const PiState& voltage_loop() const { return voltage_pi_; }
    const PiState& current_loop() const { return current_pi_; }

    bool droop_enabled() const { return droop_enabled_; }
    bool adaptive_active() const { return adaptive_active_; }
    ControlMode mode() const { return adaptive_.mode; }

    /// R_d applied to the reference: zero while droop is disabled.
    double droop_gain() const { return droop_enabled_ ? adaptive_.droop : 0.0; }
    double voltage_reference() const { return voltage_reference_; }
    double current_demand() const { return current_demand_; }
    double current_reference() const { return current_reference_; }
    double duty() const { return duty_; }

private:
    ControllerConfig cfg_;
    PiState voltage_pi_;
    PiState current_pi_;
    SecondaryState secondary_;
    AdaptiveDroopState adaptive_;
    bool droop_enabled_ = false;
    bool adaptive_active_ = false;
    int ccm_exit_count_ = 0;

    double voltage_reference_ = 0.0;
    double current_demand_ = 0.0;
    double current_reference_ = 0.0;
    double duty_ = 0.0;
};

/// Free-function form of ConverterController::step.
double controller_step(ConverterController& controller, const Measurements& m, double dt);

} // namespace dcshare

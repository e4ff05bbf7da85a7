/*
 * Copyright (c) 2026 dcshare contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "dcshare/control.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dcshare {

double PiState::update(double error, double dt)
{
    integrator = std::clamp(integrator + ki * error * dt, lo, hi);
    return std::clamp(kp * error + integrator, lo, hi);
}

std::pair<PiState, double> pi_step(PiState state, double error, double dt)
{
    const double out = state.update(error, dt);
    return {state, out};
}

std::string_view to_string(ControlMode mode)
{
    switch (mode) {
    case ControlMode::DroopVcm:
        return "VCM";
    case ControlMode::Ccm:
        return "CCM";
    }
    return "?";
}

AdaptiveDroopConfig AdaptiveDroopConfig::for_nominal(double nominal_voltage)
{
    AdaptiveDroopConfig cfg;
    cfg.voltage_min = 0.9 * nominal_voltage;
    cfg.voltage_max = 1.1 * nominal_voltage;
    return cfg;
}

void AdaptiveDroopConfig::validate(double nominal_voltage) const
{
    auto fail = [](const std::string& what) { throw DomainError("adaptive droop: " + what); };
    if (!(delta > 0.0))
        fail("delta must be > 0");
    if (!(gamma > 0.0))
        fail("gamma must be > 0");
    if (!(load_factor > 0.0))
        fail("load factor must be > 0");
    if (!(update_period > 0.0))
        fail("update period must be > 0");
    if (!(voltage_min < nominal_voltage && nominal_voltage < voltage_max)) {
        std::ostringstream os;
        os << "voltage band [" << voltage_min << ", " << voltage_max << "] must bracket " << nominal_voltage << " V";
        fail(os.str());
    }
    if (!(initial_droop >= 0.0))
        fail("initial droop must be >= 0");
    if (!(max_droop > initial_droop))
        fail("max droop must exceed the initial droop");
}

AdaptiveDroopState adaptive_droop_update(const AdaptiveDroopConfig& cfg,
                                         const AdaptiveDroopState& st,
                                         double output_current,
                                         double average_current,
                                         double terminal_voltage,
                                         double nominal_current)
{
    AdaptiveDroopState next = st;
    if (!std::isfinite(output_current) || !std::isfinite(average_current) || !std::isfinite(terminal_voltage)) {
        next.fault = true;
        return next;
    }
    next.fault = false;

    if (output_current > nominal_current) {
        next.mode = ControlMode::Ccm;
        return next;
    }
    if (st.mode == ControlMode::Ccm)
        return next;

    const double residual = output_current - cfg.load_factor * average_current;
    next.converged = std::abs(residual) < cfg.gamma;
    if (next.converged)
        return next;

    if (terminal_voltage < cfg.voltage_min || terminal_voltage > cfg.voltage_max)
        return next;

    const double step = residual > 0.0 ? cfg.delta : -cfg.delta;
    next.droop = std::clamp(cfg.initial_droop + st.droop_old + step, 0.0, cfg.max_droop);
    next.droop_old = next.droop - cfg.initial_droop;
    return next;
}

SecondaryState SecondaryState::make(double kp, double ki, double nominal_voltage)
{
    SecondaryState s;
    s.pi.kp = kp;
    s.pi.ki = ki;
    s.pi.lo = -0.1 * nominal_voltage;
    s.pi.hi = 0.1 * nominal_voltage;
    return s;
}

std::pair<SecondaryState, double> secondary_step(SecondaryState state, double bus_voltage,
                                                 double bus_reference, double dt)
{
    state.correction = state.pi.update(bus_reference - bus_voltage, dt);
    return {state, state.correction};
}

void ControllerConfig::validate() const
{
    params.validate();
    adaptive.validate(params.nominal_output_voltage);
    if (!(gains.current_limit_factor > 1.0))
        throw DomainError("current limit factor must exceed 1 so over-current stays detectable");
    if (!(ccm_exit.hysteresis >= 0.0 && ccm_exit.hysteresis < 1.0) || ccm_exit.exit_periods < 1)
        throw DomainError("invalid CCM exit policy");
    if (!(bus_reference > 0.0))
        throw DomainError("bus reference must be > 0");
}

ConverterController::ConverterController(ControllerConfig cfg)
    : cfg_(std::move(cfg))
{
    const auto& g = cfg_.gains;
    const double i_nom = cfg_.params.nominal_current();

    voltage_pi_.kp = g.voltage_kp;
    voltage_pi_.ki = g.voltage_ki;
    voltage_pi_.lo = 0.0;
    voltage_pi_.hi = g.current_limit_factor * i_nom;

    current_pi_.kp = g.current_kp;
    current_pi_.ki = g.current_ki;
    current_pi_.lo = 0.0;
    current_pi_.hi = 1.0;

    secondary_ = SecondaryState::make(g.secondary_kp, g.secondary_ki, cfg_.params.nominal_output_voltage);
    adaptive_ = AdaptiveDroopState::initial(cfg_.adaptive);
}

double ConverterController::step(const Measurements& m, double dt)
{
    if (cfg_.secondary_enabled)
        secondary_ = secondary_step(secondary_, m.bus_voltage, cfg_.bus_reference, dt).first;

    voltage_reference_ = droop_reference(cfg_.params.nominal_output_voltage, droop_gain(), m.output_current,
                                         secondary_.correction);
    current_demand_ = voltage_pi_.update(voltage_reference_ - m.terminal_voltage, dt);
    current_reference_ = adaptive_.mode == ControlMode::Ccm ? cfg_.params.nominal_current() : current_demand_;
    duty_ = current_pi_.update(current_reference_ - m.inductor_current, dt);
    return duty_;
}

void ConverterController::update(const Measurements& m)
{
    const double i_nom = cfg_.params.nominal_current();
    const bool was_ccm = adaptive_.mode == ControlMode::Ccm;
    if (droop_enabled_ && adaptive_active_)
        adaptive_ = adaptive_droop_update(cfg_.adaptive, adaptive_, m.output_current, m.average_current,
                                          m.terminal_voltage, i_nom);

    // Over-current protection does not depend on the adaptive algorithm
    // running, and also watches the inductor during transients.
    if (m.inductor_current > i_nom || m.output_current > i_nom)
        adaptive_.mode = ControlMode::Ccm;

    // The exit window starts on the update after entry.
    if (adaptive_.mode != ControlMode::Ccm || !was_ccm) {
        ccm_exit_count_ = 0;
        return;
    }
    if (current_demand_ < (1.0 - cfg_.ccm_exit.hysteresis) * i_nom)
        ++ccm_exit_count_;
    else
        ccm_exit_count_ = 0;
    if (ccm_exit_count_ >= cfg_.ccm_exit.exit_periods) {
        adaptive_.mode = ControlMode::DroopVcm;
        ccm_exit_count_ = 0;
        // Bumpless handover: the voltage loop resumes from the current the
        // inductor is carrying instead of its unwound integrator.
        voltage_pi_.integrator = std::clamp(m.inductor_current, voltage_pi_.lo, voltage_pi_.hi);
    }
}

void ConverterController::activate_adaptive()
{
    droop_enabled_ = true;
    adaptive_active_ = true;
}

void ConverterController::set_droop_enabled(bool enabled)
{
    droop_enabled_ = enabled;
    if (!enabled)
        adaptive_active_ = false;
}

double controller_step(ConverterController& controller, const Measurements& m, double dt)
{
    return controller.step(m, dt);
}

} // namespace dcshare

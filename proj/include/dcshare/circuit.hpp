/*
 * Copyright (c) 2026 dcshare contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dcshare/rk4.hpp"

namespace dcshare {

/// Raised for physically meaningless inputs (non-finite values, non-positive
/// resistances, oversized steps).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Electrical ratings of one buck converter. Defaults are the 100 W / 36 V
/// laboratory converter.
struct ConverterParams {
    double input_voltage = 60.0;            // Vg [V]
    double nominal_output_voltage = 36.0;   // V_ref* [V]
    double rated_power = 100.0;             // [W]
    double inductance = 2.0e-3;             // [H]
    double capacitance = 100.0e-6;          // [F]
    double switching_frequency = 25.0e3;    // [Hz]

    /// Rated output current, P / V_ref*.
    double nominal_current() const { return rated_power / nominal_output_voltage; }

    /// Largest plant step the averaged model accepts: half a switching period.
    double max_step() const { return 0.5 / switching_frequency; }

    void validate() const;

    bool operator==(const ConverterParams&) const = default;
};

/// Star network: every converter feeds the common bus node through its own
/// cable, and a single resistive load hangs off the bus.
struct NetworkConfig {
    std::vector<double> cable_resistances;  // R_Lj [ohm], one per converter
    double load_resistance = 6.48;          // R_L [ohm]

    std::size_t size() const { return cable_resistances.size(); }
    void validate() const;

    bool operator==(const NetworkConfig&) const = default;
};

/// Load resistance that draws the combined rated power at nominal voltage.
double rated_load_resistance(std::span<const ConverterParams> params);

/// Averaged plant state. Index j is converter j.
struct PlantState {
    std::vector<double> inductor_current;   // i_L [A]
    std::vector<double> capacitor_voltage;  // v_C = V_DCj [V]

    static PlantState zeros(std::size_t n) { return {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)}; }
    std::size_t size() const { return inductor_current.size(); }
    bool finite() const;

    bool operator==(const PlantState&) const = default;
};

/// Algebraic solution of the resistive network for given terminal voltages.
struct NetworkSolution {
    double bus_voltage = 0.0;
    std::vector<double> branch_currents;  // I_j = (V_DCj - V_bus) / R_Lj
    double load_current = 0.0;            // V_bus / R_L
};

/// Bus voltage from the single-node nodal equation.
double solve_bus_voltage(std::span<const double> terminal_voltages, const NetworkConfig& network);

/// Bus voltage plus every branch current.
NetworkSolution solve_network(std::span<const double> terminal_voltages, const NetworkConfig& network);

/// Writes the branch currents into `out` and returns the bus voltage; no
/// validation and no allocation. Used in the integrator's inner loop.
double solve_network_unchecked(std::span<const double> terminal_voltages,
                               const NetworkConfig& network,
                               std::span<double> out);

/// Duty-averaged buck converters coupled through the network. Holds the
/// integrator scratch so the simulation loop does not allocate per step.
class AveragedPlant {
public:
    AveragedPlant() = default;

    /// Advances `state` by one RK4 step of size `dt` with the duties held
    /// constant over the step.
    void step(PlantState& state,
              std::span<const double> duties,
              const NetworkConfig& network,
              std::span<const ConverterParams> params,
              double dt);

    /// Time derivative of the packed state [i_L0, v_C0, i_L1, v_C1, ...].
    static void derivative(std::span<const double> x,
                           std::span<double> dxdt,
                           std::span<const double> duties,
                           const NetworkConfig& network,
                           std::span<const ConverterParams> params,
                           std::span<double> scratch_v,
                           std::span<double> scratch_i);

private:
    Rk4 rk4_;
    std::vector<double> packed_;
    std::vector<double> scratch_v_;
    std::vector<double> scratch_i_;
};

/// One plant step as a value-returning function.
PlantState plant_step(const PlantState& state,
                      std::span<const double> duties,
                      const NetworkConfig& network,
                      std::span<const ConverterParams> params,
                      double dt);

} // namespace dcshare

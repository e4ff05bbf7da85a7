/*
 * Copyright (c) 2026 dcshare contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "dcshare/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dcshare {

namespace {

void require(bool ok, const std::string& what)
{
    if (!ok)
        throw DomainError(what);
}

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

} // namespace

void ConverterParams::validate() const
{
    require(positive_finite(input_voltage), "converter input voltage must be > 0");
    require(positive_finite(nominal_output_voltage), "converter nominal output voltage must be > 0");
    require(positive_finite(rated_power), "converter rated power must be > 0");
    require(positive_finite(inductance), "converter inductance must be > 0");
    require(positive_finite(capacitance), "converter capacitance must be > 0");
    require(positive_finite(switching_frequency), "converter switching frequency must be > 0");
}

void NetworkConfig::validate() const
{
    require(!cable_resistances.empty(), "network needs at least one converter branch");
    for (std::size_t j = 0; j < cable_resistances.size(); ++j) {
        if (!positive_finite(cable_resistances[j])) {
            std::ostringstream os;
            os << "cable resistance " << j + 1 << " must be > 0 (got " << cable_resistances[j] << ")";
            throw DomainError(os.str());
        }
    }
    require(positive_finite(load_resistance), "load resistance must be > 0");
}

double rated_load_resistance(std::span<const ConverterParams> params)
{
    require(!params.empty(), "no converters");
    double total_power = 0.0;
    for (const auto& p : params)
        total_power += p.rated_power;
    const double v = params.front().nominal_output_voltage;
    return v * v / total_power;
}

bool PlantState::finite() const
{
    auto ok = [](double v) { return std::isfinite(v); };
    return std::all_of(inductor_current.begin(), inductor_current.end(), ok) &&
           std::all_of(capacitor_voltage.begin(), capacitor_voltage.end(), ok);
}

double solve_network_unchecked(std::span<const double> terminal_voltages,
                               const NetworkConfig& network,
                               std::span<double> out)
{
    const auto& r = network.cable_resistances;
    double num = 0.0;
    double den = 1.0 / network.load_resistance;
    for (std::size_t j = 0; j < r.size(); ++j) {
        num += terminal_voltages[j] / r[j];
        den += 1.0 / r[j];
    }
    const double v_bus = num / den;
    for (std::size_t j = 0; j < r.size(); ++j)
        out[j] = (terminal_voltages[j] - v_bus) / r[j];
    return v_bus;
}

double solve_bus_voltage(std::span<const double> terminal_voltages, const NetworkConfig& network)
{
    return solve_network(terminal_voltages, network).bus_voltage;
}

NetworkSolution solve_network(std::span<const double> terminal_voltages, const NetworkConfig& network)
{
    network.validate();
    require(terminal_voltages.size() == network.size(), "terminal voltage count does not match network");
    for (double v : terminal_voltages)
        require(std::isfinite(v), "terminal voltage is not finite");

    NetworkSolution sol;
    sol.branch_currents.resize(network.size());
    sol.bus_voltage = solve_network_unchecked(terminal_voltages, network, sol.branch_currents);
    sol.load_current = sol.bus_voltage / network.load_resistance;
    return sol;
}

void AveragedPlant::derivative(std::span<const double> x,
                               std::span<double> dxdt,
                               std::span<const double> duties,
                               const NetworkConfig& network,
                               std::span<const ConverterParams> params,
                               std::span<double> scratch_v,
                               std::span<double> scratch_i)
{
    const std::size_t n = params.size();
    for (std::size_t j = 0; j < n; ++j)
        scratch_v[j] = x[2 * j + 1];
    solve_network_unchecked(scratch_v, network, scratch_i);

    for (std::size_t j = 0; j < n; ++j) {
        const auto& p = params[j];
        const double i_l = x[2 * j];
        const double v_c = x[2 * j + 1];
        dxdt[2 * j] = (duties[j] * p.input_voltage - v_c) / p.inductance;
        dxdt[2 * j + 1] = (i_l - scratch_i[j]) / p.capacitance;
    }
}

void AveragedPlant::step(PlantState& state,
                         std::span<const double> duties,
                         const NetworkConfig& network,
                         std::span<const ConverterParams> params,
                         double dt)
{
    const std::size_t n = params.size();
    require(state.size() == n && state.capacitor_voltage.size() == n, "plant state size does not match converters");
    require(duties.size() == n, "duty count does not match converters");
    require(network.size() == n, "network size does not match converters");
    require(std::isfinite(dt) && dt > 0.0, "plant step must be > 0");
    for (const auto& p : params) {
        if (dt > p.max_step() * (1.0 + 1e-12)) {
            std::ostringstream os;
            os << "plant step " << dt << " s exceeds the maximum " << p.max_step() << " s (half a switching period)";
            throw DomainError(os.str());
        }
    }
    for (double d : duties)
        require(d >= 0.0 && d <= 1.0, "duty ratio outside [0, 1]");

    packed_.resize(2 * n);
    scratch_v_.resize(n);
    scratch_i_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        packed_[2 * j] = state.inductor_current[j];
        packed_[2 * j + 1] = state.capacitor_voltage[j];
    }

    auto rhs = [&](double, std::span<const double> x, std::span<double> dxdt) {
        derivative(x, dxdt, duties, network, params, scratch_v_, scratch_i_);
    };
    rk4_.step(rhs, 0.0, packed_, dt);

    for (std::size_t j = 0; j < n; ++j) {
        state.inductor_current[j] = packed_[2 * j];
        state.capacitor_voltage[j] = packed_[2 * j + 1];
    }
}

PlantState plant_step(const PlantState& state,
                      std::span<const double> duties,
                      const NetworkConfig& network,
                      std::span<const ConverterParams> params,
                      double dt)
{
    PlantState next = state;
    AveragedPlant plant;
    plant.step(next, duties, network, params, dt);
    return next;
}

} // namespace dcshare

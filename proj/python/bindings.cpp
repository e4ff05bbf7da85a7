/*
 * Copyright (c) 2026 dcshare contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include <optional>
#include <string>
#include <vector>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "dcshare/analysis.hpp"
#include "dcshare/circuit.hpp"
#include "dcshare/control.hpp"
#include "dcshare/scenario.hpp"
#include "dcshare/scenario_file.hpp"

namespace py = pybind11;
using namespace dcshare;

namespace {

py::array_t<double> column(const std::vector<TraceRecord>& trace, double TraceRecord::*field)
{
    py::array_t<double> out(static_cast<py::ssize_t>(trace.size()));
    auto v = out.mutable_unchecked<1>();
    for (std::size_t k = 0; k < trace.size(); ++k)
        v(static_cast<py::ssize_t>(k)) = trace[k].*field;
    return out;
}

// Samples x converters.
py::array_t<double> matrix(const std::vector<TraceRecord>& trace, std::vector<double> TraceRecord::*field,
                           std::size_t n)
{
    py::array_t<double> out({static_cast<py::ssize_t>(trace.size()), static_cast<py::ssize_t>(n)});
    auto v = out.mutable_unchecked<2>();
    for (std::size_t k = 0; k < trace.size(); ++k) {
        for (std::size_t j = 0; j < n; ++j)
            v(static_cast<py::ssize_t>(k), static_cast<py::ssize_t>(j)) = (trace[k].*field)[j];
    }
    return out;
}

py::dict summary_dict(const Summary& s)
{
    py::dict d;
    d["converged"] = s.converged;
    d["convergence_time"] = s.convergence_time;
    d["dI_pre_event"] = s.mismatch_pre_event;
    d["dI_final"] = s.mismatch_final;
    d["max_bus_deviation"] = s.max_bus_deviation;
    d["steady_bus_deviation"] = s.steady_bus_deviation;
    d["final_R_d"] = s.final_droop;
    d["final_I"] = s.final_current;
    d["final_band_residual"] = s.final_band_residual;
    std::vector<std::string> modes;
    for (auto m : s.final_mode)
        modes.emplace_back(to_string(m));
    d["final_mode"] = modes;
    d["ccm_entries"] = s.ccm_entries;
    d["diverged"] = s.diverged;
    d["diagnostic"] = s.diagnostic;
    return d;
}

py::dict trace_dict(const std::vector<TraceRecord>& trace, std::size_t n)
{
    py::dict d;
    d["time"] = column(trace, &TraceRecord::time);
    d["I"] = matrix(trace, &TraceRecord::current, n);
    d["V_DC"] = matrix(trace, &TraceRecord::terminal_voltage, n);
    d["R_d"] = matrix(trace, &TraceRecord::droop, n);
    d["i_L"] = matrix(trace, &TraceRecord::inductor_current, n);
    d["i_ref"] = matrix(trace, &TraceRecord::current_reference, n);
    d["v_ref"] = matrix(trace, &TraceRecord::voltage_reference, n);
    d["correction"] = matrix(trace, &TraceRecord::correction, n);
    d["K"] = matrix(trace, &TraceRecord::load_factor, n);
    d["R_cable"] = matrix(trace, &TraceRecord::cable_resistance, n);
    d["V_bus"] = column(trace, &TraceRecord::bus_voltage);
    d["I_load"] = column(trace, &TraceRecord::load_current);
    d["R_load"] = column(trace, &TraceRecord::load_resistance);
    d["dI"] = column(trace, &TraceRecord::mismatch);

    py::array_t<bool> ccm({static_cast<py::ssize_t>(trace.size()), static_cast<py::ssize_t>(n)});
    auto c = ccm.mutable_unchecked<2>();
    for (std::size_t k = 0; k < trace.size(); ++k) {
        for (std::size_t j = 0; j < n; ++j)
            c(static_cast<py::ssize_t>(k), static_cast<py::ssize_t>(j)) = trace[k].mode[j] == ControlMode::Ccm;
    }
    d["ccm"] = ccm;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Parallel DC/DC converter current-sharing simulator";

    auto domain_error = py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ScenarioError>(m, "ScenarioError", domain_error.ptr());
    py::register_exception<UnknownParameter>(m, "UnknownParameter", PyExc_KeyError);

    py::enum_<ControlMode>(m, "ControlMode")
        .value("VCM", ControlMode::DroopVcm)
        .value("CCM", ControlMode::Ccm);

    py::class_<ConverterParams>(m, "ConverterParams")
        .def(py::init<>())
        .def_readwrite("input_voltage", &ConverterParams::input_voltage)
        .def_readwrite("nominal_output_voltage", &ConverterParams::nominal_output_voltage)
        .def_readwrite("rated_power", &ConverterParams::rated_power)
        .def_readwrite("inductance", &ConverterParams::inductance)
        .def_readwrite("capacitance", &ConverterParams::capacitance)
        .def_readwrite("switching_frequency", &ConverterParams::switching_frequency)
        .def_property_readonly("nominal_current", &ConverterParams::nominal_current);

    py::class_<AdaptiveDroopConfig>(m, "AdaptiveDroopConfig")
        .def(py::init([](double nominal_voltage) { return AdaptiveDroopConfig::for_nominal(nominal_voltage); }),
             py::arg("nominal_voltage") = 36.0)
        .def_readwrite("initial_droop", &AdaptiveDroopConfig::initial_droop)
        .def_readwrite("delta", &AdaptiveDroopConfig::delta)
        .def_readwrite("gamma", &AdaptiveDroopConfig::gamma)
        .def_readwrite("load_factor", &AdaptiveDroopConfig::load_factor)
        .def_readwrite("update_period", &AdaptiveDroopConfig::update_period)
        .def_readwrite("voltage_min", &AdaptiveDroopConfig::voltage_min)
        .def_readwrite("voltage_max", &AdaptiveDroopConfig::voltage_max)
        .def_readwrite("max_droop", &AdaptiveDroopConfig::max_droop);

    py::class_<AdaptiveDroopState>(m, "AdaptiveDroopState")
        .def(py::init<>())
        .def_static("initial", &AdaptiveDroopState::initial)
        .def_readwrite("droop_old", &AdaptiveDroopState::droop_old)
        .def_readwrite("droop", &AdaptiveDroopState::droop)
        .def_readwrite("mode", &AdaptiveDroopState::mode)
        .def_readwrite("converged", &AdaptiveDroopState::converged)
        .def_readwrite("fault", &AdaptiveDroopState::fault);

    m.def("adaptive_droop_update", &adaptive_droop_update, py::arg("cfg"), py::arg("state"),
          py::arg("output_current"), py::arg("average_current"), py::arg("terminal_voltage"),
          py::arg("nominal_current"), "One pass of the adaptive droop-gain update; returns the new state.");
    m.def("droop_reference", &droop_reference, py::arg("nominal_voltage"), py::arg("droop_gain"),
          py::arg("output_current"), py::arg("correction") = 0.0);

    m.def(
        "solve_bus_voltage",
        [](const std::vector<double>& voltages, const std::vector<double>& cables, double load) {
            return solve_bus_voltage(voltages, NetworkConfig{cables, load});
        },
        py::arg("terminal_voltages"), py::arg("cable_resistances"), py::arg("load_resistance"));

    m.def(
        "steady_state_currents",
        [](double v1, double v2, double r1, double r2, double rl) {
            const auto c = steady_state_currents(v1, v2, r1, r2, rl);
            return py::make_tuple(c.i1, c.i2);
        },
        py::arg("v_dc1"), py::arg("v_dc2"), py::arg("r_l1"), py::arg("r_l2"), py::arg("r_load"));
    m.def("current_mismatch", &current_mismatch, py::arg("v_dc1"), py::arg("v_dc2"), py::arg("r_l1"),
          py::arg("r_l2"), py::arg("r_load"), py::arg("r_d1") = 0.0, py::arg("r_d2") = 0.0);
    m.def("ratio_condition_residual", &ratio_condition_residual, py::arg("r_eff1"), py::arg("r_eff2"),
          py::arg("v_dc1"), py::arg("v_dc2"));
    m.def(
        "analyze_sharing",
        [](double v1, double v2, double r1, double r2, double rl, double rd1, double rd2) {
            const auto a = analyze_sharing(v1, v2, r1, r2, rl, rd1, rd2);
            py::dict d;
            d["I_1"] = a.i1;
            d["I_2"] = a.i2;
            d["dI"] = a.mismatch;
            d["denominator"] = a.denominator;
            d["ratio_residual"] = a.ratio_residual;
            return d;
        },
        py::arg("v_dc1"), py::arg("v_dc2"), py::arg("r_l1"), py::arg("r_l2"), py::arg("r_load"),
        py::arg("r_d1") = 0.0, py::arg("r_d2") = 0.0);
    m.def(
        "vi_characteristic",
        [](double rd, double correction, std::optional<double> i_max, std::size_t points,
           const ConverterParams& params) {
            std::vector<std::pair<double, double>> out;
            for (const auto& p :
                 vi_characteristic(params, rd, correction, 0.0, i_max.value_or(params.nominal_current()), points))
                out.emplace_back(p.current, p.voltage);
            return out;
        },
        py::arg("droop_gain"), py::arg("correction") = 0.0, py::arg("i_max") = py::none(), py::arg("points") = 11,
        py::arg("params") = ConverterParams{}, "(I, V) samples of the droop line over [0, i_max].");

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def_static("defaults", &ScenarioConfig::defaults)
        .def_readwrite("name", &ScenarioConfig::name)
        .def_readwrite("description", &ScenarioConfig::description)
        .def_readwrite("seed", &ScenarioConfig::seed)
        .def_property_readonly("converters", &ScenarioConfig::size)
        .def("validate", &ScenarioConfig::validate)
        .def("__eq__", [](const ScenarioConfig& a, const ScenarioConfig& b) { return a == b; })
        .def("__repr__", [](const ScenarioConfig& c) { return "<ScenarioConfig '" + c.name + "'>"; });

    m.def("load_scenario", &load_scenario, py::arg("path"));
    m.def("parse_scenario", &parse_scenario, py::arg("text"), py::arg("source") = "<scenario>");
    m.def("render_scenario", &render_scenario, py::arg("cfg"));
    m.def(
        "apply_override",
        [](ScenarioConfig cfg, const std::string& path, double value) {
            apply_override(cfg, path, value);
            cfg.validate();
            return cfg;
        },
        py::arg("cfg"), py::arg("path"), py::arg("value"), "Copy of cfg with one parameter changed.");
    m.def("override_paths", &override_paths);

    m.def(
        "run_scenario",
        [](const ScenarioConfig& cfg) {
            RunResult r;
            {
                py::gil_scoped_release unlocked;
                r = run_scenario(cfg);
            }
            py::dict d;
            d["summary"] = summary_dict(r.summary);
            d["trace"] = trace_dict(r.trace, cfg.size());
            return d;
        },
        py::arg("cfg"), "Runs a scenario; returns {'summary': dict, 'trace': dict of numpy arrays}.");
}

# Copyright (c) 2026 dcshare contributors
#
# SPDX-License-Identifier: Apache-2.0

"""Current sharing among parallel DC/DC converters: simulation and analysis."""

from ._core import (
    AdaptiveDroopConfig,
    AdaptiveDroopState,
    ControlMode,
    ConverterParams,
    DomainError,
    ScenarioConfig,
    ScenarioError,
    UnknownParameter,
    adaptive_droop_update,
    analyze_sharing,
    apply_override,
    current_mismatch,
    droop_reference,
    load_scenario,
    override_paths,
    parse_scenario,
    ratio_condition_residual,
    render_scenario,
    run_scenario,
    solve_bus_voltage,
    steady_state_currents,
    vi_characteristic,
)

__all__ = [
    "AdaptiveDroopConfig",
    "AdaptiveDroopState",
    "ControlMode",
    "ConverterParams",
    "DomainError",
    "ScenarioConfig",
    "ScenarioError",
    "UnknownParameter",
    "adaptive_droop_update",
    "analyze_sharing",
    "apply_override",
    "current_mismatch",
    "droop_reference",
    "load_scenario",
    "override_paths",
    "parse_scenario",
    "ratio_condition_residual",
    "render_scenario",
    "run_scenario",
    "solve_bus_voltage",
    "steady_state_currents",
    "vi_characteristic",
]

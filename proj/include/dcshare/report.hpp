/*
 * Copyright (c) 2026 dcshare contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "dcshare/scenario.hpp"

namespace dcshare {

/// time,I_1..I_N,V_DC1..V_DCN,V_bus,R_d1..R_dN,mode1..modeN,dI
std::string trace_csv_header(std::size_t converters);

/// Numbers use the shortest representation that round-trips, so equal
/// traces give byte-identical files.
void write_trace_csv(std::ostream& os, const std::vector<TraceRecord>& trace, std::size_t converters);

/// YAML summary of one run.
void write_summary(std::ostream& os, const ScenarioConfig& cfg, const Summary& summary);

struct SweepPoint {
    std::size_t index = 0;
    double value = 0.0;
    Summary summary;
};

/// `steps` evenly spaced values from `from` to `to` inclusive (just `from`
/// when steps == 1).
std::vector<double> sweep_grid(double from, double to, int steps);

/// Runs one scenario per grid value of `param` on up to `jobs` threads.
/// Results are ordered by grid index. Throws UnknownParameter or DomainError
/// before any run starts if a point is invalid.
std::vector<SweepPoint> run_sweep(const ScenarioConfig& base, const std::string& param, double from, double to,
                                  int steps, unsigned jobs = 1);

void write_sweep_csv(std::ostream& os, const std::string& param, const std::vector<SweepPoint>& points,
                     std::size_t converters);

} // namespace dcshare

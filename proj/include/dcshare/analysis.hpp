/*
 * Copyright (c) 2026 dcshare contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstddef>
#include <vector>

#include "dcshare/circuit.hpp"

namespace dcshare {

// Closed-form two-converter sharing relations. R_Lj are cable resistances,
// R_L the load; when droop gains are given, each cable is replaced by
// R'_Lj = R_Lj + R_dj and V_DCj is read as the voltage behind the virtual
// resistor.

struct BranchCurrents {
    double i1 = 0.0;
    double i2 = 0.0;
};

/// D = R_L*R_L1 + R_L*R_L2 + R_L1*R_L2.
double sharing_denominator(double r_l1, double r_l2, double r_load);

BranchCurrents steady_state_currents(double v_dc1, double v_dc2, double r_l1, double r_l2, double r_load);

/// I_1 - I_2 straight from its closed form, not by subtracting the currents.
double current_mismatch(double v_dc1, double v_dc2, double r_l1, double r_l2, double r_load,
                        double r_d1 = 0.0, double r_d2 = 0.0);

/// R'_L1 / R'_L2 - V_DC1 / V_DC2; zero when the pair shares equally.
double ratio_condition_residual(double r_eff1, double r_eff2, double v_dc1, double v_dc2);

struct SharingAnalysis {
    double i1 = 0.0;
    double i2 = 0.0;
    double mismatch = 0.0;
    double denominator = 0.0;
    double ratio_residual = 0.0;
};

SharingAnalysis analyze_sharing(double v_dc1, double v_dc2, double r_l1, double r_l2, double r_load,
                                double r_d1 = 0.0, double r_d2 = 0.0);

struct ViPoint {
    double current = 0.0;
    double voltage = 0.0;
};

/// Droop line V(I) = V_ref* + correction - R_d * I sampled at `points`
/// evenly spaced currents in [i_min, i_max] (within [0, I_nom]).
std::vector<ViPoint> vi_characteristic(const ConverterParams& params, double droop_gain,
                                       double secondary_correction, double i_min, double i_max,
                                       std::size_t points);

} // namespace dcshare

/*
 * Copyright (c) 2026 dcshare contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "dcshare/analysis.hpp"

#include <cmath>

namespace dcshare {

namespace {

void require_resistances(double r_l1, double r_l2, double r_load)
{
    if (!(r_l1 > 0.0 && r_l2 > 0.0 && r_load > 0.0))
        throw DomainError("resistances must be > 0");
}

} // namespace

double sharing_denominator(double r_l1, double r_l2, double r_load)
{
    return r_load * r_l1 + r_load * r_l2 + r_l1 * r_l2;
}

BranchCurrents steady_state_currents(double v_dc1, double v_dc2, double r_l1, double r_l2, double r_load)
{
    require_resistances(r_l1, r_l2, r_load);
    const double d = sharing_denominator(r_l1, r_l2, r_load);
    return {
        (r_l2 * v_dc1 + r_load * (v_dc1 - v_dc2)) / d,
        (r_l1 * v_dc2 + r_load * (v_dc2 - v_dc1)) / d,
    };
}

double current_mismatch(double v_dc1, double v_dc2, double r_l1, double r_l2, double r_load,
                        double r_d1, double r_d2)
{
    if (!(r_d1 >= 0.0 && r_d2 >= 0.0))
        throw DomainError("droop gains must be >= 0");
    const double r1 = r_l1 + r_d1;
    const double r2 = r_l2 + r_d2;
    require_resistances(r1, r2, r_load);
    const double d = sharing_denominator(r1, r2, r_load);
    // The 2*R_L term drops out when both sources sit at the same voltage.
    return (2.0 * r_load * (v_dc1 - v_dc2) + r2 * v_dc1 - r1 * v_dc2) / d;
}

double ratio_condition_residual(double r_eff1, double r_eff2, double v_dc1, double v_dc2)
{
    if (r_eff2 == 0.0 || v_dc2 == 0.0)
        throw DomainError("ratio condition needs nonzero R'_L2 and V_DC2");
    return r_eff1 / r_eff2 - v_dc1 / v_dc2;
}

SharingAnalysis analyze_sharing(double v_dc1, double v_dc2, double r_l1, double r_l2, double r_load,
                                double r_d1, double r_d2)
{
    const double r1 = r_l1 + r_d1;
    const double r2 = r_l2 + r_d2;
    const auto currents = steady_state_currents(v_dc1, v_dc2, r1, r2, r_load);

    SharingAnalysis a;
    a.i1 = currents.i1;
    a.i2 = currents.i2;
    a.mismatch = current_mismatch(v_dc1, v_dc2, r_l1, r_l2, r_load, r_d1, r_d2);
    a.denominator = sharing_denominator(r1, r2, r_load);
    a.ratio_residual = ratio_condition_residual(r1, r2, v_dc1, v_dc2);
    return a;
}

std::vector<ViPoint> vi_characteristic(const ConverterParams& params, double droop_gain,
                                       double secondary_correction, double i_min, double i_max,
                                       std::size_t points)
{
    const double i_nom = params.nominal_current();
    if (!(i_min >= 0.0 && i_max <= i_nom * (1.0 + 1e-12) && i_min <= i_max))
        throw DomainError("V-I current range must lie within [0, I_nom]");
    if (!(droop_gain >= 0.0))
        throw DomainError("droop gain must be >= 0");
    if (points == 0)
        return {};

    std::vector<ViPoint> out;
    out.reserve(points);
    for (std::size_t k = 0; k < points; ++k) {
        const double frac = points == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(points - 1);
        const double i = i_min + frac * (i_max - i_min);
        out.push_back({i, params.nominal_output_voltage + secondary_correction - droop_gain * i});
    }
    return out;
}

} // namespace dcshare

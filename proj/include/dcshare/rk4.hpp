/*
 * Copyright (c) 2026 dcshare contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dcshare {

/// Classical fixed-step 4th-order Runge-Kutta.
///
/// `rhs(t, x, dxdt)` must fill `dxdt` (same size as `x`). The state is
/// advanced in place. Scratch buffers live in the integrator so repeated
/// steps do not allocate.
class Rk4 {
public:
    explicit Rk4(std::size_t n = 0) { resize(n); }

    void resize(std::size_t n)
    {
        k1_.assign(n, 0.0);
        k2_.assign(n, 0.0);
        k3_.assign(n, 0.0);
        k4_.assign(n, 0.0);
        tmp_.assign(n, 0.0);
    }

    std::size_t size() const { return k1_.size(); }

    template <typename Rhs>
    void step(Rhs&& rhs, double t, std::span<double> x, double dt)
    {
        const std::size_t n = x.size();
        if (n != size())
            resize(n);

        rhs(t, std::span<const double>(x), std::span<double>(k1_));
        for (std::size_t i = 0; i < n; ++i)
            tmp_[i] = x[i] + 0.5 * dt * k1_[i];

        rhs(t + 0.5 * dt, std::span<const double>(tmp_), std::span<double>(k2_));
        for (std::size_t i = 0; i < n; ++i)
            tmp_[i] = x[i] + 0.5 * dt * k2_[i];

        rhs(t + 0.5 * dt, std::span<const double>(tmp_), std::span<double>(k3_));
        for (std::size_t i = 0; i < n; ++i)
            tmp_[i] = x[i] + dt * k3_[i];

        rhs(t + dt, std::span<const double>(tmp_), std::span<double>(k4_));
        for (std::size_t i = 0; i < n; ++i)
            x[i] += dt / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    }

private:
    std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

} // namespace dcshare

/*
 * Copyright (c) 2026 dcshare contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "dcshare/comm.hpp"

#include <cmath>
#include <sstream>

#include "dcshare/circuit.hpp"

namespace dcshare {

namespace {

// Absorbs rounding when publish and read instants are computed from step counts.
constexpr double kStampSlack = 1e-12;

} // namespace

void CommConfig::validate() const
{
    if (!(sample_period > 0.0))
        throw DomainError("comm sample period must be > 0");
    if (!(transport_delay >= 0.0))
        throw DomainError("comm transport delay must be >= 0");
    if (!(dropout_probability >= 0.0 && dropout_probability <= 1.0))
        throw DomainError("comm dropout probability must be in [0, 1]");
}

CommBus::CommBus(std::size_t converters, CommConfig cfg, std::uint64_t seed)
    : cfg_(cfg), slots_(converters), rng_(seed), drop_(cfg.dropout_probability)
{
    cfg_.validate();
}

void CommBus::initialize(std::span<const double> currents)
{
    if (currents.size() != slots_.size())
        throw CommError("comm initialization size does not match converter count");
    for (std::size_t j = 0; j < slots_.size(); ++j) {
        slots_[j].settled = currents[j];
        slots_[j].in_flight.clear();
    }
}

bool CommBus::publish(std::size_t converter, double current, double now)
{
    Slot& slot = slots_.at(converter);
    if (cfg_.dropout_probability > 0.0 && drop_(rng_))
        return false;

    const double horizon = now - cfg_.transport_delay + kStampSlack;
    while (!slot.in_flight.empty() && slot.in_flight.front().stamp <= horizon) {
        slot.settled = slot.in_flight.front().value;
        slot.in_flight.pop_front();
    }
    slot.in_flight.push_back({now, current});
    return true;
}

std::optional<double> CommBus::visible(std::size_t converter, double now) const
{
    const Slot& slot = slots_.at(converter);
    const double horizon = now - cfg_.transport_delay + kStampSlack;
    for (auto it = slot.in_flight.rbegin(); it != slot.in_flight.rend(); ++it) {
        if (it->stamp <= horizon)
            return it->value;
    }
    return slot.settled;
}

double CommBus::average_current(double now) const
{
    double sum = 0.0;
    for (std::size_t j = 0; j < slots_.size(); ++j) {
        const auto v = visible(j, now);
        if (!v) {
            std::ostringstream os;
            os << "no current visible for converter " << j + 1 << " at t=" << now << " s";
            throw CommError(os.str());
        }
        sum += *v;
    }
    return sum / static_cast<double>(slots_.size());
}

} // namespace dcshare

/*
 * Copyright (c) 2026 dcshare contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace dcshare {

struct CommConfig {
    double sample_period = 1e-3;     // [s]
    double transport_delay = 0.0;    // [s]
    double dropout_probability = 0.0;

    void validate() const;

    bool operator==(const CommConfig&) const = default;
};

class CommError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Low-rate broadcast of converter output currents.
///
/// Every publish is stamped; a reader at time `now` sees, per converter, the
/// newest value stamped at or before `now - transport_delay`. A dropped
/// publish leaves the previous value in place.
class CommBus {
public:
    CommBus(std::size_t converters, CommConfig cfg, std::uint64_t seed = 0);

    /// Seeds every converter's visible value, as if published at -infinity.
    void initialize(std::span<const double> currents);

    /// Returns false when the message was dropped.
    bool publish(std::size_t converter, double current, double now);

    /// Value of `converter` visible at `now`, if any.
    std::optional<double> visible(std::size_t converter, double now) const;

    /// Mean of the visible currents of all converters. Throws CommError if
    /// any converter has nothing visible yet.
    double average_current(double now) const;

    const CommConfig& config() const { return cfg_; }
    std::size_t size() const { return slots_.size(); }

private:
    struct Sample {
        double stamp;
        double value;
    };
    struct Slot {
        std::optional<double> settled;  // newest value already past the delay
        std::deque<Sample> in_flight;   // ascending stamps
    };

    CommConfig cfg_;
    std::vector<Slot> slots_;
    std::mt19937_64 rng_;
    std::bernoulli_distribution drop_;
};

} // namespace dcshare

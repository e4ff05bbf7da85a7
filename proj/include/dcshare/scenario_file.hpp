/*
 * Copyright (c) 2026 dcshare contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dcshare/scenario.hpp"

namespace dcshare {

/// Invalid scenario file. `line` is 1-based, 0 when no position is known.
class ScenarioError : public std::runtime_error {
public:
    ScenarioError(std::string source, int line, int column, const std::string& message);

    const std::string& source() const { return source_; }
    int line() const { return line_; }
    int column() const { return column_; }
    const std::string& message() const { return message_; }

private:
    std::string source_;
    int line_;
    int column_;
    std::string message_;
};

/// Parses scenario YAML. `source` names the text in error messages.
ScenarioConfig parse_scenario(std::string_view text, const std::string& source = "<scenario>");

ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Fully explicit YAML for `cfg` (no `defaults` section); parses back to an
/// equal configuration.
std::string render_scenario(const ScenarioConfig& cfg);

class UnknownParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Sets the dotted parameter `path` to `value`. Converter-level parameters
/// apply to every converter. Throws UnknownParameter for unrecognised paths.
void apply_override(ScenarioConfig& cfg, std::string_view path, double value);

/// Every path apply_override accepts (indexed paths shown with `<j>`).
std::vector<std::string> override_paths();

} // namespace dcshare

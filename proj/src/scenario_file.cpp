/*
 * Copyright (c) 2026 dcshare contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "dcshare/scenario_file.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace dcshare {

ScenarioError::ScenarioError(std::string source, int line, int column, const std::string& message)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << source;
          if (line > 0)
              os << ':' << line << ':' << column;
          os << ": " << message;
          return os.str();
      }()),
      source_(std::move(source)),
      line_(line),
      column_(column),
      message_(message)
{
}

namespace {

struct Flags {
    bool voltage_band = false;
    bool bus_reference = false;
};

class Reader {
public:
    explicit Reader(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(const YAML::Node& at, const std::string& msg) const
    {
        const auto mark = at.Mark();
        if (mark.is_null())
            throw ScenarioError(source_, 0, 0, msg);
        throw ScenarioError(source_, mark.line + 1, mark.column + 1, msg);
    }

    void expect_map(const YAML::Node& n, const std::string& where) const
    {
        if (!n.IsMap())
            fail(n, "'" + where + "' must be a mapping");
    }

    void check_keys(const YAML::Node& n, std::initializer_list<std::string_view> allowed,
                    const std::string& where) const
    {
        expect_map(n, where);
        for (auto it = n.begin(); it != n.end(); ++it) {
            const auto key = it->first.as<std::string>();
            bool ok = false;
            for (auto a : allowed)
                ok = ok || key == a;
            if (!ok)
                fail(it->first, "unknown key '" + key + "' in '" + where + "'");
        }
    }

    double number(const YAML::Node& n, const std::string& what) const
    {
        if (!n.IsScalar())
            fail(n, "'" + what + "' must be a number");
        double v = 0.0;
        try {
            v = n.as<double>();
        } catch (const YAML::BadConversion&) {
            fail(n, "'" + what + "' must be a number (got '" + n.Scalar() + "')");
        }
        if (!std::isfinite(v))
            fail(n, "'" + what + "' must be finite");
        return v;
    }

    double positive(const YAML::Node& n, const std::string& what) const
    {
        const double v = number(n, what);
        if (!(v > 0.0))
            fail(n, "'" + what + "' must be > 0");
        return v;
    }

    double non_negative(const YAML::Node& n, const std::string& what) const
    {
        const double v = number(n, what);
        if (!(v >= 0.0))
            fail(n, "'" + what + "' must be >= 0");
        return v;
    }

    long long integer(const YAML::Node& n, const std::string& what) const
    {
        const double v = number(n, what);
        if (v != std::floor(v))
            fail(n, "'" + what + "' must be an integer");
        return static_cast<long long>(v);
    }

    // Full 64-bit range; going through double would round large seeds.
    std::uint64_t seed(const YAML::Node& n) const
    {
        if (!n.IsScalar())
            fail(n, "'seed' must be a non-negative integer");
        const std::string& text = n.Scalar();
        std::uint64_t v = 0;
        const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{} || end != text.data() + text.size())
            fail(n, "'seed' must be a non-negative integer (got '" + text + "')");
        return v;
    }

    bool boolean(const YAML::Node& n, const std::string& what) const
    {
        if (!n.IsScalar())
            fail(n, "'" + what + "' must be true or false");
        try {
            return n.as<bool>();
        } catch (const YAML::BadConversion&) {
            fail(n, "'" + what + "' must be true or false (got '" + n.Scalar() + "')");
        }
    }

    std::string string(const YAML::Node& n, const std::string& what) const
    {
        if (!n.IsScalar())
            fail(n, "'" + what + "' must be a string");
        return n.Scalar();
    }

    std::vector<double> numbers(const YAML::Node& n, const std::string& what) const
    {
        if (!n.IsSequence())
            fail(n, "'" + what + "' must be a list of numbers");
        std::vector<double> out;
        for (const auto& e : n)
            out.push_back(number(e, what));
        return out;
    }

    const std::string& source() const { return source_; }

private:
    std::string source_;
};

void parse_params(const Reader& rd, const YAML::Node& n, ConverterParams& p)
{
    rd.check_keys(n, {"input_voltage", "nominal_output_voltage", "rated_power", "inductance", "capacitance",
                      "switching_frequency"},
                  "params");
    if (n["input_voltage"])
        p.input_voltage = rd.positive(n["input_voltage"], "input_voltage");
    if (n["nominal_output_voltage"])
        p.nominal_output_voltage = rd.positive(n["nominal_output_voltage"], "nominal_output_voltage");
    if (n["rated_power"])
        p.rated_power = rd.positive(n["rated_power"], "rated_power");
    if (n["inductance"])
        p.inductance = rd.positive(n["inductance"], "inductance");
    if (n["capacitance"])
        p.capacitance = rd.positive(n["capacitance"], "capacitance");
    if (n["switching_frequency"])
        p.switching_frequency = rd.positive(n["switching_frequency"], "switching_frequency");
}

void parse_gains(const Reader& rd, const YAML::Node& n, ControllerGains& g)
{
    rd.check_keys(n, {"current_kp", "current_ki", "voltage_kp", "voltage_ki", "secondary_kp", "secondary_ki",
                      "current_limit_factor"},
                  "gains");
    auto read = [&](const char* key, double& field) {
        if (n[key])
            field = rd.non_negative(n[key], key);
    };
    read("current_kp", g.current_kp);
    read("current_ki", g.current_ki);
    read("voltage_kp", g.voltage_kp);
    read("voltage_ki", g.voltage_ki);
    read("secondary_kp", g.secondary_kp);
    read("secondary_ki", g.secondary_ki);
    if (n["current_limit_factor"]) {
        g.current_limit_factor = rd.number(n["current_limit_factor"], "current_limit_factor");
        if (!(g.current_limit_factor > 1.0))
            rd.fail(n["current_limit_factor"], "'current_limit_factor' must be > 1");
    }
}

void parse_adaptive(const Reader& rd, const YAML::Node& n, AdaptiveDroopConfig& a, Flags& flags)
{
    rd.check_keys(n, {"initial_droop", "delta", "gamma", "load_factor", "update_period", "voltage_band",
                      "max_droop"},
                  "adaptive");
    if (n["initial_droop"])
        a.initial_droop = rd.non_negative(n["initial_droop"], "initial_droop");
    if (n["delta"])
        a.delta = rd.positive(n["delta"], "delta");
    if (n["gamma"])
        a.gamma = rd.positive(n["gamma"], "gamma");
    if (n["load_factor"])
        a.load_factor = rd.positive(n["load_factor"], "load_factor");
    if (n["update_period"])
        a.update_period = rd.positive(n["update_period"], "update_period");
    if (n["max_droop"])
        a.max_droop = rd.positive(n["max_droop"], "max_droop");
    if (n["voltage_band"]) {
        const auto band = rd.numbers(n["voltage_band"], "voltage_band");
        if (band.size() != 2 || !(band[0] < band[1]))
            rd.fail(n["voltage_band"], "'voltage_band' must be [V_min, V_max] with V_min < V_max");
        a.voltage_min = band[0];
        a.voltage_max = band[1];
        flags.voltage_band = true;
    }
}

void parse_controller(const Reader& rd, const YAML::Node& n, ControllerConfig& c, Flags& flags)
{
    if (n.IsNull())
        return;
    rd.check_keys(n, {"params", "gains", "adaptive", "ccm_exit", "secondary"}, "converter");
    if (n["params"])
        parse_params(rd, n["params"], c.params);
    if (n["gains"])
        parse_gains(rd, n["gains"], c.gains);
    if (n["adaptive"])
        parse_adaptive(rd, n["adaptive"], c.adaptive, flags);
    if (const auto x = n["ccm_exit"]) {
        rd.check_keys(x, {"hysteresis", "periods"}, "ccm_exit");
        if (x["hysteresis"]) {
            c.ccm_exit.hysteresis = rd.non_negative(x["hysteresis"], "hysteresis");
            if (!(c.ccm_exit.hysteresis < 1.0))
                rd.fail(x["hysteresis"], "'hysteresis' must be < 1");
        }
        if (x["periods"]) {
            const auto p = rd.integer(x["periods"], "periods");
            if (p < 1)
                rd.fail(x["periods"], "'periods' must be >= 1");
            c.ccm_exit.exit_periods = static_cast<int>(p);
        }
    }
    if (const auto s = n["secondary"]) {
        rd.check_keys(s, {"enabled", "bus_reference"}, "secondary");
        if (s["enabled"])
            c.secondary_enabled = rd.boolean(s["enabled"], "enabled");
        if (s["bus_reference"]) {
            c.bus_reference = rd.positive(s["bus_reference"], "bus_reference");
            flags.bus_reference = true;
        }
    }
}

void check_load_factors(const Reader& rd, const YAML::Node& at, const std::vector<double>& k, std::size_t n)
{
    double sum = 0.0;
    for (double v : k)
        sum += v;
    if (std::abs(sum - static_cast<double>(n)) > 1e-9) {
        std::ostringstream os;
        os << "load factors sum to " << sum << " but must sum to the converter count " << n;
        rd.fail(at, os.str());
    }
}

Event parse_event(const Reader& rd, const YAML::Node& n, std::size_t converters)
{
    rd.expect_map(n, "event");
    if (!n["time"])
        rd.fail(n, "event needs a 'time'");
    if (!n["kind"])
        rd.fail(n, "event needs a 'kind'");
    Event e;
    e.time = rd.non_negative(n["time"], "time");
    const auto kind_name = rd.string(n["kind"], "kind");
    const auto kind = event_kind_from_string(kind_name);
    if (!kind)
        rd.fail(n["kind"], "unknown event kind '" + kind_name + "'");
    e.kind = *kind;

    switch (e.kind) {
    case EventKind::ActivateAdaptiveDroop:
        rd.check_keys(n, {"time", "kind"}, "event");
        break;
    case EventKind::SetLoadFactors: {
        rd.check_keys(n, {"time", "kind", "values"}, "event");
        if (!n["values"])
            rd.fail(n, "set_load_factors needs 'values'");
        e.load_factors = rd.numbers(n["values"], "values");
        if (e.load_factors.size() != converters)
            rd.fail(n["values"], "set_load_factors needs one value per converter");
        for (double k : e.load_factors) {
            if (!(k > 0.0))
                rd.fail(n["values"], "load factors must be > 0");
        }
        check_load_factors(rd, n["values"], e.load_factors, converters);
        break;
    }
    case EventKind::SetLoadResistance:
        rd.check_keys(n, {"time", "kind", "value"}, "event");
        if (!n["value"])
            rd.fail(n, "set_load_resistance needs 'value'");
        e.value = rd.positive(n["value"], "value");
        break;
    case EventKind::SetCableResistance: {
        rd.check_keys(n, {"time", "kind", "converter", "value"}, "event");
        if (!n["converter"] || !n["value"])
            rd.fail(n, "set_cable_resistance needs 'converter' and 'value'");
        const auto j = rd.integer(n["converter"], "converter");
        if (j < 1 || static_cast<std::size_t>(j) > converters)
            rd.fail(n["converter"], "'converter' must be between 1 and the converter count");
        e.converter = static_cast<std::size_t>(j - 1);
        e.value = rd.positive(n["value"], "value");
        break;
    }
    case EventKind::SetDroopEnabled:
        rd.check_keys(n, {"time", "kind", "enabled"}, "event");
        if (!n["enabled"])
            rd.fail(n, "set_droop_enabled needs 'enabled'");
        e.enabled = rd.boolean(n["enabled"], "enabled");
        break;
    }
    return e;
}

ScenarioConfig parse_root(const Reader& rd, const YAML::Node& root)
{
    if (!root || root.IsNull())
        throw ScenarioError(rd.source(), 0, 0, "empty scenario");
    rd.check_keys(root, {"name", "description", "seed", "solver", "metrics_start", "defaults", "converters",
                         "network", "comm", "initial", "events"},
                  "scenario");

    ScenarioConfig cfg;
    if (root["name"])
        cfg.name = rd.string(root["name"], "name");
    if (root["description"])
        cfg.description = rd.string(root["description"], "description");
    if (root["seed"]) {
        cfg.seed = rd.seed(root["seed"]);
    }
    if (root["metrics_start"])
        cfg.metrics_start = rd.non_negative(root["metrics_start"], "metrics_start");

    ControllerConfig base;
    Flags base_flags;
    if (root["defaults"])
        parse_controller(rd, root["defaults"], base, base_flags);

    const auto convs = root["converters"];
    if (!convs)
        rd.fail(root, "scenario needs a 'converters' list");
    if (!convs.IsSequence() || convs.size() == 0)
        rd.fail(convs, "'converters' must be a non-empty list");
    for (const auto& entry : convs) {
        ControllerConfig c = base;
        Flags flags = base_flags;
        parse_controller(rd, entry, c, flags);
        if (!flags.voltage_band) {
            const auto band = AdaptiveDroopConfig::for_nominal(c.params.nominal_output_voltage);
            c.adaptive.voltage_min = band.voltage_min;
            c.adaptive.voltage_max = band.voltage_max;
        }
        if (!flags.bus_reference)
            c.bus_reference = c.params.nominal_output_voltage;
        try {
            c.validate();
        } catch (const DomainError& e) {
            rd.fail(entry, e.what());
        }
        cfg.converters.push_back(c);
    }
    const std::size_t n = cfg.converters.size();

    std::vector<double> k;
    for (const auto& c : cfg.converters)
        k.push_back(c.adaptive.load_factor);
    check_load_factors(rd, convs, k, n);

    const auto net = root["network"];
    if (!net)
        rd.fail(root, "scenario needs a 'network' section");
    rd.check_keys(net, {"cable_resistances", "load_resistance"}, "network");
    if (!net["cable_resistances"])
        rd.fail(net, "'network' needs 'cable_resistances'");
    const auto cables = net["cable_resistances"];
    if (!cables.IsSequence())
        rd.fail(cables, "'cable_resistances' must be a list");
    for (const auto& r : cables)
        cfg.network.cable_resistances.push_back(rd.positive(r, "cable_resistances"));
    if (cfg.network.size() != n)
        rd.fail(cables, "'cable_resistances' needs one entry per converter");
    if (net["load_resistance"]) {
        cfg.network.load_resistance = rd.positive(net["load_resistance"], "load_resistance");
    } else {
        std::vector<ConverterParams> params;
        for (const auto& c : cfg.converters)
            params.push_back(c.params);
        cfg.network.load_resistance = rated_load_resistance(params);
    }

    if (const auto c = root["comm"]) {
        rd.check_keys(c, {"sample_period", "transport_delay", "dropout_probability"}, "comm");
        if (c["sample_period"])
            cfg.comm.sample_period = rd.positive(c["sample_period"], "sample_period");
        if (c["transport_delay"])
            cfg.comm.transport_delay = rd.non_negative(c["transport_delay"], "transport_delay");
        if (c["dropout_probability"]) {
            cfg.comm.dropout_probability = rd.non_negative(c["dropout_probability"], "dropout_probability");
            if (cfg.comm.dropout_probability > 1.0)
                rd.fail(c["dropout_probability"], "'dropout_probability' must be <= 1");
        }
    }

    const double fs = cfg.converters.front().params.switching_frequency;
    cfg.solver.control_period = 1.0 / fs;
    cfg.solver.dt = 1.0 / (10.0 * fs);
    if (const auto s = root["solver"]) {
        rd.check_keys(s, {"dt", "control_period", "t_end", "decimation"}, "solver");
        if (s["control_period"]) {
            cfg.solver.control_period = rd.positive(s["control_period"], "control_period");
            cfg.solver.dt = cfg.solver.control_period / 10.0;
        }
        if (s["dt"])
            cfg.solver.dt = rd.positive(s["dt"], "dt");
        if (s["t_end"])
            cfg.solver.t_end = rd.positive(s["t_end"], "t_end");
        if (s["decimation"]) {
            const auto d = rd.integer(s["decimation"], "decimation");
            if (d < 1)
                rd.fail(s["decimation"], "'decimation' must be >= 1");
            cfg.solver.decimation = static_cast<int>(d);
        }
    }

    if (const auto init = root["initial"]) {
        rd.check_keys(init, {"droop_enabled", "adaptive_active"}, "initial");
        if (init["droop_enabled"])
            cfg.droop_enabled = rd.boolean(init["droop_enabled"], "droop_enabled");
        if (init["adaptive_active"])
            cfg.adaptive_active = rd.boolean(init["adaptive_active"], "adaptive_active");
    }

    if (const auto evs = root["events"]) {
        if (!evs.IsSequence() && !evs.IsNull())
            rd.fail(evs, "'events' must be a list");
        double last = 0.0;
        for (const auto& e : evs) {
            Event ev = parse_event(rd, e, n);
            if (ev.time < last)
                rd.fail(e, "events must be sorted by time");
            last = ev.time;
            cfg.events.push_back(std::move(ev));
        }
    }

    try {
        cfg.validate();
    } catch (const DomainError& e) {
        rd.fail(root, e.what());
    }
    return cfg;
}

std::string fmt(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    std::string s(buf, res.ptr);
    // Keep floats recognisable as floats for YAML readers.
    if (s.find_first_of(".eEn") == std::string::npos)
        s += ".0";
    return s;
}

std::string fmt_list(const std::vector<double>& v)
{
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            s += ", ";
        s += fmt(v[i]);
    }
    return s + "]";
}

std::string quoted(const std::string& s)
{
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"' || ch == '\\')
            out += '\\';
        if (ch == '\n') {
            out += "\\n";
            continue;
        }
        out += ch;
    }
    return out + "\"";
}

} // namespace

ScenarioConfig parse_scenario(std::string_view text, const std::string& source)
{
    Reader rd(source);
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::ParserException& e) {
        throw ScenarioError(source, e.mark.line + 1, e.mark.column + 1, e.msg);
    }
    try {
        return parse_root(rd, root);
    } catch (const YAML::Exception& e) {
        if (e.mark.is_null())
            throw ScenarioError(source, 0, 0, e.msg);
        throw ScenarioError(source, e.mark.line + 1, e.mark.column + 1, e.msg);
    }
}

ScenarioConfig load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ScenarioError(path.string(), 0, 0, "cannot open scenario file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), path.string());
}

std::string render_scenario(const ScenarioConfig& cfg)
{
    std::ostringstream os;
    os << "name: " << quoted(cfg.name) << "\n";
    if (!cfg.description.empty())
        os << "description: " << quoted(cfg.description) << "\n";
    os << "seed: " << cfg.seed << "\n";
    os << "metrics_start: " << fmt(cfg.metrics_start) << "\n";
    os << "solver:\n"
       << "  dt: " << fmt(cfg.solver.dt) << "\n"
       << "  control_period: " << fmt(cfg.solver.control_period) << "\n"
       << "  t_end: " << fmt(cfg.solver.t_end) << "\n"
       << "  decimation: " << cfg.solver.decimation << "\n";
    os << "converters:\n";
    for (const auto& c : cfg.converters) {
        const auto& p = c.params;
        const auto& g = c.gains;
        const auto& a = c.adaptive;
        os << "  - params:\n"
           << "      input_voltage: " << fmt(p.input_voltage) << "\n"
           << "      nominal_output_voltage: " << fmt(p.nominal_output_voltage) << "\n"
           << "      rated_power: " << fmt(p.rated_power) << "\n"
           << "      inductance: " << fmt(p.inductance) << "\n"
           << "      capacitance: " << fmt(p.capacitance) << "\n"
           << "      switching_frequency: " << fmt(p.switching_frequency) << "\n"
           << "    gains:\n"
           << "      current_kp: " << fmt(g.current_kp) << "\n"
           << "      current_ki: " << fmt(g.current_ki) << "\n"
           << "      voltage_kp: " << fmt(g.voltage_kp) << "\n"
           << "      voltage_ki: " << fmt(g.voltage_ki) << "\n"
           << "      secondary_kp: " << fmt(g.secondary_kp) << "\n"
           << "      secondary_ki: " << fmt(g.secondary_ki) << "\n"
           << "      current_limit_factor: " << fmt(g.current_limit_factor) << "\n"
           << "    adaptive:\n"
           << "      initial_droop: " << fmt(a.initial_droop) << "\n"
           << "      delta: " << fmt(a.delta) << "\n"
           << "      gamma: " << fmt(a.gamma) << "\n"
           << "      load_factor: " << fmt(a.load_factor) << "\n"
           << "      update_period: " << fmt(a.update_period) << "\n"
           << "      voltage_band: " << fmt_list({a.voltage_min, a.voltage_max}) << "\n"
           << "      max_droop: " << fmt(a.max_droop) << "\n"
           << "    ccm_exit:\n"
           << "      hysteresis: " << fmt(c.ccm_exit.hysteresis) << "\n"
           << "      periods: " << c.ccm_exit.exit_periods << "\n"
           << "    secondary:\n"
           << "      enabled: " << (c.secondary_enabled ? "true" : "false") << "\n"
           << "      bus_reference: " << fmt(c.bus_reference) << "\n";
    }
    os << "network:\n"
       << "  cable_resistances: " << fmt_list(cfg.network.cable_resistances) << "\n"
       << "  load_resistance: " << fmt(cfg.network.load_resistance) << "\n";
    os << "comm:\n"
       << "  sample_period: " << fmt(cfg.comm.sample_period) << "\n"
       << "  transport_delay: " << fmt(cfg.comm.transport_delay) << "\n"
       << "  dropout_probability: " << fmt(cfg.comm.dropout_probability) << "\n";
    os << "initial:\n"
       << "  droop_enabled: " << (cfg.droop_enabled ? "true" : "false") << "\n"
       << "  adaptive_active: " << (cfg.adaptive_active ? "true" : "false") << "\n";
    if (cfg.events.empty()) {
        os << "events: []\n";
    } else {
        os << "events:\n";
        for (const auto& e : cfg.events) {
            os << "  - {time: " << fmt(e.time) << ", kind: " << to_string(e.kind);
            switch (e.kind) {
            case EventKind::SetLoadFactors:
                os << ", values: " << fmt_list(e.load_factors);
                break;
            case EventKind::SetLoadResistance:
                os << ", value: " << fmt(e.value);
                break;
            case EventKind::SetCableResistance:
                os << ", converter: " << e.converter + 1 << ", value: " << fmt(e.value);
                break;
            case EventKind::SetDroopEnabled:
                os << ", enabled: " << (e.enabled ? "true" : "false");
                break;
            case EventKind::ActivateAdaptiveDroop:
                break;
            }
            os << "}\n";
        }
    }
    return os.str();
}

namespace {

bool set_converter_field(ControllerConfig& c, std::string_view key, double v)
{
    auto& g = c.gains;
    auto& a = c.adaptive;
    if (key == "gains.current_kp") g.current_kp = v;
    else if (key == "gains.current_ki") g.current_ki = v;
    else if (key == "gains.voltage_kp") g.voltage_kp = v;
    else if (key == "gains.voltage_ki") g.voltage_ki = v;
    else if (key == "gains.secondary_kp") g.secondary_kp = v;
    else if (key == "gains.secondary_ki") g.secondary_ki = v;
    else if (key == "gains.current_limit_factor") g.current_limit_factor = v;
    else if (key == "adaptive.initial_droop") a.initial_droop = v;
    else if (key == "adaptive.delta") a.delta = v;
    else if (key == "adaptive.gamma") a.gamma = v;
    else if (key == "adaptive.update_period") a.update_period = v;
    else if (key == "adaptive.max_droop") a.max_droop = v;
    else if (key == "adaptive.voltage_min") a.voltage_min = v;
    else if (key == "adaptive.voltage_max") a.voltage_max = v;
    else if (key == "ccm_exit.hysteresis") c.ccm_exit.hysteresis = v;
    else if (key == "secondary.bus_reference") c.bus_reference = v;
    else return false;
    return true;
}

} // namespace

void apply_override(ScenarioConfig& cfg, std::string_view path, double value)
{
    if (path == "network.load_resistance") {
        cfg.network.load_resistance = value;
        return;
    }
    constexpr std::string_view cable = "network.cable_resistance.";
    if (path.starts_with(cable)) {
        const auto idx = path.substr(cable.size());
        std::size_t j = 0;
        const auto res = std::from_chars(idx.data(), idx.data() + idx.size(), j);
        if (res.ec != std::errc{} || res.ptr != idx.data() + idx.size() || j < 1 || j > cfg.network.size())
            throw UnknownParameter("unknown parameter '" + std::string(path) + "'");
        cfg.network.cable_resistances[j - 1] = value;
        return;
    }
    if (path == "comm.sample_period") { cfg.comm.sample_period = value; return; }
    if (path == "comm.transport_delay") { cfg.comm.transport_delay = value; return; }
    if (path == "comm.dropout_probability") { cfg.comm.dropout_probability = value; return; }
    if (path == "solver.t_end") { cfg.solver.t_end = value; return; }
    if (path == "metrics_start") { cfg.metrics_start = value; return; }

    bool any = false;
    for (auto& c : cfg.converters)
        any = set_converter_field(c, path, value) || any;
    if (!any)
        throw UnknownParameter("unknown parameter '" + std::string(path) + "'");
}

std::vector<std::string> override_paths()
{
    return {
        "network.load_resistance", "network.cable_resistance.<j>", "comm.sample_period",
        "comm.transport_delay",    "comm.dropout_probability",     "solver.t_end",
        "metrics_start",           "gains.current_kp",             "gains.current_ki",
        "gains.voltage_kp",        "gains.voltage_ki",             "gains.secondary_kp",
        "gains.secondary_ki",      "gains.current_limit_factor",   "adaptive.initial_droop",
        "adaptive.delta",          "adaptive.gamma",               "adaptive.update_period",
        "adaptive.max_droop",      "adaptive.voltage_min",         "adaptive.voltage_max",
        "ccm_exit.hysteresis",     "secondary.bus_reference",
    };
}

} // namespace dcshare

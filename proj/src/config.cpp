#include "adr/config.hpp"

#include "adr/errors.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>

namespace adr {
namespace {

constexpr std::array<std::pair<RunMethod, std::string_view>, 8> run_method_names{{
    {RunMethod::galerkin, "galerkin"},
    {RunMethod::artificial_viscosity, "artificial_viscosity"},
    {RunMethod::streamline_upwind, "streamline_upwind"},
    {RunMethod::supg, "supg"},
    {RunMethod::gls, "gls"},
    {RunMethod::douglas_wang, "douglas_wang"},
    {RunMethod::asgs, "asgs"},
    {RunMethod::efr, "efr"},
}};

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view v)
{
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
        throw InvalidArgument("'" + std::string(key) + "': cannot parse '" + std::string(v) + "' as a number");
    }
    return out;
}

int parse_int(std::string_view key, std::string_view v)
{
    int out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
        throw InvalidArgument("'" + std::string(key) + "': cannot parse '" + std::string(v) + "' as an integer");
    }
    return out;
}

bool parse_bool(std::string_view key, std::string_view v)
{
    if (v == "true" || v == "1" || v == "yes") {
        return true;
    }
    if (v == "false" || v == "0" || v == "no") {
        return false;
    }
    throw InvalidArgument("'" + std::string(key) + "': expected true or false, got '" + std::string(v) + "'");
}

template <class T, class Parse>
std::vector<T> parse_list(std::string_view v, Parse&& parse)
{
    std::vector<T> out;
    if (v == "none" || v == "default") {
        return out;
    }
    while (!v.empty()) {
        const auto comma = v.find(',');
        out.push_back(parse(trim(v.substr(0, comma))));
        if (comma == std::string_view::npos) {
            break;
        }
        v.remove_prefix(comma + 1);
    }
    return out;
}

void require(bool ok, std::string_view key, std::string_view what)
{
    if (!ok) {
        throw InvalidArgument("'" + std::string(key) + "' " + std::string(what));
    }
}

struct KeyHandler {
    std::string_view key;
    std::function<void(RunConfig&, std::string_view)> set;
    std::function<std::string(const RunConfig&)> get;
};

template <class T>
std::string join(const std::vector<T>& values, std::string_view empty)
{
    if (values.empty()) {
        return std::string(empty);
    }
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) {
            out += ",";
        }
        if constexpr (std::is_floating_point_v<T>) {
            out += format_number(values[i]);
        } else {
            out += std::to_string(values[i]);
        }
    }
    return out;
}

const std::vector<KeyHandler>& handlers()
{
    using C = RunConfig;
    static const std::vector<KeyHandler> table{
        {"mesh.level",
         [](C& c, std::string_view v) {
             c.level = parse_int("mesh.level", v);
             require(c.level >= 0 && c.level <= 4, "mesh.level", "must be in 0..4");
         },
         [](const C& c) { return std::to_string(c.level); }},
        {"mesh.n",
         [](C& c, std::string_view v) {
             c.n = parse_int("mesh.n", v);
             require(c.n >= 0, "mesh.n", "must be >= 0 (0 selects the level table)");
         },
         [](const C& c) { return std::to_string(c.n); }},
        {"fe.degree",
         [](C& c, std::string_view v) {
             c.degree = parse_int("fe.degree", v);
             require(c.degree == 1 || c.degree == 2, "fe.degree", "must be 1 or 2");
         },
         [](const C& c) { return std::to_string(c.degree); }},
        {"problem.mu",
         [](C& c, std::string_view v) {
             c.mu = parse_double("problem.mu", v);
             require(c.mu > 0.0, "problem.mu", "must be positive");
         },
         [](const C& c) { return format_number(c.mu); }},
        {"problem.b_x", [](C& c, std::string_view v) { c.b[0] = parse_double("problem.b_x", v); },
         [](const C& c) { return format_number(c.b[0]); }},
        {"problem.b_y", [](C& c, std::string_view v) { c.b[1] = parse_double("problem.b_y", v); },
         [](const C& c) { return format_number(c.b[1]); }},
        {"problem.sigma",
         [](C& c, std::string_view v) {
             c.sigma = parse_double("problem.sigma", v);
             require(c.sigma >= 0.0, "problem.sigma", "must be >= 0");
         },
         [](const C& c) { return format_number(c.sigma); }},
        {"time.T",
         [](C& c, std::string_view v) {
             c.final_time = parse_double("time.T", v);
             require(c.final_time > 0.0, "time.T", "must be positive");
         },
         [](const C& c) { return format_number(c.final_time); }},
        {"time.dt",
         [](C& c, std::string_view v) {
             c.dt = parse_double("time.dt", v);
             require(c.dt > 0.0, "time.dt", "must be positive");
         },
         [](const C& c) { return format_number(c.dt); }},
        {"method", [](C& c, std::string_view v) { c.method = run_method_from_string(v); },
         [](const C& c) { return std::string(to_string(c.method)); }},
        {"stab.c_art",
         [](C& c, std::string_view v) {
             c.c_art = parse_double("stab.c_art", v);
             require(c.c_art >= 0.0, "stab.c_art", "must be >= 0");
         },
         [](const C& c) { return format_number(c.c_art); }},
        {"stab.delta",
         [](C& c, std::string_view v) {
             c.delta_supg = parse_double("stab.delta", v);
             require(c.delta_supg > 0.0, "stab.delta", "must be positive");
         },
         [](const C& c) { return format_number(c.delta_supg); }},
        {"stab.use_sigma_eff", [](C& c, std::string_view v) { c.use_sigma_eff = parse_bool("stab.use_sigma_eff", v); },
         [](const C& c) { return std::string(c.use_sigma_eff ? "true" : "false"); }},
        {"efr.N",
         [](C& c, std::string_view v) {
             c.N = parse_int("efr.N", v);
             require(c.N >= 0, "efr.N", "must be >= 0");
         },
         [](const C& c) { return std::to_string(c.N); }},
        {"efr.delta_c",
         [](C& c, std::string_view v) {
             c.delta_c = parse_double("efr.delta_c", v);
             require(c.delta_c > 0.0, "efr.delta_c", "must be positive");
         },
         [](const C& c) { return format_number(c.delta_c); }},
        {"efr.chi",
         [](C& c, std::string_view v) {
             if (v == "table") {
                 c.chi.reset();
                 return;
             }
             const double chi = parse_double("efr.chi", v);
             require(chi >= 0.0 && chi <= 1.0, "efr.chi", "must lie in [0, 1]");
             c.chi = chi;
         },
         [](const C& c) { return c.chi ? format_number(*c.chi) : std::string("table"); }},
        {"efr.indicator", [](C& c, std::string_view v) { c.indicator = indicator_mode_from_string(v); },
         [](const C& c) { return std::string(to_string(c.indicator)); }},
        {"study.levels",
         [](C& c, std::string_view v) {
             c.study_levels = parse_list<int>(v, [](std::string_view s) { return parse_int("study.levels", s); });
             for (int l : c.study_levels) {
                 require(l >= 0 && l <= 4, "study.levels", "entries must be in 0..4");
             }
         },
         [](const C& c) { return join(c.study_levels, "default"); }},
        {"study.threads",
         [](C& c, std::string_view v) {
             c.threads = parse_int("study.threads", v);
             require(c.threads >= 0, "study.threads", "must be >= 0");
         },
         [](const C& c) { return std::to_string(c.threads); }},
        {"output.csv",
         [](C& c, std::string_view v) {
             require(!v.empty(), "output.csv", "must not be empty");
             c.csv = std::string(v);
         },
         [](const C& c) { return c.csv; }},
        {"output.vtk", [](C& c, std::string_view v) { c.vtk = parse_bool("output.vtk", v); },
         [](const C& c) { return std::string(c.vtk ? "true" : "false"); }},
        {"output.indicator_vtk", [](C& c, std::string_view v) { c.indicator_vtk = parse_bool("output.indicator_vtk", v); },
         [](const C& c) { return std::string(c.indicator_vtk ? "true" : "false"); }},
        {"output.snapshot_times",
         [](C& c, std::string_view v) {
             c.snapshot_times =
                 parse_list<double>(v, [](std::string_view s) { return parse_double("output.snapshot_times", s); });
             for (double t : c.snapshot_times) {
                 require(t >= 0.0, "output.snapshot_times", "entries must be >= 0");
             }
         },
         [](const C& c) { return join(c.snapshot_times, "none"); }},
        {"output.wall_time", [](C& c, std::string_view v) { c.wall_time = parse_bool("output.wall_time", v); },
         [](const C& c) { return std::string(c.wall_time ? "true" : "false"); }},
    };
    return table;
}

void set_key(RunConfig& config, std::string_view key, std::string_view value, int line)
{
    for (const KeyHandler& h : handlers()) {
        if (h.key == key) {
            try {
                h.set(config, value);
            } catch (const InvalidArgument& e) {
                throw ConfigError(e.what(), line);
            }
            return;
        }
    }
    throw ConfigError("unknown key '" + std::string(key) + "'", line);
}

void apply_assignment(RunConfig& config, std::string_view text, int line)
{
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
        throw ConfigError("expected 'key = value', got '" + std::string(text) + "'", line);
    }
    const std::string_view key = trim(text.substr(0, eq));
    const std::string_view value = trim(text.substr(eq + 1));
    if (key.empty()) {
        throw ConfigError("missing key before '='", line);
    }
    set_key(config, key, value, line);
}

} // namespace

std::string_view to_string(RunMethod method)
{
    for (const auto& [m, name] : run_method_names) {
        if (m == method) {
            return name;
        }
    }
    return "unknown";
}

RunMethod run_method_from_string(std::string_view name)
{
    for (const auto& [m, n] : run_method_names) {
        if (n == name) {
            return m;
        }
    }
    throw InvalidArgument("unknown method '" + std::string(name) + "'");
}

std::string format_number(double value)
{
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc()) {
        throw InvalidArgument("format_number: conversion failed");
    }
    return std::string(buf.data(), ptr);
}

int RunConfig::resolved_n() const { return n > 0 ? n : benchmark::partitions_for_level(level); }

std::optional<int> RunConfig::resolved_level() const
{
    const int nn = resolved_n();
    for (std::size_t l = 0; l < benchmark::partitions.size(); ++l) {
        if (benchmark::partitions[l] == nn) {
            return static_cast<int>(l);
        }
    }
    return std::nullopt;
}

double RunConfig::resolved_chi() const
{
    if (chi) {
        return *chi;
    }
    const auto l = resolved_level();
    if (!l) {
        throw ConfigError("efr.chi must be set explicitly when mesh.n is not a table size", 0);
    }
    return benchmark::chi_for_level(*l);
}

benchmark::BenchmarkSpec RunConfig::benchmark_spec() const
{
    benchmark::BenchmarkSpec spec;
    spec.mu = mu;
    spec.b = b;
    spec.sigma = sigma;
    spec.final_time = final_time;
    spec.dt = dt;
    return spec;
}

StabConfig RunConfig::stab_config() const
{
    StabConfig s;
    s.c_art = c_art;
    s.delta_supg = delta_supg;
    s.use_sigma_eff = use_sigma_eff;
    switch (method) {
    case RunMethod::artificial_viscosity:
        s.method = StabMethod::artificial_viscosity;
        break;
    case RunMethod::streamline_upwind:
        s.method = StabMethod::streamline_upwind;
        break;
    case RunMethod::supg:
        s.method = StabMethod::supg;
        break;
    case RunMethod::gls:
        s.method = StabMethod::gls;
        break;
    case RunMethod::douglas_wang:
        s.method = StabMethod::douglas_wang;
        break;
    case RunMethod::asgs:
        s.method = StabMethod::asgs;
        break;
    default:
        s.method = StabMethod::none;
    }
    return s;
}

Method RunConfig::solver_method() const
{
    if (method == RunMethod::galerkin) {
        return GalerkinMethod{};
    }
    if (method == RunMethod::efr) {
        EFRConfig efr;
        efr.delta = delta();
        efr.N = N;
        efr.chi = resolved_chi();
        efr.indicator_mode = indicator;
        return EfrMethod{efr};
    }
    return StabilizedMethod{stab_config()};
}

void RunConfig::validate() const
{
    try {
        (void)TimeConfig::for_interval(final_time, dt);
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what(), 0);
    }
    if (method == RunMethod::efr) {
        (void)resolved_chi();
    }
}

RunConfig parse_config(std::string_view text)
{
    RunConfig config;
    int line_no = 0;
    while (!text.empty() || line_no == 0) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (!line.empty()) {
            apply_assignment(config, line, line_no);
        }
        if (text.empty()) {
            break;
        }
    }
    config.validate();
    return config;
}

void apply_override(RunConfig& config, std::string_view assignment)
{
    try {
        apply_assignment(config, trim(assignment), 0);
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("override '") + std::string(assignment) + "': " + e.what(), 0);
    }
}

std::string canonical_text(const RunConfig& config)
{
    std::ostringstream out;
    for (const KeyHandler& h : handlers()) {
        out << h.key << " = " << h.get(config) << '\n';
    }
    return out.str();
}

} // namespace adr

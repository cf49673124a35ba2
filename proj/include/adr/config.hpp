#pragma once

#include "adr/benchmark.hpp"
#include "adr/efr.hpp"
#include "adr/simulation.hpp"
#include "adr/stabilizers.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace adr {

enum class RunMethod { galerkin, artificial_viscosity, streamline_upwind, supg, gls, douglas_wang, asgs, efr };

std::string_view to_string(RunMethod method);
RunMethod run_method_from_string(std::string_view name);

/// Every setting of one benchmark run. Text form is line-oriented
/// `key = value` with `#` comments; see canonical_text() for the full key list.
struct RunConfig {
    int level = 0;  ///< refinement level, maps to n through the partitions table
    int n = 0;      ///< explicit partitions per side; 0 means "from level"
    int degree = 2;

    double mu = 1e-5;
    Vec2 b{2.0, 3.0};
    double sigma = 1.0;
    double final_time = 0.5;
    double dt = 1e-3;

    RunMethod method = RunMethod::efr;
    double c_art = 0.5;
    double delta_supg = 1.0;
    bool use_sigma_eff = true;

    int N = 0;
    double delta_c = 1.0;      ///< filtering radius delta = delta_c / n
    std::optional<double> chi; ///< unset: per-level table value
    IndicatorMode indicator = IndicatorMode::clip;

    std::vector<int> study_levels; ///< empty: study default
    int threads = 0;               ///< concurrent runs in a study; 0 = hardware

    std::string csv = "report.csv";
    bool vtk = false;
    bool indicator_vtk = false;
    std::vector<double> snapshot_times;
    bool wall_time = true; ///< false writes 0 in wall_seconds for byte-stable reports

    [[nodiscard]] int resolved_n() const;
    /// Explicit chi, else the table value for the level whose n matches.
    [[nodiscard]] double resolved_chi() const;
    [[nodiscard]] double delta() const { return delta_c / resolved_n(); }
    [[nodiscard]] std::optional<int> resolved_level() const;

    [[nodiscard]] benchmark::BenchmarkSpec benchmark_spec() const;
    [[nodiscard]] Method solver_method() const;
    [[nodiscard]] StabConfig stab_config() const;

    /// Cross-key checks; throws ConfigError.
    void validate() const;

    bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(std::string_view text);
/// Applies one `key=value` override.
void apply_override(RunConfig& config, std::string_view assignment);
/// Every key in fixed order; parse_config(canonical_text(c)) == c.
std::string canonical_text(const RunConfig& config);

/// Shortest decimal that reads back to the same double.
std::string format_number(double value);

} // namespace adr

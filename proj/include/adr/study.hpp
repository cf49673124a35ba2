#pragma once

#include "adr/config.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace adr {

enum class StudyKind { single, compare_methods, sweep_N, sweep_delta };

std::string_view to_string(StudyKind kind);
StudyKind study_kind_from_string(std::string_view name);

/// One CSV row. Optional columns are written empty when absent.
struct ReportRow {
    std::optional<int> level;
    int n = 0;
    std::string method;
    std::optional<double> stab_const;
    std::optional<int> N;
    std::optional<double> delta_c;
    std::optional<double> chi;
    std::optional<double> l2_error;
    std::optional<double> h1_norm;
    std::optional<double> h1_semi;
    std::optional<double> min_u;
    std::optional<double> max_u;
    int steps = 0;
    double wall_seconds = 0.0;
    std::string error; ///< empty for a successful run
};

struct SweepReport {
    std::vector<ReportRow> rows;

    [[nodiscard]] bool all_succeeded() const;
};

inline constexpr std::string_view csv_header =
    "level,n,method,stab_const,N,delta_c,chi,l2_error,h1_norm,h1_semi,min_u,max_u,steps,wall_seconds,error";

/// The run matrix of a study, in report order.
///   single:          the base configuration
///   compare_methods: galerkin, supg, efr (N = 0, delta_c = 1) per level; levels default 0..4
///   sweep_N:         efr with N = 0..3 per level; levels default to the base level
///   sweep_delta:     efr with N = 0 and delta_c in {1, sqrt 2, 2, 5} per level
std::vector<RunConfig> study_matrix(StudyKind kind, const RunConfig& base);

/// Runs one configuration and measures it at the final time. Failures are
/// recorded in the row. When output_dir is set, VTK files are written there
/// according to the output.* keys.
ReportRow execute_run(const RunConfig& config, const std::optional<std::filesystem::path>& output_dir = std::nullopt);

/// Executes the study matrix, concurrently when study.threads allows, and
/// returns rows in matrix order regardless of completion order.
SweepReport run_study(StudyKind kind, const RunConfig& base,
                      const std::optional<std::filesystem::path>& output_dir = std::nullopt);

void write_csv(const SweepReport& report, std::ostream& out);
void write_csv(const SweepReport& report, const std::filesystem::path& path);

} // namespace adr

#pragma once

#include "adr/efr.hpp"
#include "adr/evolve.hpp"
#include "adr/fem.hpp"
#include "adr/problem.hpp"
#include "adr/stabilizers.hpp"

#include <functional>
#include <memory>
#include <variant>
#include <vector>

namespace adr {

struct GalerkinMethod {};
struct StabilizedMethod {
    StabConfig stab;
};
struct EfrMethod {
    EFRConfig efr;
};
using Method = std::variant<GalerkinMethod, StabilizedMethod, EfrMethod>;

struct StepDiagnostics {
    int step = 0; ///< 1-based index of the completed step
    double time = 0.0;
    double min = 0.0;
    double max = 0.0;
    int evolve_iterations = 0;
    int filter_iterations = 0;
    double wall_seconds = 0.0;
};

/// Read-only view handed to RunOptions::observer after each step. The EFR
/// intermediates are null for the other methods.
struct StepView {
    int step = 0;
    double time = 0.0;
    const FEField& u;
    const FEField* evolved = nullptr;
    const FEField* filtered = nullptr;
    const FEField* indicator = nullptr;
};

struct RunOptions {
    std::vector<double> snapshot_times;
    std::function<void(const StepView&)> observer;
    SolverOptions solver;
};

struct Snapshot {
    double time = 0.0;
    FEField field;
};

struct RunResult {
    FEField final_field;
    std::vector<Snapshot> snapshots;
    std::vector<StepDiagnostics> diagnostics;
};

/// Backward Euler from interpolate(u_0) over time.n_steps steps. Operators
/// are assembled once. The first failing step aborts the run with a
/// StageError carrying step index, stage and residual.
RunResult run(const ADRProblem& problem, const std::shared_ptr<const FESpace>& space, const TimeConfig& time,
              const Method& method, const RunOptions& options = {});

} // namespace adr

#include "adr/simulation.hpp"

#include "adr/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>

namespace adr {
namespace {

std::pair<double, double> extrema(const FEField& u)
{
    const auto [lo, hi] = std::minmax_element(u.values().begin(), u.values().end());
    return {*lo, *hi};
}

} // namespace

RunResult run(const ADRProblem& problem, const std::shared_ptr<const FESpace>& space, const TimeConfig& time,
              const Method& method, const RunOptions& options)
{
    problem.validate();
    if (time.n_steps < 0 || !(time.dt > 0.0)) {
        throw InvalidArgument("run: invalid time configuration");
    }

    const StabConfig stab =
        std::holds_alternative<StabilizedMethod>(method) ? std::get<StabilizedMethod>(method).stab : StabConfig{};
    const EvolveSystem evolve(problem, space, time.dt, stab, options.solver);

    const EFRConfig* efr = std::get_if<EfrMethod>(&method) ? &std::get<EfrMethod>(method).efr : nullptr;
    std::optional<HelmholtzFilter> filter;
    if (efr != nullptr) {
        efr->validate();
        filter.emplace(space, efr->delta, options.solver);
    }

    FEField u = problem.initial ? interpolate(space, problem.initial) : FEField(space);
    RunResult result{u, {}, {}};
    result.diagnostics.reserve(static_cast<std::size_t>(time.n_steps));

    auto wants_snapshot = [&](double t) {
        return std::any_of(options.snapshot_times.begin(), options.snapshot_times.end(),
                           [&](double s) { return std::abs(s - t) < 0.5 * time.dt; });
    };
    if (wants_snapshot(0.0)) {
        result.snapshots.push_back({0.0, u});
    }

    for (int n = 0; n < time.n_steps; ++n) {
        const auto start = std::chrono::steady_clock::now();
        const double t_next = time.time(n + 1);
        StepDiagnostics diag;
        diag.step = n + 1;
        diag.time = t_next;
        try {
            if (efr != nullptr) {
                EFRStepResult r = efr_step(u, t_next, evolve, *filter, *efr);
                diag.evolve_iterations = r.evolve_iterations;
                diag.filter_iterations = r.filter_iterations;
                u = std::move(r.u);
                if (options.observer) {
                    options.observer(StepView{n + 1, t_next, u, &r.evolved, &r.filtered, &r.indicator});
                }
            } else {
                SolveStats stats;
                u = evolve.step(u, t_next, &stats);
                diag.evolve_iterations = stats.iterations;
                if (options.observer) {
                    options.observer(StepView{n + 1, t_next, u});
                }
            }
        } catch (const StageError& e) {
            throw StageError("step " + std::to_string(n + 1) + ": " + e.what(), e.stage(), n + 1, e.residual());
        } catch (const SolverFailure& e) {
            throw StageError("step " + std::to_string(n + 1) + ": evolve: " + e.what(), "evolve", n + 1,
                             e.residual());
        } catch (const SingularMatrix& e) {
            throw StageError("step " + std::to_string(n + 1) + ": evolve: " + e.what(), "evolve", n + 1, 0.0);
        }
        std::tie(diag.min, diag.max) = extrema(u);
        diag.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        result.diagnostics.push_back(diag);
        if (wants_snapshot(t_next)) {
            result.snapshots.push_back({t_next, u});
        }
    }
    result.final_field = std::move(u);
    return result;
}

} // namespace adr

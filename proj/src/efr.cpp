#include "adr/efr.hpp"

#include "adr/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace adr {

std::string_view to_string(IndicatorMode mode) { return mode == IndicatorMode::clip ? "clip" : "normalize"; }

IndicatorMode indicator_mode_from_string(std::string_view name)
{
    if (name == "clip") {
        return IndicatorMode::clip;
    }
    if (name == "normalize") {
        return IndicatorMode::normalize;
    }
    throw InvalidArgument("unknown indicator mode '" + std::string(name) + "'");
}

void EFRConfig::validate() const
{
    if (!(delta >= 0.0) || !std::isfinite(delta)) {
        throw InvalidArgument("EFRConfig: delta must be >= 0");
    }
    if (N < 0) {
        throw InvalidArgument("EFRConfig: N must be >= 0");
    }
    if (!(chi >= 0.0 && chi <= 1.0)) {
        throw InvalidArgument("EFRConfig: chi must lie in [0, 1]");
    }
}

HelmholtzFilter::HelmholtzFilter(std::shared_ptr<const FESpace> space, double delta, const SolverOptions& solver)
    : space_(std::move(space)), delta_(delta), solver_options_(solver)
{
    if (!(delta >= 0.0)) {
        throw InvalidArgument("HelmholtzFilter: delta must be >= 0");
    }
    solver_options_.method = SolverMethod::cg;
    mass_ = assemble_mass(*space_);
    if (delta_ == 0.0) {
        return;
    }
    stiffness_ = assemble_stiffness(*space_);
    uniform_ = mass_;
    uniform_.add_scaled(delta_ * delta_, stiffness_);
    CsrMatrix constrained = uniform_;
    constrain_matrix(constrained, space_->dirichlet_dofs());
    uniform_solver_ = std::make_unique<LinearSolver>(std::move(constrained), solver_options_);
}

CsrMatrix HelmholtzFilter::system_matrix(const FEField* indicator) const
{
    if (indicator == nullptr) {
        return delta_ == 0.0 ? mass_ : uniform_;
    }
    const std::span<const double> a = indicator->values();
    const double d2 = delta_ * delta_;
    CsrMatrix weighted = assemble_matrix(*space_, 2 * space_->degree(), [&](const CellValues& cv, std::span<double> local) {
        const int k = cv.dofs_per_cell();
        for (std::size_t q = 0; q < cv.num_points(); ++q) {
            const double aq = std::clamp(cv.value(a, q), 0.0, 1.0);
            const double w = d2 * aq * cv.jxw(q);
            if (w == 0.0) {
                continue;
            }
            for (int i = 0; i < k; ++i) {
                for (int j = 0; j < k; ++j) {
                    local[i * k + j] += w * dot(cv.grad(i, q), cv.grad(j, q));
                }
            }
        }
    });
    weighted.add_scaled(1.0, mass_);
    return weighted;
}

FEField HelmholtzFilter::solve_with(const LinearSolver& solver, const CsrMatrix& unconstrained, const FEField& v,
                                    SolveStats* stats) const
{
    Vector rhs = spmv(mass_, v.values());
    const auto& dofs = space_->dirichlet_dofs();
    Vector trace(dofs.size());
    for (std::size_t m = 0; m < dofs.size(); ++m) {
        trace[m] = v[static_cast<std::size_t>(dofs[m])];
    }
    lift_rhs(unconstrained, rhs, dofs, trace);
    Vector x = solver.solve(rhs, stats);
    for (std::size_t m = 0; m < dofs.size(); ++m) {
        x[static_cast<std::size_t>(dofs[m])] = trace[m];
    }
    return FEField(space_, std::move(x));
}

FEField HelmholtzFilter::apply(const FEField& v, SolveStats* stats) const
{
    if (v.size() != space_->num_dofs()) {
        throw InvalidArgument("HelmholtzFilter: field is not on the filter's space");
    }
    if (delta_ == 0.0) {
        if (stats != nullptr) {
            *stats = {};
        }
        return v;
    }
    return solve_with(*uniform_solver_, uniform_, v, stats);
}

FEField HelmholtzFilter::apply(const FEField& v, const FEField& indicator, SolveStats* stats) const
{
    if (v.size() != space_->num_dofs() || indicator.size() != space_->num_dofs()) {
        throw InvalidArgument("HelmholtzFilter: field is not on the filter's space");
    }
    if (delta_ == 0.0) {
        if (stats != nullptr) {
            *stats = {};
        }
        return v;
    }
    const CsrMatrix unconstrained = system_matrix(&indicator);
    CsrMatrix constrained = unconstrained;
    constrain_matrix(constrained, space_->dirichlet_dofs());
    const LinearSolver solver(std::move(constrained), solver_options_);
    return solve_with(solver, unconstrained, v, stats);
}

FEField HelmholtzFilter::deconvolve(const FEField& v, int N, int* iterations) const
{
    if (N < 0) {
        throw InvalidArgument("deconvolve: N must be >= 0");
    }
    int total = 0;
    SolveStats stats;
    FEField term = apply(v, &stats);
    total += stats.iterations;
    FEField sum = term;
    for (int k = 1; k <= N; ++k) {
        const FEField filtered = apply(term, &stats);
        total += stats.iterations;
        for (std::size_t i = 0; i < term.size(); ++i) {
            term[i] -= filtered[i];
            sum[i] += term[i];
        }
    }
    if (iterations != nullptr) {
        *iterations = total;
    }
    return sum;
}

FEField HelmholtzFilter::indicator(const FEField& v, int N, IndicatorMode mode, int* iterations) const
{
    const FEField deconvolved = deconvolve(v, N, iterations);
    FEField a(space_);
    double largest = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = std::abs(v[i] - deconvolved[i]);
        largest = std::max(largest, a[i]);
    }
    if (mode == IndicatorMode::normalize && largest > 0.0) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            a[i] /= largest;
        }
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = std::clamp(a[i], 0.0, 1.0);
    }
    return a;
}

FEField helmholtz_filter(const FEField& v, double delta, const FEField* indicator)
{
    const HelmholtzFilter filter(v.space_ptr(), delta);
    return indicator == nullptr ? filter.apply(v) : filter.apply(v, *indicator);
}

FEField van_cittert(const FEField& v, double delta, int N)
{
    return HelmholtzFilter(v.space_ptr(), delta).deconvolve(v, N);
}

FEField indicator(const FEField& v, double delta, int N, IndicatorMode mode)
{
    return HelmholtzFilter(v.space_ptr(), delta).indicator(v, N, mode);
}

FEField relax(const FEField& v, const FEField& v_bar, double chi)
{
    if (v.space_ptr() != v_bar.space_ptr()) {
        throw InvalidArgument("relax: fields live on different spaces");
    }
    if (!(chi >= 0.0 && chi <= 1.0)) {
        throw InvalidArgument("relax: chi must lie in [0, 1]");
    }
    if (chi == 0.0) {
        return v;
    }
    if (chi == 1.0) {
        return v_bar;
    }
    FEField u(v.space_ptr());
    for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = (1.0 - chi) * v[i] + chi * v_bar[i];
    }
    return u;
}

EFRStepResult efr_step(const FEField& u_n, double t_next, const EvolveSystem& evolve, const HelmholtzFilter& filter,
                       const EFRConfig& config)
{
    config.validate();
    if (filter.delta() != config.delta) {
        throw InvalidArgument("efr_step: filter radius does not match the configuration");
    }
    auto stage = [](const char* name, auto&& body) {
        try {
            return body();
        } catch (const SolverFailure& e) {
            throw StageError(std::string(name) + ": " + e.what(), name, -1, e.residual());
        } catch (const SingularMatrix& e) {
            throw StageError(std::string(name) + ": " + e.what(), name, -1, 0.0);
        }
    };

    SolveStats evolve_stats;
    FEField v = stage("evolve", [&] { return evolve.step(u_n, t_next, &evolve_stats); });
    int indicator_iterations = 0;
    FEField a = stage("indicator", [&] { return filter.indicator(v, config.N, config.indicator_mode, &indicator_iterations); });
    SolveStats filter_stats;
    FEField v_bar = stage("filter", [&] { return filter.apply(v, a, &filter_stats); });
    FEField u = config.delta == 0.0 ? v : relax(v, v_bar, config.chi);
    return {std::move(u), std::move(v), std::move(v_bar), std::move(a), evolve_stats.iterations,
            indicator_iterations + filter_stats.iterations};
}

} // namespace adr

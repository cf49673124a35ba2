#include "adr/evolve.hpp"

#include "adr/errors.hpp"

#include <cmath>
#include <string>

namespace adr {

void ADRProblem::validate() const
{
    if (!(mu > 0.0)) {
        throw InvalidArgument("ADRProblem: mu must be positive");
    }
    if (!(sigma >= 0.0)) {
        throw InvalidArgument("ADRProblem: sigma must be nonnegative");
    }
    if (!(final_time > 0.0)) {
        throw InvalidArgument("ADRProblem: final time must be positive");
    }
}

TimeConfig TimeConfig::for_interval(double final_time, double dt)
{
    if (!(dt > 0.0) || !(final_time > 0.0)) {
        throw InvalidArgument("TimeConfig: dt and final time must be positive");
    }
    TimeConfig tc;
    tc.dt = dt;
    tc.n_steps = static_cast<int>(std::lround(final_time / dt));
    if (tc.n_steps < 1 || std::abs(tc.n_steps * dt - final_time) > 1e-12) {
        throw InvalidArgument("TimeConfig: final time " + std::to_string(final_time) +
                              " is not a whole number of steps of " + std::to_string(dt));
    }
    return tc;
}

EvolveSystem::EvolveSystem(const ADRProblem& problem, std::shared_ptr<const FESpace> space, double dt,
                           const StabConfig& stab, const SolverOptions& solver)
    : problem_(problem), space_(std::move(space)), dt_(dt),
      stab_(stab, problem.mu, problem.b, problem.sigma, dt, space_)
{
    problem_.validate();
    stab.validate();
    if (!(dt > 0.0)) {
        throw InvalidArgument("EvolveSystem: dt must be positive");
    }
    mass_ = assemble_mass(*space_);
    unconstrained_ = assemble_operator(*space_, problem_.mu, problem_.b, problem_.sigma + 1.0 / dt_);
    if (stab_.active()) {
        unconstrained_.add_scaled(1.0, stab_.lhs());
    }
    CsrMatrix constrained = unconstrained_;
    constrain_matrix(constrained, space_->dirichlet_dofs());
    SolverOptions opts = solver;
    opts.method = SolverMethod::bicgstab;
    solver_ = std::make_unique<LinearSolver>(std::move(constrained), opts);
}

Vector EvolveSystem::boundary_values(double t) const
{
    const auto& dofs = space_->dirichlet_dofs();
    Vector values(dofs.size(), 0.0);
    if (problem_.dirichlet) {
        const auto coords = space_->dof_coords();
        for (std::size_t m = 0; m < dofs.size(); ++m) {
            const Vec2& x = coords[static_cast<std::size_t>(dofs[m])];
            values[m] = problem_.dirichlet(x[0], x[1], t);
        }
    }
    return values;
}

Vector EvolveSystem::rhs(const FEField& u_n, double t_next) const
{
    if (u_n.size() != space_->num_dofs()) {
        throw InvalidArgument("EvolveSystem: u_n is not on the system's space");
    }
    Vector rhs = spmv(mass_, u_n.values());
    const double inv_dt = 1.0 / dt_;
    for (double& r : rhs) {
        r *= inv_dt;
    }
    SpatialFunction f;
    if (problem_.forcing) {
        f = [&](double x, double y) { return problem_.forcing(x, y, t_next); };
        const Vector load = assemble_load(*space_, f, 2 * space_->degree() + 2);
        for (std::size_t i = 0; i < rhs.size(); ++i) {
            rhs[i] += load[i];
        }
    }
    if (stab_.active()) {
        const Vector extra = stab_.rhs(&u_n, f);
        for (std::size_t i = 0; i < rhs.size(); ++i) {
            rhs[i] += extra[i];
        }
    }
    return rhs;
}

FEField EvolveSystem::step(const FEField& u_n, double t_next, SolveStats* stats) const
{
    Vector b = rhs(u_n, t_next);
    const Vector trace = boundary_values(t_next);
    const auto& dofs = space_->dirichlet_dofs();
    lift_rhs(unconstrained_, b, dofs, trace);
    Vector x = solver_->solve(b, stats);
    // Identity rows are solved only to the Krylov tolerance; pin them exactly.
    for (std::size_t m = 0; m < dofs.size(); ++m) {
        x[static_cast<std::size_t>(dofs[m])] = trace[m];
    }
    return FEField(space_, std::move(x));
}

FEField galerkin_step(const FEField& u_n, double t_next, const ADRProblem& problem, double dt, const StabConfig& stab)
{
    const EvolveSystem system(problem, u_n.space_ptr(), dt, stab);
    return system.step(u_n, t_next);
}

} // namespace adr

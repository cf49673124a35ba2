#pragma once

#include "adr/fem.hpp"
#include "adr/problem.hpp"
#include "adr/sparse.hpp"
#include "adr/stabilizers.hpp"

#include <memory>

namespace adr {

/// Backward Euler step operator
///   (1/dt)(u, w) + b(u, w) [+ b_s(u, w)] = (1/dt)(u^n, w) + (f^{n+1}, w),
/// with u = u_D(t^{n+1}) on the boundary. Matrices depend only on the
/// coefficients, dt and the mesh, so they are assembled and factorized once.
class EvolveSystem {
public:
    EvolveSystem(const ADRProblem& problem, std::shared_ptr<const FESpace> space, double dt,
                 const StabConfig& stab = {}, const SolverOptions& solver = {});

    [[nodiscard]] FEField step(const FEField& u_n, double t_next, SolveStats* stats = nullptr) const;

    /// Right-hand side of the step before Dirichlet conditions.
    [[nodiscard]] Vector rhs(const FEField& u_n, double t_next) const;
    /// Evolve matrix (Galerkin plus stabilization) before Dirichlet conditions.
    [[nodiscard]] const CsrMatrix& unconstrained_matrix() const noexcept { return unconstrained_; }
    [[nodiscard]] const CsrMatrix& mass() const noexcept { return mass_; }
    [[nodiscard]] const std::shared_ptr<const FESpace>& space() const noexcept { return space_; }
    [[nodiscard]] const ADRProblem& problem() const noexcept { return problem_; }
    [[nodiscard]] double dt() const noexcept { return dt_; }

    /// u_D(t) at the Dirichlet dofs, in dirichlet_dofs() order.
    [[nodiscard]] Vector boundary_values(double t) const;

private:
    ADRProblem problem_;
    std::shared_ptr<const FESpace> space_;
    double dt_;
    CsrMatrix mass_;
    CsrMatrix unconstrained_;
    StabilizationOperator stab_;
    std::unique_ptr<LinearSolver> solver_;
};

/// One step built from scratch; EvolveSystem is the reusable form.
FEField galerkin_step(const FEField& u_n, double t_next, const ADRProblem& problem, double dt,
                      const StabConfig& stab = {});

} // namespace adr

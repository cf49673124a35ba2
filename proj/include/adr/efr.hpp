#pragma once

#include "adr/evolve.hpp"
#include "adr/fem.hpp"
#include "adr/sparse.hpp"

#include <memory>
#include <optional>
#include <string_view>

namespace adr {

enum class IndicatorMode { clip, normalize };

std::string_view to_string(IndicatorMode mode);
IndicatorMode indicator_mode_from_string(std::string_view name);

struct EFRConfig {
    double delta = 0.0; ///< filtering radius
    int N = 0;          ///< Van Cittert deconvolution order
    double chi = 1.0;   ///< relaxation parameter
    IndicatorMode indicator_mode = IndicatorMode::clip;

    void validate() const;
};

/// Differential filter (v_bar, w) + delta^2 (a grad v_bar, grad w) = (v, w).
/// The filtered field keeps the Dirichlet trace of its input, so the
/// operator is linear and maps u_D to u_D. With a = 1 it is the Helmholtz
/// filter (I - delta^2 lap)^{-1}, whose system is factorized once.
class HelmholtzFilter {
public:
    HelmholtzFilter(std::shared_ptr<const FESpace> space, double delta, const SolverOptions& solver = {});

    [[nodiscard]] double delta() const noexcept { return delta_; }
    [[nodiscard]] const CsrMatrix& mass() const noexcept { return mass_; }

    /// a = 1.
    [[nodiscard]] FEField apply(const FEField& v, SolveStats* stats = nullptr) const;
    /// Indicator-weighted filter. The nodal indicator is interpolated to
    /// quadrature points and clamped to [0, 1] there.
    [[nodiscard]] FEField apply(const FEField& v, const FEField& indicator, SolveStats* stats = nullptr) const;

    /// D_N F v through N + 1 filter applications.
    [[nodiscard]] FEField deconvolve(const FEField& v, int N, int* iterations = nullptr) const;
    /// Nodal |v - D_N F v| mapped into [0, 1].
    [[nodiscard]] FEField indicator(const FEField& v, int N, IndicatorMode mode, int* iterations = nullptr) const;

    /// mass + delta^2 * (weighted) stiffness, before boundary conditions.
    [[nodiscard]] CsrMatrix system_matrix(const FEField* indicator) const;

private:
    [[nodiscard]] FEField solve_with(const LinearSolver& solver, const CsrMatrix& unconstrained, const FEField& v,
                                     SolveStats* stats) const;

    std::shared_ptr<const FESpace> space_;
    double delta_;
    SolverOptions solver_options_;
    CsrMatrix mass_;
    CsrMatrix stiffness_;
    CsrMatrix uniform_;
    std::unique_ptr<LinearSolver> uniform_solver_;
};

FEField helmholtz_filter(const FEField& v, double delta, const FEField* indicator = nullptr);
FEField van_cittert(const FEField& v, double delta, int N);
FEField indicator(const FEField& v, double delta, int N, IndicatorMode mode = IndicatorMode::clip);
/// (1 - chi) v + chi v_bar, dofwise.
FEField relax(const FEField& v, const FEField& v_bar, double chi);

struct EFRStepResult {
    FEField u;         ///< u^{n+1}
    FEField evolved;   ///< v^{n+1}
    FEField filtered;  ///< v_bar^{n+1}
    FEField indicator; ///< a(v^{n+1})
    int evolve_iterations = 0;
    int filter_iterations = 0; ///< indicator and filter solves together
};

/// Evolve, filter with a(v^{n+1}), relax. Solver failures come back as
/// StageError tagged evolve, indicator or filter (step index -1).
EFRStepResult efr_step(const FEField& u_n, double t_next, const EvolveSystem& evolve, const HelmholtzFilter& filter,
                       const EFRConfig& config);

} // namespace adr

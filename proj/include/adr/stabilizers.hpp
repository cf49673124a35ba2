#pragma once

#include "adr/fem.hpp"
#include "adr/sparse.hpp"
#include "adr/types.hpp"

#include <memory>
#include <optional>
#include <string_view>

namespace adr {

enum class StabMethod { none, artificial_viscosity, streamline_upwind, supg, gls, douglas_wang, asgs };

std::string_view to_string(StabMethod method);
/// Inverse of to_string; throws InvalidArgument for unknown names.
StabMethod stab_method_from_string(std::string_view name);

/// True for the residual-based (strongly consistent) methods.
bool is_residual_based(StabMethod method);

struct StabConfig {
    StabMethod method = StabMethod::none;
    double c_art = 0.5;      ///< artificial viscosity and streamline upwind constant
    double delta_supg = 1.0; ///< tau = delta_supg * h_K / |b| for SUPG, GLS, Douglas-Wang
    bool use_sigma_eff = true; ///< ASGS tau uses sigma + 1/dt instead of sigma

    void validate() const;
    /// The constant that scales tau for this method (nullopt for none and ASGS).
    [[nodiscard]] std::optional<double> tau_constant() const;
};

/// Element stabilization parameter.
///   artificial viscosity: c_art h_K |b|
///   streamline upwind:    c_art h_K / |b|
///   SUPG, GLS, DW:        delta_supg h_K / |b|
///   ASGS:                 1 / (4 mu / h_K^2 + 2 |b| / h_K + sigma)
/// Methods dividing by |b| return 0 when |b| = 0.
double tau(const StabConfig& config, double h_K, double mu, double b_norm, double sigma);

/// Data entering the residual R(u) = f_t - L_t u with f_t = u^n / dt + f^{n+1}.
struct ResidualContext {
    double mu = 0.0;
    Vec2 b{0.0, 0.0};
    double sigma = 0.0;
    double dt = 1.0;
    std::optional<FEField> previous; ///< u^n; zero when absent
    SpatialFunction forcing;         ///< f^{n+1}; zero when empty
};

struct StabilizationTerms {
    CsrMatrix matrix; ///< added to the evolve matrix
    Vector rhs;       ///< added to the evolve right-hand side
};

/// Stabilization of one time step, split so the constant parts are assembled
/// once: lhs() is fixed for given coefficients, and the rhs is
/// previous_coupling * u^n + load(f). All terms have the form
/// tau (L_t phi_j, T phi_i)_K on the left and tau (f_t, T phi_i)_K on the right,
/// with T = b.grad (SUPG), L_t (GLS) or -L_t^* (Douglas-Wang, ASGS).
class StabilizationOperator {
public:
    StabilizationOperator(const StabConfig& config, double mu, const Vec2& b, double sigma, double dt,
                          std::shared_ptr<const FESpace> space);

    [[nodiscard]] bool active() const noexcept { return config_.method != StabMethod::none; }
    [[nodiscard]] const CsrMatrix& lhs() const noexcept { return lhs_; }
    /// Rhs contribution for the given u^n (may be null) and f^{n+1} (may be empty).
    [[nodiscard]] Vector rhs(const FEField* previous, const SpatialFunction& forcing) const;

private:
    StabConfig config_;
    double mu_;
    Vec2 b_;
    double sigma_eff_;
    double dt_;
    std::shared_ptr<const FESpace> space_;
    std::vector<double> cell_tau_;
    CsrMatrix lhs_;
    CsrMatrix previous_coupling_;
};

StabilizationTerms stabilization_contribution(const StabConfig& config, const ResidualContext& ctx,
                                              const std::shared_ptr<const FESpace>& space);

} // namespace adr

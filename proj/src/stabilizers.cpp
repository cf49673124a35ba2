#include "adr/stabilizers.hpp"

#include "adr/errors.hpp"

#include <array>
#include <cmath>
#include <string>

namespace adr {
namespace {

constexpr std::array<std::pair<StabMethod, std::string_view>, 7> method_names{{
    {StabMethod::none, "none"},
    {StabMethod::artificial_viscosity, "artificial_viscosity"},
    {StabMethod::streamline_upwind, "streamline_upwind"},
    {StabMethod::supg, "supg"},
    {StabMethod::gls, "gls"},
    {StabMethod::douglas_wang, "douglas_wang"},
    {StabMethod::asgs, "asgs"},
}};

double norm(const Vec2& b) { return std::hypot(b[0], b[1]); }

struct ResidualOperators {
    StabMethod method;
    double mu;
    Vec2 b;
    double sigma_eff;

    // L_t phi = -mu lap(phi) + b.grad(phi) + sigma_eff phi
    [[nodiscard]] double lt(const CellValues& cv, int j, std::size_t q) const
    {
        return -mu * cv.laplacian(j) + dot(b, cv.grad(j, q)) + sigma_eff * cv.shape(j, q);
    }

    // Test operator T: b.grad for SUPG, L_t for GLS, -L_t^* otherwise.
    [[nodiscard]] double test(const CellValues& cv, int i, std::size_t q) const
    {
        switch (method) {
        case StabMethod::supg:
            return dot(b, cv.grad(i, q));
        case StabMethod::gls:
            return lt(cv, i, q);
        default:
            return mu * cv.laplacian(i) + dot(b, cv.grad(i, q)) - sigma_eff * cv.shape(i, q);
        }
    }
};

} // namespace

std::string_view to_string(StabMethod method)
{
    for (const auto& [m, name] : method_names) {
        if (m == method) {
            return name;
        }
    }
    return "unknown";
}

StabMethod stab_method_from_string(std::string_view name)
{
    for (const auto& [m, n] : method_names) {
        if (n == name) {
            return m;
        }
    }
    throw InvalidArgument("unknown stabilization method '" + std::string(name) + "'");
}

bool is_residual_based(StabMethod method)
{
    return method == StabMethod::supg || method == StabMethod::gls || method == StabMethod::douglas_wang ||
           method == StabMethod::asgs;
}

void StabConfig::validate() const
{
    if (!(c_art >= 0.0) || !std::isfinite(c_art)) {
        throw InvalidArgument("StabConfig: c_art must be >= 0");
    }
    if (!(delta_supg > 0.0)) {
        throw InvalidArgument("StabConfig: delta_supg must be positive");
    }
}

std::optional<double> StabConfig::tau_constant() const
{
    switch (method) {
    case StabMethod::artificial_viscosity:
    case StabMethod::streamline_upwind:
        return c_art;
    case StabMethod::supg:
    case StabMethod::gls:
    case StabMethod::douglas_wang:
        return delta_supg;
    default:
        return std::nullopt;
    }
}

double tau(const StabConfig& config, double h_K, double mu, double b_norm, double sigma)
{
    switch (config.method) {
    case StabMethod::none:
        return 0.0;
    case StabMethod::artificial_viscosity:
        return config.c_art * h_K * b_norm;
    case StabMethod::streamline_upwind:
        return b_norm == 0.0 ? 0.0 : config.c_art * h_K / b_norm;
    case StabMethod::supg:
    case StabMethod::gls:
    case StabMethod::douglas_wang:
        return b_norm == 0.0 ? 0.0 : config.delta_supg * h_K / b_norm;
    case StabMethod::asgs:
        return 1.0 / (4.0 * mu / (h_K * h_K) + 2.0 * b_norm / h_K + sigma);
    }
    return 0.0;
}

StabilizationOperator::StabilizationOperator(const StabConfig& config, double mu, const Vec2& b, double sigma,
                                             double dt, std::shared_ptr<const FESpace> space)
    : config_(config), mu_(mu), b_(b), sigma_eff_(sigma + 1.0 / dt), dt_(dt), space_(std::move(space))
{
    if (!(dt > 0.0)) {
        throw InvalidArgument("StabilizationOperator: dt must be positive");
    }
    const FESpace& sp = *space_;
    lhs_ = sp.new_matrix();
    if (!active()) {
        return;
    }

    const double b_norm = norm(b_);
    const double tau_sigma = config_.use_sigma_eff ? sigma_eff_ : sigma;
    cell_tau_.resize(sp.num_cells());
    for (std::size_t c = 0; c < sp.num_cells(); ++c) {
        cell_tau_[c] = tau(config_, sp.geometry(c).diameter, mu_, b_norm, tau_sigma);
    }

    const int quad = 2 * sp.degree() + 2;
    const ResidualOperators ops{config_.method, mu_, b_, sigma_eff_};

    if (!is_residual_based(config_.method)) {
        const bool isotropic = config_.method == StabMethod::artificial_viscosity;
        lhs_ = assemble_matrix(sp, 2 * sp.degree(), [&](const CellValues& cv, std::span<double> local) {
            const int k = cv.dofs_per_cell();
            const double t = cell_tau_[cv.cell()];
            for (std::size_t q = 0; q < cv.num_points(); ++q) {
                const double w = t * cv.jxw(q);
                for (int i = 0; i < k; ++i) {
                    for (int j = 0; j < k; ++j) {
                        const double v = isotropic ? dot(cv.grad(i, q), cv.grad(j, q))
                                                   : dot(b_, cv.grad(i, q)) * dot(b_, cv.grad(j, q));
                        local[i * k + j] += w * v;
                    }
                }
            }
        });
        previous_coupling_ = sp.new_matrix();
        return;
    }

    lhs_ = assemble_matrix(sp, quad, [&](const CellValues& cv, std::span<double> local) {
        const int k = cv.dofs_per_cell();
        const double t = cell_tau_[cv.cell()];
        for (std::size_t q = 0; q < cv.num_points(); ++q) {
            const double w = t * cv.jxw(q);
            for (int i = 0; i < k; ++i) {
                const double test = ops.test(cv, i, q);
                for (int j = 0; j < k; ++j) {
                    local[i * k + j] += w * ops.lt(cv, j, q) * test;
                }
            }
        }
    });

    // u^n / dt part of f_t against T phi_i.
    const double inv_dt = 1.0 / dt_;
    previous_coupling_ = assemble_matrix(sp, quad, [&](const CellValues& cv, std::span<double> local) {
        const int k = cv.dofs_per_cell();
        const double t = cell_tau_[cv.cell()];
        for (std::size_t q = 0; q < cv.num_points(); ++q) {
            const double w = t * inv_dt * cv.jxw(q);
            for (int i = 0; i < k; ++i) {
                const double test = ops.test(cv, i, q);
                for (int j = 0; j < k; ++j) {
                    local[i * k + j] += w * cv.shape(j, q) * test;
                }
            }
        }
    });
}

Vector StabilizationOperator::rhs(const FEField* previous, const SpatialFunction& forcing) const
{
    const FESpace& sp = *space_;
    Vector out(sp.num_dofs(), 0.0);
    if (!is_residual_based(config_.method)) {
        return out;
    }
    if (previous != nullptr) {
        if (previous->size() != sp.num_dofs()) {
            throw InvalidArgument("StabilizationOperator::rhs: previous field has the wrong size");
        }
        out = spmv(previous_coupling_, previous->values());
    }
    if (!forcing) {
        return out;
    }
    const ResidualOperators ops{config_.method, mu_, b_, sigma_eff_};
    const Vector load = assemble_vector(sp, 2 * sp.degree() + 2, [&](const CellValues& cv, std::span<double> local) {
        const double t = cell_tau_[cv.cell()];
        for (std::size_t q = 0; q < cv.num_points(); ++q) {
            const Vec2& x = cv.point(q);
            const double fw = t * forcing(x[0], x[1]) * cv.jxw(q);
            for (int i = 0; i < cv.dofs_per_cell(); ++i) {
                local[i] += fw * ops.test(cv, i, q);
            }
        }
    });
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] += load[i];
    }
    return out;
}

StabilizationTerms stabilization_contribution(const StabConfig& config, const ResidualContext& ctx,
                                              const std::shared_ptr<const FESpace>& space)
{
    config.validate();
    const StabilizationOperator op(config, ctx.mu, ctx.b, ctx.sigma, ctx.dt, space);
    const FEField* previous = ctx.previous ? &*ctx.previous : nullptr;
    return {op.lhs(), op.rhs(previous, ctx.forcing)};
}

} // namespace adr

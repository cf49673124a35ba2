#include "adr/errors.hpp"
#include "adr/stabilizers.hpp"
#include "oracle_values.hpp"
#include "properties.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace adr;
using adr::testing::make_space;

namespace {

StabConfig config_for(StabMethod method)
{
    StabConfig c;
    c.method = method;
    return c;
}

ResidualContext benchmark_context()
{
    ResidualContext ctx;
    ctx.mu = 1e-5;
    ctx.b = {2.0, 3.0};
    ctx.sigma = 1.0;
    ctx.dt = 1e-3;
    return ctx;
}

double max_abs(std::span<const double> v)
{
    double m = 0.0;
    for (double x : v) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

} // namespace

TEST(Tau, WorkedExamples)
{
    const double h = std::sqrt(2.0) / 25.0;
    EXPECT_NEAR(tau(config_for(StabMethod::asgs), h, 1e-5, std::sqrt(13.0), 1001.0), oracle::tau_asgs_level0, 1e-15);
    EXPECT_NEAR(tau(config_for(StabMethod::asgs), h, 1e-5, std::sqrt(13.0), 1001.0), 8.861e-4, 1e-7);
    EXPECT_DOUBLE_EQ(tau(config_for(StabMethod::supg), 0.01, 1.0, 2.0, 0.0), 0.005);
    EXPECT_DOUBLE_EQ(tau(config_for(StabMethod::artificial_viscosity), 0.1, 1.0, 2.0, 0.0), 0.5 * 0.1 * 2.0);
    EXPECT_EQ(tau(config_for(StabMethod::none), 0.1, 1.0, 2.0, 0.0), 0.0);
}

TEST(Tau, VanishesWithMeshSize)
{
    for (StabMethod m : {StabMethod::artificial_viscosity, StabMethod::streamline_upwind, StabMethod::supg,
                         StabMethod::gls, StabMethod::douglas_wang}) {
        const StabConfig c = config_for(m);
        const double coarse = tau(c, 0.1, 1e-5, 3.0, 1.0);
        EXPECT_NEAR(tau(c, 0.05, 1e-5, 3.0, 1.0), 0.5 * coarse, 1e-15) << to_string(m);
        EXPECT_LT(tau(c, 1e-8, 1e-5, 3.0, 1.0), 1e-7);
    }
}

TEST(Tau, ZeroAdvectionDoesNotDivideByZero)
{
    for (StabMethod m : {StabMethod::streamline_upwind, StabMethod::supg, StabMethod::gls, StabMethod::douglas_wang}) {
        EXPECT_EQ(tau(config_for(m), 0.1, 1.0, 0.0, 1.0), 0.0);
    }
}

TEST(StabConfig, Validation)
{
    StabConfig c = config_for(StabMethod::supg);
    c.delta_supg = 0.0;
    EXPECT_THROW(c.validate(), InvalidArgument);
    c = config_for(StabMethod::artificial_viscosity);
    c.c_art = -1.0;
    EXPECT_THROW(c.validate(), InvalidArgument);
    EXPECT_EQ(stab_method_from_string("douglas_wang"), StabMethod::douglas_wang);
    EXPECT_THROW((void)stab_method_from_string("sugp"), InvalidArgument);
}

TEST(Stabilization, NoneAndZeroConstantGiveNothing)
{
    const auto space = make_space(4, 2);
    const ResidualContext ctx = benchmark_context();
    const StabilizationTerms none = stabilization_contribution(config_for(StabMethod::none), ctx, space);
    EXPECT_EQ(max_abs(none.matrix.values()), 0.0);
    EXPECT_EQ(max_abs(none.rhs), 0.0);
    StabConfig av = config_for(StabMethod::artificial_viscosity);
    av.c_art = 0.0;
    const StabilizationTerms zero = stabilization_contribution(av, ctx, space);
    EXPECT_EQ(max_abs(zero.matrix.values()), 0.0);
    EXPECT_EQ(max_abs(zero.rhs), 0.0);
}

TEST(Stabilization, StronglyConsistentMethodsVanishOnExactResidual)
{
    for (StabMethod m : {StabMethod::supg, StabMethod::gls, StabMethod::douglas_wang, StabMethod::asgs}) {
        EXPECT_LE(adr::testing::strong_consistency_defect(m, 6), 1e-10) << to_string(m);
    }
}

TEST(Stabilization, NonConsistentMethodsAreSymmetricAndLinearInConstant)
{
    const auto space = make_space(5, 2);
    const ResidualContext ctx = benchmark_context();
    for (StabMethod m : {StabMethod::artificial_viscosity, StabMethod::streamline_upwind}) {
        StabConfig c = config_for(m);
        c.c_art = 0.25;
        const StabilizationTerms one = stabilization_contribution(c, ctx, space);
        c.c_art = 0.5;
        const StabilizationTerms two = stabilization_contribution(c, ctx, space);
        EXPECT_EQ(max_abs(one.rhs), 0.0);
        const auto probe = adr::testing::probe_spd(one.matrix, 10, 3);
        EXPECT_LE(probe.asymmetry, 1e-15 * max_abs(one.matrix.values()));
        EXPECT_GE(probe.min_rayleigh, -1e-14);
        for (std::size_t k = 0; k < one.matrix.nnz(); ++k) {
            EXPECT_NEAR(two.matrix.values()[k], 2.0 * one.matrix.values()[k], 1e-15 + 1e-13 * std::abs(one.matrix.values()[k]));
        }
    }
}

TEST(Stabilization, OperatorMatchesOneShotContribution)
{
    const auto space = make_space(4, 2);
    ResidualContext ctx = benchmark_context();
    ctx.previous = interpolate(space, [](double x, double y) { return x * (1 - x) * y; });
    ctx.forcing = [](double x, double y) { return std::sin(x + 2 * y); };
    for (StabMethod m : {StabMethod::supg, StabMethod::gls, StabMethod::douglas_wang, StabMethod::asgs}) {
        const StabConfig c = config_for(m);
        const StabilizationOperator op(c, ctx.mu, ctx.b, ctx.sigma, ctx.dt, space);
        const StabilizationTerms terms = stabilization_contribution(c, ctx, space);
        const Vector rhs = op.rhs(&*ctx.previous, ctx.forcing);
        for (std::size_t i = 0; i < rhs.size(); ++i) {
            EXPECT_NEAR(rhs[i], terms.rhs[i], 1e-12 * std::max(1.0, std::abs(terms.rhs[i])));
        }
        for (std::size_t k = 0; k < terms.matrix.nnz(); ++k) {
            EXPECT_DOUBLE_EQ(op.lhs().values()[k], terms.matrix.values()[k]);
        }
    }
}

TEST(Stabilization, SupgOnP1HasOnlyStreamlineDiffusionInLhs)
{
    // For P1 the Laplacian vanishes cellwise, so the SUPG matrix is
    // streamline diffusion plus tau ((1/dt + sigma) phi_j, b . grad phi_i).
    const auto space = make_space(3, 1);
    const ResidualContext ctx = benchmark_context();
    StabConfig supg = config_for(StabMethod::supg);
    supg.delta_supg = 0.5;
    StabConfig su = config_for(StabMethod::streamline_upwind);
    su.c_art = 0.5;
    const StabilizationTerms a = stabilization_contribution(supg, ctx, space);
    const StabilizationTerms b = stabilization_contribution(su, ctx, space);
    const CsrMatrix asym = a.matrix.transpose();
    // The symmetric part of SUPG minus streamline upwind is the symmetric part of the reaction coupling,
    // tau sigma_eff/2 * integral of b . grad(phi_i phi_j), which vanishes on interior-interior pairs.
    for (std::size_t i = 0; i < a.matrix.rows(); ++i) {
        if (space->is_dirichlet(i)) {
            continue;
        }
        for (std::size_t p = a.matrix.row_offsets()[i]; p < a.matrix.row_offsets()[i + 1]; ++p) {
            const auto j = static_cast<std::size_t>(a.matrix.column_indices()[p]);
            if (space->is_dirichlet(j)) {
                continue;
            }
            const double sym = 0.5 * (a.matrix.values()[p] + asym.at(i, j));
            EXPECT_NEAR(sym, b.matrix.at(i, j), 1e-12);
        }
    }
}

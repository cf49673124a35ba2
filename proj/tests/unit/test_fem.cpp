#include "adr/fem.hpp"
#include "oracle_values.hpp"
#include "properties.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace adr;
using adr::testing::make_space;

TEST(ReferenceBasis, P1Kronecker)
{
    const Vec2 vertices[] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
    for (int k = 0; k < 3; ++k) {
        const BasisValues b = reference_basis(1, vertices[k]);
        ASSERT_EQ(b.count, 3);
        for (int i = 0; i < 3; ++i) {
            EXPECT_EQ(b.values[i], i == k ? 1.0 : 0.0);
        }
    }
}

TEST(ReferenceBasis, P2KroneckerAtNodes)
{
    const Vec2 nodes[] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {0.5, 0.0}, {0.5, 0.5}, {0.0, 0.5}};
    for (int k = 0; k < 6; ++k) {
        const BasisValues b = reference_basis(2, nodes[k]);
        ASSERT_EQ(b.count, 6);
        for (int i = 0; i < 6; ++i) {
            EXPECT_NEAR(b.values[i], i == k ? 1.0 : 0.0, 1e-15);
        }
    }
}

TEST(ReferenceBasis, P2AtBarycenter)
{
    const BasisValues b = reference_basis(2, {1.0 / 3.0, 1.0 / 3.0});
    for (int i = 0; i < 3; ++i) {
        EXPECT_NEAR(b.values[i], oracle::p2_vertex_at_barycenter, 1e-15);
        EXPECT_NEAR(b.values[i + 3], oracle::p2_edge_at_barycenter, 1e-15);
    }
}

TEST(ReferenceBasis, PartitionOfUnityAndDerivativesAgainstDifferences)
{
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double h = 1e-6;
    for (int degree : {1, 2}) {
        for (int s = 0; s < 200; ++s) {
            double x = unit(rng);
            double y = unit(rng);
            if (x + y > 1.0) {
                x = 1.0 - x;
                y = 1.0 - y;
            }
            const BasisValues b = reference_basis(degree, {x, y});
            double sum = 0.0;
            Vec2 gsum{0.0, 0.0};
            for (int i = 0; i < b.count; ++i) {
                sum += b.values[i];
                gsum[0] += b.gradients[i][0];
                gsum[1] += b.gradients[i][1];
                const BasisValues px = reference_basis(degree, {x + h, y});
                const BasisValues mx = reference_basis(degree, {x - h, y});
                const BasisValues py = reference_basis(degree, {x, y + h});
                const BasisValues my = reference_basis(degree, {x, y - h});
                EXPECT_NEAR(b.gradients[i][0], (px.values[i] - mx.values[i]) / (2 * h), 1e-8);
                EXPECT_NEAR(b.gradients[i][1], (py.values[i] - my.values[i]) / (2 * h), 1e-8);
                EXPECT_NEAR(b.hessians[i][0][0], (px.gradients[i][0] - mx.gradients[i][0]) / (2 * h), 1e-6);
                EXPECT_NEAR(b.hessians[i][1][1], (py.gradients[i][1] - my.gradients[i][1]) / (2 * h), 1e-6);
                EXPECT_NEAR(b.hessians[i][0][1], (py.gradients[i][0] - my.gradients[i][0]) / (2 * h), 1e-6);
            }
            EXPECT_NEAR(sum, 1.0, 1e-14);
            EXPECT_NEAR(gsum[0], 0.0, 1e-13);
            EXPECT_NEAR(gsum[1], 0.0, 1e-13);
        }
    }
}

TEST(FESpace, DofCounts)
{
    for (int n : {1, 4, 25}) {
        const auto p1 = make_space(n, 1);
        const auto p2 = make_space(n, 2);
        EXPECT_EQ(p1->num_dofs(), static_cast<std::size_t>((n + 1) * (n + 1)));
        EXPECT_EQ(p2->num_dofs(), static_cast<std::size_t>((2 * n + 1) * (2 * n + 1)));
        EXPECT_EQ(p1->dirichlet_dofs().size(), static_cast<std::size_t>(4 * n));
        EXPECT_EQ(p2->dirichlet_dofs().size(), static_cast<std::size_t>(8 * n));
    }
}

TEST(FESpace, DirichletDofsAreExactlyTheBoundaryDofs)
{
    const auto space = make_space(3, 2);
    for (std::size_t d = 0; d < space->num_dofs(); ++d) {
        const Vec2 p = space->dof_coords()[d];
        const bool on_boundary = p[0] == 0.0 || p[0] == 1.0 || p[1] == 0.0 || p[1] == 1.0;
        EXPECT_EQ(space->is_dirichlet(d), on_boundary) << "dof " << d;
    }
}

TEST(FESpace, CellDofCoordinatesMatchReferenceNodes)
{
    const auto space = make_space(4, 2);
    const Vec2 nodes[] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {0.5, 0.0}, {0.5, 0.5}, {0.0, 0.5}};
    for (std::size_t c = 0; c < space->num_cells(); ++c) {
        const auto dofs = space->cell_dofs(c);
        for (int i = 0; i < 6; ++i) {
            const Vec2 expected = space->geometry(c).map(nodes[i]);
            const Vec2 actual = space->dof_coords()[static_cast<std::size_t>(dofs[static_cast<std::size_t>(i)])];
            EXPECT_NEAR(actual[0], expected[0], 1e-15);
            EXPECT_NEAR(actual[1], expected[1], 1e-15);
        }
    }
}

TEST(Assembly, MassIsSpdAndIntegratesOne)
{
    for (int degree : {1, 2}) {
        const auto space = make_space(6, degree);
        const CsrMatrix m = assemble_mass(*space);
        const auto probe = adr::testing::probe_spd(m, 50, 1);
        EXPECT_GT(probe.min_rayleigh, 0.0);
        EXPECT_LE(probe.asymmetry, 1e-15);
        const Vector ones(m.rows(), 1.0);
        const Vector m1 = spmv(m, ones);
        double total = 0.0;
        for (double v : m1) {
            total += v;
        }
        EXPECT_NEAR(total, 1.0, 1e-13);
    }
}

TEST(Assembly, StiffnessKernelIsConstants)
{
    for (int degree : {1, 2}) {
        const auto space = make_space(6, degree);
        const auto probe = adr::testing::probe_stiffness(*space, 50, 2);
        EXPECT_LE(probe.constant_residual, 1e-12);
        EXPECT_GE(probe.min_rayleigh, -1e-12);
        EXPECT_LE(probe.asymmetry, 1e-13);
    }
}

TEST(Assembly, AdvectionIsSkewOnInteriorCouplings)
{
    for (int degree : {1, 2}) {
        const auto space = make_space(7, degree);
        EXPECT_LE(adr::testing::advection_skew_defect(*space, {2.0, 3.0}), 1e-12);
        EXPECT_LE(adr::testing::advection_skew_defect(*space, {-0.7, 0.2}), 1e-12);
    }
}

TEST(Assembly, StiffnessEnergyOfQuadratic)
{
    // u = x^2 + y has |grad u|^2 integral 4/3 + 1.
    const auto space = make_space(5, 2);
    const FEField u = interpolate(space, [](double x, double y) { return x * x + y; });
    const Vector ku = spmv(assemble_stiffness(*space), u.values());
    double energy = 0.0;
    for (std::size_t i = 0; i < ku.size(); ++i) {
        energy += ku[i] * u[i];
    }
    EXPECT_NEAR(energy, 4.0 / 3.0 + 1.0, 1e-12);
}

TEST(Assembly, LoadExamples)
{
    const auto space = make_space(5, 2);
    const Vector zero = assemble_load(*space, [](double, double) { return 0.0; }, 4);
    for (double v : zero) {
        EXPECT_EQ(v, 0.0);
    }
    const Vector one = assemble_load(*space, [](double, double) { return 1.0; }, 4);
    double sum = 0.0;
    for (double v : one) {
        sum += v;
    }
    EXPECT_NEAR(sum, 1.0, 1e-13);
}

TEST(Dirichlet, AllConstrainedGivesZero)
{
    const auto space = make_space(2, 1);
    CsrMatrix a = assemble_mass(*space);
    Vector rhs(a.rows(), 3.0);
    std::vector<int> all(a.rows());
    for (std::size_t i = 0; i < all.size(); ++i) {
        all[i] = static_cast<int>(i);
    }
    apply_dirichlet(a, rhs, all, Vector(all.size(), 0.0));
    for (double v : solve(a, rhs)) {
        EXPECT_EQ(v, 0.0);
    }
}

TEST(Dirichlet, NoConstraintsLeaveSystemUnchanged)
{
    const auto space = make_space(2, 1);
    const CsrMatrix original = assemble_mass(*space);
    CsrMatrix a = original;
    Vector rhs(a.rows(), 1.5);
    apply_dirichlet(a, rhs, {}, {});
    for (std::size_t k = 0; k < a.nnz(); ++k) {
        EXPECT_EQ(a.values()[k], original.values()[k]);
    }
    EXPECT_EQ(rhs, Vector(a.rows(), 1.5));
}

TEST(Dirichlet, TwoByTwoConstraint)
{
    // [[2, 1], [1, 3]] x = [3, 4] with x_1 = 5 forces x_0 = (3 - 5) / 2.
    CsrMatrix a = CsrMatrix::from_triplets(2, 2, {{0, 0, 2.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 3.0}});
    Vector rhs{3.0, 4.0};
    const std::vector<int> dofs{1};
    apply_dirichlet(a, rhs, dofs, Vector{5.0});
    const Vector x = solve(a, rhs);
    EXPECT_NEAR(x[1], 5.0, 1e-13);
    EXPECT_NEAR(x[0], -1.0, 1e-13);
    EXPECT_EQ(a.at(0, 1), 0.0);
    EXPECT_EQ(a.at(1, 0), 0.0);
}

TEST(Interpolate, ExamplesAndLinearReproduction)
{
    const auto p2 = make_space(3, 2);
    const FEField c = interpolate(p2, [](double, double) { return 2.5; });
    for (std::size_t i = 0; i < c.size(); ++i) {
        EXPECT_EQ(c[i], 2.5);
    }
    const auto p1 = make_space(4, 1);
    auto g = [](double x, double y) { return 1.0 - 2.0 * x + 0.5 * y; };
    const FEField u = interpolate(p1, g);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int s = 0; s < 100; ++s) {
        const std::size_t cell = static_cast<std::size_t>(s) % p1->num_cells();
        double rx = unit(rng);
        double ry = unit(rng);
        if (rx + ry > 1.0) {
            rx = 1.0 - rx;
            ry = 1.0 - ry;
        }
        const Vec2 p = p1->geometry(cell).map({rx, ry});
        EXPECT_NEAR(u.evaluate(cell, {rx, ry}), g(p[0], p[1]), 1e-14);
    }
}

TEST(Errors, ExactForInterpolatedQuadratic)
{
    const auto space = make_space(4, 2);
    auto g = [](double x, double y) { return x * x - x * y + 3.0 * y; };
    auto grad = [](double x, double y) { return Vec2{2.0 * x - y, -x + 3.0}; };
    const ErrorNorms e = compute_errors(interpolate(space, g), g, grad, 7);
    EXPECT_LE(e.l2, 1e-14);
    EXPECT_LE(e.h1_semi, 1e-13);
    const ErrorNorms z = compute_errors(FEField(space), g, grad, 7);
    EXPECT_NEAR(z.h1_norm, std::hypot(z.l2, z.h1_semi), 1e-15);
}

TEST(Errors, L2NormOfDiscreteField)
{
    const auto space = make_space(3, 2);
    const FEField u = interpolate(space, [](double x, double) { return x; });
    EXPECT_NEAR(l2_norm(u, assemble_mass(*space)), std::sqrt(1.0 / 3.0), 1e-14);
}

#pragma once

#include "adr/fem.hpp"
#include "adr/problem.hpp"
#include "adr/types.hpp"

#include <array>

namespace adr::benchmark {

/// Partitions per side n_l for refinement levels l = 0..4.
inline constexpr std::array<int, 5> partitions{25, 50, 100, 200, 400};
/// Default EFR relaxation parameter per refinement level.
inline constexpr std::array<double, 5> chi_table{1.0, 1.0 / 2.0, 1.0 / 4.0, 1.0 / 16.0, 1.0 / 256.0};

int partitions_for_level(int level);
double chi_for_level(int level);

/// Hump with an internal layer of width O(sqrt(mu)), homogeneous Dirichlet data.
struct BenchmarkSpec {
    double mu = 1e-5;
    Vec2 b{2.0, 3.0};
    double sigma = 1.0;
    double final_time = 0.5;
    double dt = 1e-3;
    double length = 1.0;

    /// ||b||_inf L / (2 mu)
    [[nodiscard]] double peclet() const;
};

/// u = 16 sin(pi t) x(1-x) y(1-y) [1/2 + atan(2 mu^{-1/2} (1/16 - (x-1/2)^2 - (y-1/2)^2)) / pi]
double exact_solution(double x, double y, double t, double mu);
Vec2 exact_gradient(double x, double y, double t, double mu);
double exact_time_derivative(double x, double y, double t, double mu);
double exact_laplacian(double x, double y, double t, double mu);

/// d_t u - mu lap(u) + b . grad(u) + sigma u for the exact solution.
double forcing_term(double x, double y, double t, double mu, const Vec2& b, double sigma);

ADRProblem make_problem(const BenchmarkSpec& spec);

/// Errors against the exact solution at time t, quadrature degree 2p + 3.
ErrorNorms error_norms(const FEField& uh, double t, double mu);

struct Extrema {
    double min = 0.0;
    double max = 0.0;
};

/// Extrema over all dof values.
Extrema min_max(const FEField& uh);

} // namespace adr::benchmark

#include "adr/benchmark.hpp"

#include "adr/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace adr::benchmark {
namespace {

using std::numbers::pi;

constexpr double radius_sq = 0.25 * 0.25;

// u = 16 sin(pi t) P(x, y) A(x, y) with P the boundary bubble and A the arctan hump.
struct Factors {
    double p, px, py, pxx, pyy;
    double a, ax, ay, axx, ayy;
};

Factors factors(double x, double y, double mu)
{
    Factors f{};
    const double bx = x * (1.0 - x);
    const double by = y * (1.0 - y);
    f.p = bx * by;
    f.px = (1.0 - 2.0 * x) * by;
    f.py = bx * (1.0 - 2.0 * y);
    f.pxx = -2.0 * by;
    f.pyy = -2.0 * bx;

    const double k = 2.0 / std::sqrt(mu);
    const double dx = x - 0.5;
    const double dy = y - 0.5;
    const double z = k * (radius_sq - dx * dx - dy * dy);
    const double q = 1.0 + z * z;
    const double gx = -2.0 * dx;
    const double gy = -2.0 * dy;
    f.a = 0.5 + std::atan(z) / pi;
    f.ax = k * gx / (pi * q);
    f.ay = k * gy / (pi * q);
    // d/dx [k g_x / q] = k g_xx / q - 2 z k^2 g_x^2 / q^2, with g_xx = -2.
    f.axx = (k / pi) * (-2.0 / q - 2.0 * z * k * gx * gx / (q * q));
    f.ayy = (k / pi) * (-2.0 / q - 2.0 * z * k * gy * gy / (q * q));
    return f;
}

} // namespace

int partitions_for_level(int level)
{
    if (level < 0 || level >= static_cast<int>(partitions.size())) {
        throw InvalidArgument("refinement level must be in 0..4, got " + std::to_string(level));
    }
    return partitions[static_cast<std::size_t>(level)];
}

double chi_for_level(int level)
{
    if (level < 0 || level >= static_cast<int>(chi_table.size())) {
        throw InvalidArgument("refinement level must be in 0..4, got " + std::to_string(level));
    }
    return chi_table[static_cast<std::size_t>(level)];
}

double BenchmarkSpec::peclet() const { return std::max(std::abs(b[0]), std::abs(b[1])) * length / (2.0 * mu); }

double exact_solution(double x, double y, double t, double mu)
{
    const Factors f = factors(x, y, mu);
    return 16.0 * std::sin(pi * t) * f.p * f.a;
}

Vec2 exact_gradient(double x, double y, double t, double mu)
{
    const Factors f = factors(x, y, mu);
    const double s = 16.0 * std::sin(pi * t);
    return {s * (f.px * f.a + f.p * f.ax), s * (f.py * f.a + f.p * f.ay)};
}

double exact_time_derivative(double x, double y, double t, double mu)
{
    const Factors f = factors(x, y, mu);
    return 16.0 * pi * std::cos(pi * t) * f.p * f.a;
}

double exact_laplacian(double x, double y, double t, double mu)
{
    const Factors f = factors(x, y, mu);
    const double s = 16.0 * std::sin(pi * t);
    return s * (f.pxx * f.a + 2.0 * f.px * f.ax + f.p * f.axx + f.pyy * f.a + 2.0 * f.py * f.ay + f.p * f.ayy);
}

double forcing_term(double x, double y, double t, double mu, const Vec2& b, double sigma)
{
    const Vec2 g = exact_gradient(x, y, t, mu);
    return exact_time_derivative(x, y, t, mu) - mu * exact_laplacian(x, y, t, mu) + b[0] * g[0] + b[1] * g[1] +
           sigma * exact_solution(x, y, t, mu);
}

ADRProblem make_problem(const BenchmarkSpec& spec)
{
    ADRProblem p;
    p.mu = spec.mu;
    p.b = spec.b;
    p.sigma = spec.sigma;
    p.final_time = spec.final_time;
    const double mu = spec.mu;
    const Vec2 b = spec.b;
    const double sigma = spec.sigma;
    p.forcing = [mu, b, sigma](double x, double y, double t) { return forcing_term(x, y, t, mu, b, sigma); };
    p.dirichlet = [](double, double, double) { return 0.0; };
    p.initial = [mu](double x, double y) { return exact_solution(x, y, 0.0, mu); };
    return p;
}

ErrorNorms error_norms(const FEField& uh, double t, double mu)
{
    const int quad = std::min(2 * uh.space().degree() + 3, 8);
    return compute_errors(
        uh, [&](double x, double y) { return exact_solution(x, y, t, mu); },
        [&](double x, double y) { return exact_gradient(x, y, t, mu); }, quad);
}

Extrema min_max(const FEField& uh)
{
    if (uh.size() == 0) {
        return {};
    }
    const auto [lo, hi] = std::minmax_element(uh.values().begin(), uh.values().end());
    return {*lo, *hi};
}

} // namespace adr::benchmark

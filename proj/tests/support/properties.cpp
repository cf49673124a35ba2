#include "properties.hpp"

#include "adr/benchmark.hpp"
#include "adr/efr.hpp"
#include "adr/evolve.hpp"
#include "adr/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace adr::testing {

namespace {

constexpr double pi = std::numbers::pi;

double max_asymmetry(const CsrMatrix& a)
{
    const CsrMatrix at = a.transpose();
    double worst = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t p = a.row_offsets()[i]; p < a.row_offsets()[i + 1]; ++p) {
            const auto j = static_cast<std::size_t>(a.column_indices()[p]);
            worst = std::max(worst, std::abs(a.values()[p] - at.at(i, j)));
        }
    }
    return worst;
}

double min_rayleigh(const CsrMatrix& a, int samples, unsigned seed)
{
    std::mt19937 rng(seed);
    std::normal_distribution<double> normal;
    double worst = std::numeric_limits<double>::infinity();
    Vector x(a.rows());
    for (int s = 0; s < samples; ++s) {
        for (double& xi : x) {
            xi = normal(rng);
        }
        const Vector ax = spmv(a, x);
        const double num = std::inner_product(x.begin(), x.end(), ax.begin(), 0.0);
        const double den = std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
        worst = std::min(worst, num / den);
    }
    return worst;
}

ADRProblem benchmark_problem() { return benchmark::make_problem(benchmark::BenchmarkSpec{}); }

} // namespace

std::shared_ptr<const FESpace> make_space(int n, int degree)
{
    return std::make_shared<const FESpace>(std::make_shared<const StructuredTriMesh>(n), degree);
}

SpdProbe probe_spd(const CsrMatrix& a, int samples, unsigned seed)
{
    return {min_rayleigh(a, samples, seed), max_asymmetry(a)};
}

double advection_skew_defect(const FESpace& space, const Vec2& b)
{
    const CsrMatrix c = assemble_operator(space, 0.0, b, 0.0);
    const CsrMatrix ct = c.transpose();
    double worst = 0.0;
    for (std::size_t i = 0; i < c.rows(); ++i) {
        for (std::size_t p = c.row_offsets()[i]; p < c.row_offsets()[i + 1]; ++p) {
            const auto j = static_cast<std::size_t>(c.column_indices()[p]);
            if (space.is_dirichlet(i) && space.is_dirichlet(j)) {
                continue;
            }
            worst = std::max(worst, std::abs(c.values()[p] + ct.at(i, j)));
        }
    }
    return worst;
}

StiffnessProbe probe_stiffness(const FESpace& space, int samples, unsigned seed)
{
    const CsrMatrix k = assemble_stiffness(space);
    const Vector ones(k.rows(), 1.0);
    const Vector k1 = spmv(k, ones);
    double residual = 0.0;
    for (double v : k1) {
        residual = std::max(residual, std::abs(v));
    }
    return {residual, min_rayleigh(k, samples, seed), max_asymmetry(k)};
}

double strong_consistency_defect(StabMethod method, int n)
{
    const auto space = make_space(n, 2);
    const double mu = 0.01;
    const Vec2 b{2.0, 3.0};
    const double sigma = 1.0;
    const double dt = 0.1;
    // u* = 1 + x - 2y + 3x^2 + xy - y^2, q = 2 - x^2 + 0.5 xy (both in P2).
    auto ustar = [](double x, double y) { return 1.0 + x - 2.0 * y + 3.0 * x * x + x * y - y * y; };
    auto q = [](double x, double y) { return 2.0 - x * x + 0.5 * x * y; };
    const double lap_u = 6.0 - 2.0;
    ResidualContext ctx;
    ctx.mu = mu;
    ctx.b = b;
    ctx.sigma = sigma;
    ctx.dt = dt;
    ctx.previous = interpolate(space, q);
    ctx.forcing = [&](double x, double y) {
        const double ux = 1.0 + 6.0 * x + y;
        const double uy = -2.0 + x - 2.0 * y;
        const double lt = -mu * lap_u + b[0] * ux + b[1] * uy + (sigma + 1.0 / dt) * ustar(x, y);
        return lt - q(x, y) / dt;
    };
    StabConfig config;
    config.method = method;
    const StabilizationTerms terms = stabilization_contribution(config, ctx, space);
    const FEField u = interpolate(space, ustar);
    const Vector au = spmv(terms.matrix, u.values());
    double defect = 0.0;
    double scale = 1.0;
    for (std::size_t i = 0; i < au.size(); ++i) {
        defect = std::max(defect, std::abs(au[i] - terms.rhs[i]));
        scale = std::max(scale, std::abs(terms.rhs[i]));
    }
    return defect / scale;
}

double benchmark_derivative_defect(int samples, unsigned seed, double mu)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double h = 1e-6;
    auto u = [&](double x, double y, double t) { return benchmark::exact_solution(x, y, t, mu); };
    auto rel = [](double approx, double exact) { return std::abs(approx - exact) / std::max(1.0, std::abs(exact)); };
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        const double x = unit(rng);
        const double y = unit(rng);
        const double t = unit(rng);
        const Vec2 g = benchmark::exact_gradient(x, y, t, mu);
        const double gx = (u(x + h, y, t) - u(x - h, y, t)) / (2.0 * h);
        const double gy = (u(x, y + h, t) - u(x, y - h, t)) / (2.0 * h);
        const double gt = (u(x, y, t + h) - u(x, y, t - h)) / (2.0 * h);
        const double lap = (benchmark::exact_gradient(x + h, y, t, mu)[0] - benchmark::exact_gradient(x - h, y, t, mu)[0] +
                            benchmark::exact_gradient(x, y + h, t, mu)[1] - benchmark::exact_gradient(x, y - h, t, mu)[1]) /
                           (2.0 * h);
        worst = std::max({worst, rel(gx, g[0]), rel(gy, g[1]), rel(gt, benchmark::exact_time_derivative(x, y, t, mu)),
                          rel(lap, benchmark::exact_laplacian(x, y, t, mu))});
    }
    return worst;
}

std::vector<double> diffusion_dominated_errors(const std::vector<int>& meshes)
{
    const double mu = 1.0;
    const Vec2 b{2.0, 3.0};
    const double sigma = 1.0;
    const double dt = 1e-5;
    // u = (1 + t) sin(pi x) sin(pi y) (x + 2y); backward Euler is exact in time.
    auto s = [](double x, double y) { return std::sin(pi * x) * std::sin(pi * y) * (x + 2.0 * y); };
    auto sx = [](double x, double y) {
        return pi * std::cos(pi * x) * std::sin(pi * y) * (x + 2.0 * y) + std::sin(pi * x) * std::sin(pi * y);
    };
    auto sy = [](double x, double y) {
        return pi * std::sin(pi * x) * std::cos(pi * y) * (x + 2.0 * y) + 2.0 * std::sin(pi * x) * std::sin(pi * y);
    };
    auto slap = [](double x, double y) {
        return -2.0 * pi * pi * std::sin(pi * x) * std::sin(pi * y) * (x + 2.0 * y) +
               2.0 * pi * std::cos(pi * x) * std::sin(pi * y) + 4.0 * pi * std::sin(pi * x) * std::cos(pi * y);
    };
    ADRProblem problem;
    problem.mu = mu;
    problem.b = b;
    problem.sigma = sigma;
    problem.final_time = 10 * dt;
    problem.initial = s;
    problem.forcing = [&](double x, double y, double t) {
        return s(x, y) - mu * (1.0 + t) * slap(x, y) + (1.0 + t) * (b[0] * sx(x, y) + b[1] * sy(x, y)) +
               sigma * (1.0 + t) * s(x, y);
    };
    const TimeConfig time = TimeConfig::for_interval(problem.final_time, dt);
    const double t_end = time.time(time.n_steps);
    std::vector<double> errors;
    for (int n : meshes) {
        const auto space = make_space(n, 2);
        const RunResult result = run(problem, space, time, GalerkinMethod{});
        const ErrorNorms e = compute_errors(
            result.final_field, [&](double x, double y) { return (1.0 + t_end) * s(x, y); },
            [&](double x, double y) { return Vec2{(1.0 + t_end) * sx(x, y), (1.0 + t_end) * sy(x, y)}; }, 7);
        errors.push_back(e.l2);
    }
    return errors;
}

std::vector<double> observed_orders(const std::vector<double>& errors)
{
    std::vector<double> orders;
    for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
        orders.push_back(std::log2(errors[k] / errors[k + 1]));
    }
    return orders;
}

double efr_chi0_galerkin_gap(int steps)
{
    const ADRProblem problem = benchmark_problem();
    const auto space = make_space(benchmark::partitions_for_level(0), 2);
    TimeConfig time;
    time.dt = 1e-3;
    time.n_steps = steps;
    EFRConfig efr;
    efr.delta = 1.0 / benchmark::partitions_for_level(0);
    efr.chi = 0.0;
    std::vector<FEField> galerkin;
    RunOptions record;
    record.observer = [&](const StepView& view) { galerkin.push_back(view.u); };
    run(problem, space, time, GalerkinMethod{}, record);
    double gap = 0.0;
    RunOptions compare;
    compare.observer = [&](const StepView& view) {
        const FEField& g = galerkin[static_cast<std::size_t>(view.step - 1)];
        for (std::size_t i = 0; i < g.size(); ++i) {
            gap = std::max(gap, std::abs(view.u[i] - g[i]));
        }
    };
    run(problem, space, time, EfrMethod{efr}, compare);
    return gap;
}

double relax_convexity_violation(int steps, double chi)
{
    const ADRProblem problem = benchmark_problem();
    const int n = benchmark::partitions_for_level(0);
    const auto space = make_space(n, 2);
    TimeConfig time;
    time.dt = 1e-3;
    time.n_steps = steps;
    EFRConfig efr;
    efr.delta = 1.0 / n;
    efr.chi = chi;
    double violation = 0.0;
    RunOptions options;
    options.observer = [&](const StepView& view) {
        const FEField& v = *view.evolved;
        const FEField& vb = *view.filtered;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double lo = std::min(v[i], vb[i]);
            const double hi = std::max(v[i], vb[i]);
            violation = std::max({violation, lo - view.u[i], view.u[i] - hi});
        }
    };
    run(problem, space, time, EfrMethod{efr}, options);
    return violation;
}

double deconvolution_order(int n, int N, const std::vector<double>& deltas)
{
    const auto space = make_space(n, 2);
    const FEField v = interpolate(space, [](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); });
    std::vector<double> lx;
    std::vector<double> ly;
    for (double delta : deltas) {
        const HelmholtzFilter filter(space, delta);
        const FEField d = filter.deconvolve(v, N);
        FEField diff(space);
        for (std::size_t i = 0; i < v.size(); ++i) {
            diff[i] = v[i] - d[i];
        }
        lx.push_back(std::log(delta));
        ly.push_back(std::log(l2_norm(diff, filter.mass())));
    }
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(lx.size());
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(ly.size());
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
        sxy += (lx[k] - mx) * (ly[k] - my);
        sxx += (lx[k] - mx) * (lx[k] - mx);
    }
    return sxy / sxx;
}

FilterAmplification filter_amplification(int n, double delta, double expected)
{
    const auto space = make_space(n, 2);
    const FEField v = interpolate(space, [](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); });
    const HelmholtzFilter filter(space, delta);
    const FEField vb = filter.apply(v);
    const Vector mv = spmv(filter.mass(), v.values());
    const double num = std::inner_product(vb.values().begin(), vb.values().end(), mv.begin(), 0.0);
    const double den = std::inner_product(v.values().begin(), v.values().end(), mv.begin(), 0.0);
    double deviation = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) > 0.1) {
            deviation = std::max(deviation, std::abs(vb[i] / v[i] - expected) / expected);
        }
    }
    return {num / den, deviation};
}

} // namespace adr::testing

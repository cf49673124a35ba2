#include "adr/study.hpp"

#include "adr/benchmark.hpp"
#include "adr/errors.hpp"
#include "adr/vtk.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <thread>

namespace adr {
namespace {

std::string run_label(const RunConfig& c)
{
    std::string label = std::string(to_string(c.method)) + "_n" + std::to_string(c.resolved_n()) + "_p" +
                        std::to_string(c.degree);
    if (c.method == RunMethod::efr) {
        label += "_N" + std::to_string(c.N) + "_c" + format_number(c.delta_c);
    }
    return label;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n\r") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') {
            out += "\"\"";
        } else if (ch == '\n' || ch == '\r') {
            out += ' ';
        } else {
            out += ch;
        }
    }
    return out + "\"";
}

template <class T>
std::string opt(const std::optional<T>& v)
{
    if (!v) {
        return {};
    }
    if constexpr (std::is_floating_point_v<T>) {
        return format_number(*v);
    } else {
        return std::to_string(*v);
    }
}

std::vector<int> levels_or(const RunConfig& base, std::vector<int> fallback)
{
    return base.study_levels.empty() ? std::move(fallback) : base.study_levels;
}

RunConfig at_level(RunConfig c, int level)
{
    c.level = level;
    c.n = 0;
    return c;
}

} // namespace

std::string_view to_string(StudyKind kind)
{
    switch (kind) {
    case StudyKind::single:
        return "single";
    case StudyKind::compare_methods:
        return "compare_methods";
    case StudyKind::sweep_N:
        return "sweep_N";
    case StudyKind::sweep_delta:
        return "sweep_delta";
    }
    return "unknown";
}

StudyKind study_kind_from_string(std::string_view name)
{
    for (StudyKind k : {StudyKind::single, StudyKind::compare_methods, StudyKind::sweep_N, StudyKind::sweep_delta}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    throw InvalidArgument("unknown study '" + std::string(name) + "'");
}

bool SweepReport::all_succeeded() const
{
    return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.error.empty(); });
}

std::vector<RunConfig> study_matrix(StudyKind kind, const RunConfig& base)
{
    std::vector<RunConfig> matrix;
    switch (kind) {
    case StudyKind::single:
        matrix.push_back(base);
        break;
    case StudyKind::compare_methods:
        for (int level : levels_or(base, {0, 1, 2, 3, 4})) {
            for (RunMethod m : {RunMethod::galerkin, RunMethod::supg, RunMethod::efr}) {
                RunConfig c = at_level(base, level);
                c.method = m;
                if (m == RunMethod::efr) {
                    c.N = 0;
                    c.delta_c = 1.0;
                }
                matrix.push_back(c);
            }
        }
        break;
    case StudyKind::sweep_N:
        for (int level : levels_or(base, {base.level})) {
            for (int N = 0; N <= 3; ++N) {
                RunConfig c = at_level(base, level);
                c.method = RunMethod::efr;
                c.N = N;
                matrix.push_back(c);
            }
        }
        break;
    case StudyKind::sweep_delta:
        for (int level : levels_or(base, {base.level})) {
            for (double dc : {1.0, std::numbers::sqrt2, 2.0, 5.0}) {
                RunConfig c = at_level(base, level);
                c.method = RunMethod::efr;
                c.N = 0;
                c.delta_c = dc;
                matrix.push_back(c);
            }
        }
        break;
    }
    return matrix;
}

ReportRow execute_run(const RunConfig& config, const std::optional<std::filesystem::path>& output_dir)
{
    const auto start = std::chrono::steady_clock::now();
    ReportRow row;
    row.method = std::string(to_string(config.method));
    try {
        row.n = config.resolved_n();
        row.level = config.resolved_level();
        if (config.method == RunMethod::efr) {
            row.N = config.N;
            row.delta_c = config.delta_c;
            row.chi = config.resolved_chi();
        } else if (config.method != RunMethod::galerkin) {
            row.stab_const = config.stab_config().tau_constant();
        }
        config.validate();

        auto mesh = std::make_shared<const StructuredTriMesh>(row.n);
        auto space = std::make_shared<const FESpace>(mesh, config.degree);
        const benchmark::BenchmarkSpec spec = config.benchmark_spec();
        const ADRProblem problem = benchmark::make_problem(spec);
        const TimeConfig time = TimeConfig::for_interval(config.final_time, config.dt);

        RunOptions options;
        options.snapshot_times = config.snapshot_times;
        const std::string label = run_label(config);
        const bool export_indicator =
            output_dir && config.indicator_vtk && config.method == RunMethod::efr;
        if (export_indicator) {
            options.observer = [&](const StepView& view) {
                if (view.indicator != nullptr) {
                    export_vtk(*view.indicator,
                               *output_dir / (label + "_indicator_" + std::to_string(view.step) + ".vtk"), "a");
                }
            };
        }
        int completed = 0;
        auto counting = options.observer;
        options.observer = [&](const StepView& view) {
            completed = view.step;
            if (counting) {
                counting(view);
            }
        };

        std::optional<RunResult> run_result;
        try {
            run_result.emplace(run(problem, space, time, config.solver_method(), options));
        } catch (...) {
            row.steps = completed;
            throw;
        }
        row.steps = completed;
        const RunResult& result = *run_result;

        const double t_end = time.time(time.n_steps);
        const ErrorNorms err = benchmark::error_norms(result.final_field, t_end, spec.mu);
        const benchmark::Extrema ext = benchmark::min_max(result.final_field);
        row.l2_error = err.l2;
        row.h1_norm = err.h1_norm;
        row.h1_semi = err.h1_semi;
        row.min_u = ext.min;
        row.max_u = ext.max;

        if (output_dir && config.vtk) {
            const FEField exact =
                interpolate(space, [&](double x, double y) { return benchmark::exact_solution(x, y, t_end, spec.mu); });
            export_vtk({{"u", &result.final_field}, {"exact", &exact}}, *output_dir / (label + "_final.vtk"));
            for (const Snapshot& s : result.snapshots) {
                export_vtk(s.field, *output_dir / (label + "_t" + format_number(s.time) + ".vtk"));
            }
        }
    } catch (const std::exception& e) {
        row.error = e.what();
        row.l2_error.reset();
        row.h1_norm.reset();
        row.h1_semi.reset();
        row.min_u.reset();
        row.max_u.reset();
    }
    row.wall_seconds =
        config.wall_time ? std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() : 0.0;
    return row;
}

SweepReport run_study(StudyKind kind, const RunConfig& base, const std::optional<std::filesystem::path>& output_dir)
{
    const std::vector<RunConfig> matrix = study_matrix(kind, base);
    SweepReport report;
    report.rows.resize(matrix.size());

    unsigned workers = base.threads > 0 ? static_cast<unsigned>(base.threads) : std::thread::hardware_concurrency();
    workers = std::clamp<unsigned>(workers, 1U, static_cast<unsigned>(std::max<std::size_t>(matrix.size(), 1)));

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < matrix.size(); i = next++) {
            report.rows[i] = execute_run(matrix[i], output_dir);
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }
    return report;
}

void write_csv(const SweepReport& report, std::ostream& out)
{
    out << csv_header << '\n';
    for (const ReportRow& r : report.rows) {
        out << opt(r.level) << ',' << r.n << ',' << csv_field(r.method) << ',' << opt(r.stab_const) << ','
            << opt(r.N) << ',' << opt(r.delta_c) << ',' << opt(r.chi) << ',' << opt(r.l2_error) << ','
            << opt(r.h1_norm) << ',' << opt(r.h1_semi) << ',' << opt(r.min_u) << ',' << opt(r.max_u) << ','
            << r.steps << ',' << format_number(r.wall_seconds) << ',' << csv_field(r.error) << '\n';
    }
}

void write_csv(const SweepReport& report, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) {
        throw IoError("write_csv: cannot open '" + path.string() + "' for writing");
    }
    write_csv(report, out);
    out.flush();
    if (!out) {
        throw IoError("write_csv: write to '" + path.string() + "' failed");
    }
}

} // namespace adr

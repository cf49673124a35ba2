// Command-line driver for the benchmark runs and parameter studies.
//
//   adr_efr run    [--config FILE] [--set key=value]... [--out DIR]
//   adr_efr study  KIND [--config FILE] [--set key=value]... [--out DIR]
//   adr_efr export [--config FILE] [--set key=value]... [--out DIR]
//
// Exit code is 0 iff every run in the matrix succeeded.

#include "adr/config.hpp"
#include "adr/errors.hpp"
#include "adr/study.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

adr::RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides)
{
    adr::RunConfig config;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) {
            throw adr::IoError("cannot read config '" + path + "'");
        }
        std::ostringstream text;
        text << in.rdbuf();
        try {
            config = adr::parse_config(text.str());
        } catch (const adr::ConfigError& e) {
            throw adr::ConfigError(path + ": " + e.what(), 0);
        }
    }
    for (const std::string& o : overrides) {
        adr::apply_override(config, o);
    }
    config.validate();
    return config;
}

int finish(const adr::SweepReport& report, const adr::RunConfig& config, const std::filesystem::path& out_dir)
{
    const std::filesystem::path csv = out_dir / config.csv;
    adr::write_csv(report, csv);
    for (const adr::ReportRow& r : report.rows) {
        std::cout << r.method << " n=" << r.n;
        if (r.error.empty()) {
            std::cout << " l2=" << adr::format_number(*r.l2_error) << " min=" << adr::format_number(*r.min_u)
                      << " max=" << adr::format_number(*r.max_u);
        } else {
            std::cout << " FAILED: " << r.error;
        }
        std::cout << '\n';
    }
    std::cout << "report written to " << csv.string() << '\n';
    return report.all_succeeded() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Stabilized finite element solver for advection-dominated ADR problems"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir = ".";
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "Configuration file (key = value lines)");
        cmd->add_option("--set", overrides, "Override one key, e.g. --set efr.N=2")->allow_extra_args(false);
        cmd->add_option("--out", out_dir, "Output directory for CSV and VTK files");
    };

    CLI::App* run_cmd = app.add_subcommand("run", "Run one configuration and write a one-row report");
    add_common(run_cmd);

    std::string study_name;
    CLI::App* study_cmd = app.add_subcommand("study", "Run a parameter study");
    study_cmd->add_option("kind", study_name, "single | compare_methods | sweep_N | sweep_delta")->required();
    add_common(study_cmd);

    CLI::App* export_cmd = app.add_subcommand("export", "Run one configuration and export VTK fields");
    add_common(export_cmd);

    CLI11_PARSE(app, argc, argv);

    try {
        adr::RunConfig config = load_config(config_path, overrides);
        const std::filesystem::path dir(out_dir);
        std::filesystem::create_directories(dir);

        if (*run_cmd) {
            return finish(adr::run_study(adr::StudyKind::single, config, dir), config, dir);
        }
        if (*study_cmd) {
            const adr::StudyKind kind = adr::study_kind_from_string(study_name);
            return finish(adr::run_study(kind, config, dir), config, dir);
        }
        config.vtk = true;
        return finish(adr::run_study(adr::StudyKind::single, config, dir), config, dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

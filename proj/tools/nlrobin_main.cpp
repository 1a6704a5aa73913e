#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "nlrobin/experiment.hpp"

namespace {

// exit code contract: 0 = all checks hold, 1 = a check failed,
// 2 = configuration or usage error
constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfigError = 2;

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nonlocal Robin Laplacian laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    double tol = 0.0;
    int threads = 0;

    CLI::App* run = app.add_subcommand("run", "Run one experiment from a JSON config");
    run->add_option("config", config_path, "Path to the experiment config")
        ->required();
    run->add_option("--out", out_dir, "Output directory for report.json and CSV tables");
    run->add_option("--tol", tol, "Override the check tolerance");
    run->add_option("--threads", threads, "OpenMP thread count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitPass : kExitConfigError;
    }

#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif

    try {
        nlrobin::ExperimentConfig config = nlrobin::load_config_file(config_path);
        if (tol > 0.0) config.tolerance = tol;
        if (!out_dir.empty()) config.output = out_dir;

        const nlrobin::Report report = nlrobin::run_experiment(config);
        nlrobin::write_report_files(report, config.output);

        for (const nlrobin::CheckReport& c : report.checks)
            std::printf("%-45s %s  worst=%.3e tol=%.1e\n", c.name.c_str(),
                        c.passed ? "PASS" : "FAIL", c.worst_violation,
                        c.tolerance);
        return report.all_passed() ? kExitPass : kExitCheckFailed;
    } catch (const nlrobin::ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitConfigError;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfigError;
    }
}

#pragma once

#include <json.hpp> // vendored nlohmann/json
#include <stdexcept>
#include <string>
#include <vector>

#include "nlrobin/checks.hpp"
#include "nlrobin/measures.hpp"
#include "nlrobin/mesh.hpp"

namespace nlrobin {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DomainConfig {
    int dim = 1;
    int n = 1, nx = 1, ny = 1;
    double length = 1.0, lx = 1.0, ly = 1.0;

    Mesh build() const;
};

struct ExperimentConfig {
    std::string experiment; // sandwich|eigen|capacity|closability|convergence|gamma
    DomainConfig domain;
    BoundaryMeasureSpec kappa;
    JumpMeasureSpec theta;
    std::vector<double> t_grid = {1e-3, 1e-2, 1e-1, 1.0, 10.0};
    std::vector<double> scalings = {1.0, 10.0, 100.0, 1000.0};
    double lam = 1.0;
    int levels = 5;
    double tolerance = 0.0; // 0 = experiment-specific default
    int eigenvalue_count = 8;
    unsigned seed = 20240531u;
    std::string output; // optional output directory

    double effective_tolerance() const;
};

/// Parse and validate; throws ConfigError with the offending field path.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config_file(const std::string& path);

struct Report {
    std::string experiment;
    nlohmann::json config_echo;
    std::vector<CheckReport> checks;
    nlohmann::json tables;
    double wall_seconds = 0.0;

    bool all_passed() const;
    nlohmann::json to_json() const;
};

Report run_experiment(const ExperimentConfig& config);

/// Writes report.json plus one CSV per table into the directory.
void write_report_files(const Report& report, const std::string& out_dir);

} // namespace nlrobin

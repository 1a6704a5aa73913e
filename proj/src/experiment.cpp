#include "nlrobin/experiment.hpp"

#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>

#include "nlrobin/capacity.hpp"
#include "nlrobin/convergence.hpp"
#include "nlrobin/forms.hpp"
#include "nlrobin/types.hpp"

namespace nlrobin {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError("config error at '" + path + "': " + what);
}

const json& require_field(const json& j, const char* key,
                          const std::string& path) {
    if (!j.is_object() || !j.contains(key))
        fail(path + "." + key, "missing required field");
    return j.at(key);
}

double require_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

double require_nonnegative(const json& j, const std::string& path) {
    const double v = require_number(j, path);
    if (v < 0.0) fail(path, "must be nonnegative");
    return v;
}

double require_positive(const json& j, const std::string& path) {
    const double v = require_number(j, path);
    if (!(v > 0.0)) fail(path, "must be positive");
    return v;
}

int require_positive_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    const long long v = j.get<long long>();
    if (v < 1) fail(path, "must be a positive integer");
    return static_cast<int>(v);
}

std::vector<double> require_number_list(const json& j, const std::string& path,
                                        bool positive) {
    if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array");
    std::vector<double> out;
    for (std::size_t k = 0; k < j.size(); ++k) {
        const std::string p = path + "[" + std::to_string(k) + "]";
        out.push_back(positive ? require_positive(j.at(k), p)
                               : require_nonnegative(j.at(k), p));
    }
    return out;
}

DomainConfig parse_domain(const json& j) {
    DomainConfig d;
    const std::string kind =
        require_field(j, "kind", "domain").get<std::string>();
    if (kind == "interval") {
        d.dim = 1;
        d.n = require_positive_int(require_field(j, "n", "domain"), "domain.n");
        d.length = require_positive(require_field(j, "length", "domain"),
                                    "domain.length");
    } else if (kind == "rectangle") {
        d.dim = 2;
        d.nx = require_positive_int(require_field(j, "nx", "domain"), "domain.nx");
        d.ny = require_positive_int(require_field(j, "ny", "domain"), "domain.ny");
        d.lx = require_positive(require_field(j, "lx", "domain"), "domain.lx");
        d.ly = require_positive(require_field(j, "ly", "domain"), "domain.ly");
    } else {
        fail("domain.kind", "must be 'interval' or 'rectangle'");
    }
    return d;
}

BoundaryMeasureSpec parse_kappa(const json& j) {
    BoundaryMeasureSpec spec;
    if (j.contains("density"))
        spec.uniform_density = require_nonnegative(j.at("density"), "kappa.density");
    if (j.contains("atoms")) {
        const json& atoms = j.at("atoms");
        if (!atoms.is_array()) fail("kappa.atoms", "expected an array");
        for (std::size_t k = 0; k < atoms.size(); ++k) {
            const std::string p = "kappa.atoms[" + std::to_string(k) + "]";
            const double arc = require_number(require_field(atoms.at(k), "arc", p),
                                              p + ".arc");
            const double w = require_nonnegative(
                require_field(atoms.at(k), "weight", p), p + ".weight");
            spec.atoms.emplace_back(arc, w);
        }
    }
    return spec;
}

JumpMeasureSpec parse_theta(const json& j) {
    JumpMeasureSpec spec;
    if (j.contains("kernel")) {
        const json& k = j.at("kernel");
        const std::string type =
            require_field(k, "type", "theta.kernel").get<std::string>();
        if (type == "zero") {
            spec.kernel = JumpKernel::zero();
        } else if (type == "constant") {
            spec.kernel = JumpKernel::constant(require_nonnegative(
                require_field(k, "value", "theta.kernel"), "theta.kernel.value"));
        } else if (type == "truncated_fractional") {
            const double s = require_positive(require_field(k, "s", "theta.kernel"),
                                              "theta.kernel.s");
            if (!(s < 1.0)) fail("theta.kernel.s", "must lie in (0,1)");
            const double eps = require_positive(
                require_field(k, "eps", "theta.kernel"), "theta.kernel.eps");
            spec.kernel = JumpKernel::truncated_fractional(s, eps);
            if (k.contains("prefactor"))
                spec.kernel.prefactor =
                    require_nonnegative(k.at("prefactor"), "theta.kernel.prefactor");
        } else {
            fail("theta.kernel.type",
                 "must be 'zero', 'constant' or 'truncated_fractional'");
        }
    }
    if (j.contains("pairs")) {
        const json& pairs = j.at("pairs");
        if (!pairs.is_array()) fail("theta.pairs", "expected an array");
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            const std::string p = "theta.pairs[" + std::to_string(k) + "]";
            const double a = require_number(
                require_field(pairs.at(k), "arc_p", p), p + ".arc_p");
            const double b = require_number(
                require_field(pairs.at(k), "arc_q", p), p + ".arc_q");
            const double w = require_nonnegative(
                require_field(pairs.at(k), "weight", p), p + ".weight");
            spec.pairs.push_back({a, b, w});
        }
    }
    return spec;
}

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_csv(const std::filesystem::path& file,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream os(file, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + file.string());
    auto emit_row = [&os](const std::vector<std::string>& row) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k) os << ',';
            os << csv_quote(row[k]);
        }
        os << "\r\n";
    };
    emit_row(header);
    for (const auto& row : rows) emit_row(row);
}

json witness_to_json(const std::optional<EntryWitness>& w) {
    if (!w) return nullptr;
    return json{{"t", w->t}, {"i", w->i}, {"j", w->j}};
}

json check_to_json(const CheckReport& c) {
    return json{{"name", c.name},
                {"passed", c.passed},
                {"worst_violation", c.worst_violation},
                {"tolerance", c.tolerance},
                {"witness", witness_to_json(c.witness)}};
}

json config_to_json(const ExperimentConfig& c) {
    json domain;
    if (c.domain.dim == 1)
        domain = {{"kind", "interval"}, {"n", c.domain.n}, {"length", c.domain.length}};
    else
        domain = {{"kind", "rectangle"},
                  {"nx", c.domain.nx},
                  {"ny", c.domain.ny},
                  {"lx", c.domain.lx},
                  {"ly", c.domain.ly}};

    json kappa = {{"density", c.kappa.uniform_density}, {"atoms", json::array()}};
    for (const auto& [arc, w] : c.kappa.atoms)
        kappa["atoms"].push_back({{"arc", arc}, {"weight", w}});

    json kernel;
    switch (c.theta.kernel.kind) {
    case JumpKernel::Kind::Zero:
        kernel = {{"type", "zero"}};
        break;
    case JumpKernel::Kind::Constant:
        kernel = {{"type", "constant"}, {"value", c.theta.kernel.value}};
        break;
    case JumpKernel::Kind::TruncatedFractional:
        kernel = {{"type", "truncated_fractional"},
                  {"s", c.theta.kernel.s},
                  {"eps", c.theta.kernel.eps},
                  {"prefactor", c.theta.kernel.prefactor}};
        break;
    }
    json theta = {{"kernel", kernel}, {"pairs", json::array()}};
    for (const auto& p : c.theta.pairs)
        theta["pairs"].push_back({{"arc_p", p[0]}, {"arc_q", p[1]}, {"weight", p[2]}});

    return json{{"experiment", c.experiment},
                {"domain", domain},
                {"kappa", kappa},
                {"theta", theta},
                {"t_grid", c.t_grid},
                {"scalings", c.scalings},
                {"lam", c.lam},
                {"levels", c.levels},
                {"tolerance", c.effective_tolerance()},
                {"eigenvalue_count", c.eigenvalue_count},
                {"seed", c.seed}};
}

void run_sandwich(const ExperimentConfig& config, Report& report) {
    const Mesh mesh = config.domain.build();
    const BoundaryMeasure kappa = instantiate(config.kappa, mesh);
    const JumpMeasure theta = instantiate(config.theta, mesh);
    const double tol = config.effective_tolerance();

    std::vector<CheckReport> checks =
        sandwich_report(kappa, theta, mesh, config.t_grid, tol);

    // Neumann comparison: a nonzero jump measure must break the domination,
    // a vanishing one must not. The classification lives here, not in the
    // probe itself.
    CheckReport probe = std::move(checks.back());
    checks.pop_back();
    const bool expected_violation = !theta.is_zero();
    const bool found_violation = !probe.passed;
    CheckReport classified;
    classified.witness = probe.witness;
    if (expected_violation) {
        // a gap above the probe tolerance is the required evidence; the
        // reported number is the shortfall (negative = found with margin)
        classified.name = "neumann_violation_expected_and_found";
        classified.tolerance = 0.0;
        classified.worst_violation = probe.tolerance - probe.worst_violation;
    } else {
        classified.name = "neumann_domination_holds";
        classified.tolerance = probe.tolerance;
        classified.worst_violation = probe.worst_violation;
    }
    classified.passed = classified.worst_violation <= classified.tolerance;
    checks.push_back(std::move(classified));

    report.tables["neumann"] = {{"expected_violation", expected_violation},
                                {"violation_found", found_violation},
                                {"worst_gap", probe.worst_violation}};
    report.checks = std::move(checks);
}

void run_eigen(const ExperimentConfig& config, Report& report) {
    const Mesh mesh = config.domain.build();
    const BoundaryMeasure kappa = instantiate(config.kappa, mesh);
    const JumpMeasure theta = instantiate(config.theta, mesh);

    const FormMatrices fm = assemble_operator(kappa, theta, mesh);
    const SpectralDecomposition d = decompose(fm.A, fm.M);

    const int count =
        std::min<int>(config.eigenvalue_count, static_cast<int>(d.eigenvalues.size()));
    json table = json::array();
    for (int k = 0; k < count; ++k)
        table.push_back({{"index", k}, {"value", d.eigenvalues(k)}});
    report.tables["eigenvalues"] = table;

    CheckReport sorted;
    sorted.name = "eigenvalues_sorted_nonnegative";
    sorted.tolerance = 1e-10 * std::max(1.0, fm.A.cwiseAbs().maxCoeff());
    sorted.worst_violation = -d.eigenvalues(0);
    for (int k = 1; k < d.eigenvalues.size(); ++k)
        sorted.worst_violation = std::max(
            sorted.worst_violation, d.eigenvalues(k - 1) - d.eigenvalues(k));
    sorted.passed = sorted.worst_violation <= sorted.tolerance;
    report.checks.push_back(sorted);

    CheckReport residual;
    residual.name = "eigenpair_residual";
    residual.tolerance = 1e-9 * std::max(1.0, fm.A.cwiseAbs().maxCoeff());
    Matrix R = fm.A * d.eigenvectors;
    for (int k = 0; k < d.eigenvalues.size(); ++k)
        R.col(k) -= d.eigenvalues(k) * fm.M.cwiseProduct(d.eigenvectors.col(k));
    residual.worst_violation = R.cwiseAbs().maxCoeff();
    residual.passed = residual.worst_violation <= residual.tolerance;
    report.checks.push_back(residual);
}

void run_capacity(const ExperimentConfig& config, Report& report) {
    if (config.kappa.atoms.empty())
        throw ConfigError(
            "config error at 'kappa.atoms': the capacity experiment takes its "
            "node set from the kappa atoms; at least one atom is required");
    const Mesh base = config.domain.build();

    json table = json::array();
    CheckReport mono;
    mono.name = "capacity_nonincreasing_under_refinement";
    mono.tolerance = 1e-12;
    for (const auto& [arc, weight] : config.kappa.atoms) {
        (void)weight;
        const std::vector<CapacityResult> study =
            capacity_refinement_study(base, arc, config.levels);
        json seq = json::array();
        for (const CapacityResult& r : study)
            seq.push_back({{"level", r.level},
                           {"h", r.h},
                           {"value", r.value},
                           {"node", r.node_set.front()}});
        table.push_back({{"arc", arc}, {"levels", seq}});
        for (std::size_t k = 1; k < study.size(); ++k)
            mono.worst_violation = std::max(
                mono.worst_violation, study[k].value - study[k - 1].value);
    }
    mono.passed = mono.worst_violation <= mono.tolerance;
    report.tables["capacity"] = table;
    report.checks.push_back(mono);
}

void run_closability(const ExperimentConfig& config, Report& report) {
    const Mesh base = config.domain.build();
    const ClosabilityReport probe =
        closability_probe(config.kappa, config.theta, base, config.levels);

    std::vector<CapacityEvidence> evidence;
    if (!config.kappa.atoms.empty()) {
        const std::vector<CapacityResult> study = capacity_refinement_study(
            base, config.kappa.atoms.front().first, config.levels);
        CapacityEvidence ev;
        ev.node = study.front().node_set.front();
        for (const CapacityResult& r : study) ev.capacities.push_back(r.value);
        evidence.push_back(std::move(ev));
    }
    const AdmissibilityVerdict verdict =
        admissibility_verdict(instantiate(config.kappa, base),
                              instantiate(config.theta, base), base, evidence);

    json levels = json::array();
    for (const ClosabilityLevel& l : probe.levels)
        levels.push_back({{"level", l.level},
                          {"h", l.h},
                          {"h1_energy", l.h1_energy},
                          {"gradient_energy", l.gradient_energy},
                          {"boundary_form_value", l.boundary_form_value}});
    report.tables["closability"] = {
        {"levels", levels},
        {"admissible", verdict.admissible},
        {"reasons", verdict.reasons}};

    // decay of the H1 energy is the non-closability signature; it must
    // agree with the rule-based verdict
    const double first = probe.levels.front().h1_energy;
    const double last = probe.levels.back().h1_energy;
    const bool decay_signature =
        probe.h1_strictly_decreasing && last <= 0.9 * first;
    CheckReport consistent;
    consistent.name = "probe_signature_matches_verdict";
    consistent.tolerance = 0.0;
    consistent.worst_violation =
        (decay_signature == !verdict.admissible) ? 0.0 : 1.0;
    consistent.passed = consistent.worst_violation == 0.0;
    report.checks.push_back(consistent);
}

void run_convergence(const ExperimentConfig& config, Report& report) {
    const Mesh mesh = config.domain.build();
    const BoundaryMeasure kappa = instantiate(config.kappa, mesh);
    const JumpMeasure theta = instantiate(config.theta, mesh);
    const Vector f = Vector::Ones(mesh.node_count());

    const ConvergenceTable table = resolvent_convergence_study(
        kappa, theta, config.scalings, config.lam, f, mesh);

    json rows = json::array();
    for (std::size_t k = 0; k < table.scalings.size(); ++k)
        rows.push_back({{"scaling", table.scalings[k]},
                        {"distance", table.distances[k]},
                        {"quadratic_value", table.quadratic_values[k]},
                        {"monotone", static_cast<bool>(table.monotone[k])}});
    report.tables["convergence"] = {
        {"rows", rows},
        {"limit_quadratic_value", table.limit_quadratic_value},
        {"distance_ratio", table.distances.back() /
                               std::max(table.distances.front(), 1e-300)}};

    CheckReport decreasing;
    decreasing.name = "distances_decreasing";
    decreasing.tolerance = 0.0;
    for (std::size_t k = 1; k < table.distances.size(); ++k) {
        const double step = table.distances[k] - table.distances[k - 1];
        if (k == 1 || step > decreasing.worst_violation)
            decreasing.worst_violation = step;
    }
    decreasing.passed = decreasing.worst_violation <= decreasing.tolerance;
    report.checks.push_back(decreasing);
    report.checks.push_back(monotone_form_diagnostic(table));
}

void run_gamma(const ExperimentConfig& config, Report& report) {
    const Mesh mesh = config.domain.build();
    const BoundaryMeasure kappa = instantiate(config.kappa, mesh);
    const JumpMeasure theta = instantiate(config.theta, mesh);

    std::mt19937 rng(config.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector f(mesh.node_count());
    for (int i = 0; i < f.size(); ++i) f(i) = gauss(rng);

    report.checks.push_back(gamma_consistency_check(
        kappa, theta, config.lam, f, mesh, config.effective_tolerance()));
}

} // namespace

Mesh DomainConfig::build() const {
    if (dim == 1) return build_interval_mesh(n, length);
    return build_rectangle_mesh(nx, ny, lx, ly);
}

double ExperimentConfig::effective_tolerance() const {
    if (tolerance > 0.0) return tolerance;
    return experiment == "gamma" ? 1e-8 : 1e-10;
}

ExperimentConfig parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("config error at '': expected an object");
    ExperimentConfig c;
    c.experiment = require_field(j, "experiment", "").get<std::string>();
    const bool known = c.experiment == "sandwich" || c.experiment == "eigen" ||
                       c.experiment == "capacity" ||
                       c.experiment == "closability" ||
                       c.experiment == "convergence" || c.experiment == "gamma";
    if (!known)
        fail("experiment",
             "must be one of sandwich, eigen, capacity, closability, "
             "convergence, gamma");
    c.domain = parse_domain(require_field(j, "domain", ""));
    if (j.contains("kappa")) c.kappa = parse_kappa(j.at("kappa"));
    if (j.contains("theta")) c.theta = parse_theta(j.at("theta"));
    if (j.contains("t_grid"))
        c.t_grid = require_number_list(j.at("t_grid"), "t_grid", /*positive=*/true);
    if (j.contains("scalings")) {
        c.scalings =
            require_number_list(j.at("scalings"), "scalings", /*positive=*/false);
        for (std::size_t k = 1; k < c.scalings.size(); ++k)
            if (!(c.scalings[k] > c.scalings[k - 1]))
                fail("scalings[" + std::to_string(k) + "]",
                     "must be strictly increasing");
    }
    if (j.contains("lam")) c.lam = require_positive(j.at("lam"), "lam");
    if (j.contains("levels"))
        c.levels = require_positive_int(j.at("levels"), "levels");
    if (j.contains("tolerance"))
        c.tolerance = require_positive(j.at("tolerance"), "tolerance");
    if (j.contains("eigenvalue_count"))
        c.eigenvalue_count =
            require_positive_int(j.at("eigenvalue_count"), "eigenvalue_count");
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned()) fail("seed", "expected an unsigned integer");
        c.seed = j.at("seed").get<unsigned>();
    }
    if (j.contains("output")) {
        if (!j.at("output").is_string()) fail("output", "expected a string");
        c.output = j.at("output").get<std::string>();
    }
    return c;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("config error: cannot open '" + path + "'");
    json j;
    try {
        is >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config error: invalid JSON in '" + path +
                          "': " + e.what());
    }
    return parse_config(j);
}

bool Report::all_passed() const {
    for (const CheckReport& c : checks)
        if (!c.passed) return false;
    return true;
}

json Report::to_json() const {
    json checks_json = json::array();
    for (const CheckReport& c : checks) checks_json.push_back(check_to_json(c));
    return json{{"artifact_version", kVersion},
                {"experiment", experiment},
                {"config", config_echo},
                {"checks", checks_json},
                {"tables", tables},
                {"all_passed", all_passed()},
                {"timings", {{"total_seconds", wall_seconds}}}};
}

Report run_experiment(const ExperimentConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    Report report;
    report.experiment = config.experiment;
    report.config_echo = config_to_json(config);
    report.tables = json::object();

    if (config.experiment == "sandwich")
        run_sandwich(config, report);
    else if (config.experiment == "eigen")
        run_eigen(config, report);
    else if (config.experiment == "capacity")
        run_capacity(config, report);
    else if (config.experiment == "closability")
        run_closability(config, report);
    else if (config.experiment == "convergence")
        run_convergence(config, report);
    else
        run_gamma(config, report);

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return report;
}

void write_report_files(const Report& report, const std::string& out_dir) {
    namespace fs = std::filesystem;
    const fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
    fs::create_directories(dir);

    std::ofstream os(dir / "report.json", std::ios::binary);
    if (!os) throw std::runtime_error("cannot write report.json");
    os << report.to_json().dump(2) << "\n";

    if (report.tables.contains("eigenvalues")) {
        std::vector<std::vector<std::string>> rows;
        for (const auto& row : report.tables.at("eigenvalues"))
            rows.push_back({std::to_string(row.at("index").get<int>()),
                            format_double(row.at("value").get<double>())});
        write_csv(dir / "eigenvalues.csv", {"index", "value"}, rows);
    }
    if (report.tables.contains("capacity")) {
        std::vector<std::vector<std::string>> rows;
        for (const auto& group : report.tables.at("capacity"))
            for (const auto& row : group.at("levels"))
                rows.push_back({format_double(group.at("arc").get<double>()),
                                std::to_string(row.at("level").get<int>()),
                                format_double(row.at("h").get<double>()),
                                format_double(row.at("value").get<double>())});
        write_csv(dir / "capacity.csv", {"arc", "level", "h", "value"}, rows);
    }
    if (report.tables.contains("closability")) {
        std::vector<std::vector<std::string>> rows;
        for (const auto& row : report.tables.at("closability").at("levels"))
            rows.push_back(
                {std::to_string(row.at("level").get<int>()),
                 format_double(row.at("h").get<double>()),
                 format_double(row.at("h1_energy").get<double>()),
                 format_double(row.at("gradient_energy").get<double>()),
                 format_double(row.at("boundary_form_value").get<double>())});
        write_csv(dir / "closability.csv",
                  {"level", "h", "h1_energy", "gradient_energy",
                   "boundary_form_value"},
                  rows);
    }
    if (report.tables.contains("convergence")) {
        std::vector<std::vector<std::string>> rows;
        for (const auto& row : report.tables.at("convergence").at("rows"))
            rows.push_back(
                {format_double(row.at("scaling").get<double>()),
                 format_double(row.at("distance").get<double>()),
                 format_double(row.at("quadratic_value").get<double>())});
        write_csv(dir / "convergence.csv",
                  {"scaling", "distance", "quadratic_value"}, rows);
    }
}

} // namespace nlrobin

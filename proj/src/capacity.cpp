#include "nlrobin/capacity.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <stdexcept>

#include "nlrobin/forms.hpp"

namespace nlrobin {

namespace {

// Minimize u^T H u subject to u = g on the constrained nodes, H sparse SPD.
Vector constrained_minimum(const SparseMatrix& H,
                           const std::vector<int>& constrained,
                           const std::vector<double>& values, int n) {
    std::vector<char> fixed(n, 0);
    Vector u = Vector::Zero(n);
    for (std::size_t k = 0; k < constrained.size(); ++k) {
        fixed[constrained[k]] = 1;
        u(constrained[k]) = values[k];
    }
    std::vector<int> free_index(n, -1);
    std::vector<int> free_nodes;
    free_nodes.reserve(n);
    for (int i = 0; i < n; ++i) {
        if (!fixed[i]) {
            free_index[i] = static_cast<int>(free_nodes.size());
            free_nodes.push_back(i);
        }
    }
    const int m = static_cast<int>(free_nodes.size());
    if (m == 0) return u;

    std::vector<Eigen::Triplet<double>> trips;
    Vector rhs = Vector::Zero(m);
    for (int col = 0; col < H.outerSize(); ++col) {
        for (SparseMatrix::InnerIterator it(H, col); it; ++it) {
            const int i = static_cast<int>(it.row());
            const int j = static_cast<int>(it.col());
            if (fixed[i]) continue;
            if (fixed[j])
                rhs(free_index[i]) -= it.value() * u(j);
            else
                trips.emplace_back(free_index[i], free_index[j], it.value());
        }
    }
    SparseMatrix Hff(m, m);
    Hff.setFromTriplets(trips.begin(), trips.end());

    Eigen::SimplicialLDLT<SparseMatrix> solver(Hff);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("capacity solve: factorization failed");
    const Vector uf = solver.solve(rhs);
    for (int k = 0; k < m; ++k) u(free_nodes[k]) = uf(k);
    return u;
}

SparseMatrix h1_matrix(const Mesh& mesh) {
    SparseMatrix H = assemble_stiffness_sparse(mesh);
    const Vector M = assemble_lumped_mass(mesh);
    SparseMatrix Msp(mesh.node_count(), mesh.node_count());
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(mesh.node_count());
    for (int i = 0; i < mesh.node_count(); ++i) trips.emplace_back(i, i, M(i));
    Msp.setFromTriplets(trips.begin(), trips.end());
    return H + Msp;
}

double quadratic_energy(const SparseMatrix& H, const Vector& u) {
    return u.dot(H * u);
}

} // namespace

CapacityResult relative_capacity(const Mesh& mesh,
                                 const std::vector<int>& node_set) {
    if (node_set.empty())
        throw std::invalid_argument("relative_capacity: empty node set");
    std::vector<int> set = node_set;
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    for (int node : set)
        if (!mesh.is_boundary_node(node))
            throw std::invalid_argument(
                "relative_capacity: node " + std::to_string(node) +
                " is not on the boundary");

    const SparseMatrix H = h1_matrix(mesh);
    const std::vector<double> ones(set.size(), 1.0);
    CapacityResult result;
    result.potential = constrained_minimum(H, set, ones, mesh.node_count());
    result.value = quadratic_energy(H, result.potential);
    result.node_set = std::move(set);
    result.h = mesh.h;
    return result;
}

std::vector<CapacityResult> capacity_refinement_study(const Mesh& base,
                                                      double arc_position,
                                                      int levels) {
    if (levels < 2)
        throw std::invalid_argument(
            "capacity_refinement_study: at least two levels required");
    std::vector<CapacityResult> results;
    Mesh mesh = base;
    for (int level = 0; level < levels; ++level) {
        const int node = mesh.nearest_boundary_node(arc_position);
        CapacityResult r = relative_capacity(mesh, {node});
        r.level = level;
        results.push_back(std::move(r));
        if (level + 1 < levels) mesh = refine(mesh);
    }
    return results;
}

ClosabilityReport closability_probe(const BoundaryMeasureSpec& kappa,
                                    const JumpMeasureSpec& theta,
                                    const Mesh& base, int levels) {
    if (levels < 1)
        throw std::invalid_argument("closability_probe: levels must be >= 1");
    if (kappa.atoms.empty())
        throw std::invalid_argument(
            "closability_probe: kappa must place an atom at the probe node z");
    if (theta.pairs.empty())
        throw std::invalid_argument(
            "closability_probe: theta must contain the probe pair (z, z')");

    ClosabilityReport report;
    Mesh mesh = base;
    for (int level = 0; level < levels; ++level) {
        const int z = mesh.nearest_boundary_node(kappa.atoms.front().first);
        const int pair_p = mesh.nearest_boundary_node(theta.pairs.front()[0]);
        const int pair_q = mesh.nearest_boundary_node(theta.pairs.front()[1]);
        const int z_partner = (pair_p == z) ? pair_q : pair_p;
        if (z == z_partner)
            throw std::invalid_argument(
                "closability_probe: z and z' snap to the same node");

        const SparseMatrix H = h1_matrix(mesh);
        const Vector u = constrained_minimum(H, {z, z_partner}, {1.0, 0.0},
                                             mesh.node_count());

        const BoundaryMeasure kappa_h = instantiate(kappa, mesh);
        const JumpMeasure theta_h = instantiate(theta, mesh);

        ClosabilityLevel entry;
        entry.level = level;
        entry.h = mesh.h;
        entry.h1_energy = quadratic_energy(H, u);
        const SparseMatrix K = assemble_stiffness_sparse(mesh);
        entry.gradient_energy = u.dot(K * u);
        entry.boundary_form_value = boundary_mass_energy(kappa_h, mesh, u) +
                                    jump_energy(theta_h, mesh, u);
        report.levels.push_back(entry);
        if (level + 1 < levels) mesh = refine(mesh);
    }

    report.h1_strictly_decreasing = report.levels.size() > 1;
    report.h1_min = report.levels.front().h1_energy;
    for (std::size_t k = 0; k < report.levels.size(); ++k) {
        report.h1_min = std::min(report.h1_min, report.levels[k].h1_energy);
        if (k > 0 &&
            !(report.levels[k].h1_energy < report.levels[k - 1].h1_energy))
            report.h1_strictly_decreasing = false;
    }
    return report;
}

} // namespace nlrobin

#include "nlrobin/measures.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "nlrobin/kernels.hpp"

namespace nlrobin {

namespace {

void check_boundary_atom(const Mesh& mesh, int node, const char* who) {
    if (!mesh.is_boundary_node(node))
        throw std::invalid_argument(std::string(who) + ": node " +
                                    std::to_string(node) +
                                    " is not a boundary node");
}

void check_same_mesh(const BoundaryMeasure& a, const BoundaryMeasure& b) {
    if (a.n_boundary_nodes != b.n_boundary_nodes ||
        a.n_boundary_segments != b.n_boundary_segments)
        throw std::invalid_argument(
            "effective_local_measure: measures live on different meshes");
}

std::vector<BoundaryAtom> merge_atoms(const std::vector<BoundaryAtom>& atoms) {
    std::map<int, double> acc;
    for (const BoundaryAtom& a : atoms) acc[a.node] += a.weight;
    std::vector<BoundaryAtom> out;
    out.reserve(acc.size());
    for (const auto& [node, w] : acc) out.push_back({node, w});
    return out;
}

} // namespace

BoundaryMeasure BoundaryMeasure::zero(const Mesh& mesh) {
    BoundaryMeasure m;
    m.n_boundary_nodes = static_cast<int>(mesh.boundary_nodes.size());
    m.n_boundary_segments = static_cast<int>(mesh.boundary_segments.size());
    return m;
}

BoundaryMeasure BoundaryMeasure::uniform_density(const Mesh& mesh, double value) {
    if (value < 0.0)
        throw std::invalid_argument("BoundaryMeasure: density must be >= 0");
    BoundaryMeasure m = zero(mesh);
    if (mesh.dim == 1) {
        // point boundary: density against counting measure = nodal masses
        m.nodal_masses.assign(m.n_boundary_nodes, value);
    } else {
        m.segment_densities.assign(m.n_boundary_segments, value);
    }
    return m;
}

BoundaryMeasure BoundaryMeasure::from_atoms(const Mesh& mesh,
                                            std::vector<BoundaryAtom> atoms) {
    BoundaryMeasure m = zero(mesh);
    for (const BoundaryAtom& a : atoms) {
        check_boundary_atom(mesh, a.node, "BoundaryMeasure");
        m.add_atom(a.node, a.weight);
    }
    return m;
}

void BoundaryMeasure::add_atom(int node, double weight) {
    if (weight < 0.0)
        throw std::invalid_argument("BoundaryMeasure: atom weight must be >= 0");
    atoms.push_back({node, weight});
}

double BoundaryMeasure::total_mass(const Mesh& mesh) const {
    double mass = 0.0;
    for (std::size_t k = 0; k < segment_densities.size(); ++k)
        mass += segment_densities[k] * mesh.boundary_segments[k].length;
    for (double m : nodal_masses) mass += m;
    for (const BoundaryAtom& a : atoms) mass += a.weight;
    return mass;
}

bool BoundaryMeasure::is_zero() const {
    for (double d : segment_densities)
        if (d != 0.0) return false;
    for (double m : nodal_masses)
        if (m != 0.0) return false;
    for (const BoundaryAtom& a : atoms)
        if (a.weight != 0.0) return false;
    return true;
}

JumpKernel JumpKernel::constant(double c) {
    if (c < 0.0)
        throw std::invalid_argument("JumpKernel: constant value must be >= 0");
    JumpKernel k;
    k.kind = Kind::Constant;
    k.value = c;
    return k;
}

JumpKernel JumpKernel::truncated_fractional(double s, double eps) {
    if (!(s > 0.0 && s < 1.0))
        throw std::invalid_argument("JumpKernel: s must lie in (0,1)");
    if (!(eps > 0.0))
        throw std::invalid_argument("JumpKernel: eps must be positive");
    JumpKernel k;
    k.kind = Kind::TruncatedFractional;
    k.s = s;
    k.eps = eps;
    return k;
}

double JumpKernel::evaluate(double r, int dim) const {
    switch (kind) {
    case Kind::Zero:
        return 0.0;
    case Kind::Constant:
        return prefactor * value;
    case Kind::TruncatedFractional: {
        const double exponent = static_cast<double>(dim - 1) + 2.0 * s;
        return prefactor * std::pow(std::max(r, eps), -exponent);
    }
    }
    return 0.0;
}

bool JumpKernel::is_zero() const {
    if (kind == Kind::Zero) return true;
    if (prefactor == 0.0) return true;
    if (kind == Kind::Constant && value == 0.0) return true;
    return false;
}

void JumpMeasure::add_pair(int p, int q, double weight) {
    if (p == q)
        throw std::invalid_argument(
            "JumpMeasure: atom pair on the diagonal (p == q) is not allowed");
    if (weight < 0.0)
        throw std::invalid_argument("JumpMeasure: pair weight must be >= 0");
    pairs.push_back({p, q, weight});
}

bool JumpMeasure::is_zero() const {
    if (!kernel.is_zero()) return false;
    for (const AtomPair& p : pairs)
        if (p.weight != 0.0) return false;
    return true;
}

Matrix kernel_coupling_block(const JumpKernel& kernel, const Mesh& mesh) {
    const std::size_t nb = mesh.boundary_nodes.size();
    Matrix W;
    if (kernel.is_zero()) {
        W.setZero(nb, nb);
        return W;
    }
    std::vector<std::array<double, 2>> pts(nb);
    for (std::size_t k = 0; k < nb; ++k) pts[k] = mesh.nodes[mesh.boundary_nodes[k]];
    const std::vector<double> ds = mesh.boundary_arc_weights();
    const int dim = mesh.dim;
    kernels::fill_pair_weights(
        pts, ds, [&kernel, dim](double r) { return kernel.evaluate(r, dim); }, W);
    return W;
}

BoundaryMeasure marginal_measure(const JumpMeasure& theta, const Mesh& mesh) {
    BoundaryMeasure out = BoundaryMeasure::zero(mesh);

    std::vector<BoundaryAtom> atoms;
    for (const AtomPair& pair : theta.pairs) {
        check_boundary_atom(mesh, pair.p, "marginal_measure");
        check_boundary_atom(mesh, pair.q, "marginal_measure");
        if (pair.p == pair.q)
            throw std::invalid_argument("marginal_measure: pair on the diagonal");
        atoms.push_back({pair.p, 0.5 * pair.weight});
        atoms.push_back({pair.q, 0.5 * pair.weight});
    }
    out.atoms = merge_atoms(atoms);

    if (!theta.kernel.is_zero()) {
        const Matrix W = kernel_coupling_block(theta.kernel, mesh);
        out.nodal_masses.assign(out.n_boundary_nodes, 0.0);
        for (int i = 0; i < W.rows(); ++i) {
            double row = 0.0;
            for (int j = 0; j < W.cols(); ++j) row += W(i, j);
            out.nodal_masses[i] = row;
        }
    }
    return out;
}

BoundaryMeasure effective_local_measure(const BoundaryMeasure& kappa,
                                        const BoundaryMeasure& theta_hat) {
    check_same_mesh(kappa, theta_hat);
    BoundaryMeasure out;
    out.n_boundary_nodes = kappa.n_boundary_nodes;
    out.n_boundary_segments = kappa.n_boundary_segments;

    auto combine = [](const std::vector<double>& a, const std::vector<double>& b,
                      int n) {
        std::vector<double> r;
        if (a.empty() && b.empty()) return r;
        r.assign(n, 0.0);
        for (std::size_t k = 0; k < a.size(); ++k) r[k] += a[k];
        for (std::size_t k = 0; k < b.size(); ++k) r[k] += 2.0 * b[k];
        return r;
    };
    out.segment_densities = combine(kappa.segment_densities,
                                    theta_hat.segment_densities,
                                    out.n_boundary_segments);
    out.nodal_masses = combine(kappa.nodal_masses, theta_hat.nodal_masses,
                               out.n_boundary_nodes);

    std::vector<BoundaryAtom> atoms = kappa.atoms;
    for (const BoundaryAtom& a : theta_hat.atoms)
        atoms.push_back({a.node, 2.0 * a.weight});
    out.atoms = merge_atoms(atoms);
    return out;
}

std::pair<BoundaryMeasure, JumpMeasure> scale_pair(const BoundaryMeasure& kappa,
                                                   const JumpMeasure& theta,
                                                   double c) {
    if (c < 0.0)
        throw std::invalid_argument("scale_pair: scaling must be >= 0");

    BoundaryMeasure sk = kappa;
    for (double& d : sk.segment_densities) d *= c;
    for (double& m : sk.nodal_masses) m *= c;
    for (BoundaryAtom& a : sk.atoms) a.weight *= c;

    JumpMeasure st = theta;
    switch (st.kernel.kind) {
    case JumpKernel::Kind::Zero:
        break;
    case JumpKernel::Kind::Constant:
        st.kernel.value *= c;
        break;
    case JumpKernel::Kind::TruncatedFractional:
        st.kernel.prefactor *= c;
        break;
    }
    for (AtomPair& p : st.pairs) p.weight *= c;
    return {std::move(sk), std::move(st)};
}

AdmissibilityVerdict admissibility_verdict(
    const BoundaryMeasure& kappa, const JumpMeasure& theta, const Mesh& mesh,
    const std::vector<CapacityEvidence>& evidence) {
    AdmissibilityVerdict verdict;
    bool blocking = false;

    const BoundaryMeasure theta_hat = marginal_measure(theta, mesh);

    auto has_density = [](const BoundaryMeasure& m) {
        for (double d : m.segment_densities)
            if (d > 0.0) return true;
        for (double v : m.nodal_masses)
            if (v > 0.0) return true;
        return false;
    };

    if (kappa.is_zero() && theta_hat.is_zero()) {
        verdict.reasons.push_back(
            "kappa + theta_hat is the zero measure; trivially admissible");
    }
    if (has_density(kappa) || has_density(theta_hat)) {
        verdict.reasons.push_back(
            "density components are absolutely continuous with respect to "
            "boundary arc length and charge no capacity-null set");
    }

    std::vector<BoundaryAtom> atoms = kappa.atoms;
    for (const BoundaryAtom& a : theta_hat.atoms) atoms.push_back(a);
    for (const BoundaryAtom& a : merge_atoms(atoms)) {
        if (a.weight == 0.0) continue;
        if (mesh.dim == 1) {
            verdict.reasons.push_back(
                "atom at node " + std::to_string(a.node) +
                ": 1D endpoint capacities stay bounded below under refinement; "
                "admissible");
        } else {
            blocking = true;
            verdict.reasons.push_back(
                "atom at node " + std::to_string(a.node) +
                ": single-point boundary capacities in 2D decay to zero under "
                "refinement, so the atom charges a capacity-null set; "
                "non-admissible");
        }
    }

    for (const CapacityEvidence& ev : evidence) {
        if (ev.capacities.empty()) continue;
        const double first = ev.capacities.front();
        const double last = ev.capacities.back();
        verdict.capacity_evidence.push_back(ev);
        verdict.reasons.push_back(
            "capacity refinement study at node " + std::to_string(ev.node) +
            ": " + std::to_string(first) + " -> " + std::to_string(last) +
            " over " + std::to_string(ev.capacities.size()) + " levels");
    }

    verdict.admissible = !blocking;
    return verdict;
}

BoundaryMeasure instantiate(const BoundaryMeasureSpec& spec, const Mesh& mesh) {
    BoundaryMeasure m = spec.uniform_density != 0.0
                            ? BoundaryMeasure::uniform_density(mesh, spec.uniform_density)
                            : BoundaryMeasure::zero(mesh);
    std::vector<BoundaryAtom> atoms;
    for (const auto& [arc, weight] : spec.atoms)
        atoms.push_back({mesh.nearest_boundary_node(arc), weight});
    for (const BoundaryAtom& a : merge_atoms(atoms)) m.add_atom(a.node, a.weight);
    return m;
}

JumpMeasure instantiate(const JumpMeasureSpec& spec, const Mesh& mesh) {
    JumpMeasure theta;
    theta.kernel = spec.kernel;
    for (const auto& p : spec.pairs) {
        const int a = mesh.nearest_boundary_node(p[0]);
        const int b = mesh.nearest_boundary_node(p[1]);
        theta.add_pair(a, b, p[2]);
    }
    return theta;
}

} // namespace nlrobin

#include "nlrobin/forms.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace nlrobin {

namespace {

struct ElementEntry {
    int row, col;
    double value;
};

// P1 stiffness contributions, one element at a time.
template <class Emit>
void for_each_stiffness_entry(const Mesh& mesh, Emit&& emit) {
    if (mesh.dim == 1) {
        for (const auto& seg : mesh.segments) {
            const int a = seg[0], b = seg[1];
            const double len = std::abs(mesh.nodes[b][0] - mesh.nodes[a][0]);
            const double k = 1.0 / len;
            emit(a, a, k);
            emit(b, b, k);
            emit(a, b, -k);
            emit(b, a, -k);
        }
        return;
    }
    for (const auto& tri : mesh.triangles) {
        const auto& p0 = mesh.nodes[tri[0]];
        const auto& p1 = mesh.nodes[tri[1]];
        const auto& p2 = mesh.nodes[tri[2]];
        const double det = (p1[0] - p0[0]) * (p2[1] - p0[1]) -
                           (p2[0] - p0[0]) * (p1[1] - p0[1]);
        const double area = 0.5 * std::abs(det);
        // outward-rotated opposite edges give the barycentric gradients
        const double gx[3] = {p1[1] - p2[1], p2[1] - p0[1], p0[1] - p1[1]};
        const double gy[3] = {p2[0] - p1[0], p0[0] - p2[0], p1[0] - p0[0]};
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                emit(tri[a], tri[b],
                     (gx[a] * gx[b] + gy[a] * gy[b]) / (4.0 * area));
    }
}

double element_measure_1d(const Mesh& mesh, const std::array<int, 2>& seg) {
    return std::abs(mesh.nodes[seg[1]][0] - mesh.nodes[seg[0]][0]);
}

double element_measure_2d(const Mesh& mesh, const std::array<int, 3>& tri) {
    const auto& p0 = mesh.nodes[tri[0]];
    const auto& p1 = mesh.nodes[tri[1]];
    const auto& p2 = mesh.nodes[tri[2]];
    const double det = (p1[0] - p0[0]) * (p2[1] - p0[1]) -
                       (p2[0] - p0[0]) * (p1[1] - p0[1]);
    return 0.5 * std::abs(det);
}

void check_measure_mesh(const BoundaryMeasure& m, const Mesh& mesh,
                        const char* who) {
    if (m.n_boundary_nodes != static_cast<int>(mesh.boundary_nodes.size()) ||
        m.n_boundary_segments != static_cast<int>(mesh.boundary_segments.size()))
        throw std::invalid_argument(std::string(who) +
                                    ": measure does not match the mesh");
    if (!m.segment_densities.empty() &&
        m.segment_densities.size() != mesh.boundary_segments.size())
        throw std::invalid_argument(std::string(who) +
                                    ": segment density count mismatch");
    if (!m.nodal_masses.empty() &&
        m.nodal_masses.size() != mesh.boundary_nodes.size())
        throw std::invalid_argument(std::string(who) +
                                    ": nodal mass count mismatch");
}

} // namespace

Matrix assemble_stiffness(const Mesh& mesh) {
    Matrix K = Matrix::Zero(mesh.node_count(), mesh.node_count());
    for_each_stiffness_entry(
        mesh, [&K](int i, int j, double v) { K(i, j) += v; });
    return K;
}

SparseMatrix assemble_stiffness_sparse(const Mesh& mesh) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(mesh.dim == 1 ? 4 * mesh.segments.size()
                                : 9 * mesh.triangles.size());
    for_each_stiffness_entry(mesh, [&trips](int i, int j, double v) {
        trips.emplace_back(i, j, v);
    });
    SparseMatrix K(mesh.node_count(), mesh.node_count());
    K.setFromTriplets(trips.begin(), trips.end());
    return K;
}

Vector assemble_lumped_mass(const Mesh& mesh) {
    Vector M = Vector::Zero(mesh.node_count());
    if (mesh.dim == 1) {
        for (const auto& seg : mesh.segments) {
            const double share = element_measure_1d(mesh, seg) / 2.0;
            M(seg[0]) += share;
            M(seg[1]) += share;
        }
    } else {
        for (const auto& tri : mesh.triangles) {
            const double share = element_measure_2d(mesh, tri) / 3.0;
            for (int a = 0; a < 3; ++a) M(tri[a]) += share;
        }
    }
    return M;
}

Vector assemble_boundary_mass(const BoundaryMeasure& kappa, const Mesh& mesh) {
    check_measure_mesh(kappa, mesh, "assemble_boundary_mass");
    Vector B = Vector::Zero(mesh.node_count());
    for (std::size_t k = 0; k < kappa.segment_densities.size(); ++k) {
        const BoundarySegment& seg = mesh.boundary_segments[k];
        const double half = kappa.segment_densities[k] * seg.length / 2.0;
        B(seg.a) += half;
        B(seg.b) += half;
    }
    for (std::size_t k = 0; k < kappa.nodal_masses.size(); ++k)
        B(mesh.boundary_nodes[k]) += kappa.nodal_masses[k];
    for (const BoundaryAtom& a : kappa.atoms) {
        if (!mesh.is_boundary_node(a.node))
            throw std::invalid_argument(
                "assemble_boundary_mass: atom off the boundary at node " +
                std::to_string(a.node));
        B(a.node) += a.weight;
    }
    return B;
}

JumpMatrices assemble_jump(const JumpMeasure& theta, const Mesh& mesh) {
    const int n = mesh.node_count();
    JumpMatrices out;
    out.W = Matrix::Zero(n, n);

    if (!theta.kernel.is_zero()) {
        const Matrix block = kernel_coupling_block(theta.kernel, mesh);
        const auto& bn = mesh.boundary_nodes;
        for (std::size_t a = 0; a < bn.size(); ++a)
            for (std::size_t b = 0; b < bn.size(); ++b)
                out.W(bn[a], bn[b]) = block(a, b);
    }
    for (const AtomPair& pair : theta.pairs) {
        if (pair.p == pair.q)
            throw std::invalid_argument(
                "assemble_jump: pair touches the diagonal (p == q)");
        if (!mesh.is_boundary_node(pair.p) || !mesh.is_boundary_node(pair.q))
            throw std::invalid_argument("assemble_jump: pair node off the boundary");
        out.W(pair.p, pair.q) += 0.5 * pair.weight;
        out.W(pair.q, pair.p) += 0.5 * pair.weight;
    }

    // row sums in ascending column order; J1 = 0 then holds exactly
    out.theta_hat_diag = Vector::Zero(n);
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += out.W(i, j);
        out.theta_hat_diag(i) = row;
    }

    out.J = -2.0 * out.W;
    for (int i = 0; i < n; ++i) out.J(i, i) += 2.0 * out.theta_hat_diag(i);
    return out;
}

FormMatrices assemble_operator(const BoundaryMeasure& kappa,
                               const JumpMeasure& theta, const Mesh& mesh) {
    FormMatrices f;
    f.K = assemble_stiffness(mesh);
    f.M = assemble_lumped_mass(mesh);
    f.B = assemble_boundary_mass(kappa, mesh);
    JumpMatrices jm = assemble_jump(theta, mesh);
    f.J = std::move(jm.J);
    f.W = std::move(jm.W);
    f.theta_hat_diag = std::move(jm.theta_hat_diag);
    f.A = f.K + f.J;
    f.A.diagonal() += f.B;
    return f;
}

double jump_energy(const JumpMeasure& theta, const Mesh& mesh, const Vector& u) {
    double energy = 0.0;
    for (const AtomPair& pair : theta.pairs) {
        const double d = u(pair.p) - u(pair.q);
        energy += pair.weight * d * d;
    }
    if (!theta.kernel.is_zero()) {
        const Matrix block = kernel_coupling_block(theta.kernel, mesh);
        const auto& bn = mesh.boundary_nodes;
        for (std::size_t a = 0; a < bn.size(); ++a) {
            for (std::size_t b = a + 1; b < bn.size(); ++b) {
                const double d = u(bn[a]) - u(bn[b]);
                energy += 2.0 * block(a, b) * d * d;
            }
        }
    }
    return energy;
}

double boundary_mass_energy(const BoundaryMeasure& kappa, const Mesh& mesh,
                            const Vector& u) {
    check_measure_mesh(kappa, mesh, "boundary_mass_energy");
    double energy = 0.0;
    for (std::size_t k = 0; k < kappa.segment_densities.size(); ++k) {
        const BoundarySegment& seg = mesh.boundary_segments[k];
        const double half = kappa.segment_densities[k] * seg.length / 2.0;
        energy += half * (u(seg.a) * u(seg.a) + u(seg.b) * u(seg.b));
    }
    for (std::size_t k = 0; k < kappa.nodal_masses.size(); ++k) {
        const int node = mesh.boundary_nodes[k];
        energy += kappa.nodal_masses[k] * u(node) * u(node);
    }
    for (const BoundaryAtom& a : kappa.atoms) energy += a.weight * u(a.node) * u(a.node);
    return energy;
}

Vector DirichletOperator::zero_extend(const Vector& interior_values,
                                      int n_total) const {
    Vector full = Vector::Zero(n_total);
    for (std::size_t k = 0; k < interior.size(); ++k)
        full(interior[k]) = interior_values(static_cast<int>(k));
    return full;
}

DirichletOperator dirichlet_operator(const Mesh& mesh) {
    DirichletOperator d;
    d.interior = mesh.interior_nodes();
    if (d.interior.empty())
        throw std::invalid_argument("dirichlet_operator: mesh has no interior nodes");
    const Matrix K = assemble_stiffness(mesh);
    const Vector M = assemble_lumped_mass(mesh);
    const int m = static_cast<int>(d.interior.size());
    d.A.resize(m, m);
    d.M.resize(m);
    for (int r = 0; r < m; ++r) {
        d.M(r) = M(d.interior[r]);
        for (int c = 0; c < m; ++c) d.A(r, c) = K(d.interior[r], d.interior[c]);
    }
    return d;
}

} // namespace nlrobin

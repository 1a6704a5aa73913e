#pragma once

#include <Eigen/SparseCore>

#include "nlrobin/measures.hpp"
#include "nlrobin/mesh.hpp"
#include "nlrobin/types.hpp"

namespace nlrobin {

using SparseMatrix = Eigen::SparseMatrix<double>;

// Assembled Galerkin matrices for one (kappa, theta) configuration.
// Everything is mass-lumped: M and B are diagonal (stored as vectors) and
// the jump quadrature is nodal, so A = K + diag(B) + J keeps nonpositive
// off-diagonal entries on non-obtuse meshes and the propagator checks hold
// at the matrix level.
//
// J = 2 diag(theta_hat_diag) - 2 W exactly, where W carries the coupling
// weights u(x) v(y) and theta_hat_diag the nodal marginal masses. For all
// measures the splitting identity
//     A(kappa, theta) = A(kappa + 2 theta_hat, 0) - 2 W
// holds entrywise up to roundoff.
struct FormMatrices {
    Matrix K;              // stiffness
    Vector M;              // lumped mass diagonal
    Vector B;              // boundary mass diagonal
    Matrix J;              // jump form matrix
    Matrix W;              // boundary coupling matrix, zero diagonal
    Vector theta_hat_diag; // nodal marginal masses of theta
    Matrix A;              // K + diag(B) + J
};

struct JumpMatrices {
    Matrix J;
    Matrix W;
    Vector theta_hat_diag;
};

Matrix assemble_stiffness(const Mesh& mesh);
SparseMatrix assemble_stiffness_sparse(const Mesh& mesh);

/// Diagonal of the lumped mass matrix; trace equals |Omega|.
Vector assemble_lumped_mass(const Mesh& mesh);

/// Diagonal boundary mass for a BoundaryMeasure: segment densities are
/// lumped onto the segment endpoints, nodal masses and atoms land on their
/// nodes. Zero at interior nodes.
Vector assemble_boundary_mass(const BoundaryMeasure& kappa, const Mesh& mesh);

JumpMatrices assemble_jump(const JumpMeasure& theta, const Mesh& mesh);

FormMatrices assemble_operator(const BoundaryMeasure& kappa,
                               const JumpMeasure& theta, const Mesh& mesh);

/// Energy of the jump form, sum over (x,y) of (u(x)-u(y))^2 d theta,
/// evaluated from the measure without forming the full-size J (usable on
/// large refinement-study meshes).
double jump_energy(const JumpMeasure& theta, const Mesh& mesh, const Vector& u);

/// Boundary mass energy, sum of u^2 d kappa.
double boundary_mass_energy(const BoundaryMeasure& kappa, const Mesh& mesh,
                            const Vector& u);

// Stiffness and mass restricted to interior nodes, with the index map
// needed to zero-extend interior vectors back to the full node set.
struct DirichletOperator {
    Matrix A;
    Vector M;
    std::vector<int> interior; // interior[k] = global node of row k

    Vector zero_extend(const Vector& interior_values, int n_total) const;
};

DirichletOperator dirichlet_operator(const Mesh& mesh);

} // namespace nlrobin

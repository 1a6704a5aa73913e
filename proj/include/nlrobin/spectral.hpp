#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "nlrobin/types.hpp"

namespace nlrobin {

// Generalized symmetric eigendecomposition of (A, M) with diagonal M > 0:
// A V = M V diag(eigenvalues), V^T M V = I, eigenvalues ascending.
struct SpectralDecomposition {
    Vector eigenvalues;
    Matrix eigenvectors; // columns are the M-orthonormal eigenvectors
};

SpectralDecomposition decompose(const Matrix& A, const Vector& M);

// Heat propagator u(0) -> u(t): P = V diag(exp(-t lambda)) V^T diag(M).
// Symmetric in the M-weighted inner product: diag(M) P = P^T diag(M).
struct Propagator {
    double t = 0.0;
    Matrix P;
};

Propagator propagator(const SpectralDecomposition& decomp, const Vector& M,
                      double t);

/// Scatter an interior-node propagator to the full node set; rows and
/// columns at the remaining nodes are zero.
Propagator zero_extend(const Propagator& p, const std::vector<int>& indices,
                       int n_total);

/// Solve (A + lam M) u = lam M f by direct symmetric factorization.
Vector resolvent_apply(const Matrix& A, const Vector& M, double lam,
                       const Vector& f);

class ConvergenceFailure : public std::runtime_error {
public:
    ConvergenceFailure(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

/// Minimize q(u) = u^T (A + lam M) u / 2 - lam u^T M f by Jacobi
/// preconditioned conjugate gradients, stopping when the residual norm
/// drops below tol * ||lam M f||. Independent of resolvent_apply's direct
/// factorization; the two are cross-checked by the consistency suites.
/// Throws ConvergenceFailure when the iteration cap is hit
/// (max_iterations <= 0 picks a size-based default).
Vector dirichlet_principle_solve(const Matrix& A, const Vector& M, double lam,
                                 const Vector& f, double tol,
                                 int max_iterations = 0);

inline double m_norm(const Vector& u, const Vector& M) {
    double acc = 0.0;
    for (int i = 0; i < u.size(); ++i) acc += M(i) * u(i) * u(i);
    return std::sqrt(acc);
}

} // namespace nlrobin

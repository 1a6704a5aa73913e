#include "nlrobin/spectral.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "nlrobin/kernels.hpp"

namespace nlrobin {

SpectralDecomposition decompose(const Matrix& A, const Vector& M) {
    const int n = static_cast<int>(A.rows());
    if (A.cols() != n || M.size() != n)
        throw std::invalid_argument("decompose: shape mismatch");
    for (int i = 0; i < n; ++i)
        if (!(M(i) > 0.0))
            throw std::invalid_argument("decompose: mass diagonal must be positive");

    const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
    const double asym = (A - A.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * scale)
        throw std::invalid_argument("decompose: matrix is not symmetric");

    // similarity transform by M^{-1/2} reduces the pencil to a standard
    // symmetric problem
    const Vector d = M.cwiseSqrt();
    Matrix S(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) S(i, j) = A(i, j) / (d(i) * d(j));

    Eigen::SelfAdjointEigenSolver<Matrix> solver(S);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("decompose: eigensolver failed");

    SpectralDecomposition out;
    out.eigenvalues = solver.eigenvalues();
    out.eigenvectors = solver.eigenvectors();
    for (int i = 0; i < n; ++i) out.eigenvectors.row(i) /= d(i);
    // clamp eigensolver noise on PSD input
    for (int k = 0; k < n; ++k)
        if (out.eigenvalues(k) < 0.0 && out.eigenvalues(k) > -1e-10 * scale)
            out.eigenvalues(k) = 0.0;
    return out;
}

Propagator propagator(const SpectralDecomposition& decomp, const Vector& M,
                      double t) {
    if (t < 0.0)
        throw std::invalid_argument("propagator: time must be nonnegative");
    const int n = static_cast<int>(decomp.eigenvalues.size());
    Vector w(n);
    for (int k = 0; k < n; ++k) w(k) = std::exp(-t * decomp.eigenvalues(k));

    Matrix S;
    kernels::scaled_gram(decomp.eigenvectors, w, S);
    Propagator p;
    p.t = t;
    p.P = std::move(S);
    for (int j = 0; j < n; ++j) p.P.col(j) *= M(j);
    return p;
}

Propagator zero_extend(const Propagator& p, const std::vector<int>& indices,
                       int n_total) {
    Propagator out;
    out.t = p.t;
    out.P = Matrix::Zero(n_total, n_total);
    const int m = static_cast<int>(indices.size());
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) out.P(indices[r], indices[c]) = p.P(r, c);
    return out;
}

Vector resolvent_apply(const Matrix& A, const Vector& M, double lam,
                       const Vector& f) {
    if (!(lam > 0.0))
        throw std::invalid_argument("resolvent_apply: lam must be positive");
    Matrix H = A;
    H.diagonal() += lam * M;
    Eigen::LDLT<Matrix> ldlt(H);
    if (ldlt.info() != Eigen::Success)
        throw std::runtime_error("resolvent_apply: factorization failed");
    return ldlt.solve(lam * M.cwiseProduct(f));
}

Vector dirichlet_principle_solve(const Matrix& A, const Vector& M, double lam,
                                 const Vector& f, double tol,
                                 int max_iterations) {
    if (!(lam > 0.0))
        throw std::invalid_argument("dirichlet_principle_solve: lam must be positive");
    if (!(tol > 0.0))
        throw std::invalid_argument("dirichlet_principle_solve: tol must be positive");

    const int n = static_cast<int>(A.rows());
    Matrix H = A;
    H.diagonal() += lam * M;
    const Vector b = lam * M.cwiseProduct(f);

    const double target = tol * b.norm();
    Vector x = Vector::Zero(n);
    if (b.norm() == 0.0) return x;

    if (max_iterations <= 0) max_iterations = std::max(10000, 20 * n);

    const Vector inv_diag = H.diagonal().cwiseInverse();
    Vector r = b;
    Vector z = inv_diag.cwiseProduct(r);
    Vector p = z;
    double rz = r.dot(z);
    Vector Hp(n);

    for (int it = 0; it < max_iterations; ++it) {
        if (r.norm() <= target) return x;
        kernels::matvec(H, p, Hp);
        const double p_dot_hp = p.dot(Hp);
        if (!(p_dot_hp > 0.0))
            throw ConvergenceFailure(
                "dirichlet_principle_solve: lost positive definiteness", r.norm());
        const double alpha = rz / p_dot_hp;
        x += alpha * p;
        r -= alpha * Hp;
        z = inv_diag.cwiseProduct(r);
        const double rz_next = r.dot(z);
        p = z + (rz_next / rz) * p;
        rz = rz_next;
    }
    if (r.norm() <= target) return x;
    throw ConvergenceFailure(
        "dirichlet_principle_solve: no convergence within " +
            std::to_string(max_iterations) + " iterations, residual " +
            std::to_string(r.norm()) + " (target " + std::to_string(target) + ")",
        r.norm());
}

} // namespace nlrobin

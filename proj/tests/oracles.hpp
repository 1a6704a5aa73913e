#pragma once

// Test-only reference computations, independent of the library's assembly
// and solver paths.

#include <cmath>
#include <functional>
#include <vector>

#include "nlrobin/mesh.hpp"
#include "nlrobin/types.hpp"

namespace oracles {

using nlrobin::Matrix;
using nlrobin::Vector;

// Characteristic determinant of the 1D interval eigenproblem
//   -u'' = k^2 u on (0,1)
//   -u'(0) + beta u(0) + w0 (u(0) - u(1)) = 0
//    u'(1) + beta u(1) + w0 (u(1) - u(0)) = 0
// for the ansatz u = a cos(kx) + b sin(kx).
inline double robin_pair_determinant(double k, double beta, double w0) {
    const double c = std::cos(k);
    const double s = std::sin(k);
    const double r11 = beta + w0 * (1.0 - c);
    const double r12 = -(k + w0 * s);
    const double r21 = -k * s + beta * c + w0 * (c - 1.0);
    const double r22 = k * c + (beta + w0) * s;
    return r11 * r22 - r12 * r21;
}

// First `count` eigenvalues k^2 by scanning for sign changes and bisecting.
inline std::vector<double> robin_pair_eigenvalues(double beta, double w0,
                                                  int count,
                                                  double k_max = 40.0) {
    std::vector<double> lambdas;
    const int steps = 400000;
    double prev_k = 1e-9;
    double prev_f = robin_pair_determinant(prev_k, beta, w0);
    for (int i = 1; i <= steps && static_cast<int>(lambdas.size()) < count; ++i) {
        const double k = k_max * i / steps;
        const double f = robin_pair_determinant(k, beta, w0);
        if (prev_f == 0.0) {
            lambdas.push_back(prev_k * prev_k);
        } else if (prev_f * f < 0.0) {
            double lo = prev_k, hi = k;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = robin_pair_determinant(mid, beta, w0);
                if (fm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if (prev_f * fm < 0.0)
                    hi = mid;
                else
                    lo = mid;
            }
            const double k_root = 0.5 * (lo + hi);
            lambdas.push_back(k_root * k_root);
        }
        prev_k = k;
        prev_f = f;
    }
    return lambdas;
}

// 2D P1 stiffness by the cotangent formula: the coupling of the two
// vertices opposite to angle gamma is -cot(gamma)/2 per adjacent triangle.
inline Matrix cotangent_stiffness(const nlrobin::Mesh& mesh) {
    Matrix K = Matrix::Zero(mesh.node_count(), mesh.node_count());
    for (const auto& tri : mesh.triangles) {
        for (int corner = 0; corner < 3; ++corner) {
            const int a = tri[corner];
            const int b = tri[(corner + 1) % 3];
            const int c = tri[(corner + 2) % 3];
            const double ux = mesh.nodes[b][0] - mesh.nodes[a][0];
            const double uy = mesh.nodes[b][1] - mesh.nodes[a][1];
            const double vx = mesh.nodes[c][0] - mesh.nodes[a][0];
            const double vy = mesh.nodes[c][1] - mesh.nodes[a][1];
            const double cross = std::abs(ux * vy - uy * vx);
            const double cot = (ux * vx + uy * vy) / cross;
            K(b, c) += -0.5 * cot;
            K(c, b) += -0.5 * cot;
            K(b, b) += 0.5 * cot;
            K(c, c) += 0.5 * cot;
        }
    }
    return K;
}

// Brute-force nodal quadrature of a radial kernel over boundary node
// pairs: masses m_i = sum_{j != i} k(|x_i - x_j|) ds_i ds_j and the
// coupling weights themselves.
struct DoubleSum {
    Matrix coupling;      // indexed by boundary-chain position
    std::vector<double> masses;
};

inline DoubleSum kernel_double_sum(const nlrobin::Mesh& mesh,
                                   const std::function<double(double)>& kernel) {
    const auto& bn = mesh.boundary_nodes;
    const std::vector<double> ds = mesh.boundary_arc_weights();
    const int nb = static_cast<int>(bn.size());
    DoubleSum out;
    out.coupling = Matrix::Zero(nb, nb);
    out.masses.assign(nb, 0.0);
    for (int a = 0; a < nb; ++a) {
        for (int b = 0; b < nb; ++b) {
            if (a == b) continue;
            const double dx = mesh.nodes[bn[a]][0] - mesh.nodes[bn[b]][0];
            const double dy = mesh.nodes[bn[a]][1] - mesh.nodes[bn[b]][1];
            const double r = std::sqrt(dx * dx + dy * dy);
            out.coupling(a, b) = kernel(r) * ds[a] * ds[b];
            out.masses[a] += out.coupling(a, b);
        }
    }
    return out;
}

// First-order propagator expansion P ~ I - t M^{-1} A, valid while
// t * ||M^{-1} A|| is small.
inline Matrix first_order_propagator(const Matrix& A, const Vector& M, double t) {
    Matrix P = Matrix::Identity(A.rows(), A.cols());
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) P(i, j) -= t * A(i, j) / M(i);
    return P;
}

// Closed forms for the H1 equilibrium problems on (0,1):
//   both endpoints pinned to 1    -> 2 tanh(1/2)
//   left endpoint pinned to 1     -> tanh(1)
//   u(0)=1, u(1)=0                -> coth(1)
inline double capacity_both_endpoints() { return 2.0 * std::tanh(0.5); }
inline double capacity_left_endpoint() { return std::tanh(1.0); }
inline double energy_left_one_right_zero() { return 1.0 / std::tanh(1.0); }

// -u'' + u = 1 on (0,1), u(0) = u(1) = 0.
inline double dirichlet_resolvent_value(double x) {
    return 1.0 - std::cosh(x - 0.5) / std::cosh(0.5);
}

} // namespace oracles

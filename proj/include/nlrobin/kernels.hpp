#pragma once

#include <array>
#include <vector>

#include "nlrobin/types.hpp"

// Data-parallel inner loops, each in an OpenMP flavor (the default entry
// point) and a serial reference flavor kept for testing and benchmarking.
// Every output entry is produced by exactly one thread with a fixed inner
// summation order, so the two flavors agree bitwise and results do not
// depend on the thread count.

namespace nlrobin::kernels {

/// C = A * B (dense).
void matmul(const Matrix& A, const Matrix& B, Matrix& C);
void matmul_serial(const Matrix& A, const Matrix& B, Matrix& C);

/// S = V * diag(w) * V^T. S is exactly symmetric (upper triangle computed,
/// then mirrored).
void scaled_gram(const Matrix& V, const Vector& w, Matrix& S);
void scaled_gram_serial(const Matrix& V, const Vector& w, Matrix& S);

/// y = A * x (dense).
void matvec(const Matrix& A, const Vector& x, Vector& y);
void matvec_serial(const Matrix& A, const Vector& x, Vector& y);

struct EntryScan {
    double value = 0.0;
    int i = -1;
    int j = -1;
};

/// Smallest entry of A with its location (lexicographically first on ties).
EntryScan min_entry(const Matrix& A);
EntryScan min_entry_serial(const Matrix& A);

/// Largest entry of L - H with its location (lexicographically first on ties).
EntryScan max_gap(const Matrix& L, const Matrix& H);
EntryScan max_gap_serial(const Matrix& L, const Matrix& H);

/// W(i,j) = k(|x_i - x_j|) * ds_i * ds_j for i != j, zero diagonal.
/// Points are 2D coordinates (y = 0 for 1D meshes).
template <class Kernel>
void fill_pair_weights_rows(const std::vector<std::array<double, 2>>& pts,
                            const std::vector<double>& ds, Kernel&& k,
                            Matrix& W, int row_begin, int row_end) {
    const int n = static_cast<int>(pts.size());
    for (int i = row_begin; i < row_end; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j == i) {
                W(i, j) = 0.0;
                continue;
            }
            const double dx = pts[i][0] - pts[j][0];
            const double dy = pts[i][1] - pts[j][1];
            const double r = std::sqrt(dx * dx + dy * dy);
            W(i, j) = k(r) * ds[i] * ds[j];
        }
    }
}

template <class Kernel>
void fill_pair_weights_serial(const std::vector<std::array<double, 2>>& pts,
                              const std::vector<double>& ds, Kernel&& k,
                              Matrix& W) {
    const int n = static_cast<int>(pts.size());
    W.resize(n, n);
    fill_pair_weights_rows(pts, ds, k, W, 0, n);
}

template <class Kernel>
void fill_pair_weights(const std::vector<std::array<double, 2>>& pts,
                       const std::vector<double>& ds, Kernel&& k, Matrix& W) {
    const int n = static_cast<int>(pts.size());
    W.resize(n, n);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        fill_pair_weights_rows(pts, ds, k, W, i, i + 1);
    }
}

} // namespace nlrobin::kernels

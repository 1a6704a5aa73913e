#include "nlrobin/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nlrobin::kernels {

namespace {

inline void matmul_row(const Matrix& A, const Matrix& B, Matrix& C, int i) {
    const int k_count = static_cast<int>(A.cols());
    const int m = static_cast<int>(B.cols());
    for (int j = 0; j < m; ++j) C(i, j) = 0.0;
    for (int k = 0; k < k_count; ++k) {
        const double a = A(i, k);
        for (int j = 0; j < m; ++j) C(i, j) += a * B(k, j);
    }
}

inline void gram_row(const Matrix& V, const Vector& w, Matrix& S, int i) {
    const int n = static_cast<int>(V.rows());
    const int m = static_cast<int>(V.cols());
    for (int j = i; j < n; ++j) {
        double acc = 0.0;
        for (int k = 0; k < m; ++k) acc += V(i, k) * w(k) * V(j, k);
        S(i, j) = acc;
    }
}

inline double dot_row(const Matrix& A, const Vector& x, int i) {
    const int n = static_cast<int>(A.cols());
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += A(i, j) * x(j);
    return acc;
}

// Lexicographic tie-break keeps the scan result independent of the
// iteration schedule.
inline void scan_better(EntryScan& best, double v, int i, int j) {
    if (best.i < 0 || v < best.value ||
        (v == best.value && (i < best.i || (i == best.i && j < best.j)))) {
        best = {v, i, j};
    }
}

inline EntryScan min_rows(const Matrix& A, int row_begin, int row_end) {
    EntryScan best;
    for (int i = row_begin; i < row_end; ++i)
        for (int j = 0; j < A.cols(); ++j) scan_better(best, A(i, j), i, j);
    return best;
}

inline EntryScan gap_rows(const Matrix& L, const Matrix& H, int row_begin,
                          int row_end) {
    EntryScan best;
    for (int i = row_begin; i < row_end; ++i)
        for (int j = 0; j < L.cols(); ++j)
            scan_better(best, -(L(i, j) - H(i, j)), i, j);
    return best;
}

EntryScan combine_scans(std::vector<EntryScan>& parts) {
    EntryScan best;
    for (const EntryScan& p : parts)
        if (p.i >= 0) scan_better(best, p.value, p.i, p.j);
    return best;
}

} // namespace

void matmul_serial(const Matrix& A, const Matrix& B, Matrix& C) {
    C.resize(A.rows(), B.cols());
    for (int i = 0; i < A.rows(); ++i) matmul_row(A, B, C, i);
}

void matmul(const Matrix& A, const Matrix& B, Matrix& C) {
    C.resize(A.rows(), B.cols());
    const int n = static_cast<int>(A.rows());
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) matmul_row(A, B, C, i);
}

void scaled_gram_serial(const Matrix& V, const Vector& w, Matrix& S) {
    const int n = static_cast<int>(V.rows());
    S.resize(n, n);
    for (int i = 0; i < n; ++i) gram_row(V, w, S, i);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) S(i, j) = S(j, i);
}

void scaled_gram(const Matrix& V, const Vector& w, Matrix& S) {
    const int n = static_cast<int>(V.rows());
    S.resize(n, n);
#pragma omp parallel for schedule(dynamic, 8)
    for (int i = 0; i < n; ++i) gram_row(V, w, S, i);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) S(i, j) = S(j, i);
}

void matvec_serial(const Matrix& A, const Vector& x, Vector& y) {
    y.resize(A.rows());
    for (int i = 0; i < A.rows(); ++i) y(i) = dot_row(A, x, i);
}

void matvec(const Matrix& A, const Vector& x, Vector& y) {
    y.resize(A.rows());
    const int n = static_cast<int>(A.rows());
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) y(i) = dot_row(A, x, i);
}

EntryScan min_entry_serial(const Matrix& A) {
    return min_rows(A, 0, static_cast<int>(A.rows()));
}

EntryScan min_entry(const Matrix& A) {
    const int n = static_cast<int>(A.rows());
    std::vector<EntryScan> parts;
#pragma omp parallel
    {
#pragma omp single
        {
            int threads = 1;
#ifdef _OPENMP
            threads = omp_get_num_threads();
#endif
            parts.resize(threads);
        }
        int tid = 0;
#ifdef _OPENMP
        tid = omp_get_thread_num();
#endif
        EntryScan local;
#pragma omp for schedule(static)
        for (int i = 0; i < n; ++i) {
            EntryScan row = min_rows(A, i, i + 1);
            if (row.i >= 0) scan_better(local, row.value, row.i, row.j);
        }
        parts[tid] = local;
    }
    return combine_scans(parts);
}

EntryScan max_gap_serial(const Matrix& L, const Matrix& H) {
    EntryScan s = gap_rows(L, H, 0, static_cast<int>(L.rows()));
    s.value = -s.value;
    return s;
}

EntryScan max_gap(const Matrix& L, const Matrix& H) {
    const int n = static_cast<int>(L.rows());
    std::vector<EntryScan> parts;
#pragma omp parallel
    {
#pragma omp single
        {
            int threads = 1;
#ifdef _OPENMP
            threads = omp_get_num_threads();
#endif
            parts.resize(threads);
        }
        int tid = 0;
#ifdef _OPENMP
        tid = omp_get_thread_num();
#endif
        EntryScan local;
#pragma omp for schedule(static)
        for (int i = 0; i < n; ++i) {
            EntryScan row = gap_rows(L, H, i, i + 1);
            if (row.i >= 0) scan_better(local, row.value, row.i, row.j);
        }
        parts[tid] = local;
    }
    EntryScan s = combine_scans(parts);
    s.value = -s.value;
    return s;
}

} // namespace nlrobin::kernels

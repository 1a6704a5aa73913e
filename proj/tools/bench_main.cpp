// Timing comparison of the OpenMP kernels against their serial reference
// implementations. The two flavors must agree bitwise; the max |diff|
// column double-checks that while measuring.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "nlrobin/kernels.hpp"

using nlrobin::Matrix;
using nlrobin::Vector;
namespace kernels = nlrobin::kernels;

namespace {

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

template <class F>
double time_best_of(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const double t0 = now_seconds();
        f();
        best = std::min(best, now_seconds() - t0);
    }
    return best;
}

Matrix random_matrix(int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix A(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) A(i, j) = gauss(rng);
    return A;
}

void report_row(const char* name, int n, double serial, double parallel,
                double max_diff) {
    std::printf("%-22s n=%-6d serial %8.2f ms   parallel %8.2f ms   speedup %5.2fx   max|diff| %.1e\n",
                name, n, serial * 1e3, parallel * 1e3, serial / parallel,
                max_diff);
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not enabled; both flavors run serially\n");
#endif

    for (int n : {256, 512}) {
        const Matrix A = random_matrix(n, 1u);
        const Matrix B = random_matrix(n, 2u);
        Matrix C1, C2;
        const double ts = time_best_of(3, [&] { kernels::matmul_serial(A, B, C1); });
        const double tp = time_best_of(3, [&] { kernels::matmul(A, B, C2); });
        report_row("matmul", n, ts, tp, (C1 - C2).cwiseAbs().maxCoeff());
    }

    for (int n : {256, 512}) {
        const Matrix V = random_matrix(n, 3u);
        Vector w(n);
        for (int k = 0; k < n; ++k) w(k) = std::exp(-1e-3 * k);
        Matrix S1, S2;
        const double ts =
            time_best_of(3, [&] { kernels::scaled_gram_serial(V, w, S1); });
        const double tp = time_best_of(3, [&] { kernels::scaled_gram(V, w, S2); });
        report_row("scaled_gram", n, ts, tp, (S1 - S2).cwiseAbs().maxCoeff());
    }

    for (int n : {1024, 4096}) {
        const Matrix A = random_matrix(n, 4u);
        Vector x = Vector::LinSpaced(n, -1.0, 1.0), y1, y2;
        const double ts =
            time_best_of(5, [&] { kernels::matvec_serial(A, x, y1); });
        const double tp = time_best_of(5, [&] { kernels::matvec(A, x, y2); });
        report_row("matvec", n, ts, tp, (y1 - y2).cwiseAbs().maxCoeff());
    }

    for (int nb : {512, 2048}) {
        std::vector<std::array<double, 2>> pts(nb);
        for (int k = 0; k < nb; ++k)
            pts[k] = {std::cos(2.0 * M_PI * k / nb), std::sin(2.0 * M_PI * k / nb)};
        std::vector<double> ds(nb, 2.0 * M_PI / nb);
        auto kernel = [](double r) { return 1.0 / (0.1 + r); };
        Matrix W1, W2;
        const double ts = time_best_of(
            3, [&] { kernels::fill_pair_weights_serial(pts, ds, kernel, W1); });
        const double tp = time_best_of(
            3, [&] { kernels::fill_pair_weights(pts, ds, kernel, W2); });
        report_row("fill_pair_weights", nb, ts, tp,
                   (W1 - W2).cwiseAbs().maxCoeff());
    }

    for (int n : {1024, 2048}) {
        const Matrix A = random_matrix(n, 5u);
        const Matrix B = random_matrix(n, 6u);
        kernels::EntryScan s1, s2;
        const double ts = time_best_of(5, [&] { s1 = kernels::min_entry_serial(A); });
        const double tp = time_best_of(5, [&] { s2 = kernels::min_entry(A); });
        report_row("min_entry", n, ts, tp,
                   std::abs(s1.value - s2.value) +
                       std::abs(s1.i - s2.i) + std::abs(s1.j - s2.j));
        kernels::EntryScan g1, g2;
        const double gs =
            time_best_of(5, [&] { g1 = kernels::max_gap_serial(A, B); });
        const double gp = time_best_of(5, [&] { g2 = kernels::max_gap(A, B); });
        report_row("max_gap", n, gs, gp,
                   std::abs(g1.value - g2.value) +
                       std::abs(g1.i - g2.i) + std::abs(g1.j - g2.j));
    }
    return 0;
}

// Times each OpenMP kernel against its serial reference on design-sized
// workloads and reports the speedup. Results must agree bit for bit; the
// benchmark aborts if they ever diverge.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "designlift/design.hpp"
#include "designlift/kernels.hpp"
#include "designlift/parallel.hpp"
#include "designlift/theory.hpp"

using namespace designlift;
using clock_type = std::chrono::steady_clock;

namespace {

template <class F>
double time_best_of(int reps, F&& f) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = clock_type::now();
        f();
        best = std::min(best, std::chrono::duration<double>(clock_type::now() - t0).count());
    }
    return best;
}

void report(const char* name, double serial_s, double parallel_s, double divergence) {
    if (divergence != 0.0) {
        std::fprintf(stderr, "%s: serial and parallel kernels diverged (%.3e)\n", name,
                     divergence);
        std::exit(1);
    }
    std::printf("%-28s serial %8.2f ms   parallel %8.2f ms   speedup %.2fx\n", name,
                serial_s * 1e3, parallel_s * 1e3, serial_s / parallel_s);
}

}  // namespace

int main(int argc, char** argv) {
    const int reps = argc > 1 ? std::atoi(argv[1]) : 3;
    std::printf("kernel benchmark, %d threads, best of %d\n", max_threads(), reps);

    const Design d = stabilizer_design(3);  // 1080 states in dimension 8

    Matrix cols;
    {
        const double ts =
            time_best_of(reps, [&] { cols = kernels::tensor_power_columns_serial(d.vectors, 3); });
        Matrix par;
        const double tp = time_best_of(reps, [&] { par = kernels::tensor_power_columns(d.vectors, 3); });
        report("tensor_power_columns t=3", ts, tp, (par - cols).norm());
    }

    {
        Matrix gs, gp;
        const double ts = time_best_of(reps, [&] { gs = kernels::weighted_gram_serial(cols, d.weights); });
        const double tp = time_best_of(reps, [&] { gp = kernels::weighted_gram(cols, d.weights); });
        report("weighted_gram 512x1080", ts, tp, (gp - gs).norm());
    }

    {
        Rng rng(1);
        Vector v(cols.rows());
        for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.cnormal();
        Vector ys, yp;
        double ts = 0, tp = 0;
        ts = time_best_of(reps, [&] {
            for (int it = 0; it < 50; ++it) ys = kernels::weighted_gram_apply_serial(cols, d.weights, v);
        });
        tp = time_best_of(reps, [&] {
            for (int it = 0; it < 50; ++it) yp = kernels::weighted_gram_apply(cols, d.weights, v);
        });
        report("moment apply x50", ts, tp, (yp - ys).norm());
    }

    {
        Rng rng(2);
        Matrix zm(8, 8);
        for (Eigen::Index j = 0; j < 8; ++j)
            for (Eigen::Index i = 0; i < 8; ++i) zm(i, j) = rng.cnormal();
        const Matrix z = 0.5 * (zm + zm.adjoint());
        RealVector fs, fp;
        const double ts = time_best_of(reps, [&] {
            for (int it = 0; it < 200; ++it) fs = kernels::quadratic_forms_serial(d.vectors, z);
        });
        const double tp = time_best_of(reps, [&] {
            for (int it = 0; it < 200; ++it) fp = kernels::quadratic_forms(d.vectors, z);
        });
        report("quadratic_forms x200", ts, tp, (fp - fs).norm());
    }

    {
        Rng rng(3);
        RealVector y(static_cast<Eigen::Index>(d.size()));
        for (Eigen::Index j = 0; j < y.size(); ++j) y(j) = rng.normal();
        Matrix ms, mp;
        const double ts = time_best_of(reps, [&] {
            for (int it = 0; it < 200; ++it) ms = kernels::rank_one_accumulate_serial(d.vectors, y);
        });
        const double tp = time_best_of(reps, [&] {
            for (int it = 0; it < 200; ++it) mp = kernels::rank_one_accumulate(d.vectors, y);
        });
        report("rank_one_accumulate x200", ts, tp, (mp - ms).norm());
    }

    {
        // end-to-end Monte-Carlo loop: parallel over trials inside wm_estimate
        WmReport one_thread, many_threads;
        const int before = max_threads();
        set_threads(1);
        const double ts = time_best_of(reps, [&] { one_thread = wm_estimate(d, 100, 200, 9, 1, 0.5); });
        set_threads(before);
        const double tp = time_best_of(reps, [&] { many_threads = wm_estimate(d, 100, 200, 9, 1, 0.5); });
        report("wm_estimate 200 trials", ts, tp,
               std::abs(one_thread.h_norm_mean - many_threads.h_norm_mean));
    }

    return 0;
}

#include "robopf/kernels.hpp"
#include "robopf/model.hpp"
#include "robopf/splitmix64.hpp"

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace robopf;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::vector<double> random_tableau(int rows, int w, uint64_t seed) {
    SplitMix64 rng{seed};
    std::vector<double> t(static_cast<size_t>(rows) * w);
    for (double& v : t) v = rng.next_unit() * 2.0 - 1.0;
    return t;
}

// scale the pivot row like the solver does before elimination
void prep_pivot(std::vector<double>& t, int w, int r, int q) {
    double* prow = t.data() + static_cast<size_t>(r) * w;
    if (prow[q] == 0.0) prow[q] = 1.0;
    const double inv = 1.0 / prow[q];
    for (int c = 0; c < w; ++c) prow[c] *= inv;
    prow[q] = 1.0;
}

// times both kernels on identical inputs and demands bit-identical output
bool bench_kernel(int rows, int w, int reps) {
    const std::vector<double> original = random_tableau(rows, w, 1234);
    std::vector<double> ts, tp;
    double serial_ms = 0.0, parallel_ms = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
        const int r = rep % rows;
        const int q = (rep * 13 + 1) % (w - 1);
        ts = original;
        prep_pivot(ts, w, r, q);
        tp = ts;
        auto t0 = Clock::now();
        eliminate_column_serial(ts.data(), rows, w, r, q);
        serial_ms += ms_since(t0);
        t0 = Clock::now();
        eliminate_column_parallel(tp.data(), rows, w, r, q);
        parallel_ms += ms_since(t0);
        if (std::memcmp(ts.data(), tp.data(), ts.size() * sizeof(double)) != 0) {
            std::printf("MISMATCH at %dx%d rep %d\n", rows, w, rep);
            return false;
        }
    }
    std::printf("kernel %5d x %5d  reps %2d  serial %8.2f ms  parallel %8.2f ms  speedup %.2fx\n",
                rows, w, reps, serial_ms, parallel_ms,
                parallel_ms > 0.0 ? serial_ms / parallel_ms : 0.0);
    return true;
}

OptModel synthetic_lp(int m, int n, uint64_t seed) {
    OptModel lp;
    SplitMix64 rng{seed};
    for (int j = 0; j < n; ++j)
        lp.add_var("x" + std::to_string(j), 0.0, kInf, 0.1 + rng.next_unit());
    for (int i = 0; i < m; ++i) {
        LinExpr e;
        double at_ones = 0.0;
        for (int j = 0; j < n; ++j) {
            const double c = rng.next_unit() * 2.0 - 0.5;
            e.add(j, c);
            at_ones += c;
        }
        // x = 1 stays strictly feasible
        lp.add_row("r" + std::to_string(i), e, RowSense::le, at_ones + 1.0 + 3.0 * rng.next_unit());
    }
    LinExpr cover;
    for (int j = 0; j < n; ++j) cover.add(j, 1.0);
    lp.add_row("cover", cover, RowSense::ge, 0.25 * n);
    return lp;
}

bool bench_lp(int m, int n) {
    const OptModel lp = synthetic_lp(m, n, 99);
    SolverOptions serial, parallel;
    serial.parallel_pivot = false;
    parallel.parallel_pivot = true;
    auto t0 = Clock::now();
    const Solution a = solve_lp(lp, serial);
    const double serial_ms = ms_since(t0);
    t0 = Clock::now();
    const Solution b = solve_lp(lp, parallel);
    const double parallel_ms = ms_since(t0);
    if (a.status != b.status || a.objective != b.objective || a.iterations != b.iterations) {
        std::printf("LP MISMATCH: %.17g vs %.17g\n", a.objective, b.objective);
        return false;
    }
    std::printf("lp     %5d x %5d  iters %ld  serial %8.2f ms  parallel %8.2f ms  speedup %.2fx\n",
                m, n, a.iterations, serial_ms, parallel_ms,
                parallel_ms > 0.0 ? serial_ms / parallel_ms : 0.0);
    return true;
}

} // namespace

int main(int argc, char** argv) {
    bool smoke = false;
    for (int i = 1; i < argc; ++i)
        if (std::string(argv[i]) == "--smoke") smoke = true;
#ifdef _OPENMP
    std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
    std::printf("openmp: compiled out (serial and parallel kernels identical)\n");
#endif
    bool ok = true;
    if (smoke) {
        ok &= bench_kernel(80, 160, 5);
        ok &= bench_lp(40, 60);
    } else {
        ok &= bench_kernel(200, 400, 10);
        ok &= bench_kernel(400, 900, 10);
        ok &= bench_kernel(900, 2000, 10);
        ok &= bench_lp(150, 220);
        ok &= bench_lp(300, 420);
    }
    return ok ? 0 : 1;
}

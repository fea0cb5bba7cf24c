// Serial reference kernels against their OpenMP variants, plus whole-solve timings.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "xva/kernels.hpp"
#include "xva/lattice.hpp"
#include "xva/pde.hpp"

using namespace xva;

namespace {

template <class F>
double best_of(int reps, F fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        auto t0 = std::chrono::steady_clock::now();
        fn();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

void report(const char* name, double serial, double par, bool same) {
    std::printf("%-28s serial %9.3f ms  omp %9.3f ms  speedup %5.2fx  %s\n", name, 1e3 * serial, 1e3 * par,
                serial / par, same ? "identical" : "MISMATCH");
}

}  // namespace

int main() {
    std::printf("threads: %d\n", omp_get_max_threads());
    const MarketModel m = benchmark_model();
    std::mt19937_64 g(1);
    std::uniform_real_distribution<double> u(-1, 1);

    const int n = 1 << 20;
    std::vector<double> a(n), z(n), v(n), o1(n), o2(n);
    for (int i = 0; i < n; ++i) a[i] = u(g), z[i] = u(g), v[i] = u(g);
    double ts = best_of(5, [&] { kernels::driver_row_serial(m, Side::seller, 0, a.data(), z.data(), v.data(), o1.data(), n); });
    double tp = best_of(5, [&] { kernels::driver_row_omp(m, Side::seller, 0, a.data(), z.data(), v.data(), o2.data(), n); });
    report("driver_row (1M nodes)", ts, tp, o1 == o2);

    std::pair<double, int> r1, r2;
    ts = best_of(5, [&] { r1 = kernels::max_abs_diff_serial(a.data(), z.data(), n); });
    tp = best_of(5, [&] { r2 = kernels::max_abs_diff_omp(a.data(), z.data(), n); });
    report("max_abs_diff (1M)", ts, tp, r1 == r2);

    const int cnt = 20000;
    std::vector<double> next(cnt + 1), vh(cnt), zh(cnt), u1(cnt), z1(cnt), u2(cnt), z2(cnt);
    for (int j = 0; j <= cnt; ++j) next[j] = 0.02 * u(g);
    for (int j = 0; j < cnt; ++j) vh[j] = 0.1 + 0.1 * u(g), zh[j] = 0.05 * u(g);
    kernels::LatticeStepInput in{&m, Side::seller, Level::xva, 0.5, 1e-4, next.data(), vh.data(), zh.data(), cnt, 1e-12, 200};
    ts = best_of(5, [&] { kernels::lattice_step_serial(in, u1.data(), z1.data()); });
    tp = best_of(5, [&] { kernels::lattice_step_omp(in, u2.data(), z2.data()); });
    report("lattice_step (20k nodes)", ts, tp, u1 == u2 && z1 == z2);

    ClaimSpec call;
    LatticeOptions lser, lpar;
    lpar.parallel = true;
    BandResult b1, b2;
    ts = best_of(2, [&] { b1 = band(m, call, 4000, lser); });
    tp = best_of(2, [&] { b2 = band(m, call, 4000, lpar); });
    report("band, 4000 steps", ts, tp, b1.seller == b2.seller && b1.buyer == b2.buyer);

    PdeOptions pser, ppar;
    ppar.parallel = true;
    const auto grid = PdeGrid::make(m, call, 1600, 400);
    std::vector<double> s1, s2;
    ts = best_of(2, [&] { s1 = solve(m, call, grid, pser).u_seller; });
    tp = best_of(2, [&] { s2 = solve(m, call, grid, ppar).u_seller; });
    report("pde solve 1600x400", ts, tp, s1 == s2);
    return 0;
}

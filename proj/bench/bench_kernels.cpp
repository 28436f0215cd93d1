// Serial vs OpenMP kernel timings: multiplier application, reductions,
// alias-free products and a full flux evaluation.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "torusflux/fields.hpp"
#include "torusflux/flux.hpp"
#include "torusflux/kernels.hpp"
#include "torusflux/partition.hpp"
#include "torusflux/spectral_ops.hpp"

using namespace torusflux;
using kernels::cplx;

namespace {

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

template <typename F>
double time_ms(int reps, F&& fn) {
    fn(); // warm up
    const double t0 = now_ms();
    for (int r = 0; r < reps; ++r) fn();
    return (now_ms() - t0) / reps;
}

void row(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-32s %10.3f ms %10.3f ms %8.2fx\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms);
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (no OpenMP)\n");
#endif
    std::printf("%-32s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

    const std::size_t n = 1 << 22;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<cplx> a(n), b(n), dst(n);
    std::vector<double> mult(n), x(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = cplx{dist(rng), dist(rng)};
        b[i] = cplx{dist(rng), dist(rng)};
        mult[i] = dist(rng);
        x[i] = dist(rng);
    }

    row("apply_multiplier (4M)",
        time_ms(5, [&] { kernels::apply_multiplier_serial(dst, a, mult); }),
        time_ms(5, [&] { kernels::apply_multiplier(dst, a, mult); }));
    row("sum_abs2 (4M)", time_ms(5, [&] { (void)kernels::sum_abs2_serial(a); }),
        time_ms(5, [&] { (void)kernels::sum_abs2(a); }));
    row("dot_re (4M)", time_ms(5, [&] { (void)kernels::dot_re_serial(a, b); }),
        time_ms(5, [&] { (void)kernels::dot_re(a, b); }));
    row("lp_sum p=3 (4M)", time_ms(3, [&] { (void)kernels::lp_sum_serial(x, 3.0); }),
        time_ms(3, [&] { (void)kernels::lp_sum(x, 3.0); }));

    // assembled pipelines (FFT work is shared; the pointwise stages differ)
    TorusGrid grid(2, 512);
    TorusField v = random_smooth_field(grid, 2.5, 7);
    DyadicPartition part = make_partition(grid);
    const double flux_ms = time_ms(3, [&] { (void)energy_flux_LP(v, 3, part); });
    std::printf("%-32s %13s %10.3f ms\n", "energy_flux_LP n=512 (pipeline)", "-", flux_ms);
    const double prod_ms = time_ms(3, [&] {
        (void)dealiased_product(component(v, 0), component(v, 1));
    });
    std::printf("%-32s %13s %10.3f ms\n", "dealiased_product n=512", "-", prod_ms);
    return 0;
}

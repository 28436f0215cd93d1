#include "torusflux/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#else
static int omp_get_max_threads() { return 1; }
static int omp_get_thread_num() { return 0; }
#endif

namespace torusflux::kernels {

namespace {

// Deterministic parallel reduction: fixed per-thread chunks, partials combined
// in thread order.
template <typename F>
double reduce_chunks(std::size_t n, F&& chunk_sum) {
    int nt = omp_get_max_threads();
    if (nt <= 1 || n < 4096) return chunk_sum(std::size_t{0}, n);
    std::vector<double> partial(static_cast<std::size_t>(nt), 0.0);
#pragma omp parallel num_threads(nt)
    {
        int t = omp_get_thread_num();
        std::size_t lo = n * static_cast<std::size_t>(t) / nt;
        std::size_t hi = n * static_cast<std::size_t>(t + 1) / nt;
        partial[static_cast<std::size_t>(t)] = chunk_sum(lo, hi);
    }
    double s = 0.0;
    for (double v : partial) s += v;
    return s;
}

} // namespace

void apply_multiplier_serial(std::span<cplx> dst, std::span<const cplx> src,
                             std::span<const double> mult) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = src[i] * mult[i];
}

void apply_multiplier(std::span<cplx> dst, std::span<const cplx> src,
                      std::span<const double> mult) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(dst.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) dst[i] = src[i] * mult[i];
}

void scale_serial(std::span<cplx> x, double s) {
    for (auto& v : x) v *= s;
}

void scale(std::span<cplx> x, double s) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) x[i] *= s;
}

void axpy_serial(std::span<cplx> y, double a, std::span<const cplx> x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

void axpy(std::span<cplx> y, double a, std::span<const cplx> x) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(y.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double sum_abs2_serial(std::span<const cplx> x) {
    double s = 0.0;
    for (const auto& v : x) s += v.real() * v.real() + v.imag() * v.imag();
    return s;
}

double sum_abs2(std::span<const cplx> x) {
    return reduce_chunks(x.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i)
            s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
        return s;
    });
}

double dot_re_serial(std::span<const cplx> a, std::span<const cplx> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    return s;
}

double dot_re(std::span<const cplx> a, std::span<const cplx> b) {
    return reduce_chunks(a.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i)
            s += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        return s;
    });
}

double lp_sum_serial(std::span<const double> x, double p) {
    double s = 0.0;
    if (p == 1.0) {
        for (double v : x) s += std::abs(v);
    } else if (p == 2.0) {
        for (double v : x) s += v * v;
    } else {
        for (double v : x) s += std::pow(std::abs(v), p);
    }
    return s;
}

double lp_sum(std::span<const double> x, double p) {
    return reduce_chunks(x.size(), [&](std::size_t lo, std::size_t hi) {
        return lp_sum_serial(x.subspan(lo, hi - lo), p);
    });
}

double lp_sum_vec_serial(std::span<const double> x, std::size_t ncomp, double p) {
    const std::size_t m = x.size() / ncomp;
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double q = 0.0;
        for (std::size_t c = 0; c < ncomp; ++c) {
            double v = x[c * m + i];
            q += v * v;
        }
        s += (p == 2.0) ? q : std::pow(q, 0.5 * p);
    }
    return s;
}

double lp_sum_vec(std::span<const double> x, std::size_t ncomp, double p) {
    const std::size_t m = x.size() / ncomp;
    return reduce_chunks(m, [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            double q = 0.0;
            for (std::size_t c = 0; c < ncomp; ++c) {
                double v = x[c * m + i];
                q += v * v;
            }
            s += (p == 2.0) ? q : std::pow(q, 0.5 * p);
        }
        return s;
    });
}

double max_abs_serial(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

double max_abs(std::span<const double> x) {
    const std::size_t n = x.size();
    int nt = omp_get_max_threads();
    if (nt <= 1 || n < 4096) return max_abs_serial(x);
    std::vector<double> partial(static_cast<std::size_t>(nt), 0.0);
#pragma omp parallel num_threads(nt)
    {
        int t = omp_get_thread_num();
        std::size_t lo = n * static_cast<std::size_t>(t) / nt;
        std::size_t hi = n * static_cast<std::size_t>(t + 1) / nt;
        partial[static_cast<std::size_t>(t)] = max_abs_serial(x.subspan(lo, hi - lo));
    }
    double m = 0.0;
    for (double v : partial) m = std::max(m, v);
    return m;
}

void pointwise_norm(std::span<double> out, std::span<const double> x, std::size_t ncomp) {
    const std::size_t m = out.size();
    if (ncomp == 1) {
        const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(m);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = std::abs(x[i]);
        return;
    }
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(m);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double q = 0.0;
        for (std::size_t c = 0; c < ncomp; ++c) {
            double v = x[c * m + static_cast<std::size_t>(i)];
            q += v * v;
        }
        out[i] = std::sqrt(q);
    }
}

void multiply_serial(std::span<double> dst, std::span<const double> a,
                     std::span<const double> b) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = a[i] * b[i];
}

void multiply(std::span<double> dst, std::span<const double> a, std::span<const double> b) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(dst.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) dst[i] = a[i] * b[i];
}

void accumulate_increment_product(std::span<double> dst, double w,
                                  std::span<const double> a, std::span<const double> ashift,
                                  std::span<const double> b, std::span<const double> bshift) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(dst.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        dst[i] += w * (ashift[i] - a[i]) * (bshift[i] - b[i]);
}

} // namespace torusflux::kernels

#ifndef TORUSFLUX_KERNELS_HPP
#define TORUSFLUX_KERNELS_HPP

#include <complex>
#include <cstddef>
#include <span>

// Data-parallel inner loops. Every kernel has a serial reference used by the
// tests and the benchmark; the OpenMP versions split the range into one chunk
// per thread and combine partial results in thread-index order, so results are
// reproducible run to run at a fixed thread count.

namespace torusflux::kernels {

using cplx = std::complex<double>;

// dst[i] = src[i] * mult[i]
void apply_multiplier(std::span<cplx> dst, std::span<const cplx> src,
                      std::span<const double> mult);
void apply_multiplier_serial(std::span<cplx> dst, std::span<const cplx> src,
                             std::span<const double> mult);

// x[i] *= s
void scale(std::span<cplx> x, double s);
void scale_serial(std::span<cplx> x, double s);

// y[i] += a * x[i]
void axpy(std::span<cplx> y, double a, std::span<const cplx> x);
void axpy_serial(std::span<cplx> y, double a, std::span<const cplx> x);

// sum |x[i]|^2
double sum_abs2(std::span<const cplx> x);
double sum_abs2_serial(std::span<const cplx> x);

// sum Re(a[i] * conj(b[i]))
double dot_re(std::span<const cplx> a, std::span<const cplx> b);
double dot_re_serial(std::span<const cplx> a, std::span<const cplx> b);

// sum |x[i]|^p over real samples
double lp_sum(std::span<const double> x, double p);
double lp_sum_serial(std::span<const double> x, double p);

// sum (sum_c x_c[i]^2)^(p/2) where x packs ncomp contiguous blocks of length m
double lp_sum_vec(std::span<const double> x, std::size_t ncomp, double p);
double lp_sum_vec_serial(std::span<const double> x, std::size_t ncomp, double p);

double max_abs(std::span<const double> x);
double max_abs_serial(std::span<const double> x);

// pointwise magnitude across components: out[i] = sqrt(sum_c x_c[i]^2)
void pointwise_norm(std::span<double> out, std::span<const double> x, std::size_t ncomp);

// dst[i] = a[i] * b[i] on real samples
void multiply(std::span<double> dst, std::span<const double> a, std::span<const double> b);
void multiply_serial(std::span<double> dst, std::span<const double> a, std::span<const double> b);

// dst[i] += w * (a[i] - ashift[i]) * (b[i] - bshift[i]); the commutator ball sum
void accumulate_increment_product(std::span<double> dst, double w,
                                  std::span<const double> a, std::span<const double> ashift,
                                  std::span<const double> b, std::span<const double> bshift);

} // namespace torusflux::kernels

#endif

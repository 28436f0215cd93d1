#ifndef TORUSFLUX_FFT_HPP
#define TORUSFLUX_FFT_HPP

#include <complex>
#include <span>
#include <vector>

namespace torusflux::fft {

using cplx = std::complex<double>;

// Unnormalized c2c transforms on a row-major array of the given shape
// (rank 1..3). forward applies e^{-ik.x}, backward e^{+ik.x}. Out-of-place;
// in == out is handled with a scratch copy. Plans are cached per shape and
// execution is thread-safe.
void forward(std::span<const cplx> in, std::span<cplx> out, std::span<const int> shape);
void backward(std::span<const cplx> in, std::span<cplx> out, std::span<const int> shape);

// Convenience for the isotropic n^dim case.
void forward(std::span<const cplx> in, std::span<cplx> out, int dim, int n);
void backward(std::span<const cplx> in, std::span<cplx> out, int dim, int n);

} // namespace torusflux::fft

#endif

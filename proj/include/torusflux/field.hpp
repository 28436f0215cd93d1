#ifndef TORUSFLUX_FIELD_HPP
#define TORUSFLUX_FIELD_HPP

#include <complex>
#include <span>
#include <vector>

#include "torusflux/grid.hpp"

namespace torusflux {

using cplx = std::complex<double>;

// Real scalar/vector field on a TorusGrid together with its spectral
// coefficients. The convention is
//   f(x) = sum_k fhat(k) e^{i k.x},   fhat(k) = n^-dim sum_x f(x) e^{-i k.x},
// so Parseval reads  int |f|^2 dx = (2pi)^dim sum_k |fhat(k)|^2.
//
// Factory functions return fields with both representations synchronized;
// after that a field is immutable and safe to share across threads. The
// *_mut accessors are for builders only: touching one representation
// invalidates the other, and reading a stale representation throws.
class TorusField {
public:
    TorusField(const TorusGrid& grid, int ncomp);

    static TorusField from_physical(const TorusGrid& grid, int ncomp,
                                    std::vector<double> samples);
    static TorusField from_spectral(const TorusGrid& grid, int ncomp,
                                    std::vector<cplx> coeffs);

    const TorusGrid& grid() const { return grid_; }
    int ncomp() const { return ncomp_; }

    std::span<const double> physical(int c) const;
    std::span<const cplx> spectral(int c) const;
    std::span<const double> physical_all() const;
    std::span<const cplx> spectral_all() const;

    std::span<double> physical_mut(int c);
    std::span<cplx> spectral_mut(int c);

    bool physical_valid() const { return phys_valid_; }
    bool spectral_valid() const { return spec_valid_; }

    // Recompute whichever representation is stale (FFT per component).
    void sync();

    // max_k |k . vhat(k)| / max_k |vhat(k)|; 0 for scalar fields
    double divergence_ratio() const;
    bool is_divergence_free(double tol = 1e-10) const { return divergence_ratio() <= tol; }

    double energy() const;          // (1/2) int |f|^2 dx, via Parseval
    double l2_norm() const;         // (int |f|^2 dx)^(1/2)
    double max_abs_physical() const;

private:
    TorusGrid grid_;
    int ncomp_;
    std::vector<double> phys_;
    std::vector<cplx> spec_;
    bool phys_valid_;
    bool spec_valid_;
};

} // namespace torusflux

#endif

#ifndef TORUSFLUX_SPECTRAL_OPS_HPP
#define TORUSFLUX_SPECTRAL_OPS_HPP

#include <array>
#include <vector>

#include "torusflux/field.hpp"

namespace torusflux {

// visit every lattice node of the wavenumber lattice: func(flat_index, k[3])
template <typename F>
void for_each_mode(const TorusGrid& g, F&& func) {
    const int n = g.n();
    const auto& wave = g.wavenumbers();
    if (g.dim() == 2) {
#pragma omp parallel for schedule(static)
        for (int i0 = 0; i0 < n; ++i0) {
            std::array<double, 3> k{static_cast<double>(wave[static_cast<std::size_t>(i0)]), 0.0, 0.0};
            std::size_t base = static_cast<std::size_t>(i0) * static_cast<std::size_t>(n);
            for (int i1 = 0; i1 < n; ++i1) {
                k[1] = wave[static_cast<std::size_t>(i1)];
                func(base + static_cast<std::size_t>(i1), k);
            }
        }
    } else {
#pragma omp parallel for schedule(static)
        for (int i0 = 0; i0 < n; ++i0) {
            std::array<double, 3> k{static_cast<double>(wave[static_cast<std::size_t>(i0)]), 0.0, 0.0};
            for (int i1 = 0; i1 < n; ++i1) {
                k[1] = wave[static_cast<std::size_t>(i1)];
                std::size_t base = (static_cast<std::size_t>(i0) * static_cast<std::size_t>(n) +
                                    static_cast<std::size_t>(i1)) *
                                   static_cast<std::size_t>(n);
                for (int i2 = 0; i2 < n; ++i2) {
                    k[2] = wave[static_cast<std::size_t>(i2)];
                    func(base + static_cast<std::size_t>(i2), k);
                }
            }
        }
    }
}

// spectral differentiation: ik multipliers
TorusField partial_derivative(const TorusField& f, int axis);
TorusField gradient(const TorusField& f);   // scalar -> vector
TorusField divergence(const TorusField& v); // vector -> scalar
TorusField curl(const TorusField& v);       // 3D vector -> vector, 2D vector -> scalar
TorusField leray_project(const TorusField& v);
TorusField velocity_from_vorticity_2d(const TorusField& omega);

// per-component scalar view / reassembly
TorusField component(const TorusField& f, int c);
TorusField assemble(const std::vector<TorusField>& comps);
std::vector<TorusField> jacobian(const TorusField& f); // all d_a f_c as scalars

// f(x - y) via the spectral phase e^{-i k.y}; exact for grid-aligned y
TorusField shift(const TorusField& f, const std::array<double, 3>& y);

// a + s*b
TorusField add_scaled(const TorusField& a, double s, const TorusField& b);
TorusField scaled(const TorusField& f, double s);

// plain product on the collocation grid (componentwise for equal ncomp,
// scalar*vector broadcast otherwise)
TorusField pointwise_product(const TorusField& f, const TorusField& g);

// alias-free product of two scalar fields: evaluated on a 3/2 padded grid,
// then truncated to the original spectral band (Nyquist rows dropped)
TorusField dealiased_product(const TorusField& f, const TorusField& g);

// int sum_c a_c b_c dx via Plancherel; exact for stored spectra
double integral_pairing(const TorusField& a, const TorusField& b);

// zero every coefficient with |k| > grid.dealias_radius()
TorusField dealias(const TorusField& f);
// g(k) ~ nonzero only for |k| < band
bool band_limited_below(const TorusField& f, double band, double tol = 1e-13);

// physical samples on a refined grid (spectral zero-padding), used for L^p
// quadrature of quantities that are not band-limited
struct Oversampled {
    int dim = 0;
    int ncomp = 0;
    int n = 0;             // refined points per axis
    double cell = 0.0;     // quadrature weight per node
    std::vector<double> samples; // ncomp contiguous blocks

    double lp(double p) const;   // (int (sum_c f_c^2)^(p/2) dx)^(1/p); p = inf -> max magnitude
    double max_abs() const;
};

Oversampled oversample(const TorusField& f, int factor = 2);

// spectrum embedding/truncation between isotropic grids
std::vector<cplx> embed_spectrum(const TorusGrid& grid, std::span<const cplx> spec, int nbig);
std::vector<cplx> restrict_spectrum(int dim, int nbig, std::span<const cplx> spec, int nsmall);

} // namespace torusflux

#endif

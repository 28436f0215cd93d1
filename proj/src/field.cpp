#include "torusflux/field.hpp"

#include <cmath>
#include <stdexcept>

#include "torusflux/fft.hpp"
#include "torusflux/kernels.hpp"

namespace torusflux {

TorusField::TorusField(const TorusGrid& grid, int ncomp)
    : grid_(grid),
      ncomp_(ncomp),
      phys_(grid.size() * static_cast<std::size_t>(ncomp), 0.0),
      spec_(grid.size() * static_cast<std::size_t>(ncomp), cplx{0.0, 0.0}),
      phys_valid_(true),
      spec_valid_(true) {
    if (ncomp != 1 && ncomp != grid.dim())
        throw std::invalid_argument("TorusField: ncomp must be 1 or dim");
}

TorusField TorusField::from_physical(const TorusGrid& grid, int ncomp,
                                     std::vector<double> samples) {
    TorusField f(grid, ncomp);
    if (samples.size() != f.phys_.size())
        throw std::invalid_argument("TorusField: sample count mismatch");
    f.phys_ = std::move(samples);
    f.spec_valid_ = false;
    f.sync();
    return f;
}

TorusField TorusField::from_spectral(const TorusGrid& grid, int ncomp,
                                     std::vector<cplx> coeffs) {
    TorusField f(grid, ncomp);
    if (coeffs.size() != f.spec_.size())
        throw std::invalid_argument("TorusField: coefficient count mismatch");
    f.spec_ = std::move(coeffs);
    f.phys_valid_ = false;
    f.sync();
    return f;
}

std::span<const double> TorusField::physical(int c) const {
    if (!phys_valid_) throw std::logic_error("TorusField: stale physical read");
    return std::span<const double>(phys_).subspan(static_cast<std::size_t>(c) * grid_.size(),
                                                  grid_.size());
}

std::span<const cplx> TorusField::spectral(int c) const {
    if (!spec_valid_) throw std::logic_error("TorusField: stale spectral read");
    return std::span<const cplx>(spec_).subspan(static_cast<std::size_t>(c) * grid_.size(),
                                                grid_.size());
}

std::span<const double> TorusField::physical_all() const {
    if (!phys_valid_) throw std::logic_error("TorusField: stale physical read");
    return phys_;
}

std::span<const cplx> TorusField::spectral_all() const {
    if (!spec_valid_) throw std::logic_error("TorusField: stale spectral read");
    return spec_;
}

std::span<double> TorusField::physical_mut(int c) {
    if (!phys_valid_) throw std::logic_error("TorusField: stale physical mutation");
    spec_valid_ = false;
    return std::span<double>(phys_).subspan(static_cast<std::size_t>(c) * grid_.size(),
                                            grid_.size());
}

std::span<cplx> TorusField::spectral_mut(int c) {
    if (!spec_valid_) throw std::logic_error("TorusField: stale spectral mutation");
    phys_valid_ = false;
    return std::span<cplx>(spec_).subspan(static_cast<std::size_t>(c) * grid_.size(),
                                          grid_.size());
}

void TorusField::sync() {
    const std::size_t m = grid_.size();
    if (!spec_valid_) {
        std::vector<cplx> buf(m);
        for (int c = 0; c < ncomp_; ++c) {
            const double* p = phys_.data() + static_cast<std::size_t>(c) * m;
            for (std::size_t i = 0; i < m; ++i) buf[i] = cplx{p[i], 0.0};
            fft::forward(buf, std::span<cplx>(spec_).subspan(static_cast<std::size_t>(c) * m, m),
                         grid_.dim(), grid_.n());
        }
        kernels::scale(spec_, 1.0 / static_cast<double>(m));
        spec_valid_ = true;
    }
    if (!phys_valid_) {
        std::vector<cplx> buf(m);
        for (int c = 0; c < ncomp_; ++c) {
            fft::backward(std::span<const cplx>(spec_).subspan(static_cast<std::size_t>(c) * m, m),
                          buf, grid_.dim(), grid_.n());
            double* p = phys_.data() + static_cast<std::size_t>(c) * m;
            for (std::size_t i = 0; i < m; ++i) p[i] = buf[i].real();
        }
        phys_valid_ = true;
    }
}

double TorusField::divergence_ratio() const {
    if (ncomp_ == 1) return 0.0;
    const std::size_t m = grid_.size();
    const int dim = grid_.dim();
    double max_div = 0.0, max_coef = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        auto idx = grid_.unflatten(i);
        double re = 0.0, im = 0.0;
        for (int a = 0; a < dim; ++a) {
            const cplx v = spec_[static_cast<std::size_t>(a) * m + i];
            const double k = grid_.wavenumber(idx[static_cast<std::size_t>(a)]);
            re += k * v.real();
            im += k * v.imag();
            max_coef = std::max(max_coef, std::abs(v));
        }
        max_div = std::max(max_div, std::hypot(re, im));
    }
    if (max_coef == 0.0) return 0.0;
    return max_div / max_coef;
}

double TorusField::energy() const {
    return 0.5 * grid_.volume() * kernels::sum_abs2(spectral_all());
}

double TorusField::l2_norm() const {
    return std::sqrt(grid_.volume() * kernels::sum_abs2(spectral_all()));
}

double TorusField::max_abs_physical() const { return kernels::max_abs(physical_all()); }

} // namespace torusflux

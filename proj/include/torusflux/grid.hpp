#ifndef TORUSFLUX_GRID_HPP
#define TORUSFLUX_GRID_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace torusflux {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Uniform periodic grid on [0,2pi)^dim with n points per axis, n a power of two.
class TorusGrid {
public:
    TorusGrid(int dim, int n) : dim_(dim), n_(n) {
        if (dim != 2 && dim != 3)
            throw std::invalid_argument("TorusGrid: dim must be 2 or 3");
        if (n < 16 || (n & (n - 1)) != 0)
            throw std::invalid_argument("TorusGrid: n must be a power of two >= 16");
        size_ = 1;
        for (int a = 0; a < dim; ++a) size_ *= static_cast<std::size_t>(n);
        wave_.resize(n);
        for (int i = 0; i < n; ++i) wave_[i] = (i < n / 2) ? i : i - n;
    }

    int dim() const { return dim_; }
    int n() const { return n_; }
    std::size_t size() const { return size_; }
    double spacing() const { return kTwoPi / n_; }
    // quadrature weight of one node
    double cell_volume() const {
        double w = 1.0;
        for (int a = 0; a < dim_; ++a) w *= spacing();
        return w;
    }
    double volume() const {
        double v = 1.0;
        for (int a = 0; a < dim_; ++a) v *= kTwoPi;
        return v;
    }
    // integer wavenumber of FFT index i along one axis, in [-n/2, n/2)
    int wavenumber(int i) const { return wave_[i]; }
    const std::vector<int>& wavenumbers() const { return wave_; }

    // radial dealias cutoff of the 2/3 rule; fields live in |k| <= this band
    double dealias_radius() const { return n_ / 3.0; }

    // decompose a flat row-major index (last axis fastest) into per-axis indices
    std::array<int, 3> unflatten(std::size_t idx) const {
        std::array<int, 3> out{0, 0, 0};
        for (int a = dim_ - 1; a >= 0; --a) {
            out[a] = static_cast<int>(idx % n_);
            idx /= n_;
        }
        return out;
    }

    bool operator==(const TorusGrid& o) const { return dim_ == o.dim_ && n_ == o.n_; }
    bool operator!=(const TorusGrid& o) const { return !(*this == o); }

private:
    int dim_;
    int n_;
    std::size_t size_;
    std::vector<int> wave_;
};

} // namespace torusflux

#endif

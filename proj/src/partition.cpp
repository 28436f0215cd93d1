#include "torusflux/partition.hpp"

#include <cmath>
#include <stdexcept>

#include "torusflux/kernels.hpp"

namespace torusflux {

namespace {

double bump(double t) {
    if (std::abs(t) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - t * t));
}

// 16-point Gauss-Legendre nodes/weights on [-1,1]
constexpr int kGL = 16;
const double gl_x[kGL] = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318, -0.7554044083550030,
    -0.6178762444026438, -0.4580167776572274, -0.2816035507792589, -0.0950125098376374,
    0.0950125098376374,  0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,  0.9894009349916499};
const double gl_w[kGL] = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928, 0.1246289712555339,
    0.1495959888165767, 0.1691565193950025, 0.1826034150449236, 0.1894506104550685,
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

double gl_integrate(double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < kGL; ++i) s += gl_w[i] * bump(c + h * gl_x[i]);
    return s * h;
}

// Cumulative integral of the bump on [-1,1], tabulated once on a uniform
// mesh; arbitrary arguments finish with one Gauss-Legendre panel.
struct StepTable {
    static constexpr int M = 512;
    double cum[M + 1];
    double total;
    StepTable() {
        cum[0] = 0.0;
        for (int i = 0; i < M; ++i) {
            double a = -1.0 + 2.0 * i / M;
            double b = -1.0 + 2.0 * (i + 1) / M;
            cum[i + 1] = cum[i] + gl_integrate(a, b);
        }
        total = cum[M];
    }
    // H(u) = int_{-1}^{u} bump / int_{-1}^{1} bump, in [0,1]
    double eval(double u) const {
        if (u <= -1.0) return 0.0;
        if (u >= 1.0) return 1.0;
        double s = (u + 1.0) * 0.5 * M;
        int i = static_cast<int>(s);
        if (i >= M) i = M - 1;
        double a = -1.0 + 2.0 * i / M;
        return (cum[i] + gl_integrate(a, u)) / total;
    }
};

const StepTable& step_table() {
    static const StepTable table;
    return table;
}

} // namespace

double rho_profile(double r) {
    // 1 on [0, 3/4], smooth descent, 0 from 4/3 on
    constexpr double r0 = 0.75;
    constexpr double r1 = 4.0 / 3.0;
    if (r <= r0) return 1.0;
    if (r >= r1) return 0.0;
    const double t = (2.0 * r - (r0 + r1)) / (r1 - r0);
    return 1.0 - step_table().eval(t);
}

double phi_profile(double r) { return rho_profile(0.5 * r) - rho_profile(r); }

DyadicPartition::DyadicPartition(const TorusGrid& grid) : grid_(grid) {
    // largest j whose shell 2^j [3/4, 8/3] sits inside the dealias band
    const double band = grid.dealias_radius();
    int j = 0;
    while (std::ldexp(8.0 / 3.0, j + 1) <= band) ++j;
    if (std::ldexp(8.0 / 3.0, 0) > band)
        throw std::invalid_argument("make_partition: insufficient resolution");
    j_max_ = j;
}

DyadicPartition make_partition(const TorusGrid& grid) {
    if (grid.n() < 16) throw std::invalid_argument("make_partition: insufficient resolution");
    return DyadicPartition(grid);
}

double DyadicPartition::block_multiplier(int j, double r) const {
    if (j < -1 || j > j_max_) throw std::out_of_range("dyadic block index out of range");
    if (j == -1) return rho_profile(r);
    return phi_profile(std::ldexp(r, -j));
}

double DyadicPartition::lowpass_multiplier(int N, double r) const {
    if (N < 0 || N > j_max_ + 1) throw std::out_of_range("low-pass index out of range");
    return rho_profile(std::ldexp(r, -N));
}

double DyadicPartition::partition_sum(double r, int jterms) const {
    double s = rho_profile(r);
    for (int j = 0; j <= jterms; ++j) s += phi_profile(std::ldexp(r, -j));
    return s;
}

namespace {

template <typename F>
std::vector<double> radial_array(const TorusGrid& grid, F&& func) {
    std::vector<double> out(grid.size());
    const int n = grid.n();
    const int dim = grid.dim();
    const auto& wave = grid.wavenumbers();
    if (dim == 2) {
#pragma omp parallel for schedule(static)
        for (int i0 = 0; i0 < n; ++i0) {
            const double k0 = wave[static_cast<std::size_t>(i0)];
            double* row = out.data() + static_cast<std::size_t>(i0) * n;
            for (int i1 = 0; i1 < n; ++i1) {
                const double k1 = wave[static_cast<std::size_t>(i1)];
                row[i1] = func(std::sqrt(k0 * k0 + k1 * k1));
            }
        }
    } else {
#pragma omp parallel for schedule(static)
        for (int i0 = 0; i0 < n; ++i0) {
            const double k0 = wave[static_cast<std::size_t>(i0)];
            for (int i1 = 0; i1 < n; ++i1) {
                const double k1 = wave[static_cast<std::size_t>(i1)];
                double* row = out.data() +
                              (static_cast<std::size_t>(i0) * n + static_cast<std::size_t>(i1)) * n;
                for (int i2 = 0; i2 < n; ++i2) {
                    const double k2 = wave[static_cast<std::size_t>(i2)];
                    row[i2] = func(std::sqrt(k0 * k0 + k1 * k1 + k2 * k2));
                }
            }
        }
    }
    return out;
}

TorusField apply_multiplier_field(const TorusField& f, const std::vector<double>& mult) {
    const std::size_t m = f.grid().size();
    std::vector<cplx> out(m * static_cast<std::size_t>(f.ncomp()));
    for (int c = 0; c < f.ncomp(); ++c)
        kernels::apply_multiplier(std::span<cplx>(out).subspan(static_cast<std::size_t>(c) * m, m),
                                  f.spectral(c), mult);
    return TorusField::from_spectral(f.grid(), f.ncomp(), std::move(out));
}

} // namespace

std::vector<double> DyadicPartition::block_multiplier_array(int j) const {
    if (j < -1 || j > j_max_) throw std::out_of_range("dyadic block index out of range");
    return radial_array(grid_, [this, j](double r) { return block_multiplier(j, r); });
}

std::vector<double> DyadicPartition::lowpass_multiplier_array(int N) const {
    if (N < 0 || N > j_max_ + 1) throw std::out_of_range("low-pass index out of range");
    return radial_array(grid_, [this, N](double r) { return lowpass_multiplier(N, r); });
}

std::vector<double> DyadicPartition::lowpass_squared_multiplier_array(int N) const {
    if (N < 0 || N > j_max_ + 1) throw std::out_of_range("low-pass index out of range");
    return radial_array(grid_, [this, N](double r) {
        const double v = lowpass_multiplier(N, r);
        return v * v;
    });
}

std::vector<double> DyadicPartition::homogeneous_multiplier_array(int j) const {
    return radial_array(grid_, [j](double r) { return phi_profile(std::ldexp(r, -j)); });
}

TorusField DyadicPartition::block(const TorusField& f, int j) const {
    return apply_multiplier_field(f, block_multiplier_array(j));
}

TorusField DyadicPartition::low_pass(const TorusField& f, int N) const {
    return apply_multiplier_field(f, lowpass_multiplier_array(N));
}

TorusField DyadicPartition::low_pass_squared(const TorusField& f, int N) const {
    return apply_multiplier_field(f, lowpass_squared_multiplier_array(N));
}

TorusField DyadicPartition::homogeneous_block(const TorusField& f, int j) const {
    return apply_multiplier_field(f, homogeneous_multiplier_array(j));
}

DyadicDecomposition decompose(const TorusField& f, const DyadicPartition& part) {
    DyadicDecomposition d;
    d.partition = &part;
    d.blocks.reserve(static_cast<std::size_t>(part.j_max() + 2));
    for (int j = -1; j <= part.j_max(); ++j) d.blocks.push_back(part.block(f, j));
    return d;
}

} // namespace torusflux

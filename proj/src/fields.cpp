#include "torusflux/fields.hpp"

#include <cmath>
#include <stdexcept>

#include "torusflux/norms.hpp"
#include "torusflux/spectral_ops.hpp"

namespace torusflux {

namespace {

std::array<double, 3> node_coords(const TorusGrid& g, std::size_t i) {
    auto idx = g.unflatten(i);
    std::array<double, 3> x{0, 0, 0};
    for (int a = 0; a < g.dim(); ++a) x[static_cast<std::size_t>(a)] = idx[static_cast<std::size_t>(a)] * g.spacing();
    return x;
}

// true when k is the canonical representative of the pair {k, -k}
bool canonical_mode(const std::array<int, 3>& k, int dim) {
    for (int a = 0; a < dim; ++a) {
        if (k[static_cast<std::size_t>(a)] > 0) return true;
        if (k[static_cast<std::size_t>(a)] < 0) return false;
    }
    return false; // zero mode handled separately
}

std::uint64_t mode_key(std::uint64_t seed, const TorusGrid& g, std::size_t flat) {
    return seed ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(flat) + 0x243F6A8885A308D3ULL)) ^
           (static_cast<std::uint64_t>(g.n()) << 32);
}

// random complex amplitude vector orthogonal to k, unit magnitude per component scale
void random_divfree_coeff(SplitMix64& rng, const std::array<double, 3>& k, int dim,
                          std::array<cplx, 3>& out) {
    const double phase = kTwoPi * rng.uniform();
    const cplx c{std::cos(phase), std::sin(phase)};
    if (dim == 2) {
        const double kn = std::hypot(k[0], k[1]);
        const double sgn = rng.uniform() < 0.5 ? -1.0 : 1.0;
        out[0] = sgn * c * (-k[1] / kn);
        out[1] = sgn * c * (k[0] / kn);
        out[2] = cplx{0.0, 0.0};
        return;
    }
    const double kn2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    std::array<double, 3> u{0, 0, 0};
    double un = 0.0;
    do {
        for (int a = 0; a < 3; ++a) u[static_cast<std::size_t>(a)] = 2.0 * rng.uniform() - 1.0;
        const double udk = (u[0] * k[0] + u[1] * k[1] + u[2] * k[2]) / kn2;
        for (int a = 0; a < 3; ++a) u[static_cast<std::size_t>(a)] -= udk * k[static_cast<std::size_t>(a)];
        un = std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
    } while (un < 1e-8);
    for (int a = 0; a < 3; ++a) out[static_cast<std::size_t>(a)] = c * (u[static_cast<std::size_t>(a)] / un);
}

// assemble a conjugate-symmetric divergence-free spectrum from a radial
// amplitude law evaluated at each canonical mode
template <typename AmpF>
std::vector<cplx> random_divfree_spectrum(const TorusGrid& g, std::uint64_t seed, AmpF&& amp) {
    const std::size_t m = g.size();
    const int dim = g.dim();
    std::vector<cplx> spec(m * static_cast<std::size_t>(dim), cplx{0.0, 0.0});
    const int n = g.n();
    for (std::size_t i = 0; i < m; ++i) {
        auto idx = g.unflatten(i);
        std::array<int, 3> k{0, 0, 0};
        for (int a = 0; a < dim; ++a) k[static_cast<std::size_t>(a)] = g.wavenumber(idx[static_cast<std::size_t>(a)]);
        if (!canonical_mode(k, dim)) continue;
        const double kr = std::sqrt(static_cast<double>(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]));
        const double a0 = amp(kr);
        if (a0 == 0.0) continue;
        SplitMix64 rng(mode_key(seed, g, i));
        std::array<double, 3> kd{static_cast<double>(k[0]), static_cast<double>(k[1]),
                                 static_cast<double>(k[2])};
        std::array<cplx, 3> coef;
        random_divfree_coeff(rng, kd, dim, coef);
        // conjugate index of -k
        std::size_t iconj = 0;
        for (int a = 0; a < dim; ++a) {
            int kk = -k[static_cast<std::size_t>(a)];
            int ii = kk >= 0 ? kk : kk + n;
            iconj = iconj * static_cast<std::size_t>(n) + static_cast<std::size_t>(ii);
        }
        for (int c = 0; c < dim; ++c) {
            spec[static_cast<std::size_t>(c) * m + i] = 0.5 * a0 * coef[static_cast<std::size_t>(c)];
            spec[static_cast<std::size_t>(c) * m + iconj] = 0.5 * a0 * std::conj(coef[static_cast<std::size_t>(c)]);
        }
    }
    return spec;
}

} // namespace

TorusField taylor_green_2d(const TorusGrid& grid) {
    if (grid.dim() != 2) throw std::invalid_argument("taylor_green_2d: dim 2 required");
    const std::size_t m = grid.size();
    std::vector<double> phys(2 * m);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(m); ++i) {
        auto x = node_coords(grid, static_cast<std::size_t>(i));
        phys[static_cast<std::size_t>(i)] = std::sin(x[0]) * std::cos(x[1]);
        phys[m + static_cast<std::size_t>(i)] = -std::cos(x[0]) * std::sin(x[1]);
    }
    return TorusField::from_physical(grid, 2, std::move(phys));
}

TorusField abc_flow(const TorusGrid& grid, double A, double B, double C) {
    if (grid.dim() != 3) throw std::invalid_argument("abc_flow: dim 3 required");
    const std::size_t m = grid.size();
    std::vector<double> phys(3 * m);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(m); ++i) {
        auto x = node_coords(grid, static_cast<std::size_t>(i));
        phys[static_cast<std::size_t>(i)] = A * std::sin(x[2]) + C * std::cos(x[1]);
        phys[m + static_cast<std::size_t>(i)] = B * std::sin(x[0]) + A * std::cos(x[2]);
        phys[2 * m + static_cast<std::size_t>(i)] = C * std::sin(x[1]) + B * std::cos(x[0]);
    }
    return TorusField::from_physical(grid, 3, std::move(phys));
}

TorusField single_mode(const TorusGrid& grid, const std::array<int, 3>& k, double amplitude,
                       double phase) {
    const int dim = grid.dim();
    double kn2 = 0.0;
    for (int a = 0; a < dim; ++a) kn2 += static_cast<double>(k[static_cast<std::size_t>(a)]) * k[static_cast<std::size_t>(a)];
    if (kn2 == 0.0) throw std::invalid_argument("single_mode: zero wavevector");
    std::array<double, 3> dir{0, 0, 0};
    if (dim == 2) {
        const double kn = std::sqrt(kn2);
        dir = {-k[1] / kn, k[0] / kn, 0.0};
    } else {
        // any unit vector orthogonal to k
        std::array<double, 3> u = (std::abs(k[0]) <= std::abs(k[1]) && std::abs(k[0]) <= std::abs(k[2]))
                                      ? std::array<double, 3>{1, 0, 0}
                                  : (std::abs(k[1]) <= std::abs(k[2]))
                                      ? std::array<double, 3>{0, 1, 0}
                                      : std::array<double, 3>{0, 0, 1};
        const double udk = (u[0] * k[0] + u[1] * k[1] + u[2] * k[2]) / kn2;
        for (int a = 0; a < 3; ++a) u[static_cast<std::size_t>(a)] -= udk * k[static_cast<std::size_t>(a)];
        const double un = std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
        for (int a = 0; a < 3; ++a) dir[static_cast<std::size_t>(a)] = u[static_cast<std::size_t>(a)] / un;
    }
    const std::size_t m = grid.size();
    std::vector<double> phys(static_cast<std::size_t>(dim) * m);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(m); ++i) {
        auto x = node_coords(grid, static_cast<std::size_t>(i));
        const double arg = k[0] * x[0] + k[1] * x[1] + k[2] * x[2] + phase;
        const double v = amplitude * std::cos(arg);
        for (int c = 0; c < dim; ++c)
            phys[static_cast<std::size_t>(c) * m + static_cast<std::size_t>(i)] = dir[static_cast<std::size_t>(c)] * v;
    }
    return TorusField::from_physical(grid, dim, std::move(phys));
}

GeneratedField lacunary_field(const TorusGrid& grid, std::span<const double> planted_dj,
                              double alpha, double p_target, std::uint64_t seed,
                              const DyadicPartition& part) {
    if (p_target < 2.0) throw std::domain_error("lacunary_field: p_target must be >= 2");
    const int jn = static_cast<int>(planted_dj.size());
    if (jn > part.j_max())
        throw std::invalid_argument("lacunary_field: planted sequence longer than resolved scales");
    const std::size_t m = grid.size();
    const int dim = grid.dim();

    std::vector<cplx> total(m * static_cast<std::size_t>(dim), cplx{0.0, 0.0});
    GeneratorCertificate cert;
    cert.kind = "lacunary";
    cert.seed = seed;
    cert.planted_alpha = alpha;
    cert.planted_p = p_target;
    cert.planted_dj.assign(planted_dj.begin(), planted_dj.end());

    for (int j = 1; j <= jn; ++j) {
        const double target = planted_dj[static_cast<std::size_t>(j - 1)];
        if (target == 0.0) continue;
        const double rlo = (4.0 / 3.0) * std::ldexp(1.0, j);
        const double rhi = 1.5 * std::ldexp(1.0, j);
        auto spec = random_divfree_spectrum(grid, seed + static_cast<std::uint64_t>(j), [&](double kr) {
            return (kr >= rlo && kr <= rhi) ? 1.0 : 0.0;
        });
        bool any = false;
        for (const auto& v : spec)
            if (v != cplx{0.0, 0.0}) { any = true; break; }
        if (!any)
            throw std::runtime_error("lacunary_field: no lattice modes on shell j=" + std::to_string(j));
        // the shell sits on the phi_j plateau, so Delta_j of it is itself and
        // one homogeneous rescale is exact
        TorusField shell = TorusField::from_spectral(grid, dim, std::move(spec));
        const double measured = std::pow(2.0, alpha * j) * lebesgue_norm(shell, p_target);
        if (measured == 0.0)
            throw std::runtime_error("lacunary_field: degenerate shell j=" + std::to_string(j));
        const double scale = target / measured;
        auto s = shell.spectral_all();
        for (std::size_t i = 0; i < total.size(); ++i) total[i] += scale * s[i];
    }

    GeneratedField out{TorusField::from_spectral(grid, dim, std::move(total)), std::move(cert)};
    // certify by re-measuring through the norms path
    for (int j = 1; j <= jn; ++j) {
        TorusField blk = part.block(out.field, j);
        out.certificate.measured_dj.push_back(std::pow(2.0, alpha * j) *
                                              lebesgue_norm(blk, p_target));
    }
    for (int j = 1; j <= jn; ++j) {
        const double want = planted_dj[static_cast<std::size_t>(j - 1)];
        const double got = out.certificate.measured_dj[static_cast<std::size_t>(j - 1)];
        if (want > 0.0 && std::abs(got - want) > 0.05 * want)
            throw std::runtime_error("lacunary_field: planted d_j not reached at j=" +
                                     std::to_string(j));
    }
    return out;
}

TorusField random_smooth_field(const TorusGrid& grid, double decay_rate, std::uint64_t seed) {
    if (decay_rate <= 1.0) throw std::domain_error("random_smooth_field: decay_rate must be > 1");
    const double band = grid.dealias_radius();
    auto spec = random_divfree_spectrum(grid, seed, [&](double kr) {
        return (kr > 0.0 && kr <= band) ? std::pow(1.0 + kr, -decay_rate) : 0.0;
    });
    return TorusField::from_spectral(grid, grid.dim(), std::move(spec));
}

TorusField power_law_field(const TorusGrid& grid, double exponent, std::uint64_t seed,
                           double band) {
    const double cut = band < 0.0 ? grid.dealias_radius() : band;
    auto spec = random_divfree_spectrum(grid, seed, [&](double kr) {
        return (kr >= 1.0 && kr <= cut) ? std::pow(kr, -exponent) : 0.0;
    });
    return TorusField::from_spectral(grid, grid.dim(), std::move(spec));
}

TorusField random_scalar_field(const TorusGrid& grid, double decay_rate, std::uint64_t seed) {
    const double band = grid.dealias_radius();
    const std::size_t m = grid.size();
    const int n = grid.n();
    std::vector<cplx> spec(m, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < m; ++i) {
        auto idx = grid.unflatten(i);
        std::array<int, 3> k{0, 0, 0};
        for (int a = 0; a < grid.dim(); ++a) k[static_cast<std::size_t>(a)] = grid.wavenumber(idx[static_cast<std::size_t>(a)]);
        if (!canonical_mode(k, grid.dim())) continue;
        const double kr = std::sqrt(static_cast<double>(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]));
        if (kr == 0.0 || kr > band) continue;
        SplitMix64 rng(mode_key(seed, grid, i));
        const double phase = kTwoPi * rng.uniform();
        const cplx c = std::pow(1.0 + kr, -decay_rate) * cplx{std::cos(phase), std::sin(phase)};
        std::size_t iconj = 0;
        for (int a = 0; a < grid.dim(); ++a) {
            int kk = -k[static_cast<std::size_t>(a)];
            int ii = kk >= 0 ? kk : kk + n;
            iconj = iconj * static_cast<std::size_t>(n) + static_cast<std::size_t>(ii);
        }
        spec[i] = 0.5 * c;
        spec[iconj] = 0.5 * std::conj(c);
    }
    return TorusField::from_spectral(grid, 1, std::move(spec));
}

} // namespace torusflux

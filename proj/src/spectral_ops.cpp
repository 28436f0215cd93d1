#include "torusflux/spectral_ops.hpp"

#include <cmath>
#include <stdexcept>

#include "torusflux/fft.hpp"
#include "torusflux/kernels.hpp"

namespace torusflux {

TorusField partial_derivative(const TorusField& f, int axis) {
    const auto& g = f.grid();
    if (axis < 0 || axis >= g.dim()) throw std::out_of_range("partial_derivative: axis");
    const std::size_t m = g.size();
    std::vector<cplx> out(m * static_cast<std::size_t>(f.ncomp()));
    for (int c = 0; c < f.ncomp(); ++c) {
        auto in = f.spectral(c);
        cplx* o = out.data() + static_cast<std::size_t>(c) * m;
        for_each_mode(g, [&](std::size_t i, const std::array<double, 3>& k) {
            o[i] = cplx{0.0, k[static_cast<std::size_t>(axis)]} * in[i];
        });
    }
    return TorusField::from_spectral(g, f.ncomp(), std::move(out));
}

TorusField gradient(const TorusField& f) {
    if (f.ncomp() != 1) throw std::invalid_argument("gradient: scalar field expected");
    const auto& g = f.grid();
    const std::size_t m = g.size();
    std::vector<cplx> out(m * static_cast<std::size_t>(g.dim()));
    auto in = f.spectral(0);
    for (int a = 0; a < g.dim(); ++a) {
        cplx* o = out.data() + static_cast<std::size_t>(a) * m;
        for_each_mode(g, [&](std::size_t i, const std::array<double, 3>& k) {
            o[i] = cplx{0.0, k[static_cast<std::size_t>(a)]} * in[i];
        });
    }
    return TorusField::from_spectral(g, g.dim(), std::move(out));
}

TorusField divergence(const TorusField& v) {
    const auto& g = v.grid();
    if (v.ncomp() != g.dim()) throw std::invalid_argument("divergence: vector field expected");
    const std::size_t m = g.size();
    std::vector<cplx> out(m, cplx{0.0, 0.0});
    for (int a = 0; a < g.dim(); ++a) {
        auto in = v.spectral(a);
        for_each_mode(g, [&](std::size_t i, const std::array<double, 3>& k) {
            out[i] += cplx{0.0, k[static_cast<std::size_t>(a)]} * in[i];
        });
    }
    return TorusField::from_spectral(g, 1, std::move(out));
}

TorusField curl(const TorusField& v) {
    const auto& g = v.grid();
    if (v.ncomp() != g.dim()) throw std::invalid_argument("curl: vector field expected");
    const std::size_t m = g.size();
    if (g.dim() == 2) {
        std::vector<cplx> out(m);
        auto vx = v.spectral(0);
        auto vy = v.spectral(1);
        for_each_mode(g, [&](std::size_t i, const std::array<double, 3>& k) {
            out[i] = cplx{0.0, 1.0} * (k[0] * vy[i] - k[1] * vx[i]);
        });
        return TorusField::from_spectral(g, 1, std::move(out));
    }
    std::vector<cplx> out(3 * m);
    auto v0 = v.spectral(0);
    auto v1 = v.spectral(1);
    auto v2 = v.spectral(2);
    for_each_mode(g, [&](std::size_t i, const std::array<double, 3>& k) {
        const cplx I{0.0, 1.0};
        out[i] = I * (k[1] * v2[i] - k[2] * v1[i]);
        out[m + i] = I * (k[2] * v0[i] - k[0] * v2[i]);
        out[2 * m + i] = I * (k[0] * v1[i] - k[1] * v0[i]);
    });
    return TorusField::from_spectral(g, 3, std::move(out));
}

TorusField leray_project(const TorusField& v) {
    const auto& g = v.grid();
    if (v.ncomp() != g.dim()) throw std::invalid_argument("leray_project: vector field expected");
    const std::size_t m = g.size();
    const int dim = g.dim();
    std::vector<cplx> out(m * static_cast<std::size_t>(dim));
    std::vector<std::span<const cplx>> in;
    for (int c = 0; c < dim; ++c) in.push_back(v.spectral(c));
    for_each_mode(g, [&](std::size_t i, const std::array<double, 3>& k) {
        double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        if (k2 == 0.0) {
            for (int c = 0; c < dim; ++c) out[static_cast<std::size_t>(c) * m + i] = in[static_cast<std::size_t>(c)][i];
            return;
        }
        cplx kdotv{0.0, 0.0};
        for (int c = 0; c < dim; ++c) kdotv += k[static_cast<std::size_t>(c)] * in[static_cast<std::size_t>(c)][i];
        kdotv /= k2;
        for (int c = 0; c < dim; ++c)
            out[static_cast<std::size_t>(c) * m + i] = in[static_cast<std::size_t>(c)][i] - k[static_cast<std::size_t>(c)] * kdotv;
    });
    return TorusField::from_spectral(g, dim, std::move(out));
}

TorusField velocity_from_vorticity_2d(const TorusField& omega) {
    const auto& g = omega.grid();
    if (g.dim() != 2 || omega.ncomp() != 1)
        throw std::invalid_argument("velocity_from_vorticity_2d: 2D scalar vorticity expected");
    const std::size_t m = g.size();
    std::vector<cplx> out(2 * m, cplx{0.0, 0.0});
    auto w = omega.spectral(0);
    for_each_mode(g, [&](std::size_t i, const std::array<double, 3>& k) {
        double k2 = k[0] * k[0] + k[1] * k[1];
        if (k2 == 0.0) return;
        const cplx I{0.0, 1.0};
        out[i] = I * k[1] * w[i] / k2;
        out[m + i] = -I * k[0] * w[i] / k2;
    });
    return TorusField::from_spectral(g, 2, std::move(out));
}

TorusField component(const TorusField& f, int c) {
    auto s = f.spectral(c);
    return TorusField::from_spectral(f.grid(), 1, std::vector<cplx>(s.begin(), s.end()));
}

TorusField assemble(const std::vector<TorusField>& comps) {
    if (comps.empty()) throw std::invalid_argument("assemble: no components");
    const auto& g = comps.front().grid();
    const std::size_t m = g.size();
    std::vector<cplx> out;
    out.reserve(m * comps.size());
    for (const auto& f : comps) {
        if (f.grid() != g || f.ncomp() != 1) throw std::invalid_argument("assemble: mismatch");
        auto s = f.spectral(0);
        out.insert(out.end(), s.begin(), s.end());
    }
    return TorusField::from_spectral(g, static_cast<int>(comps.size()), std::move(out));
}

std::vector<TorusField> jacobian(const TorusField& f) {
    std::vector<TorusField> out;
    for (int c = 0; c < f.ncomp(); ++c) {
        TorusField fc = f.ncomp() == 1 ? f : component(f, c);
        for (int a = 0; a < f.grid().dim(); ++a) out.push_back(partial_derivative(fc, a));
    }
    return out;
}

TorusField shift(const TorusField& f, const std::array<double, 3>& y) {
    const auto& g = f.grid();
    const std::size_t m = g.size();
    std::vector<cplx> out(m * static_cast<std::size_t>(f.ncomp()));
    for (int c = 0; c < f.ncomp(); ++c) {
        auto in = f.spectral(c);
        cplx* o = out.data() + static_cast<std::size_t>(c) * m;
        for_each_mode(g, [&](std::size_t i, const std::array<double, 3>& k) {
            const double ph = -(k[0] * y[0] + k[1] * y[1] + k[2] * y[2]);
            o[i] = in[i] * cplx{std::cos(ph), std::sin(ph)};
        });
    }
    return TorusField::from_spectral(g, f.ncomp(), std::move(out));
}

TorusField add_scaled(const TorusField& a, double s, const TorusField& b) {
    if (a.grid() != b.grid() || a.ncomp() != b.ncomp())
        throw std::invalid_argument("add_scaled: mismatch");
    auto sa = a.spectral_all();
    auto sb = b.spectral_all();
    std::vector<cplx> out(sa.begin(), sa.end());
    kernels::axpy(out, s, sb);
    return TorusField::from_spectral(a.grid(), a.ncomp(), std::move(out));
}

TorusField scaled(const TorusField& f, double s) {
    auto sf = f.spectral_all();
    std::vector<cplx> out(sf.begin(), sf.end());
    kernels::scale(out, s);
    return TorusField::from_spectral(f.grid(), f.ncomp(), std::move(out));
}

TorusField pointwise_product(const TorusField& f, const TorusField& g) {
    if (f.grid() != g.grid()) throw std::invalid_argument("pointwise_product: grid mismatch");
    const std::size_t m = f.grid().size();
    if (f.ncomp() == g.ncomp()) {
        std::vector<double> out(m * static_cast<std::size_t>(f.ncomp()));
        for (int c = 0; c < f.ncomp(); ++c)
            kernels::multiply(std::span<double>(out).subspan(static_cast<std::size_t>(c) * m, m),
                              f.physical(c), g.physical(c));
        return TorusField::from_physical(f.grid(), f.ncomp(), std::move(out));
    }
    const TorusField& sc = f.ncomp() == 1 ? f : g;
    const TorusField& vec = f.ncomp() == 1 ? g : f;
    if (sc.ncomp() != 1) throw std::invalid_argument("pointwise_product: ncomp mismatch");
    std::vector<double> out(m * static_cast<std::size_t>(vec.ncomp()));
    for (int c = 0; c < vec.ncomp(); ++c)
        kernels::multiply(std::span<double>(out).subspan(static_cast<std::size_t>(c) * m, m),
                          sc.physical(0), vec.physical(c));
    return TorusField::from_physical(vec.grid(), vec.ncomp(), std::move(out));
}

std::vector<cplx> embed_spectrum(const TorusGrid& grid, std::span<const cplx> spec, int nbig) {
    const int n = grid.n();
    const int dim = grid.dim();
    std::size_t big = 1;
    for (int a = 0; a < dim; ++a) big *= static_cast<std::size_t>(nbig);
    std::vector<cplx> out(big, cplx{0.0, 0.0});
    const auto& wave = grid.wavenumbers();
    auto big_index = [&](int k) { return k >= 0 ? k : k + nbig; };
    if (dim == 2) {
        for (int i0 = 0; i0 < n; ++i0) {
            std::size_t r0 = static_cast<std::size_t>(big_index(wave[static_cast<std::size_t>(i0)])) *
                             static_cast<std::size_t>(nbig);
            for (int i1 = 0; i1 < n; ++i1)
                out[r0 + static_cast<std::size_t>(big_index(wave[static_cast<std::size_t>(i1)]))] =
                    spec[static_cast<std::size_t>(i0) * n + static_cast<std::size_t>(i1)];
        }
    } else {
        for (int i0 = 0; i0 < n; ++i0)
            for (int i1 = 0; i1 < n; ++i1) {
                std::size_t base =
                    (static_cast<std::size_t>(big_index(wave[static_cast<std::size_t>(i0)])) *
                         static_cast<std::size_t>(nbig) +
                     static_cast<std::size_t>(big_index(wave[static_cast<std::size_t>(i1)]))) *
                    static_cast<std::size_t>(nbig);
                std::size_t src = (static_cast<std::size_t>(i0) * n + static_cast<std::size_t>(i1)) * n;
                for (int i2 = 0; i2 < n; ++i2)
                    out[base + static_cast<std::size_t>(big_index(wave[static_cast<std::size_t>(i2)]))] =
                        spec[src + static_cast<std::size_t>(i2)];
            }
    }
    return out;
}

std::vector<cplx> restrict_spectrum(int dim, int nbig, std::span<const cplx> spec, int nsmall) {
    std::size_t small = 1;
    for (int a = 0; a < dim; ++a) small *= static_cast<std::size_t>(nsmall);
    std::vector<cplx> out(small, cplx{0.0, 0.0});
    const int half = nsmall / 2;
    auto big_index = [&](int k) { return k >= 0 ? k : k + nbig; };
    auto small_index = [&](int k) { return k >= 0 ? k : k + nsmall; };
    // Nyquist row k = -nsmall/2 is dropped to keep conjugate symmetry
    if (dim == 2) {
        for (int k0 = -half + 1; k0 < half; ++k0)
            for (int k1 = -half + 1; k1 < half; ++k1)
                out[static_cast<std::size_t>(small_index(k0)) * nsmall +
                    static_cast<std::size_t>(small_index(k1))] =
                    spec[static_cast<std::size_t>(big_index(k0)) * nbig +
                         static_cast<std::size_t>(big_index(k1))];
    } else {
        for (int k0 = -half + 1; k0 < half; ++k0)
            for (int k1 = -half + 1; k1 < half; ++k1)
                for (int k2 = -half + 1; k2 < half; ++k2)
                    out[(static_cast<std::size_t>(small_index(k0)) * nsmall +
                         static_cast<std::size_t>(small_index(k1))) *
                            nsmall +
                        static_cast<std::size_t>(small_index(k2))] =
                        spec[(static_cast<std::size_t>(big_index(k0)) * nbig +
                              static_cast<std::size_t>(big_index(k1))) *
                                 nbig +
                             static_cast<std::size_t>(big_index(k2))];
    }
    return out;
}

TorusField dealiased_product(const TorusField& f, const TorusField& g) {
    if (f.grid() != g.grid()) throw std::invalid_argument("dealiased_product: grid mismatch");
    if (f.ncomp() != 1 || g.ncomp() != 1)
        throw std::invalid_argument("dealiased_product: scalar fields expected");
    const auto& grid = f.grid();
    const int n = grid.n();
    const int dim = grid.dim();
    const int np = 3 * n / 2;
    std::size_t big = 1;
    for (int a = 0; a < dim; ++a) big *= static_cast<std::size_t>(np);

    auto fa = embed_spectrum(grid, f.spectral(0), np);
    auto ga = embed_spectrum(grid, g.spectral(0), np);
    std::vector<cplx> fp(big), gp(big);
    fft::backward(fa, fp, dim, np);
    fft::backward(ga, gp, dim, np);
    const std::ptrdiff_t bn = static_cast<std::ptrdiff_t>(big);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < bn; ++i)
        fp[i] = cplx{fp[i].real() * gp[i].real(), 0.0};
    fft::forward(fp, gp, dim, np);
    kernels::scale(gp, 1.0 / static_cast<double>(big));
    return TorusField::from_spectral(grid, 1, restrict_spectrum(dim, np, gp, n));
}

double integral_pairing(const TorusField& a, const TorusField& b) {
    if (a.grid() != b.grid() || a.ncomp() != b.ncomp())
        throw std::invalid_argument("integral_pairing: mismatch");
    return a.grid().volume() * kernels::dot_re(a.spectral_all(), b.spectral_all());
}

TorusField dealias(const TorusField& f) {
    const auto& g = f.grid();
    const double band = g.dealias_radius();
    const std::size_t m = g.size();
    std::vector<cplx> out(f.spectral_all().begin(), f.spectral_all().end());
    for (int c = 0; c < f.ncomp(); ++c) {
        cplx* o = out.data() + static_cast<std::size_t>(c) * m;
        for_each_mode(g, [&](std::size_t i, const std::array<double, 3>& k) {
            if (k[0] * k[0] + k[1] * k[1] + k[2] * k[2] > band * band) o[i] = cplx{0.0, 0.0};
        });
    }
    return TorusField::from_spectral(g, f.ncomp(), std::move(out));
}

bool band_limited_below(const TorusField& f, double band, double tol) {
    const auto& g = f.grid();
    const std::size_t m = g.size();
    double maxc = 0.0;
    for (const auto& v : f.spectral_all()) maxc = std::max(maxc, std::abs(v));
    if (maxc == 0.0) return true;
    bool ok = true;
    for (int c = 0; c < f.ncomp(); ++c) {
        auto s = f.spectral(c);
        for (std::size_t i = 0; i < m; ++i) {
            auto idx = g.unflatten(i);
            double k2 = 0.0;
            for (int a = 0; a < g.dim(); ++a) {
                double k = g.wavenumber(idx[static_cast<std::size_t>(a)]);
                k2 += k * k;
            }
            if (k2 >= band * band && std::abs(s[i]) > tol * maxc) ok = false;
        }
    }
    return ok;
}

double Oversampled::lp(double p) const {
    if (std::isinf(p)) return max_abs();
    double s = (ncomp == 1) ? kernels::lp_sum(samples, p)
                            : kernels::lp_sum_vec(samples, static_cast<std::size_t>(ncomp), p);
    return std::pow(cell * s, 1.0 / p);
}

double Oversampled::max_abs() const {
    if (ncomp == 1) return kernels::max_abs(samples);
    std::size_t m = samples.size() / static_cast<std::size_t>(ncomp);
    std::vector<double> mag(m);
    kernels::pointwise_norm(mag, samples, static_cast<std::size_t>(ncomp));
    return kernels::max_abs(mag);
}

Oversampled oversample(const TorusField& f, int factor) {
    const auto& g = f.grid();
    const int n = g.n() * factor;
    const int dim = g.dim();
    std::size_t big = 1;
    for (int a = 0; a < dim; ++a) big *= static_cast<std::size_t>(n);

    Oversampled out;
    out.dim = dim;
    out.ncomp = f.ncomp();
    out.n = n;
    out.cell = 1.0;
    for (int a = 0; a < dim; ++a) out.cell *= kTwoPi / n;
    out.samples.resize(big * static_cast<std::size_t>(f.ncomp()));

    std::vector<cplx> buf(big);
    for (int c = 0; c < f.ncomp(); ++c) {
        auto spec = embed_spectrum(g, f.spectral(c), n);
        fft::backward(spec, buf, dim, n);
        double* dst = out.samples.data() + static_cast<std::size_t>(c) * big;
        const std::ptrdiff_t bn = static_cast<std::ptrdiff_t>(big);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < bn; ++i) dst[i] = buf[i].real();
    }
    return out;
}

} // namespace torusflux
